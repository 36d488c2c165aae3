#include "skyfeel/task.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skyfeel/geometry.hpp"

namespace skyfeel {

void SyntheticTask::finalize() {
    if (num_uavs == 0 || dim == 0)
        throw std::invalid_argument("SyntheticTask: empty task");
    if (h_diag.size() != num_uavs || centers.size() != num_uavs ||
        sigma.size() != num_uavs || w0.size() != dim)
        throw std::invalid_argument("SyntheticTask: inconsistent field sizes");

    equal_hessians = true;
    for (std::size_t k = 1; k < num_uavs; ++k)
        if (h_diag[k] != h_diag[0]) equal_hessians = false;

    smoothness_l = 0.0;
    strong_convexity_mu = std::numeric_limits<double>::infinity();
    for (const auto& h : h_diag)
        for (double v : h) {
            if (!(v > 0.0)) throw std::domain_error("SyntheticTask: Hessian must be positive");
            smoothness_l = std::max(smoothness_l, v);
            strong_convexity_mu = std::min(strong_convexity_mu, v);
        }

    // w*_i = sum_k h_k[i] c_k[i] / sum_k h_k[i] (diagonal Hessians)
    w_star.assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < num_uavs; ++k) {
            num += h_diag[k][i] * centers[k][i];
            den += h_diag[k][i];
        }
        w_star[i] = num / den;
    }
    f_star = loss(w_star);

    // at w* the global gradient vanishes, so Lambda_k^2 = ||H_k (w* - c_k)||^2
    lambda2.assign(num_uavs, 0.0);
    for (std::size_t k = 0; k < num_uavs; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double g = h_diag[k][i] * (w_star[i] - centers[k][i]);
            acc += g * g;
        }
        lambda2[k] = acc;
    }
    initial_gap = gap(w0);
}

void SyntheticTask::local_grad(std::size_t k, const std::vector<double>& w,
                               std::vector<double>& out) const {
    out.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
        out[i] = h_diag[k][i] * (w[i] - centers[k][i]);
}

void SyntheticTask::stochastic_grad(std::size_t k, const std::vector<double>& w,
                                    double delta, Rng& rng,
                                    std::vector<double>& out) const {
    local_grad(k, w, out);
    const double stddev = sigma[k] / std::sqrt(delta * static_cast<double>(dim));
    for (std::size_t i = 0; i < dim; ++i) out[i] += stddev * rng.normal();
}

double SyntheticTask::loss(const std::vector<double>& w) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < num_uavs; ++k)
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = w[i] - centers[k][i];
            acc += 0.5 * h_diag[k][i] * d * d;
        }
    return acc / static_cast<double>(num_uavs);
}

SyntheticTask make_task(std::size_t k_uavs, std::size_t dim, double heterogeneity,
                        const std::vector<double>& sigma, std::uint64_t seed,
                        double smoothness_l, double strong_convexity_mu,
                        double initial_gap) {
    if (k_uavs == 0 || dim == 0)
        throw std::invalid_argument("make_task: need K >= 1, dim >= 1");
    if (heterogeneity < 0.0)
        throw std::domain_error("make_task: heterogeneity must be >= 0");
    if (sigma.size() != k_uavs)
        throw std::invalid_argument("make_task: one sigma per UAV required");
    if (!(strong_convexity_mu > 0.0) || strong_convexity_mu > smoothness_l)
        throw std::domain_error("make_task: need 0 < mu <= L");

    SyntheticTask task;
    task.num_uavs = k_uavs;
    task.dim = dim;
    task.sigma = sigma;

    // shared spectrum: top two coordinates at L (the heterogeneity plane),
    // remaining coordinates interpolate down to mu
    std::vector<double> spectrum(dim, smoothness_l);
    if (dim == 1) {
        spectrum[0] = smoothness_l;
    } else {
        for (std::size_t i = 2; i < dim; ++i) {
            const double t = static_cast<double>(i - 1) / static_cast<double>(dim - 2);
            spectrum[i] = smoothness_l + t * (strong_convexity_mu - smoothness_l);
        }
        if (dim > 2) spectrum[dim - 1] = strong_convexity_mu;
        if (dim == 2) spectrum[1] = smoothness_l;  // keep the plane isotropic
    }
    if (strong_convexity_mu == smoothness_l)
        std::fill(spectrum.begin(), spectrum.end(), smoothness_l);
    task.h_diag.assign(k_uavs, spectrum);

    // local optima on a circle of radius h/L in the top eigenplane: the
    // displacements sum to zero, so w* = 0, and |H shift| = h for every UAV
    Rng rng(seed, 0x7a5bULL);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    task.centers.assign(k_uavs, std::vector<double>(dim, 0.0));
    if (heterogeneity > 0.0 && k_uavs > 1) {
        const double radius = heterogeneity / smoothness_l;
        for (std::size_t k = 0; k < k_uavs; ++k) {
            const double ang =
                phase + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(k_uavs);
            task.centers[k][0] = radius * std::cos(ang);
            if (dim > 1) task.centers[k][1] = radius * std::sin(ang);
        }
        if (dim == 1)
            for (std::size_t k = 0; k < k_uavs; ++k)
                task.centers[k][0] =
                    radius * std::cos(2.0 * kPi * static_cast<double>(k) /
                                      static_cast<double>(k_uavs));
    }

    // initial point: equal offset on every coordinate, scaled to the target gap
    task.w0.assign(dim, 0.0);
    if (initial_gap > 0.0) {
        double mean_h = 0.0;
        for (double v : spectrum) mean_h += v;
        mean_h /= static_cast<double>(dim);
        const double t = std::sqrt(2.0 * initial_gap / (mean_h * static_cast<double>(dim)));
        std::fill(task.w0.begin(), task.w0.end(), t);
    }

    task.finalize();

    // the circle construction misses the requested gap only through the
    // centers' own contribution to F(w0); correct with one rescale
    if (initial_gap > 0.0 && task.initial_gap > 0.0) {
        const double scale = std::sqrt(initial_gap / task.initial_gap);
        for (double& v : task.w0) v *= scale;
        task.finalize();
    }
    return task;
}

ConstantEstimates estimate_constants(const SyntheticTask& task,
                                     const std::vector<double>& w_ref, double batch,
                                     std::size_t draws, std::uint64_t seed) {
    if (draws < 100)
        throw std::invalid_argument("estimate_constants: need at least 100 draws");
    const std::size_t k_uavs = task.num_uavs, dim = task.dim;
    ConstantEstimates est;
    est.sigma2.assign(k_uavs, 0.0);
    est.lambda2.assign(k_uavs, 0.0);

    std::vector<double> mean_grad(dim, 0.0), g(dim), gk(dim);
    std::vector<std::vector<double>> exact(k_uavs);
    for (std::size_t k = 0; k < k_uavs; ++k) {
        task.local_grad(k, w_ref, exact[k]);
        for (std::size_t i = 0; i < dim; ++i) mean_grad[i] += exact[k][i];
    }
    for (double& v : mean_grad) v /= static_cast<double>(k_uavs);

    Rng rng(seed, 0xe57aULL);
    for (std::size_t k = 0; k < k_uavs; ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n < draws; ++n) {
            task.stochastic_grad(k, w_ref, batch, rng, g);
            for (std::size_t i = 0; i < dim; ++i) {
                const double d = g[i] - exact[k][i];
                acc += d * d;
            }
        }
        est.sigma2[k] = batch * acc / static_cast<double>(draws);
        double het = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = exact[k][i] - mean_grad[i];
            het += d * d;
        }
        est.lambda2[k] = het;
    }

    // curvature probes: (grad F_k(w + h e_i) - grad F_k(w))_i / h
    const double h = 1e-4;
    est.smoothness_l = 0.0;
    est.strong_convexity_mu = std::numeric_limits<double>::infinity();
    std::vector<double> w_probe = w_ref;
    for (std::size_t k = 0; k < k_uavs; ++k) {
        for (std::size_t i = 0; i < dim; ++i) {
            w_probe[i] = w_ref[i] + h;
            task.local_grad(k, w_probe, gk);
            const double curv = (gk[i] - exact[k][i]) / h;
            est.smoothness_l = std::max(est.smoothness_l, curv);
            est.strong_convexity_mu = std::min(est.strong_convexity_mu, curv);
            w_probe[i] = w_ref[i];
        }
    }
    return est;
}

}  // namespace skyfeel
