#include "skyfeel/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "skyfeel/version.hpp"

namespace skyfeel {

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[40];
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", value);
        return buf;
    }
    // shortest representation that parses back to the same double
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

CsvWriter::CsvWriter(std::string config_hash, std::uint64_t seed) {
    text_ = "# skyfeel " + std::string(kVersion) + " config=" + std::move(config_hash) +
            " seed=" + std::to_string(seed) + "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    if (columns.empty()) throw std::invalid_argument("CsvWriter: empty header");
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns[i];
    }
    text_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::invalid_argument("CsvWriter: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path);
    out.write(text_.data(), static_cast<std::streamsize>(text_.size()));
}

void write_matrix_file(const std::string& path, std::size_t rows, std::size_t cols,
                       const std::vector<double>& values) {
    if (values.size() != rows * cols)
        throw std::invalid_argument("write_matrix_file: size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_matrix_file: cannot open " + path);
    auto write_u64 = [&out](std::uint64_t v) {
        unsigned char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
        out.write(reinterpret_cast<const char*>(bytes), 8);
    };
    write_u64(rows);
    write_u64(cols);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
}

MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_matrix_file: cannot open " + path);
    auto read_u64 = [&in]() {
        unsigned char bytes[8];
        in.read(reinterpret_cast<char*>(bytes), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
        return v;
    };
    MatrixFile m;
    m.rows = read_u64();
    m.cols = read_u64();
    if (!in) throw std::runtime_error("read_matrix_file: truncated header");
    m.values.resize(m.rows * m.cols);
    in.read(reinterpret_cast<char*>(m.values.data()),
            static_cast<std::streamsize>(m.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_matrix_file: truncated payload");
    return m;
}

}  // namespace skyfeel
