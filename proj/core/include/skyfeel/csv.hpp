#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace skyfeel {

/// Shortest round-trip decimal form of a double ('.' decimal point, "inf"
/// for infinities); used everywhere numbers land in text output so results
/// are byte-stable.
std::string format_double(double value);

/// Line-oriented CSV builder: one provenance comment line, a mandatory
/// header row, LF endings, locale-free formatting.
class CsvWriter {
public:
    CsvWriter(std::string config_hash, std::uint64_t seed);

    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }

    /// Writes the accumulated document to a file (binary mode, LF only).
    void save(const std::string& path) const;

private:
    std::string text_;
    std::size_t columns_ = 0;
};

/// Binary matrix dump: two little-endian uint64 (rows, cols) followed by
/// row-major doubles.
void write_matrix_file(const std::string& path, std::size_t rows, std::size_t cols,
                       const std::vector<double>& values);

struct MatrixFile {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
};

MatrixFile read_matrix_file(const std::string& path);

}  // namespace skyfeel
