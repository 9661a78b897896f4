#pragma once
// Minimal tab-separated reader over an in-memory file image.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace breakscan::tsv {

std::string read_file(const std::string& path);

// Iterates the lines of a buffer; strips a trailing '\r'.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line);
    std::size_t line_number() const { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

// Splits on '\t' into `out` (cleared first). Empty fields are kept.
void split(std::string_view line, std::vector<std::string_view>& out, char sep = '\t');

bool parse_int(std::string_view s, std::int64_t& out);
bool parse_double(std::string_view s, double& out);

// Shortest round-trippable decimal form.
std::string format_double(double v);
// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

} // namespace breakscan::tsv
