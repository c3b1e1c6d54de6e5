#include "dealersim/tick_series.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "dealersim/errors.hpp"

namespace dealersim {

std::string format_double(double v) {
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_ticks_csv(std::ostream& os, const TickSeries& series) {
    os << "u,price\n";
    for (Eigen::Index u = 0; u < series.size(); ++u) os << u << ',' << format_double(series.prices[u]) << '\n';
}

void write_ticks_csv(const std::filesystem::path& path, const TickSeries& series) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    write_ticks_csv(os, series);
    if (!os) throw IoError("write failed: " + path.string());
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

TickSeries read_ticks_csv(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line)) throw ParseError(1, "empty file, expected header `u,price`");
    ++lineno;
    if (trim(line) != "u,price") throw ParseError(lineno, "expected header `u,price`");

    std::vector<double> prices;
    long long prev_u = -1;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw ParseError(lineno, "expected two comma-separated fields");
        long long u = 0;
        double price = 0.0;
        if (!parse_number(row.substr(0, comma), u)) throw ParseError(lineno, "malformed tick index");
        if (!parse_number(row.substr(comma + 1), price)) throw ParseError(lineno, "malformed price");
        if (u <= prev_u) throw ParseError(lineno, "tick indices must be strictly increasing");
        prev_u = u;
        prices.push_back(price);
    }
    TickSeries out;
    out.prices = Eigen::Map<const VectorXd>(prices.data(), static_cast<Eigen::Index>(prices.size()));
    return out;
}

TickSeries read_ticks_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    return read_ticks_csv(is);
}

VectorXd centered_moving_average(const VectorXd& prices, int width) {
    if (width < 1 || width % 2 == 0) throw ConfigError("smoothing", "width must be a positive odd integer");
    if (width == 1) return prices;
    const Eigen::Index n = prices.size();
    if (n < width) throw InsufficientHistory(static_cast<std::size_t>(width), static_cast<std::size_t>(n));
    VectorXd out(n - width + 1);
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = prices.segment(i, width).mean();
    return out;
}

TickSeries ingest_ticks(const std::filesystem::path& path, int smoothing_width) {
    TickSeries s = read_ticks_csv(path);
    s.prices = centered_moving_average(s.prices, smoothing_width);
    return s;
}

}  // namespace dealersim
