#include "hybridtherm/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>

#include "hybridtherm/error.hpp"

namespace hybridtherm {

namespace {

constexpr std::size_t kColumns = 14;

std::string cell(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::string sanitize(std::string s) {
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::optional<double> optional_cell(std::string_view s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) throw Error("could not format a double");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("not a number: '" + std::string(s) + "'");
    }
    return x;
}

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << format_double(r.axis[0]) << ',';
        if (r.axis_count > 1) out << format_double(r.axis[1]);
        out << ',' << format_double(r.N_c) << ',' << format_double(r.Q_c) << ',' << format_double(r.Q_h) << ','
            << format_double(r.Q_g) << ',' << format_double(r.W) << ',' << format_double(r.S_tot) << ','
            << sanitize(r.regime) << ',' << cell(r.eta) << ',' << cell(r.eta_E) << ',' << cell(r.eta_R) << ','
            << cell(r.eta_P) << ',' << sanitize(r.error) << '\n';
    }
}

std::vector<SweepRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ValidationError("unexpected CSV header");
    std::vector<SweepRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != kColumns) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(kColumns) +
                                  " cells, got " + std::to_string(cells.size()));
        }
        SweepRecord r;
        r.axis[0] = parse_double(cells[0]);
        r.axis_count = cells[1].empty() ? 1 : 2;
        if (r.axis_count == 2) r.axis[1] = parse_double(cells[1]);
        r.N_c = parse_double(cells[2]);
        r.Q_c = parse_double(cells[3]);
        r.Q_h = parse_double(cells[4]);
        r.Q_g = parse_double(cells[5]);
        r.W = parse_double(cells[6]);
        r.S_tot = parse_double(cells[7]);
        r.regime = std::string(cells[8]);
        r.eta = optional_cell(cells[9]);
        r.eta_E = optional_cell(cells[10]);
        r.eta_R = optional_cell(cells[11]);
        r.eta_P = optional_cell(cells[12]);
        r.error = std::string(cells[13]);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace hybridtherm
