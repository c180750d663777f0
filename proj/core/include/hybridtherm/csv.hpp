#pragma once

// Sweep records as CSV. Floats use the shortest decimal that reads back to
// the same double; absent values are empty cells.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hybridtherm/sweep.hpp"

namespace hybridtherm {

inline constexpr std::string_view kCsvHeader =
    "axis1,axis2,N_c,Q_c,Q_h,Q_g,W,S_tot,regime,eta,eta_E,eta_R,eta_P,error";

[[nodiscard]] std::string format_double(double x);

/// Parses a cell written by format_double. Throws ValidationError otherwise.
[[nodiscard]] double parse_double(std::string_view cell);

/// Writes the header and one line per record. Commas and newlines in the
/// error text are replaced so that every row has the same column count.
void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);

/// Reads a file produced by write_csv. T_r is not part of the format and
/// comes back as zero.
[[nodiscard]] std::vector<SweepRecord> read_csv(std::istream& in);

}  // namespace hybridtherm
