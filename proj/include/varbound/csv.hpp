#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "varbound/scenarios.hpp"

namespace varbound {

/// 12 significant digits, trailing zeros kept ("%#.12g"); decidable against
/// every tolerance the bounds carry, and locale-independent.
std::string format_value(double v);

/// Shortest decimal that parses back to the exact double.
std::string format_exact(double v);

struct SweepTable {
  std::vector<double> lambdas;     // ascending, recovered from the header
  std::vector<double> l1_lambdas;  // present only with optimized columns
  bool has_l2 = false;
  std::vector<SweepRow> rows;
};

/// Writes rows as CSV with the header
///   theta,var_a,var_b,product,robertson,schrodinger,mbp,milne,
///   callebaut_<lambda>...  (lambda with 6 decimal places, ascending)
/// plus l1_<lambda>.../l2 columns when the rows carry optimized values.
/// theta is written round-trip exact; all other fields with 12 significant
/// digits. The file is written to a temporary and atomically renamed, so an
/// error never leaves a partial file at `path`.
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows);

SweepTable read_sweep_csv(const std::filesystem::path& path);

}  // namespace varbound
