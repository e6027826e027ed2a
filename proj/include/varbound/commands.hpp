#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "varbound/scenario.hpp"

namespace varbound {

// Exit codes shared by every subcommand: 0 success, 1 internal invariant or
// verification failure, 2 parse/validation/usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct BoundsCommand {
  std::filesystem::path scenario_path;
  std::optional<BasisMode> basis_override;
};

struct SweepCommand {
  std::filesystem::path scenario_path;
  double theta_start = 0.0;
  double theta_end = 0.0;
  int steps = 0;
  std::filesystem::path output_path;
};

struct OptimizeCommand {
  std::filesystem::path scenario_path;
  std::string kind;  // "callebaut" or "milne"
  std::optional<double> lambda;
  std::optional<int> restarts;
  std::optional<std::uint64_t> seed;
};

struct VerifyCommand {
  std::uint64_t seed = 1;
  int trials = 500;
  bool inject_fault = false;  // harness hook: plants one failing check
};

int run_bounds(const BoundsCommand& cmd, std::ostream& out, std::ostream& err);
int run_sweep(const SweepCommand& cmd, std::ostream& out, std::ostream& err);
int run_optimize(const OptimizeCommand& cmd, std::ostream& out,
                 std::ostream& err);
int run_verify(const VerifyCommand& cmd, std::ostream& out, std::ostream& err);

}  // namespace varbound
