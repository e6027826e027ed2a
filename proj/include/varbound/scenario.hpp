#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "varbound/basisopt.hpp"
#include "varbound/bounds.hpp"
#include "varbound/scenarios.hpp"
#include "varbound/types.hpp"

namespace varbound {

/// Malformed or invalid user input; maps to CLI exit code 2.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  Eigen::Index dimension;
  HermitianObservable observable_a;
  HermitianObservable observable_b;
  PureState state;
  std::optional<double> theta;  // set when the state came from the theta preset
  std::vector<Weight> weights;
  BasisMode basis = BasisMode::kStandard;
  OptimizerConfig optimizer;
};

/// Parses a scenario from JSON text. Observables are either presets
/// ("spin1_lx", "spin1_ly", "spin1_lz", "pauli_x", "pauli_y", "pauli_z") or
/// explicit matrices of [re, im] pairs; the state is either the theta preset
/// or an explicit vector. All qcore construction invariants apply.
Scenario parse_scenario(const std::string& json_text);

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace varbound
