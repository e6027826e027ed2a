#include "varbound/scenario.hpp"

#include <complex>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace varbound {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

const json& require_field(const json& node, const std::string& where,
                          const std::string& key) {
  const auto it = node.find(key);
  if (it == node.end()) fail(where, "missing required field '" + key + "'");
  return *it;
}

void reject_unknown_keys(const json& node, const std::string& where,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : node.items()) {
    if (!known.contains(key)) fail(where, "unknown field '" + key + "'");
  }
}

std::complex<double> parse_complex(const json& node, const std::string& where) {
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() ||
      !node[1].is_number()) {
    fail(where, "complex entries must be [re, im] number pairs");
  }
  return {node[0].get<double>(), node[1].get<double>()};
}

MatrixXc parse_matrix(const json& node, const std::string& where,
                      Eigen::Index n) {
  if (!node.is_array() || static_cast<Eigen::Index>(node.size()) != n) {
    fail(where, "matrix must be an array of " + std::to_string(n) + " rows");
  }
  MatrixXc m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = node[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      fail(where, "row " + std::to_string(i) + " must have " +
                      std::to_string(n) + " entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = parse_complex(row[static_cast<std::size_t>(j)],
                              where + "[" + std::to_string(i) + "][" +
                                  std::to_string(j) + "]");
    }
  }
  return m;
}

HermitianObservable resolve_preset_observable(const std::string& name,
                                              const std::string& where,
                                              Eigen::Index n) {
  const auto check_dim = [&](Eigen::Index expected) {
    if (n != expected) {
      fail(where, "preset '" + name + "' has dimension " +
                      std::to_string(expected) +
                      " but the scenario dimension is " + std::to_string(n));
    }
  };
  if (name == "spin1_lx" || name == "spin1_ly" || name == "spin1_lz") {
    check_dim(3);
    const auto ops = spin1_operators();
    if (name == "spin1_lx") return ops.lx;
    if (name == "spin1_ly") return ops.ly;
    return ops.lz;
  }
  if (name == "pauli_x" || name == "pauli_y" || name == "pauli_z") {
    check_dim(2);
    const auto ops = pauli_operators();
    if (name == "pauli_x") return ops.x;
    if (name == "pauli_y") return ops.y;
    return ops.z;
  }
  fail(where, "unknown preset '" + name + "'");
}

HermitianObservable parse_observable(const json& node, const std::string& where,
                                     Eigen::Index n) {
  if (!node.is_object()) fail(where, "must be an object");
  reject_unknown_keys(node, where, {"preset", "matrix"});
  if (node.contains("preset") == node.contains("matrix")) {
    fail(where, "exactly one of 'preset' or 'matrix' is required");
  }
  if (node.contains("preset")) {
    if (!node["preset"].is_string()) fail(where, "'preset' must be a string");
    return resolve_preset_observable(node["preset"].get<std::string>(), where,
                                     n);
  }
  try {
    return HermitianObservable(parse_matrix(node["matrix"], where, n));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

struct ParsedState {
  PureState state;
  std::optional<double> theta;
};

ParsedState parse_state(const json& node, Eigen::Index n) {
  const std::string where = "state";
  if (!node.is_object()) fail(where, "must be an object");
  reject_unknown_keys(node, where, {"preset", "theta", "vector"});
  if (node.contains("preset") == node.contains("vector")) {
    fail(where, "exactly one of 'preset' or 'vector' is required");
  }
  if (node.contains("preset")) {
    if (!node["preset"].is_string() ||
        node["preset"].get<std::string>() != "theta") {
      fail(where, "the only state preset is 'theta'");
    }
    if (n != 3) fail(where, "the theta preset requires dimension 3");
    const json& theta_node = require_field(node, where, "theta");
    if (!theta_node.is_number()) fail(where, "'theta' must be a number");
    const double theta = theta_node.get<double>();
    try {
      return {theta_state(theta), theta};
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }
  if (node.contains("theta")) {
    fail(where, "'theta' only applies to the theta preset");
  }
  const json& vec = node["vector"];
  if (!vec.is_array() || static_cast<Eigen::Index>(vec.size()) != n) {
    fail(where, "vector must have " + std::to_string(n) + " entries");
  }
  VectorXc v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = parse_complex(vec[static_cast<std::size_t>(i)],
                         where + "[" + std::to_string(i) + "]");
  }
  try {
    return {PureState(v), std::nullopt};
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

std::vector<Weight> parse_weights(const json& node) {
  const std::string where = "weights";
  if (!node.is_array() || node.empty()) {
    fail(where, "must be a nonempty array of numbers in [0, 1]");
  }
  std::vector<Weight> weights;
  weights.reserve(node.size());
  for (std::size_t k = 0; k < node.size(); ++k) {
    if (!node[k].is_number()) {
      fail(where + "[" + std::to_string(k) + "]", "must be a number");
    }
    try {
      weights.emplace_back(node[k].get<double>());
    } catch (const std::invalid_argument& e) {
      fail(where + "[" + std::to_string(k) + "]", e.what());
    }
  }
  return weights;
}

OptimizerConfig parse_optimizer(const json& node) {
  const std::string where = "optimizer";
  OptimizerConfig cfg;
  if (!node.is_object()) fail(where, "must be an object");
  reject_unknown_keys(node, where,
                      {"restarts", "max_iterations", "tolerance", "seed"});
  if (node.contains("restarts")) {
    if (!node["restarts"].is_number_integer() ||
        node["restarts"].get<std::int64_t>() < 1) {
      fail(where, "'restarts' must be a positive integer");
    }
    cfg.restarts = node["restarts"].get<int>();
  }
  if (node.contains("max_iterations")) {
    if (!node["max_iterations"].is_number_integer() ||
        node["max_iterations"].get<std::int64_t>() < 1) {
      fail(where, "'max_iterations' must be a positive integer");
    }
    cfg.max_iterations = node["max_iterations"].get<int>();
  }
  if (node.contains("tolerance")) {
    if (!node["tolerance"].is_number() ||
        !(node["tolerance"].get<double>() > 0)) {
      fail(where, "'tolerance' must be a positive number");
    }
    cfg.tolerance = node["tolerance"].get<double>();
  }
  if (node.contains("seed")) {
    if (!node["seed"].is_number_unsigned() &&
        !(node["seed"].is_number_integer() &&
          node["seed"].get<std::int64_t>() >= 0)) {
      fail(where, "'seed' must be a nonnegative integer");
    }
    cfg.seed = node["seed"].get<std::uint64_t>();
  }
  return cfg;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }
  if (!root.is_object()) throw ScenarioError("scenario: root must be an object");
  reject_unknown_keys(root, "scenario",
                      {"dimension", "observable_a", "observable_b", "state",
                       "weights", "basis", "optimizer"});

  const json& dim_node = require_field(root, "scenario", "dimension");
  if (!dim_node.is_number_integer() || dim_node.get<std::int64_t>() < 1) {
    fail("dimension", "must be a positive integer");
  }
  const Eigen::Index n = dim_node.get<Eigen::Index>();

  HermitianObservable a = parse_observable(
      require_field(root, "scenario", "observable_a"), "observable_a", n);
  HermitianObservable b = parse_observable(
      require_field(root, "scenario", "observable_b"), "observable_b", n);
  ParsedState state = parse_state(require_field(root, "scenario", "state"), n);
  std::vector<Weight> weights =
      parse_weights(require_field(root, "scenario", "weights"));

  BasisMode basis = BasisMode::kStandard;
  if (root.contains("basis")) {
    if (!root["basis"].is_string()) fail("basis", "must be a string");
    const std::string mode = root["basis"].get<std::string>();
    if (mode == "standard") {
      basis = BasisMode::kStandard;
    } else if (mode == "optimized") {
      basis = BasisMode::kOptimized;
    } else {
      fail("basis", "must be 'standard' or 'optimized', got '" + mode + "'");
    }
  }

  OptimizerConfig optimizer;
  if (root.contains("optimizer")) {
    optimizer = parse_optimizer(root["optimizer"]);
  }

  return Scenario{n,
                  std::move(a),
                  std::move(b),
                  std::move(state.state),
                  state.theta,
                  std::move(weights),
                  basis,
                  optimizer};
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("scenario: cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace varbound
