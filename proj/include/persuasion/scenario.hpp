#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "persuasion/dynamic.hpp"
#include "persuasion/game.hpp"
#include "persuasion/multireceiver.hpp"

namespace persuasion {

using nlohmann::json;

enum class ScenarioKind { kStatic, kDynamic, kMultiReceiver };

/// Sweep over one named scalar parameter: each value is written into every
/// listed path of the scenario JSON and the result re-parsed, one solve per
/// point.
struct SweepSpec {
  std::string name;
  std::vector<double> values;
  std::vector<json> paths;  // each path is an array of keys / indices
};

/// Stage cost template affine in k/n: Q_k = Q0 + (k/n) Q1 and likewise R_k.
struct AffinePlayerCost {
  Matrix Q0;
  Matrix Q1;
  Matrix R0;
  Matrix R1;

  PlayerCost at(int k, int n) const {
    const double w = static_cast<double>(k) / n;
    return PlayerCost{Q0 + w * Q1, R0 + w * R1};
  }
};

namespace detail {

inline const json& require_field(const json& j, const std::string& key,
                                 const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw ScenarioError(path.empty() ? key : path + "." + key,
                        "missing required field");
  }
  return j.at(key);
}

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline Matrix parse_matrix(const json& j, const std::string& path,
                           int want_rows = -1, int want_cols = -1) {
  if (!j.is_array() || j.empty()) {
    throw ScenarioError(path, "expected a non-empty array of rows");
  }
  const int rows = static_cast<int>(j.size());
  int cols = -1;
  Matrix m;
  for (int r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (!row.is_array() || row.empty()) {
      throw ScenarioError(path + "[" + std::to_string(r) + "]",
                          "expected a non-empty row of numbers");
    }
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<int>(row.size()) != cols) {
      throw ScenarioError(path + "[" + std::to_string(r) + "]",
                          "ragged rows");
    }
    for (int c = 0; c < cols; ++c) {
      if (!row.at(c).is_number()) {
        throw ScenarioError(path + "[" + std::to_string(r) + "][" +
                                std::to_string(c) + "]",
                            "expected a number");
      }
      m(r, c) = row.at(c).get<double>();
    }
  }
  if (want_rows >= 0 && m.rows() != want_rows) {
    throw ScenarioError(path, "expected " + std::to_string(want_rows) +
                                  " rows, got " + std::to_string(m.rows()));
  }
  if (want_cols >= 0 && m.cols() != want_cols) {
    throw ScenarioError(path, "expected " + std::to_string(want_cols) +
                                  " columns, got " + std::to_string(m.cols()));
  }
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Parsed, validated scenario. Parsing is strict: anything malformed fails
/// with the offending field path, and the typed specs are constructed
/// eagerly so invalid games never reach the solvers.
class ScenarioFile {
 public:
  static ScenarioFile parse(const json& j);

  static ScenarioFile load(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw ScenarioError(file_path, "cannot open scenario file");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ScenarioError(file_path, std::string("JSON parse error: ") +
                                         e.what());
    }
    ScenarioFile s = parse(j);
    if (s.name.empty()) {
      const auto slash = file_path.find_last_of('/');
      std::string stem = slash == std::string::npos
                             ? file_path
                             : file_path.substr(slash + 1);
      const auto dot = stem.find_last_of('.');
      s.name = dot == std::string::npos ? stem : stem.substr(0, dot);
    }
    return s;
  }

  /// Canonical JSON form; parse(to_json()) round-trips to the same scenario.
  json to_json() const;

  GameSpec to_game_spec() const {
    if (kind != ScenarioKind::kStatic) {
      throw ScenarioError("kind", "expected a static scenario");
    }
    return GameSpec(parse_prior(), static_senders, static_receiver);
  }

  DynamicGameSpec to_dynamic_spec() const;

  MultiReceiverSpec to_multireceiver_spec() const {
    if (kind != ScenarioKind::kMultiReceiver) {
      throw ScenarioError("kind", "expected a multireceiver scenario");
    }
    return MultiReceiverSpec(parse_prior(), mr_senders, mr_receivers.at(0),
                             mr_receivers.at(1));
  }

  /// Ordering as 0-based indices; identity when the file omits it.
  std::vector<int> ordering_or_default(int m) const {
    if (!ordering.empty()) {
      if (static_cast<int>(ordering.size()) != m) {
        throw ScenarioError("ordering", "expected " + std::to_string(m) +
                                            " sender indices");
      }
      return ordering;
    }
    std::vector<int> identity(m);
    std::iota(identity.begin(), identity.end(), 0);
    return identity;
  }

  /// Applies one sweep value to every sweep path and re-parses.
  ScenarioFile materialize(double value) const {
    if (!sweep) throw ScenarioError("sweep", "scenario has no sweep block");
    json j = to_json();
    for (const json& path : sweep->paths) {
      json* node = &j;
      for (std::size_t step = 0; step + 1 < path.size(); ++step) {
        node = descend(node, path.at(step));
      }
      json* leaf = descend(node, path.back());
      *leaf = value;
    }
    ScenarioFile out = parse(j);
    out.name = name;
    return out;
  }

  ScenarioKind kind = ScenarioKind::kStatic;
  std::string name;
  int dim_state = 0;
  int dim_action = 0;
  Matrix prior;  // static and multireceiver kinds

  // static
  std::vector<PlayerCost> static_senders;
  PlayerCost static_receiver;

  // dynamic
  Matrix dynamics_a;
  Matrix sigma0;
  Matrix sigma_w;
  int horizon = 0;
  std::vector<AffinePlayerCost> dynamic_senders;
  AffinePlayerCost dynamic_receiver;
  std::optional<std::vector<StageCosts>> explicit_stages;

  // multireceiver
  std::vector<CoupledCost> mr_senders;
  std::vector<CoupledCost> mr_receivers;

  std::vector<int> ordering;  // 0-based; empty means identity
  std::optional<SweepSpec> sweep;

 private:
  PsdMatrix parse_prior() const {
    try {
      PsdMatrix p(prior);
      return p;
    } catch (const Error& e) {
      throw ScenarioError("prior", e.what());
    }
  }

  static json* descend(json* node, const json& step) {
    if (step.is_string()) {
      if (!node->is_object() || !node->contains(step.get<std::string>())) {
        throw ScenarioError("sweep.paths", "unknown key '" +
                                               step.get<std::string>() + "'");
      }
      return &node->at(step.get<std::string>());
    }
    if (step.is_number_integer()) {
      const auto idx = step.get<std::size_t>();
      if (!node->is_array() || idx >= node->size()) {
        throw ScenarioError("sweep.paths", "index out of range");
      }
      return &node->at(idx);
    }
    throw ScenarioError("sweep.paths", "path steps must be keys or indices");
  }
};

namespace detail {

inline PlayerCost parse_player(const json& j, const std::string& path,
                               int p, int t) {
  PlayerCost out{parse_matrix(require_field(j, "Q", path), path + ".Q", -1, p),
                 parse_matrix(require_field(j, "R", path), path + ".R", -1, t)};
  try {
    out.validate(path);
  } catch (const Error& e) {
    throw ScenarioError(path, e.what());
  }
  return out;
}

inline AffinePlayerCost parse_affine_player(const json& j,
                                            const std::string& path, int p,
                                            int t) {
  AffinePlayerCost out;
  const bool has_template = j.contains("Q0") || j.contains("Q1") ||
                            j.contains("R0") || j.contains("R1");
  if (has_template) {
    out.Q0 = parse_matrix(require_field(j, "Q0", path), path + ".Q0", -1, p);
    out.Q1 = j.contains("Q1")
                 ? parse_matrix(j.at("Q1"), path + ".Q1",
                                static_cast<int>(out.Q0.rows()), p)
                 : Matrix::Zero(out.Q0.rows(), p);
    out.R0 = parse_matrix(require_field(j, "R0", path), path + ".R0",
                          static_cast<int>(out.Q0.rows()), t);
    out.R1 = j.contains("R1")
                 ? parse_matrix(j.at("R1"), path + ".R1",
                                static_cast<int>(out.Q0.rows()), t)
                 : Matrix::Zero(out.Q0.rows(), t);
  } else {
    out.Q0 = parse_matrix(require_field(j, "Q", path), path + ".Q", -1, p);
    out.R0 = parse_matrix(require_field(j, "R", path), path + ".R",
                          static_cast<int>(out.Q0.rows()), t);
    out.Q1 = Matrix::Zero(out.Q0.rows(), p);
    out.R1 = Matrix::Zero(out.Q0.rows(), t);
  }
  return out;
}

inline CoupledCost parse_coupled(const json& j, const std::string& path,
                                 int p, int t) {
  CoupledCost out{
      parse_matrix(require_field(j, "Q", path), path + ".Q", -1, p),
      parse_matrix(require_field(j, "R1", path), path + ".R1", -1, t),
      parse_matrix(require_field(j, "R2", path), path + ".R2", -1, t)};
  try {
    out.validate(path);
  } catch (const Error& e) {
    throw ScenarioError(path, e.what());
  }
  return out;
}

inline json affine_to_json(const AffinePlayerCost& c) {
  if (max_abs(c.Q1) == 0.0 && max_abs(c.R1) == 0.0) {
    return json{{"Q", matrix_to_json(c.Q0)}, {"R", matrix_to_json(c.R0)}};
  }
  return json{{"Q0", matrix_to_json(c.Q0)},
              {"Q1", matrix_to_json(c.Q1)},
              {"R0", matrix_to_json(c.R0)},
              {"R1", matrix_to_json(c.R1)}};
}

}  // namespace detail

inline ScenarioFile ScenarioFile::parse(const json& j) {
  if (!j.is_object()) throw ScenarioError("", "scenario must be an object");
  ScenarioFile s;
  const std::string kind =
      detail::require_field(j, "kind", "").get<std::string>();
  if (kind == "static") {
    s.kind = ScenarioKind::kStatic;
  } else if (kind == "dynamic") {
    s.kind = ScenarioKind::kDynamic;
  } else if (kind == "multireceiver") {
    s.kind = ScenarioKind::kMultiReceiver;
  } else {
    throw ScenarioError("kind", "unknown scenario kind '" + kind + "'");
  }
  if (j.contains("name")) s.name = j.at("name").get<std::string>();
  s.dim_state = detail::require_field(j, "dim_state", "").get<int>();
  s.dim_action = detail::require_field(j, "dim_action", "").get<int>();
  if (s.dim_state <= 0 || s.dim_action <= 0) {
    throw ScenarioError("dim_state", "dimensions must be positive");
  }
  const int p = s.dim_state;
  const int t = s.dim_action;

  if (s.kind == ScenarioKind::kStatic) {
    s.prior = detail::parse_matrix(detail::require_field(j, "prior", ""),
                                   "prior", p, p);
    const json& senders = detail::require_field(j, "senders", "");
    if (!senders.is_array() || senders.empty()) {
      throw ScenarioError("senders", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < senders.size(); ++i) {
      s.static_senders.push_back(detail::parse_player(
          senders.at(i), "senders[" + std::to_string(i) + "]", p, t));
    }
    s.static_receiver = detail::parse_player(
        detail::require_field(j, "receiver", ""), "receiver", p, t);
  } else if (s.kind == ScenarioKind::kDynamic) {
    const json& dyn = detail::require_field(j, "dynamics", "");
    s.dynamics_a =
        detail::parse_matrix(detail::require_field(dyn, "A", "dynamics"),
                             "dynamics.A", p, p);
    s.sigma0 =
        detail::parse_matrix(detail::require_field(dyn, "sigma0", "dynamics"),
                             "dynamics.sigma0", p, p);
    s.sigma_w =
        detail::parse_matrix(detail::require_field(dyn, "sigma_w", "dynamics"),
                             "dynamics.sigma_w", p, p);
    s.horizon =
        detail::require_field(dyn, "horizon", "dynamics").get<int>();
    if (s.horizon < 1) {
      throw ScenarioError("dynamics.horizon", "horizon must be at least 1");
    }
    if (j.contains("stages")) {
      const json& stages = j.at("stages");
      if (!stages.is_array() ||
          static_cast<int>(stages.size()) != s.horizon) {
        throw ScenarioError("stages", "expected one entry per stage");
      }
      std::vector<StageCosts> parsed;
      for (int k = 0; k < s.horizon; ++k) {
        const std::string base = "stages[" + std::to_string(k) + "]";
        const json& stage = stages.at(k);
        StageCosts sc;
        const json& sens = detail::require_field(stage, "senders", base);
        for (std::size_t i = 0; i < sens.size(); ++i) {
          sc.senders.push_back(detail::parse_player(
              sens.at(i), base + ".senders[" + std::to_string(i) + "]", p,
              t));
        }
        sc.receiver = detail::parse_player(
            detail::require_field(stage, "receiver", base), base + ".receiver",
            p, t);
        parsed.push_back(std::move(sc));
      }
      s.explicit_stages = std::move(parsed);
    } else {
      const json& senders = detail::require_field(j, "senders", "");
      if (!senders.is_array() || senders.empty()) {
        throw ScenarioError("senders", "expected a non-empty array");
      }
      for (std::size_t i = 0; i < senders.size(); ++i) {
        s.dynamic_senders.push_back(detail::parse_affine_player(
            senders.at(i), "senders[" + std::to_string(i) + "]", p, t));
      }
      s.dynamic_receiver = detail::parse_affine_player(
          detail::require_field(j, "receiver", ""), "receiver", p, t);
    }
  } else {
    s.prior = detail::parse_matrix(detail::require_field(j, "prior", ""),
                                   "prior", p, p);
    const json& senders = detail::require_field(j, "senders", "");
    if (!senders.is_array() || senders.empty()) {
      throw ScenarioError("senders", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < senders.size(); ++i) {
      s.mr_senders.push_back(detail::parse_coupled(
          senders.at(i), "senders[" + std::to_string(i) + "]", p, t));
    }
    const json& receivers = detail::require_field(j, "receivers", "");
    if (!receivers.is_array() || receivers.size() != 2) {
      throw ScenarioError("receivers", "expected exactly two receivers");
    }
    for (std::size_t l = 0; l < 2; ++l) {
      s.mr_receivers.push_back(detail::parse_coupled(
          receivers.at(l), "receivers[" + std::to_string(l) + "]", p, t));
    }
  }

  if (j.contains("ordering")) {
    const json& ord = j.at("ordering");
    if (!ord.is_array()) {
      throw ScenarioError("ordering", "expected an array of sender numbers");
    }
    for (const json& e : ord) {
      if (!e.is_number_integer() || e.get<int>() < 1) {
        throw ScenarioError("ordering", "sender numbers are 1-based");
      }
      s.ordering.push_back(e.get<int>() - 1);
    }
  }

  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    SweepSpec sweep;
    sweep.name = detail::require_field(sw, "name", "sweep").get<std::string>();
    const json& values = detail::require_field(sw, "values", "sweep");
    if (!values.is_array() || values.empty()) {
      throw ScenarioError("sweep.values", "expected a non-empty array");
    }
    for (const json& v : values) {
      if (!v.is_number()) {
        throw ScenarioError("sweep.values", "expected numbers");
      }
      sweep.values.push_back(v.get<double>());
    }
    const json& paths = detail::require_field(sw, "paths", "sweep");
    if (!paths.is_array() || paths.empty()) {
      throw ScenarioError("sweep.paths", "expected a non-empty array");
    }
    for (const json& path : paths) {
      if (!path.is_array() || path.empty()) {
        throw ScenarioError("sweep.paths", "each path is an array of steps");
      }
      sweep.paths.push_back(path);
    }
    s.sweep = std::move(sweep);
  }

  // Validate the typed specs eagerly so bad scenarios fail here, not in the
  // middle of a solve.
  if (s.kind == ScenarioKind::kStatic) {
    GameSpec g = s.to_game_spec();
    s.ordering_or_default(g.num_senders());
  } else if (s.kind == ScenarioKind::kDynamic) {
    DynamicGameSpec d = s.to_dynamic_spec();
    (void)d;
  } else {
    MultiReceiverSpec m = s.to_multireceiver_spec();
    s.ordering_or_default(m.num_senders());
  }
  return s;
}

inline DynamicGameSpec ScenarioFile::to_dynamic_spec() const {
  if (kind != ScenarioKind::kDynamic) {
    throw ScenarioError("kind", "expected a dynamic scenario");
  }
  std::vector<StageCosts> stages;
  if (explicit_stages) {
    stages = *explicit_stages;
  } else {
    stages.reserve(horizon);
    for (int k = 1; k <= horizon; ++k) {
      StageCosts sc;
      for (const AffinePlayerCost& sender : dynamic_senders) {
        sc.senders.push_back(sender.at(k, horizon));
      }
      sc.receiver = dynamic_receiver.at(k, horizon);
      stages.push_back(std::move(sc));
    }
  }
  const int m = static_cast<int>(stages.front().senders.size());
  try {
    return DynamicGameSpec(dynamics_a, PsdMatrix(sigma0), PsdMatrix(sigma_w),
                           std::move(stages), ordering_or_default(m));
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError("dynamics", e.what());
  }
}

inline json ScenarioFile::to_json() const {
  json j;
  j["kind"] = kind == ScenarioKind::kStatic
                  ? "static"
                  : (kind == ScenarioKind::kDynamic ? "dynamic"
                                                    : "multireceiver");
  if (!name.empty()) j["name"] = name;
  j["dim_state"] = dim_state;
  j["dim_action"] = dim_action;
  if (kind == ScenarioKind::kStatic) {
    j["prior"] = detail::matrix_to_json(prior);
    json senders = json::array();
    for (const PlayerCost& s : static_senders) {
      senders.push_back(json{{"Q", detail::matrix_to_json(s.Q)},
                             {"R", detail::matrix_to_json(s.R)}});
    }
    j["senders"] = std::move(senders);
    j["receiver"] = json{{"Q", detail::matrix_to_json(static_receiver.Q)},
                         {"R", detail::matrix_to_json(static_receiver.R)}};
  } else if (kind == ScenarioKind::kDynamic) {
    j["dynamics"] = json{{"A", detail::matrix_to_json(dynamics_a)},
                         {"sigma0", detail::matrix_to_json(sigma0)},
                         {"sigma_w", detail::matrix_to_json(sigma_w)},
                         {"horizon", horizon}};
    if (explicit_stages) {
      json stages = json::array();
      for (const StageCosts& sc : *explicit_stages) {
        json stage;
        json senders = json::array();
        for (const PlayerCost& s : sc.senders) {
          senders.push_back(json{{"Q", detail::matrix_to_json(s.Q)},
                                 {"R", detail::matrix_to_json(s.R)}});
        }
        stage["senders"] = std::move(senders);
        stage["receiver"] =
            json{{"Q", detail::matrix_to_json(sc.receiver.Q)},
                 {"R", detail::matrix_to_json(sc.receiver.R)}};
        stages.push_back(std::move(stage));
      }
      j["stages"] = std::move(stages);
    } else {
      json senders = json::array();
      for (const AffinePlayerCost& s : dynamic_senders) {
        senders.push_back(detail::affine_to_json(s));
      }
      j["senders"] = std::move(senders);
      j["receiver"] = detail::affine_to_json(dynamic_receiver);
    }
  } else {
    j["prior"] = detail::matrix_to_json(prior);
    json senders = json::array();
    for (const CoupledCost& s : mr_senders) {
      senders.push_back(json{{"Q", detail::matrix_to_json(s.Q)},
                             {"R1", detail::matrix_to_json(s.R1)},
                             {"R2", detail::matrix_to_json(s.R2)}});
    }
    j["senders"] = std::move(senders);
    json receivers = json::array();
    for (const CoupledCost& r : mr_receivers) {
      receivers.push_back(json{{"Q", detail::matrix_to_json(r.Q)},
                               {"R1", detail::matrix_to_json(r.R1)},
                               {"R2", detail::matrix_to_json(r.R2)}});
    }
    j["receivers"] = std::move(receivers);
  }
  if (!ordering.empty()) {
    json ord = json::array();
    for (int idx : ordering) ord.push_back(idx + 1);
    j["ordering"] = std::move(ord);
  }
  if (sweep) {
    j["sweep"] = json{{"name", sweep->name},
                      {"values", sweep->values},
                      {"paths", sweep->paths}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// CSV output

/// Formats a double with 9 significant digits, the fixed convention for all
/// emitted CSV so repeated runs are byte-identical.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

class CsvWriter {
 public:
  void header(const std::vector<std::string>& columns) {
    write_cells(columns);
  }

  void row(const std::vector<std::string>& cells) { write_cells(cells); }

  const std::string& str() const { return out_; }

 private:
  void write_cells(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }

  std::string out_;
};

/// Ordering rendered 1-based with '-' separators so it stays a single CSV
/// cell, e.g. "3-2-1"; "full" marks the full-revelation benchmark row.
inline std::string ordering_label(const std::vector<int>& ordering) {
  std::string out;
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(ordering[i] + 1);
  }
  return out;
}

struct ResultRow {
  std::string scenario;
  std::string ordering;
  std::string sweep_name;   // empty when there is no sweep
  double sweep_value = 0.0;
  bool has_sweep = false;
  int stage = 0;  // 0 for static rows
  std::vector<double> costs;
  Matrix posterior;
  Matrix policy;
  double certificate = 0.0;
};

/// Fixed column order: identity, sweep, costs, posterior (row-major), policy
/// (row-major), stability certificate.
inline std::string rows_to_csv(const std::vector<ResultRow>& rows,
                               const std::vector<std::string>& cost_names,
                               bool with_stage = false) {
  CsvWriter csv;
  if (rows.empty()) return csv.str();
  const int p = static_cast<int>(rows.front().posterior.rows());
  std::vector<std::string> columns{"scenario", "ordering"};
  if (with_stage) columns.push_back("stage");
  columns.push_back("sweep_name");
  columns.push_back("sweep_value");
  for (const std::string& c : cost_names) columns.push_back(c);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c)
      columns.push_back("S_" + std::to_string(r) + "_" + std::to_string(c));
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c)
      columns.push_back("L_" + std::to_string(r) + "_" + std::to_string(c));
  columns.push_back("cert_min_eig");
  csv.header(columns);
  for (const ResultRow& row : rows) {
    std::vector<std::string> cells{row.scenario, row.ordering};
    if (with_stage) cells.push_back(std::to_string(row.stage));
    cells.push_back(row.sweep_name);
    cells.push_back(row.has_sweep ? format_double(row.sweep_value) : "");
    for (double c : row.costs) cells.push_back(format_double(c));
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c)
        cells.push_back(format_double(row.posterior(r, c)));
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c)
        cells.push_back(format_double(row.policy(r, c)));
    cells.push_back(format_double(row.certificate));
    csv.row(cells);
  }
  return csv.str();
}

inline std::vector<std::string> cost_column_names(int m, bool two_receivers) {
  std::vector<std::string> names;
  for (int i = 1; i <= m; ++i) names.push_back("J_" + std::to_string(i));
  if (two_receivers) {
    names.push_back("J_r1");
    names.push_back("J_r2");
  } else {
    names.push_back("J_r");
  }
  return names;
}

}  // namespace persuasion
