#pragma once

#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "persuasion/dynamic.hpp"
#include "persuasion/equilibrium.hpp"
#include "persuasion/montecarlo.hpp"
#include "persuasion/multireceiver.hpp"
#include "persuasion/scenario.hpp"

// Generators for the benchmark games of the numerical section: two- and
// three-sender deception games, the correlation and alignment sweeps, the
// sender-count families, the ten-stage dynamic game, and the two-receiver
// game. reproduce() regenerates every CSV artifact from these.

namespace persuasion {
namespace experiments {

inline Matrix row3(double a, double b, double c) {
  Matrix m(1, 3);
  m << a, b, c;
  return m;
}

inline Matrix scalar(double v) {
  Matrix m(1, 1);
  m << v;
  return m;
}

/// Two senders biased towards theta_A / theta_B; receiver tracks z.
/// J_1 = E[(z + beta theta_A + alpha theta_B - u)^2], J_2 symmetric.
inline std::vector<PlayerCost> biased_senders(double alpha, double beta) {
  return {PlayerCost{row3(1, beta, alpha), scalar(-1)},
          PlayerCost{row3(1, alpha, beta), scalar(-1)}};
}

inline PlayerCost tracking_receiver3() {
  return PlayerCost{row3(1, 0, 0), scalar(-1)};
}

inline Matrix example1_prior() {
  Matrix s(3, 3);
  s << 1, 0.5, 0.7, 0.5, 1.5, 0.2, 0.7, 0.2, 1;
  return s;
}

inline GameSpec example1_game() {
  return GameSpec(PsdMatrix(example1_prior()), biased_senders(0.0, 1.0),
                  tracking_receiver3());
}

/// Prior of the correlation sweep: theta_A, theta_B correlated by rho_ab.
inline Matrix correlated_prior(double rho_ab) {
  Matrix s(3, 3);
  s << 1, 0.5, 0.5, 0.5, 1, rho_ab, 0.5, rho_ab, 1;
  return s;
}

/// Prior of the sender-count family: m i.i.d. biases, each correlated with
/// z by rho; p = m + 1.
inline Matrix sender_count_prior(double rho, int m) {
  Matrix s = Matrix::Identity(m + 1, m + 1);
  for (int i = 1; i <= m; ++i) {
    s(0, i) = rho;
    s(i, 0) = rho;
  }
  return s;
}

/// Sender i tracks z + theta_i; receiver tracks z. p = m + 1.
inline std::vector<PlayerCost> sender_count_costs(int m) {
  std::vector<PlayerCost> out;
  for (int i = 0; i < m; ++i) {
    Matrix q = Matrix::Zero(1, m + 1);
    q(0, 0) = 1;
    q(0, i + 1) = 1;
    out.push_back(PlayerCost{q, scalar(-1)});
  }
  return out;
}

inline PlayerCost tracking_receiver(int p) {
  Matrix q = Matrix::Zero(1, p);
  q(0, 0) = 1;
  return PlayerCost{q, scalar(-1)};
}

/// High-variance prior with increasing z/theta_i correlation.
inline Matrix heterogeneous_prior() {
  Matrix s(4, 4);
  s << 100, 2.5, 5, 7.5, 2.5, 1, 0, 0, 5, 0, 1, 0, 7.5, 0, 0, 1;
  return s;
}

inline GameSpec table1_game() {
  return GameSpec(PsdMatrix(sender_count_prior(0.1, 3)), sender_count_costs(3),
                  tracking_receiver(4));
}

inline GameSpec table2_game() {
  return GameSpec(PsdMatrix(heterogeneous_prior()), sender_count_costs(3),
                  tracking_receiver(4));
}

/// Ten-stage dynamic game: sender 1's bias weight grows as k/n while sender
/// 2's decays as (n-k)/n.
inline DynamicGameSpec example7_spec(int horizon = 10) {
  Matrix sigma0(3, 3);
  sigma0 << 1, 0.5, 0.5, 0.5, 1, 0, 0.5, 0, 1;
  std::vector<StageCosts> stages;
  stages.reserve(horizon);
  for (int k = 1; k <= horizon; ++k) {
    const double w1 = static_cast<double>(k) / horizon;
    const double w2 = static_cast<double>(horizon - k) / horizon;
    StageCosts sc;
    sc.senders.push_back(PlayerCost{row3(1, w1, 0), scalar(-1)});
    sc.senders.push_back(PlayerCost{row3(1, 0, w2), scalar(-1)});
    sc.receiver = tracking_receiver3();
    stages.push_back(std::move(sc));
  }
  return DynamicGameSpec(Matrix::Identity(3, 3), PsdMatrix(sigma0),
                         PsdMatrix::identity(3), std::move(stages), {0, 1});
}

/// Two-receiver game with coupling alpha. Each receiver reacts to the
/// normalized mix (own + alpha * other) / (1 + alpha) of the two actions,
/// matching the sender's (u1 + u2)/2 average; the closed-form gains are
/// K1 = [-1, alpha/(1-alpha), 0] and K2 = [-1, -1/(1-alpha), 0].
inline MultiReceiverSpec example8_spec(double alpha) {
  Matrix prior(3, 3);
  prior << 1, 0.5, 0.5, 0.5, 1, 0.25, 0.5, 0.25, 1;
  const double nrm = 1.0 + alpha;
  CoupledCost sender{row3(1, 0, 1), scalar(-0.5), scalar(-0.5)};
  CoupledCost r1{row3(1, 0, 0), scalar(-1.0 / nrm), scalar(-alpha / nrm)};
  CoupledCost r2{row3(1, 1, 0), scalar(-alpha / nrm), scalar(-1.0 / nrm)};
  return MultiReceiverSpec(PsdMatrix(prior), {sender}, r1, r2);
}

// ---------------------------------------------------------------------------
// Low-level family solve. The correlation sweep touches rho_ab = -0.5 where
// the prior is exactly singular; GameSpec rejects that boundary point, so
// family runs fold best responses directly over the PSD prior.

struct FamilyPoint {
  PsdMatrix posterior;
  LinearPolicy policy;
  std::vector<double> costs;  // senders then receiver
  double certificate;
};

inline FamilyPoint solve_family(const Matrix& prior,
                                const std::vector<PlayerCost>& senders,
                                const PlayerCost& receiver,
                                const std::vector<int>& ordering) {
  PsdMatrix sigma_x(prior);
  std::vector<IncentiveMatrix> vs;
  vs.reserve(senders.size());
  for (std::size_t i = 0; i < senders.size(); ++i) {
    const Matrix lambda =
        detail::effective_action_weight(senders[i], receiver);
    vs.push_back(IncentiveMatrix{
        detail::incentive_from_lambda(lambda, senders[i].Q),
        static_cast<int>(i)});
  }
  PsdMatrix posterior = detail::fold_best_responses(sigma_x, vs, ordering);
  detail::ProjectionPolicy pp =
      detail::projection_and_policy(sigma_x.mat(), posterior.mat());
  std::vector<double> costs;
  for (std::size_t i = 0; i < senders.size(); ++i) {
    costs.push_back(detail::trace_cost(senders[i].Q, vs[i].V.mat(),
                                       sigma_x.mat(), posterior.mat()));
  }
  const Matrix lambda_r = detail::effective_action_weight(receiver, receiver);
  const SymMatrix vr = detail::incentive_from_lambda(lambda_r, receiver.Q);
  costs.push_back(detail::trace_cost(receiver.Q, vr.mat(), sigma_x.mat(),
                                     posterior.mat()));
  double cert = 0.0;
  bool first = true;
  for (const IncentiveMatrix& v : vs) {
    const double e = is_stable_for(posterior, v, sigma_x).min_eig;
    cert = first ? e : std::min(cert, e);
    first = false;
  }
  return FamilyPoint{std::move(posterior), std::move(pp.policy),
                     std::move(costs), cert};
}

// ---------------------------------------------------------------------------
// Figure data: the (x, y-per-series) values behind each plot.

struct SeriesData {
  std::string x_name;
  std::vector<double> x;
  std::vector<std::pair<std::string, std::vector<double>>> series;
};

inline std::string to_csv(const SeriesData& data) {
  CsvWriter csv;
  std::vector<std::string> columns{data.x_name};
  for (const auto& [name, values] : data.series) columns.push_back(name);
  csv.header(columns);
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    std::vector<std::string> cells{format_double(data.x[i])};
    for (const auto& [name, values] : data.series) {
      cells.push_back(format_double(values.at(i)));
    }
    csv.row(cells);
  }
  return csv.str();
}

inline std::vector<double> sweep_range(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

/// Correlation sweep rho_ab in {-0.5, ..., 0.9}; alpha = 0, beta = 1.
inline SeriesData fig3_data() {
  SeriesData data{"rho_ab", sweep_range(-0.5, 0.9, 0.1), {}};
  std::vector<double> jr, j1, j2;
  for (double rho : data.x) {
    FamilyPoint pt = solve_family(correlated_prior(rho),
                                  biased_senders(0.0, 1.0),
                                  tracking_receiver3(), {0, 1});
    j1.push_back(pt.costs[0]);
    j2.push_back(pt.costs[1]);
    jr.push_back(pt.costs[2]);
  }
  data.series = {{"J_r", jr}, {"J_1", j1}, {"J_2", j2}};
  return data;
}

/// Objective-alignment sweep alpha in {-1, ..., 1}; rho_ab = 0.25, beta = 1.
inline SeriesData fig4_data() {
  SeriesData data{"alpha", sweep_range(-1.0, 1.0, 0.1), {}};
  std::vector<double> jr, j1, j2;
  for (double alpha : data.x) {
    FamilyPoint pt = solve_family(correlated_prior(0.25),
                                  biased_senders(alpha, 1.0),
                                  tracking_receiver3(), {0, 1});
    j1.push_back(pt.costs[0]);
    j2.push_back(pt.costs[1]);
    jr.push_back(pt.costs[2]);
  }
  data.series = {{"J_r", jr}, {"J_1", j1}, {"J_2", j2}};
  return data;
}

/// Sender-count family m = 1..10 for each rho; receiver and first-sender
/// costs at the identity-ordering equilibrium.
inline SeriesData sender_count_data(const std::vector<double>& rhos,
                                    int max_m = 10) {
  SeriesData data{"m", {}, {}};
  for (int m = 1; m <= max_m; ++m) data.x.push_back(m);
  for (double rho : rhos) {
    std::vector<double> jr, j1;
    for (int m = 1; m <= max_m; ++m) {
      std::vector<int> ordering(m);
      std::iota(ordering.begin(), ordering.end(), 0);
      FamilyPoint pt =
          solve_family(sender_count_prior(rho, m), sender_count_costs(m),
                       tracking_receiver(m + 1), ordering);
      j1.push_back(pt.costs[0]);
      jr.push_back(pt.costs[m]);
    }
    const std::string tag = "rho_" + format_double(rho);
    data.series.emplace_back("J_r_" + tag, std::move(jr));
    data.series.emplace_back("J_1_" + tag, std::move(j1));
  }
  return data;
}

inline SeriesData fig5_data() { return sender_count_data({0.01, 0.1, 0.25}); }
inline SeriesData fig6_data() {
  return sender_count_data({-0.01, -0.1, -0.25});
}

/// Cooperative (equal-weight) vs Nash totals over m = 1..10 at rho = 0.01.
inline SeriesData fig7_data() {
  SeriesData data{"m", {}, {}};
  std::vector<double> nash_total, coop_total, nash_jr, coop_jr;
  for (int m = 1; m <= 10; ++m) {
    data.x.push_back(m);
    GameSpec g(PsdMatrix(sender_count_prior(0.01, m)), sender_count_costs(m),
               tracking_receiver(m + 1));
    std::vector<int> ordering(m);
    std::iota(ordering.begin(), ordering.end(), 0);
    const EquilibriumResult nash = solve_ordering(g, ordering);
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += nash.costs[i];
    nash_total.push_back(total);
    nash_jr.push_back(nash.costs[m]);

    const PsdMatrix coop =
        cooperative_optimum(g, std::vector<double>(m, 1.0));
    const std::vector<double> costs = expected_costs(g, coop);
    total = 0.0;
    for (int i = 0; i < m; ++i) total += costs[i];
    coop_total.push_back(total);
    coop_jr.push_back(costs[m]);
  }
  data.series = {{"J_r_nash", nash_jr},
                 {"J_r_coop", coop_jr},
                 {"total_nash", nash_total},
                 {"total_coop", coop_total}};
  return data;
}

/// Per-stage costs of the ten-stage dynamic game.
inline SeriesData fig8_data() {
  const DynamicGameSpec spec = example7_spec();
  const DynamicEquilibrium eq = solve_dynamic(spec);
  SeriesData data{"k", {}, {}};
  std::vector<double> jr, j1, j2;
  for (int k = 1; k <= spec.horizon(); ++k) {
    data.x.push_back(k);
    j1.push_back(eq.stage_costs[k - 1][0]);
    j2.push_back(eq.stage_costs[k - 1][1]);
    jr.push_back(eq.stage_costs[k - 1][2]);
  }
  data.series = {{"J_r", jr}, {"J_1", j1}, {"J_2", j2}};
  return data;
}

/// Receiver costs of the two-receiver game over the coupling sweep.
inline SeriesData fig9_data() {
  SeriesData data{"alpha", sweep_range(0.0, 0.9, 0.1), {}};
  std::vector<double> jr1, jr2, js;
  for (double alpha : data.x) {
    const MultiReceiverSpec spec = example8_spec(alpha);
    const EquilibriumResult res = solve_multireceiver(spec, {0});
    js.push_back(res.costs[0]);
    jr1.push_back(res.costs[1]);
    jr2.push_back(res.costs[2]);
  }
  data.series = {{"J_r1", jr1}, {"J_r2", jr2}, {"J_s1", js}};
  return data;
}

// ---------------------------------------------------------------------------
// reproduce: regenerate the CSV artifacts of the numerical section.

inline ResultRow row_from_result(const std::string& scenario,
                                 const EquilibriumResult& res) {
  ResultRow row;
  row.scenario = scenario;
  row.ordering = ordering_label(res.ordering);
  row.costs = res.costs;
  row.posterior = res.posterior.mat();
  row.policy = res.policy.L;
  row.certificate = res.min_certificate();
  return row;
}

/// Full-revelation benchmark row: posterior = prior, W_i = O for every
/// sender, realized by an invertible policy.
inline ResultRow full_revelation_row(const std::string& scenario,
                                     const GameSpec& g) {
  ResultRow row;
  row.scenario = scenario;
  row.ordering = "full";
  row.costs = expected_costs(g, g.prior());
  row.posterior = g.prior().mat();
  row.policy = nash_policy_from_posterior(g.prior(), g.prior()).L;
  double cert = 0.0;
  for (int i = 0; i < g.num_senders(); ++i) {
    cert = std::min(
        cert, is_stable_for(g.prior(), incentive_matrix(g, i), g.prior())
                  .min_eig);
  }
  row.certificate = cert;
  return row;
}

inline std::string ordering_table_csv(const std::string& scenario,
                                      const GameSpec& g) {
  std::vector<ResultRow> rows;
  for (const auto& [ordering, res] : enumerate_orderings(g)) {
    rows.push_back(row_from_result(scenario, res));
  }
  rows.push_back(full_revelation_row(scenario, g));
  return rows_to_csv(rows, cost_column_names(g.num_senders(), false));
}

inline std::string family_rows_csv(const std::string& scenario,
                                   const std::string& sweep_name,
                                   const std::vector<double>& values,
                                   const std::vector<FamilyPoint>& points,
                                   int m) {
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    ResultRow row;
    row.scenario = scenario;
    row.ordering = "1-2";
    row.sweep_name = sweep_name;
    row.sweep_value = values[i];
    row.has_sweep = true;
    row.costs = points[i].costs;
    row.posterior = points[i].posterior.mat();
    row.policy = points[i].policy.L;
    row.certificate = points[i].certificate;
    rows.push_back(std::move(row));
  }
  return rows_to_csv(rows, cost_column_names(m, false));
}

inline std::string dynamic_rows_csv(const std::string& scenario,
                                    const DynamicGameSpec& spec,
                                    const DynamicEquilibrium& eq) {
  std::vector<ResultRow> rows;
  for (int k = 1; k <= spec.horizon(); ++k) {
    ResultRow row;
    row.scenario = scenario;
    row.ordering = ordering_label(spec.ordering());
    row.stage = k;
    row.costs = eq.stage_costs[k - 1];
    row.posterior = eq.posteriors[k - 1].mat();
    row.policy = eq.policies[k - 1].L;
    row.certificate = *std::min_element(eq.certificates[k - 1].begin(),
                                        eq.certificates[k - 1].end());
    rows.push_back(std::move(row));
  }
  return rows_to_csv(rows, cost_column_names(spec.num_senders(), false),
                     /*with_stage=*/true);
}

/// Regenerates the artifact(s) for one target (ex1..ex8, table1, table2, or
/// fig3..fig9) as filename -> CSV content.
inline std::map<std::string, std::string> reproduce(
    const std::string& target) {
  std::map<std::string, std::string> files;
  if (target == "ex1") {
    const GameSpec g = example1_game();
    std::vector<ResultRow> rows{
        row_from_result("example1", solve_ordering(g, {0, 1}))};
    files["ex1_result.csv"] = rows_to_csv(rows, cost_column_names(2, false));
  } else if (target == "ex2" || target == "fig3") {
    const SeriesData fig = fig3_data();
    if (target == "ex2") {
      std::vector<FamilyPoint> points;
      for (double rho : fig.x) {
        points.push_back(solve_family(correlated_prior(rho),
                                      biased_senders(0.0, 1.0),
                                      tracking_receiver3(), {0, 1}));
      }
      files["ex2_rows.csv"] =
          family_rows_csv("example2", "rho_ab", fig.x, points, 2);
    }
    files["fig3.csv"] = to_csv(fig);
  } else if (target == "ex3" || target == "fig4") {
    const SeriesData fig = fig4_data();
    if (target == "ex3") {
      std::vector<FamilyPoint> points;
      for (double alpha : fig.x) {
        points.push_back(solve_family(correlated_prior(0.25),
                                      biased_senders(alpha, 1.0),
                                      tracking_receiver3(), {0, 1}));
      }
      files["ex3_rows.csv"] =
          family_rows_csv("example3", "alpha", fig.x, points, 2);
    }
    files["fig4.csv"] = to_csv(fig);
  } else if (target == "ex4" || target == "fig5" || target == "fig6") {
    if (target != "fig6") files["fig5.csv"] = to_csv(fig5_data());
    if (target != "fig5") files["fig6.csv"] = to_csv(fig6_data());
  } else if (target == "ex5") {
    files["table1.csv"] = ordering_table_csv("table1", table1_game());
    files["table2.csv"] = ordering_table_csv("table2", table2_game());
  } else if (target == "table1") {
    files["table1.csv"] = ordering_table_csv("table1", table1_game());
  } else if (target == "table2") {
    files["table2.csv"] = ordering_table_csv("table2", table2_game());
  } else if (target == "ex6" || target == "fig7") {
    files["fig7.csv"] = to_csv(fig7_data());
  } else if (target == "ex7" || target == "fig8") {
    const DynamicGameSpec spec = example7_spec();
    const DynamicEquilibrium eq = solve_dynamic(spec);
    if (target == "ex7") {
      files["ex7_stages.csv"] = dynamic_rows_csv("example7", spec, eq);
    }
    files["fig8.csv"] = to_csv(fig8_data());
  } else if (target == "ex8" || target == "fig9") {
    if (target == "ex8") {
      const MultiReceiverSpec spec = example8_spec(0.5);
      EquilibriumResult res = solve_multireceiver(spec, {0});
      std::vector<ResultRow> rows{row_from_result("example8", res)};
      files["ex8_result.csv"] = rows_to_csv(rows, cost_column_names(1, true));
    }
    files["fig9.csv"] = to_csv(fig9_data());
  } else {
    throw ScenarioError("target", "unknown reproduce target '" + target +
                                      "'");
  }
  return files;
}

}  // namespace experiments
}  // namespace persuasion
