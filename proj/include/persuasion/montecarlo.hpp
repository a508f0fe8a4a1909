#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "persuasion/dynamic.hpp"
#include "persuasion/equilibrium.hpp"
#include "persuasion/game.hpp"

namespace persuasion {

/// Counter-based splittable generator: every sample index derives its own
/// stream from (seed, index), so results do not depend on evaluation order
/// or thread count.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index) {
    // Scatter (seed, index) through two finalizer rounds. A linear-in-index
    // offset would park adjacent streams on overlapping generator orbits and
    // correlate their draws.
    state_ = mix(mix(seed + 0x9E3779B97F4A7C15ull * (index + 1)) ^
                 (index + 0x1D8E4E27C47D124Full));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform in (0, 1]; never returns 0 so logs stay finite.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; one value per call, cached pair.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  Vector next_normal_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = next_normal();
    return v;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

namespace detail {

/// Deterministic pairwise reduction: values are summed in fixed blocks and
/// the block sums combined by halving, which keeps totals stable and
/// independent of any future parallel split.
template <typename T>
class PairwiseAccumulator {
 public:
  explicit PairwiseAccumulator(T zero, int block = 1024)
      : zero_(zero), partial_(zero), block_(block) {}

  void add(const T& value) {
    partial_ += value;
    if (++filled_ == block_) {
      blocks_.push_back(partial_);
      partial_ = zero_;
      filled_ = 0;
    }
  }

  T total() const {
    std::vector<T> level = blocks_;
    if (filled_ > 0) level.push_back(partial_);
    if (level.empty()) return zero_;
    while (level.size() > 1) {
      std::vector<T> next;
      next.reserve((level.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        next.push_back(level[i] + level[i + 1]);
      }
      if (level.size() % 2 == 1) next.push_back(level.back());
      level.swap(next);
    }
    return level.front();
  }

 private:
  T zero_;
  T partial_;
  int block_;
  int filled_ = 0;
  std::vector<T> blocks_;
};

/// Spectral factor F with F F^T = cov; columns of rank-deficient directions
/// are zero, so singular effective priors sample exactly on their support.
inline Matrix spectral_factor(const Matrix& cov) {
  EigenDecomposition eig = sym_eig_raw(cov);
  Vector roots(eig.values.size());
  for (int k = 0; k < eig.values.size(); ++k) {
    roots[k] = std::sqrt(std::max(eig.values[k], 0.0));
  }
  return eig.vectors * roots.asDiagonal();
}

}  // namespace detail

struct SimConfig {
  std::uint64_t sample_count = 100000;
  std::uint64_t seed = 0;
  std::string scenario;  // label carried into reports
};

/// Empirical vs theoretical costs for one policy profile (one stage).
struct SimReport {
  std::string scenario;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> empirical_cost;    // per player, receiver last
  std::vector<double> standard_error;    // sample stddev / sqrt(N)
  std::vector<double> theoretical_cost;  // trace formulas
  Matrix empirical_posterior;            // mean of xhat xhat^T
  Matrix posterior_se;                   // entrywise standard errors
  Matrix orthogonality;                  // mean of (x - xhat) xhat^T
  Matrix orthogonality_se;               // entrywise standard errors
  double max_deviation = 0.0;  // max |empirical - theoretical| posterior entry

  /// Largest |empirical - theoretical| cost in units of its standard error.
  /// Gaps below float resolution count as exact agreement: degenerate stages
  /// (cost identically zero) would otherwise divide dust by dust.
  double worst_z_score() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < empirical_cost.size(); ++j) {
      const double gap = std::abs(empirical_cost[j] - theoretical_cost[j]);
      const double scale = std::max(
          {1.0, std::abs(empirical_cost[j]), std::abs(theoretical_cost[j])});
      if (gap <= 1e-10 * scale) continue;
      const double se = standard_error[j];
      worst = std::max(worst, se > 0.0 ? gap / se : 1e300);
    }
    return worst;
  }
};

/// Linear MMSE estimate of x from the signal y = L x.
inline Vector mmse_estimate(const PsdMatrix& sigma_x, const Matrix& l,
                            const Vector& x) {
  if (l.cols() != sigma_x.dim() || x.size() != sigma_x.dim()) {
    throw DimError("mmse_estimate: shape mismatch");
  }
  const Matrix gram = symmetrize(l * sigma_x.mat() * l.transpose());
  return sigma_x.mat() * l.transpose() * pinv(SymMatrix(gram)).mat() *
         (l * x);
}

/// Samples x ~ N(0, Sigma_x), applies the shared signal y = L x, runs the
/// receiver's best response on the MMSE estimate, and averages realized
/// costs. Deterministic for a fixed SimConfig.
inline SimReport simulate_static(const GameSpec& g, const LinearPolicy& policy,
                                 const SimConfig& cfg) {
  const int p = g.dim_state();
  const int players = g.num_senders() + 1;
  const Matrix factor = detail::spectral_factor(g.prior().mat());
  const Matrix gram =
      symmetrize(policy.L * g.prior().mat() * policy.L.transpose());
  const Matrix estimator = g.prior().mat() * policy.L.transpose() *
                           pinv(SymMatrix(gram)).mat() * policy.L;
  const Matrix k_r = receiver_gain(g);

  detail::PairwiseAccumulator<Vector> cost_sum(Vector::Zero(players).eval());
  detail::PairwiseAccumulator<Vector> cost_sq(Vector::Zero(players).eval());
  detail::PairwiseAccumulator<Matrix> post_sum(Matrix::Zero(p, p).eval());
  detail::PairwiseAccumulator<Matrix> post_sq(Matrix::Zero(p, p).eval());
  detail::PairwiseAccumulator<Matrix> orth_sum(Matrix::Zero(p, p).eval());
  detail::PairwiseAccumulator<Matrix> orth_sq(Matrix::Zero(p, p).eval());

  Vector costs(players);
  for (std::uint64_t idx = 0; idx < cfg.sample_count; ++idx) {
    SampleStream stream(cfg.seed, idx);
    const Vector x = factor * stream.next_normal_vector(p);
    const Vector xhat = estimator * x;
    const Vector u = k_r * xhat;
    for (int i = 0; i < g.num_senders(); ++i) {
      costs[i] = (g.sender(i).Q * x + g.sender(i).R * u).squaredNorm();
    }
    costs[players - 1] =
        (g.receiver().Q * x + g.receiver().R * u).squaredNorm();
    cost_sum.add(costs);
    cost_sq.add(costs.cwiseProduct(costs).eval());
    const Matrix outer = xhat * xhat.transpose();
    post_sum.add(outer);
    post_sq.add(outer.cwiseProduct(outer).eval());
    const Matrix cross = (x - xhat) * xhat.transpose();
    orth_sum.add(cross);
    orth_sq.add(cross.cwiseProduct(cross).eval());
  }

  const double n = static_cast<double>(cfg.sample_count);
  SimReport report;
  report.scenario = cfg.scenario;
  report.sample_count = cfg.sample_count;
  report.seed = cfg.seed;
  const Vector mean = cost_sum.total() / n;
  const Vector mean_sq = cost_sq.total() / n;
  report.empirical_cost.assign(mean.data(), mean.data() + players);
  report.standard_error.resize(players);
  for (int j = 0; j < players; ++j) {
    const double variance = std::max(0.0, mean_sq[j] - mean[j] * mean[j]);
    report.standard_error[j] = std::sqrt(variance / n);
  }
  report.theoretical_cost =
      expected_costs(g, PsdMatrix(induced_posterior(g.prior().mat(),
                                                    policy.L)));
  report.empirical_posterior = post_sum.total() / n;
  const Matrix post_mean_sq = post_sq.total() / n;
  report.posterior_se = ((post_mean_sq - report.empirical_posterior.cwiseProduct(
                                             report.empirical_posterior))
                             .cwiseMax(0.0) /
                         n)
                            .cwiseSqrt();
  report.orthogonality = orth_sum.total() / n;
  const Matrix orth_mean_sq = orth_sq.total() / n;
  report.orthogonality_se =
      ((orth_mean_sq - report.orthogonality.cwiseProduct(report.orthogonality))
           .cwiseMax(0.0) /
       n)
          .cwiseSqrt();
  const Matrix theory_posterior = induced_posterior(g.prior().mat(), policy.L);
  report.max_deviation = max_abs(report.empirical_posterior - theory_posterior);
  return report;
}

/// Simulates trajectories of the Markov state and runs the receiver's
/// recursive MMSE estimator under memoryless stage policies. One report per
/// stage; deterministic for a fixed SimConfig.
inline std::vector<SimReport> simulate_dynamic(
    const DynamicGameSpec& spec, const std::vector<LinearPolicy>& policies,
    const SimConfig& cfg) {
  const int p = spec.dim_state();
  const int n = spec.horizon();
  const int players = spec.num_senders() + 1;
  if (static_cast<int>(policies.size()) != n) {
    throw DimError("simulate_dynamic: one policy per stage required");
  }

  // Closed-form estimator covariances fix both the receiver gains and the
  // theoretical baselines.
  const std::vector<Matrix> theory = estimator_covariances(spec, policies);
  std::vector<Matrix> gains(n);
  std::vector<Matrix> receiver_gains(n);
  {
    Matrix prev = Matrix::Zero(p, p);
    for (int k = 1; k <= n; ++k) {
      const Matrix innovation_cov = detail::clamp_psd(
          spec.priors()[k - 1].mat() -
          symmetrize(spec.dynamics() * prev * spec.dynamics().transpose()));
      const Matrix& l = policies[k - 1].L;
      const Matrix gram = symmetrize(l * innovation_cov * l.transpose());
      gains[k - 1] =
          innovation_cov * l.transpose() * pinv(SymMatrix(gram)).mat() * l;
      prev = theory[k - 1];
      const PlayerCost& rec = spec.costs_at(k).receiver;
      Eigen::LDLT<Matrix> ldlt(rec.R.transpose() * rec.R);
      receiver_gains[k - 1] = -ldlt.solve(rec.R.transpose() * rec.Q);
    }
  }

  const Matrix factor0 = detail::spectral_factor(spec.sigma0().mat());
  const Matrix factor_w = detail::spectral_factor(spec.sigma_w().mat());

  std::vector<detail::PairwiseAccumulator<Vector>> cost_sum(
      n, detail::PairwiseAccumulator<Vector>(Vector::Zero(players).eval()));
  std::vector<detail::PairwiseAccumulator<Vector>> cost_sq = cost_sum;
  std::vector<detail::PairwiseAccumulator<Matrix>> post_sum(
      n, detail::PairwiseAccumulator<Matrix>(Matrix::Zero(p, p).eval()));
  std::vector<detail::PairwiseAccumulator<Matrix>> post_sq = post_sum;

  Vector costs(players);
  for (std::uint64_t idx = 0; idx < cfg.sample_count; ++idx) {
    SampleStream stream(cfg.seed, idx);
    Vector x = factor0 * stream.next_normal_vector(p);
    Vector xhat = Vector::Zero(p);
    for (int k = 1; k <= n; ++k) {
      x = spec.dynamics() * x + factor_w * stream.next_normal_vector(p);
      const Vector predicted = spec.dynamics() * xhat;
      xhat = predicted + gains[k - 1] * (x - predicted);
      const Vector u = receiver_gains[k - 1] * xhat;
      const StageCosts& sc = spec.costs_at(k);
      for (int i = 0; i < players - 1; ++i) {
        costs[i] = (sc.senders[i].Q * x + sc.senders[i].R * u).squaredNorm();
      }
      costs[players - 1] = (sc.receiver.Q * x + sc.receiver.R * u).squaredNorm();
      cost_sum[k - 1].add(costs);
      cost_sq[k - 1].add(costs.cwiseProduct(costs).eval());
      const Matrix outer = xhat * xhat.transpose();
      post_sum[k - 1].add(outer);
      post_sq[k - 1].add(outer.cwiseProduct(outer).eval());
    }
  }

  const double count = static_cast<double>(cfg.sample_count);
  std::vector<SimReport> reports(n);
  for (int k = 1; k <= n; ++k) {
    SimReport& report = reports[k - 1];
    report.scenario = cfg.scenario;
    report.sample_count = cfg.sample_count;
    report.seed = cfg.seed;
    const Vector mean = cost_sum[k - 1].total() / count;
    const Vector mean_sq = cost_sq[k - 1].total() / count;
    report.empirical_cost.assign(mean.data(), mean.data() + players);
    report.standard_error.resize(players);
    for (int j = 0; j < players; ++j) {
      const double variance = std::max(0.0, mean_sq[j] - mean[j] * mean[j]);
      report.standard_error[j] = std::sqrt(variance / count);
    }
    const std::vector<IncentiveMatrix> vs = stage_incentives(spec, k);
    report.theoretical_cost.resize(players);
    for (int i = 0; i < players - 1; ++i) {
      report.theoretical_cost[i] =
          detail::trace_cost(spec.costs_at(k).senders[i].Q, vs[i].V.mat(),
                             spec.priors()[k - 1].mat(), theory[k - 1]);
    }
    const IncentiveMatrix vr = stage_receiver_incentive(spec, k);
    report.theoretical_cost[players - 1] =
        detail::trace_cost(spec.costs_at(k).receiver.Q, vr.V.mat(),
                           spec.priors()[k - 1].mat(), theory[k - 1]);
    report.empirical_posterior = post_sum[k - 1].total() / count;
    const Matrix post_mean_sq = post_sq[k - 1].total() / count;
    report.posterior_se =
        ((post_mean_sq - report.empirical_posterior.cwiseProduct(
                             report.empirical_posterior))
             .cwiseMax(0.0) /
         count)
            .cwiseSqrt();
    report.max_deviation =
        max_abs(report.empirical_posterior - theory[k - 1]);
  }
  return reports;
}

}  // namespace persuasion
