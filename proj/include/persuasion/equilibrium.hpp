#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "persuasion/game.hpp"
#include "persuasion/linalg.hpp"

namespace persuasion {

/// Noiseless linear signal y = L * x. Zero rows stand for unrevealed
/// directions; the rank of the inducing projection carries the compression.
struct LinearPolicy {
  Matrix L;
};

/// Posterior covariance of the MMSE estimate given the signal y = L * x:
/// Sigma_x L^T (L Sigma_x L^T)^dagger L Sigma_x.
inline Matrix induced_posterior(const Matrix& sigma_x, const Matrix& l) {
  const Matrix gram = symmetrize(l * sigma_x * l.transpose());
  const Matrix gram_pinv = pinv(SymMatrix(gram)).mat();
  return symmetrize(sigma_x * l.transpose() * gram_pinv * l * sigma_x);
}

struct StabilityCertificate {
  bool stable;
  double min_eig;  // smallest eigenvalue of the whitened incentive matrix
};

/// W = (Sigma_x - Sigma')^{1/2} V (Sigma_x - Sigma')^{1/2}. Whitening turns
/// the constrained trace minimization over [Sigma', Sigma_x] into one over
/// [O, I].
inline SymMatrix whitened_incentive(const PsdMatrix& sigma_x,
                                    const PsdMatrix& posterior,
                                    const IncentiveMatrix& v) {
  if (!loewner_geq(sigma_x.mat(), posterior.mat(), tol::feasibility)) {
    throw InfeasiblePosterior(
        "whitened_incentive: posterior is more informative than the prior");
  }
  const Matrix gap =
      detail::clamp_psd(sigma_x.mat() - posterior.mat(), tol::feasibility);
  const Matrix root = detail::psd_sqrt_raw(gap);
  return SymMatrix(symmetrize(root * v.V.mat() * root));
}

/// A posterior is stable for a sender when revealing more cannot lower its
/// trace cost, i.e. the whitened incentive matrix is PSD.
inline StabilityCertificate is_stable_for(const PsdMatrix& posterior,
                                          const IncentiveMatrix& v,
                                          const PsdMatrix& sigma_x,
                                          double tolerance = tol::stability) {
  const SymMatrix w = whitened_incentive(sigma_x, posterior, v);
  const double min_eig = detail::sym_eig_raw(w.mat()).values.minCoeff();
  return StabilityCertificate{min_eig >= -tolerance, min_eig};
}

/// Optimal single-sender disclosure: S* = Sigma_x^{1/2} P* Sigma_x^{1/2}
/// where P* projects onto the strictly negative eigenspace of the whitened
/// incentive matrix. Attains min Tr(V S) over O <= S <= Sigma_x.
inline PsdMatrix single_sender_optimum(const PsdMatrix& sigma_x,
                                       const IncentiveMatrix& v) {
  const Matrix root = detail::psd_sqrt_raw(sigma_x.mat());
  const SymMatrix w(symmetrize(root * v.V.mat() * root));
  const ProjectionMatrix p = projection_from_negative_eigs(w);
  return PsdMatrix(
      detail::clamp_interval(root * p.mat() * root, sigma_x.mat()));
}

/// One fold of the sequential algorithm: the best response of a sender whose
/// rivals already reveal Sigma_prev. Never destroys information and lands on
/// a posterior that is stable for this sender.
inline PsdMatrix best_response_posterior(const PsdMatrix& sigma_prev,
                                         const IncentiveMatrix& v,
                                         const PsdMatrix& sigma_x) {
  if (!loewner_geq(sigma_x.mat(), sigma_prev.mat())) {
    throw InfeasiblePosterior(
        "best_response_posterior: infeasible starting posterior");
  }
  const Matrix gap = detail::clamp_psd(sigma_x.mat() - sigma_prev.mat());
  const Matrix root = detail::psd_sqrt_raw(gap);
  const SymMatrix w(symmetrize(root * v.V.mat() * root));
  const ProjectionMatrix p = projection_from_negative_eigs(w);
  const Matrix s = sigma_prev.mat() + root * p.mat() * root;
  return PsdMatrix(detail::clamp_interval(s, sigma_x.mat()));
}

namespace detail {

/// Folds best responses over senders in the given order, starting from no
/// disclosure. Shared by the static and per-stage dynamic solvers.
inline PsdMatrix fold_best_responses(const PsdMatrix& sigma_x,
                                     const std::vector<IncentiveMatrix>& vs,
                                     const std::vector<int>& ordering) {
  PsdMatrix s = PsdMatrix::zero(sigma_x.dim());
  for (int idx : ordering) {
    s = best_response_posterior(s, vs.at(idx), sigma_x);
  }
  return s;
}

inline void check_permutation(const std::vector<int>& ordering, int m) {
  std::vector<bool> seen(m, false);
  if (static_cast<int>(ordering.size()) != m) {
    throw DimError("ordering must list every sender exactly once");
  }
  for (int idx : ordering) {
    if (idx < 0 || idx >= m || seen[idx]) {
      throw DimError("ordering is not a permutation of the senders");
    }
    seen[idx] = true;
  }
}

struct ProjectionPolicy {
  ProjectionMatrix projection;
  LinearPolicy policy;
};

/// Projection representation P = B^{dagger/2} S B^{dagger/2} of S w.r.t. the
/// base covariance B, plus the linear policy L = Lambda U^T B^{dagger/2}
/// realizing it. Throws NotAchievable when S has no projection form.
inline ProjectionPolicy projection_and_policy(const Matrix& base,
                                              const Matrix& s) {
  const Matrix inv_root = pinv_sqrt_raw(base);
  const Matrix candidate = symmetrize(inv_root * s * inv_root);
  if (!is_projection(candidate)) {
    throw NotAchievable(
        "posterior does not admit a projection representation");
  }
  ProjectionMatrix projection(candidate);
  EigenDecomposition eig = sym_eig_raw(projection.mat());
  Vector binary(eig.values.size());
  for (int k = 0; k < eig.values.size(); ++k) {
    binary[k] = eig.values[k] > 0.5 ? 1.0 : 0.0;
  }
  const Matrix l = binary.asDiagonal() * eig.vectors.transpose() * inv_root;
  return ProjectionPolicy{std::move(projection), LinearPolicy{l}};
}

}  // namespace detail

/// Linear Nash policy for a projection-form posterior: L^T = the inverse
/// prior root times the unit-eigenvalue directions of
/// P' = Sigma_x^{-1/2} Sigma* Sigma_x^{-1/2}. The induced posterior is
/// verified to reproduce the target.
inline LinearPolicy nash_policy_from_posterior(const PsdMatrix& sigma_x,
                                               const PsdMatrix& target) {
  detail::ProjectionPolicy pp =
      detail::projection_and_policy(sigma_x.mat(), target.mat());
  const Matrix check = induced_posterior(sigma_x.mat(), pp.policy.L);
  if (max_abs(check - target.mat()) >
      tol::proj * std::max(1.0, max_abs(target.mat()))) {
    throw NotAchievable(
        "nash_policy_from_posterior: induced posterior misses the target");
  }
  return pp.policy;
}

/// Scales a policy by G with orthonormal columns; the induced posterior is
/// unchanged, which is exactly why equilibrium policies are not unique.
inline LinearPolicy policy_variant(const PsdMatrix& sigma_x,
                                   const LinearPolicy& base, const Matrix& g) {
  if (g.cols() != base.L.rows()) {
    throw DimError("policy_variant: scaling shape mismatch");
  }
  if (g.cols() > g.rows()) {
    throw InvalidScaling("policy_variant: G cannot have full column rank");
  }
  const Matrix gram = g.transpose() * g;
  if (max_abs(gram - Matrix::Identity(g.cols(), g.cols())) > tol::ortho) {
    throw InvalidScaling("policy_variant: G must have orthonormal columns");
  }
  LinearPolicy scaled{g * base.L};
  const Matrix before = induced_posterior(sigma_x.mat(), base.L);
  const Matrix after = induced_posterior(sigma_x.mat(), scaled.L);
  if (max_abs(before - after) > tol::proj * std::max(1.0, max_abs(before))) {
    throw InvalidScaling("policy_variant: induced posterior changed");
  }
  return scaled;
}

/// Entrant's policy when a sender joins an existing single-sender game whose
/// incumbent already induces Sigma_1. The pair (incumbent, entrant) lands the
/// joint MMSE posterior on Sigma*.
inline LinearPolicy sequential_entry_policy(const PsdMatrix& sigma_x,
                                            const PsdMatrix& sigma_1,
                                            const PsdMatrix& target) {
  if (!loewner_geq(target.mat(), sigma_1.mat())) {
    throw InfeasiblePosterior(
        "sequential_entry_policy: target is less informative than the base");
  }
  const Matrix gap = detail::clamp_psd(sigma_x.mat() - sigma_1.mat());
  detail::ProjectionPolicy pp = detail::projection_and_policy(
      gap, detail::clamp_psd(target.mat() - sigma_1.mat()));
  // Joint posterior after the entrant's signal, from the innovation form.
  const Matrix& b = pp.policy.L;
  const Matrix gram = symmetrize(b * gap * b.transpose());
  const Matrix joint = symmetrize(sigma_1.mat() +
                                  gap * b.transpose() *
                                      pinv(SymMatrix(gram)).mat() * b * gap);
  if (max_abs(joint - target.mat()) >
      tol::proj * std::max(1.0, max_abs(target.mat()))) {
    throw NotAchievable(
        "sequential_entry_policy: joint posterior misses the target");
  }
  return pp.policy;
}

/// Equilibrium posterior plus everything needed to audit it: projection
/// representation, per-sender stability certificates, costs, and a policy
/// realizing it.
struct EquilibriumResult {
  PsdMatrix posterior;
  ProjectionMatrix projection;  // w.r.t. the prior
  std::vector<int> ordering;
  std::vector<double> costs;  // J_1..J_m, receiver last
  LinearPolicy policy;
  std::vector<double> certificates;  // min eig of W_i per sender

  double min_certificate() const {
    return *std::min_element(certificates.begin(), certificates.end());
  }
};

namespace detail {

inline EquilibriumResult make_result(const GameSpec& g,
                                     const std::vector<IncentiveMatrix>& vs,
                                     std::vector<int> ordering,
                                     PsdMatrix posterior) {
  ProjectionPolicy pp =
      projection_and_policy(g.prior().mat(), posterior.mat());
  std::vector<double> certificates;
  certificates.reserve(vs.size());
  for (const IncentiveMatrix& v : vs) {
    certificates.push_back(is_stable_for(posterior, v, g.prior()).min_eig);
  }
  std::vector<double> costs = expected_costs(g, posterior);
  return EquilibriumResult{std::move(posterior), std::move(pp.projection),
                           std::move(ordering),  std::move(costs),
                           std::move(pp.policy), std::move(certificates)};
}

}  // namespace detail

/// Sequential solve over the senders in order N: each folds its best
/// response onto what the previous ones already reveal. The result is stable
/// for every sender and partially informative.
inline EquilibriumResult solve_ordering(const GameSpec& g,
                                        const std::vector<int>& ordering) {
  detail::check_permutation(ordering, g.num_senders());
  const std::vector<IncentiveMatrix> vs = incentive_matrices(g);
  PsdMatrix posterior = detail::fold_best_responses(g.prior(), vs, ordering);
  return detail::make_result(g, vs, ordering, std::move(posterior));
}

inline constexpr int kOrderingCap = 7;

/// All m! sequential equilibria, keyed by ordering. Capped because of the
/// factorial blowup; pass explicit orderings to solve_ordering beyond it.
inline std::map<std::vector<int>, EquilibriumResult> enumerate_orderings(
    const GameSpec& g) {
  if (g.num_senders() > kOrderingCap) {
    throw TooManyOrderings("enumerate_orderings: m = " +
                           std::to_string(g.num_senders()) + " exceeds cap " +
                           std::to_string(kOrderingCap));
  }
  std::vector<int> ordering(g.num_senders());
  std::iota(ordering.begin(), ordering.end(), 0);
  std::map<std::vector<int>, EquilibriumResult> results;
  do {
    results.emplace(ordering, solve_ordering(g, ordering));
  } while (std::next_permutation(ordering.begin(), ordering.end()));
  return results;
}

/// Joint disclosure when the senders minimize a weighted sum of their
/// objectives; reduces to a single-sender problem with the mixed incentive.
inline PsdMatrix cooperative_optimum(const GameSpec& g,
                                     const std::vector<double>& weights) {
  if (static_cast<int>(weights.size()) != g.num_senders()) {
    throw DimError("cooperative_optimum: one weight per sender required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw InvalidWeights("cooperative_optimum: negative weight");
    total += w;
  }
  if (total <= 0.0) {
    throw InvalidWeights("cooperative_optimum: all weights are zero");
  }
  Matrix mixed = Matrix::Zero(g.dim_state(), g.dim_state());
  for (int i = 0; i < g.num_senders(); ++i) {
    mixed += weights[i] * incentive_matrix(g, i).V.mat();
  }
  return single_sender_optimum(g.prior(),
                               IncentiveMatrix{SymMatrix(mixed), -1});
}

/// Adding senders only shrinks the stable set: every equilibrium of the
/// larger sender set must stay stable for each sender of the smaller one.
inline bool stable_set_shrinkage_check(const GameSpec& g,
                                       const std::vector<int>& inner,
                                       const std::vector<int>& outer) {
  for (int idx : inner) {
    if (std::find(outer.begin(), outer.end(), idx) == outer.end()) {
      throw DimError("stable_set_shrinkage_check: inner set not contained");
    }
  }
  std::vector<PlayerCost> outer_senders;
  outer_senders.reserve(outer.size());
  for (int idx : outer) outer_senders.push_back(g.sender(idx));
  const GameSpec outer_game(g.prior(), std::move(outer_senders), g.receiver());
  const auto equilibria = enumerate_orderings(outer_game);
  for (const auto& [ordering, result] : equilibria) {
    for (int idx : inner) {
      if (!is_stable_for(result.posterior, incentive_matrix(g, idx),
                         g.prior())
               .stable) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace persuasion
