#pragma once

#include <utility>
#include <vector>

#include "persuasion/equilibrium.hpp"
#include "persuasion/game.hpp"

namespace persuasion {

/// Costs of all players at one stage.
struct StageCosts {
  std::vector<PlayerCost> senders;
  PlayerCost receiver;
};

/// Finite-horizon game over an uncontrolled Markov state
/// x_k = A x_{k-1} + w_{k-1}. Stage priors follow the Lyapunov recursion
/// Sigma_k = A Sigma_{k-1} A^T + Sigma_w and must stay positive definite.
class DynamicGameSpec {
 public:
  DynamicGameSpec(Matrix a, PsdMatrix sigma0, PsdMatrix sigma_w,
                  std::vector<StageCosts> stage_costs,
                  std::vector<int> ordering)
      : a_(std::move(a)),
        sigma0_(std::move(sigma0)),
        sigma_w_(std::move(sigma_w)),
        stage_costs_(std::move(stage_costs)),
        ordering_(std::move(ordering)) {
    const int p = sigma0_.dim();
    if (a_.rows() != p || a_.cols() != p || sigma_w_.dim() != p) {
      throw DimError("DynamicGameSpec: A and Sigma_w must be p x p");
    }
    if (!all_finite(a_)) {
      throw InvalidMatrix("DynamicGameSpec: non-finite dynamics");
    }
    if (stage_costs_.empty()) {
      throw DimError("DynamicGameSpec: horizon must be at least 1");
    }
    const int m = static_cast<int>(stage_costs_.front().senders.size());
    if (m < 1) throw DimError("DynamicGameSpec: at least one sender required");
    detail::check_permutation(ordering_, m);
    for (std::size_t k = 0; k < stage_costs_.size(); ++k) {
      const std::string where = "stage " + std::to_string(k + 1);
      if (static_cast<int>(stage_costs_[k].senders.size()) != m) {
        throw DimError(where + ": sender count changed across stages");
      }
      stage_costs_[k].receiver.validate(where + " receiver");
      const Matrix rtr = stage_costs_[k].receiver.R.transpose() *
                         stage_costs_[k].receiver.R;
      if (detail::sym_eig_raw(rtr).values.minCoeff() <= tol::pd) {
        throw SingularReceiver(where + ": receiver R^T R is singular");
      }
      for (int i = 0; i < m; ++i) {
        stage_costs_[k].senders[i].validate(where + " sender " +
                                            std::to_string(i + 1));
      }
    }
    priors_ = propagate();
  }

  int dim_state() const { return sigma0_.dim(); }
  int num_senders() const {
    return static_cast<int>(stage_costs_.front().senders.size());
  }
  int horizon() const { return static_cast<int>(stage_costs_.size()); }
  const Matrix& dynamics() const { return a_; }
  const PsdMatrix& sigma0() const { return sigma0_; }
  const PsdMatrix& sigma_w() const { return sigma_w_; }
  const std::vector<int>& ordering() const { return ordering_; }
  /// Stage index k is 1-based to match the recursion; priors()[k-1] = Sigma_k.
  const std::vector<PsdMatrix>& priors() const { return priors_; }
  const StageCosts& costs_at(int k) const { return stage_costs_.at(k - 1); }

 private:
  std::vector<PsdMatrix> propagate() const {
    std::vector<PsdMatrix> out;
    out.reserve(horizon());
    Matrix cov = sigma0_.mat();
    for (int k = 1; k <= horizon(); ++k) {
      cov = symmetrize(a_ * cov * a_.transpose() + sigma_w_.mat());
      const double min_eig = detail::sym_eig_raw(cov).values.minCoeff();
      if (min_eig <= tol::pd) {
        throw DegeneratePrior("stage " + std::to_string(k) +
                              " prior lost positive definiteness");
      }
      out.emplace_back(cov);
    }
    return out;
  }

  Matrix a_;
  PsdMatrix sigma0_;
  PsdMatrix sigma_w_;
  std::vector<StageCosts> stage_costs_;
  std::vector<int> ordering_;
  std::vector<PsdMatrix> priors_;
};

/// Stage priors Sigma_1..Sigma_n from the Lyapunov recursion.
inline std::vector<PsdMatrix> propagate_prior(const DynamicGameSpec& spec) {
  return spec.priors();
}

/// Per-stage sender incentives V_k^i, same construction as the static game.
inline std::vector<IncentiveMatrix> stage_incentives(
    const DynamicGameSpec& spec, int k) {
  const StageCosts& costs = spec.costs_at(k);
  std::vector<IncentiveMatrix> out;
  out.reserve(costs.senders.size());
  for (std::size_t i = 0; i < costs.senders.size(); ++i) {
    const Matrix lambda =
        detail::effective_action_weight(costs.senders[i], costs.receiver);
    out.push_back(IncentiveMatrix{
        detail::incentive_from_lambda(lambda, costs.senders[i].Q),
        static_cast<int>(i)});
  }
  return out;
}

inline IncentiveMatrix stage_receiver_incentive(const DynamicGameSpec& spec,
                                                int k) {
  const PlayerCost& r = spec.costs_at(k).receiver;
  const Matrix lambda = detail::effective_action_weight(r, r);
  return IncentiveMatrix{detail::incentive_from_lambda(lambda, r.Q), -1};
}

/// Greedy per-stage equilibrium of the multi-stage game. The greedy stage
/// posteriors are stable for the full horizon, though possibly sub-optimal
/// against exact backward induction.
struct DynamicEquilibrium {
  std::vector<PsdMatrix> posteriors;        // S_1*..S_n*
  std::vector<PsdMatrix> effective_priors;  // Sigma_k - A S_{k-1}* A^T
  std::vector<ProjectionMatrix> projections;
  std::vector<LinearPolicy> policies;
  /// stage_costs[k-1] = (J_1^k..J_m^k, J_r^k)
  std::vector<std::vector<double>> stage_costs;
  std::vector<std::vector<double>> certificates;  // per stage, per sender
};

/// Solves each stage's static game over the innovation covariance
/// Sigma_k - A S_{k-1}* A^T with the ordering held fixed across stages.
inline DynamicEquilibrium solve_dynamic(const DynamicGameSpec& spec) {
  const int n = spec.horizon();
  const int m = spec.num_senders();
  DynamicEquilibrium eq;
  eq.posteriors.reserve(n);
  eq.effective_priors.reserve(n);
  eq.projections.reserve(n);
  eq.policies.reserve(n);
  eq.stage_costs.reserve(n);
  eq.certificates.reserve(n);

  Matrix carried = Matrix::Zero(spec.dim_state(), spec.dim_state());
  for (int k = 1; k <= n; ++k) {
    const Matrix& sigma_k = spec.priors()[k - 1].mat();
    // Stage 1 carries no information (S_0* = O), so its effective prior is
    // the stage prior itself; this keeps the n = 1 solve bit-identical to
    // the static solver.
    PsdMatrix effective =
        k == 1 ? spec.priors()[0]
               : PsdMatrix(detail::clamp_psd(sigma_k - carried));
    const std::vector<IncentiveMatrix> vs = stage_incentives(spec, k);
    const PsdMatrix innovation =
        detail::fold_best_responses(effective, vs, spec.ordering());
    detail::ProjectionPolicy pp =
        detail::projection_and_policy(effective.mat(), innovation.mat());

    PsdMatrix stage_posterior =
        k == 1 ? innovation : PsdMatrix(carried + innovation.mat());
    std::vector<double> costs;
    costs.reserve(m + 1);
    for (int i = 0; i < m; ++i) {
      costs.push_back(detail::trace_cost(spec.costs_at(k).senders[i].Q,
                                         vs[i].V.mat(), sigma_k,
                                         stage_posterior.mat()));
    }
    const IncentiveMatrix vr = stage_receiver_incentive(spec, k);
    costs.push_back(detail::trace_cost(spec.costs_at(k).receiver.Q,
                                       vr.V.mat(), sigma_k,
                                       stage_posterior.mat()));

    std::vector<double> certs;
    certs.reserve(m);
    for (const IncentiveMatrix& v : vs) {
      certs.push_back(
          is_stable_for(stage_posterior, v, spec.priors()[k - 1]).min_eig);
    }

    carried = symmetrize(spec.dynamics() * stage_posterior.mat() *
                         spec.dynamics().transpose());
    eq.posteriors.push_back(std::move(stage_posterior));
    eq.effective_priors.push_back(std::move(effective));
    eq.projections.push_back(std::move(pp.projection));
    eq.policies.push_back(std::move(pp.policy));
    eq.stage_costs.push_back(std::move(costs));
    eq.certificates.push_back(std::move(certs));
  }
  return eq;
}

/// Memoryless stage policies; already produced by solve_dynamic, exposed
/// separately to mirror the per-stage construction
/// L_k = Lambda_k U_k^T (Sigma_k - A S_{k-1}* A^T)^{dagger/2}.
inline std::vector<LinearPolicy> dynamic_policies(const DynamicEquilibrium& eq,
                                                  const DynamicGameSpec&) {
  return eq.policies;
}

/// Closed-form covariance of the recursive MMSE estimate under the stage
/// policies, by propagating the joint covariance of (x_k, xhat_k). Used to
/// confirm the estimator recursion reproduces the solver posteriors without
/// any sampling.
inline std::vector<Matrix> estimator_covariances(
    const DynamicGameSpec& spec, const std::vector<LinearPolicy>& policies) {
  const int p = spec.dim_state();
  const int n = spec.horizon();
  if (static_cast<int>(policies.size()) != n) {
    throw DimError("estimator_covariances: one policy per stage required");
  }
  std::vector<Matrix> out;
  out.reserve(n);
  // Joint covariance of [x; xhat], with xhat_0 = 0.
  Matrix joint = Matrix::Zero(2 * p, 2 * p);
  joint.topLeftCorner(p, p) = spec.sigma0().mat();
  Matrix prev_posterior = Matrix::Zero(p, p);
  for (int k = 1; k <= n; ++k) {
    const Matrix& a = spec.dynamics();
    const Matrix& l = policies[k - 1].L;
    const Matrix innovation_cov = detail::clamp_psd(
        spec.priors()[k - 1].mat() -
        symmetrize(a * prev_posterior * a.transpose()));
    const Matrix gram = symmetrize(l * innovation_cov * l.transpose());
    const Matrix gain =
        innovation_cov * l.transpose() * pinv(SymMatrix(gram)).mat() * l;
    // x_k    = A x_{k-1} + w
    // xhat_k = G A x_{k-1} + (I - G) A xhat_{k-1} + G w
    Matrix f = Matrix::Zero(2 * p, 2 * p);
    f.topLeftCorner(p, p) = a;
    f.bottomLeftCorner(p, p) = gain * a;
    f.bottomRightCorner(p, p) = (Matrix::Identity(p, p) - gain) * a;
    Matrix b(2 * p, p);
    b.topRows(p) = Matrix::Identity(p, p);
    b.bottomRows(p) = gain;
    joint = symmetrize(f * joint * f.transpose() +
                       b * spec.sigma_w().mat() * b.transpose());
    out.push_back(symmetrize(joint.bottomRightCorner(p, p)));
    prev_posterior = out.back();
  }
  return out;
}

}  // namespace persuasion
