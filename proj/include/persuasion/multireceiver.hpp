#pragma once

#include <utility>
#include <vector>

#include "persuasion/equilibrium.hpp"
#include "persuasion/game.hpp"

namespace persuasion {

/// Cost ||Q x + R1 u1 + R2 u2||^2 coupling a player to both receivers.
struct CoupledCost {
  Matrix Q;
  Matrix R1;
  Matrix R2;

  void validate(const std::string& who) const {
    if (!all_finite(Q) || !all_finite(R1) || !all_finite(R2)) {
      throw InvalidMatrix(who + ": non-finite cost matrix entries");
    }
    if (Q.rows() != R1.rows() || Q.rows() != R2.rows()) {
      throw DimError(who + ": Q, R1, R2 must share their row count");
    }
    if (R1.cols() != R2.cols()) {
      throw DimError(who + ": R1 and R2 must share the action dimension");
    }
  }
};

/// Two-receiver game. The receivers play a quadratic Nash game between
/// themselves once the senders have committed; the blockwise assembly keeps
/// d > 2 receivers a data-shape change, but d = 2 is the tested contract.
class MultiReceiverSpec {
 public:
  MultiReceiverSpec(PsdMatrix prior, std::vector<CoupledCost> senders,
                    CoupledCost receiver1, CoupledCost receiver2)
      : prior_(std::move(prior)),
        senders_(std::move(senders)),
        receivers_{std::move(receiver1), std::move(receiver2)} {
    if (senders_.empty()) {
      throw DimError("MultiReceiverSpec: at least one sender required");
    }
    if (prior_.min_eig() <= tol::pd) {
      throw NotPsd("MultiReceiverSpec: prior must be strictly PD");
    }
    const int p = prior_.dim();
    const int t = dim_action();
    for (int l = 0; l < 2; ++l) {
      const std::string who = "receiver " + std::to_string(l + 1);
      receivers_[l].validate(who);
      if (receivers_[l].Q.cols() != p) {
        throw DimError(who + ": Q must have " + std::to_string(p) +
                       " columns");
      }
      if (receivers_[l].R1.cols() != t) {
        throw DimError(who + ": action dimension mismatch");
      }
      const Matrix& own = l == 0 ? receivers_[0].R1 : receivers_[1].R2;
      const Matrix own_gram = own.transpose() * own;
      if (detail::sym_eig_raw(own_gram).values.minCoeff() <= tol::pd) {
        throw SingularReceiver(who + ": own-action weight is rank deficient");
      }
    }
    for (std::size_t i = 0; i < senders_.size(); ++i) {
      const std::string who = "sender " + std::to_string(i + 1);
      senders_[i].validate(who);
      if (senders_[i].Q.cols() != p || senders_[i].R1.cols() != t) {
        throw DimError(who + ": shape mismatch against the receivers");
      }
    }
  }

  int dim_state() const { return prior_.dim(); }
  int dim_action() const { return static_cast<int>(receivers_[0].R1.cols()); }
  int num_senders() const { return static_cast<int>(senders_.size()); }
  const PsdMatrix& prior() const { return prior_; }
  const CoupledCost& sender(int i) const { return senders_.at(i); }
  const CoupledCost& receiver(int l) const { return receivers_.at(l); }

 private:
  PsdMatrix prior_;
  std::vector<CoupledCost> senders_;
  std::vector<CoupledCost> receivers_;
};

inline constexpr double kReceiverConditionCap = 1e12;

/// Nash gains (K1, K2) of the receivers' quadratic game, with u_l = -K_l xhat.
/// Stacked first-order conditions R u = -q are solved in one shot; a
/// condition number beyond the cap means the coupled game has no trustworthy
/// unique solution and is rejected.
inline std::pair<Matrix, Matrix> receiver_nash_gains(
    const MultiReceiverSpec& spec) {
  const int t = spec.dim_action();
  const int p = spec.dim_state();
  const CoupledCost& r1 = spec.receiver(0);
  const CoupledCost& r2 = spec.receiver(1);
  Matrix big_r(2 * t, 2 * t);
  big_r.topLeftCorner(t, t) = r1.R1.transpose() * r1.R1;
  big_r.topRightCorner(t, t) = r1.R1.transpose() * r1.R2;
  big_r.bottomLeftCorner(t, t) = r2.R2.transpose() * r2.R1;
  big_r.bottomRightCorner(t, t) = r2.R2.transpose() * r2.R2;
  Matrix q_coef(2 * t, p);
  q_coef.topRows(t) = r1.R1.transpose() * r1.Q;
  q_coef.bottomRows(t) = r2.R2.transpose() * r2.Q;

  Eigen::JacobiSVD<Matrix> svd(big_r,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smallest = svd.singularValues().minCoeff();
  if (smallest <= 0.0 ||
      svd.singularValues().maxCoeff() / smallest > kReceiverConditionCap) {
    throw NoUniqueReceiverNash(
        "receiver_nash_gains: aggregate gain matrix is singular or "
        "ill-conditioned");
  }
  const Matrix stacked = svd.solve(q_coef);  // [K1; K2], since u = -R^{-1} q
  return {stacked.topRows(t), stacked.bottomRows(t)};
}

namespace detail {

/// Effective posterior-mean weight of a coupled cost under u_l = -K_l xhat.
inline Matrix coupled_action_weight(const CoupledCost& cost, const Matrix& k1,
                                    const Matrix& k2) {
  return cost.R1 * k1 + cost.R2 * k2;
}

}  // namespace detail

/// Sender incentive over the posterior covariance once both receivers play
/// their Nash gains; collapses to the single-receiver formula when the
/// second receiver is irrelevant.
inline IncentiveMatrix sender_incentive_multi(const MultiReceiverSpec& spec,
                                              int i) {
  const auto [k1, k2] = receiver_nash_gains(spec);
  const Matrix lambda =
      detail::coupled_action_weight(spec.sender(i), k1, k2);
  return IncentiveMatrix{
      detail::incentive_from_lambda(lambda, spec.sender(i).Q), i};
}

/// Equilibrium of the senders' game against the receivers' Nash responses.
/// Costs are (J_1..J_m, J_r1, J_r2), receiver costs evaluated at
/// u_l = -K_l xhat through the same trace identities.
inline EquilibriumResult solve_multireceiver(const MultiReceiverSpec& spec,
                                             const std::vector<int>& ordering) {
  detail::check_permutation(ordering, spec.num_senders());
  const auto [k1, k2] = receiver_nash_gains(spec);
  std::vector<IncentiveMatrix> vs;
  vs.reserve(spec.num_senders());
  for (int i = 0; i < spec.num_senders(); ++i) {
    const Matrix lambda =
        detail::coupled_action_weight(spec.sender(i), k1, k2);
    vs.push_back(IncentiveMatrix{
        detail::incentive_from_lambda(lambda, spec.sender(i).Q), i});
  }
  PsdMatrix posterior =
      detail::fold_best_responses(spec.prior(), vs, ordering);
  detail::ProjectionPolicy pp =
      detail::projection_and_policy(spec.prior().mat(), posterior.mat());

  std::vector<double> costs;
  costs.reserve(spec.num_senders() + 2);
  for (int i = 0; i < spec.num_senders(); ++i) {
    costs.push_back(detail::trace_cost(spec.sender(i).Q, vs[i].V.mat(),
                                       spec.prior().mat(), posterior.mat()));
  }
  for (int l = 0; l < 2; ++l) {
    const CoupledCost& r = spec.receiver(l);
    const Matrix lambda = detail::coupled_action_weight(r, k1, k2);
    const SymMatrix v = detail::incentive_from_lambda(lambda, r.Q);
    costs.push_back(detail::trace_cost(r.Q, v.mat(), spec.prior().mat(),
                                       posterior.mat()));
  }
  std::vector<double> certificates;
  certificates.reserve(vs.size());
  for (const IncentiveMatrix& v : vs) {
    certificates.push_back(is_stable_for(posterior, v, spec.prior()).min_eig);
  }
  return EquilibriumResult{std::move(posterior), std::move(pp.projection),
                           ordering,             std::move(costs),
                           std::move(pp.policy), std::move(certificates)};
}

}  // namespace persuasion
