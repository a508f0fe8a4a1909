#pragma once

#include <string>
#include <vector>

#include "persuasion/linalg.hpp"

namespace persuasion {

/// Quadratic stage loss ||Q x + R u||^2 of one player.
struct PlayerCost {
  Matrix Q;  // q x p state weight
  Matrix R;  // q x t action weight

  void validate(const std::string& who) const {
    if (!all_finite(Q) || !all_finite(R)) {
      throw InvalidMatrix(who + ": non-finite cost matrix entries");
    }
    if (Q.rows() != R.rows()) {
      throw DimError(who + ": Q has " + std::to_string(Q.rows()) +
                     " rows but R has " + std::to_string(R.rows()));
    }
    if (R.cols() > R.rows()) {
      throw DimError(who + ": action dimension exceeds cost rows");
    }
  }
};

/// Reduced sender objective: the posterior-covariance cost is Tr(V * S).
struct IncentiveMatrix {
  SymMatrix V;
  int owner;  // sender index, or -1 for the receiver
};

/// Static m-sender game: Gaussian prior plus per-player quadratic costs.
/// Validation is eager; downstream code assumes the invariants hold.
class GameSpec {
 public:
  GameSpec(PsdMatrix prior, std::vector<PlayerCost> senders,
           PlayerCost receiver)
      : prior_(std::move(prior)),
        senders_(std::move(senders)),
        receiver_(std::move(receiver)) {
    if (senders_.empty()) {
      throw DimError("GameSpec: at least one sender required");
    }
    if (prior_.min_eig() <= tol::pd) {
      throw NotPsd("GameSpec: prior must be strictly positive definite");
    }
    receiver_.validate("receiver");
    const int p = prior_.dim();
    const int t = static_cast<int>(receiver_.R.cols());
    if (receiver_.Q.cols() != p) {
      throw DimError("receiver: Q must have " + std::to_string(p) + " columns");
    }
    const Matrix rtr = receiver_.R.transpose() * receiver_.R;
    if (detail::sym_eig_raw(rtr).values.minCoeff() <= tol::pd) {
      throw SingularReceiver("GameSpec: receiver R^T R is singular");
    }
    for (std::size_t i = 0; i < senders_.size(); ++i) {
      const std::string who = "sender " + std::to_string(i + 1);
      senders_[i].validate(who);
      if (senders_[i].Q.cols() != p) {
        throw DimError(who + ": Q must have " + std::to_string(p) +
                       " columns");
      }
      if (senders_[i].R.cols() != t) {
        throw DimError(who + ": R must have " + std::to_string(t) +
                       " columns");
      }
    }
  }

  int dim_state() const { return prior_.dim(); }
  int dim_action() const { return static_cast<int>(receiver_.R.cols()); }
  int num_senders() const { return static_cast<int>(senders_.size()); }
  const PsdMatrix& prior() const { return prior_; }
  const PlayerCost& sender(int i) const { return senders_.at(i); }
  const std::vector<PlayerCost>& senders() const { return senders_; }
  const PlayerCost& receiver() const { return receiver_; }

 private:
  PsdMatrix prior_;
  std::vector<PlayerCost> senders_;
  PlayerCost receiver_;
};

namespace detail {

/// Lambda = R (R_r^T R_r)^{-1} R_r^T Q_r maps the posterior mean into the
/// player's cost once the receiver best-responds.
inline Matrix effective_action_weight(const PlayerCost& player,
                                      const PlayerCost& receiver) {
  const Matrix rtr = receiver.R.transpose() * receiver.R;
  Eigen::LDLT<Matrix> ldlt(rtr);
  if (ldlt.info() != Eigen::Success) {
    throw SingularReceiver("receiver R^T R is singular");
  }
  return player.R * ldlt.solve(receiver.R.transpose() * receiver.Q);
}

inline SymMatrix incentive_from_lambda(const Matrix& lambda, const Matrix& q) {
  const Matrix v = lambda.transpose() * lambda - lambda.transpose() * q -
                   q.transpose() * lambda;
  return SymMatrix(symmetrize(v));
}

/// J = Tr(Q^T Q Sigma_x) + Tr(V S); shared by static and dynamic costs.
inline double trace_cost(const Matrix& q, const Matrix& v,
                         const Matrix& sigma_x, const Matrix& s) {
  return (q.transpose() * q * sigma_x).trace() + (v * s).trace();
}

}  // namespace detail

/// Receiver best-response gain K_r with u = K_r * xhat.
inline Matrix receiver_gain(const GameSpec& g) {
  const Matrix rtr = g.receiver().R.transpose() * g.receiver().R;
  Eigen::LDLT<Matrix> ldlt(rtr);
  if (ldlt.info() != Eigen::Success) {
    throw SingularReceiver("receiver_gain: R^T R is singular");
  }
  return -ldlt.solve(g.receiver().R.transpose() * g.receiver().Q);
}

inline IncentiveMatrix incentive_matrix(const GameSpec& g, int i) {
  const Matrix lambda =
      detail::effective_action_weight(g.sender(i), g.receiver());
  return IncentiveMatrix{detail::incentive_from_lambda(lambda, g.sender(i).Q),
                         i};
}

inline std::vector<IncentiveMatrix> incentive_matrices(const GameSpec& g) {
  std::vector<IncentiveMatrix> out;
  out.reserve(g.num_senders());
  for (int i = 0; i < g.num_senders(); ++i) {
    out.push_back(incentive_matrix(g, i));
  }
  return out;
}

/// The receiver's own cost reduced through the same formula; V_r turns out
/// negative semidefinite, so more information never hurts the receiver.
inline IncentiveMatrix receiver_incentive(const GameSpec& g) {
  const Matrix lambda =
      detail::effective_action_weight(g.receiver(), g.receiver());
  return IncentiveMatrix{
      detail::incentive_from_lambda(lambda, g.receiver().Q), -1};
}

/// Exact expected costs (J_1, ..., J_m, J_r) at posterior covariance S.
inline std::vector<double> expected_costs(const GameSpec& g,
                                          const PsdMatrix& s) {
  if (s.dim() != g.dim_state()) {
    throw DimError("expected_costs: posterior dimension mismatch");
  }
  if (!loewner_geq(g.prior().mat(), s.mat(), tol::feasibility)) {
    throw InfeasiblePosterior(
        "expected_costs: posterior exceeds the prior in Loewner order");
  }
  std::vector<double> costs;
  costs.reserve(g.num_senders() + 1);
  for (int i = 0; i < g.num_senders(); ++i) {
    const IncentiveMatrix v = incentive_matrix(g, i);
    costs.push_back(detail::trace_cost(g.sender(i).Q, v.V.mat(),
                                       g.prior().mat(), s.mat()));
  }
  const IncentiveMatrix vr = receiver_incentive(g);
  costs.push_back(detail::trace_cost(g.receiver().Q, vr.V.mat(),
                                     g.prior().mat(), s.mat()));
  return costs;
}

}  // namespace persuasion
