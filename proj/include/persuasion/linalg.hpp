#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "persuasion/errors.hpp"

namespace persuasion {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace tol {
inline constexpr double sym = 1e-10;
inline constexpr double ortho = 1e-10;
inline constexpr double psd = 1e-8;
inline constexpr double recon = 1e-8;
inline constexpr double sqrt = 1e-8;
inline constexpr double pinv = 1e-8;
inline constexpr double proj = 1e-8;
inline constexpr double pd = 1e-10;
/// An eigenvalue counts as strictly negative only below -neg_eig * scale.
/// Zero directions are deliberately left out of disclosure projections so
/// the least-informative minimizer is returned.
inline constexpr double neg_eig = 1e-9;
/// Default relative cutoff for pseudo-inverses.
inline constexpr double pinv_cutoff = 1e-10;
/// Stability certificates are accepted down to this absolute eigenvalue.
inline constexpr double stability = 1e-7;
/// Posteriors supplied from outside (reports, config files) are typically
/// printed at four decimals; feasibility preconditions allow that much slack.
inline constexpr double feasibility = 1e-3;
/// Eigenvalues closer than this (relative) count as numerically repeated.
inline constexpr double eig_group = 1e-10;
}  // namespace tol

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

/// (M + M^T)/2. Products that ought to be symmetric are passed through this
/// before further use so square-root round-off cannot accumulate.
inline Matrix symmetrize(const Matrix& m) {
  return 0.5 * (m + m.transpose());
}

/// Dense real symmetric matrix. Entries are symmetrized on construction;
/// inputs further than tol::sym from symmetric are rejected.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m) {
    if (m.rows() != m.cols()) {
      throw DimError("SymMatrix: expected square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!all_finite(m)) {
      throw InvalidMatrix("SymMatrix: non-finite entries");
    }
    const double skew = max_abs(m - m.transpose());
    if (skew > tol::sym * (1.0 + max_abs(m))) {
      throw InvalidMatrix("SymMatrix: asymmetry " + std::to_string(skew) +
                          " exceeds tolerance");
    }
    m_ = symmetrize(m);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns, vectors.col(k) pairs with values[k]
};

namespace detail {

/// Flips each eigenvector so its largest-magnitude entry is positive.
/// Keeps outputs reproducible across runs and platforms.
inline void fix_column_signs(Matrix& vectors) {
  for (int c = 0; c < vectors.cols(); ++c) {
    int idx = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&idx);
    if (vectors(idx, c) < 0.0) {
      vectors.col(c) = -vectors.col(c);
    }
  }
}

/// Replaces the basis of each numerically repeated eigenvalue group by the
/// Gram-Schmidt orthonormalization, in index order, of the standard basis
/// projected onto the eigenspace. The eigensolver's arbitrary basis choice
/// inside degenerate eigenspaces would otherwise leak into outputs.
inline void canonicalize_repeated(EigenDecomposition& eig) {
  const int n = static_cast<int>(eig.values.size());
  const double scale =
      std::max(1.0, n > 0 ? eig.values.cwiseAbs().maxCoeff() : 0.0);
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n &&
           std::abs(eig.values[end] - eig.values[start]) <=
               tol::eig_group * scale) {
      ++end;
    }
    const int size = end - start;
    if (size > 1) {
      const Matrix basis = eig.vectors.middleCols(start, size);
      Matrix canon(n, size);
      int have = 0;
      for (int j = 0; j < n && have < size; ++j) {
        // Projection of e_j onto the eigenspace, orthogonalized twice
        // against the canon columns found so far (a single pass loses
        // orthogonality when the projections are nearly dependent).
        Vector w = basis * basis.row(j).transpose();
        for (int pass = 0; pass < 2; ++pass) {
          for (int c = 0; c < have; ++c) {
            w -= canon.col(c).dot(w) * canon.col(c);
          }
        }
        const double norm = w.norm();
        if (norm > 1e-6) {
          canon.col(have++) = w / norm;
        }
      }
      if (have == size) {
        eig.vectors.middleCols(start, size) = canon;
      }
    }
    start = end;
  }
}

/// Spectral decomposition of a raw symmetric matrix, eigenvalues descending.
inline EigenDecomposition sym_eig_raw(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
  if (solver.info() != Eigen::Success) {
    throw InvalidMatrix("sym_eig: eigensolver failed to converge");
  }
  const int n = static_cast<int>(m.rows());
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    out.vectors.col(c) = solver.eigenvectors().col(n - 1 - c);
  }
  canonicalize_repeated(out);
  fix_column_signs(out.vectors);
  return out;
}

inline Matrix reconstruct(const EigenDecomposition& eig, const Vector& values) {
  return symmetrize(eig.vectors * values.asDiagonal() *
                    eig.vectors.transpose());
}

}  // namespace detail

inline EigenDecomposition sym_eig(const SymMatrix& m) {
  return detail::sym_eig_raw(m.mat());
}

/// Positive semidefinite matrix along with its spectral decomposition.
/// Eigenvalues above -tol::psd * scale are clamped to zero; anything below
/// rejects the input.
class PsdMatrix {
 public:
  explicit PsdMatrix(const SymMatrix& base) : PsdMatrix(base.mat()) {}

  explicit PsdMatrix(const Matrix& m) {
    if (!all_finite(m) || m.rows() != m.cols()) {
      throw InvalidMatrix("PsdMatrix: input must be finite and square");
    }
    eig_ = detail::sym_eig_raw(m);
    const double scale = std::max(1.0, eig_.values.size() ? eig_.values[0] : 0.0);
    bool clamped = false;
    for (int k = 0; k < eig_.values.size(); ++k) {
      if (eig_.values[k] < -tol::psd * scale) {
        throw NotPsd("PsdMatrix: eigenvalue " + std::to_string(eig_.values[k]) +
                     " below PSD tolerance");
      }
      if (eig_.values[k] < 0.0) {
        eig_.values[k] = 0.0;
        clamped = true;
      }
    }
    // Inputs that are already PSD are kept bit-for-bit.
    m_ = clamped ? detail::reconstruct(eig_, eig_.values) : symmetrize(m);
  }

  static PsdMatrix zero(int dim) { return PsdMatrix(Matrix::Zero(dim, dim)); }
  static PsdMatrix identity(int dim) {
    return PsdMatrix(Matrix::Identity(dim, dim));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }
  const Vector& eig_values() const { return eig_.values; }
  const Matrix& eig_vectors() const { return eig_.vectors; }
  double min_eig() const { return eig_.values[eig_.values.size() - 1]; }

 private:
  Matrix m_;
  EigenDecomposition eig_;
};

/// Orthogonal projection matrix: symmetric, idempotent, eigenvalues 0 or 1.
class ProjectionMatrix {
 public:
  explicit ProjectionMatrix(const Matrix& m) {
    if (!all_finite(m) || m.rows() != m.cols()) {
      throw InvalidMatrix("ProjectionMatrix: input must be finite and square");
    }
    const Matrix sym = symmetrize(m);
    if (max_abs(sym * sym - sym) > tol::proj) {
      throw NotAchievable("ProjectionMatrix: matrix is not idempotent");
    }
    const EigenDecomposition eig = detail::sym_eig_raw(sym);
    rank_ = 0;
    for (int k = 0; k < eig.values.size(); ++k) {
      const double lambda = eig.values[k];
      if (std::abs(lambda) > tol::proj && std::abs(lambda - 1.0) > tol::proj) {
        throw NotAchievable("ProjectionMatrix: eigenvalue " +
                            std::to_string(lambda) + " is neither 0 nor 1");
      }
      if (lambda > 0.5) ++rank_;
    }
    m_ = sym;
  }

  static ProjectionMatrix zero(int dim) {
    return ProjectionMatrix(Matrix::Zero(dim, dim));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  int rank() const { return rank_; }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
  int rank_ = 0;
};

/// True when P passes the projection test without throwing.
inline bool is_projection(const Matrix& m) {
  if (!all_finite(m) || m.rows() != m.cols()) return false;
  const Matrix sym = symmetrize(m);
  if (max_abs(sym * sym - sym) > tol::proj) return false;
  const EigenDecomposition eig = detail::sym_eig_raw(sym);
  for (int k = 0; k < eig.values.size(); ++k) {
    const double lambda = eig.values[k];
    if (std::abs(lambda) > tol::proj && std::abs(lambda - 1.0) > tol::proj) {
      return false;
    }
  }
  return true;
}

namespace detail {

/// PSD square root of a raw symmetric matrix, clamping tiny negative
/// eigenvalues. Throws NotPsd below -tol::psd * scale.
inline Matrix psd_sqrt_raw(const Matrix& m) {
  EigenDecomposition eig = sym_eig_raw(m);
  const double scale = std::max(1.0, eig.values.size() ? eig.values[0] : 0.0);
  Vector roots(eig.values.size());
  for (int k = 0; k < eig.values.size(); ++k) {
    if (eig.values[k] < -tol::psd * scale) {
      throw NotPsd("psd_sqrt: eigenvalue " + std::to_string(eig.values[k]) +
                   " below PSD tolerance");
    }
    roots[k] = std::sqrt(std::max(eig.values[k], 0.0));
  }
  return reconstruct(eig, roots);
}

/// Pseudo-inverse square root: eigenvalues below cutoff * max|lambda| are
/// treated as exactly zero. Total on PSD inputs of any rank.
inline Matrix pinv_sqrt_raw(const Matrix& m,
                            double cutoff = tol::pinv_cutoff) {
  EigenDecomposition eig = sym_eig_raw(m);
  const double scale = std::max(1.0, eig.values.size() ? eig.values[0] : 0.0);
  const double floor = cutoff * (eig.values.size()
                                     ? std::max(1.0, eig.values.cwiseAbs().maxCoeff())
                                     : 1.0);
  Vector inv_roots(eig.values.size());
  for (int k = 0; k < eig.values.size(); ++k) {
    if (eig.values[k] < -tol::psd * scale) {
      throw NotPsd("pinv_sqrt: eigenvalue " + std::to_string(eig.values[k]) +
                   " below PSD tolerance");
    }
    inv_roots[k] =
        eig.values[k] > floor ? 1.0 / std::sqrt(eig.values[k]) : 0.0;
  }
  return reconstruct(eig, inv_roots);
}

/// Projects eigenvalues of a nearly-PSD matrix onto [0, inf). Negative
/// eigenvalues beyond -guard * scale indicate real infeasibility and throw.
/// Eigenvalues within round-off of zero are flushed to exactly zero: their
/// square roots would otherwise inject sqrt(eps)-sized noise into every
/// subsequent disclosure step.
inline Matrix clamp_psd(const Matrix& m, double guard = tol::psd) {
  constexpr double zero_floor = 1e-12;
  EigenDecomposition eig = sym_eig_raw(m);
  const double scale =
      std::max(1.0, eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0);
  bool dirty = false;
  for (int k = 0; k < eig.values.size(); ++k) {
    if (eig.values[k] < -guard * scale) {
      throw InfeasiblePosterior("posterior eigenvalue " +
                                std::to_string(eig.values[k]) +
                                " escapes the feasible interval");
    }
    if (eig.values[k] < zero_floor * scale) {
      dirty = dirty || eig.values[k] != 0.0;
      eig.values[k] = 0.0;
    }
  }
  return dirty ? reconstruct(eig, eig.values) : symmetrize(m);
}

/// Clamps S into the Loewner interval [O, bound].
inline Matrix clamp_interval(const Matrix& s, const Matrix& bound) {
  Matrix clamped = clamp_psd(s);
  clamped = bound - clamp_psd(bound - clamped);
  return clamp_psd(clamped);
}

}  // namespace detail

/// Unique PSD square root.
inline PsdMatrix psd_sqrt(const PsdMatrix& m) {
  return PsdMatrix(detail::psd_sqrt_raw(m.mat()));
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix via its spectrum.
/// Eigenvalues with |lambda| <= cutoff * max|lambda| are treated as zero;
/// the zero matrix maps to the zero matrix.
inline SymMatrix pinv(const SymMatrix& m, double cutoff = tol::pinv_cutoff) {
  EigenDecomposition eig = sym_eig(m);
  const double lambda_max =
      eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double floor = cutoff * lambda_max;
  Vector inv(eig.values.size());
  for (int k = 0; k < eig.values.size(); ++k) {
    inv[k] = std::abs(eig.values[k]) > floor ? 1.0 / eig.values[k] : 0.0;
  }
  return SymMatrix(detail::reconstruct(eig, inv));
}

/// Loewner order test: A - B is PSD up to tol * max(1, ||A - B||_2).
inline bool loewner_geq(const SymMatrix& a, const SymMatrix& b,
                        double tolerance = tol::psd) {
  if (a.dim() != b.dim()) {
    throw DimError("loewner_geq: dimension mismatch " +
                   std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  const EigenDecomposition eig = detail::sym_eig_raw(a.mat() - b.mat());
  if (eig.values.size() == 0) return true;
  const double spectral_norm = eig.values.cwiseAbs().maxCoeff();
  return eig.values[eig.values.size() - 1] >=
         -tolerance * std::max(1.0, spectral_norm);
}

inline bool loewner_geq(const Matrix& a, const Matrix& b,
                        double tolerance = tol::psd) {
  return loewner_geq(SymMatrix(symmetrize(a)), SymMatrix(symmetrize(b)),
                     tolerance);
}

/// Orthogonal projector onto the span of eigenvectors of W with eigenvalue
/// < -cutoff * max(1, |lambda|_max). Returns the zero projection when no
/// eigenvalue is strictly negative; rank equals the count of them.
inline ProjectionMatrix projection_from_negative_eigs(
    const SymMatrix& w, double cutoff = tol::neg_eig) {
  const EigenDecomposition eig = sym_eig(w);
  const int n = w.dim();
  const double scale =
      std::max(1.0, eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0);
  int count = 0;
  for (int k = 0; k < n; ++k) {
    if (eig.values[k] < -cutoff * scale) ++count;
  }
  if (count == 0) return ProjectionMatrix::zero(n);
  // Negative eigenvalues sit at the tail of the descending spectrum.
  const Matrix q = eig.vectors.rightCols(count);
  return ProjectionMatrix(symmetrize(q * q.transpose()));
}

}  // namespace persuasion
