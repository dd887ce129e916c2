#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace proxfilt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Tolerance for symmetry and positive-(semi)definiteness checks.
inline constexpr double kSpdTol = 1e-10;

/// Gaussian belief over the parameter vector: estimate plus uncertainty.
struct GaussianBelief {
  VectorXd mean;
  MatrixXd covariance;

  Index dim() const { return mean.size(); }
};

/// One scalar target y with its regressor (or raw model input) x.
struct Observation {
  double y = 0.0;
  VectorXd x;
};

inline MatrixXd symmetrized(const MatrixXd& M) {
  return 0.5 * (M + M.transpose());
}

inline double max_asymmetry(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  return (M - M.transpose()).cwiseAbs().maxCoeff();
}

namespace detail {

// Symmetric-factorization SPD test: LDLT on the symmetrized matrix,
// accepting pivots down to -tol.
inline bool spd_factorizable(const MatrixXd& M, double tol) {
  if (M.rows() != M.cols() || M.size() == 0) return false;
  if (!M.allFinite()) return false;
  if (max_asymmetry(M) > tol) return false;
  Eigen::LDLT<MatrixXd> ldlt(symmetrized(M));
  if (ldlt.info() != Eigen::Success) return false;
  return ldlt.vectorD().minCoeff() >= -tol;
}

inline void require_square_match(const MatrixXd& V, const VectorXd& h, const char* op) {
  if (V.rows() != V.cols() || V.rows() != h.size()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  }
}

inline void require_positive_lambda(double lambda, const char* op) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw std::invalid_argument(std::string(op) + ": lambda must be positive");
  }
}

}  // namespace detail

/// Gain k = V h / (lambda + h' V h). For PSD V the denominator is at least
/// lambda, so the division is always safe.
inline VectorXd gain_vector(const MatrixXd& V, const VectorXd& h, double lambda) {
  detail::require_square_match(V, h, "gain_vector");
  detail::require_positive_lambda(lambda, "gain_vector");
  if (!V.allFinite() || !h.allFinite()) {
    throw std::invalid_argument("gain_vector: non-finite input");
  }
  const VectorXd Vh = V * h;
  return Vh / (lambda + h.dot(Vh));
}

/// Posterior covariance V' = V - V h h' V / (lambda + h' V h), explicitly
/// symmetrized. V' never exceeds V in the PSD order.
inline MatrixXd covariance_downdate(const MatrixXd& V, const VectorXd& h, double lambda) {
  detail::require_square_match(V, h, "covariance_downdate");
  detail::require_positive_lambda(lambda, "covariance_downdate");
  if (!h.allFinite()) {
    throw std::invalid_argument("covariance_downdate: non-finite input");
  }
  if (!detail::spd_factorizable(V, kSpdTol)) {
    throw std::runtime_error("covariance_downdate: input matrix is not SPD");
  }
  const VectorXd Vh = V * h;
  const MatrixXd updated = V - (Vh * Vh.transpose()) / (lambda + h.dot(Vh));
  return symmetrized(updated);
}

/// True iff M is symmetric within tol and its smallest eigenvalue is >= -tol.
inline bool spd_check(const MatrixXd& M, double tol) {
  if (M.rows() != M.cols() || M.size() == 0) return false;
  if (!M.allFinite()) return false;
  if (max_asymmetry(M) > tol) return false;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(M), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace proxfilt
