#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "proxfilt/belief.hpp"

namespace proxfilt {

/// Quadratic proximal-step configuration: weight lambda and the SPD metric V
/// defining |theta - theta0|^2_{2,V^-1}. In the probabilistic reading lambda
/// doubles as the observation-noise variance, so it is stored once.
struct ProxConfig {
  double lambda = 1.0;
  MatrixXd metric;
};

/// Exact minimizer of (y - x'theta)^2 + lambda |theta - theta0|^2_{2,V^-1}:
/// theta0 + V x (y - x'theta0) / (lambda + x' V x).
inline VectorXd prox_ls(const VectorXd& theta0, const ProxConfig& cfg, const Observation& obs) {
  if (obs.x.size() != theta0.size()) {
    throw std::invalid_argument("prox_ls: dimension mismatch");
  }
  const VectorXd k = gain_vector(cfg.metric, obs.x, cfg.lambda);
  const double residual = obs.y - obs.x.dot(theta0);
  return theta0 + k * residual;
}

/// Conjugate-Gaussian update for one linear observation. The posterior mean
/// is the same floating-point expression as prox_ls; the covariance is the
/// rank-one downdate.
inline GaussianBelief bayes_update_linear(const GaussianBelief& belief, const Observation& obs,
                                          double lambda) {
  GaussianBelief post;
  post.mean = prox_ls(belief.mean, ProxConfig{lambda, belief.covariance}, obs);
  post.covariance = covariance_downdate(belief.covariance, obs.x, lambda);
  return post;
}

/// Closed-form Gaussian posterior given the whole dataset, via one dense
/// symmetric solve on the accumulated precision V0^-1 + (1/lambda) sum x x'.
/// Serves as the oracle the sequential updates are validated against.
inline GaussianBelief batch_posterior(const GaussianBelief& prior, const std::vector<Observation>& data,
                                      double lambda) {
  detail::require_positive_lambda(lambda, "batch_posterior");
  const Index d = prior.dim();
  if (prior.covariance.rows() != d || prior.covariance.cols() != d) {
    throw std::invalid_argument("batch_posterior: prior dimension mismatch");
  }
  if (data.empty()) return prior;

  Eigen::LLT<MatrixXd> prior_llt(symmetrized(prior.covariance));
  if (prior_llt.info() != Eigen::Success) {
    throw std::runtime_error("batch_posterior: prior covariance is not SPD");
  }
  MatrixXd precision = prior_llt.solve(MatrixXd::Identity(d, d));
  VectorXd rhs = prior_llt.solve(prior.mean);
  for (const Observation& obs : data) {
    if (obs.x.size() != d) {
      throw std::invalid_argument("batch_posterior: observation dimension mismatch");
    }
    precision.noalias() += (obs.x * obs.x.transpose()) / lambda;
    rhs.noalias() += obs.x * (obs.y / lambda);
  }
  precision = symmetrized(precision);

  GaussianBelief post;
  Eigen::LDLT<MatrixXd> ldlt(precision);
  if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0) {
    post.mean = ldlt.solve(rhs);
    post.covariance = symmetrized(ldlt.solve(MatrixXd::Identity(d, d)));
  } else {
    // Partial-pivoting fallback; singularity cannot occur for SPD V0 but is
    // still surfaced rather than silently producing garbage.
    Eigen::PartialPivLU<MatrixXd> lu(precision);
    post.mean = lu.solve(rhs);
    post.covariance = symmetrized(lu.solve(MatrixXd::Identity(d, d)));
    if (!post.mean.allFinite() || !post.covariance.allFinite()) {
      throw std::runtime_error("batch_posterior: singular precision matrix");
    }
  }
  return post;
}

}  // namespace proxfilt
