#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "percept/scm.hpp"

namespace percept {

/// Multivariate normal over named variables. The covariance may be
/// singular; intervened variables carry zero variance.
class GaussianDist {
 public:
  /// Symmetrizes `cov` after checking it is symmetric within 1e-12
  /// (relative to its largest entry) and has no eigenvalue below -1e-10.
  /// Throws DimensionMismatch, NonFiniteValue or ValidationError.
  static GaussianDist create(std::vector<std::string> variables, Eigen::VectorXd mean,
                             Eigen::MatrixXd cov);

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& cov() const noexcept { return cov_; }
  std::size_t size() const noexcept { return variables_.size(); }

  /// Throws UnknownVariable.
  std::size_t index_of(std::string_view name) const;

  friend bool operator==(const GaussianDist& a, const GaussianDist& b) {
    return a.variables_ == b.variables_ && a.mean_ == b.mean_ && a.cov_ == b.cov_;
  }

 private:
  GaussianDist() = default;
  std::vector<std::string> variables_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Closed form X = (I - A)^{-1} U, computed row by row in topological
/// order. Variables keep the graph's declaration order.
GaussianDist implied_distribution(const LinearScm& scm);

/// Sub-vector / sub-matrix in the requested order. Throws UnknownVariable.
GaussianDist marginal(const GaussianDist& dist, const std::vector<std::string>& vars);

/// Symmetric PSD square root via eigendecomposition. Eigenvalues below
/// a round-off floor (including any negative ones) are set to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s);

/// 2-Wasserstein distance between Gaussians. Finite for singular
/// covariances. Exactly symmetric in its arguments.
/// Throws VariableMismatch unless both share the same variable list.
double wasserstein2(const GaussianDist& p, const GaussianDist& q);

/// KL(p || q) with `ridge * I` added to both covariances.
/// Throws SingularCovariance if either regularized covariance is not
/// positive definite, VariableMismatch on differing variable lists.
double kl_divergence(const GaussianDist& p, const GaussianDist& q, double ridge = 0.0);

/// Normal density at `x`. Throws SingularCovariance, DimensionMismatch.
double density(const GaussianDist& dist, const Eigen::VectorXd& x);

/// Partial correlation of variables `i` and `j` given `given`, from the
/// precision matrix of the selected block. Throws SingularCovariance.
double partial_correlation(const GaussianDist& dist, std::size_t i, std::size_t j,
                           const std::vector<std::size_t>& given);

enum class MetricKind { kWasserstein2, kKullbackLeibler };

struct Metric {
  MetricKind kind = MetricKind::kWasserstein2;
  double ridge = 1e-9;  // KL only

  static Metric w2() { return {}; }
  static Metric kl(double ridge = 1e-9) { return {MetricKind::kKullbackLeibler, ridge}; }
  /// "w2" or "kl".
  std::string name() const;
  /// Accepts "w2" and "kl"; throws ValidationError otherwise.
  static Metric parse(std::string_view name, double ridge = 1e-9);
};

double distance(const GaussianDist& p, const GaussianDist& q, const Metric& metric);

}  // namespace percept
