#include "percept/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "percept/errors.hpp"

namespace percept {

namespace {

using Eigen::Index;

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_same_variables(const GaussianDist& p, const GaussianDist& q) {
  if (p.variables() != q.variables())
    throw VariableMismatch("distributions are over different variable lists");
}

// Lexicographic order on (mean, cov) so symmetric metrics can evaluate
// their arguments in one canonical order.
bool lex_less(const GaussianDist& a, const GaussianDist& b) {
  for (Index i = 0; i < a.mean().size(); ++i)
    if (a.mean()(i) != b.mean()(i)) return a.mean()(i) < b.mean()(i);
  for (Index i = 0; i < a.cov().size(); ++i)
    if (a.cov().data()[i] != b.cov().data()[i]) return a.cov().data()[i] < b.cov().data()[i];
  return false;
}

double wasserstein2_ordered(const GaussianDist& p, const GaussianDist& q) {
  // Bures term as min over orthogonal R of ||Sp^{1/2} - Sq^{1/2} R||_F^2.
  // The optimum is the polar factor of Sq^{1/2} Sp^{1/2}; forming the
  // residual directly avoids the cancellation of the trace formula when
  // the two covariances nearly coincide.
  Eigen::MatrixXd a = psd_sqrt(p.cov());
  Eigen::MatrixXd b = psd_sqrt(q.cov());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.transpose() * a,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();
  double bures = (a - b * rotation).squaredNorm();
  double shift = (p.mean() - q.mean()).squaredNorm();
  return std::sqrt(std::max(0.0, shift + bures));
}

}  // namespace

GaussianDist GaussianDist::create(std::vector<std::string> variables, Eigen::VectorXd mean,
                                  Eigen::MatrixXd cov) {
  const auto p = static_cast<Index>(variables.size());
  if (mean.size() != p || cov.rows() != p || cov.cols() != p)
    throw DimensionMismatch("mean/covariance do not match the variable count");
  if (!mean.allFinite() || !cov.allFinite())
    throw NonFiniteValue("distribution parameters must be finite");
  const double scale = std::max(1.0, max_abs(cov));
  if (max_abs(cov - cov.transpose()) > 1e-12 * scale)
    throw ValidationError("covariance is not symmetric");
  Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  if (p > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale)
      throw ValidationError("covariance is not positive semidefinite");
  }
  GaussianDist d;
  d.variables_ = std::move(variables);
  d.mean_ = std::move(mean);
  d.cov_ = std::move(sym);
  return d;
}

std::size_t GaussianDist::index_of(std::string_view name) const {
  auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end()) throw UnknownVariable("unknown variable '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - variables_.begin());
}

GaussianDist implied_distribution(const LinearScm& scm) {
  const auto& g = scm.graph();
  const auto p = static_cast<Index>(g.size());
  const auto& w = scm.weights();

  // Row j of (I - A)^{-1}: e_j plus the coefficient-weighted rows of the
  // parents, which are complete by the time j is reached.
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t j : g.topological_order()) {
    const auto jj = static_cast<Index>(j);
    total(jj, jj) = 1.0;
    for (std::size_t k : g.parents(j)) total.row(jj) += w(jj, static_cast<Index>(k)) * total.row(static_cast<Index>(k));
  }

  Eigen::VectorXd mu(p);
  Eigen::VectorXd var(p);
  for (Index k = 0; k < p; ++k) {
    mu(k) = scm.noise(static_cast<std::size_t>(k)).mean;
    var(k) = scm.noise(static_cast<std::size_t>(k)).var;
  }

  // Explicit loops fix the summation order and give an exactly symmetric
  // result.
  Eigen::VectorXd mean(p);
  Eigen::MatrixXd cov(p, p);
  for (Index i = 0; i < p; ++i) {
    double m = 0.0;
    for (Index k = 0; k < p; ++k) m += total(i, k) * mu(k);
    mean(i) = m;
    for (Index j = 0; j <= i; ++j) {
      double c = 0.0;
      for (Index k = 0; k < p; ++k) c += total(i, k) * var(k) * total(j, k);
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  return GaussianDist::create(g.nodes(), std::move(mean), std::move(cov));
}

GaussianDist marginal(const GaussianDist& dist, const std::vector<std::string>& vars) {
  std::vector<Index> idx;
  idx.reserve(vars.size());
  for (const auto& v : vars) idx.push_back(static_cast<Index>(dist.index_of(v)));
  const auto n = static_cast<Index>(idx.size());
  Eigen::VectorXd mean(n);
  Eigen::MatrixXd cov(n, n);
  for (Index a = 0; a < n; ++a) {
    mean(a) = dist.mean()(idx[a]);
    for (Index b = 0; b < n; ++b) cov(a, b) = dist.cov()(idx[a], idx[b]);
  }
  return GaussianDist::create(vars, std::move(mean), std::move(cov));
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s) {
  if (s.size() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double top = std::max(0.0, lambda.maxCoeff());
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(s.rows()) * top;
  for (Index i = 0; i < lambda.size(); ++i) lambda(i) = lambda(i) <= floor ? 0.0 : std::sqrt(lambda(i));
  const auto& v = eig.eigenvectors();
  return v * lambda.asDiagonal() * v.transpose();
}

double wasserstein2(const GaussianDist& p, const GaussianDist& q) {
  require_same_variables(p, q);
  if (p == q) return 0.0;
  return lex_less(q, p) ? wasserstein2_ordered(q, p) : wasserstein2_ordered(p, q);
}

double kl_divergence(const GaussianDist& p, const GaussianDist& q, double ridge) {
  require_same_variables(p, q);
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ValidationError("ridge must be finite and >= 0");
  const auto n = static_cast<Index>(p.size());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> lp(p.cov() + ridge * eye);
  Eigen::LLT<Eigen::MatrixXd> lq(q.cov() + ridge * eye);
  if (lp.info() != Eigen::Success || lq.info() != Eigen::Success)
    throw SingularCovariance("covariance is singular; use a positive ridge");
  if (p == q) return 0.0;

  auto logdet = [](const Eigen::LLT<Eigen::MatrixXd>& l) {
    return 2.0 * l.matrixL().toDenseMatrix().diagonal().array().log().sum();
  };
  const Eigen::VectorXd diff = q.mean() - p.mean();
  const double trace = lq.solve(p.cov() + ridge * eye).trace();
  const double quad = diff.dot(lq.solve(diff));
  const double value = 0.5 * (trace + quad - static_cast<double>(n) + logdet(lq) - logdet(lp));
  return std::max(0.0, value);
}

double density(const GaussianDist& dist, const Eigen::VectorXd& x) {
  const auto n = static_cast<Index>(dist.size());
  if (x.size() != n) throw DimensionMismatch("point has the wrong dimension");
  Eigen::LLT<Eigen::MatrixXd> llt(dist.cov());
  if (llt.info() != Eigen::Success) throw SingularCovariance("density needs a nonsingular covariance");
  const Eigen::VectorXd z = llt.matrixL().solve(x - dist.mean());
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double log_norm = 0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + logdet);
  return std::exp(-0.5 * z.squaredNorm() - log_norm);
}

double partial_correlation(const GaussianDist& dist, std::size_t i, std::size_t j,
                           const std::vector<std::size_t>& given) {
  std::vector<Index> idx{static_cast<Index>(i), static_cast<Index>(j)};
  for (std::size_t k : given) idx.push_back(static_cast<Index>(k));
  const auto n = static_cast<Index>(idx.size());
  Eigen::MatrixXd block(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) block(a, b) = dist.cov()(idx[a], idx[b]);
  Eigen::LLT<Eigen::MatrixXd> llt(block);
  if (llt.info() != Eigen::Success)
    throw SingularCovariance("partial correlation needs a nonsingular covariance");
  const Eigen::MatrixXd prec = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
}

std::string Metric::name() const {
  return kind == MetricKind::kWasserstein2 ? "w2" : "kl";
}

Metric Metric::parse(std::string_view name, double ridge) {
  if (name == "w2") return w2();
  if (name == "kl") return kl(ridge);
  throw ValidationError("unknown metric '" + std::string(name) + "' (expected w2 or kl)");
}

double distance(const GaussianDist& p, const GaussianDist& q, const Metric& metric) {
  return metric.kind == MetricKind::kWasserstein2 ? wasserstein2(p, q)
                                                   : kl_divergence(p, q, metric.ridge);
}

}  // namespace percept
