#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "percept/graph.hpp"

namespace percept {

struct NoiseParams {
  double mean = 0.0;
  double var = 1.0;

  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

/// Linear-Gaussian structural causal model
///   X_j := sum_{k in pa(j)} alpha_{k,j} X_k + U_j,   U_j ~ N(mean_j, var_j).
///
/// A zero variance is allowed and makes U_j a point mass; interventions
/// rely on this to pin a variable without dropping it from the model.
class LinearScm {
 public:
  using CoefficientMap = std::map<NamePair, double>;
  using NoiseMap = std::map<std::string, NoiseParams>;

  /// Coefficient keys must equal the graph's edge set exactly and every
  /// node needs noise parameters. Throws ValidationError otherwise.
  static LinearScm create(CausalGraph graph, const CoefficientMap& coefficients,
                          const NoiseMap& noise);

  /// Index-based form. `weights(child, parent)` holds the edge
  /// coefficient and must be zero off the edge set.
  static LinearScm from_matrix(CausalGraph graph, Eigen::MatrixXd weights,
                               std::vector<NoiseParams> noise);

  const CausalGraph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return graph_.size(); }

  /// Throws UnknownNode, or ValidationError when there is no such edge.
  double coefficient(std::string_view parent, std::string_view child) const;
  CoefficientMap coefficients() const;
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }

  const NoiseParams& noise(std::size_t i) const { return noise_.at(i); }
  const std::vector<NoiseParams>& noise() const noexcept { return noise_; }

  /// Structural equality: same labeled graph, coefficients and noise.
  friend bool operator==(const LinearScm& a, const LinearScm& b);

 private:
  LinearScm(CausalGraph g, Eigen::MatrixXd w, std::vector<NoiseParams> n)
      : graph_(std::move(g)), weights_(std::move(w)), noise_(std::move(n)) {}

  CausalGraph graph_;
  Eigen::MatrixXd weights_;
  std::vector<NoiseParams> noise_;
};

}  // namespace percept
