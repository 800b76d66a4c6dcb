#include "percept/scm.hpp"

#include <cmath>

#include "percept/errors.hpp"

namespace percept {

namespace {

void check_noise(const std::string& node, const NoiseParams& n) {
  if (!std::isfinite(n.mean) || !std::isfinite(n.var))
    throw NonFiniteValue("noise for '" + node + "' must be finite");
  if (n.var < 0.0) throw ValidationError("noise variance for '" + node + "' is negative");
}

}  // namespace

LinearScm LinearScm::create(CausalGraph graph, const CoefficientMap& coefficients,
                            const NoiseMap& noise) {
  const std::size_t p = graph.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                            static_cast<Eigen::Index>(p));
  for (const auto& [edge, alpha] : coefficients) {
    auto f = graph.find(edge.first);
    auto t = graph.find(edge.second);
    if (!f || !t || !graph.has_edge(*f, *t))
      throw ValidationError("coefficient for " + edge.first + " -> " + edge.second +
                            " has no matching edge");
    w(static_cast<Eigen::Index>(*t), static_cast<Eigen::Index>(*f)) = alpha;
  }
  if (coefficients.size() != graph.edge_count())
    throw ValidationError("every edge needs exactly one coefficient");

  std::vector<NoiseParams> ns;
  ns.reserve(p);
  for (const auto& name : graph.nodes()) {
    auto it = noise.find(name);
    if (it == noise.end()) throw ValidationError("missing noise parameters for '" + name + "'");
    ns.push_back(it->second);
  }
  if (noise.size() != p) throw ValidationError("noise given for an undeclared node");
  return from_matrix(std::move(graph), std::move(w), std::move(ns));
}

LinearScm LinearScm::from_matrix(CausalGraph graph, Eigen::MatrixXd weights,
                                 std::vector<NoiseParams> noise) {
  const auto p = static_cast<Eigen::Index>(graph.size());
  if (weights.rows() != p || weights.cols() != p || noise.size() != graph.size())
    throw DimensionMismatch("weights/noise do not match the graph size");
  for (Eigen::Index c = 0; c < p; ++c) {
    for (Eigen::Index r = 0; r < p; ++r) {
      double a = weights(c, r);
      if (!std::isfinite(a)) throw NonFiniteValue("coefficients must be finite");
      if (a != 0.0 && !graph.has_edge(static_cast<std::size_t>(r), static_cast<std::size_t>(c)))
        throw ValidationError("nonzero coefficient off the edge set");
    }
    check_noise(graph.name(static_cast<std::size_t>(c)), noise[static_cast<std::size_t>(c)]);
  }
  return LinearScm(std::move(graph), std::move(weights), std::move(noise));
}

double LinearScm::coefficient(std::string_view parent, std::string_view child) const {
  std::size_t f = graph_.index_of(parent);
  std::size_t t = graph_.index_of(child);
  if (!graph_.has_edge(f, t))
    throw ValidationError("no edge " + std::string(parent) + " -> " + std::string(child));
  return weights_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f));
}

LinearScm::CoefficientMap LinearScm::coefficients() const {
  CoefficientMap out;
  for (auto [f, t] : graph_.edges())
    out[{graph_.name(f), graph_.name(t)}] =
        weights_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f));
  return out;
}

bool operator==(const LinearScm& a, const LinearScm& b) {
  if (!(a.graph_ == b.graph_)) return false;
  if (a.coefficients() != b.coefficients()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t j = b.graph_.index_of(a.graph_.name(i));
    if (!(a.noise_[i] == b.noise_[j])) return false;
  }
  return true;
}

}  // namespace percept
