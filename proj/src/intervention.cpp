#include "percept/intervention.hpp"

#include <algorithm>
#include <cmath>

#include "percept/errors.hpp"
#include "percept/format.hpp"
#include "percept/parallel.hpp"

namespace percept {

InterventionSpec InterventionSpec::make(std::vector<Assignment> assignments) {
  std::sort(assignments.begin(), assignments.end(),
            [](const Assignment& a, const Assignment& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < assignments.size(); ++k) {
    const auto& [name, value] = assignments[k];
    if (!std::isfinite(value))
      throw NonFiniteValue("intervention value for '" + name + "' is not finite");
    if (k > 0 && assignments[k - 1].first == name)
      throw DuplicateTarget("variable '" + name + "' is assigned more than once");
  }
  InterventionSpec s;
  s.assignments_ = std::move(assignments);
  return s;
}

std::vector<std::string> InterventionSpec::targets() const {
  std::vector<std::string> out;
  for (const auto& a : assignments_) out.push_back(a.first);
  return out;
}

std::optional<double> InterventionSpec::value(std::string_view target) const {
  for (const auto& [name, v] : assignments_)
    if (name == target) return v;
  return std::nullopt;
}

std::string InterventionSpec::label() const {
  if (assignments_.empty()) return "∅";
  std::string out = "do(";
  for (std::size_t k = 0; k < assignments_.size(); ++k) {
    if (k) out += ", ";
    out += assignments_[k].first + "=" + format_double(assignments_[k].second);
  }
  return out + ")";
}

bool operator<(const InterventionSpec& a, const InterventionSpec& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  for (std::size_t k = 0; k < a.order(); ++k)
    if (a.assignments_[k].first != b.assignments_[k].first)
      return a.assignments_[k].first < b.assignments_[k].first;
  for (std::size_t k = 0; k < a.order(); ++k)
    if (a.assignments_[k].second != b.assignments_[k].second)
      return a.assignments_[k].second < b.assignments_[k].second;
  return false;
}

bool leq(const InterventionSpec& i, const InterventionSpec& j) {
  for (const auto& [name, v] : i.assignments()) {
    auto other = j.value(name);
    if (!other || *other != v) return false;
  }
  return true;
}

InterventionSet::InterventionSet(std::vector<InterventionSpec> specs) : specs_(std::move(specs)) {
  specs_.emplace_back();
  std::sort(specs_.begin(), specs_.end());
  specs_.erase(std::unique(specs_.begin(), specs_.end()), specs_.end());
}

bool InterventionSet::contains(const InterventionSpec& s) const {
  return std::binary_search(specs_.begin(), specs_.end(), s);
}

InterventionSet enumerate_interventions(const InterventionGrid& grid, std::size_t max_order) {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  for (const auto& [name, values] : grid) {
    for (double v : values)
      if (!std::isfinite(v)) throw NonFiniteValue("grid value for '" + name + "' is not finite");
    std::vector<double> vs = values;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (!vs.empty()) axes.emplace_back(name, std::move(vs));
  }

  std::vector<InterventionSpec> specs;
  const std::size_t n = axes.size();
  const std::size_t top = std::min(max_order, n);
  // Choose target subsets by index combination, then walk the value
  // product with an odometer.
  for (std::size_t order = 1; order <= top; ++order) {
    std::vector<std::size_t> pick(order);
    for (std::size_t k = 0; k < order; ++k) pick[k] = k;
    while (true) {
      std::vector<std::size_t> digit(order, 0);
      while (true) {
        std::vector<Assignment> as;
        for (std::size_t k = 0; k < order; ++k)
          as.emplace_back(axes[pick[k]].first, axes[pick[k]].second[digit[k]]);
        specs.push_back(InterventionSpec::make(std::move(as)));
        std::size_t k = order;
        while (k > 0 && ++digit[k - 1] == axes[pick[k - 1]].second.size()) digit[--k] = 0;
        if (k == 0) break;
      }
      std::size_t k = order;
      while (k > 0 && pick[k - 1] == n - order + (k - 1)) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t m = k; m < order; ++m) pick[m] = pick[m - 1] + 1;
    }
  }
  return InterventionSet(std::move(specs));
}

LinearScm apply_do(const LinearScm& scm, const InterventionSpec& spec) {
  if (spec.is_null()) return scm;
  const auto& g = scm.graph();
  std::vector<bool> target(g.size(), false);
  auto noise = scm.noise();
  Eigen::MatrixXd w = scm.weights();
  for (const auto& [name, value] : spec.assignments()) {
    auto idx = g.find(name);
    if (!idx) throw UnknownTarget("intervention target '" + name + "' is not in the model");
    target[*idx] = true;
    noise[*idx] = {value, 0.0};
    w.row(static_cast<Eigen::Index>(*idx)).setZero();
  }
  std::vector<NamePair> edges;
  for (auto [f, t] : g.edges())
    if (!target[t]) edges.emplace_back(g.name(f), g.name(t));
  return LinearScm::from_matrix(CausalGraph::build(g.nodes(), edges), std::move(w),
                                std::move(noise));
}

DistributionPoset::DistributionPoset(std::vector<PosetEntry> entries) : entries_(std::move(entries)) {
  const std::size_t n = entries_.size();
  order_.assign(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) order_[a][b] = percept::leq(entries_[a].spec, entries_[b].spec);
}

const GaussianDist* DistributionPoset::find(const InterventionSpec& spec) const {
  for (const auto& e : entries_)
    if (e.spec == spec) return &e.dist;
  return nullptr;
}

const GaussianDist& DistributionPoset::observational() const {
  if (const auto* d = find(InterventionSpec{})) return *d;
  throw ValidationError("poset has no observational entry");
}

DistributionPoset implied_poset(const LinearScm& scm, const InterventionSet& iset,
                                unsigned workers) {
  const auto& specs = iset.specs();
  // Validate targets up front so errors surface deterministically.
  for (const auto& s : specs)
    for (const auto& t : s.targets())
      if (!scm.graph().find(t))
        throw UnknownTarget("intervention target '" + t + "' is not in the model");

  std::vector<std::optional<GaussianDist>> dists(specs.size());
  parallel_for(specs.size(), workers,
               [&](std::size_t k) { dists[k] = implied_distribution(apply_do(scm, specs[k])); });
  std::vector<PosetEntry> entries;
  entries.reserve(specs.size());
  for (std::size_t k = 0; k < specs.size(); ++k) entries.push_back({specs[k], std::move(*dists[k])});
  return DistributionPoset(std::move(entries));
}

}  // namespace percept
