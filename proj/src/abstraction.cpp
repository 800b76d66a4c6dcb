#include "percept/abstraction.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <set>

#include "percept/errors.hpp"
#include "percept/parallel.hpp"

namespace percept {

std::string OmegaRule::name() const {
  return kind == Kind::kEqualSplit ? "equal-split" : "single-descriptor:" + std::to_string(index);
}

OmegaRule OmegaRule::parse(std::string_view s) {
  if (s == "equal-split") return equal_split();
  constexpr std::string_view prefix = "single-descriptor:";
  if (s.substr(0, prefix.size()) == prefix) {
    std::size_t k = 0;
    auto rest = s.substr(prefix.size());
    auto res = std::from_chars(rest.data(), rest.data() + rest.size(), k);
    if (res.ec == std::errc{} && res.ptr == rest.data() + rest.size() && !rest.empty())
      return single_descriptor(k);
  }
  throw ValidationError("unknown omega rule '" + std::string(s) +
                        "' (expected equal-split or single-descriptor:<k>)");
}

InterventionSpec omega(const InterventionSpec& spec, const ReceiverProfile& profile,
                       const OmegaRule& rule) {
  std::vector<Assignment> low;
  for (const auto& [var, value] : spec.assignments()) {
    const auto& ds = profile.descriptors_of(var);
    if (ds.empty()) throw MissingDescriptors("cannot map do(" + var + ") : it has no descriptors");
    if (rule.kind == OmegaRule::Kind::kEqualSplit) {
      const double share = value / static_cast<double>(ds.size());
      for (const auto& d : ds) low.emplace_back(descriptor_node(var, d), share);
    } else {
      if (rule.index >= ds.size())
        throw ValidationError("descriptor index " + std::to_string(rule.index) + " out of range for '" +
                              var + "'");
      for (std::size_t k = 0; k < ds.size(); ++k)
        low.emplace_back(descriptor_node(var, ds[k]), k == rule.index ? value : 0.0);
    }
  }
  return InterventionSpec::make(std::move(low));
}

std::vector<std::string> abstracted_variables(const ReceiverProfile& profile) {
  std::vector<std::string> out;
  for (const auto& v : profile.variables)
    if (!profile.descriptors_of(v).empty()) out.push_back(v);
  return out;
}

GaussianDist tau_pushforward(const GaussianDist& low, const ReceiverProfile& profile) {
  const auto vars = abstracted_variables(profile);
  std::set<std::string> expected;
  for (const auto& v : vars)
    for (const auto& d : profile.descriptors_of(v)) expected.insert(descriptor_node(v, d));
  if (std::set<std::string>(low.variables().begin(), low.variables().end()) != expected ||
      low.size() != expected.size())
    throw VariableMismatch("distribution is not over the profile's descriptors");

  const auto rows = static_cast<Eigen::Index>(vars.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(low.size()));
  for (Eigen::Index r = 0; r < rows; ++r)
    for (const auto& d : profile.descriptors_of(vars[static_cast<std::size_t>(r)]))
      t(r, static_cast<Eigen::Index>(low.index_of(descriptor_node(vars[static_cast<std::size_t>(r)], d)))) = 1.0;

  Eigen::VectorXd mean = t * low.mean();
  Eigen::MatrixXd cov = t * low.cov() * t.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianDist::create(vars, std::move(mean), std::move(cov));
}

LinearScm matched_high_level(const ReceiverProfile& profile) {
  const auto low = assemble_low_level(profile);
  ReceiverProfile matched = profile;
  for (const auto& v : abstracted_variables(profile)) {
    NoiseParams sum{0.0, 0.0};
    for (const auto& d : profile.descriptors_of(v)) {
      const auto& n = low.noise(low.graph().index_of(descriptor_node(v, d)));
      sum.mean += n.mean;
      sum.var += n.var;
    }
    matched.noise[v] = sum;
  }
  return assemble_high_level(matched);
}

ConsistencyReport check_exact_transformation(const ReceiverProfile& profile,
                                             const InterventionSet& iset_high,
                                             const Metric& metric, double tol,
                                             const OmegaRule& rule, unsigned workers) {
  if (!(tol >= 0.0)) throw ValidationError("tolerance must be non-negative");
  const auto low = assemble_low_level(profile);
  const auto high = matched_high_level(profile);

  ConsistencyReport report{profile.id, profile.tau, metric, rule, tol,
                           abstracted_variables(profile), {}, true};
  if (report.variables.empty())
    throw MissingDescriptors("profile '" + profile.id + "' has no descriptors to abstract");

  const auto& specs = iset_high.specs();
  std::vector<InterventionSpec> low_specs;
  for (const auto& s : specs) low_specs.push_back(omega(s, profile, rule));
  // The high-level marginal is taken over the abstracted variables.
  for (const auto& s : specs)
    for (const auto& t : s.targets())
      if (!high.graph().find(t)) throw UnknownTarget("intervention target '" + t + "' is not in the model");

  std::vector<std::optional<ConsistencyRow>> rows(specs.size());
  parallel_for(specs.size(), workers, [&](std::size_t k) {
    const auto pushed = tau_pushforward(implied_distribution(apply_do(low, low_specs[k])), profile);
    const auto target = marginal(implied_distribution(apply_do(high, specs[k])), report.variables);
    const double d = distance(pushed, target, metric);
    rows[k] = ConsistencyRow{specs[k], low_specs[k], d, d <= tol};
  });
  for (auto& r : rows) {
    report.pass = report.pass && r->pass;
    report.rows.push_back(std::move(*r));
  }
  return report;
}

}  // namespace percept
