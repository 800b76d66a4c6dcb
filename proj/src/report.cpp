#include "percept/report.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "percept/errors.hpp"
#include "percept/format.hpp"
#include "percept/graph.hpp"

namespace percept {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json assignments_json(const InterventionSpec& spec) {
  ordered_json out = ordered_json::object();
  for (const auto& [name, value] : spec.assignments()) out[name] = value;
  return out;
}

ordered_json header() {
  ordered_json j;
  j["schema"] = kReportSchema;
  return j;
}

void put_metric(ordered_json& j, const Metric& m) {
  j["metric"] = m.name();
  if (m.kind == MetricKind::kKullbackLeibler) j["ridge"] = m.ridge;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string metric_label(const Metric& m) {
  return m.kind == MetricKind::kKullbackLeibler ? "kl (ridge " + format_double(m.ridge) + ")" : "w2";
}

// Display width in code points (labels may hold "∅").
std::size_t cells(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
  return n;
}

// Left-aligned table with two spaces between columns.
std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], cells(r[c]));
    }
  std::ostringstream out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - cells(r[c]) + 2, ' ');
    }
    out << "  " << line << "\n";
  }
  return out.str();
}

}  // namespace

Format parse_format(std::string_view s) {
  if (s == "json") return Format::kJson;
  if (s == "text") return Format::kText;
  throw ValidationError("unknown format '" + std::string(s) + "' (expected json or text)");
}

std::string render_report(const PerceptionReport& r, Format format) {
  if (format == Format::kJson) {
    auto j = header();
    j["receivers"] = r.receivers;
    j["shared_variables"] = r.shared_variables;
    put_metric(j, r.metric);
    j["aggregation"] = to_string(r.aggregation);
    j["epsilon"] = r.epsilon;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.interventions)
      rows.push_back({{"do", assignments_json(row.spec)}, {"distance", row.distance}});
    j["interventions"] = rows;
    j["aggregate_distance"] = r.aggregate_distance;
    j["perception"] = r.perception;
    j["kind"] = to_string(r.kind);
    return dump(j);
  }
  std::ostringstream out;
  out << "receivers:  " << r.receivers[0] << " vs " << r.receivers[1] << "\n";
  out << "metric:     " << metric_label(r.metric) << ", aggregation " << to_string(r.aggregation)
      << ", epsilon " << format_double(r.epsilon) << "\n";
  std::vector<std::vector<std::string>> rows{{"intervention", "distance"}};
  for (const auto& row : r.interventions) rows.push_back({row.spec.label(), format_double(row.distance)});
  out << table(rows);
  out << "aggregate:  " << format_double(r.aggregate_distance) << "\n";
  out << "perception: " << (r.perception ? "yes" : "no") << "\n";
  out << "kind:       " << to_string(r.kind) << "\n";
  return out.str();
}

std::string render_report(const ConsistencyReport& r, Format format) {
  if (format == Format::kJson) {
    auto j = header();
    j["receiver"] = r.receiver;
    j["tau"] = to_string(r.tau);
    put_metric(j, r.metric);
    j["omega"] = r.omega.name();
    j["tolerance"] = r.tolerance;
    j["variables"] = r.variables;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"do", assignments_json(row.high)},
                      {"do_low", assignments_json(row.low)},
                      {"distance", row.distance},
                      {"pass", row.pass}});
    j["rows"] = rows;
    j["pass"] = r.pass;
    return dump(j);
  }
  std::ostringstream out;
  out << "receiver:  " << r.receiver << " (tau " << to_string(r.tau) << ", omega " << r.omega.name()
      << ")\n";
  out << "metric:    " << metric_label(r.metric) << ", tolerance " << format_double(r.tolerance) << "\n";
  std::vector<std::vector<std::string>> rows{{"intervention", "distance", "result"}};
  for (const auto& row : r.rows)
    rows.push_back({row.high.label(), format_double(row.distance), row.pass ? "pass" : "FAIL"});
  out << table(rows);
  out << "verdict:   " << (r.pass ? "exact transformation holds" : "NOT an exact transformation") << "\n";
  return out.str();
}

std::string render_report(const FallacyVerdict& v, Format format) {
  if (format == Format::kJson) {
    auto j = header();
    j["p_joint"] = v.p_joint;
    j["p_a"] = v.p_a;
    j["p_b"] = v.p_b;
    j["violated"] = v.violated;
    j["margin"] = v.margin;
    return dump(j);
  }
  std::ostringstream out;
  out << (v.violated ? "VIOLATED" : "ok") << ": P(A and B) = " << format_double(v.p_joint)
      << ", min(P(A), P(B)) = " << format_double(std::min(v.p_a, v.p_b)) << ", margin "
      << format_double(v.margin) << "\n";
  return out.str();
}

std::string render_report(const PibReport& r, Format format) {
  if (format == Format::kJson) {
    auto j = header();
    j["reference"] = r.reference;
    put_metric(j, r.metric);
    j["aggregation"] = to_string(r.aggregation);
    j["epsilon"] = r.epsilon;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.ranking)
      rows.push_back({{"id", row.id}, {"aggregate_distance", row.aggregate_distance},
                      {"kind", to_string(row.kind)}});
    j["ranking"] = rows;
    return dump(j);
  }
  std::ostringstream out;
  out << "reference: " << r.reference << " (" << metric_label(r.metric) << ", "
      << to_string(r.aggregation) << ")\n";
  std::vector<std::vector<std::string>> rows{{"rank", "receiver", "distance", "kind"}};
  for (std::size_t k = 0; k < r.ranking.size(); ++k)
    rows.push_back({std::to_string(k + 1), r.ranking[k].id, format_double(r.ranking[k].aggregate_distance),
                    to_string(r.ranking[k].kind)});
  out << table(rows);
  return out.str();
}

std::string render_model(const std::string& receiver, const LinearScm& scm, Format format) {
  const auto& g = scm.graph();
  const auto factorization = render_factorization(g, factorize(g));
  if (format == Format::kJson) {
    auto j = header();
    j["receiver"] = receiver;
    j["variables"] = g.nodes();
    ordered_json edges = ordered_json::array();
    for (auto [f, t] : g.edges())
      edges.push_back({{"from", g.name(f)},
                       {"to", g.name(t)},
                       {"coefficient", scm.coefficient(g.name(f), g.name(t))}});
    j["edges"] = edges;
    ordered_json noise = ordered_json::object();
    for (std::size_t i = 0; i < g.size(); ++i)
      noise[g.name(i)] = {{"mean", scm.noise(i).mean}, {"var", scm.noise(i).var}};
    j["noise"] = noise;
    j["factorization"] = factorization;
    return dump(j);
  }
  std::ostringstream out;
  out << "receiver: " << receiver << "\n";
  std::vector<std::vector<std::string>> rows{{"edge", "coefficient"}};
  for (auto [f, t] : g.edges())
    rows.push_back({g.name(f) + " -> " + g.name(t), format_double(scm.coefficient(g.name(f), g.name(t)))});
  out << table(rows);
  std::vector<std::vector<std::string>> noise{{"variable", "noise mean", "noise var"}};
  for (std::size_t i = 0; i < g.size(); ++i)
    noise.push_back({g.name(i), format_double(scm.noise(i).mean), format_double(scm.noise(i).var)});
  out << table(noise);
  out << "factorization: " << factorization << "\n";
  return out.str();
}

std::string render_distribution(const std::string& receiver, const InterventionSpec& spec,
                                const GaussianDist& dist, Format format) {
  const auto p = static_cast<Eigen::Index>(dist.size());
  if (format == Format::kJson) {
    auto j = header();
    j["receiver"] = receiver;
    j["do"] = assignments_json(spec);
    j["variables"] = dist.variables();
    ordered_json mean = ordered_json::array();
    ordered_json cov = ordered_json::array();
    for (Eigen::Index i = 0; i < p; ++i) {
      mean.push_back(dist.mean()(i));
      ordered_json row = ordered_json::array();
      for (Eigen::Index k = 0; k < p; ++k) row.push_back(dist.cov()(i, k));
      cov.push_back(row);
    }
    j["mean"] = mean;
    j["cov"] = cov;
    return dump(j);
  }
  std::ostringstream out;
  out << "receiver: " << receiver << ", intervention " << spec.label() << "\n";
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"variable", "mean"};
  for (const auto& v : dist.variables()) head.push_back("cov[" + v + "]");
  rows.push_back(head);
  for (Eigen::Index i = 0; i < p; ++i) {
    std::vector<std::string> row{dist.variables()[static_cast<std::size_t>(i)], format_double(dist.mean()(i))};
    for (Eigen::Index k = 0; k < p; ++k) row.push_back(format_double(dist.cov()(i, k)));
    rows.push_back(row);
  }
  out << table(rows);
  return out.str();
}

}  // namespace percept
