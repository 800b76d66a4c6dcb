#include "percept/cli.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "percept/abstraction.hpp"
#include "percept/errors.hpp"
#include "percept/perception.hpp"
#include "percept/profile.hpp"
#include "percept/report.hpp"
#include "percept/sampler.hpp"

namespace percept::cli {

namespace {

// File problems are usage errors, not model errors.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ReceiverProfile load_profile(const std::string& path) {
  try {
    return parse_profile(read_file(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path + ":" + e.path(), e.reason());
  }
}

struct Common {
  std::string format = "json";
  std::string output;
  unsigned workers = 1;
};

struct MetricFlags {
  std::string metric = "w2";
  double ridge = 1e-9;
  std::string agg = "max";
  double epsilon = 0.01;
  std::string interventions;
  bool observational = false;
  double tol_coef = 1e-9;
  double tol_noise = 1e-9;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("-o,--output", c.output, "Write the report to a file instead of stdout");
  cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1U, 256U));
}

void add_metric(CLI::App* cmd, MetricFlags& m, bool with_agg) {
  cmd->add_option("--metric", m.metric, "Distribution distance")->check(CLI::IsMember({"w2", "kl"}));
  cmd->add_option("--ridge", m.ridge, "Ridge added to covariances for kl")->check(CLI::NonNegativeNumber);
  cmd->add_option("--interventions", m.interventions, "Intervention grid file");
  if (!with_agg) return;
  cmd->add_option("--agg", m.agg, "Aggregation over interventions")->check(CLI::IsMember({"max", "mean"}));
  cmd->add_option("--epsilon", m.epsilon, "Perception threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-coef", m.tol_coef, "Coefficient tolerance for kind classification")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-noise", m.tol_noise, "Noise tolerance for kind classification")
      ->check(CLI::PositiveNumber);
}

InterventionSet interventions_for(const MetricFlags& m, const ReceiverProfile& fallback) {
  if (m.observational) return InterventionSet{};
  if (!m.interventions.empty()) return parse_grid(read_file(m.interventions));
  return profile_interventions(fallback);
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

void emit(const Common& c, std::ostream& out, const std::string& bytes) {
  if (c.output.empty()) {
    out << bytes;
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file || !(file << bytes)) throw IoError("cannot write '" + c.output + "'");
}

}  // namespace

InterventionSet parse_grid(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("/", "expected an object");
  InterventionGrid grid;
  std::size_t max_order = 1;
  for (const auto& [key, value] : doc.items()) {
    if (key == "grids") {
      if (!value.is_object()) throw SchemaError("/grids", "expected an object");
      for (const auto& [var, values] : value.items()) {
        if (!values.is_array()) throw SchemaError("/grids/" + var, "expected an array");
        for (const auto& v : values)
          if (!v.is_number()) throw SchemaError("/grids/" + var, "expected numbers");
        grid[var] = values.get<std::vector<double>>();
      }
    } else if (key == "max_order") {
      if (!value.is_number_unsigned()) throw SchemaError("/max_order", "expected a non-negative integer");
      max_order = value.get<std::size_t>();
    } else {
      throw SchemaError("/" + key, "unknown key");
    }
  }
  return enumerate_interventions(grid, max_order);
}

InterventionSpec parse_do(std::string_view text) {
  std::vector<Assignment> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = text.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ValidationError("--do expects VAR=VALUE[,VAR=VALUE...], got '" + std::string(item) + "'");
    auto num = item.substr(eq + 1);
    double v = 0.0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), v);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size())
      throw ValidationError("--do: '" + std::string(num) + "' is not a number");
    out.emplace_back(std::string(item.substr(0, eq)), v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return InterventionSpec::make(std::move(out));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal perception analysis for linear-Gaussian receiver models", "percept"};
  app.require_subcommand(1);

  std::function<std::string()> action;

  // validate
  Common c_validate;
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a receiver profile");
  validate->add_option("profile", validate_path, "Receiver profile (JSON)")->required();
  add_common(validate, c_validate, "text");
  validate->callback([&] {
    action = [&] {
      const auto p = load_profile(validate_path);
      const auto scm = assemble_high_level(p);
      const auto edges = scm.graph().edge_count();
      if (parse_format(c_validate.format) == Format::kText)
        return "ok: graph acyclic, " + std::to_string(edges) + (edges == 1 ? " edge\n" : " edges\n");
      nlohmann::ordered_json j;
      j["schema"] = kReportSchema;
      j["receiver"] = p.id;
      j["ok"] = true;
      j["edges"] = edges;
      return j.dump(2) + "\n";
    };
  });

  // build
  Common c_build;
  std::string build_path, build_level = "high", build_tau;
  auto* build = app.add_subcommand("build", "Print the assembled model");
  build->add_option("profile", build_path, "Receiver profile (JSON)")->required();
  build->add_option("--level", build_level, "Model level")->check(CLI::IsMember({"high", "low"}));
  build->add_option("--tau", build_tau, "Override the profile's tau")->check(CLI::IsMember({"sum", "mean"}));
  add_common(build, c_build, "json");
  build->callback([&] {
    action = [&] {
      auto p = load_profile(build_path);
      if (!build_tau.empty()) p.tau = parse_tau(build_tau);
      const auto scm = build_level == "high" ? assemble_high_level(p) : assemble_low_level(p);
      return render_model(p.id, scm, parse_format(c_build.format));
    };
  });

  // distribution
  Common c_dist;
  std::string dist_path, dist_do, dist_level = "high";
  auto* dist = app.add_subcommand("distribution", "Print the implied Gaussian");
  dist->add_option("profile", dist_path, "Receiver profile (JSON)")->required();
  dist->add_option("--do", dist_do, "Intervention, e.g. Z=1,X2=0");
  dist->add_option("--level", dist_level, "Model level")->check(CLI::IsMember({"high", "low"}));
  add_common(dist, c_dist, "json");
  dist->callback([&] {
    action = [&] {
      const auto p = load_profile(dist_path);
      const auto spec = parse_do(dist_do);
      const auto scm = dist_level == "high" ? assemble_high_level(p) : assemble_low_level(p);
      return render_distribution(p.id, spec, implied_distribution(apply_do(scm, spec)),
                                 parse_format(c_dist.format));
    };
  });

  // sample
  Common c_sample;
  std::string sample_path, sample_do;
  std::size_t sample_n = 1000;
  std::uint64_t sample_seed = 0;
  auto* samp = app.add_subcommand("sample", "Draw ancestral samples as CSV");
  samp->add_option("profile", sample_path, "Receiver profile (JSON)")->required();
  samp->add_option("-n", sample_n, "Number of rows")->check(CLI::PositiveNumber);
  samp->add_option("--seed", sample_seed, "Generator seed");
  samp->add_option("--do", sample_do, "Intervention, e.g. Z=1");
  samp->add_option("-o,--output", c_sample.output, "Write CSV to a file instead of stdout");
  samp->add_option("--workers", c_sample.workers, "Worker threads")->check(CLI::Range(1U, 256U));
  samp->callback([&] {
    action = [&] {
      const auto p = load_profile(sample_path);
      const auto scm = apply_do(assemble_high_level(p), parse_do(sample_do));
      std::ostringstream csv;
      write_csv(csv, sample(scm, sample_n, sample_seed, c_sample.workers));
      return csv.str();
    };
  });

  // compare
  Common c_cmp;
  MetricFlags m_cmp;
  std::string cmp_a, cmp_b;
  auto* cmp = app.add_subcommand("compare", "Quantify perception between two receivers");
  cmp->add_option("a", cmp_a, "First receiver profile")->required();
  cmp->add_option("b", cmp_b, "Second receiver profile")->required();
  add_metric(cmp, m_cmp, true);
  cmp->add_flag("--observational", m_cmp.observational, "Only the null intervention");
  add_common(cmp, c_cmp, "json");
  cmp->callback([&] {
    action = [&] {
      const auto a = load_profile(cmp_a);
      const auto b = load_profile(cmp_b);
      const auto report = causal_perception(a, b, interventions_for(m_cmp, a),
                                            Metric::parse(m_cmp.metric, m_cmp.ridge),
                                            parse_aggregation(m_cmp.agg), m_cmp.epsilon,
                                            {m_cmp.tol_coef, m_cmp.tol_noise}, c_cmp.workers);
      return render_report(report, parse_format(c_cmp.format));
    };
  });

  // consistency
  Common c_cons;
  MetricFlags m_cons;
  std::string cons_path, cons_tau, cons_omega = "equal-split";
  double cons_tol = 1e-9;
  auto* cons = app.add_subcommand("consistency", "Verify the descriptor-to-variable exact transformation");
  cons->add_option("profile", cons_path, "Receiver profile (JSON)")->required();
  cons->add_option("--tau", cons_tau, "Override the profile's tau")->check(CLI::IsMember({"sum", "mean"}));
  cons->add_option("--tol", cons_tol, "Pass tolerance per intervention")->check(CLI::NonNegativeNumber);
  cons->add_option("--omega", cons_omega, "equal-split or single-descriptor:<k>");
  add_metric(cons, m_cons, false);
  add_common(cons, c_cons, "json");
  cons->callback([&] {
    action = [&] {
      auto p = load_profile(cons_path);
      if (!cons_tau.empty()) p.tau = parse_tau(cons_tau);
      const auto report = check_exact_transformation(p, interventions_for(m_cons, p),
                                                     Metric::parse(m_cons.metric, m_cons.ridge), cons_tol,
                                                     OmegaRule::parse(cons_omega), c_cons.workers);
      return render_report(report, parse_format(c_cons.format));
    };
  });

  // pib
  Common c_pib;
  MetricFlags m_pib;
  std::string pib_ref;
  std::vector<std::string> pib_others;
  auto* pib = app.add_subcommand("pib", "Rank receivers by deviation from a representative receiver");
  pib->add_option("--reference", pib_ref, "Representative receiver profile")->required();
  pib->add_option("profiles", pib_others, "Receivers to rank")->required();
  add_metric(pib, m_pib, true);
  pib->add_flag("--observational", m_pib.observational, "Only the null intervention");
  add_common(pib, c_pib, "json");
  pib->callback([&] {
    action = [&] {
      const auto ref = load_profile(pib_ref);
      std::vector<ReceiverProfile> others;
      for (const auto& path : pib_others) others.push_back(load_profile(path));
      PibReport report{ref.id, Metric::parse(m_pib.metric, m_pib.ridge), parse_aggregation(m_pib.agg),
                       m_pib.epsilon, {}};
      report.ranking = pib_report(ref, others, interventions_for(m_pib, ref), report.metric,
                                  report.aggregation, report.epsilon, {m_pib.tol_coef, m_pib.tol_noise},
                                  c_pib.workers);
      return render_report(report, parse_format(c_pib.format));
    };
  });

  // fallacy
  Common c_fal;
  double joint = 0.0, pa = 0.0, pb = 0.0;
  auto* fal = app.add_subcommand("fallacy", "Check the conjunction rule");
  fal->add_option("--joint", joint, "P(A and B)")->required();
  fal->add_option("--pa", pa, "P(A)")->required();
  fal->add_option("--pb", pb, "P(B)")->required();
  add_common(fal, c_fal, "json");
  fal->callback([&] {
    action = [&] { return render_report(check_conjunction(joint, pa, pb), parse_format(c_fal.format)); };
  });

  if (!args.empty() && !args.front().starts_with("-") && app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "error: unknown command '" << one_line(args.front()) << "'\n";
    return kExitUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  // Every command writes through `emit`; sample has no --format.
  const Common* common = nullptr;
  for (auto [cmd, c] : {std::pair{validate, &c_validate}, {build, &c_build}, {dist, &c_dist},
                        {samp, &c_sample}, {cmp, &c_cmp}, {cons, &c_cons}, {pib, &c_pib}, {fal, &c_fal}})
    if (cmd->parsed()) common = c;

  try {
    emit(*common, out, action());
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << one_line(e.what()) << "\n";
    return kExitInternal;
  }
}

}  // namespace percept::cli
