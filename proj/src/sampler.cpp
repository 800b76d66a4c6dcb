#include "percept/sampler.hpp"

#include <cmath>
#include <numbers>

#include "percept/errors.hpp"
#include "percept/format.hpp"
#include "percept/parallel.hpp"

namespace percept {

namespace {

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> shared_variables(const LinearScm& a, const LinearScm& b) {
  std::vector<std::string> out;
  for (const auto& n : a.graph().nodes())
    if (b.graph().find(n)) out.push_back(n);
  return out;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_key(std::uint64_t seed, std::uint64_t variable, std::uint64_t block) {
  return mix64(mix64(mix64(seed) ^ variable) ^ block);
}

Xoshiro256::Xoshiro256(std::uint64_t key) {
  for (auto& word : s_) {
    key += kGolden;
    word = mix64(key);
  }
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

void standard_normals(Xoshiro256& rng, double* out, std::size_t count) {
  std::size_t k = 0;
  while (k < count) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[k++] = r * std::cos(angle);
    if (k < count) out[k++] = r * std::sin(angle);
  }
}

SampleMatrix sample(const LinearScm& scm, std::size_t n, std::uint64_t seed, unsigned workers) {
  if (n == 0) throw ValidationError("sample size must be at least 1");
  const auto& g = scm.graph();
  const std::size_t p = g.size();
  SampleMatrix out{g.nodes(), Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p)),
                   seed, n};
  const std::size_t blocks = (n + kSampleBlockRows - 1) / kSampleBlockRows;
  const auto& w = scm.weights();

  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t lo = b * kSampleBlockRows;
    const std::size_t rows = std::min(kSampleBlockRows, n - lo);
    const auto r0 = static_cast<Eigen::Index>(lo);
    const auto nr = static_cast<Eigen::Index>(rows);
    std::vector<double> z(rows);
    for (std::size_t j : g.topological_order()) {
      const auto jj = static_cast<Eigen::Index>(j);
      const auto& noise = scm.noise(j);
      auto col = out.rows.col(jj).segment(r0, nr);
      if (noise.var > 0.0) {
        Xoshiro256 rng(substream_key(seed, j, b));
        standard_normals(rng, z.data(), rows);
        const double sd = std::sqrt(noise.var);
        for (Eigen::Index r = 0; r < nr; ++r) col(r) = noise.mean + sd * z[static_cast<std::size_t>(r)];
      } else {
        col.setConstant(noise.mean);
      }
      for (std::size_t k : g.parents(j)) {
        const double alpha = w(jj, static_cast<Eigen::Index>(k));
        col += alpha * out.rows.col(static_cast<Eigen::Index>(k)).segment(r0, nr);
      }
    }
  });
  return out;
}

Moments empirical_moments(const SampleMatrix& samples) {
  const auto n = samples.rows.rows();
  if (n < 2) throw TooFewRows("empirical moments need at least 2 rows");
  Moments m;
  m.mean = samples.rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rows.rowwise() - m.mean.transpose();
  m.cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  m.cov = 0.5 * (m.cov + m.cov.transpose()).eval();
  return m;
}

GaussianDist fit_gaussian(const SampleMatrix& samples) {
  auto m = empirical_moments(samples);
  return GaussianDist::create(samples.variables, std::move(m.mean), std::move(m.cov));
}

double mc_distance(const LinearScm& a, const LinearScm& b, const InterventionSpec& spec,
                   std::size_t n, std::uint64_t seed, const Metric& metric, unsigned workers) {
  const auto shared = shared_variables(a, b);
  if (shared.empty()) throw NoSharedVariables("models share no variables");
  const auto pa = fit_gaussian(sample(apply_do(a, spec), n, seed, workers));
  const auto pb = fit_gaussian(sample(apply_do(b, spec), n, mix64(seed ^ kGolden), workers));
  return distance(marginal(pa, shared), marginal(pb, shared), metric);
}

void write_csv(std::ostream& out, const SampleMatrix& samples) {
  for (std::size_t j = 0; j < samples.variables.size(); ++j)
    out << (j ? "," : "") << csv_field(samples.variables[j]);
  out << "\r\n";
  for (Eigen::Index r = 0; r < samples.rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < samples.rows.cols(); ++c)
      out << (c ? "," : "") << format_double(samples.rows(r, c));
    out << "\r\n";
  }
}

}  // namespace percept
