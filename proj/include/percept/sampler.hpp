#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "percept/gaussian.hpp"
#include "percept/intervention.hpp"
#include "percept/scm.hpp"

namespace percept {

/// xoshiro256** seeded through splitmix64.
///
/// Substreams: the normals for variable `v` in row block `b` (blocks of
/// kSampleBlockRows rows) come from the generator seeded with
///   key = mix64(mix64(mix64(seed) ^ v) ^ b)
/// where mix64 is the splitmix64 output function and the four state words
/// are the next four outputs of a splitmix64 sequence started at `key`.
/// Each block therefore depends only on (seed, v, b), never on which
/// worker produced it.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t key);
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t substream_key(std::uint64_t seed, std::uint64_t variable, std::uint64_t block);

inline constexpr std::size_t kSampleBlockRows = 4096;

/// Fills `out` with standard normals by Box–Muller: each pair of uniforms
/// (u1, u2) yields r·cos(2πu2) then r·sin(2πu2) with r = sqrt(-2 ln(1-u1)).
void standard_normals(Xoshiro256& rng, double* out, std::size_t count);

struct SampleMatrix {
  std::vector<std::string> variables;
  Eigen::MatrixXd rows;  // n × p, columns follow `variables`
  std::uint64_t seed = 0;
  std::size_t n = 0;
};

/// Ancestral sampling in topological order. Identical (scm, n, seed)
/// give bit-identical output for any worker count.
SampleMatrix sample(const LinearScm& scm, std::size_t n, std::uint64_t seed, unsigned workers = 1);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // unbiased (n - 1)
};

/// Throws TooFewRows when n < 2.
Moments empirical_moments(const SampleMatrix& samples);

/// Gaussian fitted to the samples.
GaussianDist fit_gaussian(const SampleMatrix& samples);

/// Brute-force counterpart of the analytic per-intervention distance:
/// intervene on both models, sample each from independent substreams,
/// fit Gaussians to the shared-variable marginals and compare them.
/// Throws NoSharedVariables.
double mc_distance(const LinearScm& a, const LinearScm& b, const InterventionSpec& spec,
                   std::size_t n, std::uint64_t seed, const Metric& metric, unsigned workers = 1);

/// RFC 4180 CSV: header row of variable names, values as shortest
/// round-trip decimals, CRLF line endings.
void write_csv(std::ostream& out, const SampleMatrix& samples);

}  // namespace percept
