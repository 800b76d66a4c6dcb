#include "percept/markov.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

#include "percept/errors.hpp"
#include "percept/gaussian.hpp"

namespace percept {

namespace {

GaussianDist nonsingular_implied(const LinearScm& scm, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  for (std::size_t i = 0; i < scm.size(); ++i)
    if (scm.noise(i).var <= 0.0)
      throw SingularCovariance("noise variance of '" + scm.graph().name(i) +
                               "' is zero; partial correlations are undefined");
  return implied_distribution(scm);
}

std::vector<std::string> names(const CausalGraph& g, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t k : idx) out.push_back(g.name(k));
  return out;
}

}  // namespace

std::vector<CiCheck> verify_markov(const LinearScm& scm, double tol) {
  const auto dist = nonsingular_implied(scm, tol);
  const auto& g = scm.graph();
  std::vector<CiCheck> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto desc = g.descendants(i);
    const auto& pa = g.parents(i);
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (j == i || desc[j] || g.has_edge(j, i)) continue;
      double v = std::abs(partial_correlation(dist, i, j, pa));
      out.push_back({g.name(i), g.name(j), names(g, pa), v, v <= tol});
    }
  }
  return out;
}

std::vector<CiCheck> verify_faithfulness(const LinearScm& scm, double tol,
                                         std::size_t max_conditioning) {
  const auto dist = nonsingular_implied(scm, tol);
  const auto& g = scm.graph();
  const std::size_t p = g.size();
  std::vector<CiCheck> out;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < p; ++k)
        if (k != i && k != j) rest.push_back(k);
      // Subsets in order of size, then by bitmask.
      const std::size_t limit = std::min(max_conditioning, rest.size());
      for (std::size_t size = 0; size <= limit; ++size) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
          if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
          std::vector<std::size_t> given;
          for (std::size_t b = 0; b < rest.size(); ++b)
            if (mask >> b & 1U) given.push_back(rest[b]);
          if (d_separated(g, std::vector<std::size_t>{i}, std::vector<std::size_t>{j}, given))
            continue;
          double v = std::abs(partial_correlation(dist, i, j, given));
          if (v <= tol) out.push_back({g.name(i), g.name(j), names(g, given), v, false});
        }
      }
    }
  }
  return out;
}

}  // namespace percept
