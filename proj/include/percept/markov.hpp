#pragma once

#include <string>
#include <vector>

#include "percept/scm.hpp"

namespace percept {

/// "x ⟂ y | given" together with the analytic partial correlation.
struct CiCheck {
  std::string x;
  std::string y;
  std::vector<std::string> given;
  double value = 0.0;  // |partial correlation|
  bool pass = false;
};

/// Local Markov check: for every node i and every non-descendant j that
/// is not a parent, |pcorr(X_i, X_j | X_pa(i))| <= tol. Uses the implied
/// covariance, not samples. Rows are ordered by (i, j) declaration index.
/// Throws SingularCovariance if any noise variance is zero.
std::vector<CiCheck> verify_markov(const LinearScm& scm, double tol);

/// Independencies the graph does not entail: every pair (i, j) and
/// conditioning set S with i, j d-connected given S yet
/// |pcorr(X_i, X_j | S)| <= tol. Conditioning sets are enumerated up to
/// `max_conditioning` elements. Entries come back with pass = false.
/// Throws SingularCovariance if any noise variance is zero.
std::vector<CiCheck> verify_faithfulness(const LinearScm& scm, double tol,
                                         std::size_t max_conditioning = SIZE_MAX);

}  // namespace percept
