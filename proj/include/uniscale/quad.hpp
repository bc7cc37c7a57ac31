#pragma once

#include <cstddef>
#include <functional>

namespace uniscale::quad {

struct Result {
  double value;
  double error;       // estimated bound on the absolute error
  std::size_t evals;  // integrand evaluations
};

// Adaptive Gauss-Kronrod 15(7) on [a, b] to an absolute tolerance.
// Bisects until the per-panel error estimates sum below abs_tol; panels
// narrower than ~1e3 ulp are accepted as-is so the recursion terminates.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 48);

}  // namespace uniscale::quad
