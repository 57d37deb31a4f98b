#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace semidelta {

using cplx = std::complex<double>;

// Invalid physical or state parameters (Re sigma <= 0, hbar <= 0, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Structural misuse: mismatched grids, empty sample sets, ...
struct GridError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A quadrature failed to reach its tolerance; carries the best estimate.
struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& what, cplx best, double achieved)
      : std::runtime_error(what), best_estimate(best), achieved_error(achieved) {}
  cplx best_estimate;
  double achieved_error;
};

// Operation called outside the parameter regime it is defined for.
struct RegimeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace semidelta
