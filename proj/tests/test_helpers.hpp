#pragma once

#include <cmath>
#include <limits>

#include "archicop/family.hpp"
#include "archicop/errors.hpp"

namespace test {

inline archicop::Family fam(char c) {
  switch (c) {
    case 'A': return archicop::Family::A;
    case 'C': return archicop::Family::C;
    case 'F': return archicop::Family::F;
    case 'G': return archicop::Family::G;
    default: return archicop::Family::J;
  }
}

inline double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::fabs(got - want) / std::max(std::fabs(want), std::numeric_limits<double>::min());
}

// Relative error away from zero, absolute error near it.
inline double mixed_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace test
