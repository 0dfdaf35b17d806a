#ifndef MAXPLUS_EXPONENT_HPP
#define MAXPLUS_EXPONENT_HPP

#include <cmath>
#include <limits>

#include "maxplus/semiring.hpp"

namespace maxplus {

// A Lyapunov exponent value, either closed-form or a Monte Carlo estimate.
// The point may be bottom (components whose products die out). The standard
// error is NaN exactly when it does not apply.
struct ExponentEstimate {
  enum class Method { kClosedForm, kMonteCarlo };

  TropicalScalar point = TropicalScalar::bottom();
  double se = std::numeric_limits<double>::quiet_NaN();
  Method method = Method::kClosedForm;
  long horizon = 0;
  int replicates = 0;
  int bottom_replicates = 0;

  bool has_se() const { return !std::isnan(se); }
  double se_or_zero() const { return has_se() ? se : 0.0; }

  static ExponentEstimate closed_form(TropicalScalar point) {
    ExponentEstimate e;
    e.point = point;
    e.method = Method::kClosedForm;
    return e;
  }
};

}  // namespace maxplus

#endif
