#pragma once

#include <cmath>

namespace boresight {

// Segment points and steepness of one mollified switching function.
struct SwitchSpec {
  double lower = 0.0;      // argument below which the switch is exactly 0
  double upper = 1.0;      // argument at and above which it is exactly 1
  double steepness = 2.0;  // must exceed 1 / (upper - lower)

  double midpoint() const { return 0.5 * (lower + upper); }

  static SwitchSpec with_scale(double lower, double upper, double scale = 2.0) {
    return SwitchSpec{lower, upper, scale / (upper - lower)};
  }

  void validate() const;  // throws ConfigInvalid
};

// Smooth monotone 0-to-1 switch: exactly 0 below lower, exactly 1 at and
// above upper, 1/2 at the midpoint, with all derivatives vanishing at the
// segment points.
double switching_function(double x, const SwitchSpec& spec);

}  // namespace boresight
