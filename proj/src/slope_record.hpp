#ifndef CHLAB_SLOPE_RECORD_HPP
#define CHLAB_SLOPE_RECORD_HPP

#include <limits>

namespace chlab {

// One sample of the tracked inflection point nu_t and slope s_t = u_x(nu_t),
// with the field data entering the slope evolution equation and the analytic
// envelope value (NaN when the envelope hypothesis does not apply).
struct SlopeRecord {
  double t = 0.0;
  double nu = 0.0;
  double s = 0.0;
  double u_at_nu = 0.0;
  double kconv_at_nu = 0.0;
  double envelope = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace chlab

#endif
