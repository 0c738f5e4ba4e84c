#pragma once

#include <vector>

#include "gwlab/offspring.hpp"

namespace laws {

// Two-point family p0 at 0 and 1-p0 at 2; mean = 2(1-p0).
inline gwlab::OffspringLaw two_point(double p0) {
  return gwlab::OffspringLaw::from_probs({p0, 0.0, 1.0 - p0});
}

inline gwlab::OffspringLaw subcritical() { return two_point(0.75); }   // m = 0.5
inline gwlab::OffspringLaw critical() { return two_point(0.5); }       // m = 1
inline gwlab::OffspringLaw supercritical() { return two_point(0.25); } // m = 1.5

inline gwlab::OffspringLaw delta_one() {
  return gwlab::OffspringLaw::point_mass(1);
}

// Mass 1/2 at 1 and 1/2 at 2: no extinction possible, mean 1.5.
inline gwlab::OffspringLaw one_or_two() {
  return gwlab::OffspringLaw::from_probs({0.0, 0.5, 0.5});
}

// Finite law: Poisson truncated by the pushforward min(x, 20). At these
// means the clipped mass is ~1e-20, so the law is critical/sub/super
// exactly as lambda says, within 1e-12.
inline gwlab::OffspringLaw trunc_poisson(double lambda) {
  return truncate(gwlab::OffspringLaw::poisson(lambda), 20);
}

inline std::vector<gwlab::OffspringLaw> finite_family() {
  return {subcritical(),        critical(),         supercritical(),
          delta_one(),          one_or_two(),       trunc_poisson(0.8),
          trunc_poisson(1.0),   trunc_poisson(1.2)};
}

}  // namespace laws
