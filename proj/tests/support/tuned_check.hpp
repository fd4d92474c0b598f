#pragma once

#include "dualrail/tuneup.hpp"

namespace support {

inline constexpr double kChi = -6.283185307179586 * 1.066;

// Square check tuned against the simulator from the analytic (n, m) = (1, 2) guess.
inline const dualrail::TuneupResult& tuned_square() {
  using namespace dualrail;
  static const TuneupResult r = [] {
    const double X = std::abs(kChi);
    const auto gs = erasure_check_guess(kChi, 1, 2);
    const CheckParams start{gs.T_p, gs.g_bs, gs.amplitude, 0.0, gs.delta};
    const Bounds b{{0.5 * gs.T_p, 0.0, 0.0, -X, -X}, {2.0 * gs.T_p, kTwoPi * 2.05, X, X, X}};
    SquareTuneOptions o;
    o.chi = kChi;
    o.target_cost = 1e-7;
    return tune_square_erasure_check(start, b, o);
  }();
  return r;
}

inline dualrail::DriveSchedule tuned_check() {
  dualrail::SquareTuneOptions o;
  o.chi = kChi;
  return dualrail::erasure_check_schedule({kChi}, dualrail::to_square(tuned_square().params, o));
}

}  // namespace support
