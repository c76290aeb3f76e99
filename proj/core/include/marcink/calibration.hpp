#pragma once

// Frozen calibration constants for the pointwise domination checks. The
// smoothing-projection kernels have integrable majorants, so the ratios
// |P^{l,near} w| / M1 M2 w and |P^{l,cone} w| / (M1 M2 w + M_dir w) are
// bounded; the constants below were measured by tests/marcink_calibrate
// over a 1000-sample sweep (random nonnegative weights, n in {64,128,256},
// a fan of (kappa, s, l) combinations) and frozen with 25% headroom.
// Regenerate with: build/tests/marcink_calibrate

namespace marcink::calibration {

// measured maxima: near 1.194988, cone 0.068905, single-window 1.118339
inline constexpr double kNearDominationC = 1.493735;
inline constexpr double kConeDominationC = 0.086131;
inline constexpr double kSingleWindowSupBoundC = 1.397923;

}  // namespace marcink::calibration
