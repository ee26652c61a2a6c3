#pragma once

#include <functional>

namespace dirquant {

// Adaptive Simpson with interval bisection. Stops refining a panel when the
// Richardson error estimate is below its share of `abs_tol` (floored at
// 1e-15 relative to the panel estimate). Throws kQuadratureFailure when the
// recursion depth limit is hit before the tolerance is met. The first
// `min_depth` levels are always bisected so that narrow peaks are not missed
// by the initial three-point rule.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 50, int min_depth = 6);

}  // namespace dirquant
