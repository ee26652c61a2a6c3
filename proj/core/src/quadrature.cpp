#include "dirquant/quadrature.hpp"

#include <cmath>

#include "dirquant/error.hpp"

namespace dirquant {

namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth,
              int forced) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  const double floor = 1e-15 * std::abs(left + right);
  if (forced <= 0 && std::abs(delta) <= 15.0 * std::max(tol, floor)) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    throw Error(ErrorKind::kQuadratureFailure, "adaptive Simpson depth limit reached");
  }
  return refine(f, Panel{p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1,
                forced - 1) +
         refine(f, Panel{p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1,
                forced - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth, int min_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
    throw Error(ErrorKind::kQuadratureFailure, "integrand is not finite");
  }
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double result = refine(f, Panel{a, fa, m, fm, b, fb, whole}, abs_tol, max_depth, min_depth);
  if (!std::isfinite(result)) {
    throw Error(ErrorKind::kQuadratureFailure, "integral is not finite");
  }
  return result;
}

}  // namespace dirquant
