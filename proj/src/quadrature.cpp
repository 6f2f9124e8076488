#include "ahlab/quadrature.hpp"

#include "ahlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ahlab {
namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

void refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth,
            QuadratureResult& acc) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  acc.evaluations += 2;
  const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) {
    acc.value += left + right + delta / 15.0;
    acc.error_estimate += std::abs(delta) / 15.0;
    return;
  }
  if (depth <= 0) throw Error(Errc::tolerance, "adaptive Simpson did not converge", p.m);
  refine(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1, acc);
  refine(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth) {
  QuadratureResult acc;
  if (a == b) return acc;
  if (!(tol > 0.0)) throw Error(Errc::precondition, "quadrature tolerance must be positive");
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  acc.evaluations = 3;
  refine(f, {a, fa, m, fm, b, fb, simpson(a, fa, fm, b, fb)}, tol, max_depth, acc);
  return acc;
}

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breaks, double tol, int max_depth) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> pts{lo};
  for (double x : breaks) {
    if (x > lo && x < hi) pts.push_back(x);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  QuadratureResult total;
  const double len = hi - lo;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] == pts[i]) continue;
    const double share = tol * (pts[i + 1] - pts[i]) / len;
    const QuadratureResult part =
        adaptive_simpson(f, pts[i], pts[i + 1], std::max(share, 1e-300), max_depth);
    total.value += part.value;
    total.error_estimate += part.error_estimate;
    total.evaluations += part.evaluations;
  }
  if (a > b) total.value = -total.value;
  return total;
}

}  // namespace ahlab
