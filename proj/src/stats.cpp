#include "stats.hpp"

#include <cmath>

#include "errors.hpp"

namespace sic {

static constexpr double kZ95 = 1.959963984540054;

EstimateCI wilson_ci(long long successes, long long n, uint64_t seed) {
  if (n < 0 || successes < 0 || successes > n)
    throw DomainError("wilson_ci: bad counts");
  EstimateCI e;
  e.reps = n;
  e.seed = seed;
  if (n == 0) return e;
  const double p = (double)successes / (double)n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  e.value = p;
  e.se = std::sqrt(p * (1.0 - p) / n);
  e.lo = center - half;
  e.hi = center + half;
  if (e.lo < 0.0) e.lo = 0.0;
  if (e.hi > 1.0) e.hi = 1.0;
  // Wilson interval always contains the MLE
  if (e.lo > e.value) e.lo = e.value;
  if (e.hi < e.value) e.hi = e.value;
  return e;
}

EstimateCI mean_ci(const std::vector<double>& xs, uint64_t seed) {
  EstimateCI e;
  e.reps = (long long)xs.size();
  e.seed = seed;
  if (xs.empty()) return e;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= (double)xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = xs.size() > 1 ? ss / (double)(xs.size() - 1) : 0.0;
  e.value = m;
  e.se = std::sqrt(var / (double)xs.size());
  e.lo = m - kZ95 * e.se;
  e.hi = m + kZ95 * e.se;
  return e;
}

EstimateCI exact_value(double v) {
  EstimateCI e;
  e.value = e.lo = e.hi = v;
  return e;
}

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("linear_fit: need >= 2 points");
  LinFit f;
  f.n = (int)x.size();
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < f.n; i++) { mx += x[i]; my += y[i]; }
  mx /= f.n;
  my /= f.n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < f.n; i++) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("linear_fit: degenerate x");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

double z_score(const EstimateCI& a, const EstimateCI& b) {
  const double s2 = a.se * a.se + b.se * b.se;
  if (s2 == 0.0) return 0.0;
  return (a.value - b.value) / std::sqrt(s2);
}

} // namespace sic
