#pragma once
#include <cstdint>
#include <vector>

namespace sic {

// Monte Carlo estimate with a 95% interval. For proportions the interval is
// Wilson (not Wald): the probabilities of interest here live near 0 and 1.
struct EstimateCI {
  double value = 0.0;
  double se = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  long long reps = 0;
  uint64_t seed = 0;
};

EstimateCI wilson_ci(long long successes, long long n, uint64_t seed);
EstimateCI mean_ci(const std::vector<double>& xs, uint64_t seed);
// exact (closed-form) scalar dressed as an estimate: se=0, lo=hi=value
EstimateCI exact_value(double v);

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n = 0;
};
LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// (a.value - b.value) in combined standard errors; 0 if both se are 0
double z_score(const EstimateCI& a, const EstimateCI& b);

} // namespace sic
