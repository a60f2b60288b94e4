#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pcaq {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;      // sample standard deviation (n-1)
  double stderr_ = 0.0;  // sd / sqrt(n)
  std::size_t n = 0;
};

Moments moments(const std::vector<double>& xs);
double median(std::vector<double> xs);
double median_int(const std::vector<int>& xs);

// Standard error of an empirical frequency p over n draws, sqrt(p(1-p)/n).
// A floor of 1/n keeps a zero count from having zero uncertainty.
double binomial_stderr(double p, std::size_t n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y ~ slope * x + intercept.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Runs fn(i) for i in [0, n) on `jobs` worker threads. Work is claimed by an
// atomic counter, so callers must write results into slot i to keep output
// independent of scheduling. Exceptions from workers are rethrown (the one
// with the lowest index wins).
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace pcaq
