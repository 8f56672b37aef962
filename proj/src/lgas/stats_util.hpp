#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lgas {

double normal_cdf(double x);
double normal_cdf(double x, double mean, double sd);

// Regularized lower incomplete gamma P(a,x).
double gamma_p(double a, double x);

// Upper tail of the chi-square distribution.
double chi2_sf(double stat, double dof);

struct KsResult {
  double statistic;
  double p_value;
  std::size_t n;
};

// One-sample KS against a continuous CDF. Sorts a copy of the sample.
KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf);

// Asymptotic Kolmogorov tail with Stephens' finite-n correction.
double ks_pvalue(double d, std::size_t n);

struct Ci {
  double estimate;
  double lo;
  double hi;
  double halfwidth() const { return (hi - lo) / 2.0; }
};

// 95% CI for a proportion; Wilson once counts are small on either side.
Ci proportion_ci(std::size_t successes, std::size_t n);

struct MeanCi {
  double mean;
  double sd;
  double halfwidth;  // 1.96 * sd / sqrt(n)
};

MeanCi mean_ci(std::span<const double> sample);

double pearson_correlation(std::span<const double> a,
                           std::span<const double> b);

struct LinearFit {
  double slope;
  double intercept;
  double r2;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Chi-square goodness-of-fit of observed counts against expected counts
// (expected from a fully specified model; dof = bins - 1).
double chi2_gof_pvalue(std::span<const std::size_t> observed,
                       std::span<const double> expected);

// Chi-square independence test on a contingency table (row-major).
double chi2_independence_pvalue(const std::vector<std::vector<std::size_t>>& table);

}  // namespace lgas
