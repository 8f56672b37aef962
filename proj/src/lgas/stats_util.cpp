#include "lgas/stats_util.hpp"

#include <algorithm>
#include <cmath>

#include "lgas/errors.hpp"

namespace lgas {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_cdf(double x, double mean, double sd) {
  return normal_cdf((x - mean) / sd);
}

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  require(a > 0.0 && x >= 0.0, Error::Code::kInvalidArgument,
          "gamma_p domain error");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chi2_sf(double stat, double dof) {
  if (stat <= 0.0) return 1.0;
  return 1.0 - gamma_p(dof / 2.0, stat / 2.0);
}

KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf) {
  require(!sample.empty(), Error::Code::kInvalidArgument, "empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::max((i + 1) / n - f, f - i / n));
  }
  return {d, ks_pvalue(d, sorted.size()), sorted.size()};
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double z = (sn + 0.12 + 0.11 / sn) * d;
  if (z < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * z * z);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

Ci proportion_ci(std::size_t successes, std::size_t n) {
  require(n > 0 && successes <= n, Error::Code::kInvalidArgument,
          "bad proportion counts");
  const double p = static_cast<double>(successes) / n;
  const double zc = 1.959963984540054;
  if (successes >= 5 && n - successes >= 5) {
    const double hw = zc * std::sqrt(p * (1.0 - p) / n);
    return {p, std::max(0.0, p - hw), std::min(1.0, p + hw)};
  }
  // Wilson interval, stable near 0 and 1.
  const double z2 = zc * zc;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double hw =
      zc * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {p, std::max(0.0, centre - hw), std::min(1.0, centre + hw)};
}

MeanCi mean_ci(std::span<const double> sample) {
  require(sample.size() >= 2, Error::Code::kInvalidArgument,
          "mean_ci needs >= 2 points");
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(sample.size());
  double ss = 0.0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (sample.size() - 1));
  return {mean, sd, 1.959963984540054 * sd / std::sqrt((double)sample.size())};
}

double pearson_correlation(std::span<const double> a,
                           std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, Error::Code::kInvalidArgument,
          "correlation needs equal-sized samples");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, Error::Code::kInvalidArgument,
          "fit needs equal-sized samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + slope * x[i]);
    ss_res += e * e;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, intercept, r2};
}

double chi2_gof_pvalue(std::span<const std::size_t> observed,
                       std::span<const double> expected) {
  require(observed.size() == expected.size() && observed.size() >= 2,
          Error::Code::kInvalidArgument, "bad chi2 inputs");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    require(expected[i] > 0.0, Error::Code::kInvalidArgument,
            "expected counts must be positive");
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return chi2_sf(stat, static_cast<double>(observed.size() - 1));
}

double chi2_independence_pvalue(
    const std::vector<std::vector<std::size_t>>& table) {
  require(table.size() >= 2 && table[0].size() >= 2,
          Error::Code::kInvalidArgument, "table too small");
  const std::size_t rows = table.size();
  const std::size_t cols = table[0].size();
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += table[i][j];
      col_sum[j] += table[i][j];
      total += table[i][j];
    }
  double stat = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = row_sum[i] * col_sum[j] / total;
      if (e <= 0.0) continue;
      const double d = table[i][j] - e;
      stat += d * d / e;
    }
  const double dof = static_cast<double>((rows - 1) * (cols - 1));
  return chi2_sf(stat, dof);
}

}  // namespace lgas
