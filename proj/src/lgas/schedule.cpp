#include "lgas/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "lgas/errors.hpp"

namespace lgas {

double ScalingRow::alpha() const {
  return std::pow(r, 1.0 / 3.0) * std::pow(beta, 2.0 / 3.0);
}

double radius_of(double eps, int d) {
  require(eps > 0.0 && eps <= 1.0, Error::Code::kInvalidArgument,
          "eps must lie in (0,1]");
  require(d >= 2, Error::Code::kInvalidArgument, "d must be >= 2");
  return std::pow(eps, static_cast<double>(d) / (d - 1));
}

double min_angle(std::span<const Vec3> velocities) {
  require(velocities.size() >= 2, Error::Code::kInvalidArgument,
          "min_angle needs at least two vectors");
  double w = kInf;
  for (std::size_t i = 0; i < velocities.size(); ++i) {
    require(std::abs(velocities[i].norm() - 1.0) <= 1e-9,
            Error::Code::kInvalidArgument, "velocities must be unit vectors");
    for (std::size_t j = i + 1; j < velocities.size(); ++j) {
      const double c = velocities[i].dot(velocities[j]);
      const double arg = std::clamp((1.0 - c) / 2.0, 0.0, 1.0);
      w = std::min(w, 2.0 * std::asin(std::sqrt(arg)));
    }
  }
  return w;
}

Vec3 sample_cap(Stream& stream, const Vec3& e, double beta) {
  require(beta > 0.0 && beta <= M_PI, Error::Code::kInvalidArgument,
          "beta must lie in (0, pi]");
  const double c = stream.uniform(std::cos(beta), 1.0);
  const double phi = 2.0 * M_PI * stream.next_double();
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  // Orthonormal frame around e.
  const Vec3 h = std::abs(e.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 t1{e.y * h.z - e.z * h.y, e.z * h.x - e.x * h.z, e.x * h.y - e.y * h.x};
  t1 = t1.normalized();
  const Vec3 t2{e.y * t1.z - e.z * t1.y, e.z * t1.x - e.x * t1.z,
                e.x * t1.y - e.y * t1.x};
  return e * c + t1 * (s * std::cos(phi)) + t2 * (s * std::sin(phi));
}

ScheduleReport check_schedule(const std::vector<ScalingRow>& rows,
                              TheoremMode mode, double tail_budget) {
  require(!rows.empty(), Error::Code::kInvalidArgument, "empty schedule");
  ScheduleReport rep;
  rep.rows.reserve(rows.size());

  for (const auto& row : rows) {
    RowCheck rc;
    rc.n = row.n;
    rc.rT = row.r * row.T;
    rc.rT_beta = row.r * (row.T + 1.0 / row.beta);
    const double logn = std::log(std::max(2, row.n));
    const double rb = std::pow(row.r / row.beta, 2.0 / 3.0);
    rc.term_weak = logn * rc.rT + logn * logn * rb;
    rc.term_strong = static_cast<double>(row.N) * rc.rT +
                     static_cast<double>(row.N) * row.N * rb;
    rc.rT_ok = rc.rT <= 1.0;
    if (!rc.rT_ok)
      rep.violations.push_back("row " + std::to_string(row.n) +
                               ": r*T exceeds 1");
    rep.weak_partial_sum += rc.term_weak;
    rep.strong_partial_sum += rc.term_strong;
    rep.rows.push_back(rc);
  }

  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].N <= rows[i - 1].N) {
      rep.n_monotone = false;
      rep.violations.push_back("row " + std::to_string(rows[i].n) +
                               ": N_n not increasing");
    }
    const double prev = rows[i - 1].N / std::log(std::max(2, rows[i - 1].n));
    const double cur = rows[i].N / std::log(std::max(2, rows[i].n));
    if (cur <= prev) {
      rep.n_beats_log = false;
      if (mode == TheoremMode::kThm3)
        rep.violations.push_back("row " + std::to_string(rows[i].n) +
                                 ": N_n / log n not increasing");
    }
  }

  // Trend and tail over the trailing third of the rows.
  auto term_of = [&](const RowCheck& rc) {
    switch (mode) {
      case TheoremMode::kThm1: return rc.rT;
      case TheoremMode::kThm2: return rc.rT_beta;
      case TheoremMode::kThm3: return rc.term_weak;
    }
    return rc.rT;
  };
  const std::size_t tail_len = std::max<std::size_t>(2, rows.size() / 3);
  const std::size_t tail_from = rows.size() - tail_len;
  double q_weak = 0.0, q_strong = 0.0;
  for (std::size_t i = std::max<std::size_t>(tail_from, 1); i < rows.size();
       ++i) {
    if (term_of(rep.rows[i]) >= term_of(rep.rows[i - 1])) rep.trend_ok = false;
    if (rep.rows[i - 1].term_weak > 0.0)
      q_weak = std::max(q_weak, rep.rows[i].term_weak / rep.rows[i - 1].term_weak);
    if (rep.rows[i - 1].term_strong > 0.0)
      q_strong = std::max(q_strong,
                          rep.rows[i].term_strong / rep.rows[i - 1].term_strong);
  }
  if (!rep.trend_ok)
    rep.violations.push_back("mode-relevant terms not decreasing on the tail");

  auto tail_bound = [](double last, double q) {
    if (q >= 1.0) return kInf;
    return last * q / (1.0 - q);
  };
  rep.weak_tail_bound = tail_bound(rep.rows.back().term_weak, q_weak);
  rep.strong_tail_bound = tail_bound(rep.rows.back().term_strong, q_strong);

  bool ok = rep.trend_ok;
  for (const auto& rc : rep.rows) ok = ok && rc.rT_ok;
  if (mode == TheoremMode::kThm3) {
    ok = ok && rep.n_monotone && rep.n_beats_log;
    ok = ok && rep.weak_tail_bound <= tail_budget &&
         rep.strong_tail_bound <= tail_budget;
  }
  rep.admissible = ok;
  return rep;
}

std::vector<ScalingRow> geometric_schedule(int n_min, int n_max,
                                           const Vec3& axis) {
  require(n_min >= 1 && n_max >= n_min, Error::Code::kInvalidArgument,
          "need 1 <= n_min <= n_max");
  std::vector<ScalingRow> rows;
  rows.reserve(n_max - n_min + 1);
  for (int n = n_min; n <= n_max; ++n) {
    ScalingRow row;
    row.n = n;
    row.eps = std::pow(2.0, -n);
    row.r = radius_of(row.eps);
    row.T = std::pow(row.eps, -0.5);
    row.beta = std::pow(2.0, -0.5 * n);
    row.N = static_cast<long long>(n) * n;
    row.axis = axis;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lgas
