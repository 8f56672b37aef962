#include "lgas/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "lgas/dynamics.hpp"
#include "lgas/environment.hpp"
#include "lgas/errors.hpp"
#include "lgas/parallel.hpp"

namespace lgas {

std::vector<Vec3> fan_velocities(int n, double w) {
  require(n >= 1, Error::Code::kInvalidArgument, "need n >= 1");
  require(n == 1 || (w > 0.0 && (n - 1) * w <= M_PI),
          Error::Code::kInvalidArgument, "fan does not fit on a half-circle");
  std::vector<Vec3> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double ang = i * w;
    v.push_back({std::sin(ang), 0.0, std::cos(ang)});
  }
  return v;
}

namespace {

std::vector<Vec3> rescaled_vertices(const PolyPath& poly, double T) {
  const double s = 1.0 / std::sqrt(T);
  std::vector<Vec3> out;
  out.reserve(poly.p.size());
  for (const Vec3& p : poly.p) out.push_back(p * s);
  return out;
}

// Min distance from point to the poly restricted to times in [lo, hi].
double min_dist_in_window(const PolyPath& poly, const Vec3& point, double lo,
                          double hi) {
  double best = kInf;
  const std::size_t nseg = poly.t.size() - 1;
  for (std::size_t s = 0; s < nseg; ++s) {
    if (poly.t[s + 1] <= lo) continue;
    if (poly.t[s] >= hi) break;
    const Vec3 a = poly.t[s] < lo ? poly.at(lo) : poly.p[s];
    const Vec3 b = poly.t[s + 1] > hi ? poly.at(hi) : poly.p[s + 1];
    best = std::min(best, point_segment_distance(point, a, b).dist);
  }
  return best;
}

// Time a unit-speed segment spends inside the sphere (centre, R).
double segment_time_inside(const Vec3& a, const Vec3& b, const Vec3& centre,
                           double radius) {
  const Vec3 d = b - a;
  const double len = d.norm();
  if (len <= 0.0) return 0.0;
  const Vec3 dir = d / len;
  const Vec3 m = centre - a;
  const double proj = dir.dot(m);
  const double disc = proj * proj - (m.norm2() - radius * radius);
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(proj - sq, 0.0);
  const double t1 = std::min(proj + sq, len);
  return std::max(0.0, t1 - t0);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int depth, double fa, double fm,
                        double fb) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, tol / 2.0, depth - 1, fa, flm, fm) +
         adaptive_simpson(f, m, b, tol / 2.0, depth - 1, fm, frm, fb);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, tol, 40, f(a), f(m), f(b));
}

struct CoupledSetup {
  EnvParams env;
  double eps, T;
  int N;
  const std::vector<Vec3>* velocities;
  double beta;
  Vec3 axis;
  bool annealed;
};

ReplicaRecord run_coupled_replica(const CoupledSetup& s, std::uint64_t m,
                                  CoupledEnsemble* keep = nullptr) {
  const std::uint64_t master = s.env.seed;
  const std::uint64_t env_seed = s.annealed ? derive_seed(master, m) : master;
  const double r = radius_of(s.eps);
  const double rate = s.env.flight_rate();
  const BasePointProcess base(env_seed, s.env.rho, s.env.cell_side,
                              s.env.world_factor * s.T / s.eps);
  const EnvironmentView view(base, s.eps);

  std::vector<Vec3> vel;
  if (s.velocities && !s.velocities->empty()) {
    vel = *s.velocities;
  } else {
    vel.reserve(s.N);
    for (int j = 0; j < s.N; ++j) {
      Stream vs = make_stream(master, Domain::kVelocity, m, j);
      vel.push_back(sample_cap(vs, s.axis, s.beta));
    }
  }

  std::vector<LorentzPath> paths(s.N);
  for (int j = 0; j < s.N; ++j) paths[j] = simulate_lorentz(view, vel[j], s.T);

  CoupledEnsemble ens =
      build_coupled_flights(std::move(paths), master, m, rate, s.T, r);

  ReplicaRecord rec;
  rec.env_seed = env_seed;
  rec.w = s.N >= 2 ? min_angle(vel) : kInf;
  rec.times = ens.times;
  rec.mismatch = ens.mismatch();
  rec.lorentz_events = ens.lorentz_event_count();
  rec.flight_events = ens.flight_event_count();
  rec.clocks = ens.clock_count();
  rec.shadowed = ens.shadowed_count();
  if (keep) *keep = std::move(ens);
  return rec;
}

}  // namespace

MismatchResult estimate_mismatch_probability(const MismatchParams& params,
                                             std::size_t replicas) {
  require(replicas >= 1, Error::Code::kInvalidArgument, "need replicas >= 1");
  const double r = radius_of(params.eps);
  require(r * params.T <= 1.0, Error::Code::kInvalidArgument,
          "r*T must be <= 1");
  if (!params.velocities.empty())
    require(static_cast<int>(params.velocities.size()) == params.N,
            Error::Code::kInvalidArgument, "need one velocity per trajectory");
  if (params.N >= 2 && !params.velocities.empty())
    require(min_angle(params.velocities) > 0.0, Error::Code::kInvalidArgument,
            "duplicate velocities give w = 0");

  CoupledSetup setup{params.env,  params.eps,
                     params.T,    params.N,
                     &params.velocities, params.beta,
                     params.axis, params.annealed};

  std::vector<ReplicaRecord> records(replicas);
  parallel_for(static_cast<std::int64_t>(replicas), params.threads,
               [&](std::int64_t m) {
                 records[m] = run_coupled_replica(setup, m);
               });

  MismatchResult res;
  res.eps = params.eps;
  res.r = r;
  res.T = params.T;
  res.N = params.N;
  res.replicas = replicas;
  std::size_t hits = 0;
  double sum_w = 0.0, sum_bound = 0.0;
  for (const auto& rec : records) {
    hits += rec.mismatch ? 1u : 0u;
    sum_w += rec.w;
    const double inv_w = std::isinf(rec.w) ? 0.0 : 1.0 / rec.w;
    sum_bound += r * (params.N * params.T +
                      static_cast<double>(params.N) * params.N * inv_w);
  }
  res.p_hat = proportion_ci(hits, replicas);
  res.mean_w = sum_w / replicas;
  res.bound_value = sum_bound / replicas;
  res.fitted_c = res.bound_value > 0.0 ? res.p_hat.estimate / res.bound_value
                                       : 0.0;
  res.records = std::move(records);
  return res;
}

EventEstimates estimate_event_probabilities(const EventParams& params,
                                            std::size_t replicas) {
  require(replicas >= 1, Error::Code::kInvalidArgument, "need replicas >= 1");
  require(params.w > 0.0 && params.w < M_PI, Error::Code::kInvalidArgument,
          "w must lie in (0, pi)");
  const double two_r = 2.0 * params.r;
  const Vec3 v1{0.0, 0.0, 1.0};
  const Vec3 v2{std::sin(params.w), 0.0, std::cos(params.w)};

  struct Bits {
    bool a1, a2, b12, bI, bII, bIII, bIV;
  };
  std::vector<Bits> bits(replicas);

  parallel_for(static_cast<std::int64_t>(replicas), params.threads,
               [&](std::int64_t m) {
    Stream s1 = make_stream(params.seed, Domain::kFlight, m, 0);
    Stream s2 = make_stream(params.seed, Domain::kFlight, m, 1);
    const FlightPath yi = sample_flight(s1, params.rate, v1, params.T);
    const FlightPath yj = sample_flight(s2, params.rate, v2, params.T);
    const PolyPath pi = to_poly(yi);
    const PolyPath pj = to_poly(yj);

    auto event_a = [&](const FlightPath& y, const PolyPath& poly) {
      for (std::size_t kk = 0; kk < y.events.size(); ++kk) {
        const Vec3& pt = y.events[kk].pos;
        const double prev = kk == 0 ? 0.0 : y.events[kk - 1].theta;
        if (prev > 0.0 && min_dist_in_window(poly, pt, 0.0, prev) < two_r)
          return true;
        if (kk + 1 < y.events.size()) {
          const double next = y.events[kk + 1].theta;
          if (min_dist_in_window(poly, pt, next, params.T) < two_r)
            return true;
        }
      }
      return false;
    };

    const double theta_i1 = yi.events.empty() ? kInf : yi.events[0].theta;
    const double cut = std::min(theta_i1, params.T);

    Bits b{};
    b.a1 = event_a(yi, pi);
    b.a2 = event_a(yj, pj);
    for (std::size_t kk = 0; kk < yj.events.size(); ++kk) {
      const Vec3& pt = yj.events[kk].pos;
      if (min_dist_in_window(pi, pt, 0.0, params.T) < two_r) b.b12 = true;
      const bool first = kk == 0;
      if (min_dist_in_window(pi, pt, 0.0, cut) < two_r) {
        if (first) b.bI = true;
        else b.bII = true;
      }
      if (theta_i1 < params.T &&
          min_dist_in_window(pi, pt, theta_i1, params.T) < two_r) {
        if (first) b.bIII = true;
        else b.bIV = true;
      }
    }
    bits[m] = b;
  });

  std::size_t ca1 = 0, ca2 = 0, cb = 0, cI = 0, cII = 0, cIII = 0, cIV = 0,
              viol = 0;
  for (const auto& b : bits) {
    ca1 += b.a1;
    ca2 += b.a2;
    cb += b.b12;
    cI += b.bI;
    cII += b.bII;
    cIII += b.bIII;
    cIV += b.bIV;
    if (b.b12 && !(b.bI || b.bII || b.bIII || b.bIV)) ++viol;
  }
  EventEstimates est;
  est.r = params.r;
  est.T = params.T;
  est.w = params.w;
  est.replicas = replicas;
  est.a1 = proportion_ci(ca1, replicas);
  est.a2 = proportion_ci(ca2, replicas);
  est.b12 = proportion_ci(cb, replicas);
  est.bI = proportion_ci(cI, replicas);
  est.bII = proportion_ci(cII, replicas);
  est.bIII = proportion_ci(cIII, replicas);
  est.bIV = proportion_ci(cIV, replicas);
  est.coverage_violations = viol;
  return est;
}

double gamma_ball_integral(double centre_dist, double a) {
  require(a > 0.0 && a < centre_dist, Error::Code::kInvalidArgument,
          "ball must exclude the origin (a < |x0|)");
  const double d = centre_dist;
  auto integrand = [d, a](double rho) {
    const double cos_t = (rho * rho + d * d - a * a) / (2.0 * rho * d);
    const double cap = 2.0 * M_PI * rho * rho * (1.0 - std::min(cos_t, 1.0));
    return (1.0 / (rho * rho) + 1.0 / rho) * cap;
  };
  return integrate(integrand, d - a, d + a, 1e-12);
}

GreenResult green_occupation(const GreenParams& params, std::size_t replicas) {
  require(replicas >= 2, Error::Code::kInvalidArgument, "need replicas >= 2");
  require(params.a < params.centre_dist, Error::Code::kInvalidArgument,
          "ball contains the origin: singular integral");
  const double horizon =
      params.horizon > 0.0
          ? params.horizon
          : std::max(100.0, 8.0 * (params.centre_dist + params.a) *
                                (params.centre_dist + params.a)) /
                params.rate;
  const Vec3 x0{params.centre_dist, 0.0, 0.0};
  const double fat = params.a + params.r;

  std::vector<double> visits(replicas), occupation(replicas);
  parallel_for(static_cast<std::int64_t>(replicas), params.threads,
               [&](std::int64_t m) {
    Stream s = make_stream(params.seed, Domain::kFlight, m);
    const Vec3 v0 = sample_uniform_sphere(s);
    const FlightPath y = sample_flight(s, params.rate, v0, horizon);
    double nv = 0.0;
    for (const auto& e : y.events)
      if ((e.pos - x0).norm() <= params.a) nv += 1.0;
    visits[m] = nv;
    const PolyPath poly = to_poly(y);
    double occ = 0.0;
    for (std::size_t seg = 0; seg + 1 < poly.p.size(); ++seg)
      occ += segment_time_inside(poly.p[seg], poly.p[seg + 1], x0, fat);
    occupation[m] = occ / params.r;
  });

  GreenResult res;
  res.centre_dist = params.centre_dist;
  res.a = params.a;
  res.horizon = horizon;
  res.replicas = replicas;
  res.discrete_visits = mean_ci(visits);
  res.occupation_over_r = mean_ci(occupation);
  res.gamma_integral = gamma_ball_integral(params.centre_dist, params.a);
  const double vol = 4.0 / 3.0 * M_PI * params.a * params.a * params.a;
  res.far_field = vol * (1.0 / (params.centre_dist * params.centre_dist) +
                         1.0 / params.centre_dist);
  res.ratio_discrete = res.discrete_visits.mean / res.gamma_integral;
  res.ratio_occupation = res.occupation_over_r.mean / res.gamma_integral;
  return res;
}

DonskerReport donsker_test(const DonskerParams& params, std::size_t replicas) {
  require(replicas >= 100, Error::Code::kInvalidArgument,
          "need replicas >= 100");
  const std::size_t mf = params.functional_replicas > 0
                             ? std::min(params.functional_replicas, replicas)
                             : std::min<std::size_t>(replicas, 2000);
  const auto& dict = functional_dictionary();

  std::vector<std::array<double, 3>> ends(replicas);
  std::vector<std::vector<double>> fvals(dict.size(),
                                         std::vector<double>(mf, 0.0));
  const double scale = 1.0 / std::sqrt(params.T);
  parallel_for(static_cast<std::int64_t>(replicas), params.threads,
               [&](std::int64_t m) {
    Stream s = make_stream(params.seed, Domain::kFlight, m);
    const Vec3 v0 = sample_uniform_sphere(s);
    const FlightPath y = sample_flight(s, params.rate, v0, params.T);
    const Vec3 end = y.position(params.T) * scale;
    ends[m] = {end.x, end.y, end.z};
    if (static_cast<std::size_t>(m) < mf) {
      const auto verts = rescaled_vertices(to_poly(y), params.T);
      for (std::size_t f = 0; f < dict.size(); ++f)
        fvals[f][m] = dict[f](verts);
    }
  });

  DonskerReport rep;
  rep.T = params.T;
  rep.replicas = replicas;
  rep.variance = flight_covariance(params.rate, params.T) / params.T;
  const double sd = std::sqrt(rep.variance);
  for (int c = 0; c < 3; ++c) {
    std::vector<double> coord(replicas);
    for (std::size_t m = 0; m < replicas; ++m) coord[m] = ends[m][c];
    rep.coord_ks[c] =
        ks_test(coord, [sd](double x) { return normal_cdf(x, 0.0, sd); });
  }
  {
    std::vector<double> x(replicas), y(replicas), z(replicas);
    for (std::size_t m = 0; m < replicas; ++m) {
      x[m] = ends[m][0];
      y[m] = ends[m][1];
      z[m] = ends[m][2];
    }
    rep.correlations = {pearson_correlation(x, y), pearson_correlation(x, z),
                        pearson_correlation(y, z)};
  }
  rep.corr_bound = 3.0 / std::sqrt(static_cast<double>(replicas));

  const auto wiener = wiener_reference(params.seed, params.rate, dict,
                                       params.wiener_paths,
                                       params.wiener_steps, params.threads);
  for (std::size_t f = 0; f < dict.size(); ++f) {
    const MeanCi mc = mean_ci(fvals[f]);
    FunctionalComparison fc;
    fc.name = dict[f].name;
    fc.flight_mean = mc.mean;
    fc.flight_se = mc.sd / std::sqrt(static_cast<double>(mf));
    fc.wiener_mean = wiener[f].mean;
    fc.wiener_se = wiener[f].std_error;
    fc.diff = std::abs(fc.flight_mean - fc.wiener_mean);
    fc.combined_se = std::sqrt(fc.flight_se * fc.flight_se +
                               fc.wiener_se * fc.wiener_se);
    rep.functionals.push_back(fc);
  }
  return rep;
}

QuenchedResult quenched_average_experiment(const QuenchedParams& params) {
  require(!params.rows.empty(), Error::Code::kInvalidArgument,
          "no schedule rows");
  QuenchedResult result;
  result.schedule = check_schedule(params.rows, TheoremMode::kThm3);
  require(result.schedule.admissible || params.force,
          Error::Code::kInvalidArgument,
          "schedule inadmissible for the quenched experiment; use force to "
          "override");

  const auto& dict = functional_dictionary();
  const double rate = params.env.flight_rate();
  const auto wiener =
      wiener_reference(params.env.seed, rate, dict, params.wiener_paths,
                       params.wiener_steps, params.threads);

  for (const ScalingRow& row : params.rows) {
    QuenchedRowResult rr;
    rr.row = row;
    const int n_traj = static_cast<int>(row.N);
    const double r = radius_of(row.eps);

    // Same base seed for every row: the same realization of the PPP.
    const BasePointProcess base(params.env.seed, params.env.rho,
                                params.env.cell_side,
                                params.env.world_factor * row.T / row.eps);
    const EnvironmentView view(base, row.eps);

    std::vector<Vec3> vel(n_traj);
    for (int j = 0; j < n_traj; ++j) {
      Stream vs = make_stream(params.env.seed, Domain::kVelocity,
                              static_cast<std::uint64_t>(row.n), j);
      vel[j] = sample_cap(vs, row.axis, row.beta);
    }

    std::vector<LorentzPath> paths(n_traj);
    parallel_for(n_traj, params.threads, [&](std::int64_t j) {
      paths[j] = simulate_lorentz(view, vel[j], row.T);
    });

    CoupledEnsemble ens = build_coupled_flights(
        std::move(paths), params.env.seed,
        static_cast<std::uint64_t>(row.n), rate, row.T, r);

    rr.w = n_traj >= 2 ? min_angle(vel) : kInf;
    rr.alpha = row.alpha();
    rr.w_below_alpha = rr.w < rr.alpha;
    rr.times = ens.times;
    rr.mismatch = ens.mismatch();
    const double rb = std::pow(r / row.beta, 2.0 / 3.0);
    rr.prop4_bound = row.N * r * row.T +
                     static_cast<double>(row.N) * row.N * rb;
    const double ab = rr.alpha / row.beta;
    rr.w_bound = static_cast<double>(row.N) * row.N * ab * ab;
    rr.lorentz_events = ens.lorentz_event_count();
    rr.flight_events = ens.flight_event_count();
    rr.shadowed = ens.shadowed_count();

    // Quenched empirical averages over the row's trajectories.
    rr.x_avg.assign(dict.size(), 0.0);
    rr.y_avg.assign(dict.size(), 0.0);
    for (int j = 0; j < n_traj; ++j) {
      const auto xv = rescaled_vertices(to_poly(ens.lorentz[j]), row.T);
      const auto yv = rescaled_vertices(to_poly(ens.flights[j]), row.T);
      for (std::size_t f = 0; f < dict.size(); ++f) {
        rr.x_avg[f] += dict[f](xv);
        rr.y_avg[f] += dict[f](yv);
      }
    }
    for (std::size_t f = 0; f < dict.size(); ++f) {
      rr.x_avg[f] /= n_traj;
      rr.y_avg[f] /= n_traj;
    }

    // Annealed flight reference (Prop 2/3 split).
    const std::size_t mref = params.flight_reference_replicas;
    std::vector<std::vector<double>> ref(dict.size(),
                                         std::vector<double>(mref, 0.0));
    parallel_for(static_cast<std::int64_t>(mref), params.threads,
                 [&](std::int64_t m) {
      Stream s = make_stream(params.env.seed, Domain::kFlight,
                             static_cast<std::uint64_t>(row.n), m);
      const Vec3 v0 = sample_cap(s, row.axis, row.beta);
      const FlightPath y = sample_flight(s, rate, v0, row.T);
      const auto verts = rescaled_vertices(to_poly(y), row.T);
      for (std::size_t f = 0; f < dict.size(); ++f)
        ref[f][m] = dict[f](verts);
    });

    for (std::size_t f = 0; f < dict.size(); ++f) {
      const MeanCi mc = mean_ci(ref[f]);
      rr.flight_ref_mean.push_back(mc.mean);
      rr.flight_ref_se.push_back(mc.sd / std::sqrt(static_cast<double>(mref)));
      rr.wiener_mean.push_back(wiener[f].mean);
      rr.wiener_se.push_back(wiener[f].std_error);
      rr.gap_slln.push_back(std::abs(rr.y_avg[f] - mc.mean));
      rr.gap_donsker.push_back(std::abs(mc.mean - wiener[f].mean));
      rr.gap_coupling.push_back(std::abs(rr.x_avg[f] - rr.y_avg[f]));
      rr.gap_total.push_back(std::abs(rr.x_avg[f] - wiener[f].mean));
      const double delta =
          dict[f].cap * std::sqrt(2.0 * std::log(2.0 / params.hoeffding_level) /
                                  static_cast<double>(row.N));
      rr.hoeffding_delta.push_back(delta);
      rr.envelope.push_back(delta + 1.959963984540054 * wiener[f].std_error);
    }

    result.rows.push_back(std::move(rr));
  }
  return result;
}

}  // namespace lgas
