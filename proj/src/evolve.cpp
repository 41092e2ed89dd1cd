#include "gns/evolve.hpp"

#include "gns/io.hpp"
#include "gns/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gns {

void SimConfig::validate() const {
  if (M % 2 != 0 || M < 4 || M > 128) {
    throw std::invalid_argument("M must be even and in [4, 128]");
  }
  if (!(nu > 0)) throw std::invalid_argument("nu must be positive");
  GevreyParams(-1, a, sigma);  // validates a, sigma
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= dt)) throw std::invalid_argument("t_end must be at least dt");
  if (!(amplitude >= 0)) throw std::invalid_argument("amplitude must be nonnegative");
  if (initial == InitialData::random_divfree && !(decay_rate > 0)) {
    throw std::invalid_argument("decay_rate must be positive");
  }
  if (initial == InitialData::snapshot && snapshot_path.empty()) {
    throw std::invalid_argument("snapshot initial data requires snapshot_path");
  }
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (!(gronwall_c >= 0)) throw std::invalid_argument("gronwall_c must be nonnegative");
  if (picard_max_iters < 1) throw std::invalid_argument("picard_max_iters must be positive");
  if (!(picard_tol > 0)) throw std::invalid_argument("picard_tol must be positive");
}

SpectralVectorField initial_field(const SimConfig& config) {
  config.validate();
  const LatticePtr lattice = build_lattice(config.M);
  SpectralVectorField u(lattice);
  const Complex iu(0, 1);

  switch (config.initial) {
    case InitialData::taylor_green: {
      // u = (sin x cos y cos z, -cos x sin y cos z, 0): eight (+-1,+-1,+-1) modes
      for (int s1 : {-1, 1}) {
        for (int s2 : {-1, 1}) {
          for (int s3 : {-1, 1}) {
            const Eigen::Index i = lattice->index(Eigen::Vector3i(s1, s2, s3));
            u.coeffs()(0, i) = -iu * (s1 / 8.0);
            u.coeffs()(1, i) = iu * (s2 / 8.0);
          }
        }
      }
      break;
    }
    case InitialData::random_divfree:
      u = random_divfree_field(lattice, config.decay_rate, 1.0, config.seed);
      break;
    case InitialData::single_mode: {
      const Eigen::Index i = lattice->index(Eigen::Vector3i(0, 1, 0));
      const Eigen::Index j = lattice->conjugateIndex(i);
      u.coeffs()(0, i) = 0.5;
      u.coeffs()(0, j) = 0.5;
      break;
    }
    case InitialData::snapshot: {
      u = read_gnsf_file(config.snapshot_path);
      if (u.lattice()->modesPerAxis() != config.M) {
        throw std::invalid_argument("snapshot lattice does not match configured M");
      }
      return u;  // snapshot data is used as stored
    }
  }

  const GevreyParams p(-1, config.a, config.sigma);
  const double zn = z_norm(u, p);
  u *= config.amplitude == 0.0 ? 0.0 : config.amplitude / zn;
  return u;
}

SpectralVectorField step(const SpectralVectorField& u, double dt, double nu, ConvMethod method,
                         bool linearized) {
  if (linearized) return heat_apply(u, dt, nu);
  const FrequencyLattice& lat = *u.lattice();
  const SpectralVectorField f0 = bilinear_B(u, u, method);

  SpectralVectorField pred(u.lattice());
  Eigen::VectorXd decay(lat.size()), wl(lat.size()), wr(lat.size());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const double z = nu * dt * lat.modulusSquared()[i];
    decay[i] = std::exp(-z);
    wl[i] = dt * exp_trap_weight_left(z);
    wr[i] = dt * exp_trap_weight_right(z);
    pred.coeffs().col(i) = decay[i] * (u.coeffs().col(i) - dt * f0.coeffs().col(i));
  }
  const SpectralVectorField f1 = bilinear_B(pred, pred, method);

  SpectralVectorField next(u.lattice());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    next.coeffs().col(i) =
        decay[i] * u.coeffs().col(i) - wl[i] * f0.coeffs().col(i) - wr[i] * f1.coeffs().col(i);
  }
  return enforce_hermitian(leray_project(next));
}

namespace {

struct WeightTables {
  Eigen::VectorXd zm1, z0, zp1;
  Eigen::VectorXd xm1, x0, xp1;
  std::vector<Eigen::VectorXd> scale;  // rho = -1, a / sigma^{n/2}
};

WeightTables make_tables(const FrequencyLattice& lat, const SimConfig& c) {
  WeightTables t;
  const GevreyParams p(-1, c.a, c.sigma);
  t.zm1 = gevrey_weights(lat, p.with_rho(-1));
  t.z0 = gevrey_weights(lat, p.with_rho(0));
  t.zp1 = gevrey_weights(lat, p.with_rho(1));
  const GevreyParams x(-1, 0.0, c.sigma);
  t.xm1 = gevrey_weights(lat, x.with_rho(-1));
  t.x0 = gevrey_weights(lat, x.with_rho(0));
  t.xp1 = gevrey_weights(lat, x.with_rho(1));
  for (int n = 0; n <= c.n_max; ++n) {
    const double an = c.a / std::pow(c.sigma, 0.5 * n);
    t.scale.push_back(gevrey_weights(lat, GevreyParams(-1, an, c.sigma)));
  }
  return t;
}

bool row_finite(const TimeSeriesRow& r) {
  bool ok = std::isfinite(r.z_m1) && std::isfinite(r.z_0) && std::isfinite(r.z_p1) &&
            std::isfinite(r.x_m1) && std::isfinite(r.x_0) && std::isfinite(r.x_1);
  for (double v : r.z_m1_scale) ok = ok && std::isfinite(v);
  return ok;
}

// tol = 1e-6 + 2 dt^2 |z''|_max, the curvature estimated by second differences
double thm6_tolerance(const std::vector<TimeSeriesRow>& rows, double dt) {
  double curv = 0.0;
  for (std::size_t j = 1; j + 1 < rows.size(); ++j) {
    curv = std::max(curv,
                    std::abs(rows[j + 1].z_m1 - 2.0 * rows[j].z_m1 + rows[j - 1].z_m1) / (dt * dt));
  }
  return 1e-6 + 2.0 * dt * dt * curv;
}

}  // namespace

TimeSeries simulate(const SimConfig& config) {
  config.validate();
  TimeSeries series;
  series.config = config;

  SpectralVectorField u = initial_field(config);
  const FrequencyLattice& lat = *u.lattice();
  const WeightTables tables = make_tables(lat, config);

  const auto steps = std::max<long>(1, std::lround(config.t_end / config.dt));
  series.rows.reserve(static_cast<std::size_t>(steps) + 1);

  double dissipation = 0.0, gronwall_integral = 0.0, x0_sq = 0.0;
  double prev_zp1 = 0.0, prev_scale1_sq = 0.0, prev_x0_sq = 0.0;

  for (long j = 0; j <= steps; ++j) {
    TimeSeriesRow row;
    row.t = config.dt * static_cast<double>(j);
    const Eigen::VectorXd mags = magnitudes(u);
    row.z_m1 = weighted_sum(mags, tables.zm1);
    row.z_0 = weighted_sum(mags, tables.z0);
    row.z_p1 = weighted_sum(mags, tables.zp1);
    row.x_m1 = weighted_sum(mags, tables.xm1);
    row.x_0 = weighted_sum(mags, tables.x0);
    row.x_1 = weighted_sum(mags, tables.xp1);
    for (const auto& w : tables.scale) row.z_m1_scale.push_back(weighted_sum(mags, w));
    row.div_residual = divergence_residual(u);
    series.max_div_residual = std::max(series.max_div_residual, row.div_residual);

    if (!row_finite(row)) {
      series.blew_up = true;
      series.blowup_time = row.t;
      break;
    }

    const double scale1_sq = row.z_m1_scale[1] * row.z_m1_scale[1];
    const double x0sq = row.x_0 * row.x_0;
    if (j > 0) {
      dissipation += 0.5 * config.dt * (prev_zp1 + row.z_p1);
      gronwall_integral += 0.5 * config.dt * (prev_scale1_sq + scale1_sq);
      x0_sq += 0.5 * config.dt * (prev_x0_sq + x0sq);
    }
    prev_zp1 = row.z_p1;
    prev_scale1_sq = scale1_sq;
    prev_x0_sq = x0sq;
    row.dissipation = dissipation;
    // holds the raw time integral until z(0) is known; rewritten below
    row.gronwall_rhs = gronwall_integral;
    series.rows.push_back(std::move(row));
    series.x0_sq_integral = x0_sq;

    if (j < steps) {
      u = step(u, config.dt, config.nu, ConvMethod::fast, config.linearized);
    }
  }
  series.final_state = u;

  if (series.rows.empty()) return series;
  const double z0 = series.rows.front().z_m1;
  series.thm6_tol = thm6_tolerance(series.rows, config.dt);
  const double decay_rate_bound = 0.95 * (config.nu - z0);
  for (auto& row : series.rows) {
    row.thm6_lhs = row.z_m1 + 0.5 * (config.nu - z0) * row.dissipation;
    row.thm6_ok = row.thm6_lhs <= z0 * (1.0 + series.thm6_tol);
    row.gronwall_rhs = z0 * std::exp(config.gronwall_c * row.gronwall_rhs);
    row.decay_bound_ok =
        row.z_m1 <= z0 * std::exp(-decay_rate_bound * row.t) * (1.0 + 1e-12);
  }
  return series;
}

Trajectory simulate_trajectory(const SimConfig& config) {
  config.validate();
  Trajectory traj;
  traj.dt = config.dt;
  SpectralVectorField u = initial_field(config);
  const auto steps = std::max<long>(1, std::lround(config.t_end / config.dt));
  traj.nodes.reserve(static_cast<std::size_t>(steps) + 1);
  traj.nodes.push_back(u);
  for (long j = 0; j < steps; ++j) {
    u = step(u, config.dt, config.nu, ConvMethod::fast, config.linearized);
    traj.nodes.push_back(u);
  }
  return traj;
}

Thm6Report theorem6_monitor(const TimeSeries& series, double nu) {
  Thm6Report rep;
  if (series.rows.empty()) return rep;
  const double z0 = series.rows.front().z_m1;
  rep.precondition_ok = z0 < nu;
  rep.tol = thm6_tolerance(series.rows, series.config.dt);
  rep.all_ok = true;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (const auto& row : series.rows) {
    const double lhs = row.z_m1 + 0.5 * (nu - z0) * row.dissipation;
    const bool ok = lhs <= z0 * (1.0 + rep.tol);
    const double margin = z0 > 0 ? lhs / z0 - 1.0 : lhs;
    if (margin > rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_time = row.t;
    }
    rep.all_ok = rep.all_ok && ok;
  }
  return rep;
}

namespace {

bool gronwall_holds(const TimeSeries& series, double c) {
  const double z0 = series.rows.front().z_m1;
  double integral = 0.0, prev = 0.0;
  bool first = true;
  for (const auto& row : series.rows) {
    const double sq = row.z_m1_scale[1] * row.z_m1_scale[1];
    if (!first) integral += 0.5 * series.config.dt * (prev + sq);
    prev = sq;
    first = false;
    if (row.z_m1 > z0 * std::exp(c * integral) * (1.0 + 1e-12)) return false;
  }
  return true;
}

}  // namespace

GronwallReport gronwall_monitor(const TimeSeries& series, double c) {
  GronwallReport rep;
  rep.c_supplied = c;
  if (series.rows.empty()) {
    rep.holds_with_supplied = true;
    return rep;
  }
  rep.holds_with_supplied = gronwall_holds(series, c);
  if (gronwall_holds(series, 0.0)) {
    rep.c_star = 0.0;
    return rep;
  }
  double hi = 1.0;
  while (!gronwall_holds(series, hi) && hi < 1e9) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gronwall_holds(series, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  rep.c_star = hi;
  return rep;
}

DecayReport decay_metric(const TimeSeries& series) {
  DecayReport rep;
  if (series.rows.empty()) return rep;
  const double z0 = series.rows.front().z_m1;
  const double nu = series.config.nu;

  rep.t_half = 0.0;
  for (const auto& row : series.rows) {
    if (row.z_m1 <= 0.5 * z0) {
      rep.t_half = row.t;
      break;
    }
  }
  rep.terminal_ratio = z0 > 0 ? series.rows.back().z_m1 / z0 : 0.0;

  // least-squares slope of log z over the last quarter of the run
  const double t_end = series.rows.back().t;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long count = 0;
  for (const auto& row : series.rows) {
    if (row.t < 0.75 * t_end || row.z_m1 <= 0) continue;
    const double y = std::log(row.z_m1);
    sx += row.t;
    sy += y;
    sxx += row.t * row.t;
    sxy += row.t * y;
    ++count;
  }
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    if (denom > 0) rep.fitted_rate = -(count * sxy - sx * sy) / denom;
  }

  rep.bound_ok = true;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  const double rate = 0.95 * (nu - z0);
  for (const auto& row : series.rows) {
    const double bound = z0 * std::exp(-rate * row.t);
    const bool ok = row.z_m1 <= bound * (1.0 + 1e-12);
    rep.bound_ok = rep.bound_ok && ok;
    const double margin = bound > 0 ? row.z_m1 / bound - 1.0 : row.z_m1;
    rep.worst_margin = std::max(rep.worst_margin, margin);
  }
  return rep;
}

}  // namespace gns
