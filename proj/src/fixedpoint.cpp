#include "gns/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gns {

namespace {

double trapezoid(const Eigen::VectorXd& values, double dt) {
  const Eigen::Index n = values.size();
  if (n < 2) return 0.0;
  double sum = 0.5 * (values[0] + values[n - 1]);
  for (Eigen::Index j = 1; j + 1 < n; ++j) sum += values[j];
  return dt * sum;
}

void require_same_grid(const Trajectory& a, const Trajectory& b) {
  if (a.nodeCount() != b.nodeCount() ||
      std::abs(a.dt - b.dt) > 1e-12 * std::max(1.0, std::abs(a.dt))) {
    throw std::invalid_argument("trajectories live on different time grids");
  }
}

}  // namespace

TrajectoryLedger trajectory_ledger(const Trajectory& traj, const GevreyParams& p) {
  TrajectoryLedger led;
  const Eigen::Index n = traj.nodeCount();
  if (n == 0) return led;
  const FrequencyLattice& lat = *traj.nodes.front().lattice();
  const Eigen::VectorXd wm1 = gevrey_weights(lat, p.with_rho(-1));
  const Eigen::VectorXd w0 = gevrey_weights(lat, p.with_rho(0));
  const Eigen::VectorXd wp1 = gevrey_weights(lat, p.with_rho(1));
  led.zm1.resize(n);
  led.z0.resize(n);
  led.zp1.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::VectorXd mags = magnitudes(traj.nodes[static_cast<std::size_t>(j)]);
    led.zm1[j] = weighted_sum(mags, wm1);
    led.z0[j] = weighted_sum(mags, w0);
    led.zp1[j] = weighted_sum(mags, wp1);
  }
  led.sup_zm1 = led.zm1.maxCoeff();
  led.l1_zp1 = trapezoid(led.zp1, traj.dt);
  return led;
}

double zT_norm(const Trajectory& traj, const GevreyParams& p) {
  return trajectory_ledger(traj, p).zT();
}

Trajectory operator-(const Trajectory& a, const Trajectory& b) {
  require_same_grid(a, b);
  Trajectory out;
  out.dt = a.dt;
  out.nodes.reserve(a.nodes.size());
  for (std::size_t j = 0; j < a.nodes.size(); ++j) out.nodes.push_back(a.nodes[j] - b.nodes[j]);
  return out;
}

Trajectory operator+(const Trajectory& a, const Trajectory& b) {
  require_same_grid(a, b);
  Trajectory out;
  out.dt = a.dt;
  out.nodes.reserve(a.nodes.size());
  for (std::size_t j = 0; j < a.nodes.size(); ++j) out.nodes.push_back(a.nodes[j] + b.nodes[j]);
  return out;
}

std::pair<SpectralVectorField, SpectralVectorField> split_frequencies(
    const SpectralVectorField& u0, double N) {
  if (!(N > 0)) throw std::invalid_argument("split cutoff must be positive");
  const FrequencyLattice& lat = *u0.lattice();
  SpectralVectorField low(u0.lattice()), high(u0.lattice());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    if (lat.modulus()[i] <= N) {
      low.coeffs().col(i) = u0.coeffs().col(i);
    } else {
      high.coeffs().col(i) = u0.coeffs().col(i);
    }
  }
  return {low, high};
}

Trajectory heat_flow(const SpectralVectorField& f0, double dt, Eigen::Index node_count,
                     double nu) {
  Trajectory out;
  out.dt = dt;
  out.nodes.reserve(static_cast<std::size_t>(node_count));
  for (Eigen::Index j = 0; j < node_count; ++j) {
    out.nodes.push_back(heat_apply(f0, dt * static_cast<double>(j), nu));
  }
  return out;
}

namespace {

// closed form of |e^{t Lap} v0|_{L^1_T(Z^1)} in the nu = 1 frame:
// sum_k (1 - e^{-T |k|^2}) |k|^{-1} e^{a|k|^{1/sigma}} |v0(k)|
double heat_l1_z1_closed_form(const SpectralVectorField& v0, const GevreyParams& p, double T) {
  const FrequencyLattice& lat = *v0.lattice();
  const Eigen::VectorXd wm1 = gevrey_weights(lat, p.with_rho(-1));
  Eigen::VectorXd terms(lat.size());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    terms[i] = -std::expm1(-T * lat.modulusSquared()[i]) * wm1[i] * v0.coeffs().col(i).norm();
  }
  return detail::neumaier_sum(terms);
}

}  // namespace

Feasibility check_picard_params(const SpectralVectorField& u0, double nu, const GevreyParams& p,
                                const PicardParams& params) {
  if (!(nu > 0)) throw std::invalid_argument("nu must be positive");
  Feasibility f;
  const GevreyParams pm1 = p.with_rho(-1);
  SpectralVectorField u0s = (1.0 / nu) * u0;
  f.z0 = z_norm(u0s, pm1);
  auto [v0, w0] = split_frequencies(u0s, params.N > 0 ? params.N : 1.0);
  f.w0_norm = z_norm(w0, pm1);
  f.eps_pair = 2.0 * params.epsilon * f.z0;
  f.z0_plus_eps = f.z0 + params.epsilon;
  f.contraction_strong = 4.0 * (params.epsilon + 2.0 * params.r + f.z0);
  f.contraction_weak = 4.0 * (params.epsilon + 2.0 * params.r * f.z0);
  f.v_l1_z1 = heat_l1_z1_closed_form(v0, pm1, params.T);

  auto fail = [&f](const std::string& why) {
    f.feasible = false;
    f.reason = why;
  };
  f.feasible = true;
  const double steps = params.T / params.dt;
  if (!(params.N > 0)) fail("cutoff N must be positive");
  else if (!(params.r > 0 && params.r < 0.1)) fail("radius r must lie in (0, 1/10)");
  else if (!(params.epsilon > 0)) fail("epsilon must be positive");
  else if (!(params.T > 0) || !(params.dt > 0)) fail("horizon and spacing must be positive");
  else if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps) || steps < 1.5)
    fail("dt must divide T into at least 2 steps");
  else if (params.max_iters < 1 || !(params.tol > 0)) fail("iteration controls invalid");
  else if (!(f.w0_norm < params.r / 5.0)) fail("|w0|_{Z^-1} >= r/5: cutoff N too small");
  else if (!(f.eps_pair < params.r / 5.0)) fail("2 eps |u0|_{Z^-1} >= r/5");
  else if (!(f.z0_plus_eps < 0.2)) fail("|u0|_{Z^-1} + eps >= 1/5");
  else if (!(f.contraction_strong <= 0.5)) fail("4(eps + 2r + |u0|_{Z^-1}) > 1/2");
  else if (!(f.v_l1_z1 < params.epsilon)) fail("|v|_{L^1_T(Z^1)} >= eps: horizon T too long");
  return f;
}

ParamSelection choose_parameters(const SpectralVectorField& u0, double nu, const GevreyParams& p,
                                 double dt) {
  if (!(nu > 0)) throw std::invalid_argument("nu must be positive");
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  const GevreyParams pm1 = p.with_rho(-1);
  SpectralVectorField u0s = (1.0 / nu) * u0;
  const double z0 = z_norm(u0s, pm1);

  ParamSelection sel;
  PicardParams& q = sel.params;

  auto grid = [&dt](double T) {
    const auto steps = std::clamp<long>(std::lround(T / dt), 2, 4096);
    return T / static_cast<double>(steps);
  };

  if (z0 == 0.0) {
    q = PicardParams{};
    q.N = 1.0;
    q.r = 0.05;
    q.epsilon = q.r / 20.0;
    q.T = 1.0;
    q.dt = grid(q.T);
    sel.feasibility = check_picard_params(u0, nu, p, q);
    return sel;
  }

  const double slack = 0.125 - z0;
  if (!(slack > 0)) {
    q = PicardParams{};
    sel.feasibility = check_picard_params(u0, nu, p, q);
    sel.feasibility.feasible = false;
    sel.feasibility.reason =
        "|u0|_{Z^-1}/nu >= 1/8: the strong contraction constraint 4(eps + 2r + z0) <= 1/2 "
        "cannot be met for any positive r, eps";
    if (z0 >= 0.2) {
      sel.feasibility.reason += "; |u0|_{Z^-1}/nu >= 1/5 also violates z0 + eps < 1/5";
    }
    return sel;
  }

  q.r = std::min(0.095, 0.4 * slack);
  q.epsilon = std::min(0.1 * slack, 0.09 * q.r / z0);  // keeps 2 eps z0 < r/5 with margin

  // smallest integer cutoff whose tail satisfies |w0|_{Z^-1} < r/5
  const FrequencyLattice& lat = *u0.lattice();
  const Eigen::VectorXd wm1 = gevrey_weights(lat, pm1);
  const double max_mod = lat.modulus().maxCoeff();
  q.N = 1.0;
  for (int cut = 1; cut <= static_cast<int>(max_mod) + 1; ++cut) {
    Eigen::VectorXd tail_terms = Eigen::VectorXd::Zero(lat.size());
    for (Eigen::Index i = 0; i < lat.size(); ++i) {
      if (lat.modulus()[i] > cut) {
        tail_terms[i] = wm1[i] * u0s.coeffs().col(i).norm();
      }
    }
    if (detail::neumaier_sum(tail_terms) < 0.98 * q.r / 5.0) {
      q.N = cut;
      break;
    }
    q.N = cut + 1;
  }

  // largest horizon with |v|_{L^1_T(Z^1)} below eps, by bisection on the
  // closed form, which is increasing in T
  auto [v0, w0] = split_frequencies(u0s, q.N);
  const double target = 0.9 * q.epsilon;
  const double t_cap = 8.0;
  if (heat_l1_z1_closed_form(v0, pm1, t_cap) <= target) {
    q.T = t_cap;
  } else {
    double lo = 0.0, hi = t_cap;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (heat_l1_z1_closed_form(v0, pm1, mid) <= target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    q.T = lo;
  }
  q.dt = grid(q.T);
  q.max_iters = 50;
  q.tol = 1e-12;
  sel.feasibility = check_picard_params(u0, nu, p, q);
  return sel;
}

Trajectory psi_apply(const Trajectory& w, const Trajectory& v, const SpectralVectorField& w0,
                     const PicardParams& params, double nu, ConvMethod method, bool linearized) {
  require_same_grid(w, v);
  if (w.nodeCount() < 2) throw std::invalid_argument("psi needs at least 2 nodes");
  if (std::abs(w.dt - params.dt) > 1e-12 * std::max(1.0, params.dt) ||
      w.nodeCount() != static_cast<Eigen::Index>(std::lround(params.T / params.dt)) + 1) {
    throw std::invalid_argument("trajectory grid does not match the parameters");
  }

  const auto n = w.nodes.size();
  DuhamelSamples samples;
  samples.times.resize(static_cast<Eigen::Index>(n));
  samples.forcing.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    samples.times[static_cast<Eigen::Index>(j)] = w.dt * static_cast<double>(j);
    if (linearized) {
      samples.forcing.emplace_back(w0.lattice());
    } else {
      const SpectralVectorField sum = v.nodes[j] + w.nodes[j];
      samples.forcing.push_back(bilinear_B(sum, sum, method));
    }
  }
  const std::vector<SpectralVectorField> duh = duhamel_prefix(samples, nu);

  Trajectory out;
  out.dt = w.dt;
  out.nodes.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.nodes.push_back(heat_apply(w0, w.dt * static_cast<double>(j), nu) - duh[j]);
  }
  return out;
}

namespace {

// sup-Z^{-1} and trapezoid-L^1(Z^1) of the Duhamel integral of one forcing
// stream; the I_k / J_k diagnostics of the construction.
std::pair<double, double> duhamel_piece_norms(const std::vector<SpectralVectorField>& forcing,
                                              double dt, const GevreyParams& p) {
  DuhamelSamples samples;
  samples.times.resize(static_cast<Eigen::Index>(forcing.size()));
  for (std::size_t j = 0; j < forcing.size(); ++j) {
    samples.times[static_cast<Eigen::Index>(j)] = dt * static_cast<double>(j);
  }
  samples.forcing = forcing;
  Trajectory traj;
  traj.dt = dt;
  traj.nodes = duhamel_prefix(samples, 1.0);
  const TrajectoryLedger led = trajectory_ledger(traj, p);
  return {led.sup_zm1, led.l1_zp1};
}

}  // namespace

PicardResult picard_solve(const SpectralVectorField& u0, double nu, const GevreyParams& p,
                          const PicardParams& params, ConvMethod method, bool linearized) {
  PicardResult res;
  res.params = params;
  res.feasibility = check_picard_params(u0, nu, p, params);
  if (!res.feasibility.feasible) {
    throw std::invalid_argument("picard parameters infeasible: " + res.feasibility.reason);
  }
  res.piece_bound = params.r / 5.0;

  const GevreyParams pm1 = p.with_rho(-1);
  const SpectralVectorField u0s = (1.0 / nu) * u0;
  auto [v0, w0] = split_frequencies(u0s, params.N);
  const auto node_count =
      static_cast<Eigen::Index>(std::lround(params.T / params.dt)) + 1;

  const Trajectory v = heat_flow(v0, params.dt, node_count, 1.0);
  Trajectory w = heat_flow(w0, params.dt, node_count, 1.0);
  {
    const TrajectoryLedger led = trajectory_ledger(w, pm1);
    res.ball_sup.push_back(led.sup_zm1);
    res.ball_l1.push_back(led.l1_zp1);
  }

  double prev_gap = std::numeric_limits<double>::infinity();
  int rising = 0;
  for (int m = 1; m <= params.max_iters; ++m) {
    Trajectory w_next = psi_apply(w, v, w0, params, 1.0, method, linearized);
    const double gap = zT_norm(w_next - w, pm1);
    res.gaps.push_back(gap);
    if (std::isfinite(prev_gap) && prev_gap > 0) {
      const double ratio = gap / prev_gap;
      res.ratios.push_back(ratio);
      rising = ratio > 1.0 ? rising + 1 : 0;
    }
    const TrajectoryLedger led = trajectory_ledger(w_next, pm1);
    res.ball_sup.push_back(led.sup_zm1);
    res.ball_l1.push_back(led.l1_zp1);
    w = std::move(w_next);
    res.iterations = m;
    if (gap <= params.tol) {
      res.converged = true;
      break;
    }
    if (rising >= 3) {
      res.diverged = true;
      break;
    }
    prev_gap = gap;
  }

  res.residual = zT_norm(psi_apply(w, v, w0, params, 1.0, method, linearized) - w, pm1);

  // per-piece diagnostics of the final iterate
  {
    const TrajectoryLedger hw =
        trajectory_ledger(heat_flow(w0, params.dt, node_count, 1.0), pm1);
    res.I_norms[0] = hw.sup_zm1;
    res.J_norms[0] = hw.l1_zp1;
    if (!linearized) {
      const std::array<std::pair<const Trajectory*, const Trajectory*>, 4> pieces = {
          std::pair{&v, &v}, std::pair{&v, &w}, std::pair{&w, &v}, std::pair{&w, &w}};
      for (std::size_t q = 0; q < pieces.size(); ++q) {
        std::vector<SpectralVectorField> forcing;
        forcing.reserve(static_cast<std::size_t>(node_count));
        for (Eigen::Index j = 0; j < node_count; ++j) {
          forcing.push_back(bilinear_B(pieces[q].first->nodes[static_cast<std::size_t>(j)],
                                       pieces[q].second->nodes[static_cast<std::size_t>(j)],
                                       method));
        }
        const auto [in, jn] = duhamel_piece_norms(forcing, params.dt, pm1);
        res.I_norms[q + 1] = in;
        res.J_norms[q + 1] = jn;
      }
    }
  }

  // map back to original units: u(t) = nu * u_rescaled(nu t)
  auto to_original = [&](const Trajectory& t) {
    Trajectory out;
    out.dt = params.dt / nu;
    out.nodes.reserve(t.nodes.size());
    for (const auto& f : t.nodes) out.nodes.push_back(nu * f);
    return out;
  };
  res.v = to_original(v);
  res.w = to_original(w);
  res.u = res.v + res.w;
  return res;
}

double contraction_ratio(const Trajectory& w1, const Trajectory& w2, const Trajectory& v,
                         const SpectralVectorField& w0, const PicardParams& params, double nu,
                         const GevreyParams& p, ConvMethod method) {
  require_same_grid(w1, w2);
  const GevreyParams pm1 = p.with_rho(-1);
  const double denom = zT_norm(w2 - w1, pm1);
  if (denom == 0.0) {
    throw std::invalid_argument("contraction ratio undefined for identical trajectories");
  }
  const Trajectory p2 = psi_apply(w2, v, w0, params, nu, method);
  const Trajectory p1 = psi_apply(w1, v, w0, params, nu, method);
  return zT_norm(p2 - p1, pm1) / denom;
}

}  // namespace gns
