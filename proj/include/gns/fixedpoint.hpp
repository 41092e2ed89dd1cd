#pragma once

#include "gns/field.hpp"
#include "gns/nonlinear.hpp"
#include "gns/norms.hpp"
#include "gns/semigroup.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace gns {

/// Parameters of the local fixed-point construction. All values live in the
/// nu = 1 frame (see picard_solve for the rescaling); dt divides T exactly.
struct PicardParams {
  double N = 1.0;        // frequency cutoff of the low/high split
  double r = 0.05;       // ball radius, in (0, 1/10)
  double epsilon = 0.0025;
  double T = 1.0;        // horizon
  double dt = 1.0 / 64;  // quadrature spacing
  int max_iters = 50;
  double tol = 1e-12;    // absolute Z_T tolerance on iterate gaps
};

/// Evaluation of every smallness constraint behind the construction. The
/// contraction constraint is enforced in its strong form
/// 4(eps + 2r + z0) <= 1/2; the weak variant 4(eps + 2r z0) <= 1/2 is
/// recorded alongside but not enforced.
struct Feasibility {
  bool feasible = false;
  std::string reason;
  double z0 = 0;                 // |u0|_{Z^{-1}} in the nu = 1 frame
  double w0_norm = 0;            // must be < r/5
  double eps_pair = 0;           // 2 eps z0, must be < r/5
  double z0_plus_eps = 0;        // must be < 1/5
  double contraction_strong = 0; // 4(eps + 2r + z0), must be <= 1/2
  double contraction_weak = 0;   // 4(eps + 2r z0), recorded only
  double v_l1_z1 = 0;            // closed-form |v|_{L1_T(Z^1)}, must be < eps
};

struct ParamSelection {
  PicardParams params;
  Feasibility feasibility;
};

/// Field per node on a uniform time grid t_j = j dt.
struct Trajectory {
  double dt = 0;
  std::vector<SpectralVectorField> nodes;

  Eigen::Index nodeCount() const { return static_cast<Eigen::Index>(nodes.size()); }
  double time(Eigen::Index j) const { return dt * static_cast<double>(j); }
};

/// Per-node Z^{-1}, Z^0, Z^1 records together with the sup / trapezoid-L^1
/// accumulations entering the Z_T norm.
struct TrajectoryLedger {
  Eigen::VectorXd zm1, z0, zp1;
  double sup_zm1 = 0;
  double l1_zp1 = 0;

  double zT() const { return sup_zm1 + l1_zp1; }
};

TrajectoryLedger trajectory_ledger(const Trajectory& traj, const GevreyParams& p);

/// sup_j Z^{-1} + trapezoid sum of Z^1; the norm of the local solution space.
double zT_norm(const Trajectory& traj, const GevreyParams& p);

Trajectory operator-(const Trajectory& a, const Trajectory& b);
Trajectory operator+(const Trajectory& a, const Trajectory& b);

/// Closed low/high split at |k| = N: v0 keeps |k| <= N, w0 keeps |k| > N;
/// v0 + w0 = u0 exactly.
std::pair<SpectralVectorField, SpectralVectorField> split_frequencies(
    const SpectralVectorField& u0, double N);

/// Heat-flow trajectory t_j -> e^{nu t_j Laplacian} f0.
Trajectory heat_flow(const SpectralVectorField& f0, double dt, Eigen::Index node_count,
                     double nu);

/// Re-evaluates every PicardParams constraint for the given data.
Feasibility check_picard_params(const SpectralVectorField& u0, double nu,
                                const GevreyParams& p, const PicardParams& params);

/// Selects (N, r, epsilon, T, dt) satisfying every constraint, or reports
/// infeasibility when |u0|_{Z^{-1}}/nu is too large for them. dt is a grid
/// suggestion; the returned spacing divides T exactly.
ParamSelection choose_parameters(const SpectralVectorField& u0, double nu,
                                 const GevreyParams& p, double dt);

/// psi(w)(t_j) = e^{nu t_j Lap} w0 - int_0^{t_j} e^{nu(t_j-tau) Lap}
/// B(v+w, v+w) dtau, node by node with the exponential-trapezoidal rule.
Trajectory psi_apply(const Trajectory& w, const Trajectory& v, const SpectralVectorField& w0,
                     const PicardParams& params, double nu,
                     ConvMethod method = ConvMethod::fast, bool linearized = false);

struct PicardResult {
  Trajectory u, v, w;  // original units (fields and times scaled back by nu)
  PicardParams params;
  Feasibility feasibility;
  std::vector<double> gaps;      // |w_{m+1} - w_m|_{Z_T} per iteration
  std::vector<double> ratios;    // consecutive gap ratios
  std::vector<double> ball_sup;  // sup_t Z^{-1} of each iterate
  std::vector<double> ball_l1;   // trapezoid L^1(Z^1) of each iterate
  std::array<double, 5> I_norms{};  // sup_t Z^{-1} of the psi pieces: heat(w0),
                                    // Duh B(v,v), Duh B(v,w), Duh B(w,v), Duh B(w,w)
  std::array<double, 5> J_norms{};  // trapezoid L^1(Z^1) of the same pieces
  double piece_bound = 0;           // r/5, the target of each of the ten margins
  double residual = 0;              // |psi(w) - w|_{Z_T} at the returned iterate
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
};

/// Picard iteration w_{m+1} = psi(w_m) from the heat flow of w0 inside the
/// ball B_r. Any nu > 0 is accepted; data and times are rescaled to nu = 1
/// internally and the returned trajectories are in original units, while the
/// diagnostics (gaps, ball ledgers, I/J norms, residual) are nu = 1 frame
/// quantities, matching params. Throws on infeasible params; non-contraction
/// for three consecutive iterations is reported via `diverged`.
PicardResult picard_solve(const SpectralVectorField& u0, double nu, const GevreyParams& p,
                          const PicardParams& params, ConvMethod method = ConvMethod::fast,
                          bool linearized = false);

/// |psi(w2) - psi(w1)|_{Z_T} / |w2 - w1|_{Z_T}; rejects w1 = w2.
double contraction_ratio(const Trajectory& w1, const Trajectory& w2, const Trajectory& v,
                         const SpectralVectorField& w0, const PicardParams& params, double nu,
                         const GevreyParams& p, ConvMethod method = ConvMethod::fast);

}  // namespace gns
