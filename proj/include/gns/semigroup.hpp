#pragma once

#include "gns/field.hpp"

#include <Eigen/Dense>

#include <vector>

namespace gns {

/// Heat multiplier u(k) <- e^{-nu s |k|^2} u(k). Rejects s < 0 or nu <= 0.
SpectralVectorField heat_apply(const SpectralVectorField& f, double s, double nu);

/// Forcing samples F(t_i) on the uniform grid 0 = t_0 < ... < t_n.
struct DuhamelSamples {
  Eigen::VectorXd times;
  std::vector<SpectralVectorField> forcing;
};

/// Exponential-trapezoidal weights for int_0^dt e^{-kappa(dt-s)} ell(s) ds with
/// ell the linear interpolant: the left node carries dt*g_left(z) and the right
/// node dt*g_right(z), z = kappa dt. g_left + g_right = (1 - e^{-z})/z, so the
/// rule is exact for forcing constant in time, and both weights are <= 1/2.
double exp_trap_weight_left(double z);
double exp_trap_weight_right(double z);

/// int_0^{t_n} e^{-nu (t_n - tau) |k|^2} F(tau, k) dtau per mode, with F
/// linearly interpolated between nodes and the kernel integrated in closed
/// form. Rejects fewer than 2 nodes and nonuniform grids.
SpectralVectorField duhamel_quadrature(const DuhamelSamples& samples, double nu);

/// All partial integrals D(t_j), j = 0..n (D(0) = 0), by the one-pass
/// recurrence D_{j+1} = e^{-z} D_j + dt (g_left F_j + g_right F_{j+1}).
std::vector<SpectralVectorField> duhamel_prefix(const DuhamelSamples& samples, double nu);

}  // namespace gns
