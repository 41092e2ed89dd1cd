#pragma once

#include "gns/field.hpp"
#include "gns/lattice.hpp"

#include <Eigen/Dense>

namespace gns {

/// Parameters (rho, a, sigma) selecting one norm of the weighted-ell^1
/// family with per-mode weight |k|^rho e^{a |k|^{1/sigma}}. a = 0 recovers
/// the unweighted |k|^rho family.
struct GevreyParams {
  int rho = -1;
  double a = 0.0;
  double sigma = 2.0;

  GevreyParams() = default;
  GevreyParams(int rho_, double a_, double sigma_);

  GevreyParams with_rho(int r) const { return GevreyParams(r, a, sigma); }
  GevreyParams with_a(double a_) const { return GevreyParams(rho, a_, sigma); }
};

/// |k|^rho e^{a |k|^{1/sigma}}; rejects k = 0.
double gevrey_weight(const Eigen::Vector3i& k, const GevreyParams& p);

/// Per-mode weight table in the canonical enumeration order.
Eigen::VectorXd gevrey_weights(const FrequencyLattice& lattice, const GevreyParams& p);

/// Per-mode Euclidean magnitudes |u(k)| in canonical order.
Eigen::VectorXd magnitudes(const SpectralVectorField& f);

/// sum_i w_i m_i with compensated (Neumaier) summation in index order.
double weighted_sum(const Eigen::VectorXd& mags, const Eigen::VectorXd& weights);

/// sum_k w(k) |u(k)| with compensated (Neumaier) summation in canonical
/// order, so the value is independent of how callers obtained the table.
double weighted_magnitude_sum(const SpectralVectorField& f, const Eigen::VectorXd& weights);
double weighted_magnitude_sum(const ScalarField& f, const Eigen::VectorXd& weights);

/// The norm sum_k |k|^rho e^{a|k|^{1/sigma}} |u(k)|, |u(k)| Euclidean.
double z_norm(const SpectralVectorField& f, const GevreyParams& p);
double z_norm(const ScalarField& f, const GevreyParams& p);

/// sup_{x>=0} x^2 e^{-b x^{1/sigma}} with b = a/sqrt(sigma) - a/sigma > 0,
/// evaluated at the stationary point x* = (2 sigma / b)^sigma and cross-checked
/// by local sampling around it. Rejects a <= 0 or sigma <= 1.
double lemma4_constant(double a, double sigma);

namespace detail {
/// Compensated sequential sum of v's entries in index order.
double neumaier_sum(const Eigen::VectorXd& v);
}  // namespace detail

}  // namespace gns
