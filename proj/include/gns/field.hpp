#pragma once

#include "gns/lattice.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace gns {

using Complex = std::complex<double>;

/// Complex 3-vector Fourier coefficients on a frequency lattice; the solver's
/// state. Fields are plain values: copying is deep for the coefficients and
/// shared for the (immutable) lattice.
class SpectralVectorField {
public:
  SpectralVectorField() = default;
  explicit SpectralVectorField(LatticePtr lattice)
      : lattice_(std::move(lattice)),
        coeffs_(Eigen::Matrix3Xcd::Zero(3, lattice_->size())) {}

  const LatticePtr& lattice() const { return lattice_; }
  Eigen::Matrix3Xcd& coeffs() { return coeffs_; }
  const Eigen::Matrix3Xcd& coeffs() const { return coeffs_; }

  SpectralVectorField& operator+=(const SpectralVectorField& o);
  SpectralVectorField& operator-=(const SpectralVectorField& o);
  SpectralVectorField& operator*=(double s);

private:
  LatticePtr lattice_;
  Eigen::Matrix3Xcd coeffs_;
};

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator*(double s, SpectralVectorField f);

/// Scalar-valued spectral field (one component of a vector field, or a
/// convolution output).
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(LatticePtr lattice)
      : lattice_(std::move(lattice)),
        coeffs_(Eigen::VectorXcd::Zero(lattice_->size())) {}

  const LatticePtr& lattice() const { return lattice_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

private:
  LatticePtr lattice_;
  Eigen::VectorXcd coeffs_;
};

/// Component c of a vector field as a scalar field.
ScalarField component(const SpectralVectorField& f, int c);

/// Symmetrizes u(k) <- (u(k) + conj(u(-k)))/2. Idempotent; a field that is
/// already Hermitian is returned bitwise unchanged.
SpectralVectorField enforce_hermitian(const SpectralVectorField& f);

/// Per-mode orthogonal projection u(k) <- u(k) - k (k.u(k))/|k|^2 onto
/// divergence-free fields. Idempotent; never increases |u(k)|.
SpectralVectorField leray_project(const SpectralVectorField& f);

/// max_k |k . u(k)|.
double divergence_residual(const SpectralVectorField& f);

/// Fourier multiplier -|k|^2.
SpectralVectorField laplacian(const SpectralVectorField& f);

/// Hermitian, divergence-free field with |u(k)| <= amplitude * e^{-decay_rate |k|},
/// deterministic in the seed.
SpectralVectorField random_divfree_field(const LatticePtr& lattice, double decay_rate,
                                         double amplitude, std::uint64_t seed);

/// Hermitian scalar field with |f(k)| <= amplitude * e^{-decay_rate |k|};
/// test-data generator for the convolution and norm inequalities.
ScalarField random_scalar_field(const LatticePtr& lattice, double decay_rate,
                                double amplitude, std::uint64_t seed);

namespace detail {
/// Uniform double in [0,1) from the raw 64-bit stream; avoids distribution
/// objects so streams are identical across standard libraries.
double uniform01(std::uint64_t raw);
}  // namespace detail

}  // namespace gns
