#pragma once

#include "gns/field.hpp"
#include "gns/norms.hpp"

#include <Eigen/Dense>

namespace gns {

enum class ConvMethod { direct, fast };

/// Fourier coefficients of a rank-2 tensor field such as u (x) v; entry (r,c)
/// of mode k is stored at coeffs()(3*r + c, index of k).
class TensorField {
public:
  TensorField() = default;
  explicit TensorField(LatticePtr lattice)
      : lattice_(std::move(lattice)),
        coeffs_(Eigen::Matrix<Complex, 9, Eigen::Dynamic>::Zero(9, lattice_->size())) {}

  const LatticePtr& lattice() const { return lattice_; }
  Eigen::Matrix<Complex, 9, Eigen::Dynamic>& coeffs() { return coeffs_; }
  const Eigen::Matrix<Complex, 9, Eigen::Dynamic>& coeffs() const { return coeffs_; }

  Complex& entry(int r, int c, Eigen::Index mode) { return coeffs_(3 * r + c, mode); }
  const Complex& entry(int r, int c, Eigen::Index mode) const { return coeffs_(3 * r + c, mode); }

private:
  LatticePtr lattice_;
  Eigen::Matrix<Complex, 9, Eigen::Dynamic> coeffs_;
};

/// Lattice convolution h(k) = sum_m f(k-m) g(m), output truncated back to K.
/// Reference O(|K|^2) path; terms with k-m = 0 vanish because fields carry no
/// zero mode.
ScalarField convolve_direct(const ScalarField& f, const ScalarField& g);

/// Same value as convolve_direct via zero-padded transforms (padding factor 2,
/// so the circular product is the exact linear convolution on K).
ScalarField convolve_fast(const ScalarField& f, const ScalarField& g);

ScalarField convolve(const ScalarField& f, const ScalarField& g, ConvMethod method);

/// Coefficients of u (x) v: entry (r,c) = (u_r * v_c)(k) as a lattice
/// convolution. When u and v alias the same field the symmetric entries are
/// shared rather than recomputed.
TensorField tensor_convolution(const SpectralVectorField& u, const SpectralVectorField& v,
                               ConvMethod method);

/// Component c = i sum_r k_r T(r,c); the divergence contracts the derivative
/// index (first slot).
SpectralVectorField tensor_divergence(const TensorField& t);

/// div(u (x) v) without Leray projection (the object of the Duhamel bounds).
SpectralVectorField divergence_of_product(const SpectralVectorField& u,
                                          const SpectralVectorField& v, ConvMethod method);

/// B(u,v) = P div(u (x) v); Hermitian and divergence-free output.
SpectralVectorField bilinear_B(const SpectralVectorField& u, const SpectralVectorField& v,
                               ConvMethod method);

/// Weighted sum over modes of the Frobenius magnitude of the 3x3 coefficient.
double z_norm(const TensorField& t, const GevreyParams& p);

}  // namespace gns
