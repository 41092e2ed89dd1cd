#include "gns/field.hpp"

#include <random>
#include <stdexcept>

namespace gns {

namespace {

void require_same_lattice(const LatticePtr& a, const LatticePtr& b) {
  if (!a || !b || !same_lattice(*a, *b)) {
    throw std::invalid_argument("fields live on different lattices");
  }
}

}  // namespace

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& o) {
  require_same_lattice(lattice_, o.lattice_);
  coeffs_ += o.coeffs_;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& o) {
  require_same_lattice(lattice_, o.lattice_);
  coeffs_ -= o.coeffs_;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) {
  a += b;
  return a;
}

SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) {
  a -= b;
  return a;
}

SpectralVectorField operator*(double s, SpectralVectorField f) {
  f *= s;
  return f;
}

ScalarField component(const SpectralVectorField& f, int c) {
  if (c < 0 || c > 2) throw std::invalid_argument("component index must be 0, 1 or 2");
  ScalarField out(f.lattice());
  out.coeffs() = f.coeffs().row(c).transpose();
  return out;
}

SpectralVectorField enforce_hermitian(const SpectralVectorField& f) {
  const FrequencyLattice& lat = *f.lattice();
  SpectralVectorField out(f.lattice());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const Eigen::Index j = lat.conjugateIndex(i);
    out.coeffs().col(i) = 0.5 * (f.coeffs().col(i) + f.coeffs().col(j).conjugate());
  }
  return out;
}

SpectralVectorField leray_project(const SpectralVectorField& f) {
  const FrequencyLattice& lat = *f.lattice();
  SpectralVectorField out = f;
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const Eigen::Vector3d k = lat.mode(i).cast<double>();
    const Complex radial = (k.x() * out.coeffs()(0, i) + k.y() * out.coeffs()(1, i) +
                            k.z() * out.coeffs()(2, i)) /
                           lat.modulusSquared()[i];
    out.coeffs()(0, i) -= k.x() * radial;
    out.coeffs()(1, i) -= k.y() * radial;
    out.coeffs()(2, i) -= k.z() * radial;
  }
  return out;
}

double divergence_residual(const SpectralVectorField& f) {
  const FrequencyLattice& lat = *f.lattice();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const Eigen::Vector3d k = lat.mode(i).cast<double>();
    const Complex d = k.x() * f.coeffs()(0, i) + k.y() * f.coeffs()(1, i) +
                      k.z() * f.coeffs()(2, i);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

SpectralVectorField laplacian(const SpectralVectorField& f) {
  SpectralVectorField out = f;
  const Eigen::VectorXd& ksq = f.lattice()->modulusSquared();
  for (Eigen::Index i = 0; i < ksq.size(); ++i) {
    out.coeffs().col(i) *= -ksq[i];
  }
  return out;
}

namespace detail {
double uniform01(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}
}  // namespace detail

namespace {

Complex random_unit_disc(std::mt19937_64& rng) {
  const double re = 2.0 * detail::uniform01(rng()) - 1.0;
  const double im = 2.0 * detail::uniform01(rng()) - 1.0;
  return {re, im};
}

}  // namespace

SpectralVectorField random_divfree_field(const LatticePtr& lattice, double decay_rate,
                                         double amplitude, std::uint64_t seed) {
  if (decay_rate <= 0) throw std::invalid_argument("decay_rate must be positive");
  if (amplitude < 0) throw std::invalid_argument("amplitude must be nonnegative");
  const FrequencyLattice& lat = *lattice;
  SpectralVectorField out(lattice);
  std::mt19937_64 rng(seed);
  // sqrt(6) bounds the Euclidean norm of three unit-box complex draws
  const double unit = 1.0 / std::sqrt(6.0);
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    if (!lat.isCanonical(i)) continue;
    Eigen::Vector3cd v;
    v << random_unit_disc(rng), random_unit_disc(rng), random_unit_disc(rng);
    v *= unit * amplitude * std::exp(-decay_rate * lat.modulus()[i]);
    out.coeffs().col(i) = v;
    out.coeffs().col(lat.conjugateIndex(i)) = v.conjugate();
  }
  // projection shrinks every mode, so the amplitude envelope survives
  return leray_project(out);
}

ScalarField random_scalar_field(const LatticePtr& lattice, double decay_rate, double amplitude,
                                std::uint64_t seed) {
  if (decay_rate <= 0) throw std::invalid_argument("decay_rate must be positive");
  if (amplitude < 0) throw std::invalid_argument("amplitude must be nonnegative");
  const FrequencyLattice& lat = *lattice;
  ScalarField out(lattice);
  std::mt19937_64 rng(seed);
  const double unit = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    if (!lat.isCanonical(i)) continue;
    const Complex v = random_unit_disc(rng) * unit * amplitude *
                      std::exp(-decay_rate * lat.modulus()[i]);
    out.coeffs()[i] = v;
    out.coeffs()[lat.conjugateIndex(i)] = std::conj(v);
  }
  return out;
}

}  // namespace gns
