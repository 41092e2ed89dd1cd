#include "gns/semigroup.hpp"

#include <cmath>
#include <stdexcept>

namespace gns {

SpectralVectorField heat_apply(const SpectralVectorField& f, double s, double nu) {
  if (s < 0) throw std::invalid_argument("heat_apply requires s >= 0");
  if (!(nu > 0)) throw std::invalid_argument("heat_apply requires nu > 0");
  SpectralVectorField out = f;
  const Eigen::VectorXd& ksq = f.lattice()->modulusSquared();
  for (Eigen::Index i = 0; i < ksq.size(); ++i) {
    out.coeffs().col(i) *= std::exp(-nu * s * ksq[i]);
  }
  return out;
}

namespace {

// g_left(z) = (1 - e^{-z}(1+z))/z^2, g_right(z) = (z - 1 + e^{-z})/z^2.
// Both lose accuracy to cancellation for small z, where the alternating
// series g_left = sum (-z)^n / (n! (n+2)) and g_right = g0 - g_left converge
// in a few terms.
constexpr double kSeriesCut = 0.5;

double g_left_series(double z) {
  double u = 1.0;   // (-z)^n / n!
  double sum = 0.5;  // n = 0 term
  for (int n = 1; n <= 24; ++n) {
    u *= -z / n;
    const double val = u / (n + 2.0);
    sum += val;
    if (std::abs(val) < 1e-20) break;
  }
  return sum;
}

double g0_series(double z) {
  double term = 1.0;
  double sum = term;
  for (int n = 1; n <= 24; ++n) {
    term *= -z / (n + 1.0);
    sum += term;
    if (std::abs(term) < 1e-20) break;
  }
  return sum;
}

}  // namespace

double exp_trap_weight_left(double z) {
  if (z < 0) throw std::invalid_argument("negative kernel exponent");
  if (z < kSeriesCut) return g_left_series(z);
  return (1.0 - std::exp(-z) * (1.0 + z)) / (z * z);
}

double exp_trap_weight_right(double z) {
  if (z < 0) throw std::invalid_argument("negative kernel exponent");
  if (z < kSeriesCut) return g0_series(z) - g_left_series(z);
  return (z - 1.0 + std::exp(-z)) / (z * z);
}

namespace {

void validate_samples(const DuhamelSamples& samples) {
  const auto n = static_cast<Eigen::Index>(samples.forcing.size());
  if (n < 2) throw std::invalid_argument("duhamel quadrature needs at least 2 nodes");
  if (samples.times.size() != n) {
    throw std::invalid_argument("time grid and forcing sample counts differ");
  }
  if (samples.times[0] != 0.0) throw std::invalid_argument("time grid must start at 0");
  const double dt = samples.times[1] - samples.times[0];
  if (!(dt > 0)) throw std::invalid_argument("time grid must be strictly increasing");
  for (Eigen::Index i = 1; i < n; ++i) {
    const double step = samples.times[i] - samples.times[i - 1];
    if (std::abs(step - dt) > 1e-12 * std::max(1.0, std::abs(dt))) {
      throw std::invalid_argument("duhamel quadrature requires a uniform grid");
    }
  }
  const LatticePtr& lat = samples.forcing.front().lattice();
  for (const auto& f : samples.forcing) {
    if (!f.lattice() || !same_lattice(*f.lattice(), *lat)) {
      throw std::invalid_argument("forcing samples live on different lattices");
    }
  }
}

}  // namespace

std::vector<SpectralVectorField> duhamel_prefix(const DuhamelSamples& samples, double nu) {
  if (!(nu > 0)) throw std::invalid_argument("duhamel quadrature requires nu > 0");
  validate_samples(samples);
  const auto n = static_cast<Eigen::Index>(samples.forcing.size());
  const double dt = samples.times[1] - samples.times[0];
  const FrequencyLattice& lat = *samples.forcing.front().lattice();

  Eigen::VectorXd decay(lat.size()), w_prev(lat.size()), w_next(lat.size());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const double z = nu * dt * lat.modulusSquared()[i];
    decay[i] = std::exp(-z);
    w_prev[i] = dt * exp_trap_weight_left(z);
    w_next[i] = dt * exp_trap_weight_right(z);
  }

  std::vector<SpectralVectorField> out;
  out.reserve(static_cast<std::size_t>(n));
  out.emplace_back(samples.forcing.front().lattice());  // D(0) = 0
  for (Eigen::Index j = 1; j < n; ++j) {
    SpectralVectorField next(samples.forcing.front().lattice());
    const auto& prev = out.back().coeffs();
    const auto& Fp = samples.forcing[static_cast<std::size_t>(j - 1)].coeffs();
    const auto& Fn = samples.forcing[static_cast<std::size_t>(j)].coeffs();
    for (Eigen::Index i = 0; i < lat.size(); ++i) {
      next.coeffs().col(i) = decay[i] * prev.col(i) + w_prev[i] * Fp.col(i) + w_next[i] * Fn.col(i);
    }
    out.push_back(std::move(next));
  }
  return out;
}

SpectralVectorField duhamel_quadrature(const DuhamelSamples& samples, double nu) {
  return duhamel_prefix(samples, nu).back();
}

}  // namespace gns
