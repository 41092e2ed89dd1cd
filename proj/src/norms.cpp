#include "gns/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace gns {

GevreyParams::GevreyParams(int rho_, double a_, double sigma_) : rho(rho_), a(a_), sigma(sigma_) {
  if (rho != -1 && rho != 0 && rho != 1) {
    throw std::invalid_argument("rho must be -1, 0 or 1");
  }
  if (!(a >= 0)) throw std::invalid_argument("a must be nonnegative");
  if (!(sigma > 1)) throw std::invalid_argument("sigma must exceed 1");
}

double gevrey_weight(const Eigen::Vector3i& k, const GevreyParams& p) {
  if (k == Eigen::Vector3i::Zero()) {
    throw std::invalid_argument("gevrey_weight is undefined at k = 0");
  }
  const double mod = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]);
  double w = std::exp(p.a * std::pow(mod, 1.0 / p.sigma));
  switch (p.rho) {
    case -1: return w / mod;
    case 0: return w;
    default: return w * mod;
  }
}

Eigen::VectorXd gevrey_weights(const FrequencyLattice& lattice, const GevreyParams& p) {
  Eigen::VectorXd w(lattice.size());
  const Eigen::VectorXd& mod = lattice.modulus();
  const double inv_sigma = 1.0 / p.sigma;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double v = std::exp(p.a * std::pow(mod[i], inv_sigma));
    if (p.rho == -1) v /= mod[i];
    else if (p.rho == 1) v *= mod[i];
    w[i] = v;
  }
  return w;
}

namespace detail {

double neumaier_sum(const Eigen::VectorXd& v) {
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v[i];
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace detail

Eigen::VectorXd magnitudes(const SpectralVectorField& f) {
  Eigen::VectorXd m(f.coeffs().cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m[i] = f.coeffs().col(i).norm();
  }
  return m;
}

double weighted_sum(const Eigen::VectorXd& mags, const Eigen::VectorXd& weights) {
  Eigen::VectorXd terms(weights.size());
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    terms[i] = weights[i] * mags[i];
  }
  return detail::neumaier_sum(terms);
}

double weighted_magnitude_sum(const SpectralVectorField& f, const Eigen::VectorXd& weights) {
  return weighted_sum(magnitudes(f), weights);
}

double weighted_magnitude_sum(const ScalarField& f, const Eigen::VectorXd& weights) {
  Eigen::VectorXd terms(weights.size());
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    terms[i] = weights[i] * std::abs(f.coeffs()[i]);
  }
  return detail::neumaier_sum(terms);
}

double z_norm(const SpectralVectorField& f, const GevreyParams& p) {
  return weighted_magnitude_sum(f, gevrey_weights(*f.lattice(), p));
}

double z_norm(const ScalarField& f, const GevreyParams& p) {
  return weighted_magnitude_sum(f, gevrey_weights(*f.lattice(), p));
}

double lemma4_constant(double a, double sigma) {
  if (!(a > 0)) throw std::invalid_argument("lemma4_constant requires a > 0");
  if (!(sigma > 1)) throw std::invalid_argument("lemma4_constant requires sigma > 1");
  const double b = a / std::sqrt(sigma) - a / sigma;
  // log g(x) = 2 log x - b x^{1/sigma}, stationary at x* = (2 sigma / b)^sigma
  const double log_xstar = sigma * std::log(2.0 * sigma / b);
  auto log_g = [&](double log_x) {
    return 2.0 * log_x - b * std::exp(log_x / sigma);
  };
  double best = log_g(log_xstar);
  for (double delta : {-0.1, -0.01, 0.01, 0.1}) {
    best = std::max(best, log_g(log_xstar + delta));
  }
  return std::exp(best);
}

}  // namespace gns
