#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gns/nonlinear.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace gns;

namespace {

double max_coeff_diff(const ScalarField& a, const ScalarField& b) {
  return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff();
}

double max_scale(const ScalarField& a) { return a.coeffs().cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("two-delta convolution closed form") {
  const LatticePtr lat = build_lattice(6);
  ScalarField f(lat), g(lat);
  const double A = 0.6, B = 1.7;
  const auto set_pair = [&](ScalarField& x, const Eigen::Vector3i& k, double amp) {
    x.coeffs()[lat->index(k)] = amp;
    x.coeffs()[lat->index((-k).eval())] = amp;
  };
  set_pair(f, {1, 0, 0}, A);
  set_pair(g, {0, 1, 0}, B);

  for (ConvMethod m : {ConvMethod::direct, ConvMethod::fast}) {
    const ScalarField h = convolve(f, g, m);
    for (Eigen::Index i = 0; i < lat->size(); ++i) {
      const Eigen::Vector3i k = lat->mode(i).cwiseAbs();
      const bool on_support = k[0] == 1 && k[1] == 1 && k[2] == 0;
      if (on_support) {
        CHECK(std::abs(h.coeffs()[i] - Complex(A * B, 0)) <= 1e-13);
      } else {
        CHECK(std::abs(h.coeffs()[i]) <= 1e-13);
      }
    }
  }

  const ScalarField zero(lat);
  CHECK(convolve_direct(zero, g).coeffs().isZero(0));
  CHECK(max_scale(convolve_fast(zero, g)) <= 1e-16);
}

TEST_CASE("direct convolution matches the membership-lookup oracle") {
  const LatticePtr lat = build_lattice(6);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const ScalarField f = random_scalar_field(lat, 0.5, 1.0, seed);
    const ScalarField g = random_scalar_field(lat, 0.9, 1.0, seed + 100);
    const ScalarField h = convolve_direct(f, g);
    const ScalarField ref = oracle::convolve(f, g);
    CHECK(max_coeff_diff(h, ref) <= 1e-13 * std::max(1.0, max_scale(ref)));
  }
}

TEST_CASE("fast convolution equals direct on 8^3") {
  const LatticePtr lat = build_lattice(8);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField f = random_scalar_field(lat, 0.4, 1.0, seed);
    const ScalarField g = random_scalar_field(lat, 0.7, 1.0, seed + 50);
    const ScalarField d = convolve_direct(f, g);
    const ScalarField q = convolve_fast(f, g);
    CHECK(max_coeff_diff(d, q) <= 1e-12 * std::max(1e-300, max_scale(d)));
  }
}

TEST_CASE("convolution is commutative and lattice-checked") {
  const LatticePtr lat = build_lattice(6);
  const ScalarField f = random_scalar_field(lat, 0.5, 1.0, 3);
  const ScalarField g = random_scalar_field(lat, 0.5, 1.0, 4);
  CHECK(max_coeff_diff(convolve_direct(f, g), convolve_direct(g, f)) <= 1e-14);

  const LatticePtr other = build_lattice(8);
  const ScalarField h(other);
  CHECK_THROWS_AS(convolve_direct(f, h), std::invalid_argument);
  CHECK_THROWS_AS(convolve_fast(f, h), std::invalid_argument);
}

TEST_CASE("bilinear term closed forms and identities") {
  const LatticePtr lat = build_lattice(8);

  SUBCASE("zero argument annihilates") {
    const SpectralVectorField u = random_divfree_field(lat, 0.6, 1.0, 5);
    const SpectralVectorField zero(lat);
    CHECK(bilinear_B(u, zero, ConvMethod::direct).coeffs().isZero(1e-300));
    CHECK(bilinear_B(zero, u, ConvMethod::direct).coeffs().isZero(1e-300));
  }

  SUBCASE("Taylor-Green support lands on the second shell") {
    SpectralVectorField u(lat);
    const Complex iu(0, 1);
    for (int s1 : {-1, 1})
      for (int s2 : {-1, 1})
        for (int s3 : {-1, 1}) {
          const Eigen::Index i = lat->index(Eigen::Vector3i(s1, s2, s3));
          u.coeffs()(0, i) = -iu * (s1 / 8.0);
          u.coeffs()(1, i) = iu * (s2 / 8.0);
        }
    REQUIRE(divergence_residual(u) <= 1e-15);

    const SpectralVectorField b = bilinear_B(u, u, ConvMethod::direct);
    double largest = 0;
    for (Eigen::Index i = 0; i < lat->size(); ++i) {
      const Eigen::Vector3i k = lat->mode(i);
      const double mag = b.coeffs().col(i).norm();
      largest = std::max(largest, mag);
      if (k.cwiseAbs().maxCoeff() > 2) {
        CHECK(mag <= 1e-15);  // convolution of first-shell modes
      }
    }
    CHECK(largest > 1e-3);  // nonlinearity is genuinely active

    // composition oracle: assemble div(u x u) from public scalar convolutions
    SpectralVectorField composed(lat);
    for (int c = 0; c < 3; ++c) {
      for (int r = 0; r < 3; ++r) {
        const ScalarField t = convolve_direct(component(u, r), component(u, c));
        for (Eigen::Index i = 0; i < lat->size(); ++i) {
          composed.coeffs()(c, i) += iu * double(lat->mode(i)[r]) * t.coeffs()[i];
        }
      }
    }
    composed = enforce_hermitian(leray_project(composed));
    CHECK((composed.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() <= 1e-13);
  }

  SUBCASE("divergence form equals advective form for solenoidal u") {
    const SpectralVectorField u = random_divfree_field(lat, 0.7, 1.0, 17);
    const SpectralVectorField v = random_divfree_field(lat, 0.5, 1.0, 18);
    const SpectralVectorField div_form = bilinear_B(u, v, ConvMethod::direct);

    // u.grad v, component c: sum_j u_j * (i m_j v_c), derivative inside
    SpectralVectorField adv(lat);
    const Complex iu(0, 1);
    for (int c = 0; c < 3; ++c) {
      for (int j = 0; j < 3; ++j) {
        ScalarField dv(lat);
        for (Eigen::Index i = 0; i < lat->size(); ++i) {
          dv.coeffs()[i] = iu * double(lat->mode(i)[j]) * v.coeffs()(c, i);
        }
        const ScalarField t = convolve_direct(component(u, j), dv);
        adv.coeffs().row(c) += t.coeffs().transpose();
      }
    }
    adv = enforce_hermitian(leray_project(adv));
    const double scale = std::max(1e-300, div_form.coeffs().cwiseAbs().maxCoeff());
    CHECK((adv.coeffs() - div_form.coeffs()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }

  SUBCASE("output is Hermitian and divergence-free") {
    const SpectralVectorField u = random_divfree_field(lat, 0.6, 1.0, 23);
    for (ConvMethod m : {ConvMethod::direct, ConvMethod::fast}) {
      const SpectralVectorField b = bilinear_B(u, u, m);
      CHECK(divergence_residual(b) <= 1e-12 * std::max(1.0, b.coeffs().cwiseAbs().maxCoeff()));
      for (Eigen::Index i = 0; i < lat->size(); ++i) {
        const Eigen::Index j = lat->conjugateIndex(i);
        CHECK(b.coeffs().col(j) == b.coeffs().col(i).conjugate());
      }
    }
  }
}

TEST_CASE("product inequality holds exactly on random pairs") {
  const LatticePtr lat = build_lattice(6);
  const GevreyParams p(-1, 1.0, 2.0);
  std::mt19937_64 rng(77);
  for (int s = 0; s < 100; ++s) {
    const ScalarField f = random_scalar_field(lat, 0.3 + detail::uniform01(rng()), 1.0, rng());
    const ScalarField g = random_scalar_field(lat, 0.3 + detail::uniform01(rng()), 1.0, rng());
    const ScalarField fg = convolve_direct(f, g);
    const double lhs = z_norm(fg, p.with_rho(0));
    const double rhs = z_norm(f, p) * z_norm(g, p.with_rho(1)) +
                       z_norm(f, p.with_rho(1)) * z_norm(g, p);
    if (rhs == 0) continue;
    CHECK(lhs <= rhs * (1 + 1e-10));
  }
}

TEST_CASE("tensor convolution is Hermitian entrywise") {
  const LatticePtr lat = build_lattice(6);
  const SpectralVectorField u = random_divfree_field(lat, 0.5, 1.0, 6);
  const SpectralVectorField v = random_divfree_field(lat, 0.7, 1.0, 7);
  for (ConvMethod m : {ConvMethod::direct, ConvMethod::fast}) {
    const TensorField t = tensor_convolution(u, v, m);
    double worst = 0;
    for (Eigen::Index i = 0; i < lat->size(); ++i) {
      const Eigen::Index j = lat->conjugateIndex(i);
      worst = std::max(worst,
                       (t.coeffs().col(j) - t.coeffs().col(i).conjugate()).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("divergence shrinks the tensor norm by one weight power") {
  const LatticePtr lat = build_lattice(6);
  const GevreyParams p(-1, 0.7, 2.0);
  for (std::uint64_t seed : {4u, 9u}) {
    const SpectralVectorField u = random_divfree_field(lat, 0.5, 1.0, seed);
    const SpectralVectorField v = random_divfree_field(lat, 0.8, 1.0, seed + 5);
    const TensorField t = tensor_convolution(u, v, ConvMethod::direct);
    const SpectralVectorField d = tensor_divergence(t);
    CHECK(z_norm(d, p) <= z_norm(t, p.with_rho(0)) * (1 + 1e-12));
  }
}

TEST_CASE("lemma 4 proof chain margin on random fields") {
  const LatticePtr lat = build_lattice(6);
  const double a = 1.0, sigma = 2.0;
  const double c_chain = 2.0 * lemma4_constant(a, sigma);
  const GevreyParams p(-1, a, sigma);
  const GevreyParams p_root(-1, a / std::sqrt(sigma), sigma);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SpectralVectorField u = random_divfree_field(lat, 0.6, 1.0, seed);
    const TensorField uu = tensor_convolution(u, u, ConvMethod::direct);
    const double lhs = z_norm(uu, p.with_rho(0));
    const double rhs = c_chain * z_norm(u, p_root) *
                       std::sqrt(z_norm(u, p)) * std::sqrt(z_norm(laplacian(u), p));
    CHECK(lhs <= rhs * (1 + 1e-10));
  }
}
