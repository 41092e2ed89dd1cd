#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gns/field.hpp"
#include "gns/norms.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace gns;

TEST_CASE("gevrey weight closed forms") {
  CHECK(gevrey_weight({1, 0, 0}, GevreyParams(-1, 1.0, 2.0)) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(gevrey_weight({1, 0, 0}, GevreyParams(-1, 0.0, 2.0)) == 1.0);
  CHECK(gevrey_weight({1, 0, 0}, GevreyParams(0, 0.0, 3.0)) == 1.0);
  CHECK(gevrey_weight({1, 0, 0}, GevreyParams(1, 0.0, 1.5)) == 1.0);
  // 2 e^{sqrt 2} = 8.2265007575658550...
  CHECK(gevrey_weight({2, 0, 0}, GevreyParams(1, 1.0, 2.0)) ==
        doctest::Approx(8.226500757565855).epsilon(1e-14));
  CHECK_THROWS_AS(gevrey_weight({0, 0, 0}, GevreyParams(0, 1.0, 2.0)), std::invalid_argument);
}

TEST_CASE("gevrey params validation") {
  CHECK_THROWS_AS(GevreyParams(2, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(GevreyParams(0, -0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(GevreyParams(0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("z_norm closed forms and oracle agreement") {
  const LatticePtr lat = build_lattice(6);

  SpectralVectorField zero(lat);
  CHECK(z_norm(zero, GevreyParams(-1, 1.0, 2.0)) == 0.0);

  SpectralVectorField pair(lat);
  const Eigen::Index i = lat->index(Eigen::Vector3i(0, 1, 0));
  const double A = 0.37;
  pair.coeffs()(0, i) = Complex(A, 0);
  pair.coeffs()(0, lat->conjugateIndex(i)) = Complex(A, 0);
  CHECK(z_norm(pair, GevreyParams(-1, 1.0, 2.0)) ==
        doctest::Approx(2.0 * A * std::exp(1.0)).epsilon(1e-14));

  SUBCASE("random fields match the sorted long-double oracle") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      const SpectralVectorField f = random_divfree_field(lat, 0.4, 1.0, seed);
      for (int rho : {-1, 0, 1}) {
        const GevreyParams p(rho, 0.8, 3.0);
        CHECK(oracle::rel_diff(z_norm(f, p), oracle::z_norm(f, p)) <= 1e-13);
      }
    }
  }
}

TEST_CASE("norm family invariants") {
  const LatticePtr lat = build_lattice(6);
  const SpectralVectorField f = random_divfree_field(lat, 0.5, 1.0, 21);
  const GevreyParams base(-1, 1.0, 2.0);

  SUBCASE("absolute homogeneity") {
    for (double c : {-3.0, 0.25, 17.5}) {
      CHECK(oracle::rel_diff(z_norm(c * f, base), std::abs(c) * z_norm(f, base)) <= 1e-13);
    }
  }

  SUBCASE("triangle inequality") {
    const SpectralVectorField g = random_divfree_field(lat, 0.7, 1.0, 22);
    CHECK(z_norm(f + g, base) <= (z_norm(f, base) + z_norm(g, base)) * (1 + 1e-14));
  }

  SUBCASE("monotone in a; embeds into the unweighted family") {
    const double za0 = z_norm(f, base.with_a(0.0));
    const double za1 = z_norm(f, base.with_a(0.5));
    const double za2 = z_norm(f, base.with_a(1.0));
    CHECK(za0 <= za1);
    CHECK(za1 <= za2);
  }

  SUBCASE("laplacian multiplier identity") {
    CHECK(oracle::rel_diff(z_norm(laplacian(f), base), z_norm(f, base.with_rho(1))) <= 1e-14);
  }

  SUBCASE("interpolation Z0 <= sqrt(Zm1 Zp1)") {
    for (std::uint64_t seed : {31u, 32u, 33u}) {
      const SpectralVectorField g = random_divfree_field(lat, 0.6, 1.0, seed);
      const double mid = z_norm(g, base.with_rho(0));
      const double lo = z_norm(g, base.with_rho(-1));
      const double hi = z_norm(g, base.with_rho(1));
      CHECK(mid <= std::sqrt(lo * hi) * (1 + 1e-13));
    }
  }
}

TEST_CASE("lemma4 constant") {
  // b = 1/4, x* = 32^4, c = x*^2 e^{-8} = 3.68845060063105e8
  const double c = lemma4_constant(1.0, 4.0);
  CHECK(c == doctest::Approx(3.688450600631054e8).epsilon(1e-12));
  CHECK(oracle::rel_diff(c, oracle::lemma4_constant(1.0, 4.0)) <= 1e-9);
  CHECK(oracle::rel_diff(lemma4_constant(0.5, 2.0), oracle::lemma4_constant(0.5, 2.0)) <= 1e-9);

  CHECK_THROWS_AS(lemma4_constant(0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(lemma4_constant(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(lemma4_constant(1.0, 1.0), std::invalid_argument);

  SUBCASE("dominates sampled values of x^2 e^{-b x^{1/sigma}}") {
    std::mt19937_64 rng(5);
    for (double a : {0.5, 1.0, 2.0}) {
      for (double sigma : {1.5, 2.0, 4.0}) {
        const double b = a / std::sqrt(sigma) - a / sigma;
        const double cs = lemma4_constant(a, sigma);
        for (int i = 0; i < 20000; ++i) {
          const double x = std::exp(40.0 * detail::uniform01(rng()) - 5.0);
          CHECK(x * x * std::exp(-b * std::pow(x, 1.0 / sigma)) <= cs * (1 + 1e-9));
        }
        for (double x : {1.0, 10.0, 1e3, 1e6}) {
          CHECK(x * x * std::exp(-b * std::pow(x, 1.0 / sigma)) <= cs * (1 + 1e-9));
        }
      }
    }
  }
}
