#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gns/semigroup.hpp"
#include "gns/verify.hpp"

#include <cmath>

using namespace gns;

namespace {
const GevreyParams kParams(-1, 1.0, 2.0);
}

TEST_CASE("lemma 1 margins on random pairs") {
  const LatticePtr lat = build_lattice(6);
  const MarginReport rep = check_lemma1(200, lat, 7, kParams);
  CHECK(rep.pass);
  CHECK(rep.samples == 200);
  CHECK(rep.worst_ratio > 0);
  CHECK(rep.worst_ratio <= 1.0 + rep.slack);
  CHECK(rep.worst_fields.find("GNSF1") != std::string::npos);

  SUBCASE("bit-exact reproducibility for a pinned seed") {
    const MarginReport again = check_lemma1(200, lat, 7, kParams);
    CHECK(again.worst_ratio == rep.worst_ratio);
    CHECK(again.worst_sample == rep.worst_sample);
  }

  SUBCASE("worst ratio is attained by the serialized sample") {
    CHECK(rep.worst_sample >= 0);
  }
}

TEST_CASE("single-mode closed form stays below the product bound") {
  // f = g supported on one |k| = 1 pair: every norm in the ratio is explicit
  const LatticePtr lat = build_lattice(6);
  ScalarField f(lat);
  const Eigen::Index i = lat->index(Eigen::Vector3i(1, 0, 0));
  f.coeffs()[i] = 0.5;
  f.coeffs()[lat->conjugateIndex(i)] = 0.5;
  const ScalarField ff = convolve_direct(f, f);
  const double lhs = z_norm(ff, kParams.with_rho(0));
  const double rhs = 2.0 * z_norm(f, kParams) * z_norm(f, kParams.with_rho(1));
  CHECK(rhs > 0);
  CHECK(lhs / rhs <= 1.0);
}

TEST_CASE("lemma 2/3 margins on a solver trajectory") {
  const LatticePtr lat = build_lattice(6);
  SpectralVectorField u0 = random_divfree_field(lat, 0.7, 1.0, 21);
  u0 *= 0.05 / z_norm(u0, kParams);
  const ParamSelection sel = choose_parameters(u0, 1.0, kParams, 0.01);
  REQUIRE(sel.feasibility.feasible);
  const PicardResult res = picard_solve(u0, 1.0, kParams, sel.params);
  REQUIRE(res.converged);

  auto [l2, l3] = check_lemma23(res.u, 1.0, kParams);
  CHECK(l2.pass);
  CHECK(l3.pass);
  CHECK(l2.worst_ratio <= 1.05);
  CHECK(l3.worst_ratio <= 1.05);

  SUBCASE("margins also hold on a time-marcher trajectory") {
    SimConfig c;
    c.M = 6;
    c.a = 1.0;
    c.sigma = 2.0;
    c.dt = 0.005;
    c.t_end = 0.5;
    c.amplitude = 0.6;
    c.seed = 12;
    auto [m2, m3] = check_lemma23(simulate_trajectory(c), c.nu, kParams);
    CHECK(m2.pass);
    CHECK(m3.pass);
  }

  SUBCASE("pure heat flow integrates to zero forcing") {
    Trajectory heat;
    heat.dt = 0.01;
    for (int j = 0; j < 16; ++j) {
      heat.nodes.push_back(heat_apply(0.0 * u0, 0.01 * j, 1.0));
    }
    auto [h2, h3] = check_lemma23(heat, 1.0, kParams);
    CHECK(h2.pass);
    CHECK(h3.pass);
    CHECK(h2.skipped == 1);  // 0/0 convention: skipped and counted
  }
}

TEST_CASE("lemma 4 margins") {
  const LatticePtr lat = build_lattice(6);
  for (double sigma : {2.0, 4.0}) {
    for (double a : {0.5, 1.0}) {
      const MarginReport rep = check_lemma4(100, lat, a, sigma, 31);
      CHECK(rep.pass);
      CHECK(rep.worst_ratio <= 1.0 + rep.slack);
      CHECK(rep.worst_ratio > 0);
    }
  }
}

TEST_CASE("pinned seed list clears every randomized check") {
  const LatticePtr lat = build_lattice(6);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CHECK(check_lemma1(50, lat, seed, kParams).pass);
    CHECK(check_lemma4(50, lat, 1.0, 2.0, seed).pass);
  }
}

TEST_CASE("cross validation of the two solution paths") {
  const LatticePtr lat = build_lattice(6);
  SimConfig config;
  config.M = 6;
  config.nu = 1.0;
  config.a = 1.0;
  config.sigma = 2.0;
  config.dt = 0.01;

  SUBCASE("zero data") {
    const SpectralVectorField zero(lat);
    CHECK(cross_validate(zero, config) == 0.0);
  }

  SUBCASE("linearized paths coincide to rounding") {
    config.linearized = true;
    SpectralVectorField u0 = random_divfree_field(lat, 0.7, 1.0, 3);
    u0 *= 0.05 / z_norm(u0, kParams);
    CHECK(cross_validate(u0, config) <= 1e-12);
  }

  SUBCASE("small Taylor-Green data meets the tolerance and shrinks with dt") {
    SimConfig c = config;
    c.initial = InitialData::taylor_green;
    c.amplitude = 0.05;
    const SpectralVectorField u0 = initial_field(c);
    const double z0 = z_norm(u0, kParams);

    double prev = -1;
    for (double dt : {0.02, 0.01, 0.005}) {
      c.dt = dt;
      const double diff = cross_validate(u0, c);
      CHECK(diff <= std::max(1e-6, 50 * dt * dt) * z0);
      if (prev > 0) CHECK(diff <= prev);  // refinement never hurts
      prev = diff;
    }
  }

  SUBCASE("infeasible data is rejected") {
    SpectralVectorField u0 = random_divfree_field(lat, 0.7, 1.0, 4);
    u0 *= 0.9 / z_norm(u0, kParams);
    CHECK_THROWS_AS(cross_validate(u0, config), std::invalid_argument);
  }
}
