#pragma once

#include "gns/evolve.hpp"
#include "gns/fixedpoint.hpp"
#include "gns/norms.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace gns {

/// Outcome of a randomized inequality check. The primitive output is the
/// worst lhs/rhs ratio, not a boolean: margins expose tightness and
/// regressions. 0/0 samples are skipped and counted.
struct MarginReport {
  std::string inequality;
  int samples = 0;
  int skipped = 0;
  double slack = 0;          // pass iff worst_ratio <= 1 + slack
  double worst_ratio = 0;
  long worst_sample = -1;
  std::uint64_t seed = 0;
  bool pass = true;
  std::string worst_fields;  // GNSF1 serialization of the extremal sample

  nlohmann::json to_json() const;
};

/// |f g|_{Z^0} <= |f|_{Z^{-1}} |g|_{Z^1} + |f|_{Z^1} |g|_{Z^{-1}} on random
/// Hermitian scalar pairs; an exact lattice inequality, slack 1e-10 for
/// rounding.
MarginReport check_lemma1(int samples, const LatticePtr& lattice, std::uint64_t seed,
                          const GevreyParams& p);

/// Duhamel bounds along a trajectory, 5% quadrature slack: the Z^{-1} norm of
/// the integral (first report) and its time-integrated Z^1 norm (second) both
/// against 2 sup_t Z^{-1}(u) * L^1_t Z^1(u).
std::pair<MarginReport, MarginReport> check_lemma23(const Trajectory& u, double nu,
                                                    const GevreyParams& p);

/// |u (x) u|_{Z^0_{a,sigma}} against the constant chain
/// 2 c_{a,sigma} |u|_{Z^{-1}_{a/sqrt(sigma)}} |u|^{1/2}_{Z^{-1}} |Lap u|^{1/2}_{Z^{-1}}
/// on random Hermitian fields, slack 1e-10.
MarginReport check_lemma4(int samples, const LatticePtr& lattice, double a, double sigma,
                          std::uint64_t seed);

/// Runs the fixed-point construction and the time-marcher on [0, T] with the
/// horizon from choose_parameters and returns the sup-node Z^{-1} difference.
/// Throws when the Picard constraints are infeasible for u0.
double cross_validate(const SpectralVectorField& u0, const SimConfig& config);

}  // namespace gns
