#pragma once

#include "gns/evolve.hpp"
#include "gns/field.hpp"

#include <iosfwd>
#include <string>

namespace gns {

/// Locale-independent shortest round-trip formatting of a double.
std::string format_double(double v);

/// GNSF1 snapshot: header `GNSF1 M=<int> L=<17-sig-digit real>`, then one line
/// `k1 k2 k3 comp re im` per component of each stored mode. Only the canonical
/// representative of each conjugate pair is stored; the reader mirrors the
/// conjugates. Values round-trip exactly.
void write_gnsf(const SpectralVectorField& f, std::ostream& out);
void write_gnsf_file(const SpectralVectorField& f, const std::string& path);
SpectralVectorField read_gnsf(std::istream& in);
SpectralVectorField read_gnsf_file(const std::string& path);
std::string to_gnsf_string(const SpectralVectorField& f);

/// One row per node, columns exactly
/// t,z_m1,z_0,z_p1,x_m1,x_0,x_1,z_m1_scale_<0..n_max>,dissipation,thm6_lhs,
/// thm6_ok,gronwall_rhs,decay_bound_ok; booleans as 0/1.
void write_timeseries_csv(const TimeSeries& series, std::ostream& out);
void write_timeseries_csv_file(const TimeSeries& series, const std::string& path);

}  // namespace gns
