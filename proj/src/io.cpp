#include "gns/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace gns {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_double17(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

const char* skip_space(const char* p, const char* end) {
  while (p != end && (*p == ' ' || *p == '\t')) ++p;
  return p;
}

template <typename T>
const char* parse_token(const char* p, const char* end, T& out, const char* what) {
  p = skip_space(p, end);
  const auto res = std::from_chars(p, end, out);
  if (res.ec != std::errc()) {
    throw std::runtime_error(std::string("GNSF1: malformed ") + what);
  }
  return res.ptr;
}

}  // namespace

void write_gnsf(const SpectralVectorField& f, std::ostream& out) {
  const FrequencyLattice& lat = *f.lattice();
  out << "GNSF1 M=" << lat.modesPerAxis() << " L=" << format_double17(lat.period()) << "\n";
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    if (!lat.isCanonical(i)) continue;
    const Eigen::Vector3i k = lat.mode(i);
    for (int c = 0; c < 3; ++c) {
      const Complex v = f.coeffs()(c, i);
      out << k[0] << ' ' << k[1] << ' ' << k[2] << ' ' << c << ' ' << format_double(v.real())
          << ' ' << format_double(v.imag()) << "\n";
    }
  }
}

std::string to_gnsf_string(const SpectralVectorField& f) {
  std::ostringstream s;
  write_gnsf(f, s);
  return s.str();
}

void write_gnsf_file(const SpectralVectorField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_gnsf(f, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

SpectralVectorField read_gnsf(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("GNSF1: empty stream");
  int M = 0;
  double L = 0;
  {
    const char* p = line.data();
    const char* end = line.data() + line.size();
    const std::string magic = "GNSF1 M=";
    if (line.rfind(magic, 0) != 0) throw std::runtime_error("GNSF1: bad header magic");
    p += magic.size();
    p = parse_token(p, end, M, "M");
    p = skip_space(p, end);
    if (end - p < 2 || p[0] != 'L' || p[1] != '=') {
      throw std::runtime_error("GNSF1: missing L field");
    }
    p += 2;
    parse_token(p, end, L, "L");
  }
  if (std::abs(L - 2.0 * std::numbers::pi) > 1e-14 * 2.0 * std::numbers::pi) {
    throw std::runtime_error("GNSF1: unsupported period, expected 2*pi");
  }

  const LatticePtr lattice = build_lattice(M);
  SpectralVectorField f(lattice);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    Eigen::Vector3i k;
    int comp = 0;
    double re = 0, im = 0;
    p = parse_token(p, end, k[0], "k1");
    p = parse_token(p, end, k[1], "k2");
    p = parse_token(p, end, k[2], "k3");
    p = parse_token(p, end, comp, "comp");
    p = parse_token(p, end, re, "re");
    parse_token(p, end, im, "im");
    const Eigen::Index i = lattice->index(k);
    if (i < 0) throw std::runtime_error("GNSF1: mode outside the lattice");
    if (!lattice->isCanonical(i)) {
      throw std::runtime_error("GNSF1: only canonical pair representatives may be stored");
    }
    if (comp < 0 || comp > 2) throw std::runtime_error("GNSF1: component out of range");
    f.coeffs()(comp, i) = Complex(re, im);
    f.coeffs()(comp, lattice->conjugateIndex(i)) = Complex(re, -im);
  }
  return f;
}

SpectralVectorField read_gnsf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_gnsf(in);
}

void write_timeseries_csv(const TimeSeries& series, std::ostream& out) {
  const int n_max = series.config.n_max;
  out << "t,z_m1,z_0,z_p1,x_m1,x_0,x_1";
  for (int n = 0; n <= n_max; ++n) out << ",z_m1_scale_" << n;
  out << ",dissipation,thm6_lhs,thm6_ok,gronwall_rhs,decay_bound_ok\n";
  for (const auto& row : series.rows) {
    out << format_double(row.t) << ',' << format_double(row.z_m1) << ','
        << format_double(row.z_0) << ',' << format_double(row.z_p1) << ','
        << format_double(row.x_m1) << ',' << format_double(row.x_0) << ','
        << format_double(row.x_1);
    for (double v : row.z_m1_scale) out << ',' << format_double(v);
    out << ',' << format_double(row.dissipation) << ',' << format_double(row.thm6_lhs) << ','
        << (row.thm6_ok ? '1' : '0') << ',' << format_double(row.gronwall_rhs) << ','
        << (row.decay_bound_ok ? '1' : '0') << "\n";
  }
}

void write_timeseries_csv_file(const TimeSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_timeseries_csv(series, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace gns
