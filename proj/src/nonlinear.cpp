#include "gns/nonlinear.hpp"

#include <unsupported/Eigen/FFT>

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace gns {

namespace {

void require_same_lattice(const LatticePtr& a, const LatticePtr& b) {
  if (!a || !b || !same_lattice(*a, *b)) {
    throw std::invalid_argument("operands live on different lattices");
  }
}

// ---------------------------------------------------------------------------
// Zero-padded transform engine. Padding factor 2: inputs live in |k_i| <= h
// with h = M/2 - 1, the linear convolution reaches 2h = M - 2 < P/2, so the
// circular product on the P^3 grid has no wrap-around into any retained mode.
// ---------------------------------------------------------------------------

struct Workspace {
  int P = 0;
  Eigen::FFT<double> fft;
  std::vector<Complex> line_in, line_out;
  std::vector<std::vector<Complex>> cubes;

  void init(int pad) {
    P = pad;
    line_in.resize(P);
    line_out.resize(P);
    cubes.resize(8);  // fixed slot table so references stay valid
  }

  std::vector<Complex>& cube(std::size_t slot) {
    cubes.at(slot).assign(static_cast<std::size_t>(P) * P * P, Complex(0, 0));
    return cubes[slot];
  }

  void transform_lines(std::vector<Complex>& c, std::size_t base_count,
                       std::size_t base_stride_a, std::size_t count_a,
                       std::size_t base_stride_b, std::size_t line_stride, bool forward) {
    for (std::size_t a = 0; a < base_count; ++a) {
      for (std::size_t b = 0; b < count_a; ++b) {
        Complex* p = c.data() + a * base_stride_a + b * base_stride_b;
        for (int i = 0; i < P; ++i) line_in[static_cast<std::size_t>(i)] = p[i * line_stride];
        if (forward) {
          fft.fwd(line_out.data(), line_in.data(), P);
        } else {
          fft.inv(line_out.data(), line_in.data(), P);
        }
        for (int i = 0; i < P; ++i) p[i * line_stride] = line_out[static_cast<std::size_t>(i)];
      }
    }
  }

  // 1D passes along the three axes; Eigen's inv carries the 1/P scaling.
  void fft3(std::vector<Complex>& c, bool forward) {
    const auto sp = static_cast<std::size_t>(P);
    transform_lines(c, sp, sp * sp, sp, sp, 1, forward);           // axis 2 (contiguous)
    transform_lines(c, sp, sp * sp, sp, 1, sp, forward);           // axis 1
    transform_lines(c, sp, sp, sp, 1, sp * sp, forward);           // axis 0
  }
};

Workspace& workspace_for(int pad) {
  thread_local std::map<int, std::unique_ptr<Workspace>> cache;
  auto& slot = cache[pad];
  if (!slot) {
    slot = std::make_unique<Workspace>();
    slot->init(pad);
  }
  return *slot;
}

std::size_t wrap_cell(const Eigen::Vector3i& k, int P) {
  const auto w = [P](int v) { return static_cast<std::size_t>(v >= 0 ? v : v + P); };
  return (w(k[0]) * P + w(k[1])) * P + w(k[2]);
}

void scatter(const Eigen::VectorXcd& coeffs, const FrequencyLattice& lat,
             std::vector<Complex>& cube, int P) {
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    cube[wrap_cell(lat.mode(i), P)] = coeffs[i];
  }
}

void gather(const std::vector<Complex>& cube, const FrequencyLattice& lat, int P, double scale,
            Eigen::VectorXcd& out) {
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    out[i] = scale * cube[wrap_cell(lat.mode(i), P)];
  }
}

// ---------------------------------------------------------------------------
// Dense-cube direct convolution, side s = M - 1, origin cell left at zero so
// absent zero modes drop out of the sum without branching.
// ---------------------------------------------------------------------------

struct DenseCube {
  int h = 0, s = 0;
  std::vector<Complex> v;

  explicit DenseCube(const FrequencyLattice& lat)
      : h(lat.halfExtent()), s(lat.modesPerAxis() - 1),
        v(static_cast<std::size_t>(s) * s * s, Complex(0, 0)) {}

  Complex& at(int k1, int k2, int k3) {
    return v[(static_cast<std::size_t>(k1 + h) * s + (k2 + h)) * s + (k3 + h)];
  }
  const Complex& at(int k1, int k2, int k3) const {
    return v[(static_cast<std::size_t>(k1 + h) * s + (k2 + h)) * s + (k3 + h)];
  }
};

}  // namespace

ScalarField convolve_direct(const ScalarField& f, const ScalarField& g) {
  require_same_lattice(f.lattice(), g.lattice());
  const FrequencyLattice& lat = *f.lattice();
  const int h = lat.halfExtent();

  DenseCube F(lat), G(lat);
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const Eigen::Vector3i k = lat.mode(i);
    F.at(k[0], k[1], k[2]) = f.coeffs()[i];
    G.at(k[0], k[1], k[2]) = g.coeffs()[i];
  }

  ScalarField out(f.lattice());
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const Eigen::Vector3i k = lat.mode(i);
    Complex acc(0, 0);
    const int lo1 = std::max(-h, k[0] - h), hi1 = std::min(h, k[0] + h);
    const int lo2 = std::max(-h, k[1] - h), hi2 = std::min(h, k[1] + h);
    const int lo3 = std::max(-h, k[2] - h), hi3 = std::min(h, k[2] + h);
    for (int m1 = lo1; m1 <= hi1; ++m1) {
      for (int m2 = lo2; m2 <= hi2; ++m2) {
        for (int m3 = lo3; m3 <= hi3; ++m3) {
          acc += F.at(k[0] - m1, k[1] - m2, k[2] - m3) * G.at(m1, m2, m3);
        }
      }
    }
    out.coeffs()[i] = acc;
  }
  return out;
}

ScalarField convolve_fast(const ScalarField& f, const ScalarField& g) {
  require_same_lattice(f.lattice(), g.lattice());
  const FrequencyLattice& lat = *f.lattice();
  const int P = 2 * lat.modesPerAxis();
  Workspace& ws = workspace_for(P);

  auto& a = ws.cube(0);
  auto& b = ws.cube(1);
  scatter(f.coeffs(), lat, a, P);
  scatter(g.coeffs(), lat, b, P);
  ws.fft3(a, false);
  ws.fft3(b, false);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  ws.fft3(a, true);

  ScalarField out(f.lattice());
  gather(a, lat, P, static_cast<double>(P) * P * P, out.coeffs());
  return out;
}

ScalarField convolve(const ScalarField& f, const ScalarField& g, ConvMethod method) {
  return method == ConvMethod::direct ? convolve_direct(f, g) : convolve_fast(f, g);
}

TensorField tensor_convolution(const SpectralVectorField& u, const SpectralVectorField& v,
                               ConvMethod method) {
  require_same_lattice(u.lattice(), v.lattice());
  const FrequencyLattice& lat = *u.lattice();
  const bool shared = &u == &v;
  TensorField t(u.lattice());

  if (method == ConvMethod::direct) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (shared && r > c) {
          t.coeffs().row(3 * r + c) = t.coeffs().row(3 * c + r);
          continue;
        }
        const ScalarField h = convolve_direct(component(u, r), component(v, c));
        t.coeffs().row(3 * r + c) = h.coeffs().transpose();
      }
    }
    return t;
  }

  const int P = 2 * lat.modesPerAxis();
  Workspace& ws = workspace_for(P);
  // physical-space copies of all components, then one forward pass per entry
  for (int c = 0; c < 3; ++c) {
    scatter(u.coeffs().row(c).transpose(), lat, ws.cube(static_cast<std::size_t>(c)), P);
    ws.fft3(ws.cubes[static_cast<std::size_t>(c)], false);
    if (!shared) {
      scatter(v.coeffs().row(c).transpose(), lat, ws.cube(static_cast<std::size_t>(3 + c)), P);
      ws.fft3(ws.cubes[static_cast<std::size_t>(3 + c)], false);
    }
  }
  const double scale = static_cast<double>(P) * P * P;
  Eigen::VectorXcd entry(lat.size());
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (shared && r > c) {
        t.coeffs().row(3 * r + c) = t.coeffs().row(3 * c + r);
        continue;
      }
      auto& prod = ws.cube(6);
      const auto& ur = ws.cubes[static_cast<std::size_t>(r)];
      const auto& vc = ws.cubes[static_cast<std::size_t>(shared ? c : 3 + c)];
      for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = ur[i] * vc[i];
      ws.fft3(prod, true);
      gather(prod, lat, P, scale, entry);
      t.coeffs().row(3 * r + c) = entry.transpose();
    }
  }
  return t;
}

SpectralVectorField tensor_divergence(const TensorField& t) {
  const FrequencyLattice& lat = *t.lattice();
  SpectralVectorField out(t.lattice());
  const Complex iu(0, 1);
  for (Eigen::Index m = 0; m < lat.size(); ++m) {
    const Eigen::Vector3i k = lat.mode(m);
    for (int c = 0; c < 3; ++c) {
      out.coeffs()(c, m) = iu * (double(k[0]) * t.entry(0, c, m) + double(k[1]) * t.entry(1, c, m) +
                                 double(k[2]) * t.entry(2, c, m));
    }
  }
  return out;
}

SpectralVectorField divergence_of_product(const SpectralVectorField& u,
                                          const SpectralVectorField& v, ConvMethod method) {
  return tensor_divergence(tensor_convolution(u, v, method));
}

SpectralVectorField bilinear_B(const SpectralVectorField& u, const SpectralVectorField& v,
                               ConvMethod method) {
  return enforce_hermitian(leray_project(divergence_of_product(u, v, method)));
}

double z_norm(const TensorField& t, const GevreyParams& p) {
  const Eigen::VectorXd w = gevrey_weights(*t.lattice(), p);
  Eigen::VectorXd terms(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    terms[i] = w[i] * t.coeffs().col(i).norm();
  }
  return detail::neumaier_sum(terms);
}

}  // namespace gns
