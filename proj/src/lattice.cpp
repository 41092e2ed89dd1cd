#include "gns/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gns {

FrequencyLattice::FrequencyLattice(int modes_per_axis) : m_(modes_per_axis) {
  if (m_ % 2 != 0) {
    throw std::invalid_argument("modes per axis must be even, got " + std::to_string(m_));
  }
  if (m_ < 4 || m_ > 128) {
    throw std::invalid_argument("modes per axis must lie in [4, 128], got " +
                                std::to_string(m_));
  }
  half_ = m_ / 2 - 1;
  const int side = m_ - 1;
  const Eigen::Index count = static_cast<Eigen::Index>(side) * side * side - 1;

  modes_.resize(3, count);
  cell_to_index_.assign(static_cast<std::size_t>(side) * side * side, -1);
  conj_.resize(count);
  modulus_.resize(count);
  modulus_sq_.resize(count);

  Eigen::Index idx = 0;
  for (int k1 = -half_; k1 <= half_; ++k1) {
    for (int k2 = -half_; k2 <= half_; ++k2) {
      for (int k3 = -half_; k3 <= half_; ++k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) continue;
        modes_.col(idx) << k1, k2, k3;
        const std::size_t cell =
            (static_cast<std::size_t>(k1 + half_) * side + (k2 + half_)) * side + (k3 + half_);
        cell_to_index_[cell] = idx;
        const double sq = double(k1) * k1 + double(k2) * k2 + double(k3) * k3;
        modulus_sq_[idx] = sq;
        modulus_[idx] = std::sqrt(sq);
        ++idx;
      }
    }
  }
  for (Eigen::Index i = 0; i < count; ++i) {
    conj_[i] = index(-mode(i));
  }
}

double FrequencyLattice::period() const { return 2.0 * std::numbers::pi; }

Eigen::Index FrequencyLattice::index(const Eigen::Vector3i& k) const {
  for (int c = 0; c < 3; ++c) {
    if (k[c] < -half_ || k[c] > half_) return -1;
  }
  const int side = m_ - 1;
  const std::size_t cell =
      (static_cast<std::size_t>(k[0] + half_) * side + (k[1] + half_)) * side + (k[2] + half_);
  return cell_to_index_[cell];
}

bool FrequencyLattice::isCanonical(Eigen::Index i) const {
  const Eigen::Vector3i k = mode(i);
  if (k[0] != 0) return k[0] > 0;
  if (k[1] != 0) return k[1] > 0;
  return k[2] > 0;
}

LatticePtr build_lattice(int modes_per_axis) {
  return std::make_shared<const FrequencyLattice>(modes_per_axis);
}

bool same_lattice(const FrequencyLattice& a, const FrequencyLattice& b) {
  return &a == &b || a.modesPerAxis() == b.modesPerAxis();
}

}  // namespace gns
