#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace gns {

/// Frequency lattice K = { k in Z^3 : |k_i| <= M/2 - 1, k != 0 } of the
/// 2*pi-periodic box. The Nyquist planes |k_i| = M/2 are excluded so the
/// conjugate map k -> -k is a total involution on K, and the zero mode is
/// excluded so every retained frequency has |k| >= 1.
class FrequencyLattice {
public:
  /// M must be even and in [4, 128].
  explicit FrequencyLattice(int modes_per_axis);

  int modesPerAxis() const { return m_; }
  int halfExtent() const { return half_; }
  double period() const;  // box period L, fixed to 2*pi

  /// Number of retained modes, (M-1)^3 - 1.
  Eigen::Index size() const { return static_cast<Eigen::Index>(modes_.cols()); }

  /// Mode of the canonical enumeration (lexicographic in (k1,k2,k3)).
  Eigen::Vector3i mode(Eigen::Index i) const { return modes_.col(i); }
  const Eigen::Matrix<int, 3, Eigen::Dynamic>& modes() const { return modes_; }

  /// Enumeration index of k, or -1 when k is not in K.
  Eigen::Index index(const Eigen::Vector3i& k) const;
  bool contains(const Eigen::Vector3i& k) const { return index(k) >= 0; }

  /// Index of -k. Total on K by construction.
  Eigen::Index conjugateIndex(Eigen::Index i) const { return conj_[i]; }

  /// True for the stored representative of each conjugate pair
  /// (first nonzero component positive).
  bool isCanonical(Eigen::Index i) const;

  const Eigen::VectorXd& modulus() const { return modulus_; }
  const Eigen::VectorXd& modulusSquared() const { return modulus_sq_; }

private:
  int m_ = 0;
  int half_ = 0;
  Eigen::Matrix<int, 3, Eigen::Dynamic> modes_;
  std::vector<Eigen::Index> cell_to_index_;  // dense (M-1)^3 lookup, -1 at k=0
  std::vector<Eigen::Index> conj_;
  Eigen::VectorXd modulus_;
  Eigen::VectorXd modulus_sq_;
};

using LatticePtr = std::shared_ptr<const FrequencyLattice>;

/// Builds the lattice; rejects odd M and M outside [4, 128].
LatticePtr build_lattice(int modes_per_axis);

/// True when both fields/operands live on the same mode set.
bool same_lattice(const FrequencyLattice& a, const FrequencyLattice& b);

}  // namespace gns
