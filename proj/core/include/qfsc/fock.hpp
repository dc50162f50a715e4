#ifndef QFSC_FOCK_HPP
#define QFSC_FOCK_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qfsc/linalg.hpp"

namespace qfsc {

/// Dense operator on the truncated Fock space. Conjugate-linear operators
/// act on coefficient vectors as v |-> m * conj(v); composition and adjoint
/// follow the same kernel algebra as ConjLinearMap.
struct FockOperator {
  Mat m;
  bool conj_linear = false;

  Vec apply(const Vec& v) const { return conj_linear ? Mat(m) * v.conjugate() : m * v; }

  FockOperator compose(const FockOperator& o) const {
    FockOperator out;
    out.conj_linear = conj_linear != o.conj_linear;
    out.m = conj_linear ? Mat(m * o.m.conjugate()) : Mat(m * o.m);
    return out;
  }

  FockOperator adjointOp() const {
    FockOperator out;
    out.conj_linear = conj_linear;
    out.m = conj_linear ? Mat(m.transpose()) : Mat(m.adjoint());
    return out;
  }
};

/// Symmetric Fock space over C^modes with total particle number <= cutoff,
/// in the graded lexicographic occupation basis (vacuum first).
class FockSpace {
 public:
  using Occupation = std::vector<std::uint8_t>;

  FockSpace(int modes, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis_.size()); }

  const std::vector<Occupation>& basis() const { return basis_; }
  const Occupation& occupationAt(Eigen::Index i) const { return basis_[i]; }
  Eigen::Index indexOf(const Occupation& occ) const;
  int totalParticles(Eigen::Index i) const { return totals_[i]; }

  /// Index after adding one particle in `mode`; -1 beyond the cutoff.
  Eigen::Index raised(Eigen::Index i, int mode) const { return raise_[i * modes_ + mode]; }
  /// Index after removing one particle in `mode`; -1 on empty occupation.
  Eigen::Index lowered(Eigen::Index i, int mode) const { return lower_[i * modes_ + mode]; }

  Vec vacuum() const;

  /// Truncated exponential vector: coefficient prod u^n / sqrt(n!).
  Vec expVector(const Vec& u) const;
  /// phi(u) = exp(-|u|^2/2) eps(u).
  Vec normalizedExpVector(const Vec& u) const;

  /// Creation a+(u), linear in u; the result is compressed to the cutoff.
  Vec applyCreation(const Vec& u, const Vec& v) const;
  /// Annihilation a(u), conjugate-linear in u; a(u) eps(v) = <u,v> eps(v).
  Vec applyAnnihilation(const Vec& u, const Vec& v) const;
  Vec applyCreationMode(int mode, const Vec& v) const;
  Vec applyAnnihilationMode(int mode, const Vec& v) const;
  /// (a+(u) - a(u)) v, the Weyl generator action.
  Vec applyWeylGenerator(const Vec& u, const Vec& v) const;

  Mat creationMatrix(const Vec& u) const;
  Mat annihilationMatrix(const Vec& u) const;
  Mat numberMatrix() const;

  /// exp(a+(u) - a(u)) v by scaled Taylor iteration.
  Vec weylApply(const Vec& u, const Vec& v) const;
  /// Dense truncated Weyl operator W0(u) = exp(a+(u) - a(u)), built column
  /// by column from the generator action.
  FockOperator weylOperator(const Vec& u) const;

  /// Gamma(R) for a linear mode map: acts as R^{(n)} on each sector.
  FockOperator secondQuantize(const Mat& r) const;
  /// Gamma(R) for a conjugate-linear mode map.
  FockOperator secondQuantize(const ConjLinearMap& r) const;

  /// Zeroes every coefficient with a particle in a mode >= first_excluded.
  Vec projectModesBelow(int first_excluded, const Vec& v) const;
  /// Gamma(p) for the orthogonal projection p onto modes < first_excluded.
  FockOperator modeProjection(int first_excluded) const;

  cxd vacuumExpectation(const FockOperator& op) const { return op.m(0, 0); }

  /// Exact inner product of untruncated exponential vectors.
  static cxd expVectorInnerExact(const Vec& u, const Vec& v) {
    return std::exp(inner(u, v));
  }

 private:
  int modes_;
  int cutoff_;
  std::vector<Occupation> basis_;
  std::vector<int> totals_;
  std::vector<Eigen::Index> raise_;
  std::vector<Eigen::Index> lower_;
  std::unordered_map<std::string, Eigen::Index> index_;
  std::vector<double> sqrt_table_;

  Vec gammaColumn(const Mat& kernel, Eigen::Index col) const;
};

}  // namespace qfsc

#endif
