#ifndef QFSC_PHASE_SPACE_HPP
#define QFSC_PHASE_SPACE_HPP

#include <optional>
#include <vector>

#include "qfsc/linalg.hpp"

namespace qfsc {

/// One-particle phase space: the doubled fiber C^{2d} per time bin.
/// Layout of a doubled vector: first d coordinates are the plain component,
/// the last d the conjugated one. Global vectors are bin-major.
struct PhaseSpaceModel {
  int d = 1;
  int bins = 1;

  int doubledDim() const { return 2 * d; }
  int totalDim() const { return bins * 2 * d; }
  int totalBaseDim() const { return bins * d; }
};

/// iota on one fiber: f |-> (f, -conj f).
Vec iotaFiber(const Vec& f);
/// Bin-wise iota on a step function in C^{bins*d}.
Vec iota(const PhaseSpaceModel& model, const Vec& f);

enum class SigmaKind { gauge, squeezed, custom };

/// Block-diagonal covariance map: one invertible 2d x 2d block per bin.
class SigmaMap {
 public:
  SigmaMap() = default;
  SigmaMap(std::vector<Mat> blocks, SigmaKind kind);

  SigmaKind kind() const { return kind_; }
  int bins() const { return static_cast<int>(blocks_.size()); }
  int doubledDim() const { return static_cast<int>(blocks_.front().rows()); }
  const Mat& block(int j) const { return blocks_.at(j); }
  const std::vector<Mat>& blocks() const { return blocks_; }

  bool singular(double tol = 1e-12) const;

  Vec apply(const Vec& v) const;          // block-diagonal action
  Vec applyInverse(const Vec& v) const;   // throws on a singular block
  Vec applyBlock(int j, const Vec& v) const;
  Vec applyBlockInverse(int j, const Vec& v) const;
  Mat blockInverse(int j) const;

  /// The full block-diagonal matrix over all bins.
  Mat denseMatrix() const;

  /// Same blocks scaled by a constant (breaks symplecticity unless |c|=1
  /// and c real); used for negative tests and custom maps.
  SigmaMap scaled(cxd factor) const;

 private:
  std::vector<Mat> blocks_;
  SigmaKind kind_ = SigmaKind::custom;
};

/// Gauge-invariant covariance: per-bin block diag(sqrt(I+T), conj(sqrt T)).
/// In strict mode every T must be Hermitian with strictly positive spectrum;
/// permissive mode admits T with kernel (the Fock-state direction) and the
/// resulting SigmaMap reports singular().
SigmaMap buildSigmaGauge(const PhaseSpaceModel& model, const std::vector<Mat>& t_per_bin,
                         bool strict = true, double tol = 1e-12);
SigmaMap buildSigmaGauge(const PhaseSpaceModel& model, const Mat& t, bool strict = true);

/// Parameters of the squeezing automorphism on one fiber.
struct SqueezeParams {
  Mat u;              // unitary d x d
  ConjLinearMap kp;   // second conjugation K'
  Mat p;              // Hermitian >= 0
};

/// Squeezed covariance: Sigma_T (U + KUK') Gamma (I + K'K) per bin, with
/// Gamma = [[cosh P, sinh P], [sinh P, cosh P]].
SigmaMap buildSigmaSqueezed(const PhaseSpaceModel& model, const std::vector<Mat>& t_per_bin,
                            const std::vector<SqueezeParams>& q_per_bin, bool strict = true,
                            double tol = 1e-10);
SigmaMap buildSigmaSqueezed(const PhaseSpaceModel& model, const Mat& t,
                            const SqueezeParams& q, bool strict = true);

/// Commutant-side covariance j o Sigma o (K + K); per-bin composition of the
/// conjugate-linear j, the linear block, and the fiber conjugation. The
/// result is linear.
SigmaMap buildSigmaPrime(const SigmaMap& sigma, const ConjLinearMap& j_fiber);

/// Closed-form commutant covariance for gauge blocks:
/// [[0, sqrt T], [conj(sqrt(I+T)), 0]].
SigmaMap buildSigmaPrimeGauge(const PhaseSpaceModel& model, const std::vector<Mat>& t_per_bin);

struct SymplecticReport {
  double max_deviation = 0.0;
  double tolerance = 0.0;
  int trials = 0;
  bool pass = false;
};

/// Checks Im<Sigma iota f, Sigma iota g> = Im<f, g> on random pairs.
SymplecticReport checkSymplectic(const PhaseSpaceModel& model, const SigmaMap& sigma,
                                 int trials, RngStream& rng, double tol = 1e-11);

/// Checks the duality orthogonality Im<Sigma iota f, Sigma' iota (conj g)> = 0.
SymplecticReport checkDualityOrthogonality(const PhaseSpaceModel& model, const SigmaMap& sigma,
                                           const SigmaMap& sigma_prime, int trials,
                                           RngStream& rng, double tol = 1e-11);

/// H1 = real span of {Sigma iota(e_a), Sigma iota(i e_a)} over a real basis
/// of C^{bins*d}.
RealSubspace subspaceH1(const PhaseSpaceModel& model, const SigmaMap& sigma);

/// H2 = H1^{sigma perp} = (i H1)^{Re perp}.
RealSubspace symplecticComplement(const RealSubspace& h);

struct GenericPositionDims {
  Eigen::Index h1_and_h2 = 0;
  Eigen::Index h1perp_and_h2 = 0;
  Eigen::Index h1_and_h2perp = 0;
  Eigen::Index h1perp_and_h2perp = 0;
  bool generic() const {
    return h1_and_h2 == 0 && h1perp_and_h2 == 0 && h1_and_h2perp == 0 &&
           h1perp_and_h2perp == 0;
  }
};

GenericPositionDims genericPosition(const RealSubspace& h1, const RealSubspace& h2,
                                    double tol = 1e-9);

/// One-particle modular operator on one fiber: s = Sigma K^pi Sigma^{-1},
/// conjugate-linear with kernel Sigma Pi conj(Sigma^{-1}).
ConjLinearMap sOmegaFiber(const Mat& sigma_block);

/// Block-diagonal s over all bins, as a single conjugate-linear map on the
/// total doubled space.
ConjLinearMap sOmega(const SigmaMap& sigma);

struct ModularOneParticle {
  ConjLinearMap s;
  ConjLinearMap j;
  Mat delta_half;
};

/// Polar data s = j delta^{1/2}; throws on non-positive delta spectrum.
ModularOneParticle modularFromSigma(const SigmaMap& sigma);
ModularOneParticle polarConjLinear(const ConjLinearMap& s);

/// Closed-form gauge modular data on one fiber:
/// j = K^pi, delta_half = diag(sqrt(I+T^{-1})^{-1}, conj(sqrt(I+T^{-1}))).
ModularOneParticle gaugeModularClosedForm(const Mat& t);

}  // namespace qfsc

#endif
