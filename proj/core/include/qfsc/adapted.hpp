#ifndef QFSC_ADAPTED_HPP
#define QFSC_ADAPTED_HPP

#include <vector>

#include "qfsc/fock.hpp"
#include "qfsc/phase_space.hpp"

namespace qfsc {

/// Discrete time grid: bin j (0-based) owns modes [j*2d, (j+1)*2d).
/// The bin width dt is metadata only; square roots of bin measures are
/// absorbed into step-function coefficients, which makes the discrete Ito
/// isometry exact.
struct TimeGrid {
  int bins = 1;
  int d = 1;
  double dt = 1.0;

  int doubledDim() const { return 2 * d; }
  int modes() const { return bins * 2 * d; }
  int modeStart(int bin) const { return bin * 2 * d; }
};

/// Process entry per bin: a (2d x fock_dim) matrix, row per fiber leg.
/// Adaptedness: entry j is supported on occupation indices with no
/// particles in bins >= j (strict past tensor future vacuum).
using AdaptedProcess = std::vector<Mat>;

/// Vector martingale x_0..x_m with P_j x_k = x_j for j <= k.
using VectorMartingale = std::vector<Vec>;

bool isAdapted(const TimeGrid& grid, const FockSpace& fock, const AdaptedProcess& z,
               double tol = 0.0);

/// P^Omega: zeroes the coefficients that violate adaptedness.
AdaptedProcess projectAdapted(const TimeGrid& grid, const FockSpace& fock,
                              const AdaptedProcess& z);

/// P_j = Gamma(p_j): zeroes every coefficient with a particle in bins >= j.
/// j ranges over 0..bins; j = bins is the identity, j = 0 the vacuum
/// projection.
Vec projectPt(const TimeGrid& grid, const FockSpace& fock, int j, const Vec& x);

/// Discrete Ito integral: sum over bins of componentwise creation applied
/// to the entries. Rejects non-adapted input. Exact isometry
/// |ito(z)|^2 = sum_j |z_j|^2 for entries below the particle cutoff.
Vec ito(const TimeGrid& grid, const FockSpace& fock, const AdaptedProcess& z);

/// Adapted gradient, the matrix adjoint of `ito`:
/// (D x)_{j,alpha} = P_j a(e_{j,alpha}) x.
AdaptedProcess adaptedGradient(const TimeGrid& grid, const FockSpace& fock, const Vec& x);

/// Modified Ito integral I^Sigma_t: ito of the per-bin transformed prefix
/// ((Sigma_j tensor I) z_j)_{j < upto}.
Vec itoSigma(const TimeGrid& grid, const FockSpace& fock, const AdaptedProcess& z,
             const SigmaMap& sigma, int upto);

/// The martingale family (x_0 + I^Sigma_j z)_{j=0..bins}.
VectorMartingale integralMartingale(const TimeGrid& grid, const FockSpace& fock,
                                    const AdaptedProcess& z, const SigmaMap& sigma,
                                    const Vec& x0);

bool isVectorMartingale(const TimeGrid& grid, const FockSpace& fock,
                        const VectorMartingale& x, double tol = 1e-12);

/// Pointwise (T tensor S_fock) with a conjugate-linear fiber map T and a
/// conjugate-linear Fock operator; entry rows mix through the fiber kernel.
AdaptedProcess applyConjFiberAndFock(const AdaptedProcess& z, const Mat& fiber_kernel,
                                     const FockOperator& s_fock);

struct DeviationReport {
  double max_deviation = 0.0;
  double tolerance = 0.0;
  int trials = 0;
  bool pass = false;
};

/// Commutation of the Fock modular operator with Ito integration:
/// S_Omega ito(z) = ito((s_Omega tensor_Omega S_Omega) z) on adapted z.
DeviationReport modularItoCommutationCheck(const TimeGrid& grid, const FockSpace& fock,
                                           const SigmaMap& sigma,
                                           const std::vector<AdaptedProcess>& samples,
                                           double tol = 1e-6);

struct Reconstruction {
  AdaptedProcess integrand;
  std::vector<double> residuals;  // |(x_j - x_0) - I^Sigma_j z| per bin
  double maxResidual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, r);
    return m;
  }
};

/// Martingale representation: z_j = (Sigma_j^{-1} tensor I)(D(x_m - x_0))_j,
/// with per-bin residuals as the representability diagnostic.
Reconstruction reconstructIntegrand(const TimeGrid& grid, const FockSpace& fock,
                                    const VectorMartingale& x, const SigmaMap& sigma);

/// S(x_t - x_0) = I^Sigma_t((k^pi tensor S) z) for a represented pair.
DeviationReport theoremXbCheck(const TimeGrid& grid, const FockSpace& fock,
                               const VectorMartingale& x, const AdaptedProcess& z,
                               const SigmaMap& sigma, const FockOperator& s_fock,
                               double tol = 1e-6);

}  // namespace qfsc

#endif
