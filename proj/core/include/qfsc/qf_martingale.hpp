#ifndef QFSC_QF_MARTINGALE_HPP
#define QFSC_QF_MARTINGALE_HPP

#include <optional>
#include <vector>

#include "qfsc/adapted.hpp"

namespace qfsc {

/// Quasifree integrand at vector level: the column process q_j = F_j^[] xi
/// in C^{2d} tensor Fock, adapted. The first d rows are the creation block
/// L xi, the last d rows the transposed annihilation block M^T xi.
struct QfIntegrand {
  AdaptedProcess q;
};

/// Quasifree martingale carried at vector level; the operator family is
/// attached when a Weyl-built construction is available.
struct QfMartingale {
  VectorMartingale x;
  std::optional<std::vector<FockOperator>> ops;
};

/// E^Sigma_j at vector level: the past projection P_j.
Vec conditionalExpectation(const TimeGrid& grid, const FockSpace& fock, int j, const Vec& v);
VectorMartingale closedMartingale(const TimeGrid& grid, const FockSpace& fock, const Vec& v);

/// Lambda^Sigma_upto(F) xi = I^Sigma_upto(F^[] xi).
Vec qfIntegral(const TimeGrid& grid, const FockSpace& fock, const QfIntegrand& f,
               const SigmaMap& sigma, int upto);
VectorMartingale qfIntegralMartingale(const TimeGrid& grid, const FockSpace& fock,
                                      const QfIntegrand& f, const SigmaMap& sigma);

/// Creation integral: Lambda^Sigma of [[0,0],[L,0]]. The input rows are the
/// d-leg columns L_j xi per bin.
Vec creationIntegral(const TimeGrid& grid, const FockSpace& fock,
                     const std::vector<Mat>& l_xi, const SigmaMap& sigma, int upto);
/// Annihilation integral: Lambda^Sigma of [[0,M],[0,0]]; rows are M_j^T xi.
Vec annihilationIntegral(const TimeGrid& grid, const FockSpace& fock,
                         const std::vector<Mat>& mt_xi, const SigmaMap& sigma, int upto);

/// Packs creation and annihilation blocks into one integrand column.
QfIntegrand integrandFromBlocks(const TimeGrid& grid, const FockSpace& fock,
                                const std::vector<Mat>& l_xi, const std::vector<Mat>& mt_xi);

struct ExponentialMartingale {
  QfMartingale martingale;      // x_j = e^{|u_j|^2/2} W0(u_j) Omega = eps(u_j)
  QfIntegrand integrand;        // left-point columns iota(f_j) tensor x_{j-1}
  std::vector<Vec> u_prefixes;  // u_j = Sigma iota(f_{<=j}), j = 0..bins
};

/// Stochastic exponential of the field martingale of the step function f
/// (bins x d coefficient matrix, square-root bin measure absorbed).
/// When with_operators is set, the Weyl operator family is built densely.
ExponentialMartingale exponentialMartingale(const TimeGrid& grid, const FockSpace& fock,
                                            const Mat& f_steps, const SigmaMap& sigma,
                                            bool with_operators = false);

struct Representation {
  QfIntegrand integrand;
  std::vector<double> residuals;
  double maxResidual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, r);
    return m;
  }
};

/// Martingale representation at vector level: recovers the integrand column
/// process and reports per-bin residuals.
Representation represent(const TimeGrid& grid, const FockSpace& fock,
                         const QfMartingale& x, const SigmaMap& sigma);

/// Adjoint-martingale identity: S(x_t - x_0) = Lambda^Sigma_t of the
/// pointwise (k^pi tensor S)-transformed integrand.
DeviationReport daggerMartingale(const TimeGrid& grid, const FockSpace& fock,
                                 const QfMartingale& x, const QfIntegrand& q,
                                 const SigmaMap& sigma, const FockOperator& s_fock,
                                 double tol = 1e-6);

}  // namespace qfsc

#endif
