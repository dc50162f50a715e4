#include "qfsc/adapted.hpp"

#include <cmath>
#include <stdexcept>

namespace qfsc {

namespace {

void checkShapes(const TimeGrid& grid, const FockSpace& fock, const AdaptedProcess& z) {
  if (static_cast<int>(z.size()) != grid.bins)
    throw std::invalid_argument("adapted process: expected one entry per bin");
  if (fock.modes() != grid.modes())
    throw std::invalid_argument("adapted process: grid/fock mode mismatch");
  for (const Mat& e : z)
    if (e.rows() != grid.doubledDim() || e.cols() != fock.dim())
      throw std::invalid_argument("adapted process: entry shape mismatch");
}

}  // namespace

bool isAdapted(const TimeGrid& grid, const FockSpace& fock, const AdaptedProcess& z,
               double tol) {
  checkShapes(grid, fock, z);
  for (int j = 0; j < grid.bins; ++j) {
    const int first_future_mode = grid.modeStart(j);
    for (Eigen::Index i = 0; i < fock.dim(); ++i) {
      bool future = false;
      for (int a = first_future_mode; a < fock.modes(); ++a)
        if (fock.occupationAt(i)[a] > 0) {
          future = true;
          break;
        }
      if (!future) continue;
      for (int r = 0; r < grid.doubledDim(); ++r)
        if (std::abs(z[j](r, i)) > tol) return false;
    }
  }
  return true;
}

AdaptedProcess projectAdapted(const TimeGrid& grid, const FockSpace& fock,
                              const AdaptedProcess& z) {
  checkShapes(grid, fock, z);
  AdaptedProcess out = z;
  for (int j = 0; j < grid.bins; ++j) {
    const int first_future_mode = grid.modeStart(j);
    for (Eigen::Index i = 0; i < fock.dim(); ++i) {
      for (int a = first_future_mode; a < fock.modes(); ++a)
        if (fock.occupationAt(i)[a] > 0) {
          out[j].col(i).setZero();
          break;
        }
    }
  }
  return out;
}

Vec projectPt(const TimeGrid& grid, const FockSpace& fock, int j, const Vec& x) {
  if (j < 0 || j > grid.bins) throw std::out_of_range("projectPt: bin index out of range");
  return fock.projectModesBelow(grid.modeStart(j), x);
}

Vec ito(const TimeGrid& grid, const FockSpace& fock, const AdaptedProcess& z) {
  if (!isAdapted(grid, fock, z, 0.0))
    throw std::invalid_argument("ito: process is not adapted");
  Vec out = Vec::Zero(fock.dim());
  for (int j = 0; j < grid.bins; ++j)
    for (int r = 0; r < grid.doubledDim(); ++r)
      out += fock.applyCreationMode(grid.modeStart(j) + r, z[j].row(r).transpose());
  return out;
}

AdaptedProcess adaptedGradient(const TimeGrid& grid, const FockSpace& fock, const Vec& x) {
  AdaptedProcess out(grid.bins, Mat::Zero(grid.doubledDim(), fock.dim()));
  for (int j = 0; j < grid.bins; ++j)
    for (int r = 0; r < grid.doubledDim(); ++r)
      out[j].row(r) =
          projectPt(grid, fock, j, fock.applyAnnihilationMode(grid.modeStart(j) + r, x))
              .transpose();
  return out;
}

Vec itoSigma(const TimeGrid& grid, const FockSpace& fock, const AdaptedProcess& z,
             const SigmaMap& sigma, int upto) {
  if (upto < 0 || upto > grid.bins) throw std::out_of_range("itoSigma: bad prefix");
  if (sigma.bins() != grid.bins || sigma.doubledDim() != grid.doubledDim())
    throw std::invalid_argument("itoSigma: covariance/grid mismatch");
  AdaptedProcess w(grid.bins, Mat::Zero(grid.doubledDim(), fock.dim()));
  for (int j = 0; j < upto; ++j) w[j] = sigma.block(j) * z[j];
  return ito(grid, fock, w);
}

VectorMartingale integralMartingale(const TimeGrid& grid, const FockSpace& fock,
                                    const AdaptedProcess& z, const SigmaMap& sigma,
                                    const Vec& x0) {
  VectorMartingale x(grid.bins + 1);
  for (int j = 0; j <= grid.bins; ++j) x[j] = x0 + itoSigma(grid, fock, z, sigma, j);
  return x;
}

bool isVectorMartingale(const TimeGrid& grid, const FockSpace& fock,
                        const VectorMartingale& x, double tol) {
  if (static_cast<int>(x.size()) != grid.bins + 1) return false;
  for (int j = 0; j <= grid.bins; ++j)
    for (int k = j; k <= grid.bins; ++k)
      if ((projectPt(grid, fock, j, x[k]) - x[j]).norm() > tol) return false;
  return true;
}

AdaptedProcess applyConjFiberAndFock(const AdaptedProcess& z, const Mat& fiber_kernel,
                                     const FockOperator& s_fock) {
  if (!s_fock.conj_linear)
    throw std::invalid_argument("applyConjFiberAndFock: Fock factor must be conjugate-linear");
  AdaptedProcess out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j)
    out[j] = fiber_kernel * (z[j].conjugate() * s_fock.m.transpose());
  return out;
}

DeviationReport modularItoCommutationCheck(const TimeGrid& grid, const FockSpace& fock,
                                           const SigmaMap& sigma,
                                           const std::vector<AdaptedProcess>& samples,
                                           double tol) {
  const ConjLinearMap s_one = sOmega(sigma);
  const FockOperator s_fock = fock.secondQuantize(s_one);
  DeviationReport rep;
  rep.tolerance = tol;
  rep.trials = static_cast<int>(samples.size());
  for (const AdaptedProcess& z : samples) {
    const Vec lhs = s_fock.apply(ito(grid, fock, z));
    AdaptedProcess w(z.size());
    for (int j = 0; j < grid.bins; ++j) {
      const Mat s_block = sOmegaFiber(sigma.block(j)).kernel();
      w[j] = s_block * (z[j].conjugate() * s_fock.m.transpose());
    }
    if (!isAdapted(grid, fock, w, 1e-13))
      throw std::runtime_error("modular commutation: transformed process lost adaptedness");
    w = projectAdapted(grid, fock, w);
    const Vec rhs = ito(grid, fock, w);
    rep.max_deviation = std::max(rep.max_deviation, (lhs - rhs).norm());
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

Reconstruction reconstructIntegrand(const TimeGrid& grid, const FockSpace& fock,
                                    const VectorMartingale& x, const SigmaMap& sigma) {
  if (static_cast<int>(x.size()) != grid.bins + 1)
    throw std::invalid_argument("reconstructIntegrand: expected bins+1 martingale points");
  Reconstruction rec;
  const Vec increment = x[grid.bins] - x[0];
  rec.integrand = adaptedGradient(grid, fock, increment);
  for (int j = 0; j < grid.bins; ++j)
    rec.integrand[j] = sigma.blockInverse(j) * rec.integrand[j];
  rec.residuals.resize(grid.bins + 1);
  for (int j = 0; j <= grid.bins; ++j)
    rec.residuals[j] = ((x[j] - x[0]) - itoSigma(grid, fock, rec.integrand, sigma, j)).norm();
  return rec;
}

DeviationReport theoremXbCheck(const TimeGrid& grid, const FockSpace& fock,
                               const VectorMartingale& x, const AdaptedProcess& z,
                               const SigmaMap& sigma, const FockOperator& s_fock,
                               double tol) {
  const Mat kpi = ConjLinearMap::flipConjugation(grid.doubledDim()).kernel();
  const AdaptedProcess w = applyConjFiberAndFock(z, kpi, s_fock);
  DeviationReport rep;
  rep.tolerance = tol;
  rep.trials = grid.bins;
  for (int t = 0; t <= grid.bins; ++t) {
    const Vec lhs = s_fock.apply(x[t]) - s_fock.apply(x[0]);
    const Vec rhs = itoSigma(grid, fock, w, sigma, t);
    rep.max_deviation = std::max(rep.max_deviation, (lhs - rhs).norm());
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace qfsc
