#include "qfsc/qf_martingale.hpp"

#include <cmath>
#include <stdexcept>

namespace qfsc {

Vec conditionalExpectation(const TimeGrid& grid, const FockSpace& fock, int j, const Vec& v) {
  return projectPt(grid, fock, j, v);
}

VectorMartingale closedMartingale(const TimeGrid& grid, const FockSpace& fock, const Vec& v) {
  VectorMartingale x(grid.bins + 1);
  for (int j = 0; j <= grid.bins; ++j) x[j] = projectPt(grid, fock, j, v);
  return x;
}

Vec qfIntegral(const TimeGrid& grid, const FockSpace& fock, const QfIntegrand& f,
               const SigmaMap& sigma, int upto) {
  return itoSigma(grid, fock, f.q, sigma, upto);
}

VectorMartingale qfIntegralMartingale(const TimeGrid& grid, const FockSpace& fock,
                                      const QfIntegrand& f, const SigmaMap& sigma) {
  VectorMartingale x(grid.bins + 1);
  for (int j = 0; j <= grid.bins; ++j) x[j] = qfIntegral(grid, fock, f, sigma, j);
  return x;
}

QfIntegrand integrandFromBlocks(const TimeGrid& grid, const FockSpace& fock,
                                const std::vector<Mat>& l_xi, const std::vector<Mat>& mt_xi) {
  if (static_cast<int>(l_xi.size()) != grid.bins ||
      static_cast<int>(mt_xi.size()) != grid.bins)
    throw std::invalid_argument("integrandFromBlocks: need one block per bin");
  QfIntegrand f;
  f.q.assign(grid.bins, Mat::Zero(grid.doubledDim(), fock.dim()));
  for (int j = 0; j < grid.bins; ++j) {
    if (l_xi[j].rows() != grid.d || mt_xi[j].rows() != grid.d ||
        l_xi[j].cols() != fock.dim() || mt_xi[j].cols() != fock.dim())
      throw std::invalid_argument("integrandFromBlocks: block shape mismatch");
    f.q[j].topRows(grid.d) = l_xi[j];
    f.q[j].bottomRows(grid.d) = mt_xi[j];
  }
  return f;
}

Vec creationIntegral(const TimeGrid& grid, const FockSpace& fock,
                     const std::vector<Mat>& l_xi, const SigmaMap& sigma, int upto) {
  std::vector<Mat> zero(grid.bins, Mat::Zero(grid.d, fock.dim()));
  return qfIntegral(grid, fock, integrandFromBlocks(grid, fock, l_xi, zero), sigma, upto);
}

Vec annihilationIntegral(const TimeGrid& grid, const FockSpace& fock,
                         const std::vector<Mat>& mt_xi, const SigmaMap& sigma, int upto) {
  std::vector<Mat> zero(grid.bins, Mat::Zero(grid.d, fock.dim()));
  return qfIntegral(grid, fock, integrandFromBlocks(grid, fock, zero, mt_xi), sigma, upto);
}

ExponentialMartingale exponentialMartingale(const TimeGrid& grid, const FockSpace& fock,
                                            const Mat& f_steps, const SigmaMap& sigma,
                                            bool with_operators) {
  if (f_steps.rows() != grid.bins || f_steps.cols() != grid.d)
    throw std::invalid_argument("exponentialMartingale: f must be bins x d");
  const PhaseSpaceModel model{grid.d, grid.bins};
  ExponentialMartingale out;
  out.u_prefixes.resize(grid.bins + 1);
  out.martingale.x.resize(grid.bins + 1);
  if (with_operators) out.martingale.ops.emplace();

  for (int j = 0; j <= grid.bins; ++j) {
    Vec f_prefix = Vec::Zero(model.totalBaseDim());
    for (int b = 0; b < j; ++b)
      f_prefix.segment(b * grid.d, grid.d) = f_steps.row(b).transpose();
    out.u_prefixes[j] = sigma.apply(iota(model, f_prefix));
    if (with_operators) {
      FockOperator w = fock.weylOperator(out.u_prefixes[j]);
      const double scale = std::exp(0.5 * out.u_prefixes[j].squaredNorm());
      w.m *= scale;
      out.martingale.x[j] = w.m.col(0);
      out.martingale.ops->push_back(std::move(w));
    } else {
      const double scale = std::exp(0.5 * out.u_prefixes[j].squaredNorm());
      out.martingale.x[j] = scale * fock.weylApply(out.u_prefixes[j], fock.vacuum());
    }
  }

  // Left-point integrand: q_j = iota(f_j) tensor x_{j-1}.
  out.integrand.q.assign(grid.bins, Mat::Zero(grid.doubledDim(), fock.dim()));
  for (int j = 0; j < grid.bins; ++j) {
    const Vec leg = iotaFiber(f_steps.row(j).transpose());
    out.integrand.q[j] = leg * out.martingale.x[j].transpose();
  }
  return out;
}

Representation represent(const TimeGrid& grid, const FockSpace& fock, const QfMartingale& x,
                         const SigmaMap& sigma) {
  if (!isVectorMartingale(grid, fock, x.x, 1e-10))
    throw std::invalid_argument("represent: input is not a vector martingale");
  Reconstruction rec = reconstructIntegrand(grid, fock, x.x, sigma);
  Representation rep;
  rep.integrand.q = std::move(rec.integrand);
  rep.residuals = std::move(rec.residuals);
  return rep;
}

DeviationReport daggerMartingale(const TimeGrid& grid, const FockSpace& fock,
                                 const QfMartingale& x, const QfIntegrand& q,
                                 const SigmaMap& sigma, const FockOperator& s_fock,
                                 double tol) {
  return theoremXbCheck(grid, fock, x.x, q.q, sigma, s_fock, tol);
}

}  // namespace qfsc
