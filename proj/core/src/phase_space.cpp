#include "qfsc/phase_space.hpp"

#include <Eigen/LU>
#include <cmath>

namespace qfsc {

Vec iotaFiber(const Vec& f) {
  Vec out(2 * f.size());
  out.head(f.size()) = f;
  out.tail(f.size()) = -f.conjugate();
  return out;
}

Vec iota(const PhaseSpaceModel& model, const Vec& f) {
  if (f.size() != model.totalBaseDim())
    throw std::invalid_argument("iota: expected a C^{bins*d} step function");
  Vec out(model.totalDim());
  for (int j = 0; j < model.bins; ++j)
    out.segment(j * model.doubledDim(), model.doubledDim()) =
        iotaFiber(f.segment(j * model.d, model.d));
  return out;
}

SigmaMap::SigmaMap(std::vector<Mat> blocks, SigmaKind kind)
    : blocks_(std::move(blocks)), kind_(kind) {
  if (blocks_.empty()) throw std::invalid_argument("SigmaMap: no blocks");
  for (const Mat& b : blocks_)
    if (b.rows() != b.cols() || b.rows() != blocks_.front().rows())
      throw std::invalid_argument("SigmaMap: inconsistent block shapes");
}

bool SigmaMap::singular(double tol) const {
  for (const Mat& b : blocks_) {
    Eigen::JacobiSVD<Mat> svd(b);
    if (svd.singularValues().minCoeff() <= tol) return true;
  }
  return false;
}

Vec SigmaMap::apply(const Vec& v) const {
  const int n = doubledDim();
  Vec out(v.size());
  for (int j = 0; j < bins(); ++j)
    out.segment(j * n, n) = blocks_[j] * v.segment(j * n, n);
  return out;
}

Vec SigmaMap::applyInverse(const Vec& v) const {
  const int n = doubledDim();
  Vec out(v.size());
  for (int j = 0; j < bins(); ++j)
    out.segment(j * n, n) = blocks_[j].fullPivLu().solve(v.segment(j * n, n));
  return out;
}

Vec SigmaMap::applyBlock(int j, const Vec& v) const { return blocks_.at(j) * v; }

Vec SigmaMap::applyBlockInverse(int j, const Vec& v) const {
  return blocks_.at(j).fullPivLu().solve(v);
}

Mat SigmaMap::blockInverse(int j) const {
  const Mat& b = blocks_.at(j);
  Eigen::FullPivLU<Mat> lu(b);
  if (!lu.isInvertible())
    throw std::runtime_error("SigmaMap: block " + std::to_string(j) + " is singular");
  return lu.inverse();
}

Mat SigmaMap::denseMatrix() const {
  const int n = doubledDim();
  Mat out = Mat::Zero(bins() * n, bins() * n);
  for (int j = 0; j < bins(); ++j) out.block(j * n, j * n, n, n) = blocks_[j];
  return out;
}

SigmaMap SigmaMap::scaled(cxd factor) const {
  std::vector<Mat> out = blocks_;
  for (Mat& b : out) b *= factor;
  return SigmaMap(std::move(out), SigmaKind::custom);
}

namespace {

void validateGaugeBlock(const Mat& t, int d, bool strict, double tol, int bin) {
  if (t.rows() != d || t.cols() != d)
    throw std::invalid_argument("gauge covariance: T block has wrong shape in bin " +
                                std::to_string(bin));
  if (!isHermitian(t, 1e-10))
    throw std::invalid_argument("gauge covariance: T not Hermitian in bin " +
                                std::to_string(bin));
  const double min_eig = minHermitianEigenvalue(t);
  if (strict && min_eig <= tol)
    throw std::invalid_argument("gauge covariance: T not injective in bin " +
                                std::to_string(bin) + " (min eigenvalue " +
                                std::to_string(min_eig) + ")");
  if (min_eig < -1e-10)
    throw std::invalid_argument("gauge covariance: T has negative spectrum in bin " +
                                std::to_string(bin));
}

Mat gaugeBlock(const Mat& t) {
  const Eigen::Index d = t.rows();
  Mat block = Mat::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = sqrtPsd(Mat::Identity(d, d) + t, 1e-10);
  block.bottomRightCorner(d, d) = sqrtPsd(t, 1e-10).conjugate();
  return block;
}

}  // namespace

SigmaMap buildSigmaGauge(const PhaseSpaceModel& model, const std::vector<Mat>& t_per_bin,
                         bool strict, double tol) {
  if (static_cast<int>(t_per_bin.size()) != model.bins)
    throw std::invalid_argument("gauge covariance: need one T block per bin");
  std::vector<Mat> blocks;
  blocks.reserve(t_per_bin.size());
  for (int j = 0; j < model.bins; ++j) {
    validateGaugeBlock(t_per_bin[j], model.d, strict, tol, j);
    blocks.push_back(gaugeBlock(t_per_bin[j]));
  }
  return SigmaMap(std::move(blocks), SigmaKind::gauge);
}

SigmaMap buildSigmaGauge(const PhaseSpaceModel& model, const Mat& t, bool strict) {
  return buildSigmaGauge(model, std::vector<Mat>(model.bins, t), strict);
}

SigmaMap buildSigmaSqueezed(const PhaseSpaceModel& model, const std::vector<Mat>& t_per_bin,
                            const std::vector<SqueezeParams>& q_per_bin, bool strict,
                            double tol) {
  if (static_cast<int>(t_per_bin.size()) != model.bins ||
      static_cast<int>(q_per_bin.size()) != model.bins)
    throw std::invalid_argument("squeezed covariance: need T and (U,K',P) per bin");
  const Eigen::Index d = model.d;
  std::vector<Mat> blocks;
  blocks.reserve(model.bins);
  for (int j = 0; j < model.bins; ++j) {
    validateGaugeBlock(t_per_bin[j], model.d, strict, 1e-12, j);
    const SqueezeParams& q = q_per_bin[j];
    if (q.u.rows() != d || q.u.cols() != d || q.p.rows() != d || q.p.cols() != d ||
        q.kp.rows() != d)
      throw std::invalid_argument("squeezed covariance: parameter shape mismatch in bin " +
                                  std::to_string(j));
    if ((q.u.adjoint() * q.u - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("squeezed covariance: U not unitary in bin " +
                                  std::to_string(j));
    if (!q.kp.isAntiunitary(tol) || !q.kp.isInvolution(tol))
      throw std::invalid_argument("squeezed covariance: K' is not a conjugation in bin " +
                                  std::to_string(j));
    if (!isHermitian(q.p, tol) || minHermitianEigenvalue(q.p) < -tol)
      throw std::invalid_argument("squeezed covariance: P not Hermitian >= 0 in bin " +
                                  std::to_string(j));
    // K' must commute with the spectral projectors of P: K'P = PK' as maps,
    // i.e. A' conj(P) = P A' on kernels.
    if ((q.kp.kernel() * q.p.conjugate() - q.p * q.kp.kernel()).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument(
          "squeezed covariance: K' does not commute with the spectral projectors of P in bin " +
          std::to_string(j));

    // KUK' is linear with matrix conj(U) conj(A'); K'K is linear with matrix A'.
    const Mat kuk = q.u.conjugate() * q.kp.kernel().conjugate();
    const Mat kpk = q.kp.kernel();
    Mat mix = Mat::Zero(2 * d, 2 * d);
    mix.topLeftCorner(d, d) = q.u;
    mix.bottomRightCorner(d, d) = kuk;
    Mat hyp(2 * d, 2 * d);
    const Mat ch = coshHermitian(q.p);
    const Mat sh = sinhHermitian(q.p);
    hyp.topLeftCorner(d, d) = ch;
    hyp.topRightCorner(d, d) = sh;
    hyp.bottomLeftCorner(d, d) = sh;
    hyp.bottomRightCorner(d, d) = ch;
    Mat tail = Mat::Identity(2 * d, 2 * d);
    tail.bottomRightCorner(d, d) = kpk;
    blocks.push_back(gaugeBlock(t_per_bin[j]) * mix * hyp * tail);
  }
  return SigmaMap(std::move(blocks), SigmaKind::squeezed);
}

SigmaMap buildSigmaSqueezed(const PhaseSpaceModel& model, const Mat& t,
                            const SqueezeParams& q, bool strict) {
  return buildSigmaSqueezed(model, std::vector<Mat>(model.bins, t),
                            std::vector<SqueezeParams>(model.bins, q), strict);
}

SigmaMap buildSigmaPrime(const SigmaMap& sigma, const ConjLinearMap& j_fiber) {
  if (j_fiber.rows() != sigma.doubledDim())
    throw std::invalid_argument("buildSigmaPrime: j has wrong fiber dimension");
  // v -> j(Sigma((K+K)v)) = A_j conj(Sigma) v: linear per bin.
  std::vector<Mat> blocks;
  blocks.reserve(sigma.bins());
  for (int j = 0; j < sigma.bins(); ++j)
    blocks.push_back(j_fiber.kernel() * sigma.block(j).conjugate());
  return SigmaMap(std::move(blocks), sigma.kind());
}

SigmaMap buildSigmaPrimeGauge(const PhaseSpaceModel& model, const std::vector<Mat>& t_per_bin) {
  const Eigen::Index d = model.d;
  std::vector<Mat> blocks;
  blocks.reserve(t_per_bin.size());
  for (const Mat& t : t_per_bin) {
    Mat block = Mat::Zero(2 * d, 2 * d);
    block.topRightCorner(d, d) = sqrtPsd(t, 1e-10);
    block.bottomLeftCorner(d, d) = sqrtPsd(Mat::Identity(d, d) + t, 1e-10).conjugate();
    blocks.push_back(std::move(block));
  }
  return SigmaMap(std::move(blocks), SigmaKind::gauge);
}

SymplecticReport checkSymplectic(const PhaseSpaceModel& model, const SigmaMap& sigma,
                                 int trials, RngStream& rng, double tol) {
  SymplecticReport rep;
  rep.trials = trials;
  rep.tolerance = tol;
  for (int i = 0; i < trials; ++i) {
    const Vec f = rng.complexGaussVector(model.totalBaseDim());
    const Vec g = rng.complexGaussVector(model.totalBaseDim());
    const double lhs = symplecticForm(sigma.apply(iota(model, f)), sigma.apply(iota(model, g)));
    const double rhs = symplecticForm(f, g);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(lhs - rhs));
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

SymplecticReport checkDualityOrthogonality(const PhaseSpaceModel& model, const SigmaMap& sigma,
                                           const SigmaMap& sigma_prime, int trials,
                                           RngStream& rng, double tol) {
  SymplecticReport rep;
  rep.trials = trials;
  rep.tolerance = tol;
  for (int i = 0; i < trials; ++i) {
    const Vec f = rng.complexGaussVector(model.totalBaseDim());
    const Vec g = rng.complexGaussVector(model.totalBaseDim());
    const double dev = symplecticForm(sigma.apply(iota(model, f)),
                                      sigma_prime.apply(iota(model, g.conjugate())));
    rep.max_deviation = std::max(rep.max_deviation, std::abs(dev));
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

RealSubspace subspaceH1(const PhaseSpaceModel& model, const SigmaMap& sigma) {
  const int base = model.totalBaseDim();
  Mat cols(model.totalDim(), 2 * base);
  for (int a = 0; a < base; ++a) {
    Vec e = Vec::Zero(base);
    e[a] = 1.0;
    cols.col(2 * a) = sigma.apply(iota(model, e));
    e[a] = kI;
    cols.col(2 * a + 1) = sigma.apply(iota(model, e));
  }
  return RealSubspace::fromComplexColumns(cols);
}

RealSubspace symplecticComplement(const RealSubspace& h) { return h.symplecticComplement(); }

GenericPositionDims genericPosition(const RealSubspace& h1, const RealSubspace& h2,
                                    double tol) {
  GenericPositionDims dims;
  const RealSubspace h1p = h1.orthogonalComplement();
  const RealSubspace h2p = h2.orthogonalComplement();
  dims.h1_and_h2 = RealSubspace::intersectionDim(h1, h2, tol);
  dims.h1perp_and_h2 = RealSubspace::intersectionDim(h1p, h2, tol);
  dims.h1_and_h2perp = RealSubspace::intersectionDim(h1, h2p, tol);
  dims.h1perp_and_h2perp = RealSubspace::intersectionDim(h1p, h2p, tol);
  return dims;
}

ConjLinearMap sOmegaFiber(const Mat& sigma_block) {
  const Eigen::Index n = sigma_block.rows();
  Eigen::FullPivLU<Mat> lu(sigma_block);
  if (!lu.isInvertible())
    throw std::runtime_error("sOmega: singular covariance block");
  const Mat pi = ConjLinearMap::flipConjugation(n).kernel();
  return ConjLinearMap(sigma_block * pi * lu.inverse().conjugate());
}

ConjLinearMap sOmega(const SigmaMap& sigma) {
  const int n = sigma.doubledDim();
  Mat kernel = Mat::Zero(sigma.bins() * n, sigma.bins() * n);
  for (int j = 0; j < sigma.bins(); ++j)
    kernel.block(j * n, j * n, n, n) = sOmegaFiber(sigma.block(j)).kernel();
  return ConjLinearMap(std::move(kernel));
}

ModularOneParticle polarConjLinear(const ConjLinearMap& s) {
  ConjLinearPolar polar = polarDecompose(s);
  return ModularOneParticle{s, polar.j, polar.delta_half};
}

ModularOneParticle modularFromSigma(const SigmaMap& sigma) {
  return polarConjLinear(sOmega(sigma));
}

ModularOneParticle gaugeModularClosedForm(const Mat& t) {
  const Eigen::Index d = t.rows();
  Eigen::FullPivLU<Mat> lu(t);
  if (!lu.isInvertible())
    throw std::invalid_argument("gaugeModularClosedForm: T must be injective");
  const Mat t_inv = lu.inverse();
  const Mat core = sqrtPsd(Mat::Identity(d, d) + t_inv, 1e-10);
  Mat delta_half = Mat::Zero(2 * d, 2 * d);
  delta_half.topLeftCorner(d, d) = core.fullPivLu().inverse();
  delta_half.bottomRightCorner(d, d) = core.conjugate();
  ConjLinearMap j = ConjLinearMap::flipConjugation(2 * d);
  // s = j o delta_half, so the kernel is A_j * conj(delta_half).
  ConjLinearMap s = j.composeLinearRight(delta_half);
  return ModularOneParticle{s, j, delta_half};
}

}  // namespace qfsc
