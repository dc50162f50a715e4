#include "qfsc/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace qfsc {

Mat hermitianFunction(const Mat& h, double (*f)(double)) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitianFunction: eigensolver failed");
  RVec vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals[i] = f(vals[i]);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

Mat sqrtPsd(const Mat& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sqrtPsd: eigensolver failed");
  RVec vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < -tol)
      throw std::invalid_argument("sqrtPsd: matrix has negative eigenvalue " +
                                  std::to_string(vals[i]));
    vals[i] = std::sqrt(std::max(vals[i], 0.0));
  }
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

Mat coshHermitian(const Mat& h) { return hermitianFunction(h, std::cosh); }
Mat sinhHermitian(const Mat& h) { return hermitianFunction(h, std::sinh); }

bool isHermitian(const Mat& h, double tol) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double minHermitianEigenvalue(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  return es.eigenvalues().minCoeff();
}

ConjLinearPolar polarDecompose(const ConjLinearMap& s, double tol) {
  // delta = s* o s is linear with matrix A^T conj(A), Hermitian positive.
  const Mat& a = s.kernel();
  Mat delta = a.transpose() * a.conjugate();
  Eigen::SelfAdjointEigenSolver<Mat> es(delta);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("polarDecompose: eigensolver failed");
  RVec vals = es.eigenvalues();
  if (vals.minCoeff() <= tol)
    throw std::runtime_error("polarDecompose: delta spectrum not positive (min " +
                             std::to_string(vals.minCoeff()) + ")");
  RVec sqrt_vals = vals.cwiseSqrt();
  Mat delta_half = es.eigenvectors() * sqrt_vals.asDiagonal() * es.eigenvectors().adjoint();
  Mat delta_half_inv =
      es.eigenvectors() * sqrt_vals.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  // j = s o delta^{-1/2}: conjugate-linear with kernel A * conj(delta^{-1/2}).
  ConjLinearMap j = s.composeLinearRight(delta_half_inv);
  return ConjLinearPolar{std::move(delta), std::move(delta_half), std::move(j)};
}

namespace {

RMat orthonormalize(const RMat& b, double tol = 1e-12) {
  if (b.cols() == 0) return b;
  Eigen::ColPivHouseholderQR<RMat> qr(b);
  qr.setThreshold(tol);
  const Eigen::Index r = qr.rank();
  RMat q = qr.householderQ() * RMat::Identity(b.rows(), r);
  return q;
}

}  // namespace

RealSubspace::RealSubspace(RMat encoded_basis) : basis_(orthonormalize(encoded_basis)) {
  if (encoded_basis.cols() != basis_.cols())
    throw std::invalid_argument("RealSubspace: columns are not R-linearly independent");
  if (basis_.rows() % 2 != 0)
    throw std::invalid_argument("RealSubspace: encoded dimension must be even");
}

RealSubspace RealSubspace::fromComplexColumns(const Mat& columns) {
  RMat enc(2 * columns.rows(), columns.cols());
  for (Eigen::Index c = 0; c < columns.cols(); ++c) enc.col(c) = encode(columns.col(c));
  return RealSubspace(std::move(enc));
}

RVec RealSubspace::encode(const Vec& v) {
  RVec r(2 * v.size());
  r.head(v.size()) = v.real();
  r.tail(v.size()) = v.imag();
  return r;
}

Vec RealSubspace::decode(const RVec& r) {
  const Eigen::Index n = r.size() / 2;
  Vec v(n);
  v.real() = r.head(n);
  v.imag() = r.tail(n);
  return v;
}

RealSubspace RealSubspace::timesI() const {
  const Eigen::Index n = basis_.rows() / 2;
  RMat out(basis_.rows(), basis_.cols());
  out.topRows(n) = -basis_.bottomRows(n);
  out.bottomRows(n) = basis_.topRows(n);
  return RealSubspace(std::move(out));
}

RealSubspace RealSubspace::orthogonalComplement() const {
  const Eigen::Index n = basis_.rows();
  if (dim() == 0) return RealSubspace(RMat::Identity(n, n));
  Eigen::JacobiSVD<RMat> svd(basis_.transpose(), Eigen::ComputeFullV);
  RMat v = svd.matrixV();
  return RealSubspace(v.rightCols(n - dim()));
}

RealSubspace RealSubspace::symplecticComplement() const {
  return timesI().orthogonalComplement();
}

RealSubspace RealSubspace::mapLinear(const Mat& m) const {
  RMat out(basis_.rows(), basis_.cols());
  for (Eigen::Index c = 0; c < basis_.cols(); ++c)
    out.col(c) = encode(m * decode(basis_.col(c)));
  return RealSubspace(std::move(out));
}

RealSubspace RealSubspace::mapConjLinear(const ConjLinearMap& t) const {
  RMat out(basis_.rows(), basis_.cols());
  for (Eigen::Index c = 0; c < basis_.cols(); ++c)
    out.col(c) = encode(t.apply(decode(basis_.col(c))));
  return RealSubspace(std::move(out));
}

Eigen::Index RealSubspace::intersectionDim(const RealSubspace& a, const RealSubspace& b,
                                           double tol) {
  if (a.dim() == 0 || b.dim() == 0) return 0;
  // dim(A cap B) = dim A + dim B - rank([A B]).
  RMat joint(a.basis_.rows(), a.dim() + b.dim());
  joint.leftCols(a.dim()) = a.basis_;
  joint.rightCols(b.dim()) = b.basis_;
  Eigen::JacobiSVD<RMat> svd(joint);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++rank;
  return a.dim() + b.dim() - rank;
}

double RealSubspace::distance(const RealSubspace& a, const RealSubspace& b) {
  RMat pa = a.basis_ * a.basis_.transpose();
  RMat pb = b.basis_ * b.basis_.transpose();
  Eigen::JacobiSVD<RMat> svd(pa - pb);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()[0];
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : state_(seed ^ fnv1a(label)) {
  // warm up the mixer so nearby seeds decorrelate
  for (int i = 0; i < 4; ++i) splitmix64(state_);
}

std::uint64_t RngStream::next() { return splitmix64(state_); }

double RngStream::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double RngStream::gauss() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

cxd RngStream::complexGauss() {
  return cxd(gauss(), gauss()) / std::sqrt(2.0);
}

Vec RngStream::complexGaussVector(Eigen::Index n, double scale) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * complexGauss();
  return v;
}

Mat RngStream::complexGaussMatrix(Eigen::Index r, Eigen::Index c, double scale) {
  Mat m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = scale * complexGauss();
  return m;
}

double logLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("logLogSlope: need >= 2 samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int effectiveThreadCount() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("QFSC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < hw) hw = cap;
  }
  return hw;
}

void parallelFor(Eigen::Index n, const std::function<void(Eigen::Index)>& body) {
  const int threads = effectiveThreadCount();
  if (threads <= 1 || n < 2 * threads) {
    for (Eigen::Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<Eigen::Index> counter{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const Eigen::Index i = counter.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qfsc
