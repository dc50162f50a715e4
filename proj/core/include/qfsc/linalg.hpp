#ifndef QFSC_LINALG_HPP
#define QFSC_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qfsc {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cxd kI{0.0, 1.0};

/// Inner product, linear in the second argument.
inline cxd inner(const Vec& a, const Vec& b) { return a.dot(b); }

inline double symplecticForm(const Vec& a, const Vec& b) {
  return inner(a, b).imag();
}

/// A conjugate-linear operator stored through its kernel matrix:
/// v |-> kernel * conj(v).
///
/// With inner products linear in the second argument, the adjoint defined
/// by <T*x, u> = <Tu, x> has kernel equal to the plain transpose, and the
/// composition of two conjugate-linear maps is linear with matrix
/// A1 * conj(A2).
class ConjLinearMap {
 public:
  ConjLinearMap() = default;
  explicit ConjLinearMap(Mat kernel) : kernel_(std::move(kernel)) {}

  /// Entrywise conjugation in the standard basis.
  static ConjLinearMap conjugation(Eigen::Index n) {
    return ConjLinearMap(Mat::Identity(n, n));
  }

  /// Sum-flip composed with conjugation on C^{2d}: (x, y) |-> (conj y, conj x).
  static ConjLinearMap flipConjugation(Eigen::Index two_d) {
    if (two_d % 2 != 0) throw std::invalid_argument("flipConjugation: odd dim");
    const Eigen::Index d = two_d / 2;
    Mat k = Mat::Zero(two_d, two_d);
    k.topRightCorner(d, d) = Mat::Identity(d, d);
    k.bottomLeftCorner(d, d) = Mat::Identity(d, d);
    return ConjLinearMap(std::move(k));
  }

  const Mat& kernel() const { return kernel_; }
  Eigen::Index rows() const { return kernel_.rows(); }
  Eigen::Index cols() const { return kernel_.cols(); }

  Vec apply(const Vec& v) const { return kernel_ * v.conjugate(); }

  ConjLinearMap adjoint() const {
    return ConjLinearMap(kernel_.transpose());
  }

  /// this o other, both conjugate-linear: the result is linear.
  Mat composeConj(const ConjLinearMap& other) const {
    return kernel_ * other.kernel_.conjugate();
  }

  /// this o m for a linear m: conjugate-linear with kernel A * conj(m).
  ConjLinearMap composeLinearRight(const Mat& m) const {
    return ConjLinearMap(kernel_ * m.conjugate());
  }

  /// m o this for a linear m: conjugate-linear with kernel m * A.
  ConjLinearMap composeLinearLeft(const Mat& m) const {
    return ConjLinearMap(m * kernel_);
  }

  bool isAntiunitary(double tol = 1e-12) const {
    Mat should_be_id = kernel_.adjoint() * kernel_;
    return (should_be_id - Mat::Identity(rows(), cols())).cwiseAbs().maxCoeff() <= tol;
  }

  /// Involution check: T o T = identity.
  bool isInvolution(double tol = 1e-12) const {
    Mat sq = composeConj(*this);
    return (sq - Mat::Identity(rows(), cols())).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  Mat kernel_;
};

/// f(H) for Hermitian H through its eigendecomposition.
Mat hermitianFunction(const Mat& h, double (*f)(double));

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Throws if an eigenvalue is below -tol; clamps tiny negatives to zero.
Mat sqrtPsd(const Mat& h, double tol = 1e-12);

Mat coshHermitian(const Mat& h);
Mat sinhHermitian(const Mat& h);

bool isHermitian(const Mat& h, double tol = 1e-12);
double minHermitianEigenvalue(const Mat& h);

/// Polar data of an invertible conjugate-linear map s = j delta^{1/2}:
/// delta = s* s is linear positive, j is antiunitary conjugate-linear.
struct ConjLinearPolar {
  Mat delta;        // linear, positive
  Mat delta_half;   // principal square root
  ConjLinearMap j;  // antiunitary part
};
ConjLinearPolar polarDecompose(const ConjLinearMap& s, double tol = 1e-10);

/// Real subspace of C^n encoded by (Re, Im)-stacked real 2n-vectors.
/// Columns of basis() span the subspace over R.
class RealSubspace {
 public:
  RealSubspace() = default;
  /// Columns are real-linearly independent spanning vectors (encoded).
  explicit RealSubspace(RMat encoded_basis);

  /// Encode complex columns as a real subspace.
  static RealSubspace fromComplexColumns(const Mat& columns);

  static RVec encode(const Vec& v);
  static Vec decode(const RVec& r);

  const RMat& basis() const { return basis_; }     // orthonormal columns
  Eigen::Index dim() const { return basis_.cols(); }
  Eigen::Index ambientComplexDim() const { return basis_.rows() / 2; }

  /// Multiplication by i on the encoded vectors: (Re, Im) -> (-Im, Re).
  RealSubspace timesI() const;

  /// Real-orthogonal complement w.r.t. Re<.,.>.
  RealSubspace orthogonalComplement() const;

  /// Symplectic complement H^{sigma perp} = (iH)^{Re perp}.
  RealSubspace symplecticComplement() const;

  /// Image under a linear map on the ambient complex space.
  RealSubspace mapLinear(const Mat& m) const;
  /// Image under a conjugate-linear map on the ambient complex space.
  RealSubspace mapConjLinear(const ConjLinearMap& t) const;

  /// dim_R of the intersection, with singular values thresholded at tol.
  static Eigen::Index intersectionDim(const RealSubspace& a, const RealSubspace& b,
                                      double tol = 1e-9);

  /// Operator-norm distance between the orthogonal projections.
  static double distance(const RealSubspace& a, const RealSubspace& b);

 private:
  RMat basis_;  // orthonormal
};

/// Deterministic random stream: splitmix-mixed seed/label, Box-Muller
/// normals on top of mt19937_64 uniforms. Fully specified arithmetic, so
/// output is reproducible across platforms.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label);

  double uniform();      // [0,1)
  double gauss();        // standard normal
  cxd complexGauss();    // E|z|^2 = 1
  Vec complexGaussVector(Eigen::Index n, double scale = 1.0);
  Mat complexGaussMatrix(Eigen::Index r, Eigen::Index c, double scale = 1.0);
  std::uint64_t next();  // raw 64-bit word

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Least-squares slope of log(y) against log(x).
double logLogSlope(const std::vector<double>& x, const std::vector<double>& y);

/// Parallel loop helper; thread count is capped by the QFSC_THREADS
/// environment variable when set.
void parallelFor(Eigen::Index n, const std::function<void(Eigen::Index)>& body);
int effectiveThreadCount();

}  // namespace qfsc

#endif
