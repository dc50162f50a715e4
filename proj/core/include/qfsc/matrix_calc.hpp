#ifndef QFSC_MATRIX_CALC_HPP
#define QFSC_MATRIX_CALC_HPP

#include <vector>

#include "qfsc/linalg.hpp"

namespace qfsc {

/// Full matrix algebra M_a tensor I on C^a tensor C^a with the faithful
/// state vector xi = sum_i lambda_i e_i tensor e_i. Tensor index
/// (i, j) -> i*a + j.
struct MatrixModel {
  int a = 2;
  RVec lambda;

  MatrixModel(int size, RVec weights);
  static MatrixModel tracial(int size);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(a) * a; }
  Eigen::Index tensorIndex(int i, int j) const { return static_cast<Eigen::Index>(i) * a + j; }

  Vec xi() const;
  /// X tensor I acting on the doubled space.
  Mat algebraAction(const Mat& x) const;
  /// I tensor Y (the commutant).
  Mat commutantAction(const Mat& y) const;
  bool separating(double tol = 1e-14) const { return lambda.minCoeff() > tol; }
};

/// Tomita-Takesaki data for (M, xi): S(x xi) = x* xi, S = J Delta^{1/2}.
struct ModularData {
  ConjLinearMap s;
  ConjLinearMap j;
  Mat delta;
  Mat delta_half;
};

/// Solves the conjugate-linear system S(x xi) = x* xi over the matrix-unit
/// basis of M, then takes the polar decomposition. Rejects models whose
/// vector is not separating.
ModularData bruteForceModular(const MatrixModel& model);

Vec vectorFromOp(const MatrixModel& model, const Mat& x);
Mat opFromVector(const MatrixModel& model, const Vec& h);

/// Hilbert-Schmidt matrix-space element B: k1 -> k2 tensor H, stored with
/// row index (c, h) = c*dimH + h. Multiplicity conjugations are entrywise.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(int k1, int k2, int h, Mat b);

  static OperatorMatrix simpleTensor(const Mat& a, const Vec& eta, int k1, int k2);

  int k1() const { return k1_; }
  int k2() const { return k2_; }
  int h() const { return h_; }
  const Mat& data() const { return b_; }

  cxd entry(int c2, int hh, int c1) const { return b_(static_cast<Eigen::Index>(c2) * h_ + hh, c1); }

  /// Transpose on the multiplicity legs only; H-leg untouched.
  OperatorMatrix partialTranspose() const;
  /// (k2 tensor S) B k1 -- linear, same shape.
  OperatorMatrix conjugateWith(const ConjLinearMap& s_on_h) const;
  /// dagger = transpose of the conjugate.
  OperatorMatrix daggerWith(const ConjLinearMap& s_on_h) const;

  /// Left module action (X tensor I_H) B for X: k2 -> k3.
  OperatorMatrix leftMultiply(const Mat& x) const;
  /// Right module action B Z for Z: k0 -> k1.
  OperatorMatrix rightMultiply(const Mat& z) const;

  double hsNorm() const { return b_.norm(); }
  OperatorMatrix operator-(const OperatorMatrix& o) const {
    return OperatorMatrix(k1_, k2_, h_, b_ - o.b_);
  }

 private:
  int k1_ = 0, k2_ = 0, h_ = 0;
  Mat b_;
};

/// Independent dagger construction straight from the defining sesquilinear
/// identity <c1 tensor x' xi, B_dagger c2> = <B c1, c2 tensor x'* xi>,
/// solved over the matrix-unit basis of the commutant.
OperatorMatrix daggerFromIdentity(const MatrixModel& model, const OperatorMatrix& b);

/// Block integrand [[0, M], [L, 0]] on (C + k) tensor ..., kept as the pair
/// of matrix-space elements: L a column (k1 = 1), M a row (k2 = 1).
struct BlockIntegrandMatrix {
  OperatorMatrix l;  // k1 = 1, k2 = k
  OperatorMatrix m;  // k1 = k, k2 = 1

  BlockIntegrandMatrix(OperatorMatrix left, OperatorMatrix row);
  int k() const { return l.k2(); }
  int h() const { return l.h(); }
};

/// Column transform F^[] = [C; R^T]: a column over k + k.
OperatorMatrix columnTransform(const BlockIntegrandMatrix& f);

/// Column of the adjoint block [M^dagger; L^{T dagger}].
OperatorMatrix columnTransformDagger(const BlockIntegrandMatrix& f, const ConjLinearMap& s_on_h);

/// (k^pi tensor S) applied to a vector in (k + k) tensor H.
Vec kPiTensorS(const ConjLinearMap& s_on_h, int k, const Vec& v);

}  // namespace qfsc

#endif
