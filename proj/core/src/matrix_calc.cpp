#include "qfsc/matrix_calc.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace qfsc {

MatrixModel::MatrixModel(int size, RVec weights) : a(size), lambda(std::move(weights)) {
  if (a < 1 || lambda.size() != a)
    throw std::invalid_argument("MatrixModel: need one weight per basis vector");
  if (std::abs(lambda.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("MatrixModel: weights must satisfy sum lambda^2 = 1");
}

MatrixModel MatrixModel::tracial(int size) {
  RVec w = RVec::Constant(size, 1.0 / std::sqrt(static_cast<double>(size)));
  return MatrixModel(size, std::move(w));
}

Vec MatrixModel::xi() const {
  Vec v = Vec::Zero(dim());
  for (int i = 0; i < a; ++i) v[tensorIndex(i, i)] = lambda[i];
  return v;
}

Mat MatrixModel::algebraAction(const Mat& x) const {
  Mat out = Mat::Zero(dim(), dim());
  for (int i = 0; i < a; ++i)
    for (int k = 0; k < a; ++k)
      for (int j = 0; j < a; ++j) out(tensorIndex(i, j), tensorIndex(k, j)) = x(i, k);
  return out;
}

Mat MatrixModel::commutantAction(const Mat& y) const {
  Mat out = Mat::Zero(dim(), dim());
  for (int j = 0; j < a; ++j)
    for (int l = 0; l < a; ++l)
      for (int i = 0; i < a; ++i) out(tensorIndex(i, j), tensorIndex(i, l)) = y(j, l);
  return out;
}

ModularData bruteForceModular(const MatrixModel& model) {
  if (!model.separating())
    throw std::invalid_argument("bruteForceModular: zero weight, xi is not separating");
  const Eigen::Index n = model.dim();
  const Vec xi = model.xi();
  // Columns: conj(E_ij xi) and targets E_ji xi over the matrix-unit basis.
  Mat domain(n, n), target(n, n);
  Eigen::Index col = 0;
  for (int i = 0; i < model.a; ++i)
    for (int j = 0; j < model.a; ++j, ++col) {
      Mat e = Mat::Zero(model.a, model.a);
      e(i, j) = 1.0;
      domain.col(col) = (model.algebraAction(e) * xi).conjugate();
      e.setZero();
      e(j, i) = 1.0;  // (E_ij)* = E_ji
      target.col(col) = model.algebraAction(e) * xi;
    }
  // S kernel A solves A * domain = target.
  Eigen::FullPivLU<Mat> lu(domain.transpose());
  if (!lu.isInvertible())
    throw std::runtime_error("bruteForceModular: basis vectors do not span (xi not cyclic)");
  Mat a_kernel = lu.solve(target.transpose()).transpose();
  ConjLinearMap s(std::move(a_kernel));
  ConjLinearPolar polar = polarDecompose(s);
  return ModularData{s, polar.j, polar.delta, polar.delta_half};
}

Vec vectorFromOp(const MatrixModel& model, const Mat& x) {
  return model.algebraAction(x) * model.xi();
}

Mat opFromVector(const MatrixModel& model, const Vec& h) {
  if (!model.separating())
    throw std::invalid_argument("opFromVector: zero weight, the correspondence is singular");
  Mat x(model.a, model.a);
  for (int i = 0; i < model.a; ++i)
    for (int k = 0; k < model.a; ++k) x(i, k) = h[model.tensorIndex(i, k)] / model.lambda[k];
  return x;
}

OperatorMatrix::OperatorMatrix(int k1, int k2, int h, Mat b)
    : k1_(k1), k2_(k2), h_(h), b_(std::move(b)) {
  if (b_.rows() != static_cast<Eigen::Index>(k2) * h || b_.cols() != k1)
    throw std::invalid_argument("OperatorMatrix: shape mismatch");
}

OperatorMatrix OperatorMatrix::simpleTensor(const Mat& a, const Vec& eta, int k1, int k2) {
  if (a.rows() != k2 || a.cols() != k1)
    throw std::invalid_argument("simpleTensor: multiplicity shape mismatch");
  const int h = static_cast<int>(eta.size());
  Mat b(static_cast<Eigen::Index>(k2) * h, k1);
  for (int c2 = 0; c2 < k2; ++c2)
    for (int c1 = 0; c1 < k1; ++c1) b.block(static_cast<Eigen::Index>(c2) * h, c1, h, 1) = a(c2, c1) * eta;
  return OperatorMatrix(k1, k2, h, std::move(b));
}

OperatorMatrix OperatorMatrix::partialTranspose() const {
  Mat out(static_cast<Eigen::Index>(k1_) * h_, k2_);
  for (int c1 = 0; c1 < k1_; ++c1)
    for (int c2 = 0; c2 < k2_; ++c2)
      for (int hh = 0; hh < h_; ++hh)
        out(static_cast<Eigen::Index>(c1) * h_ + hh, c2) = b_(static_cast<Eigen::Index>(c2) * h_ + hh, c1);
  return OperatorMatrix(k2_, k1_, h_, std::move(out));
}

OperatorMatrix OperatorMatrix::conjugateWith(const ConjLinearMap& s_on_h) const {
  if (s_on_h.rows() != h_)
    throw std::invalid_argument("conjugateWith: S dimension mismatch");
  Mat out(b_.rows(), b_.cols());
  for (int c2 = 0; c2 < k2_; ++c2)
    out.middleRows(static_cast<Eigen::Index>(c2) * h_, h_) =
        s_on_h.kernel() * b_.middleRows(static_cast<Eigen::Index>(c2) * h_, h_).conjugate();
  return OperatorMatrix(k1_, k2_, h_, std::move(out));
}

OperatorMatrix OperatorMatrix::daggerWith(const ConjLinearMap& s_on_h) const {
  return conjugateWith(s_on_h).partialTranspose();
}

OperatorMatrix OperatorMatrix::leftMultiply(const Mat& x) const {
  if (x.cols() != k2_) throw std::invalid_argument("leftMultiply: shape mismatch");
  const int k3 = static_cast<int>(x.rows());
  Mat out = Mat::Zero(static_cast<Eigen::Index>(k3) * h_, k1_);
  for (int c3 = 0; c3 < k3; ++c3)
    for (int c2 = 0; c2 < k2_; ++c2)
      if (x(c3, c2) != 0.0)
        out.middleRows(static_cast<Eigen::Index>(c3) * h_, h_) +=
            x(c3, c2) * b_.middleRows(static_cast<Eigen::Index>(c2) * h_, h_);
  return OperatorMatrix(k1_, k3, h_, std::move(out));
}

OperatorMatrix OperatorMatrix::rightMultiply(const Mat& z) const {
  if (z.rows() != k1_) throw std::invalid_argument("rightMultiply: shape mismatch");
  return OperatorMatrix(static_cast<int>(z.cols()), k2_, h_, Mat(b_ * z));
}

OperatorMatrix daggerFromIdentity(const MatrixModel& model, const OperatorMatrix& b) {
  // B_dagger is determined column by column: for each c2, the vector
  // w in k1 tensor H satisfies <c1 tensor x' xi, w> = <B c1, c2 tensor x'* xi>
  // over the basis {e_{c1} tensor (I tensor E_{kl}) xi}. The Gram matrix of
  // that basis factorizes over legs, so one Gram solve per c2 suffices.
  const int k1 = b.k1(), k2 = b.k2();
  const Eigen::Index h = model.dim();
  if (b.h() != h) throw std::invalid_argument("daggerFromIdentity: ambient mismatch");
  const Vec xi = model.xi();
  std::vector<Vec> commutant_vectors;  // x' xi over matrix units of M'
  std::vector<Vec> commutant_star_vectors;
  commutant_vectors.reserve(model.a * model.a);
  commutant_star_vectors.reserve(model.a * model.a);
  for (int k = 0; k < model.a; ++k)
    for (int l = 0; l < model.a; ++l) {
      Mat e = Mat::Zero(model.a, model.a);
      e(k, l) = 1.0;
      commutant_vectors.push_back(model.commutantAction(e) * xi);
      e.setZero();
      e(l, k) = 1.0;
      commutant_star_vectors.push_back(model.commutantAction(e) * xi);
    }
  const int nb = static_cast<int>(commutant_vectors.size());
  Mat gram(nb, nb);
  for (int r = 0; r < nb; ++r)
    for (int c = 0; c < nb; ++c) gram(r, c) = inner(commutant_vectors[r], commutant_vectors[c]);
  Eigen::FullPivLU<Mat> gram_lu(gram);
  if (!gram_lu.isInvertible())
    throw std::runtime_error("daggerFromIdentity: commutant vectors do not span");

  Mat out(static_cast<Eigen::Index>(k1) * h, k2);
  for (int c2 = 0; c2 < k2; ++c2) {
    for (int c1 = 0; c1 < k1; ++c1) {
      // rhs over the commutant basis: <B e_{c1}, e_{c2} tensor x'* xi>.
      Vec rhs(nb);
      for (int r = 0; r < nb; ++r) {
        cxd acc = 0.0;
        for (Eigen::Index hh = 0; hh < h; ++hh)
          acc += std::conj(b.entry(c2, static_cast<int>(hh), c1)) * commutant_star_vectors[r][hh];
        rhs[r] = acc;
      }
      // <c1 tensor x'_r xi, w> = rhs_r with w = sum_s coeff_s x'_s xi.
      Vec coeff = gram_lu.solve(rhs);
      Vec w = Vec::Zero(h);
      for (int s = 0; s < nb; ++s) w += coeff[s] * commutant_vectors[s];
      out.block(static_cast<Eigen::Index>(c1) * h, c2, h, 1) = w;
    }
  }
  return OperatorMatrix(k2, k1, static_cast<int>(h), std::move(out));
}

BlockIntegrandMatrix::BlockIntegrandMatrix(OperatorMatrix left, OperatorMatrix row)
    : l(std::move(left)), m(std::move(row)) {
  if (l.k1() != 1 || m.k2() != 1 || l.k2() != m.k1() || l.h() != m.h())
    throw std::invalid_argument("BlockIntegrandMatrix: block shapes do not match");
}

OperatorMatrix columnTransform(const BlockIntegrandMatrix& f) {
  const OperatorMatrix mt = f.m.partialTranspose();
  const int k = f.k(), h = f.h();
  Mat out(static_cast<Eigen::Index>(2 * k) * h, 1);
  out.topRows(static_cast<Eigen::Index>(k) * h) = f.l.data();
  out.bottomRows(static_cast<Eigen::Index>(k) * h) = mt.data();
  return OperatorMatrix(1, 2 * k, h, std::move(out));
}

OperatorMatrix columnTransformDagger(const BlockIntegrandMatrix& f,
                                     const ConjLinearMap& s_on_h) {
  const OperatorMatrix m_dagger = f.m.daggerWith(s_on_h);
  const OperatorMatrix l_td = f.l.partialTranspose().daggerWith(s_on_h);
  const int k = f.k(), h = f.h();
  Mat out(static_cast<Eigen::Index>(2 * k) * h, 1);
  out.topRows(static_cast<Eigen::Index>(k) * h) = m_dagger.data();
  out.bottomRows(static_cast<Eigen::Index>(k) * h) = l_td.data();
  return OperatorMatrix(1, 2 * k, h, std::move(out));
}

Vec kPiTensorS(const ConjLinearMap& s_on_h, int k, const Vec& v) {
  const Eigen::Index h = s_on_h.rows();
  if (v.size() != 2 * k * h) throw std::invalid_argument("kPiTensorS: size mismatch");
  Vec out(v.size());
  for (int c = 0; c < 2 * k; ++c) {
    const int src = (c + k) % (2 * k);
    out.segment(static_cast<Eigen::Index>(c) * h, h) =
        s_on_h.kernel() * v.segment(static_cast<Eigen::Index>(src) * h, h).conjugate();
  }
  return out;
}

}  // namespace qfsc
