#include "qfsc/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace qfsc {

namespace {

std::string occKey(const FockSpace::Occupation& occ) {
  return std::string(reinterpret_cast<const char*>(occ.data()), occ.size());
}

void enumerate(int modes, int remaining, FockSpace::Occupation& current,
               std::vector<FockSpace::Occupation>& out) {
  const int pos = static_cast<int>(current.size());
  if (pos == modes - 1) {
    current.push_back(static_cast<std::uint8_t>(remaining));
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    current.push_back(static_cast<std::uint8_t>(k));
    enumerate(modes, remaining - k, current, out);
    current.pop_back();
  }
}

}  // namespace

FockSpace::FockSpace(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  if (modes < 1 || cutoff < 0) throw std::invalid_argument("FockSpace: bad shape");
  for (int k = 0; k <= cutoff; ++k) {
    Occupation scratch;
    scratch.reserve(modes);
    enumerate(modes, k, scratch, basis_);
  }
  index_.reserve(basis_.size() * 2);
  totals_.resize(basis_.size());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    index_.emplace(occKey(basis_[i]), i);
    int t = 0;
    for (auto n : basis_[i]) t += n;
    totals_[i] = t;
  }
  raise_.assign(dim() * modes_, -1);
  lower_.assign(dim() * modes_, -1);
  Occupation tmp;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    for (int a = 0; a < modes_; ++a) {
      if (totals_[i] < cutoff_) {
        tmp = basis_[i];
        ++tmp[a];
        raise_[i * modes_ + a] = indexOf(tmp);
      }
      if (basis_[i][a] > 0) {
        tmp = basis_[i];
        --tmp[a];
        lower_[i * modes_ + a] = indexOf(tmp);
      }
    }
  }
  sqrt_table_.resize(cutoff_ + 2);
  for (int n = 0; n <= cutoff_ + 1; ++n) sqrt_table_[n] = std::sqrt(static_cast<double>(n));
}

Eigen::Index FockSpace::indexOf(const Occupation& occ) const {
  auto it = index_.find(occKey(occ));
  return it == index_.end() ? -1 : it->second;
}

Vec FockSpace::vacuum() const {
  Vec v = Vec::Zero(dim());
  v[0] = 1.0;
  return v;
}

Vec FockSpace::expVector(const Vec& u) const {
  if (u.size() != modes_) throw std::invalid_argument("expVector: mode mismatch");
  Vec out(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    cxd c = 1.0;
    for (int a = 0; a < modes_; ++a) {
      const int n = basis_[i][a];
      for (int k = 1; k <= n; ++k) c *= u[a] / sqrt_table_[k];
    }
    out[i] = c;
  }
  return out;
}

Vec FockSpace::normalizedExpVector(const Vec& u) const {
  return std::exp(-0.5 * u.squaredNorm()) * expVector(u);
}

Vec FockSpace::applyCreationMode(int mode, const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (v[i] == 0.0) continue;
    const Eigen::Index up = raise_[i * modes_ + mode];
    if (up >= 0) out[up] += sqrt_table_[basis_[i][mode] + 1] * v[i];
  }
  return out;
}

Vec FockSpace::applyAnnihilationMode(int mode, const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (v[i] == 0.0) continue;
    const Eigen::Index down = lower_[i * modes_ + mode];
    if (down >= 0) out[down] += sqrt_table_[basis_[i][mode]] * v[i];
  }
  return out;
}

Vec FockSpace::applyCreation(const Vec& u, const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const cxd c = v[i];
    if (c == 0.0) continue;
    const Eigen::Index base = i * modes_;
    for (int a = 0; a < modes_; ++a) {
      if (u[a] == 0.0) continue;
      const Eigen::Index up = raise_[base + a];
      if (up >= 0) out[up] += u[a] * sqrt_table_[basis_[i][a] + 1] * c;
    }
  }
  return out;
}

Vec FockSpace::applyAnnihilation(const Vec& u, const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const cxd c = v[i];
    if (c == 0.0) continue;
    const Eigen::Index base = i * modes_;
    for (int a = 0; a < modes_; ++a) {
      if (u[a] == 0.0) continue;
      const Eigen::Index down = lower_[base + a];
      if (down >= 0) out[down] += std::conj(u[a]) * sqrt_table_[basis_[i][a]] * c;
    }
  }
  return out;
}

Vec FockSpace::applyWeylGenerator(const Vec& u, const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const cxd c = v[i];
    if (c == 0.0) continue;
    const Eigen::Index base = i * modes_;
    for (int a = 0; a < modes_; ++a) {
      if (u[a] == 0.0) continue;
      const Eigen::Index up = raise_[base + a];
      if (up >= 0) out[up] += u[a] * sqrt_table_[basis_[i][a] + 1] * c;
      const Eigen::Index down = lower_[base + a];
      if (down >= 0) out[down] -= std::conj(u[a]) * sqrt_table_[basis_[i][a]] * c;
    }
  }
  return out;
}

Mat FockSpace::creationMatrix(const Vec& u) const {
  Mat out = Mat::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < dim(); ++i)
    for (int a = 0; a < modes_; ++a) {
      if (u[a] == 0.0) continue;
      const Eigen::Index up = raise_[i * modes_ + a];
      if (up >= 0) out(up, i) += u[a] * sqrt_table_[basis_[i][a] + 1];
    }
  return out;
}

Mat FockSpace::annihilationMatrix(const Vec& u) const {
  Mat out = Mat::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < dim(); ++i)
    for (int a = 0; a < modes_; ++a) {
      if (u[a] == 0.0) continue;
      const Eigen::Index down = lower_[i * modes_ + a];
      if (down >= 0) out(down, i) += std::conj(u[a]) * sqrt_table_[basis_[i][a]];
    }
  return out;
}

Mat FockSpace::numberMatrix() const {
  Mat out = Mat::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < dim(); ++i) out(i, i) = totals_[i];
  return out;
}

Vec FockSpace::weylApply(const Vec& u, const Vec& v) const {
  // exp(G) v with G anti-Hermitian; scale so the Taylor series of each
  // factor converges fast, then iterate the factor.
  const double norm_est = 2.0 * u.norm() * sqrt_table_[cutoff_] + 1e-30;
  int halvings = 0;
  double scale = 1.0;
  while (norm_est * scale > 1.0 && halvings < 40) {
    scale *= 0.5;
    ++halvings;
  }
  const Vec u_scaled = scale * u;
  Vec result = v;
  const long reps = 1L << halvings;
  for (long r = 0; r < reps; ++r) {
    Vec term = result;
    Vec acc = result;
    for (int k = 1; k <= 60; ++k) {
      term = applyWeylGenerator(u_scaled, term) / static_cast<double>(k);
      acc += term;
      if (term.norm() <= 1e-17 * (acc.norm() + 1e-300)) break;
    }
    result = acc;
  }
  return result;
}

FockOperator FockSpace::weylOperator(const Vec& u) const {
  FockOperator op;
  op.conj_linear = false;
  op.m.resize(dim(), dim());
  Mat& m = op.m;
  parallelFor(dim(), [&](Eigen::Index col) {
    Vec e = Vec::Zero(dim());
    e[col] = 1.0;
    m.col(col) = weylApply(u, e);
  });
  return op;
}

Vec FockSpace::gammaColumn(const Mat& kernel, Eigen::Index col) const {
  Vec v = vacuum();
  double norm_factor = 1.0;
  const Occupation& occ = basis_[col];
  for (int a = 0; a < modes_; ++a) {
    const int n = occ[a];
    if (n == 0) continue;
    const Vec image = kernel.col(a);
    for (int k = 1; k <= n; ++k) {
      v = applyCreation(image, v);
      norm_factor *= sqrt_table_[k];
    }
  }
  return v / norm_factor;
}

FockOperator FockSpace::secondQuantize(const Mat& r) const {
  if (r.rows() != modes_ || r.cols() != modes_)
    throw std::invalid_argument("secondQuantize: mode mismatch");
  FockOperator op;
  op.conj_linear = false;
  op.m.resize(dim(), dim());
  Mat& m = op.m;
  parallelFor(dim(), [&](Eigen::Index col) { m.col(col) = gammaColumn(r, col); });
  return op;
}

FockOperator FockSpace::secondQuantize(const ConjLinearMap& r) const {
  if (r.rows() != modes_ || r.cols() != modes_)
    throw std::invalid_argument("secondQuantize: mode mismatch");
  FockOperator op;
  op.conj_linear = true;
  op.m.resize(dim(), dim());
  Mat& m = op.m;
  // On the standard (real) basis vectors the conjugate-linear map acts by
  // its kernel columns, so the same column construction applies.
  parallelFor(dim(), [&](Eigen::Index col) { m.col(col) = gammaColumn(r.kernel(), col); });
  return op;
}

Vec FockSpace::projectModesBelow(int first_excluded, const Vec& v) const {
  Vec out = v;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    for (int a = first_excluded; a < modes_; ++a) {
      if (basis_[i][a] > 0) {
        out[i] = 0.0;
        break;
      }
    }
  }
  return out;
}

FockOperator FockSpace::modeProjection(int first_excluded) const {
  FockOperator op;
  op.conj_linear = false;
  op.m = Mat::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    bool keep = true;
    for (int a = first_excluded; a < modes_; ++a)
      if (basis_[i][a] > 0) {
        keep = false;
        break;
      }
    if (keep) op.m(i, i) = 1.0;
  }
  return op;
}

}  // namespace qfsc
