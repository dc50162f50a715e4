#include "qfsc/checks.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <sstream>

namespace qfsc {

namespace {

std::string fmtParams(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream ss;
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) ss << ", ";
    ss << k << "=" << v;
    first = false;
  }
  return ss.str();
}

CheckRecord devRecord(std::string name, std::string anchor, double dev, double tol,
                      std::string params = {}) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.max_deviation = dev;
  r.tolerance = tol;
  r.pass = dev <= tol;
  r.params = std::move(params);
  return r;
}

/// A witness check passes when the observed magnitude EXCEEDS the bound.
CheckRecord witnessRecord(std::string name, std::string anchor, double value, double bound,
                          std::string params = {}) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.max_deviation = value;
  r.tolerance = bound;
  r.pass = value > bound;
  r.params = std::move(params);
  return r;
}

}  // namespace

Mat randomUnitary(RngStream& rng, int n) {
  const Mat g = rng.complexGaussMatrix(n, n);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  Mat r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const cxd d = r(i, i);
    q.col(i) *= (d == cxd(0.0) ? cxd(1.0) : d / std::abs(d));
  }
  return q;
}

Mat randomHermitianPsd(RngStream& rng, int n, double scale) {
  const Mat g = rng.complexGaussMatrix(n, n, scale);
  return g * g.adjoint() / static_cast<double>(n);
}

AdaptedProcess randomAdaptedProcess(const TimeGrid& grid, const FockSpace& fock,
                                    RngStream& rng, double scale, int max_sector) {
  AdaptedProcess z(grid.bins, Mat::Zero(grid.doubledDim(), fock.dim()));
  for (int j = 0; j < grid.bins; ++j) {
    const int first_future = grid.modeStart(j);
    for (Eigen::Index i = 0; i < fock.dim(); ++i) {
      if (fock.totalParticles(i) > max_sector) continue;
      bool future = false;
      for (int a = first_future; a < fock.modes(); ++a)
        if (fock.occupationAt(i)[a] > 0) {
          future = true;
          break;
        }
      if (future) continue;
      for (int r = 0; r < grid.doubledDim(); ++r) z[j](r, i) = scale * rng.complexGauss();
    }
  }
  return z;
}

AdaptedProcess randomWeylAdaptedProcess(const TimeGrid& grid, const FockSpace& fock,
                                        const PhaseSpaceModel& model, const SigmaMap& sigma,
                                        RngStream& rng, double leg_scale, double arg_norm) {
  AdaptedProcess z(grid.bins, Mat::Zero(grid.doubledDim(), fock.dim()));
  for (int j = 0; j < grid.bins; ++j) {
    Vec f = Vec::Zero(model.totalBaseDim());
    for (int b = 0; b < j; ++b)
      f.segment(b * grid.d, grid.d) = rng.complexGaussVector(grid.d);
    Vec u = sigma.apply(iota(model, f));
    if (u.norm() > 0) u *= arg_norm / u.norm();
    const Vec past = fock.weylApply(u, fock.vacuum());
    const Vec leg = rng.complexGaussVector(grid.doubledDim(), leg_scale);
    z[j] = leg * past.transpose();
  }
  return z;
}

namespace {

struct SuiteContext {
  const Config& cfg;
  PhaseSpaceModel model;
  TimeGrid grid;
  SigmaMap sigma;
  SigmaMap sigma_prime;
  FockSpace fock;

  explicit SuiteContext(const Config& c)
      : cfg(c),
        model(c.phaseModel()),
        grid(c.timeGrid()),
        sigma(c.buildSigma()),
        sigma_prime(c.buildSigmaPrimeMap()),
        fock(c.timeGrid().modes(), c.cutoff) {}

  RngStream rng(const char* label) const { return RngStream(cfg.seed, label); }

  bool squeezing() const {
    return cfg.kind == "squeezed" && cfg.p.cwiseAbs().maxCoeff() > 1e-14;
  }
};

// ---------------------------------------------------------------- phase space

void phaseSpaceChecks(const SuiteContext& ctx, Report& rep) {
  const Config& cfg = ctx.cfg;
  {
    RngStream rng = ctx.rng("phase_space.symplectic");
    const SymplecticReport r = checkSymplectic(ctx.model, ctx.sigma, cfg.trials, rng);
    rep.add(devRecord("phase_space.symplectic", "Im<Si(f),Si(g)> = Im<f,g>", r.max_deviation,
                      r.tolerance, fmtParams({{"trials", double(r.trials)}})));
  }
  {
    RngStream rng = ctx.rng("phase_space.duality_orthogonality");
    const SymplecticReport r =
        checkDualityOrthogonality(ctx.model, ctx.sigma, ctx.sigma_prime, cfg.trials, rng);
    rep.add(devRecord("phase_space.duality_orthogonality", "Im<Si(f),S'i(conj g)> = 0",
                      r.max_deviation, r.tolerance, fmtParams({{"trials", double(r.trials)}})));
  }
  {
    const ConjLinearMap s = sOmega(ctx.sigma);
    const Mat sq = s.composeConj(s);
    const double dev = (sq - Mat::Identity(sq.rows(), sq.cols())).cwiseAbs().maxCoeff();
    rep.add(devRecord("phase_space.s_involution", "s o s = I", dev, 1e-12));
  }
  {
    RngStream rng = ctx.rng("phase_space.s_fixes_h1");
    const ConjLinearMap s = sOmega(ctx.sigma);
    double dev = 0.0;
    for (int i = 0; i < 64; ++i) {
      const Vec f = rng.complexGaussVector(ctx.model.totalBaseDim());
      const Vec h = ctx.sigma.apply(iota(ctx.model, f));
      dev = std::max(dev, (s.apply(h) + h).norm());
    }
    rep.add(devRecord("phase_space.s_fixes_h1", "s(Si(f)) = -Si(f)", dev, 1e-11));
  }
  {
    const ModularOneParticle polar = polarConjLinear(sOmegaFiber(ctx.sigma.block(0)));
    if ((cfg.kind == "gauge" || cfg.kind == "squeezed") &&
        minHermitianEigenvalue(cfg.t_per_bin[0]) > 1e-12) {
      // The squeezed state shares the gauge modular data of the same T.
      const ModularOneParticle closed = gaugeModularClosedForm(cfg.t_per_bin[0]);
      const double dev =
          std::max((polar.delta_half - closed.delta_half).cwiseAbs().maxCoeff(),
                   (polar.j.kernel() - closed.j.kernel()).cwiseAbs().maxCoeff());
      rep.add(devRecord("phase_space.modular_closed_form",
                        "polar(s) = (K^pi, diag(1/sqrt(I+T^-1), conj sqrt(I+T^-1)))", dev,
                        1e-10));
    }
    rep.add(devRecord("phase_space.j_antiunitary", "j* j = I",
                      polar.j.isAntiunitary(1e-12) ? 0.0 : 1.0, 0.5));
  }
  {
    const RealSubspace h1 = subspaceH1(ctx.model, ctx.sigma);
    const RealSubspace h2 = symplecticComplement(h1);
    const ModularOneParticle m = modularFromSigma(ctx.sigma);
    const double dist = RealSubspace::distance(h1.mapConjLinear(m.j), h2);
    rep.add(devRecord("phase_space.j_maps_h1_to_h2", "j H1 = H2", dist, 1e-10));
    const double dc = RealSubspace::distance(h2.symplecticComplement(), h1);
    rep.add(
        devRecord("phase_space.double_complement", "(H1^{s perp})^{s perp} = H1", dc, 1e-10));
    const GenericPositionDims dims = genericPosition(h1, h2);
    rep.add(devRecord("phase_space.generic_position",
                      "H1^H2, H1'^H2, H1^H2', H1'^H2' all trivial",
                      double(dims.h1_and_h2 + dims.h1perp_and_h2 + dims.h1_and_h2perp +
                             dims.h1perp_and_h2perp),
                      0.5));
  }
  {
    Mat cols(ctx.model.totalDim(), 2 * ctx.model.totalBaseDim());
    for (int a = 0; a < ctx.model.totalBaseDim(); ++a) {
      Vec e = Vec::Zero(ctx.model.totalBaseDim());
      e[a] = 1.0;
      cols.col(2 * a) = iota(ctx.model, e);
      e[a] = kI;
      cols.col(2 * a + 1) = iota(ctx.model, e);
    }
    Eigen::JacobiSVD<Mat> svd(cols);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-9) ++rank;
    rep.add(devRecord("phase_space.iota_complex_span", "Lin_C iota(C^d) = C^{2d}",
                      double(ctx.model.totalDim() - rank), 0.5));
  }
}

// ----------------------------------------------------------------------- fock

void fockChecks(const SuiteContext& ctx, Report& rep) {
  const FockSpace& fock = ctx.fock;
  const double arg_norm = 0.25;
  {
    RngStream rng = ctx.rng("fock.weyl_action");
    double dev = 0.0;
    for (int i = 0; i < 8; ++i) {
      Vec u = rng.complexGaussVector(fock.modes());
      Vec v = rng.complexGaussVector(fock.modes());
      u *= arg_norm / u.norm();
      v *= arg_norm / v.norm();
      const Vec lhs = fock.weylApply(u, fock.normalizedExpVector(v));
      const Vec rhs =
          std::exp(-kI * symplecticForm(u, v)) * fock.normalizedExpVector(u + v);
      dev = std::max(dev, (lhs - rhs).norm());
    }
    rep.add(devRecord("fock.weyl_action", "W0(u) phi(v) = e^{-i Im<u,v>} phi(u+v)", dev, 1e-8,
                      fmtParams({{"arg_norm", arg_norm}, {"cutoff", double(fock.cutoff())}})));
  }
  {
    RngStream rng = ctx.rng("fock.weyl_ccr");
    double dev = 0.0;
    for (int i = 0; i < 6; ++i) {
      Vec u = rng.complexGaussVector(fock.modes());
      Vec v = rng.complexGaussVector(fock.modes());
      Vec w = rng.complexGaussVector(fock.modes());
      u *= arg_norm / u.norm();
      v *= arg_norm / v.norm();
      w *= arg_norm / w.norm();
      const Vec phi_w = fock.normalizedExpVector(w);
      const Vec lhs = fock.weylApply(u, fock.weylApply(v, phi_w));
      const Vec rhs = std::exp(-kI * symplecticForm(u, v)) * fock.weylApply(u + v, phi_w);
      dev = std::max(dev, (lhs - rhs).norm());
    }
    rep.add(devRecord("fock.weyl_ccr", "W(u)W(v) = e^{-i Im<u,v>} W(u+v)", dev, 1e-8));
  }
  {
    RngStream rng = ctx.rng("fock.gamma_functorial");
    const Mat r = rng.complexGaussMatrix(fock.modes(), fock.modes());
    Mat c = rng.complexGaussMatrix(fock.modes(), fock.modes());
    Eigen::JacobiSVD<Mat> svd(c);
    c /= (svd.singularValues()[0] * 1.01);  // contraction
    const FockOperator gr = fock.secondQuantize(r);
    const FockOperator gc = fock.secondQuantize(c);
    const FockOperator grc = fock.secondQuantize(Mat(r * c));
    const double dev = (grc.m - gr.compose(gc).m).cwiseAbs().maxCoeff();
    rep.add(devRecord("fock.gamma_functorial", "Gamma(RC) = Gamma(R)Gamma(C), |C| <= 1", dev,
                      1e-12));
  }
  {
    RngStream rng = ctx.rng("fock.gamma_adjoint");
    const Mat sM = rng.complexGaussMatrix(fock.modes(), fock.modes());
    const FockOperator g = fock.secondQuantize(sM);
    const FockOperator g_star = fock.secondQuantize(Mat(sM.adjoint()));
    const double dev = (g.adjointOp().m - g_star.m).cwiseAbs().maxCoeff();
    rep.add(devRecord("fock.gamma_adjoint", "Gamma(S)* = Gamma(S*)", dev, 1e-12));
  }
  {
    // Modular operator on Weyl vectors: S W(f) Omega = W(-f) Omega.
    RngStream rng = ctx.rng("fock.modular_s_weyl");
    const FockOperator s_fock = fock.secondQuantize(sOmega(ctx.sigma));
    double dev = 0.0;
    for (int i = 0; i < 6; ++i) {
      Vec f = rng.complexGaussVector(ctx.model.totalBaseDim());
      Vec u = ctx.sigma.apply(iota(ctx.model, f));
      u *= arg_norm / u.norm();
      const Vec lhs = s_fock.apply(fock.weylApply(u, fock.vacuum()));
      const Vec rhs = fock.weylApply(-u, fock.vacuum());
      dev = std::max(dev, (lhs - rhs).norm());
    }
    rep.add(devRecord("fock.modular_s_weyl", "S W(f)Omega = W(-f)Omega", dev, 1e-7));
  }
  {
    const FockOperator s_fock = fock.secondQuantize(sOmega(ctx.sigma));
    const Mat sq = s_fock.compose(s_fock).m;
    const double dev = (sq - Mat::Identity(sq.rows(), sq.cols())).cwiseAbs().maxCoeff();
    rep.add(devRecord("fock.modular_s_squared", "S^2 = I on the truncation", dev, 1e-10));
  }
  {
    // Gamma of the bin projections: orthogonal projections, increasing.
    double dev = 0.0;
    Mat prev;
    for (int j = 0; j <= ctx.grid.bins; ++j) {
      const Mat p = fock.modeProjection(ctx.grid.modeStart(j) > fock.modes()
                                            ? fock.modes()
                                            : ctx.grid.modeStart(j))
                        .m;
      dev = std::max(dev, (p * p - p).cwiseAbs().maxCoeff());
      dev = std::max(dev, (p - p.adjoint()).cwiseAbs().maxCoeff());
      if (j > 0) dev = std::max(dev, (prev * p - prev).cwiseAbs().maxCoeff());
      prev = p;
    }
    rep.add(devRecord("fock.projection_family", "Gamma(p_j) projections, increasing in j",
                      dev, 1e-12));
  }
  {
    RngStream rng = ctx.rng("fock.char_function");
    double dev = 0.0;
    for (int i = 0; i < 6; ++i) {
      Vec f = rng.complexGaussVector(ctx.model.totalBaseDim());
      Vec u = ctx.sigma.apply(iota(ctx.model, f));
      u *= arg_norm / u.norm();
      const cxd val = fock.weylApply(u, fock.vacuum())[0];
      const cxd expect = std::exp(cxd(-0.5 * u.squaredNorm(), 0.0));
      dev = std::max(dev, std::abs(val - expect));
    }
    rep.add(devRecord("fock.char_function", "<Omega, W0(Si f)Omega> = e^{-|Si f|^2/2}", dev,
                      1e-10));
  }
}

// -------------------------------------------------------------------- adapted

void adaptedChecks(const SuiteContext& ctx, Report& rep) {
  const FockSpace& fock = ctx.fock;
  const TimeGrid& grid = ctx.grid;
  {
    RngStream rng = ctx.rng("adapted.ito_isometry");
    double dev = 0.0;
    for (int i = 0; i < 16; ++i) {
      const AdaptedProcess z =
          randomAdaptedProcess(grid, fock, rng, 1.0, fock.cutoff() - 1);
      double sum = 0.0;
      for (const Mat& e : z) sum += e.squaredNorm();
      dev = std::max(dev, std::abs(ito(grid, fock, z).squaredNorm() - sum) /
                              std::max(1.0, sum));
      }
    rep.add(devRecord("adapted.ito_isometry", "|I(z)|^2 = sum_j |z_j|^2", dev, 1e-12));
  }
  {
    RngStream rng = ctx.rng("adapted.ito_sigma_isometry");
    double dev = 0.0;
    for (int i = 0; i < 16; ++i) {
      const AdaptedProcess z =
          randomAdaptedProcess(grid, fock, rng, 1.0, fock.cutoff() - 1);
      for (int t = 0; t <= grid.bins; ++t) {
        double sum = 0.0;
        for (int j = 0; j < t; ++j) sum += (ctx.sigma.block(j) * z[j]).squaredNorm();
        dev = std::max(dev, std::abs(itoSigma(grid, fock, z, ctx.sigma, t).squaredNorm() - sum) /
                                std::max(1.0, sum));
      }
    }
    rep.add(devRecord("adapted.ito_sigma_isometry",
                      "|I^S_t z|^2 = sum_{j<t} |(S_j x I) z_j|^2", dev, 1e-12));
  }
  {
    RngStream rng = ctx.rng("adapted.gradient_section");
    double dev = 0.0;
    for (int i = 0; i < 8; ++i) {
      const AdaptedProcess z =
          randomAdaptedProcess(grid, fock, rng, 1.0, fock.cutoff() - 1);
      const AdaptedProcess back = adaptedGradient(grid, fock, ito(grid, fock, z));
      for (int j = 0; j < grid.bins; ++j) dev = std::max(dev, (back[j] - z[j]).norm());
    }
    rep.add(devRecord("adapted.gradient_section", "D I = id on adapted processes", dev, 1e-12));
  }
  {
    // D P_t = M_t D: gradient of the projected vector equals the truncated
    // gradient process.
    RngStream rng = ctx.rng("adapted.dp_md");
    double dev = 0.0;
    for (int i = 0; i < 8; ++i) {
      const Vec x = rng.complexGaussVector(fock.dim());
      const AdaptedProcess dx = adaptedGradient(grid, fock, x);
      for (int t = 0; t <= grid.bins; ++t) {
        const AdaptedProcess dpt = adaptedGradient(grid, fock, projectPt(grid, fock, t, x));
        for (int j = 0; j < grid.bins; ++j) {
          const Mat expect = j < t ? dx[j] : Mat(Mat::Zero(dx[j].rows(), dx[j].cols()));
          dev = std::max(dev, (dpt[j] - expect).cwiseAbs().maxCoeff());
        }
      }
    }
    rep.add(devRecord("adapted.dp_equals_md", "D P_t = M_t^O D", dev, 1e-12));
  }
  {
    double dev = 0.0;
    for (int j = 0; j <= grid.bins; ++j)
      for (int k = 0; k <= grid.bins; ++k) {
        RngStream rng = ctx.rng("adapted.projection_semigroup");
        const Vec x = rng.complexGaussVector(fock.dim());
        const Vec lhs = projectPt(grid, fock, j, projectPt(grid, fock, k, x));
        const Vec rhs = projectPt(grid, fock, std::min(j, k), x);
        dev = std::max(dev, (lhs - rhs).norm());
      }
    rep.add(devRecord("adapted.projection_semigroup", "P_j P_k = P_min(j,k)", dev, 1e-14));
  }
  {
    // Block-diagonal fiber maps commute with every P_j on adapted data.
    RngStream rng = ctx.rng("adapted.pointwise_affiliation");
    const FockOperator gs = fock.secondQuantize(sOmega(ctx.sigma));
    double dev = 0.0;
    for (int j = 0; j <= grid.bins; ++j) {
      const Vec x = rng.complexGaussVector(fock.dim());
      const Vec lhs = projectPt(grid, fock, j, gs.apply(x));
      const Vec rhs = gs.apply(projectPt(grid, fock, j, x));
      dev = std::max(dev, (lhs - rhs).norm());
    }
    rep.add(devRecord("adapted.pointwise_affiliation",
                      "Gamma(block map) commutes with every P_j", dev, 1e-10));
  }
  {
    RngStream rng = ctx.rng("adapted.modular_ito_commutation");
    std::vector<AdaptedProcess> samples;
    for (int i = 0; i < 4; ++i)
      samples.push_back(
          randomWeylAdaptedProcess(grid, fock, ctx.model, ctx.sigma, rng, 1.0, 0.25));
    const DeviationReport r =
        modularItoCommutationCheck(grid, fock, ctx.sigma, samples, ctx.cfg.tol_truncated);
    rep.add(devRecord("adapted.modular_ito_commutation", "S I(z) = I((s x_O S) z)",
                      r.max_deviation, r.tolerance,
                      fmtParams({{"samples", double(samples.size())}})));
  }
}

// ---------------------------------------------------------------- matrix model

void matrixCalcChecks(const SuiteContext& ctx, Report& rep) {
  {
    RVec lam(2);
    lam << std::sqrt(0.8), std::sqrt(0.2);
    const MatrixModel model(2, lam);
    const ModularData md = bruteForceModular(model);
    Eigen::SelfAdjointEigenSolver<Mat> es(md.delta);
    RVec expected(4);
    expected << 0.25, 1.0, 1.0, 4.0;
    const double spec_dev = (es.eigenvalues() - expected).cwiseAbs().maxCoeff();
    rep.add(devRecord("matrix_calc.tomita_spectrum", "spec(Delta) = {4, 1, 1, 1/4}", spec_dev,
                      1e-10, "a=2, lambda=(sqrt0.8, sqrt0.2)"));
    double dev = 0.0;
    for (int i = 0; i < model.a; ++i)
      for (int j = 0; j < model.a; ++j) {
        Mat e = Mat::Zero(model.a, model.a);
        e(i, j) = 1.0;
        const Vec lhs = md.s.apply(vectorFromOp(model, e));
        const Vec rhs = vectorFromOp(model, Mat(e.adjoint()));
        dev = std::max(dev, (lhs - rhs).norm());
      }
    rep.add(devRecord("matrix_calc.tomita_action", "S(x xi) = x* xi on a basis", dev, 1e-12));
    const Mat jdj = md.j.composeConj(ConjLinearMap(Mat(md.delta * md.j.kernel())));
    const double jdj_dev =
        (jdj - md.delta.fullPivLu().inverse()).cwiseAbs().maxCoeff();
    rep.add(devRecord("matrix_calc.jdj", "J Delta J = Delta^{-1}", jdj_dev, 1e-10));
  }
  {
    const MatrixModel model = MatrixModel::tracial(2);
    const ModularData md = bruteForceModular(model);
    const double dev =
        (md.delta - Mat::Identity(model.dim(), model.dim())).cwiseAbs().maxCoeff();
    rep.add(devRecord("matrix_calc.tracial_delta", "tracial xi: Delta = I, S = J", dev, 1e-12));
  }
  {
    RngStream rng = ctx.rng("matrix_calc.op_vector");
    RVec lam(2);
    lam << std::sqrt(0.7), std::sqrt(0.3);
    const MatrixModel model(2, lam);
    double dev = 0.0;
    for (int i = 0; i < 16; ++i) {
      const Mat x = rng.complexGaussMatrix(model.a, model.a);
      dev = std::max(dev,
                     (opFromVector(model, vectorFromOp(model, x)) - x).cwiseAbs().maxCoeff());
    }
    rep.add(devRecord("matrix_calc.op_vector_roundtrip", "op(vec(X)) = X", dev, 1e-12));
  }
  {
    RngStream rng = ctx.rng("matrix_calc.transpose_dagger");
    RVec lam(2);
    lam << std::sqrt(0.8), std::sqrt(0.2);
    const MatrixModel model(2, lam);
    const ModularData md = bruteForceModular(model);
    const int k1 = 2, k2 = 3;
    double dev = 0.0;
    for (int i = 0; i < 24; ++i) {
      const OperatorMatrix b(k1, k2, static_cast<int>(model.dim()),
                             rng.complexGaussMatrix(k2 * model.dim(), k1));
      dev = std::max(dev,
                     (b.partialTranspose().partialTranspose() - b).data().cwiseAbs().maxCoeff());
      const OperatorMatrix dag = b.daggerWith(md.s);
      dev = std::max(dev, (dag.daggerWith(md.s) - b).data().cwiseAbs().maxCoeff());
      const OperatorMatrix via_dt = b.daggerWith(md.s).partialTranspose();
      const OperatorMatrix via_td = b.partialTranspose().daggerWith(md.s);
      const OperatorMatrix conj = b.conjugateWith(md.s);
      dev = std::max(dev, (via_dt - via_td).data().cwiseAbs().maxCoeff());
      dev = std::max(dev, (via_dt - conj).data().cwiseAbs().maxCoeff());
      dev = std::max(dev,
                     std::abs(b.partialTranspose().hsNorm() - b.hsNorm()));
    }
    rep.add(devRecord("matrix_calc.transpose_dagger",
                      "B_TT = B, B_dd = B, B_dT = B_Td = (k x S) B k", dev, 1e-12));
  }
  {
    RngStream rng = ctx.rng("matrix_calc.dagger_two_routes");
    RVec lam(2);
    lam << std::sqrt(0.6), std::sqrt(0.4);
    const MatrixModel model(2, lam);
    const ModularData md = bruteForceModular(model);
    double dev = 0.0;
    for (int i = 0; i < 8; ++i) {
      const OperatorMatrix b(2, 2, static_cast<int>(model.dim()),
                             rng.complexGaussMatrix(2 * model.dim(), 2));
      const OperatorMatrix via_kernel = b.daggerWith(md.s);
      const OperatorMatrix via_identity = daggerFromIdentity(model, b);
      dev = std::max(dev, (via_kernel - via_identity).data().cwiseAbs().maxCoeff());
    }
    rep.add(devRecord("matrix_calc.dagger_two_routes",
                      "<c1 x x'xi, B_d c2> = <B c1, c2 x x'*xi> route = kernel route", dev,
                      1e-12));
  }
  {
    RngStream rng = ctx.rng("matrix_calc.column_transform");
    RVec lam(2);
    lam << std::sqrt(0.8), std::sqrt(0.2);
    const MatrixModel model(2, lam);
    const ModularData md = bruteForceModular(model);
    const int k = 2;
    double dev = 0.0;
    for (int i = 0; i < 16; ++i) {
      const OperatorMatrix l(1, k, static_cast<int>(model.dim()),
                             rng.complexGaussMatrix(k * model.dim(), 1));
      const OperatorMatrix m(k, 1, static_cast<int>(model.dim()),
                             rng.complexGaussMatrix(model.dim(), k));
      const BlockIntegrandMatrix f{l, m};
      const Vec col = columnTransform(f).data().col(0);
      const Vec dag = columnTransformDagger(f, md.s).data().col(0);
      dev = std::max(dev, (dag - kPiTensorS(md.s, k, col)).norm());
    }
    rep.add(devRecord("matrix_calc.column_transform", "F^[]dagger xi = (k^pi x S) F^[] xi",
                      dev, 1e-12));
  }
}

// ---------------------------------------------------------------- qf martingale

void qfChecks(const SuiteContext& ctx, Report& rep) {
  const FockSpace& fock = ctx.fock;
  const TimeGrid& grid = ctx.grid;
  {
    RngStream rng = ctx.rng("qf.integral_martingale");
    double dev = 0.0;
    for (int i = 0; i < 6; ++i) {
      QfIntegrand f{randomAdaptedProcess(grid, fock, rng, 1.0, fock.cutoff() - 1)};
      const VectorMartingale x = qfIntegralMartingale(grid, fock, f, ctx.sigma);
      for (int s = 0; s <= grid.bins; ++s)
        for (int t = s; t <= grid.bins; ++t)
          dev = std::max(dev, (projectPt(grid, fock, s, x[t]) - x[s]).norm());
    }
    rep.add(devRecord("qf.integral_martingale", "P_s Lambda^S_t(F)xi = Lambda^S_s(F)xi", dev,
                      1e-12));
  }
  {
    RngStream rng = ctx.rng("qf.conditional_expectation");
    const Vec v = rng.complexGaussVector(fock.dim());
    double dev = 0.0;
    for (int s = 0; s <= grid.bins; ++s)
      for (int t = 0; t <= grid.bins; ++t) {
        const Vec lhs = conditionalExpectation(
            grid, fock, s, conditionalExpectation(grid, fock, t, v));
        const Vec rhs = conditionalExpectation(grid, fock, std::min(s, t), v);
        dev = std::max(dev, (lhs - rhs).norm());
      }
    rep.add(devRecord("qf.conditional_semigroup", "E_s E_t = E_min(s,t)", dev, 1e-14));
  }
  {
    RngStream rng = ctx.rng("qf.block_additivity");
    double dev = 0.0;
    for (int i = 0; i < 4; ++i) {
      const AdaptedProcess base =
          randomAdaptedProcess(grid, fock, rng, 1.0, fock.cutoff() - 1);
      std::vector<Mat> l_xi(grid.bins), mt_xi(grid.bins);
      for (int j = 0; j < grid.bins; ++j) {
        l_xi[j] = base[j].topRows(grid.d);
        mt_xi[j] = base[j].bottomRows(grid.d);
      }
      for (int t = 0; t <= grid.bins; ++t) {
        const Vec sum = creationIntegral(grid, fock, l_xi, ctx.sigma, t) +
                        annihilationIntegral(grid, fock, mt_xi, ctx.sigma, t);
        const Vec whole =
            qfIntegral(grid, fock, integrandFromBlocks(grid, fock, l_xi, mt_xi), ctx.sigma, t);
        dev = std::max(dev, (sum - whole).norm());
      }
    }
    rep.add(devRecord("qf.block_additivity",
                      "Adag_t(L)xi + A_t(M)xi = Lambda^S_t([[0,M],[L,0]])xi", dev, 1e-12));
  }
  {
    // Creation/annihilation orthogonality at xi in the gauge case; a
    // squeezed covariance mixes the legs and breaks it.
    RngStream rng = ctx.rng("qf.creation_annihilation");
    double max_abs = 0.0;
    for (int i = 0; i < 6; ++i) {
      const AdaptedProcess base =
          randomAdaptedProcess(grid, fock, rng, 1.0, fock.cutoff() - 1);
      std::vector<Mat> l_xi(grid.bins), mt_xi(grid.bins);
      for (int j = 0; j < grid.bins; ++j) {
        l_xi[j] = base[j].topRows(grid.d);
        mt_xi[j] = base[j].bottomRows(grid.d);
      }
      const Vec cr = creationIntegral(grid, fock, l_xi, ctx.sigma, grid.bins);
      const Vec an = annihilationIntegral(grid, fock, mt_xi, ctx.sigma, grid.bins);
      max_abs = std::max(max_abs, std::abs(inner(cr, an)));
    }
    if (ctx.squeezing())
      rep.add(witnessRecord("qf.squeezed_nonorthogonality",
                            "<Adag(L)xi, A(M)xi> != 0 without gauge invariance", max_abs,
                            1e-6));
    else
      rep.add(devRecord("qf.gauge_orthogonality", "<Adag(L)xi, A(M)xi> = 0 (gauge)", max_abs,
                        1e-12));
  }
  {
    RngStream rng = ctx.rng("qf.roundtrip");
    double dev = 0.0;
    for (int i = 0; i < 4; ++i) {
      QfIntegrand f{randomAdaptedProcess(grid, fock, rng, 1.0, fock.cutoff() - 2)};
      QfMartingale x{qfIntegralMartingale(grid, fock, f, ctx.sigma), std::nullopt};
      const Representation rec = represent(grid, fock, x, ctx.sigma);
      for (int j = 0; j < grid.bins; ++j)
        dev = std::max(dev, (rec.integrand.q[j] - f.q[j]).cwiseAbs().maxCoeff());
      dev = std::max(dev, rec.maxResidual());
    }
    rep.add(devRecord("qf.integrate_then_represent", "represent(Lambda^S(F)) = F", dev, 1e-10));
  }
  {
    // Exponential martingale: reconstruction returns the left-point
    // integrand, and the modular image matches the independently built
    // exponential of the negated argument.
    const double step = 0.35 / std::sqrt(double(grid.bins));
    Mat f_steps = Mat::Constant(grid.bins, grid.d, cxd(step, 0.4 * step));
    const ExponentialMartingale em =
        exponentialMartingale(grid, fock, f_steps, ctx.sigma, false);
    const Representation rec = represent(grid, fock, em.martingale, ctx.sigma);
    double dev = 0.0;
    for (int j = 0; j < grid.bins; ++j)
      dev = std::max(dev, (rec.integrand.q[j] - em.integrand.q[j]).cwiseAbs().maxCoeff());
    rep.add(devRecord("qf.exponential_integrand",
                      "represented integrand = left-point exponential integrand", dev, 1e-9,
                      fmtParams({{"step", step}})));

    const FockOperator s_fock = fock.secondQuantize(sOmega(ctx.sigma));
    const ExponentialMartingale em_neg =
        exponentialMartingale(grid, fock, Mat(-f_steps), ctx.sigma, false);
    double dag_dev = 0.0;
    for (int j = 0; j <= grid.bins; ++j)
      dag_dev = std::max(dag_dev,
                         (s_fock.apply(em.martingale.x[j]) - em_neg.martingale.x[j]).norm());
    rep.add(devRecord("qf.exponential_dagger", "S E^f_t xi = E^{-f}_t xi", dag_dev,
                      ctx.cfg.tol_truncated));

    const DeviationReport xb = daggerMartingale(grid, fock, em.martingale, rec.integrand,
                                                ctx.sigma, s_fock, ctx.cfg.tol_truncated);
    rep.add(devRecord("qf.theorem_xb",
                      "S(x_t - x_0) = Lambda^S_t((k^pi x S) reconstructed integrand)",
                      xb.max_deviation, xb.tolerance));
  }
  {
    // Wiener-type smoke test: a one-particle column integrand gives a
    // constant-column integral.
    RngStream rng = ctx.rng("qf.wiener");
    const Vec f = rng.complexGaussVector(grid.d, 0.3);
    const Vec g = rng.complexGaussVector(grid.d, 0.3);
    std::vector<Mat> l_xi(grid.bins), mt_xi(grid.bins);
    for (int j = 0; j < grid.bins; ++j) {
      l_xi[j] = f * fock.vacuum().transpose();
      mt_xi[j] = g.conjugate() * fock.vacuum().transpose();
    }
    const QfIntegrand h = integrandFromBlocks(grid, fock, l_xi, mt_xi);
    const Vec lhs = qfIntegral(grid, fock, h, ctx.sigma, grid.bins);
    // Independent route: sum over bins of one-particle embeddings.
    Vec rhs = Vec::Zero(fock.dim());
    for (int j = 0; j < grid.bins; ++j) {
      Vec fiber(2 * grid.d);
      fiber.head(grid.d) = f;
      fiber.tail(grid.d) = g.conjugate();
      const Vec moved = ctx.sigma.applyBlock(j, fiber);
      Vec embedded = Vec::Zero(fock.modes());
      embedded.segment(grid.modeStart(j), 2 * grid.d) = moved;
      rhs += fock.applyCreation(embedded, fock.vacuum());
    }
    rep.add(devRecord("qf.wiener_integral",
                      "Lambda^S((f, conj g) x I) xi = one-particle embedding", (lhs - rhs).norm(),
                      1e-12));
  }
}

// ------------------------------------------------------------------ weyl word

void weylWordChecks(const SuiteContext& ctx, Report& rep) {
  const PhaseSpaceModel& model = ctx.model;
  {
    RngStream rng = ctx.rng("weyl_word.star_homomorphism");
    double dev = 0.0;
    for (int i = 0; i < 32; ++i) {
      WordEnvironment env;
      env["f"] = rng.complexGaussVector(model.totalBaseDim(), 0.4);
      env["g"] = rng.complexGaussVector(model.totalBaseDim(), 0.4);
      const NormalForm prod = normalize(parseWord("W(f) * W(g)"), env);
      const NormalForm manual =
          normalProduct(normalize(parseWord("W(f)"), env), normalize(parseWord("W(g)"), env));
      if (prod.terms.size() != 1 || manual.terms.size() != 1) {
        dev = 1.0;
        break;
      }
      dev = std::max(dev, std::abs(prod.terms[0].coeff - manual.terms[0].coeff));
      dev = std::max(dev, (prod.terms[0].vector - manual.terms[0].vector).norm());
      const NormalForm adj = normalize(parseWord("(W(f) * W(g))*"), env);
      const NormalForm manual_adj = normalAdjoint(prod);
      dev = std::max(dev, std::abs(adj.terms[0].coeff - manual_adj.terms[0].coeff));
      dev = std::max(dev, (adj.terms[0].vector - manual_adj.terms[0].vector).norm());
    }
    rep.add(devRecord("weyl_word.star_homomorphism",
                      "normalize respects products and adjoints", dev, 1e-12));
  }
  {
    RngStream rng = ctx.rng("weyl_word.cross_validation");
    WeylCache cache(ctx.fock);
    const int words = std::min(50, ctx.cfg.trials);
    // Generator pool; words draw letters from it so the Weyl matrices are
    // built once each.
    const int pool = 6;
    WordEnvironment env;
    for (int p = 0; p < pool; ++p) {
      Vec f = rng.complexGaussVector(model.totalBaseDim());
      const double norm = ctx.sigma.apply(iota(model, f)).norm();
      f *= 0.3 * rng.uniform() / norm;
      env["g" + std::to_string(p)] = f;
    }
    double dev = 0.0;
    for (int w = 0; w < words; ++w) {
      const int len = 1 + static_cast<int>(rng.next() % 3);
      std::string text;
      for (int l = 0; l < len; ++l) {
        if (l > 0) text += " * ";
        text += "W(g" + std::to_string(rng.next() % pool) + ")";
        if (rng.uniform() < 0.3) text += "*";
      }
      const TruncatedExpectation r = expectTruncated(parseWord(text), env, model, ctx.sigma,
                                                     ctx.fock, cache, 0.5);
      dev = std::max(dev, r.diff);
    }
    rep.add(devRecord("weyl_word.cross_validation",
                      "truncated <Omega, word Omega> = exact characteristic sum", dev,
                      ctx.cfg.tol_truncated,
                      fmtParams({{"words", double(words)}, {"pool", double(pool)}})));
  }
  {
    RngStream rng = ctx.rng("weyl_word.gauge_invariance");
    const cxd z = std::exp(kI * (M_PI / 3.0));
    double change = 0.0;
    for (int i = 0; i < 16; ++i) {
      const Vec f = rng.complexGaussVector(model.totalBaseDim(), 0.4);
      NormalForm nf;
      nf.terms.push_back({cxd(1.0, 0.0), f});
      NormalForm nf_rot;
      nf_rot.terms.push_back({cxd(1.0, 0.0), Vec(z * f)});
      change = std::max(change, std::abs(expectExact(nf, model, ctx.sigma) -
                                         expectExact(nf_rot, model, ctx.sigma)));
    }
    if (ctx.squeezing())
      rep.add(witnessRecord("weyl_word.squeezed_phase_covariance",
                            "phase rotation shifts the squeezed characteristic function",
                            change, 1e-6));
    else
      rep.add(devRecord("weyl_word.gauge_invariance",
                        "characteristic function invariant under f -> e^{i theta} f", change,
                        1e-12));
  }
}

}  // namespace

Report runFullSuite(const Config& cfg) {
  SuiteContext ctx(cfg);
  Report rep;
  rep.suite = "qfsc";
  rep.seed = cfg.seed;
  phaseSpaceChecks(ctx, rep);
  fockChecks(ctx, rep);
  adaptedChecks(ctx, rep);
  matrixCalcChecks(ctx, rep);
  qfChecks(ctx, rep);
  weylWordChecks(ctx, rep);
  return rep;
}

}  // namespace qfsc
