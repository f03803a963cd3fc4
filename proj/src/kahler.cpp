#include "wvar/kahler.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace wvar {

double CompatibilityReport::max() const {
  return std::max(std::max(sq, skew), std::max(parallel, nijenhuis));
}

EndField standard_complex_structure(const PeriodicGrid& grid) {
  const int m = grid.dim();
  if (m % 2 != 0)
    throw std::invalid_argument(
        "standard_complex_structure: dimension must be even");
  Mat j = Mat::Zero(m, m);
  for (int k = 0; k < m / 2; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return constant_end(grid, j);
}

VecValued2Field nijenhuis(const EndField& j) {
  const PeriodicGrid& grid = j.grid();
  const int m = grid.dim();
  // dj[a][i*m+j] = d_a J^i_j
  std::vector<std::vector<std::vector<double>>> dj(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a) {
    dj[static_cast<size_t>(a)].resize(static_cast<size_t>(m * m));
    for (int c = 0; c < m * m; ++c) {
      auto& buf = dj[static_cast<size_t>(a)][static_cast<size_t>(c)];
      buf.resize(static_cast<size_t>(grid.point_count()));
      spectral_partial_raw(grid, j.store().comp(c), buf.data(), a);
    }
  }
  VecValued2Field out(grid);
  for (long p = 0; p < grid.point_count(); ++p)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int jj = 0; jj < m; ++jj) {
          double acc = 0.0;
          for (int a = 0; a < m; ++a) {
            acc += j.at(p, a, i) * dj[a][k * m + jj][p] -
                   j.at(p, a, jj) * dj[a][k * m + i][p] +
                   j.at(p, k, a) * dj[jj][a * m + i][p] -
                   j.at(p, k, a) * dj[i][a * m + jj][p];
          }
          out.at(p, k, i, jj) = acc;
        }
  return out;
}

CompatibilityReport compatibility_report(const MetricField& g,
                                         const EndField& j) {
  require_same_grid(g.grid(), j.grid(), "compatibility_report");
  CompatibilityReport r;
  const int m = g.dim();
  const Mat id = Mat::Identity(m, m);
  for (long p = 0; p < g.points(); ++p) {
    const Mat jp = j.matrix_at(p);
    const Mat gp = g.matrix_at(p);
    r.sq = std::max(r.sq, (jp * jp + id).cwiseAbs().maxCoeff());
    r.skew = std::max(
        r.skew, (gp * jp + jp.transpose() * gp).cwiseAbs().maxCoeff());
  }
  r.parallel = field_sup_norm(covariant_derivative(j, g));
  r.nijenhuis = field_sup_norm(nijenhuis(j));
  return r;
}

KahlerPair make_kahler_pair(MetricField g, EndField j, double tol) {
  const CompatibilityReport r = compatibility_report(g, j);
  if (r.max() > tol)
    throw std::invalid_argument(
        "make_kahler_pair: compatibility residual " + std::to_string(r.max()) +
        " exceeds " + std::to_string(tol));
  return {std::move(g), std::move(j)};
}

EndSplit split_endomorphism(const EndField& a, const EndField& j) {
  require_same_grid(a.grid(), j.grid(), "split_endomorphism");
  EndSplit out{EndField(a.grid()), EndField(a.grid())};
  for (long p = 0; p < a.points(); ++p) {
    const Mat ap = a.matrix_at(p);
    const Mat jp = j.matrix_at(p);
    const Mat jaj = jp * ap * jp;
    out.linear.set_matrix(p, 0.5 * (ap - jaj));
    out.anti_linear.set_matrix(p, 0.5 * (ap + jaj));
  }
  return out;
}

NablaSplit nabla_split(const VecValued2Field& ns, const EndField& j) {
  const int m = ns.dim();
  NablaSplit out{VecValued2Field(ns.grid()), VecValued2Field(ns.grid())};
  for (long p = 0; p < ns.points(); ++p) {
    const Mat jp = j.matrix_at(p);
    for (int i = 0; i < m; ++i)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
          // J (grad_{J x} S)(y), value slot rotated by J.
          double jterm = 0.0;
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
              jterm += jp(i, a) * ns.at(p, a, b, y) * jp(b, x);
          const double base = ns.at(p, i, x, y);
          out.part10.at(p, i, x, y) = 0.5 * (base - jterm);
          out.part01.at(p, i, x, y) = 0.5 * (base + jterm);
        }
  }
  return out;
}

NablaSplit nabla_split(const EndField& s, const MetricField& g,
                       const EndField& j) {
  return nabla_split(covariant_derivative(s, g), j);
}

namespace {

VecValued2Field antisym_slots(const VecValued2Field& t) {
  const int m = t.dim();
  VecValued2Field out(t.grid());
  for (long p = 0; p < t.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          out.at(p, i, x, y) = t.at(p, i, x, y) - t.at(p, i, y, x);
  return out;
}

}  // namespace

VecValued2Field dbar_TX(const EndField& s, const MetricField& g,
                        const EndField& j) {
  return antisym_slots(nabla_split(s, g, j).part01);
}

VecValued2Field del_TX(const EndField& s, const MetricField& g,
                       const EndField& j) {
  return antisym_slots(nabla_split(s, g, j).part10);
}

DbarDel dbar_del_TX(const EndField& a, const MetricField& g,
                    const EndField& j) {
  const NablaSplit ns = nabla_split(a, g, j);
  return {antisym_slots(ns.part01), antisym_slots(ns.part10)};
}

EndField dbar_vector_field(const VecField& z, const MetricField& g,
                           const EndField& j) {
  const EndField w = covariant_derivative(z, g, christoffel(g));
  EndField out(z.grid());
  for (long p = 0; p < z.points(); ++p) {
    const Mat wp = w.matrix_at(p);
    const Mat jp = j.matrix_at(p);
    out.set_matrix(p, 0.5 * (wp + jp * wp * jp));
  }
  return out;
}

namespace {

double vv2_sup(const VecValued2Field& t) { return field_sup_norm(t); }

// Residual of the identity T^i_{xy} = S^i_{yx} between two vector-valued
// 2-tensors.
double swap_residual(const VecValued2Field& t, const VecValued2Field& s) {
  const int m = t.dim();
  double res = 0.0;
  for (long p = 0; p < t.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          res = std::max(res, std::abs(t.at(p, i, x, y) - s.at(p, i, y, x)));
  return res;
}

}  // namespace

MembershipReport membership_report(const MetricField& g, const EndField& j,
                                   const Sym2Field& v) {
  MembershipReport r;
  const EndField vs = endomorphism_of(v, g);
  const VecValued2Field nvs = covariant_derivative(vs, g);
  r.f = vv2_sup(antisym_slots(nvs));

  const EndSplit split = split_endomorphism(vs, j);
  const NablaSplit nb = nabla_split(covariant_derivative(split.linear, g), j);
  const NablaSplit na =
      nabla_split(covariant_derivative(split.anti_linear, g), j);

  const VecValued2Field del_b = antisym_slots(nb.part10);
  const VecValued2Field dbar_a = antisym_slots(na.part01);
  r.d = std::max(vv2_sup(del_b), vv2_sup(dbar_a));

  // J-invariance of v plus del of the full endomorphism.
  double inv = 0.0;
  for (long p = 0; p < v.points(); ++p) {
    const Mat vp = v.matrix_at(p);
    const Mat jp = j.matrix_at(p);
    inv = std::max(inv, (jp.transpose() * vp * jp - vp).cwiseAbs().maxCoeff());
  }
  const NablaSplit nfull = nabla_split(nvs, j);
  r.dhat = std::max(inv, vv2_sup(antisym_slots(nfull.part10)));

  const VecValued2Field dbar_b = antisym_slots(nb.part01);
  const VecValued2Field del_a = antisym_slots(na.part10);
  r.kah_f = vv2_sup(field_add(dbar_b, del_a));

  // (xi contracted into the derivative slot of grad^{0,1} B) equals
  // (grad^{1,0} A')(., xi).
  r.sup_kh_sm = swap_residual(nb.part01, na.part10);
  return r;
}

namespace {

void require_kind(const MetricField& g, const EndField& j, const EndField& m_f,
                  EndoKind kind, const char* where) {
  double kind_res = 0.0, sym_res = 0.0;
  for (long p = 0; p < g.points(); ++p) {
    const Mat a = m_f.matrix_at(p);
    const Mat jp = j.matrix_at(p);
    const Mat gp = g.matrix_at(p);
    const Mat comm = kind == EndoKind::Linear ? Mat(a * jp - jp * a)
                                              : Mat(a * jp + jp * a);
    kind_res = std::max(kind_res, comm.cwiseAbs().maxCoeff());
    const Mat ga = gp * a;
    sym_res = std::max(sym_res, (ga - ga.transpose()).cwiseAbs().maxCoeff());
  }
  const double scale = std::max(1.0, field_sup_norm(m_f));
  if (kind_res > 1e-9 * scale)
    throw std::invalid_argument(std::string(where) +
                                ": endomorphism fails the declared J-linearity, residual " +
                                std::to_string(kind_res));
  if (sym_res > 1e-9 * scale)
    throw std::invalid_argument(std::string(where) +
                                ": endomorphism is not g-symmetric, residual " +
                                std::to_string(sym_res));
}

// Max over directions xi of the g-symmetry defect of T(., xi) as an
// endomorphism in the first slot.
double slotwise_sym_residual(const VecValued2Field& t, const MetricField& g) {
  const int m = t.dim();
  double res = 0.0;
  Mat e(m, m);
  for (long p = 0; p < t.points(); ++p) {
    const Mat gp = g.matrix_at(p);
    for (int c = 0; c < m; ++c) {
      for (int i = 0; i < m; ++i)
        for (int x = 0; x < m; ++x) e(i, x) = t.at(p, i, x, c);
      const Mat ge = gp * e;
      res = std::max(res, (ge - ge.transpose()).cwiseAbs().maxCoeff());
    }
  }
  return res;
}

double slot_symmetry_residual(const VecValued2Field& t) {
  const int m = t.dim();
  double res = 0.0;
  for (long p = 0; p < t.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          res = std::max(res, std::abs(t.at(p, i, x, y) - t.at(p, i, y, x)));
  return res;
}

}  // namespace

SymmetryEquivalenceReport symmetry_equivalence(const MetricField& g,
                                               const EndField& j,
                                               const EndField& m_field,
                                               EndoKind kind) {
  require_kind(g, j, m_field, kind, "symmetry_equivalence");
  const NablaSplit ns = nabla_split(m_field, g, j);
  SymmetryEquivalenceReport r;
  if (kind == EndoKind::AntiLinear) {
    r.slotwise = slotwise_sym_residual(ns.part01, g);
    r.total_sym = slot_symmetry_residual(ns.part01);
    r.closure = vv2_sup(antisym_slots(ns.part01));
  } else {
    r.slotwise = slotwise_sym_residual(ns.part01, g);
    r.total_sym = slot_symmetry_residual(ns.part10);
    r.closure = vv2_sup(antisym_slots(ns.part10));
  }
  return r;
}

namespace {

EndField rhs_ode(const EndField& j, const EndField& gs) {
  EndField out(j.grid());
  for (long p = 0; p < j.points(); ++p) {
    const Mat jp = j.matrix_at(p);
    const Mat gp = gs.matrix_at(p);
    out.set_matrix(p, 0.5 * (jp * gp - gp * jp));
  }
  return out;
}

}  // namespace

JOdeResult evolve_j(const MetricCurve& curve, const EndField& j0, double t_end,
                    int steps, double abort_threshold) {
  if (steps < 1) throw std::invalid_argument("evolve_j: steps must be positive");
  const double dt = t_end / steps;
  EndField j = j0;
  JOdeResult result;

  const auto diagnose = [&](double t, const EndField& jt) {
    const MetricField gt = curve.metric(t);
    const EndField gs = curve.velocity_endomorphism(t);
    JOdeSample s;
    s.t = t;
    s.compat = compatibility_report(gt, jt);

    const EndField jdot = rhs_ode(jt, gs);
    double r0 = 0.0, r1 = 0.0, r3 = 0.0;
    for (long p = 0; p < jt.points(); ++p) {
      const Mat gp = gt.matrix_at(p);
      const Mat gi = gt.inverse_at(p);
      const Mat jd = jdot.matrix_at(p);
      const Mat jp = jt.matrix_at(p);
      const Mat gsp = gs.matrix_at(p);
      const Mat jd_t = gi * jd.transpose() * gp;
      r1 = std::max(r1, (jd_t + jd - (jp * gsp - gsp * jp)).cwiseAbs().maxCoeff());
      const Mat anti = 0.5 * (gsp + jp * gsp * jp);
      const Mat jjd = jp * jd;
      const Mat jjd_t = gi * jjd.transpose() * gp;
      r0 = std::max(r0, (2.0 * anti + jjd + jjd_t).cwiseAbs().maxCoeff());
      r3 = std::max(r3, (jd * jp - anti).cwiseAbs().maxCoeff());
    }
    s.der_j_inv = r0;
    s.der_j_inv_t = r1;
    s.dbar_jdot = field_sup_norm(dbar_TX(jdot, gt, jt));
    s.jdot_identity = r3;
    result.samples.push_back(s);
    result.j_at_samples.push_back(jt);
    return std::max(s.compat.sq, s.compat.skew);
  };

  if (diagnose(0.0, j) > abort_threshold) {
    result.aborted = true;
    result.abort_time = 0.0;
    return result;
  }

  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    const EndField gs1 = curve.velocity_endomorphism(t);
    const EndField gs2 = curve.velocity_endomorphism(t + 0.5 * dt);
    const EndField gs4 = curve.velocity_endomorphism(t + dt);

    const EndField k1 = rhs_ode(j, gs1);
    EndField j2 = field_add(j, field_scale(0.5 * dt, k1));
    const EndField k2 = rhs_ode(j2, gs2);
    EndField j3 = field_add(j, field_scale(0.5 * dt, k2));
    const EndField k3 = rhs_ode(j3, gs2);
    EndField j4 = field_add(j, field_scale(dt, k3));
    const EndField k4 = rhs_ode(j4, gs4);

    for (size_t i = 0; i < j.store().raw().size(); ++i)
      j.store().raw()[i] += dt / 6.0 *
                            (k1.store().raw()[i] + 2.0 * k2.store().raw()[i] +
                             2.0 * k3.store().raw()[i] + k4.store().raw()[i]);

    const double worst = diagnose(t + dt, j);
    if (worst > abort_threshold) {
      result.aborted = true;
      result.abort_time = t + dt;
      return result;
    }
  }
  return result;
}

Cov2Field i_del_delbar(const ScalarField& f, const EndField& j) {
  const PeriodicGrid& grid = f.grid();
  const int m = grid.dim();
  if (m % 2 != 0)
    throw std::invalid_argument("i_del_delbar: dimension must be even");
  // Requires the standard constant J chart.
  {
    const Mat std_j = standard_complex_structure(grid).matrix_at(0);
    for (long p = 0; p < grid.point_count(); p += std::max<long>(1, grid.point_count() / 7))
      if ((j.matrix_at(p) - std_j).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("i_del_delbar: non-constant or non-standard J chart");
  }
  const int n = m / 2;

  // Flat second partials.
  std::vector<ScalarField> d1(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a) d1[static_cast<size_t>(a)] = spectral_partial(f, a);
  std::vector<std::vector<ScalarField>> d2(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a) {
    d2[static_cast<size_t>(a)].resize(static_cast<size_t>(m));
    for (int b = a; b < m; ++b)
      d2[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          spectral_partial(d1[static_cast<size_t>(a)], b);
  }
  const auto hess = [&](int a, int b, long p) {
    return a <= b ? d2[static_cast<size_t>(a)][static_cast<size_t>(b)][p]
                  : d2[static_cast<size_t>(b)][static_cast<size_t>(a)][p];
  };

  Cov2Field out(f.grid());
  using C = std::complex<double>;
  const C iu(0.0, 1.0);
  for (long p = 0; p < grid.point_count(); ++p) {
    // f_{k lbar} = (f_{x_k x_l} + f_{y_k y_l} + i (f_{x_k y_l} - f_{y_k x_l}))/4
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        C acc(0.0, 0.0);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const int xk = 2 * k, yk = 2 * k + 1, xl = 2 * l, yl = 2 * l + 1;
            const C fkl(0.25 * (hess(xk, xl, p) + hess(yk, yl, p)),
                        0.25 * (hess(xk, yl, p) - hess(yk, xl, p)));
            // dz_k(e_a) dzbar_l(e_b) - dz_k(e_b) dzbar_l(e_a)
            const auto dz = [&](int kk, int e) -> C {
              if (e == 2 * kk) return C(1.0, 0.0);
              if (e == 2 * kk + 1) return iu;
              return C(0.0, 0.0);
            };
            const auto dzb = [&](int ll, int e) -> C {
              if (e == 2 * ll) return C(1.0, 0.0);
              if (e == 2 * ll + 1) return -iu;
              return C(0.0, 0.0);
            };
            acc += fkl * (dz(k, a) * dzb(l, b) - dz(k, b) * dzb(l, a));
          }
        const double val = (iu * acc).real();
        out.at(p, a, b) = val;
        out.at(p, b, a) = -val;
      }
    for (int a = 0; a < m; ++a) out.at(p, a, a) = 0.0;
  }
  return out;
}

Cov2Field ricci_form(const EndField& j, const VolumeForm& omega) {
  const ScalarField logw = pointwise_log(omega.density());
  Cov2Field out = i_del_delbar(logw, j);
  for (auto& x : out.store().raw()) x = -x;
  return out;
}

CxDecompositionReport cx_decomposition_check(const MetricField& g,
                                             const EndField& j,
                                             const VolumeForm& omega) {
  CxDecompositionReport r;
  const ScalarField f = log_density(g, omega);

  // Gradient vector field of f.
  const OneFormField df = covariant_derivative(f, g);
  VecField grad(g.grid());
  const int m = g.dim();
  for (long p = 0; p < g.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int a = 0; a < m; ++a) acc += gi(i, a) * df.at(p, a);
      grad.at(p, i) = acc;
    }
  }
  const EndField dbar_grad = dbar_vector_field(grad, g, j);
  const Cov2Field g_dbar_grad = cov2_of_end(g, dbar_grad);

  // grad df = (i del dbar f) J + g dbar grad f.
  const Sym2Field hess = hessian_fn(f, g);
  const Cov2Field iddb = i_del_delbar(f, j);
  double r1 = 0.0;
  for (long p = 0; p < g.points(); ++p) {
    const Mat lhs = hess.matrix_at(p);
    const Mat rhs =
        iddb.matrix_at(p) * j.matrix_at(p) + g_dbar_grad.matrix_at(p);
    r1 = std::max(r1, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  r.hessian_identity = r1;

  // Ric_g(Omega) = Ric_J(Omega) J + g dbar grad f.
  const Sym2Field ric = bakry_emery(g, omega);
  const Cov2Field rho = ricci_form(j, omega);
  double r2 = 0.0;
  for (long p = 0; p < g.points(); ++p) {
    const Mat lhs = ric.matrix_at(p);
    const Mat rhs =
        rho.matrix_at(p) * j.matrix_at(p) + g_dbar_grad.matrix_at(p);
    r2 = std::max(r2, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  r.ricci_identity = r2;
  return r;
}

namespace {

double membership_d_residual(const MetricField& g, const EndField& j,
                             const Sym2Field& v) {
  const MembershipReport r = membership_report(g, j, v);
  return r.d;
}

// Pairing of T_X-valued 2-forms: half the embedded-tensor contraction, i.e.
// each unordered slot pair counts once. This is the normalization under
// which the derivative-norm identity |grad^{1,0} A|^2 = |del A|^2 holds;
// see docs/conventions.md.
ScalarField form_pairing_vv2(const VecValued2Field& a,
                             const VecValued2Field& b, const MetricField& g) {
  ScalarField out = inner_vv2(a, b, g);
  for (long p = 0; p < out.size(); ++p) out[p] *= 0.5;
  return out;
}

ScalarField trace_v2_ric(const MetricField& g, const VolumeForm& omega,
                         const Sym2Field& v) {
  const Sym2Field ric = bakry_emery(g, omega);
  const EndField vs = endomorphism_of(v, g);
  const EndField rs = endomorphism_of(ric, g);
  ScalarField out(g.grid());
  for (long p = 0; p < g.points(); ++p) {
    const Mat vp = vs.matrix_at(p);
    out[p] = (vp * vp * rs.matrix_at(p)).trace();
  }
  return out;
}

}  // namespace

double hessian_kahler(const MetricField& g, const EndField& j,
                      const VolumeForm& omega, const Sym2Field& v,
                      double tol) {
  const double res = membership_d_residual(g, j, v);
  if (res > tol)
    throw std::invalid_argument(
        "hessian_kahler: direction not admissible, membership residual " +
        std::to_string(res) + " exceeds " + std::to_string(tol));

  const EndField vs = endomorphism_of(v, g);
  const EndSplit split = split_endomorphism(vs, j);
  const NablaSplit na =
      nabla_split(covariant_derivative(split.anti_linear, g), j);
  const NablaSplit nb = nabla_split(covariant_derivative(split.linear, g), j);

  const VecValued2Field del_a = antisym_slots(na.part10);
  const VecValued2Field dbar_b = antisym_slots(nb.part01);

  const ScalarField t1 = trace_v2_ric(g, omega, v);
  const ScalarField n01a = inner_vv2(na.part01, na.part01, g);
  const VecValued2Field mix =
      field_add(field_scale(4.0, dbar_b), del_a);
  const ScalarField pairing = form_pairing_vv2(mix, del_a, g);

  ScalarField integrand(g.grid());
  for (long p = 0; p < g.points(); ++p)
    integrand[p] = t1[p] + 0.5 * n01a[p] - 0.5 * pairing[p];
  return integrate(integrand, omega);
}

double hessian_kahler_F(const MetricField& g, const EndField& j,
                        const VolumeForm& omega, const Sym2Field& v,
                        double tol) {
  const double res = f_membership_residual(g, v);
  if (res > tol)
    throw std::invalid_argument(
        "hessian_kahler_F: direction not in F_g, membership residual " +
        std::to_string(res) + " exceeds " + std::to_string(tol));

  const EndField vs = endomorphism_of(v, g);
  const EndSplit split = split_endomorphism(vs, j);
  const VecValued2Field na = covariant_derivative(split.anti_linear, g);
  const NablaSplit ns = nabla_split(na, j);

  // Substituting the restricted-space relation into the general formula
  // leaves half the full derivative norm plus the norm of the holomorphic
  // projection of the derivative of the anti-linear part.
  const ScalarField t1 = trace_v2_ric(g, omega, v);
  const ScalarField full = inner_vv2(na, na, g);
  const ScalarField n10 = inner_vv2(ns.part10, ns.part10, g);

  ScalarField integrand(g.grid());
  for (long p = 0; p < g.points(); ++p)
    integrand[p] = t1[p] + 0.5 * full[p] + n10[p];
  return integrate(integrand, omega);
}

InvariantDirectionReport invariant_direction_residuals(const MetricField& g,
                                                       const EndField& j,
                                                       const Sym2Field& v) {
  InvariantDirectionReport r;
  const int m = g.dim();
  double inv = 0.0;
  for (long p = 0; p < v.points(); ++p) {
    const Mat vp = v.matrix_at(p);
    const Mat jp = j.matrix_at(p);
    inv = std::max(inv, (jp.transpose() * vp * jp - vp).cwiseAbs().maxCoeff());
  }
  r.j_invariance = inv;

  // Exterior derivative of the 2-form v J from flat partials.
  const Cov2Field vj = compose(v, j);
  const PeriodicGrid& grid = g.grid();
  std::vector<std::vector<ScalarField>> d(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a) {
    d[static_cast<size_t>(a)].resize(static_cast<size_t>(m * m));
    for (int c = 0; c < m * m; ++c) {
      ScalarField comp(grid);
      for (long p = 0; p < grid.point_count(); ++p)
        comp[p] = vj.store().at(c, p);
      d[static_cast<size_t>(a)][static_cast<size_t>(c)] =
          spectral_partial(comp, a);
    }
  }
  double closed = 0.0;
  for (long p = 0; p < grid.point_count(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        for (int c = b + 1; c < m; ++c) {
          const double val = d[a][b * m + c][p] - d[b][a * m + c][p] +
                             d[c][a * m + b][p];
          closed = std::max(closed, std::abs(val));
        }
  if (m == 2) closed = 0.0;  // no 3-forms on a surface
  r.closed = closed;
  return r;
}

double hessian_invariant(const MetricField& g, const EndField& j,
                         const VolumeForm& omega, const Sym2Field& v,
                         double tol) {
  const InvariantDirectionReport r = invariant_direction_residuals(g, j, v);
  if (r.j_invariance > tol || r.closed > tol)
    throw std::invalid_argument(
        "hessian_invariant: direction residuals (invariance " +
        std::to_string(r.j_invariance) + ", closedness " +
        std::to_string(r.closed) + ") exceed " + std::to_string(tol));
  return integrate(trace_v2_ric(g, omega, v), omega);
}

KahlerIdentityReport kahler_identity_checks(const MetricField& g,
                                            const EndField& j,
                                            const Sym2Field& v, double tol) {
  const double res = membership_d_residual(g, j, v);
  if (res > tol)
    throw std::invalid_argument(
        "kahler_identity_checks: membership residual " + std::to_string(res) +
        " exceeds " + std::to_string(tol));

  const EndField vs = endomorphism_of(v, g);
  const EndSplit split = split_endomorphism(vs, j);
  const Sym2Field v_lin = sym_part(cov2_of_end(g, split.linear));
  const Sym2Field v_anti = sym_part(cov2_of_end(g, split.anti_linear));

  const ConnectionCoeffs gamma = christoffel(g);
  const Ten3Field hat_lin = hat_nabla(v_lin, g, gamma);
  const Ten3Field hat_anti = hat_nabla(v_anti, g, gamma);
  const ScalarField lhs1 = inner_full(hat_lin, hat_anti, g);

  const NablaSplit na =
      nabla_split(covariant_derivative(split.anti_linear, g, gamma), j);
  const NablaSplit nb =
      nabla_split(covariant_derivative(split.linear, g, gamma), j);
  const VecValued2Field del_a = antisym_slots(na.part10);
  const VecValued2Field dbar_b = antisym_slots(nb.part01);
  const ScalarField rhs1 = form_pairing_vv2(del_a, dbar_b, g);

  const VolumeForm vol = volume_form_of(g);
  KahlerIdentityReport report;
  report.orth_der = integrate(pointwise_abs(lhs1 + 6.0 * rhs1), vol);

  const ScalarField n10a = inner_vv2(na.part10, na.part10, g);
  const ScalarField dela_sq = form_pairing_vv2(del_a, del_a, g);
  report.der_a_del_a = integrate(pointwise_abs(n10a - dela_sq), vol);

  const ScalarField n01b = inner_vv2(nb.part01, nb.part01, g);
  const ScalarField n10b = inner_vv2(nb.part10, nb.part10, g);
  report.b_norms = integrate(pointwise_abs(n01b - n10b), vol);

  report.f_chain = integrate(pointwise_abs(n10a + rhs1), vol);
  return report;
}

MetricField kahler_potential_metric(const MetricField& g0, const EndField& j,
                                    const ScalarField& phi) {
  Sym2Field s = g0.tensor();
  const Sym2Field corr = potential_direction(j, phi);
  return MetricField(field_add(s, corr));
}

Sym2Field potential_direction(const EndField& j, const ScalarField& phi) {
  const Cov2Field beta = i_del_delbar(phi, j);
  const Cov2Field bj = compose(beta, j);
  Sym2Field out(phi.grid());
  for (long p = 0; p < out.points(); ++p)
    out.set_matrix(p, -bj.matrix_at(p));
  return out;
}

ScalarField scaled_potential(const PeriodicGrid& grid, const EndField& j,
                             std::uint64_t seed, int max_freq,
                             double target_sup) {
  ScalarField phi = band_limited_field(grid, seed, max_freq, 1.0);
  const double sup = field_sup_norm(potential_direction(j, phi));
  if (sup == 0.0) return phi;
  const double scale = target_sup / sup;
  for (long p = 0; p < phi.size(); ++p) phi[p] *= scale;
  return phi;
}

EndField projected_symmetric_endo(const MetricField& g, const EndField& j,
                                  const Sym2Field& w, EndoKind kind) {
  const EndField ws = endomorphism_of(w, g);
  const EndSplit split = split_endomorphism(ws, j);
  return kind == EndoKind::AntiLinear ? split.anti_linear : split.linear;
}

}  // namespace wvar
