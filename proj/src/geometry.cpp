#include "wvar/geometry.hpp"

#include <stdexcept>
#include <string>

namespace wvar {

namespace {

// All partials of every component of a store: out[a][c] = d_a comp_c.
std::vector<std::vector<std::vector<double>>> all_partials(
    const detail::FieldStore& s) {
  const PeriodicGrid& g = s.grid();
  const int m = g.dim();
  std::vector<std::vector<std::vector<double>>> out(static_cast<size_t>(m));
  for (int a = 0; a < m; ++a) {
    out[static_cast<size_t>(a)].resize(static_cast<size_t>(s.comps()));
    for (int c = 0; c < s.comps(); ++c) {
      auto& buf = out[static_cast<size_t>(a)][static_cast<size_t>(c)];
      buf.resize(static_cast<size_t>(s.points()));
      spectral_partial_raw(g, s.comp(c), buf.data(), a);
    }
  }
  return out;
}

}  // namespace

ConnectionCoeffs christoffel(const MetricField& g) {
  const PeriodicGrid& grid = g.grid();
  const int m = grid.dim();
  const auto dg = all_partials(g.tensor().store());
  ConnectionCoeffs gamma(grid);
  for (long p = 0; p < grid.point_count(); ++p) {
    const Mat gi = g.inverse_at(p);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          double acc = 0.0;
          for (int l = 0; l < m; ++l) {
            const double dgi_jl = dg[i][sym2_index(m, j, l)][p];
            const double dgj_il = dg[j][sym2_index(m, i, l)][p];
            const double dgl_ij = dg[l][sym2_index(m, i, j)][p];
            acc += gi(k, l) * (dgi_jl + dgj_il - dgl_ij);
          }
          gamma.at(p, k, i, j) = 0.5 * acc;
          gamma.at(p, k, j, i) = 0.5 * acc;
        }
      }
  }
  return gamma;
}

OneFormField covariant_derivative(const ScalarField& f, const MetricField& g) {
  require_same_grid(f.grid(), g.grid(), "covariant_derivative");
  OneFormField out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) {
    ScalarField d = spectral_partial(f, a);
    for (long p = 0; p < f.size(); ++p) out.at(p, a) = d[p];
  }
  return out;
}

Cov2Field covariant_derivative(const OneFormField& w, const MetricField& g,
                               const ConnectionCoeffs& gamma) {
  require_same_grid(w.grid(), g.grid(), "covariant_derivative");
  const int m = w.dim();
  const auto dw = all_partials(w.store());
  Cov2Field out(w.grid());
  for (long p = 0; p < w.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        double acc = dw[a][b][p];
        for (int d = 0; d < m; ++d) acc -= gamma.at(p, d, a, b) * w.at(p, d);
        out.at(p, a, b) = acc;
      }
  return out;
}

Ten3Field covariant_derivative(const Sym2Field& v, const MetricField& g,
                               const ConnectionCoeffs& gamma) {
  require_same_grid(v.grid(), g.grid(), "covariant_derivative");
  const int m = v.dim();
  const auto dv = all_partials(v.store());
  Ten3Field out(v.grid());
  for (long p = 0; p < v.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = b; c < m; ++c) {
          double acc = dv[a][sym2_index(m, b, c)][p];
          for (int d = 0; d < m; ++d)
            acc -= gamma.at(p, d, a, b) * v.at(p, d, c) +
                   gamma.at(p, d, a, c) * v.at(p, b, d);
          out.at(p, a, b, c) = acc;
          out.at(p, a, c, b) = acc;
        }
  return out;
}

Ten3Field covariant_derivative(const Cov2Field& t, const MetricField& g,
                               const ConnectionCoeffs& gamma) {
  require_same_grid(t.grid(), g.grid(), "covariant_derivative");
  const int m = t.dim();
  const auto dt = all_partials(t.store());
  Ten3Field out(t.grid());
  for (long p = 0; p < t.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          double acc = dt[a][b * m + c][p];
          for (int d = 0; d < m; ++d)
            acc -= gamma.at(p, d, a, b) * t.at(p, d, c) +
                   gamma.at(p, d, a, c) * t.at(p, b, d);
          out.at(p, a, b, c) = acc;
        }
  return out;
}

Cov4Field covariant_derivative(const Ten3Field& t, const MetricField& g,
                               const ConnectionCoeffs& gamma) {
  require_same_grid(t.grid(), g.grid(), "covariant_derivative");
  const int m = t.dim();
  const auto dt = all_partials(t.store());
  Cov4Field out(t.grid());
  for (long p = 0; p < t.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          for (int e = 0; e < m; ++e) {
            double acc = dt[a][(b * m + c) * m + e][p];
            for (int d = 0; d < m; ++d)
              acc -= gamma.at(p, d, a, b) * t.at(p, d, c, e) +
                     gamma.at(p, d, a, c) * t.at(p, b, d, e) +
                     gamma.at(p, d, a, e) * t.at(p, b, c, d);
            out.at(p, a, b, c, e) = acc;
          }
  return out;
}

VecValued2Field covariant_derivative(const EndField& a, const MetricField& g,
                                     const ConnectionCoeffs& gamma) {
  require_same_grid(a.grid(), g.grid(), "covariant_derivative");
  const int m = a.dim();
  const auto da = all_partials(a.store());
  VecValued2Field out(a.grid());
  for (long p = 0; p < a.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int x = 0; x < m; ++x)
        for (int j = 0; j < m; ++j) {
          double acc = da[x][i * m + j][p];
          for (int d = 0; d < m; ++d)
            acc += gamma.at(p, i, x, d) * a.at(p, d, j) -
                   gamma.at(p, d, x, j) * a.at(p, i, d);
          out.at(p, i, x, j) = acc;
        }
  return out;
}

EndField covariant_derivative(const VecField& z, const MetricField& g,
                              const ConnectionCoeffs& gamma) {
  require_same_grid(z.grid(), g.grid(), "covariant_derivative");
  const int m = z.dim();
  const auto dz = all_partials(z.store());
  EndField out(z.grid());
  for (long p = 0; p < z.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double acc = dz[j][i][p];
        for (int d = 0; d < m; ++d) acc += gamma.at(p, i, j, d) * z.at(p, d);
        out.at(p, i, j) = acc;
      }
  return out;
}

Ten3Field covariant_derivative(const Sym2Field& v, const MetricField& g) {
  return covariant_derivative(v, g, christoffel(g));
}

VecValued2Field covariant_derivative(const EndField& a, const MetricField& g) {
  return covariant_derivative(a, g, christoffel(g));
}

Ten3Field hat_nabla(const Sym2Field& v, const MetricField& g,
                    const ConnectionCoeffs& gamma) {
  const Ten3Field nv = covariant_derivative(v, g, gamma);
  const int m = v.dim();
  Ten3Field out(v.grid());
  for (long p = 0; p < v.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          out.at(p, a, b, c) =
              nv.at(p, a, b, c) + nv.at(p, b, a, c) + nv.at(p, c, a, b);
  return out;
}

Ten3Field hat_nabla(const Sym2Field& v, const MetricField& g) {
  return hat_nabla(v, g, christoffel(g));
}

Cov4Field hat_nabla3(const Ten3Field& t, const MetricField& g,
                     const ConnectionCoeffs& gamma) {
  const Cov4Field nt = covariant_derivative(t, g, gamma);
  const int m = t.dim();
  Cov4Field out(t.grid());
  for (long p = 0; p < t.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          for (int d = 0; d < m; ++d)
            out.at(p, a, b, c, d) = nt.at(p, a, b, c, d) + nt.at(p, b, a, c, d) +
                                    nt.at(p, c, a, b, d) + nt.at(p, d, a, b, c);
  return out;
}

Ten3Field nabla_exterior(const Cov2Field& alpha, const MetricField& g,
                         const ConnectionCoeffs& gamma) {
  const Ten3Field na = covariant_derivative(alpha, g, gamma);
  const int m = alpha.dim();
  Ten3Field out(alpha.grid());
  for (long p = 0; p < alpha.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          out.at(p, a, b, c) =
              na.at(p, a, b, c) - na.at(p, b, a, c) + na.at(p, c, a, b);
  return out;
}

Cov4Field nabla_exterior(const Ten3Field& alpha, const MetricField& g,
                         const ConnectionCoeffs& gamma) {
  const Cov4Field na = covariant_derivative(alpha, g, gamma);
  const int m = alpha.dim();
  Cov4Field out(alpha.grid());
  for (long p = 0; p < alpha.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          for (int d = 0; d < m; ++d)
            out.at(p, a, b, c, d) = na.at(p, a, b, c, d) - na.at(p, b, a, c, d) +
                                    na.at(p, c, a, b, d) - na.at(p, d, a, b, c);
  return out;
}

CurvaturePack curvature_tensors(const MetricField& g) {
  const PeriodicGrid& grid = g.grid();
  const int m = grid.dim();
  const ConnectionCoeffs gamma = christoffel(g);
  const auto dgamma = all_partials(gamma.store());

  CurvaturePack pack{VecValued3Field(grid), Sym2Field(grid), ScalarField(grid)};
  for (long p = 0; p < grid.point_count(); ++p) {
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            double acc = dgamma[i][(l * m + j) * m + k][p] -
                         dgamma[j][(l * m + i) * m + k][p];
            for (int d = 0; d < m; ++d)
              acc += gamma.at(p, l, i, d) * gamma.at(p, d, j, k) -
                     gamma.at(p, l, j, d) * gamma.at(p, d, i, k);
            pack.riemann.at(p, l, i, j, k) = acc;
          }
    const Mat gi = g.inverse_at(p);
    Mat ric(m, m);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += pack.riemann.at(p, i, i, j, k);
        ric(j, k) = acc;
      }
    pack.ricci.set_matrix(p, ric);
    pack.scalar[p] = (gi * pack.ricci.matrix_at(p)).trace();
  }
  return pack;
}

Sym2Field hessian_fn(const ScalarField& f, const MetricField& g,
                     const ConnectionCoeffs& gamma) {
  const OneFormField df = covariant_derivative(f, g);
  const Cov2Field h = covariant_derivative(df, g, gamma);
  return sym_part(h);
}

Sym2Field hessian_fn(const ScalarField& f, const MetricField& g) {
  return hessian_fn(f, g, christoffel(g));
}

ScalarField log_density(const MetricField& g, const VolumeForm& omega) {
  require_same_grid(g.grid(), omega.grid(), "log_density");
  ScalarField out(g.grid());
  for (long p = 0; p < g.points(); ++p) {
    const double det = g.matrix_at(p).determinant();
    if (!(det > 0.0)) throw std::domain_error("log_density: nonpositive det g");
    out[p] = 0.5 * std::log(det) - std::log(omega.density()[p]);
  }
  return out;
}

Sym2Field bakry_emery(const MetricField& g, const VolumeForm& omega) {
  const CurvaturePack curv = curvature_tensors(g);
  const ScalarField f = log_density(g, omega);
  const Sym2Field hess = hessian_fn(f, g);
  return field_add(curv.ricci, hess);
}

namespace {

Sym2Field omega_adjoint_impl(const Ten3Field& t, const MetricField& g,
                             const VolumeForm& omega,
                             const ConnectionCoeffs& gamma) {
  const int m = t.dim();
  const Cov4Field nt = covariant_derivative(t, g, gamma);
  const ScalarField f = log_density(g, omega);
  const OneFormField df = covariant_derivative(f, g);
  Cov2Field out(t.grid());
  for (long p = 0; p < t.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    for (int c = 0; c < m; ++c)
      for (int d = 0; d < m; ++d) {
        double acc = 0.0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            acc += gi(a, b) * (-nt.at(p, a, b, c, d) +
                               df.at(p, a) * t.at(p, b, c, d));
        out.at(p, c, d) = acc;
      }
  }
  return sym_part(out);
}

}  // namespace

Sym2Field omega_adjoint(const Ten3Field& t, const MetricField& g,
                        const VolumeForm& omega) {
  return omega_adjoint_impl(t, g, omega, christoffel(g));
}

Sym2Field omega_adjoint_hat(const Ten3Field& t, const MetricField& g,
                            const VolumeForm& omega) {
  // Valid in restriction to fully symmetric 3-tensors only.
  const double defect = full_symmetry_defect(t);
  const double scale = std::max(1.0, field_sup_norm(t));
  if (defect > 1e-8 * scale)
    throw std::invalid_argument(
        "omega_adjoint_hat: tensor is not fully symmetric, defect " +
        std::to_string(defect));
  return field_scale(3.0, omega_adjoint(t, g, omega));
}

Ten3Field dee_operator(const Sym2Field& v, const MetricField& g) {
  const ConnectionCoeffs gamma = christoffel(g);
  const Ten3Field nv = covariant_derivative(v, g, gamma);
  const Ten3Field hv = hat_nabla(v, g, gamma);
  Ten3Field out = field_sub(hv, field_scale(2.0, nv));
  return out;
}

double f_membership_residual(const MetricField& g, const Sym2Field& v) {
  const EndField vs = endomorphism_of(v, g);
  const VecValued2Field nvs = covariant_derivative(vs, g);
  const int m = g.dim();
  double res = 0.0;
  for (long p = 0; p < g.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          res = std::max(res,
                         std::abs(nvs.at(p, i, a, b) - nvs.at(p, i, b, a)));
  return res;
}

Sym2Field ricci_variation(const MetricField& g, const VolumeForm& omega,
                          const Sym2Field& v, RicciVariationPath path) {
  require_same_grid(g.grid(), v.grid(), "ricci_variation");
  if (path == RicciVariationPath::Divergence) {
    // 2 dRic = e^f div(e^{-f} D v), i.e. dRic = -(1/2) adj_Omega(D v).
    const Ten3Field dv = dee_operator(v, g);
    return field_scale(-0.5, omega_adjoint(dv, g, omega));
  }
  // dRic = adj_Omega(grad v) - (1/6) adj_Omega_hat(hat v).
  const ConnectionCoeffs gamma = christoffel(g);
  const Ten3Field nv = covariant_derivative(v, g, gamma);
  const Ten3Field hv = hat_nabla(v, g, gamma);
  const Sym2Field a = omega_adjoint(nv, g, omega);
  const Sym2Field b = omega_adjoint_hat(hv, g, omega);
  return field_sub(a, field_scale(1.0 / 6.0, b));
}

namespace {

OneFormField seeded_one_form(const PeriodicGrid& grid, std::uint64_t seed,
                             int max_freq, double amplitude) {
  OneFormField out(grid);
  for (int i = 0; i < grid.dim(); ++i) {
    ScalarField f =
        band_limited_field(grid, seed + 0x77u * (i + 1), max_freq, amplitude);
    for (long p = 0; p < grid.point_count(); ++p) out.at(p, i) = f[p];
  }
  return out;
}

}  // namespace

AdjointCheckReport adjoint_consistency_check(int p, TensorKind kind,
                                             const MetricField& g,
                                             const VolumeForm& omega,
                                             std::uint64_t seed) {
  if (p != 2 && p != 3)
    throw std::invalid_argument("adjoint_consistency_check: p must be 2 or 3");
  const PeriodicGrid& grid = g.grid();
  const int m = grid.dim();
  const ConnectionCoeffs gamma = christoffel(g);
  const int max_freq = std::max(1, grid.points_per_axis() / 8);

  AdjointCheckReport report;

  OneFormField w1 = seeded_one_form(grid, seed + 1, max_freq, 0.7);
  OneFormField w2 = seeded_one_form(grid, seed + 2, max_freq, 0.7);
  OneFormField w3 = seeded_one_form(grid, seed + 3, max_freq, 0.7);
  OneFormField w4 = seeded_one_form(grid, seed + 4, max_freq, 0.7);

  if (p == 2) {
    Cov2Field alpha = kind == TensorKind::Alternating ? wedge(w1, w2)
                                                      : sym_product(w1, w2);
    Ten3Field beta = kind == TensorKind::Alternating
                         ? wedge(w1, w3, w4)
                         : sym_product(w1, w3, w4);
    const Ten3Field na = covariant_derivative(alpha, g, gamma);
    Ten3Field recombined(grid);
    if (kind == TensorKind::Alternating) {
      recombined = nabla_exterior(alpha, g, gamma);
    } else {
      for (long q = 0; q < grid.point_count(); ++q)
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
              recombined.at(q, a, b, c) = na.at(q, a, b, c) +
                                          na.at(q, b, a, c) + na.at(q, c, a, b);
    }
    const ScalarField lhs = inner_full(recombined, beta, g);
    const ScalarField rhs = inner_full(na, beta, g);
    report.pairing_residual = sup_norm(lhs - 3.0 * rhs);
  } else {
    Ten3Field alpha = kind == TensorKind::Alternating
                          ? wedge(w1, w2, w3)
                          : sym_product(w1, w2, w3);
    const Cov4Field na = covariant_derivative(alpha, g, gamma);
    Cov4Field recombined(grid);
    if (kind == TensorKind::Alternating) {
      recombined = nabla_exterior(alpha, g, gamma);
    } else {
      recombined = hat_nabla3(alpha, g, gamma);
    }
    // beta of degree 4 of the same kind.
    Cov4Field beta(grid);
    ScalarField coeff = band_limited_field(grid, seed + 9, max_freq, 1.0);
    for (long q = 0; q < grid.point_count(); ++q) {
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c)
            for (int d = 0; d < m; ++d) {
              double val = 0.0;
              if (kind == TensorKind::Alternating) {
                // epsilon tensor times a scalar field (m = 4 needed).
                const int idx[4] = {a, b, c, d};
                int perm[4] = {a, b, c, d};
                bool repeat = false;
                for (int x = 0; x < 4; ++x)
                  for (int y = x + 1; y < 4; ++y)
                    if (idx[x] == idx[y]) repeat = true;
                if (!repeat && m == 4) {
                  int sign = 1;
                  for (int x = 0; x < 4; ++x)
                    for (int y = x + 1; y < 4; ++y)
                      if (perm[x] > perm[y]) {
                        std::swap(perm[x], perm[y]);
                        sign = -sign;
                      }
                  val = sign * coeff[q];
                }
              } else {
                val = coeff[q] * (w1.at(q, a) * w1.at(q, b) * w2.at(q, c) *
                                  w2.at(q, d));
              }
              beta.at(q, a, b, c, d) = val;
            }
    }
    if (kind == TensorKind::Symmetric) {
      // Symmetrize beta over all 24 slot orders.
      Cov4Field betas(grid);
      constexpr int kP4[24][4] = {
          {0,1,2,3},{0,1,3,2},{0,2,1,3},{0,2,3,1},{0,3,1,2},{0,3,2,1},
          {1,0,2,3},{1,0,3,2},{1,2,0,3},{1,2,3,0},{1,3,0,2},{1,3,2,0},
          {2,0,1,3},{2,0,3,1},{2,1,0,3},{2,1,3,0},{2,3,0,1},{2,3,1,0},
          {3,0,1,2},{3,0,2,1},{3,1,0,2},{3,1,2,0},{3,2,0,1},{3,2,1,0}};
      for (long q = 0; q < grid.point_count(); ++q)
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
              for (int d = 0; d < m; ++d) {
                const int idx[4] = {a, b, c, d};
                double acc = 0.0;
                for (auto& pr : kP4)
                  acc += beta.at(q, idx[pr[0]], idx[pr[1]], idx[pr[2]],
                                 idx[pr[3]]);
                betas.at(q, a, b, c, d) = acc / 24.0;
              }
      beta = betas;
    }
    const ScalarField lhs = inner_full(recombined, beta, g);
    const ScalarField rhs = inner_full(na, beta, g);
    report.pairing_residual = sup_norm(lhs - 4.0 * rhs);
  }

  // Repeated-index symmetric frame tensors, p = 2 shape e*_K with K = (k,k,j).
  if (kind == TensorKind::Symmetric) {
    OneFormField e0(grid), e1(grid);
    for (long q = 0; q < grid.point_count(); ++q) {
      e0.at(q, 0) = 1.0;
      e1.at(q, m > 1 ? 1 : 0) = 1.0;
    }
    ScalarField c1 = band_limited_field(grid, seed + 21, max_freq, 1.0);
    ScalarField c2 = band_limited_field(grid, seed + 22, max_freq, 1.0);
    Cov2Field alpha = sym_product(e0, e0);
    for (long q = 0; q < grid.point_count(); ++q)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) alpha.at(q, a, b) *= c1[q];
    Ten3Field beta = sym_product(e0, e0, e1);
    for (long q = 0; q < grid.point_count(); ++q)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c) beta.at(q, a, b, c) *= c2[q];
    const Ten3Field na = covariant_derivative(alpha, g, gamma);
    Ten3Field hat(grid);
    for (long q = 0; q < grid.point_count(); ++q)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c)
            hat.at(q, a, b, c) =
                na.at(q, a, b, c) + na.at(q, b, a, c) + na.at(q, c, a, b);
    const ScalarField lhs = inner_full(hat, beta, g);
    const ScalarField rhs = inner_full(na, beta, g);
    report.repeated_index_residual = sup_norm(lhs - 3.0 * rhs);
  }

  // Integrated duality: <grad v, T>_Omega = <v, adj_Omega T>_Omega.
  {
    Sym2Field v = band_limited_sym2(grid, seed + 31, max_freq, 0.5);
    Ten3Field t(grid);
    for (int c = 0; c < t.store().comps(); ++c) {
      ScalarField f =
          band_limited_field(grid, seed + 41 + 7 * c, max_freq, 0.5);
      for (long q = 0; q < grid.point_count(); ++q) t.store().at(c, q) = f[q];
    }
    // Symmetrize the last two slots so the adjoint lands on symmetric tensors.
    for (long q = 0; q < grid.point_count(); ++q)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = b; c < m; ++c) {
            const double s = 0.5 * (t.at(q, a, b, c) + t.at(q, a, c, b));
            t.at(q, a, b, c) = s;
            t.at(q, a, c, b) = s;
          }
    const Ten3Field nv = covariant_derivative(v, g, gamma);
    const double lhs = integrate(inner_full(nv, t, g), omega);
    const double rhs = integrate(inner_sym2(v, omega_adjoint(t, g, omega), g), omega);
    report.duality_residual =
        std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  }

  return report;
}

}  // namespace wvar
