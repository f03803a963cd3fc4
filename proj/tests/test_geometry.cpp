#include <cmath>

#include "doctest.h"
#include "wvar/geometry.hpp"
#include "wvar/variations.hpp"

using namespace wvar;

namespace {
constexpr double kTau = 6.283185307179586476925;

// Conformal metric e^{2 phi} delta on the 2-torus with phi = a sin(tau x).
struct Conformal {
  MetricField g;
  ScalarField phi;
};

Conformal conformal_metric(const PeriodicGrid& grid, double a) {
  ScalarField phi(grid);
  for (long p = 0; p < grid.point_count(); ++p)
    phi[p] = a * std::sin(kTau * grid.coord(p, 0));
  Sym2Field s(grid);
  for (long p = 0; p < grid.point_count(); ++p) {
    const double w = std::exp(2.0 * phi[p]);
    for (int i = 0; i < grid.dim(); ++i) s.at(p, i, i) = w;
  }
  return {MetricField(std::move(s)), phi};
}

}  // namespace

TEST_CASE("Christoffel symbols") {
  const PeriodicGrid grid = make_grid(2, 32);

  SUBCASE("vanish for constant metrics") {
    const MetricField g = identity_metric(grid);
    CHECK(field_sup_norm(christoffel(g)) == 0.0);
  }

  SUBCASE("conformal closed form") {
    const Conformal c = conformal_metric(grid, 0.05);
    const ConnectionCoeffs gamma = christoffel(c.g);
    // Gamma^k_{ij} = d_i phi delta^k_j + d_j phi delta^k_i - d_k phi delta_ij
    const ScalarField dphi = spectral_partial(c.phi, 0);
    double worst = 0.0;
    for (long p = 0; p < grid.point_count(); ++p) {
      const double d0 = dphi[p];
      const double expect[2][2][2] = {{{d0, 0.0}, {0.0, -d0}},
                                      {{0.0, d0}, {d0, 0.0}}};
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(gamma.at(p, k, i, j) -
                                             expect[k][i][j]));
    }
    CHECK(worst <= 1e-10);
  }

  SUBCASE("metric compatibility") {
    const MetricField g = perturbed_metric(grid, 3, 2, 0.1);
    const Ten3Field ng = covariant_derivative(g.tensor(), g);
    CHECK(field_sup_norm(ng) <= 1e-10);
  }
}

TEST_CASE("covariant derivative basics") {
  const PeriodicGrid grid = make_grid(2, 32);
  const MetricField g = identity_metric(grid);

  SUBCASE("constant tensor on a flat metric") {
    Mat v(2, 2);
    v << 0.3, -0.1, -0.1, 0.9;
    CHECK(field_sup_norm(covariant_derivative(constant_sym2(grid, v), g)) ==
          0.0);
  }

  SUBCASE("second application reproduces the Hessian") {
    const MetricField gc = perturbed_metric(grid, 5, 2, 0.08);
    const ScalarField f = band_limited_field(grid, 6, 2, 0.5);
    const ConnectionCoeffs gamma = christoffel(gc);
    const OneFormField df = covariant_derivative(f, gc);
    const Cov2Field ddf = covariant_derivative(df, gc, gamma);
    const Sym2Field hess = hessian_fn(f, gc, gamma);
    double worst = 0.0;
    for (long p = 0; p < grid.point_count(); ++p)
      worst = std::max(worst, (ddf.matrix_at(p) - hess.matrix_at(p))
                                  .cwiseAbs()
                                  .maxCoeff());
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("symmetrized derivative") {
  const PeriodicGrid grid = make_grid(2, 32);
  const MetricField g = identity_metric(grid);

  SUBCASE("annihilates the metric") {
    const MetricField gc = perturbed_metric(grid, 7, 2, 0.1);
    CHECK(field_sup_norm(hat_nabla(gc.tensor(), gc)) <= 1e-10);
  }

  SUBCASE("triples a fully symmetric derivative") {
    const ScalarField psi = band_limited_field(grid, 8, 2, 0.4);
    const Sym2Field v = hessian_fn(psi, g);
    const Ten3Field nv = covariant_derivative(v, g);
    const Ten3Field hv = hat_nabla(v, g);
    CHECK(field_sup_norm(field_sub(hv, field_scale(3.0, nv))) <= 1e-10);
  }
}

TEST_CASE("curvature tensors") {
  SUBCASE("flat metric") {
    const PeriodicGrid grid = make_grid(2, 16);
    const CurvaturePack c = curvature_tensors(identity_metric(grid));
    CHECK(field_sup_norm(c.riemann) == 0.0);
    CHECK(field_sup_norm(c.ricci) == 0.0);
    CHECK(sup_norm(c.scalar) == 0.0);
  }

  SUBCASE("warped product closed form") {
    const PeriodicGrid grid = make_grid(2, 32);
    Sym2Field s(grid);
    ScalarField af(grid);
    for (long p = 0; p < grid.point_count(); ++p) {
      const double x = grid.coord(p, 0);
      const double a = 1.0 + 0.1 * std::sin(kTau * x);
      af[p] = a;
      s.at(p, 0, 0) = 1.0;
      s.at(p, 1, 1) = a * a;
    }
    const MetricField g{std::move(s)};
    const CurvaturePack c = curvature_tensors(g);
    double worst = 0.0;
    for (long p = 0; p < grid.point_count(); ++p) {
      const double x = grid.coord(p, 0);
      const double a = af[p];
      const double app = -0.1 * kTau * kTau * std::sin(kTau * x);
      worst = std::max(worst, std::abs(c.ricci.at(p, 0, 0) - (-app / a)));
      worst = std::max(worst, std::abs(c.ricci.at(p, 1, 1) - (-app * a)));
      worst = std::max(worst, std::abs(c.ricci.at(p, 0, 1)));
    }
    CHECK(worst <= 1e-8);
  }

  SUBCASE("conformal scalar curvature closed form") {
    const PeriodicGrid grid = make_grid(2, 32);
    const Conformal c = conformal_metric(grid, 0.05);
    const CurvaturePack pack = curvature_tensors(c.g);
    const ScalarField ddphi =
        spectral_partial(spectral_partial(c.phi, 0), 0) +
        spectral_partial(spectral_partial(c.phi, 1), 1);
    double worst = 0.0;
    for (long p = 0; p < grid.point_count(); ++p) {
      const double expect = -2.0 * std::exp(-2.0 * 0.05 *
                                            std::sin(kTau * grid.coord(p, 0))) *
                            ddphi[p];
      worst = std::max(worst, std::abs(pack.scalar[p] - expect));
    }
    CHECK(worst <= 1e-8);
  }

  SUBCASE("symmetries on a generic metric") {
    const PeriodicGrid grid = make_grid(2, 32);
    const MetricField g = perturbed_metric(grid, 11, 2, 0.1);
    const CurvaturePack c = curvature_tensors(g);
    double ric_sym = 0.0, riem_anti = 0.0, bianchi = 0.0;
    for (long p = 0; p < grid.point_count(); ++p) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          ric_sym = std::max(ric_sym, std::abs(c.ricci.at(p, i, j) -
                                               c.ricci.at(p, j, i)));
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
              riem_anti = std::max(riem_anti,
                                   std::abs(c.riemann.at(p, l, i, j, k) +
                                            c.riemann.at(p, l, j, i, k)));
              bianchi = std::max(bianchi,
                                 std::abs(c.riemann.at(p, l, i, j, k) +
                                          c.riemann.at(p, l, j, k, i) +
                                          c.riemann.at(p, l, k, i, j)));
            }
        }
    }
    CHECK(ric_sym <= 1e-10);
    CHECK(riem_anti <= 1e-12);
    CHECK(bianchi <= 1e-9);
  }
}

TEST_CASE("Hessian of scalars") {
  const PeriodicGrid grid = make_grid(2, 32);
  const MetricField g = identity_metric(grid);

  SUBCASE("flat closed form") {
    ScalarField f(grid);
    for (long p = 0; p < grid.point_count(); ++p)
      f[p] = std::sin(kTau * grid.coord(p, 0));
    const Sym2Field h = hessian_fn(f, g);
    double worst = 0.0;
    for (long p = 0; p < grid.point_count(); ++p) {
      const double expect = -kTau * kTau * std::sin(kTau * grid.coord(p, 0));
      worst = std::max(worst, std::abs(h.at(p, 0, 0) - expect));
      worst = std::max(worst, std::abs(h.at(p, 0, 1)));
      worst = std::max(worst, std::abs(h.at(p, 1, 1)));
    }
    CHECK(worst <= 1e-9);
  }

  SUBCASE("constant scalar") {
    CHECK(field_sup_norm(hessian_fn(ScalarField(grid, 2.5), g)) == 0.0);
  }

  SUBCASE("symmetry on a generic metric") {
    // Torsion freeness: the packed output symmetrizes, so check the raw
    // second covariant derivative instead.
    const MetricField gc = perturbed_metric(grid, 13, 2, 0.1);
    const ScalarField f = band_limited_field(grid, 14, 2, 0.5);
    const ConnectionCoeffs gamma = christoffel(gc);
    const Cov2Field ddf =
        covariant_derivative(covariant_derivative(f, gc), gc, gamma);
    double worst = 0.0;
    for (long p = 0; p < grid.point_count(); ++p) {
      const Mat h = ddf.matrix_at(p);
      worst = std::max(worst, (h - h.transpose()).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("log density") {
  const PeriodicGrid grid = make_grid(2, 16);
  const MetricField g = perturbed_metric(grid, 15, 2, 0.1);

  SUBCASE("own volume gives zero") {
    CHECK(sup_norm(log_density(g, volume_form_of(g))) <= 1e-14);
  }

  SUBCASE("exponential density") {
    const ScalarField u = band_limited_field(grid, 16, 2, 0.4);
    const VolumeForm omega{pointwise_exp(-1.0 * u)};
    const MetricField gI = identity_metric(grid);
    CHECK(sup_norm(log_density(gI, omega) - u) <= 1e-13);
  }

  SUBCASE("scaling shifts by m log c") {
    const double c = 1.7;
    Sym2Field s = g.tensor();
    for (auto& x : s.store().raw()) x *= c * c;
    const MetricField gc{std::move(s)};
    const VolumeForm omega = random_volume_form(grid, 17, 2, 0.3);
    const ScalarField f0 = log_density(g, omega);
    const ScalarField f1 = log_density(gc, omega);
    ScalarField expect = f0;
    for (long p = 0; p < grid.point_count(); ++p)
      expect[p] += 2.0 * std::log(c);
    CHECK(sup_norm(f1 - expect) <= 1e-12);
  }
}

TEST_CASE("Bakry-Emery tensor") {
  const PeriodicGrid grid = make_grid(2, 32);
  const MetricField g = identity_metric(grid);

  SUBCASE("flat with its own volume") {
    CHECK(field_sup_norm(bakry_emery(g, volume_form_of(g))) <= 1e-12);
  }

  SUBCASE("flat with weighted volume reduces to the Hessian") {
    const ScalarField f = band_limited_field(grid, 18, 2, 0.4);
    ScalarField dens(grid);
    for (long p = 0; p < grid.point_count(); ++p) dens[p] = std::exp(-f[p]);
    const VolumeForm omega{dens};
    const Sym2Field ric = bakry_emery(g, omega);
    const Sym2Field hess = hessian_fn(f, g);
    CHECK(field_sup_norm(field_sub(ric, hess)) <= 1e-9);
  }

  SUBCASE("trace identity under the Riemannian volume") {
    const MetricField gc = perturbed_metric(grid, 19, 2, 0.08);
    const VolumeForm omega = random_volume_form(grid, 20, 2, 0.3);
    const VolumeForm dvg = volume_form_of(gc);
    const Sym2Field ric = bakry_emery(gc, omega);
    const ScalarField f = log_density(gc, omega);
    const Sym2Field hess = hessian_fn(f, gc);
    const double lhs =
        integrate(trace_g(field_sub(ric, hess), gc), dvg);
    const double rhs = integrate(curvature_tensors(gc).scalar, dvg);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("volume-weighted adjoint duality") {
  const PeriodicGrid grid = make_grid(2, 32);
  const MetricField g = perturbed_metric(grid, 21, 2, 0.08);
  const VolumeForm omega = random_volume_form(grid, 22, 2, 0.3);

  SUBCASE("zero tensor") {
    CHECK(field_sup_norm(omega_adjoint(Ten3Field(grid), g, omega)) == 0.0);
  }

  SUBCASE("random pairs, quadrature duality") {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Sym2Field v = band_limited_sym2(grid, 100 + i, 2, 0.5);
      Ten3Field t(grid);
      for (int c = 0; c < t.store().comps(); ++c) {
        const ScalarField f = band_limited_field(grid, 200 + 9 * i + c, 2, 0.5);
        for (long p = 0; p < grid.point_count(); ++p) t.store().at(c, p) = f[p];
      }
      // Symmetrize the last two slots so the adjoint is a symmetric tensor.
      for (long p = 0; p < grid.point_count(); ++p)
        for (int a = 0; a < 2; ++a) {
          const double s = 0.5 * (t.at(p, a, 0, 1) + t.at(p, a, 1, 0));
          t.at(p, a, 0, 1) = s;
          t.at(p, a, 1, 0) = s;
        }
      const Ten3Field nv = covariant_derivative(v, g);
      const double lhs = integrate(inner_full(nv, t, g), omega);
      const double rhs =
          integrate(inner_sym2(v, omega_adjoint(t, g, omega), g), omega);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    CHECK(worst <= 1e-8);
  }

  SUBCASE("symmetrized pairing carries the factor three") {
    const Sym2Field v = band_limited_sym2(grid, 23, 2, 0.5);
    const Ten3Field sym = hat_nabla(band_limited_sym2(grid, 24, 2, 0.5), g);
    const Ten3Field nv = covariant_derivative(v, g);
    const Ten3Field hv = hat_nabla(v, g);
    const double lhs = integrate(inner_full(hv, sym, g), omega);
    const double rhs = 3.0 * integrate(inner_full(nv, sym, g), omega);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(full_symmetry_defect(sym) <= 1e-10);
    CHECK(full_symmetry_defect(nv) > 1e-3);
    CHECK_THROWS_AS(omega_adjoint_hat(nv, g, omega), std::invalid_argument);
  }
}

TEST_CASE("dee operator") {
  const PeriodicGrid grid = make_grid(2, 32);
  const MetricField g = identity_metric(grid);

  SUBCASE("constant direction on a flat metric") {
    Mat v(2, 2);
    v << 0.4, 0.1, 0.1, -0.2;
    CHECK(field_sup_norm(dee_operator(constant_sym2(grid, v), g)) == 0.0);
  }

  SUBCASE("equals the plain derivative on fully symmetric gradients") {
    const ScalarField psi = band_limited_field(grid, 25, 2, 0.4);
    const Sym2Field v = hessian_fn(psi, g);
    const Ten3Field dv = dee_operator(v, g);
    const Ten3Field nv = covariant_derivative(v, g);
    CHECK(field_sup_norm(field_sub(dv, nv)) <= 1e-10);
  }
}

TEST_CASE("first variation of the Bakry-Emery tensor") {
  const PeriodicGrid grid = make_grid(2, 32);
  const MetricField g = perturbed_metric(grid, 26, 2, 0.06);
  const VolumeForm omega = random_volume_form(grid, 27, 2, 0.3);
  const Sym2Field v = band_limited_sym2(grid, 28, 2, 0.1);

  SUBCASE("flat, unweighted, constant direction") {
    const MetricField gI = identity_metric(grid);
    Mat c(2, 2);
    c << 0.4, 0.1, 0.1, -0.2;
    const Sym2Field vc = constant_sym2(grid, c);
    const VolumeForm dv = volume_form_of(gI);
    const Sym2Field d =
        ricci_variation(gI, dv, vc, RicciVariationPath::Divergence);
    CHECK(field_sup_norm(d) <= 1e-14);
  }

  SUBCASE("both routes agree") {
    const Sym2Field d1 = ricci_variation(g, omega, v, RicciVariationPath::Divergence);
    const Sym2Field d2 = ricci_variation(g, omega, v, RicciVariationPath::Adjoint);
    CHECK(field_sup_norm(field_sub(d1, d2)) <=
          1e-8 * std::max(1.0, field_sup_norm(d2)));
  }

  SUBCASE("centered-difference oracle") {
    const Sym2Field formula =
        ricci_variation(g, omega, v, RicciVariationPath::Adjoint);
    const auto ric_at = [&](double t) {
      Sym2Field st = g.tensor();
      auto& r = st.store().raw();
      const auto& dv = v.store().raw();
      for (size_t q = 0; q < r.size(); ++q) r[q] += t * dv[q];
      return bakry_emery(MetricField(std::move(st)), omega);
    };
    const auto diff = [&](double h) {
      return field_scale(1.0 / (2.0 * h), field_sub(ric_at(h), ric_at(-h)));
    };
    const Sym2Field fd = field_sub(field_scale(4.0 / 3.0, diff(5e-4)),
                                   field_scale(1.0 / 3.0, diff(1e-3)));
    CHECK(field_sup_norm(field_sub(formula, fd)) <=
          1e-6 * std::max(1.0, field_sup_norm(fd)));
  }
}

TEST_CASE("adjoint consistency report") {
  SUBCASE("alternating, degree two, flat") {
    const PeriodicGrid grid = make_grid(3, 8);
    const MetricField g = identity_metric(grid);
    const VolumeForm omega{ScalarField(grid, 1.0)};
    const AdjointCheckReport r =
        adjoint_consistency_check(2, TensorKind::Alternating, g, omega, 31);
    CHECK(r.pairing_residual <= 1e-10);
  }
  SUBCASE("symmetric with repeated indices, curved") {
    const PeriodicGrid grid = make_grid(2, 16);
    const MetricField g = perturbed_metric(grid, 32, 2, 0.1);
    const VolumeForm omega = random_volume_form(grid, 33, 2, 0.3);
    const AdjointCheckReport r =
        adjoint_consistency_check(2, TensorKind::Symmetric, g, omega, 34);
    CHECK(r.pairing_residual <= 1e-10);
    CHECK(r.repeated_index_residual <= 1e-10);
    CHECK(r.duality_residual <= 1e-8);
  }
  SUBCASE("degree three") {
    const PeriodicGrid g4 = make_grid(4, 6);
    const MetricField m4 = perturbed_metric(g4, 35, 1, 0.05);
    const VolumeForm o4 = random_volume_form(g4, 36, 1, 0.2);
    const AdjointCheckReport alt =
        adjoint_consistency_check(3, TensorKind::Alternating, m4, o4, 37);
    CHECK(alt.pairing_residual <= 1e-10);

    const PeriodicGrid g2 = make_grid(2, 16);
    const MetricField m2 = perturbed_metric(g2, 38, 2, 0.1);
    const VolumeForm o2 = random_volume_form(g2, 39, 2, 0.3);
    const AdjointCheckReport sym =
        adjoint_consistency_check(3, TensorKind::Symmetric, m2, o2, 40);
    CHECK(sym.pairing_residual <= 1e-10);
  }
  SUBCASE("zero input gives zero residuals") {
    const PeriodicGrid grid = make_grid(2, 8);
    const MetricField g = identity_metric(grid);
    const VolumeForm omega{ScalarField(grid, 1.0)};
    // Amplitude comes from seeded fields; the identity holds regardless, so
    // just confirm the report is populated and finite.
    const AdjointCheckReport r =
        adjoint_consistency_check(2, TensorKind::Symmetric, g, omega, 41);
    CHECK(std::isfinite(r.pairing_residual));
    CHECK(r.pairing_residual <= 1e-10);
  }
}

TEST_CASE("curvature across dimensions") {
  SUBCASE("one-dimensional metrics are flat") {
    const PeriodicGrid grid = make_grid(1, 32);
    Sym2Field s(grid);
    const ScalarField u = band_limited_field(grid, 51, 3, 0.4);
    for (long p = 0; p < grid.point_count(); ++p)
      s.at(p, 0, 0) = std::exp(u[p]);
    const CurvaturePack c = curvature_tensors(MetricField{std::move(s)});
    CHECK(sup_norm(c.scalar) <= 1e-9);
    CHECK(field_sup_norm(c.ricci) <= 1e-9);
  }

  SUBCASE("identities on a generic three-torus metric") {
    const PeriodicGrid grid = make_grid(3, 12);
    const MetricField g = perturbed_metric(grid, 52, 2, 0.08);
    CHECK(field_sup_norm(covariant_derivative(g.tensor(), g)) <= 1e-9);
    const CurvaturePack c = curvature_tensors(g);
    double ric_sym = 0.0, bianchi = 0.0;
    for (long p = 0; p < grid.point_count(); ++p)
      for (int i = 0; i < 3; ++i)
        for (int jj = 0; jj < 3; ++jj) {
          ric_sym = std::max(ric_sym, std::abs(c.ricci.at(p, i, jj) -
                                               c.ricci.at(p, jj, i)));
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
              bianchi = std::max(bianchi,
                                 std::abs(c.riemann.at(p, l, i, jj, k) +
                                          c.riemann.at(p, l, jj, k, i) +
                                          c.riemann.at(p, l, k, i, jj)));
        }
    CHECK(ric_sym <= 1e-9);
    CHECK(bianchi <= 1e-8);

    // The variation routes stay consistent away from two dimensions.
    const VolumeForm omega = random_volume_form(grid, 53, 2, 0.3);
    const Sym2Field v = band_limited_sym2(grid, 54, 2, 0.1);
    const Sym2Field d1 =
        ricci_variation(g, omega, v, RicciVariationPath::Divergence);
    const Sym2Field d2 =
        ricci_variation(g, omega, v, RicciVariationPath::Adjoint);
    CHECK(field_sup_norm(field_sub(d1, d2)) <=
          1e-8 * std::max(1.0, field_sup_norm(d2)));
    const double fv = first_variation(g, omega, v);
    const double fd = fd_oracle(g, omega, v, 1);
    CHECK(std::abs(fv - fd) / std::max(1.0, std::abs(fd)) <= 1e-6);
  }
}
