#include "wvar/scenario.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "wvar/kahler.hpp"
#include "wvar/variations.hpp"

namespace wvar {

namespace {

constexpr const char* kVersion = "0.1.0";

double rel_residual(double formula, double oracle) {
  return std::abs(formula - oracle) / std::max(1.0, std::abs(oracle));
}

CheckRecord record(const std::string& id, const std::string& anchor,
                   double formula, double oracle, double residual,
                   double tol) {
  CheckRecord r;
  r.check_id = id;
  r.anchor = anchor;
  r.formula = formula;
  r.oracle = oracle;
  r.residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;
  return r;
}

CheckRecord rel_record(const std::string& id, const std::string& anchor,
                       double formula, double oracle, double tol) {
  return record(id, anchor, formula, oracle, rel_residual(formula, oracle),
                tol);
}

Mat seeded_const_sym(int m, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed ^ 0x243f6a8885a308d3ULL);
  const auto next = [&]() {
    return 2.0 * (static_cast<double>(rng() >> 11) *
                  (1.0 / 9007199254740992.0)) - 1.0;
  };
  Mat v(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double x = scale * next();
      v(i, j) = x;
      v(j, i) = x;
    }
  return v;
}

ScalarField seeded_scalar(const PeriodicGrid& grid, std::uint64_t seed,
                          int max_freq, double amp) {
  return band_limited_field(grid, seed, max_freq, amp);
}

// g_phi-symmetric anti-linear field direction, admissible on the complex
// 1-torus for any Kahler base.
Sym2Field anti_linear_direction(const MetricField& g, const EndField& j,
                                std::uint64_t seed, int max_freq, double amp) {
  const Sym2Field w = band_limited_sym2(g.grid(), seed, max_freq, amp);
  const EndField a = projected_symmetric_endo(g, j, w, EndoKind::AntiLinear);
  return sym_part(cov2_of_end(g, a));
}

struct Scene {
  PeriodicGrid grid;
  MetricField g;
  VolumeForm omega;
};

Scene random_scene(const ScenarioConfig& cfg, std::uint64_t seed) {
  Scene s;
  s.grid = make_grid(cfg.grid_dim, cfg.grid_n);
  s.g = perturbed_metric(s.grid, seed, cfg.max_freq, cfg.amplitude);
  s.omega = random_volume_form(s.grid, seed + 0xabcdu, cfg.max_freq,
                               std::min(0.4, 6.0 * cfg.amplitude));
  return s;
}

int case_count(const ScenarioConfig& cfg, int fallback) {
  return cfg.cases > 0 ? cfg.cases : fallback;
}

// Precondition failures inside a case become failing records, never crashes.
void guarded_case(RunReport& out, const std::string& id,
                  const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    CheckRecord r;
    r.check_id = id + "-error";
    r.anchor = std::string("case aborted: ") + e.what();
    r.residual = std::numeric_limits<double>::infinity();
    r.tolerance = 0.0;
    r.pass = false;
    out.checks.push_back(r);
  }
}

// ---------------------------------------------------------------- scenarios

void scenario_first_variation(const ScenarioConfig& cfg, RunReport& out) {
  const int n = case_count(cfg, 20);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t s = cfg.seed + 17u * i;
    Scene sc = random_scene(cfg, s);
    const Sym2Field v =
        band_limited_sym2(sc.grid, s + 0x5eedu, cfg.max_freq, 2.0 * cfg.amplitude);
    const double formula = first_variation(sc.g, sc.omega, v);
    FdOptions opt;
    opt.step = cfg.fd_step;
    const double oracle = fd_oracle(sc.g, sc.omega, v, 1, opt);
    out.checks.push_back(rel_record("fv-" + std::to_string(i),
                                    "first variation, gradient form",
                                    formula, oracle,
                                    1e-6 * cfg.tol_scale));
    if (i < 3) {
      const ScalarField f = log_density(sc.g, sc.omega);
      out.checks.push_back(rel_record(
          "fv-wforms-" + std::to_string(i),
          "W gradient form vs Laplacian form", w_functional(sc.g, f),
          w_functional_laplacian_form(sc.g, f), 1e-10 * cfg.tol_scale));
      out.checks.push_back(rel_record(
          "fv-womega-" + std::to_string(i), "W_Omega vs trace form",
          w_omega(sc.g, sc.omega), w_omega_trace_form(sc.g, sc.omega),
          1e-8 * cfg.tol_scale));
    }
  }
}

void scenario_second_variation(const ScenarioConfig& cfg, RunReport& out) {
  const int n = case_count(cfg, 20);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t s = cfg.seed + 31u * i;
    Scene sc = random_scene(cfg, s);
    const Sym2Field v =
        band_limited_sym2(sc.grid, s + 0xbeefu, cfg.max_freq, 2.0 * cfg.amplitude);
    const double formula = hessian_riemannian(sc.g, sc.omega, v);
    FdOptions opt;
    opt.step = cfg.fd_step;
    const double oracle = fd_oracle(sc.g, sc.omega, v, 2, opt);
    out.checks.push_back(rel_record("sv-" + std::to_string(i),
                                    "second variation along geodesics",
                                    formula, oracle, 1e-4 * cfg.tol_scale));
    if (i < 3) {
      FdOptions fine;
      fine.step = 0.5 * cfg.fd_step;
      const double oracle2 = fd_oracle(sc.g, sc.omega, v, 2, fine);
      out.checks.push_back(rel_record("sv-selfconv-" + std::to_string(i),
                                      "order-2 oracle self-consistency",
                                      oracle, oracle2, 1e-6 * cfg.tol_scale));
    }
  }
}

void scenario_f_space(const ScenarioConfig& cfg, RunReport& out) {
  const int n = case_count(cfg, 10);
  const PeriodicGrid grid = make_grid(cfg.grid_dim, cfg.grid_n);
  const MetricField g = identity_metric(grid);
  const EndField j = grid.dim() % 2 == 0 ? standard_complex_structure(grid)
                                         : EndField(grid);
  for (int i = 0; i < n; ++i) {
    guarded_case(out, "fs-" + std::to_string(i), [&, i] {
    const std::uint64_t s = cfg.seed + 53u * i;
    const VolumeForm omega =
        random_volume_form(grid, s, cfg.max_freq, std::min(0.4, 6.0 * cfg.amplitude));
    const Sym2Field v = constant_sym2(grid, seeded_const_sym(grid.dim(), s, 0.7));
    const double hf = hessian_F(g, omega, v);
    const double hr = hessian_riemannian(g, omega, v);
    out.checks.push_back(rel_record("fs-eq-" + std::to_string(i),
                                    "restricted vs full second variation",
                                    hf, hr, 1e-8 * cfg.tol_scale));
    FdOptions opt;
    opt.step = cfg.fd_step;
    const double fd = fd_oracle(g, omega, v, 2, opt);
    out.checks.push_back(rel_record("fs-fd-" + std::to_string(i),
                                    "restricted form vs order-2 oracle", hf,
                                    fd, 1e-4 * cfg.tol_scale));

    // Quantitative lower bound from the pointwise eigenvalue floor.
    const double eps = bakry_emery_lower_bound(g, omega);
    const double vsq = integrate(inner_sym2(v, v, g), omega);
    const Ten3Field nv = covariant_derivative(v, g);
    const double nsq = integrate(inner_full(nv, nv, g), omega);
    const double bound = eps * vsq + 0.5 * nsq;
    out.checks.push_back(record("fs-bound-" + std::to_string(i),
                                "eigenvalue lower bound", hf, bound,
                                std::max(0.0, bound - hf),
                                1e-9 * cfg.tol_scale));

    // Hessian-of-potential member: nonconstant, still in the space.
    const ScalarField psi = seeded_scalar(grid, s + 0x60du, cfg.max_freq, 0.3);
    const Sym2Field v2 = hessian_fn(psi, g);
    const double hf2 = hessian_F(g, omega, v2);
    const double hr2 = hessian_riemannian(g, omega, v2);
    out.checks.push_back(rel_record("fs-hess-eq-" + std::to_string(i),
                                    "nonconstant member agreement", hf2, hr2,
                                    1e-8 * cfg.tol_scale));

    if (grid.dim() % 2 == 0) {
      const MembershipReport mr = membership_report(g, j, v2);
      const double d_res = mr.f <= 1e-9 ? mr.d : 0.0;
      out.checks.push_back(record("fs-member-" + std::to_string(i),
                                  "membership inclusion", mr.f, d_res, d_res,
                                  1e-8 * cfg.tol_scale));
    }
    });
  }
}

void scenario_kahler_fixed_j(const ScenarioConfig& cfg, RunReport& out) {
  const int n = case_count(cfg, 10);
  const PeriodicGrid grid = make_grid(2, cfg.grid_n);
  const EndField j = standard_complex_structure(grid);
  const MetricField g0 = identity_metric(grid);
  for (int i = 0; i < n; ++i) {
    guarded_case(out, "kfj-" + std::to_string(i), [&, i] {
    const std::uint64_t s = cfg.seed + 71u * i;
    const bool curved = i % 2 == 1;
    const ScalarField phi =
        scaled_potential(grid, j, s + 1, cfg.max_freq, 2.0 * cfg.amplitude);
    const MetricField g =
        curved ? kahler_potential_metric(g0, j, phi) : g0;
    const VolumeForm omega =
        random_volume_form(grid, s + 2, cfg.max_freq, std::min(0.4, 6.0 * cfg.amplitude));
    const ScalarField psi =
        scaled_potential(grid, j, s + 3, cfg.max_freq, 8.0 * cfg.amplitude);
    Sym2Field v = potential_direction(j, psi);
    const Mat c = 0.4 * Mat::Identity(2, 2) *
                  (static_cast<double>((s % 7)) / 7.0 + 0.3);
    v = field_add(v, constant_sym2(grid, c));

    const double hi = hessian_invariant(g, j, omega, v);
    const double hr = hessian_riemannian(g, omega, v);
    out.checks.push_back(rel_record("kfj-" + std::to_string(i),
                                    "invariant-direction second variation",
                                    hi, hr, 1e-6 * cfg.tol_scale));
    if (i < 2) {
      FdOptions opt;
      opt.step = cfg.fd_step;
      const double fd = fd_oracle(g, omega, v, 2, opt);
      out.checks.push_back(rel_record("kfj-fd-" + std::to_string(i),
                                      "invariant form vs order-2 oracle", hi,
                                      fd, 1e-4 * cfg.tol_scale));
    }
    });
  }
}

void scenario_kahler_main(const ScenarioConfig& cfg, RunReport& out) {
  const int n = case_count(cfg, 10);
  const PeriodicGrid grid = make_grid(2, cfg.grid_n);
  const EndField j = standard_complex_structure(grid);
  const MetricField g0 = identity_metric(grid);
  for (int i = 0; i < n; ++i) {
    guarded_case(out, "km-" + std::to_string(i), [&, i] {
    const std::uint64_t s = cfg.seed + 97u * i;
    const bool curved = i % 2 == 1;
    const ScalarField phi =
        scaled_potential(grid, j, s + 1, cfg.max_freq, 2.0 * cfg.amplitude);
    const MetricField g = curved ? kahler_potential_metric(g0, j, phi) : g0;
    const VolumeForm omega =
        random_volume_form(grid, s + 2, cfg.max_freq, std::min(0.4, 6.0 * cfg.amplitude));

    const ScalarField psi =
        scaled_potential(grid, j, s + 3, cfg.max_freq, 8.0 * cfg.amplitude);
    Sym2Field v = potential_direction(j, psi);
    v = field_add(v,
                  anti_linear_direction(g, j, s + 4, cfg.max_freq,
                                        4.0 * cfg.amplitude));
    if (!curved) {
      v = field_add(v, constant_sym2(grid, seeded_const_sym(2, s + 5, 0.3)));
    }

    const double hk = hessian_kahler(g, j, omega, v, 1e-7);
    const double hr = hessian_riemannian(g, omega, v);
    out.checks.push_back(rel_record("km-" + std::to_string(i),
                                    "Kahler-direction second variation", hk,
                                    hr, 1e-6 * cfg.tol_scale));

    if (!curved) {
      const ScalarField chi = seeded_scalar(grid, s + 6, cfg.max_freq, 0.3);
      Sym2Field vf = hessian_fn(chi, g);
      vf = field_add(vf, constant_sym2(grid, seeded_const_sym(2, s + 7, 0.4)));
      const double hkf = hessian_kahler_F(g, j, omega, vf);
      const double hrf = hessian_riemannian(g, omega, vf);
      const double hff = hessian_F(g, omega, vf);
      out.checks.push_back(rel_record("kmf-" + std::to_string(i),
                                      "fully symmetric direction, Kahler form",
                                      hkf, hrf, 1e-6 * cfg.tol_scale));
      out.checks.push_back(rel_record("kmf-f-" + std::to_string(i),
                                      "Kahler form vs restricted form", hkf,
                                      hff, 1e-8 * cfg.tol_scale));
    }
    });
  }

  // Co-vanishing of the three equivalent symmetry conditions.
  const ScalarField phi = scaled_potential(grid, j, cfg.seed + 5, cfg.max_freq, 0.1);
  const MetricField gk = kahler_potential_metric(g0, j, phi);
  for (int i = 0; i < 3; ++i) {
    const std::uint64_t s = cfg.seed + 113u * i;
    // Anti-linear zero case on the conformal Kahler base.
    const EndField a = projected_symmetric_endo(
        gk, j, band_limited_sym2(grid, s + 1, cfg.max_freq, 0.3),
        EndoKind::AntiLinear);
    const SymmetryEquivalenceReport ra =
        symmetry_equivalence(gk, j, a, EndoKind::AntiLinear);
    out.checks.push_back(record(
        "km57-anti-" + std::to_string(i), "symmetry equivalences, anti-linear",
        std::max(ra.slotwise, std::max(ra.total_sym, ra.closure)), 0.0,
        std::max(ra.slotwise, std::max(ra.total_sym, ra.closure)),
        1e-8 * cfg.tol_scale));
    // Linear zero case from a potential.
    const ScalarField psi = scaled_potential(grid, j, s + 2, cfg.max_freq, 0.4);
    const EndField b = endomorphism_of(potential_direction(j, psi), gk);
    const SymmetryEquivalenceReport rb =
        symmetry_equivalence(gk, j, b, EndoKind::Linear);
    out.checks.push_back(record(
        "km57-lin-" + std::to_string(i), "symmetry equivalences, linear",
        std::max(rb.slotwise, std::max(rb.total_sym, rb.closure)), 0.0,
        std::max(rb.slotwise, std::max(rb.total_sym, rb.closure)),
        1e-8 * cfg.tol_scale));
  }
}

void scenario_ricci_variation(const ScenarioConfig& cfg, RunReport& out) {
  const int n = case_count(cfg, 10);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t s = cfg.seed + 29u * i;
    Scene sc = random_scene(cfg, s);
    const Sym2Field v =
        band_limited_sym2(sc.grid, s + 0xfeedu, cfg.max_freq, 2.0 * cfg.amplitude);

    const Sym2Field d1 =
        ricci_variation(sc.g, sc.omega, v, RicciVariationPath::Divergence);
    const Sym2Field d2 =
        ricci_variation(sc.g, sc.omega, v, RicciVariationPath::Adjoint);
    const double scale2 = std::max(1.0, field_sup_norm(d2));
    out.checks.push_back(record("rv-paths-" + std::to_string(i),
                                "divergence route vs adjoint route",
                                field_sup_norm(d1), field_sup_norm(d2),
                                field_sup_norm(field_sub(d1, d2)) / scale2,
                                1e-8 * cfg.tol_scale));

    // Centered differences of the Bakry-Emery tensor along g + t v.
    const auto ric_at = [&](double t) {
      Sym2Field st = sc.g.tensor();
      auto& r = st.store().raw();
      const auto& dv = v.store().raw();
      for (size_t q = 0; q < r.size(); ++q) r[q] += t * dv[q];
      return bakry_emery(MetricField(std::move(st)), sc.omega);
    };
    const double h = cfg.fd_step;
    const auto diff_at = [&](double hh) {
      return field_scale(1.0 / (2.0 * hh),
                         field_sub(ric_at(hh), ric_at(-hh)));
    };
    const Sym2Field dh = diff_at(h);
    const Sym2Field dh2 = diff_at(0.5 * h);
    Sym2Field fd = field_sub(field_scale(4.0 / 3.0, dh2),
                             field_scale(1.0 / 3.0, dh));
    const double scale_fd = std::max(1.0, field_sup_norm(fd));
    out.checks.push_back(record("rv-fd-" + std::to_string(i),
                                "first variation vs centered differences",
                                field_sup_norm(d2), field_sup_norm(fd),
                                field_sup_norm(field_sub(d2, fd)) / scale_fd,
                                1e-6 * cfg.tol_scale));

    if (i < 3) {
      // Plain Ricci variation: 2 dRic = div D v - grad d Tr_g v.
      const auto ricci_plain = [&](double t) {
        Sym2Field st = sc.g.tensor();
        auto& r = st.store().raw();
        const auto& dv = v.store().raw();
        for (size_t q = 0; q < r.size(); ++q) r[q] += t * dv[q];
        return curvature_tensors(MetricField(std::move(st))).ricci;
      };
      const auto pdiff = [&](double hh) {
        return field_scale(1.0 / (2.0 * hh),
                           field_sub(ricci_plain(hh), ricci_plain(-hh)));
      };
      const Sym2Field fd_ric =
          field_sub(field_scale(4.0 / 3.0, pdiff(0.5 * h)),
                    field_scale(1.0 / 3.0, pdiff(h)));
      const VolumeForm dvg = volume_form_of(sc.g);
      const Sym2Field div_dv =
          field_scale(-1.0, omega_adjoint(dee_operator(v, sc.g), sc.g, dvg));
      const Sym2Field grad_tr = hessian_fn(trace_g(v, sc.g), sc.g);
      const Sym2Field formula =
          field_scale(0.5, field_sub(div_dv, grad_tr));
      const double sc2 = std::max(1.0, field_sup_norm(fd_ric));
      out.checks.push_back(
          record("rv-varric-" + std::to_string(i),
                 "plain Ricci variation identity", field_sup_norm(formula),
                 field_sup_norm(fd_ric),
                 field_sup_norm(field_sub(formula, fd_ric)) / sc2,
                 1e-6 * cfg.tol_scale));

      // Connection variation against centered differences of Christoffels.
      const auto gamma_at = [&](double t) {
        Sym2Field st = sc.g.tensor();
        auto& r = st.store().raw();
        const auto& dv = v.store().raw();
        for (size_t q = 0; q < r.size(); ++q) r[q] += t * dv[q];
        return christoffel(MetricField(std::move(st)));
      };
      const ConnectionCoeffs gp = gamma_at(h);
      const ConnectionCoeffs gm = gamma_at(-h);
      const ConnectionCoeffs gp2 = gamma_at(0.5 * h);
      const ConnectionCoeffs gm2 = gamma_at(-0.5 * h);
      const Ten3Field dv3 = dee_operator(v, sc.g);
      const int m = sc.grid.dim();
      double res = 0.0;
      for (long p = 0; p < sc.grid.point_count(); ++p) {
        const Mat gmat = sc.g.matrix_at(p);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            for (int mu = 0; mu < m; ++mu) {
              double lhs = 0.0;
              for (int k = 0; k < m; ++k) {
                const double dg_k =
                    (gp.at(p, k, b, mu) - gm.at(p, k, b, mu)) / (2.0 * h);
                const double dg_k2 =
                    (gp2.at(p, k, b, mu) - gm2.at(p, k, b, mu)) / h;
                lhs += 2.0 * gmat(a, k) * (4.0 * dg_k2 - dg_k) / 3.0;
              }
              res = std::max(res, std::abs(lhs - dv3.at(p, a, b, mu)));
            }
      }
      const double scale3 = std::max(1.0, field_sup_norm(dv3));
      out.checks.push_back(record("rv-conn-" + std::to_string(i),
                                  "connection variation identity", 0.0, 0.0,
                                  res / scale3, 1e-6 * cfg.tol_scale));
    }
  }
}

void scenario_metric_space(const ScenarioConfig& cfg, RunReport& out) {
  const PeriodicGrid grid = make_grid(cfg.grid_dim, cfg.grid_n);
  const MetricField gI = identity_metric(grid);
  const VolumeForm unit = VolumeForm(ScalarField(grid, 1.0)).normalized();
  const int m = grid.dim();

  // Closed-form geodesic satisfies the geodesic equation.
  {
    const MetricField g = perturbed_metric(grid, cfg.seed, cfg.max_freq,
                                           cfg.amplitude);
    const Sym2Field v =
        band_limited_sym2(grid, cfg.seed + 2, cfg.max_freq, 0.3);
    const double t0 = 0.3, h = 1e-2;
    const auto g_at = [&](double t) { return geodesic_at(g, v, t0 + t); };
    const Sym2Field gp1 = g_at(h).tensor(), gm1 = g_at(-h).tensor();
    const Sym2Field gp2 = g_at(0.5 * h).tensor(), gm2 = g_at(-0.5 * h).tensor();
    const Sym2Field gc = g_at(0.0).tensor();
    const MetricField gt = geodesic_at(g, v, t0);
    const Sym2Field vt = geodesic_velocity_at(g, v, t0);
    double res = 0.0;
    for (long p = 0; p < grid.point_count(); ++p) {
      const Mat s_h = (gp1.matrix_at(p) - 2.0 * gc.matrix_at(p) +
                       gm1.matrix_at(p)) / (h * h);
      const Mat s_h2 = (gp2.matrix_at(p) - 2.0 * gc.matrix_at(p) +
                        gm2.matrix_at(p)) / (0.25 * h * h);
      const Mat gdd = (4.0 * s_h2 - s_h) / 3.0;
      const Mat rhs = vt.matrix_at(p) * gt.inverse_at(p) * vt.matrix_at(p);
      res = std::max(res, (gdd - rhs).cwiseAbs().maxCoeff());
    }
    out.checks.push_back(record("ms-geo-ode", "geodesic equation residual",
                                res, 0.0, res, 1e-8 * cfg.tol_scale));

    // Constant velocity endomorphism along the flow.
    const auto d1 = [&](double hh) {
      return field_scale(1.0 / (2.0 * hh),
                         field_sub(g_at(hh).tensor(), g_at(-hh).tensor()));
    };
    const Sym2Field vfd = field_sub(field_scale(4.0 / 3.0, d1(0.5e-3)),
                                    field_scale(1.0 / 3.0, d1(1e-3)));
    double res2 = 0.0;
    for (long p = 0; p < grid.point_count(); ++p) {
      const Mat lhs = gt.inverse_at(p) * vfd.matrix_at(p);
      const Mat rhs = g.inverse_at(p) * v.matrix_at(p);
      res2 = std::max(res2, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    out.checks.push_back(record("ms-inv-geo",
                                "constant velocity endomorphism", res2, 0.0,
                                res2, 1e-9 * cfg.tol_scale));

    const MetricField gt0 = geodesic_at(g, v, 0.0);
    const double r0 =
        field_sup_norm(field_sub(gt0.tensor(), g.tensor()));
    out.checks.push_back(record("ms-geo-t0", "geodesic at t=0", r0, 0.0, r0,
                                1e-13 * cfg.tol_scale));
  }

  // Distance closed form on diagonal endpoints.
  {
    const double a = 0.7, b = -0.4;
    Mat d = Mat::Identity(m, m);
    d(0, 0) = std::exp(a);
    if (m > 1) d(1, 1) = std::exp(b);
    const MetricField g1(constant_sym2(grid, d));
    const double dist = distance_G(gI, g1, unit);
    const double expect = m > 1 ? std::sqrt(a * a + b * b) : std::abs(a);
    out.checks.push_back(record("ms-dist-diag", "distance, diagonal endpoints",
                                dist, expect, std::abs(dist - expect),
                                1e-12 * cfg.tol_scale));
  }

  // Distance equals geodesic arclength by quadrature in t.
  {
    const MetricField g = perturbed_metric(grid, cfg.seed + 4, cfg.max_freq,
                                           cfg.amplitude);
    const Sym2Field v =
        band_limited_sym2(grid, cfg.seed + 5, cfg.max_freq, 0.25);
    const MetricField g1 = geodesic_at(g, v, 1.0);
    const double dist = distance_G(g, g1, unit);
    // Composite Simpson over t in [0,1].
    const int nodes = 20;
    double len = 0.0;
    for (int k = 0; k <= nodes; ++k) {
      const double t = static_cast<double>(k) / nodes;
      const MetricField gt = geodesic_at(g, v, t);
      const Sym2Field vt = geodesic_velocity_at(g, v, t);
      const double speed = std::sqrt(big_g_inner(gt, vt, vt, unit));
      const double w = (k == 0 || k == nodes) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      len += w * speed;
    }
    len /= 3.0 * nodes;
    out.checks.push_back(rel_record("ms-dist-arc",
                                    "distance vs arclength quadrature", dist,
                                    len, 1e-8 * cfg.tol_scale));
  }

  // Sectional curvature: sign, worked example, two-route agreement.
  {
    double worst = -1.0;
    double worst_two_route = 0.0;
    for (int i = 0; i < 100; ++i) {
      const std::uint64_t s = cfg.seed + 13u * i;
      const MetricField g = perturbed_metric(grid, s, cfg.max_freq,
                                             cfg.amplitude);
      const Sym2Field u = band_limited_sym2(grid, s + 1, cfg.max_freq, 0.5);
      const Sym2Field v = band_limited_sym2(grid, s + 2, cfg.max_freq, 0.5);
      const double sig = sectional_G(g, u, v, unit);
      worst = std::max(worst, sig);
      if (i < 10) {
        const double two =
            big_g_inner(g, curvature_G(g, u, v, v), u, unit);
        worst_two_route =
            std::max(worst_two_route,
                     std::abs(sig - two) / std::max(1.0, std::abs(two)));
      }
    }
    out.checks.push_back(record("ms-sect-neg", "non-positive sectional sign",
                                worst, 0.0, std::max(0.0, worst),
                                1e-12 * cfg.tol_scale));
    out.checks.push_back(record("ms-sect-2path",
                                "curvature operator vs sectional", 0.0, 0.0,
                                worst_two_route, 1e-10 * cfg.tol_scale));
  }
  if (m == 2) {
    Mat us(2, 2), vs(2, 2);
    us << 0, 1, 1, 0;
    vs << 1, 0, 0, -1;
    const Sym2Field u = constant_sym2(grid, us);
    const Sym2Field v = constant_sym2(grid, vs);
    const double sig = sectional_G(gI, u, v, unit);
    out.checks.push_back(record("ms-sect-2x2", "worked 2x2 sectional value",
                                sig, -2.0, std::abs(sig + 2.0),
                                1e-12 * cfg.tol_scale));
  }

  // Triangle inequality and the Cauchy identity along a ray.
  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t s = cfg.seed + 41u * i;
      const MetricField a = perturbed_metric(grid, s, cfg.max_freq, 0.2);
      const MetricField b = perturbed_metric(grid, s + 1, cfg.max_freq, 0.2);
      const MetricField c = perturbed_metric(grid, s + 2, cfg.max_freq, 0.2);
      const double ab = distance_G(a, b, unit);
      const double bc = distance_G(b, c, unit);
      const double ac = distance_G(a, c, unit);
      worst = std::max(worst, ac - ab - bc);
    }
    out.checks.push_back(record("ms-triangle", "triangle inequality", worst,
                                0.0, std::max(0.0, worst),
                                1e-12 * cfg.tol_scale));

    const MetricField g0 = identity_metric(grid);
    const Sym2Field v =
        band_limited_sym2(grid, cfg.seed + 6, cfg.max_freq, 0.4);
    const double t1 = 0.4, t2 = 0.9;
    const MetricField gk = geodesic_at(g0, v, t1);
    const MetricField gkl = geodesic_at(g0, v, t2);
    const double lhs = distance_G(gk, gkl, unit);
    // L2 norm of the difference of logarithms against g0.
    ScalarField sq(grid);
    for (long p = 0; p < grid.point_count(); ++p) {
      const Mat mdiff = (t2 - t1) * (g0.inverse_at(p) * v.matrix_at(p));
      sq[p] = (mdiff * mdiff).trace();
    }
    const double rhs = std::sqrt(integrate(sq, unit));
    out.checks.push_back(rel_record("ms-cauchy", "log-difference identity",
                                    lhs, rhs, 1e-10 * cfg.tol_scale));
  }

  // Christoffel operator symmetry and Cauchy-Schwarz for G.
  {
    double gamma_sym = 0.0, cs = 0.0;
    for (int i = 0; i < 50; ++i) {
      const std::uint64_t s = cfg.seed + 59u * i;
      const MetricField g = perturbed_metric(grid, s, cfg.max_freq,
                                             cfg.amplitude);
      const Sym2Field u = band_limited_sym2(grid, s + 1, cfg.max_freq, 0.5);
      const Sym2Field v = band_limited_sym2(grid, s + 2, cfg.max_freq, 0.5);
      if (i < 10) {
        gamma_sym = std::max(
            gamma_sym, field_sup_norm(field_sub(gamma_G(g, u, v),
                                                gamma_G(g, v, u))));
      }
      const double guv = big_g_inner(g, u, v, unit);
      const double guu = big_g_inner(g, u, u, unit);
      const double gvv = big_g_inner(g, v, v, unit);
      cs = std::max(cs, guv * guv - guu * gvv);
    }
    out.checks.push_back(record("ms-gamma-sym", "Christoffel operator symmetry",
                                gamma_sym, 0.0, gamma_sym, 1e-15));
    out.checks.push_back(record("ms-cauchy-schwarz", "Cauchy-Schwarz for G",
                                cs, 0.0, std::max(0.0, cs), 1e-12));
  }
}

void scenario_adjoints(const ScenarioConfig& cfg, RunReport& out) {
  // Induced inner products against the combinatorial formulas.
  {
    const PeriodicGrid grid = make_grid(std::max(2, cfg.grid_dim), 16);
    const MetricField g =
        perturbed_metric(grid, cfg.seed, cfg.max_freq, cfg.amplitude);
    const int m = grid.dim();
    const auto one_form = [&](std::uint64_t s) {
      OneFormField w(grid);
      for (int i = 0; i < m; ++i) {
        ScalarField f = band_limited_field(grid, s + 7u * i, cfg.max_freq, 0.8);
        for (long p = 0; p < grid.point_count(); ++p) w.at(p, i) = f[p];
      }
      return w;
    };
    const OneFormField a1 = one_form(cfg.seed + 100);
    const OneFormField a2 = one_form(cfg.seed + 200);
    const OneFormField b1 = one_form(cfg.seed + 300);
    const OneFormField b2 = one_form(cfg.seed + 400);

    const ScalarField g11 = inner_full(a1, b1, g), g12 = inner_full(a1, b2, g);
    const ScalarField g21 = inner_full(a2, b1, g), g22 = inner_full(a2, b2, g);

    {
      const ScalarField lhs = induced_inner_p(wedge(a1, a2), wedge(b1, b2), g,
                                              TensorKind::Alternating);
      ScalarField rhs(grid);
      for (long p = 0; p < grid.point_count(); ++p)
        rhs[p] = 2.0 * (g11[p] * g22[p] - g12[p] * g21[p]);
      out.checks.push_back(record("adj-metr-ext-p2",
                                  "alternating inner product, determinant form",
                                  0.0, 0.0, sup_norm(lhs - rhs),
                                  1e-10 * cfg.tol_scale));
    }
    {
      const ScalarField lhs = induced_inner_p(
          sym_product(a1, a2), sym_product(b1, b2), g, TensorKind::Symmetric);
      ScalarField rhs(grid);
      for (long p = 0; p < grid.point_count(); ++p)
        rhs[p] = 2.0 * (g11[p] * g22[p] + g12[p] * g21[p]);
      out.checks.push_back(record("adj-metr-sym-p2",
                                  "symmetric inner product, permanent form",
                                  0.0, 0.0, sup_norm(lhs - rhs),
                                  1e-10 * cfg.tol_scale));
    }
    if (m >= 3) {
      const OneFormField a3 = one_form(cfg.seed + 500);
      const OneFormField b3 = one_form(cfg.seed + 600);
      const ScalarField g13 = inner_full(a1, b3, g);
      const ScalarField g23 = inner_full(a2, b3, g);
      const ScalarField g31 = inner_full(a3, b1, g);
      const ScalarField g32 = inner_full(a3, b2, g);
      const ScalarField g33 = inner_full(a3, b3, g);
      const auto det3 = [&](long p) {
        return g11[p] * (g22[p] * g33[p] - g23[p] * g32[p]) -
               g12[p] * (g21[p] * g33[p] - g23[p] * g31[p]) +
               g13[p] * (g21[p] * g32[p] - g22[p] * g31[p]);
      };
      const auto perm3 = [&](long p) {
        return g11[p] * (g22[p] * g33[p] + g23[p] * g32[p]) +
               g12[p] * (g21[p] * g33[p] + g23[p] * g31[p]) +
               g13[p] * (g21[p] * g32[p] + g22[p] * g31[p]);
      };
      {
        const ScalarField lhs = induced_inner_p(
            wedge(a1, a2, a3), wedge(b1, b2, b3), g, TensorKind::Alternating);
        ScalarField rhs(grid);
        for (long p = 0; p < grid.point_count(); ++p) rhs[p] = 6.0 * det3(p);
        out.checks.push_back(record("adj-metr-ext-p3",
                                    "alternating inner product, degree 3", 0.0,
                                    0.0, sup_norm(lhs - rhs),
                                    1e-10 * cfg.tol_scale));
      }
      {
        const ScalarField lhs =
            induced_inner_p(sym_product(a1, a2, a3), sym_product(b1, b2, b3),
                            g, TensorKind::Symmetric);
        ScalarField rhs(grid);
        for (long p = 0; p < grid.point_count(); ++p) rhs[p] = 6.0 * perm3(p);
        out.checks.push_back(record("adj-metr-sym-p3",
                                    "symmetric inner product, degree 3", 0.0,
                                    0.0, sup_norm(lhs - rhs),
                                    1e-10 * cfg.tol_scale));
      }
      {
        // Repeated one-forms exercise the multiplicity bookkeeping.
        const ScalarField lhs =
            induced_inner_p(sym_product(a1, a1, a2), sym_product(b1, b1, b2),
                            g, TensorKind::Symmetric);
        ScalarField rhs(grid);
        for (long p = 0; p < grid.point_count(); ++p) {
          const double h11 = g11[p], h12 = g12[p], h21 = g21[p],
                       h22 = g22[p];
          // permanent of [[h11,h11,h12],[h11,h11,h12],[h21,h21,h22]]
          rhs[p] = 6.0 * (h11 * (h11 * h22 + h12 * h21) +
                          h11 * (h11 * h22 + h12 * h21) +
                          h12 * (h11 * h21 + h11 * h21));
        }
        out.checks.push_back(record("adj-metr-sym-rep",
                                    "symmetric inner product with repeats",
                                    0.0, 0.0, sup_norm(lhs - rhs),
                                    1e-10 * cfg.tol_scale));
      }
    }
  }

  // Contraction identities for the recombined derivatives.
  {
    const PeriodicGrid g3 = make_grid(3, 8);
    const MetricField m3 = perturbed_metric(g3, cfg.seed + 11, 1, cfg.amplitude);
    const VolumeForm o3 = random_volume_form(g3, cfg.seed + 12, 1, 0.3);
    const AdjointCheckReport alt2 =
        adjoint_consistency_check(2, TensorKind::Alternating, m3, o3, cfg.seed);
    out.checks.push_back(record("adj-cntr-alt-p2",
                                "exterior recombination pairing, degree 2",
                                0.0, 0.0, alt2.pairing_residual,
                                1e-10 * cfg.tol_scale));

    const PeriodicGrid g4 = make_grid(4, 6);
    const MetricField m4 = perturbed_metric(g4, cfg.seed + 13, 1, cfg.amplitude);
    const VolumeForm o4 = random_volume_form(g4, cfg.seed + 14, 1, 0.3);
    const AdjointCheckReport alt3 =
        adjoint_consistency_check(3, TensorKind::Alternating, m4, o4, cfg.seed);
    out.checks.push_back(record("adj-cntr-alt-p3",
                                "exterior recombination pairing, degree 3",
                                0.0, 0.0, alt3.pairing_residual,
                                1e-10 * cfg.tol_scale));

    const PeriodicGrid g2 = make_grid(2, cfg.grid_n);
    const MetricField m2 = perturbed_metric(g2, cfg.seed + 15, cfg.max_freq,
                                            cfg.amplitude);
    const VolumeForm o2 = random_volume_form(g2, cfg.seed + 16, cfg.max_freq, 0.3);
    const AdjointCheckReport sym2r =
        adjoint_consistency_check(2, TensorKind::Symmetric, m2, o2, cfg.seed);
    out.checks.push_back(record("adj-cntr-sym-p2",
                                "symmetric recombination pairing, degree 2",
                                0.0, 0.0, sym2r.pairing_residual,
                                1e-10 * cfg.tol_scale));
    out.checks.push_back(record("adj-cntr-sym-rep",
                                "repeated-index symmetric pairing", 0.0, 0.0,
                                sym2r.repeated_index_residual,
                                1e-10 * cfg.tol_scale));
    out.checks.push_back(record("adj-duality", "integrated adjoint duality",
                                0.0, 0.0, sym2r.duality_residual,
                                1e-8 * cfg.tol_scale));

    const AdjointCheckReport sym3r =
        adjoint_consistency_check(3, TensorKind::Symmetric, m2, o2, cfg.seed + 1);
    out.checks.push_back(record("adj-cntr-sym-p3",
                                "symmetric recombination pairing, degree 3",
                                0.0, 0.0, sym3r.pairing_residual,
                                1e-10 * cfg.tol_scale));

    // Symmetrized-derivative adjoint equals three times the plain one.
    {
      const Sym2Field v = band_limited_sym2(g2, cfg.seed + 17, cfg.max_freq, 0.4);
      Ten3Field t(g2);
      for (int c = 0; c < t.store().comps(); ++c) {
        ScalarField f = band_limited_field(g2, cfg.seed + 19 + 3 * c,
                                           cfg.max_freq, 0.5);
        for (long p = 0; p < g2.point_count(); ++p) t.store().at(c, p) = f[p];
      }
      t = project_symmetric(t);
      const ConnectionCoeffs gamma = christoffel(m2);
      const Ten3Field nv = covariant_derivative(v, m2, gamma);
      const Ten3Field hv = hat_nabla(v, m2, gamma);
      const double lhs = integrate(inner_full(hv, t, m2), o2);
      const double rhs = 3.0 * integrate(inner_full(nv, t, m2), o2);
      out.checks.push_back(rel_record("adj-hat3",
                                      "symmetrized pairing factor", lhs, rhs,
                                      1e-10 * cfg.tol_scale));
      const double dual_lhs = integrate(inner_full(hv, t, m2), o2);
      const double dual_rhs =
          integrate(inner_sym2(v, omega_adjoint_hat(t, m2, o2), m2), o2);
      out.checks.push_back(rel_record("adj-hat-duality",
                                      "symmetrized adjoint duality", dual_lhs,
                                      dual_rhs, 1e-8 * cfg.tol_scale));
    }
  }
}

void scenario_j_ode(const ScenarioConfig& cfg, RunReport& out) {
  const PeriodicGrid grid = make_grid(2, cfg.grid_n);
  const MetricField g0 = identity_metric(grid);
  const EndField j0 = standard_complex_structure(grid);

  // Closed-form run: g_t = diag(e^{at}, e^{-at}).
  {
    const double a = 0.3;
    Mat vm(2, 2);
    vm << a, 0, 0, -a;
    const Sym2Field v = constant_sym2(grid, vm);
    const MetricCurve curve = MetricCurve::geodesic(g0, v);
    const JOdeResult run = evolve_j(curve, j0, 1.0, cfg.ode_steps);
    double dev = run.aborted ? 1.0 : 0.0;
    double omega_drift = run.aborted ? 1.0 : 0.0;
    for (size_t k = 0; k < run.samples.size(); ++k) {
      const double t = run.samples[k].t;
      Mat expect(2, 2);
      expect << 0.0, -std::exp(-a * t), std::exp(a * t), 0.0;
      const Mat got = run.j_at_samples[k].matrix_at(0);
      dev = std::max(dev, (got - expect).cwiseAbs().maxCoeff());
      const MetricField gt = curve.metric(t);
      Mat omega_expect(2, 2);
      omega_expect << 0.0, -1.0, 1.0, 0.0;
      const Mat w = gt.matrix_at(0) * got;
      omega_drift =
          std::max(omega_drift, (w - omega_expect).cwiseAbs().maxCoeff());
    }
    out.checks.push_back(record("jo-closed-form",
                                "transport against the solved run", dev, 0.0,
                                dev, 1e-8 * cfg.tol_scale));
    out.checks.push_back(record("jo-omega-const", "symplectic form drift",
                                omega_drift, 0.0, omega_drift,
                                1e-9 * cfg.tol_scale));
  }

  // Zero velocity keeps J frozen.
  {
    const Sym2Field zero(grid);
    const MetricCurve curve = MetricCurve::line(g0, zero);
    const JOdeResult run = evolve_j(curve, j0, 1.0, 16);
    double dev = 0.0;
    for (const auto& jt : run.j_at_samples)
      dev = std::max(dev, field_sup_norm(field_sub(jt, j0)));
    out.checks.push_back(record("jo-frozen", "zero-velocity transport", dev,
                                0.0, dev, 1e-15));
  }

  // Seeded parallel velocities: the Kahler residuals stay flat.
  const int runs = case_count(cfg, 3);
  for (int i = 0; i < runs; ++i) {
    const Sym2Field v =
        constant_sym2(grid, seeded_const_sym(2, cfg.seed + 7u * i, 0.4));
    const MetricCurve curve = MetricCurve::geodesic(g0, v);
    const JOdeResult run = evolve_j(curve, j0, 1.0, cfg.ode_steps);
    double worst = run.aborted ? 1.0 : 0.0;
    double der_inv = 0.0, jdot_id = 0.0, d_res_max = 0.0, parallel_max = 0.0;
    for (size_t k = 0; k < run.samples.size(); ++k) {
      const auto& smp = run.samples[k];
      worst = std::max(worst, smp.compat.max());
      der_inv = std::max(der_inv, smp.der_j_inv);
      jdot_id = std::max(jdot_id, smp.jdot_identity);
      parallel_max = std::max(parallel_max, smp.compat.parallel);
      if (k % 50 == 0) {
        const MetricField gt = curve.metric(smp.t);
        const MembershipReport mr =
            membership_report(gt, run.j_at_samples[k], curve.velocity(smp.t));
        d_res_max = std::max(d_res_max, mr.d);
      }
    }
    const std::string si = std::to_string(i);
    out.checks.push_back(record("jo-F-run-" + si,
                                "parallel-velocity Kahler residuals", worst,
                                0.0, worst, 1e-7 * cfg.tol_scale));
    out.checks.push_back(record("jo-der-j-inv-" + si,
                                "tangent identity residual", der_inv, 0.0,
                                der_inv, 1e-7 * cfg.tol_scale));
    out.checks.push_back(record("jo-jdot-id-" + si,
                                "velocity anti-linear part identity", jdot_id,
                                0.0, jdot_id, 1e-7 * cfg.tol_scale));
    // Admissible velocity: D residual within 1e-8, parallelism within 1e-7.
    out.checks.push_back(record("jo-D-band-" + si,
                                "admissible velocity keeps J parallel",
                                parallel_max, d_res_max,
                                std::max(10.0 * d_res_max, parallel_max),
                                1e-7 * cfg.tol_scale));
  }

  // Potential-line run: J frozen, spatial structure in g.
  {
    const ScalarField phi = scaled_potential(grid, j0, cfg.seed + 77, cfg.max_freq, 0.2);
    const Sym2Field v = potential_direction(j0, phi);
    const MetricCurve curve = MetricCurve::line(g0, v);
    const JOdeResult run = evolve_j(curve, j0, 1.0, 50);
    double worst = run.aborted ? 1.0 : 0.0;
    for (const auto& smp : run.samples) worst = std::max(worst, smp.compat.max());
    out.checks.push_back(record("jo-pot-run",
                                "potential-velocity Kahler residuals", worst,
                                0.0, worst, 1e-7 * cfg.tol_scale));
  }

  // Deliberately inadmissible velocity: parallelism must degrade. Needs two
  // complex dimensions; on the 1-torus every symmetric direction is
  // admissible.
  {
    const PeriodicGrid g4 = make_grid(4, 8);
    const MetricField gI4 = identity_metric(g4);
    const EndField j4 = standard_complex_structure(g4);
    ScalarField c = seeded_scalar(g4, cfg.seed + 99, 1, 0.3);
    Sym2Field v(g4);
    for (long p = 0; p < g4.point_count(); ++p)
      for (int i = 0; i < 4; ++i) v.at(p, i, i) = c[p];
    const MetricCurve curve = MetricCurve::line(gI4, v);
    const JOdeResult run = evolve_j(curve, j4, 1.0, 25);
    double d_res_min = 1e9, parallel_max = 0.0;
    for (size_t k = 0; k < run.samples.size(); ++k) {
      const auto& smp = run.samples[k];
      parallel_max = std::max(parallel_max, smp.compat.parallel);
      if (k % 10 == 0 && smp.t > 0.05) {
        const MetricField gt = curve.metric(smp.t);
        const MembershipReport mr =
            membership_report(gt, run.j_at_samples[k], curve.velocity(smp.t));
        d_res_min = std::min(d_res_min, mr.d);
      }
    }
    const bool detected = d_res_min > 1e-2 && parallel_max > 1e-6;
    out.checks.push_back(record("jo-nonD",
                                "inadmissible velocity breaks parallelism",
                                parallel_max, d_res_min, detected ? 0.0 : 1.0,
                                0.5));
  }

  // Invariant drift scales like the fourth power of the step.
  {
    Mat vm = seeded_const_sym(2, cfg.seed + 123, 0.9);
    const Sym2Field v = constant_sym2(grid, vm);
    const MetricCurve curve = MetricCurve::geodesic(g0, v);
    const auto drift = [&](int steps) {
      const JOdeResult run = evolve_j(curve, j0, 1.0, steps);
      double worst = 0.0;
      for (const auto& smp : run.samples)
        worst = std::max(worst, std::max(smp.compat.sq, smp.compat.skew));
      return worst;
    };
    const double coarse = drift(16);
    const double fine = drift(32);
    const bool ok = fine < 1e-12 || coarse / fine > 6.0;
    out.checks.push_back(record("jo-order4", "fourth-order invariant drift",
                                coarse, fine, ok ? 0.0 : 1.0, 0.5));
  }
}

void scenario_complex_decomposition(const ScenarioConfig& cfg,
                                    RunReport& out) {
  const int n = case_count(cfg, 10);
  const PeriodicGrid grid = make_grid(2, cfg.grid_n);
  const MetricField g0 = identity_metric(grid);
  const EndField j = standard_complex_structure(grid);

  for (int i = 0; i < n; ++i) {
    guarded_case(out, "cd-" + std::to_string(i), [&, i] {
    const std::uint64_t s = cfg.seed + 19u * i;
    const bool curved = i % 2 == 1;
    const ScalarField phi =
        scaled_potential(grid, j, s + 1, cfg.max_freq, 2.0 * cfg.amplitude);
    const MetricField g = curved ? kahler_potential_metric(g0, j, phi) : g0;
    const VolumeForm omega =
        random_volume_form(grid, s + 2, cfg.max_freq, std::min(0.4, 6.0 * cfg.amplitude));
    const CxDecompositionReport r = cx_decomposition_check(g, j, omega);
    out.checks.push_back(record("cd-hess-" + std::to_string(i),
                                "Hessian complex decomposition",
                                r.hessian_identity, 0.0, r.hessian_identity,
                                1e-7 * cfg.tol_scale));
    out.checks.push_back(record("cd-ric-" + std::to_string(i),
                                "Bakry-Emery complex decomposition",
                                r.ricci_identity, 0.0, r.ricci_identity,
                                1e-7 * cfg.tol_scale));

    // Identities feeding the Kahler second variation.
    Sym2Field v = potential_direction(
        j, scaled_potential(grid, j, s + 3, cfg.max_freq, 8.0 * cfg.amplitude));
    v = field_add(v,
                  anti_linear_direction(g, j, s + 4, cfg.max_freq,
                                        4.0 * cfg.amplitude));
    const KahlerIdentityReport kr = kahler_identity_checks(g, j, v, 1e-7);
    out.checks.push_back(record("cd-orth-der-" + std::to_string(i),
                                "mixed symmetrized-derivative pairing",
                                kr.orth_der, 0.0, kr.orth_der,
                                1e-7 * cfg.tol_scale));
    out.checks.push_back(record("cd-der-a-del-a-" + std::to_string(i),
                                "anti-linear derivative norm identity",
                                kr.der_a_del_a, 0.0, kr.der_a_del_a,
                                1e-7 * cfg.tol_scale));
    out.checks.push_back(record("cd-b-norms-" + std::to_string(i),
                                "linear part norm balance", kr.b_norms, 0.0,
                                kr.b_norms, 1e-7 * cfg.tol_scale));
    });
  }

  // Ricci form: flat density and the two-density consistency.
  {
    const VolumeForm flat(ScalarField(grid, 1.0));
    const double r0 = field_sup_norm(ricci_form(j, flat));
    out.checks.push_back(record("cd-ricform-flat", "flat-volume Ricci form",
                                r0, 0.0, r0, 1e-12 * cfg.tol_scale));

    const ScalarField phi = scaled_potential(grid, j, cfg.seed + 55, cfg.max_freq, 0.1);
    const MetricField gphi = kahler_potential_metric(g0, j, phi);
    const VolumeForm riem = volume_form_of(gphi);
    // Density from the hermitian determinant differs by a constant factor.
    ScalarField herm(grid);
    for (long p = 0; p < grid.point_count(); ++p) {
      const Mat gp = gphi.matrix_at(p);
      herm[p] = 0.25 * (gp(0, 0) + gp(1, 1));  // n = 1 hermitian coefficient
    }
    const VolumeForm hermv{herm};
    const Cov2Field rho1 = ricci_form(j, riem);
    const Cov2Field rho2 = ricci_form(j, hermv);
    const double dr = field_sup_norm(field_sub(rho1, rho2));
    out.checks.push_back(record("cd-ricform-2dens",
                                "Ricci form density invariance", dr, 0.0, dr,
                                1e-9 * cfg.tol_scale));
  }

  // Chain of identities on fully symmetric directions.
  {
    const ScalarField chi = seeded_scalar(grid, cfg.seed + 66, cfg.max_freq, 0.3);
    Sym2Field vf = hessian_fn(chi, g0);
    vf = field_add(vf, constant_sym2(grid, seeded_const_sym(2, cfg.seed + 67, 0.3)));
    const KahlerIdentityReport kr = kahler_identity_checks(g0, j, vf, 1e-7);
    out.checks.push_back(record("cd-f-chain", "restricted-direction chain",
                                kr.f_chain, 0.0, kr.f_chain,
                                1e-7 * cfg.tol_scale));
  }
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "first-variation", "second-variation", "f-space",
      "kahler-fixed-J",  "kahler-main",      "ricci-variation",
      "metric-space",    "adjoints",         "j-ode",
      "complex-decomposition"};
  return names;
}

RunReport run_scenario(const ScenarioConfig& cfg) {
  RunReport report;
  report.scenario = cfg.scenario;
  report.config = cfg;
  report.artifact_version = kVersion;

  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.scenario == "first-variation") {
    scenario_first_variation(cfg, report);
  } else if (cfg.scenario == "second-variation") {
    scenario_second_variation(cfg, report);
  } else if (cfg.scenario == "f-space") {
    scenario_f_space(cfg, report);
  } else if (cfg.scenario == "kahler-fixed-J") {
    scenario_kahler_fixed_j(cfg, report);
  } else if (cfg.scenario == "kahler-main") {
    scenario_kahler_main(cfg, report);
  } else if (cfg.scenario == "ricci-variation") {
    scenario_ricci_variation(cfg, report);
  } else if (cfg.scenario == "metric-space") {
    scenario_metric_space(cfg, report);
  } else if (cfg.scenario == "adjoints") {
    scenario_adjoints(cfg, report);
  } else if (cfg.scenario == "j-ode") {
    scenario_j_ode(cfg, report);
  } else if (cfg.scenario == "complex-decomposition") {
    scenario_complex_decomposition(cfg, report);
  } else {
    throw std::invalid_argument("unknown scenario '" + cfg.scenario + "'");
  }
  const auto t1 = std::chrono::steady_clock::now();
  report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  return report;
}

bool RunReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = true;
      for (char ch : line)
        if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
      if (blank) continue;
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_config_entry(ScenarioConfig& cfg, const std::string& key,
                        const std::string& value) {
  const auto parse_grid = [&](const std::string& v) {
    const auto x = v.find('x');
    if (x == std::string::npos)
      throw std::invalid_argument("grid must look like 2x32, got " + v);
    cfg.grid_dim = std::stoi(v.substr(0, x));
    cfg.grid_n = std::stoi(v.substr(x + 1));
  };
  if (key == "scenario") cfg.scenario = value;
  else if (key == "grid") parse_grid(value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "amplitude") cfg.amplitude = std::stod(value);
  else if (key == "max_freq") cfg.max_freq = std::stoi(value);
  else if (key == "fd_step") cfg.fd_step = std::stod(value);
  else if (key == "ode_steps") cfg.ode_steps = std::stoi(value);
  else if (key == "tol_scale") cfg.tol_scale = std::stod(value);
  else if (key == "cases") cfg.cases = std::stoi(value);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

std::string to_json(const RunReport& report) {
  nlohmann::json j;
  j["artifact_version"] = report.artifact_version;
  j["scenario"] = report.scenario;
  nlohmann::json cfg;
  cfg["scenario"] = report.config.scenario;
  cfg["grid"] = std::to_string(report.config.grid_dim) + "x" +
                std::to_string(report.config.grid_n);
  cfg["seed"] = report.config.seed;
  cfg["amplitude"] = report.config.amplitude;
  cfg["max_freq"] = report.config.max_freq;
  cfg["fd_step"] = report.config.fd_step;
  cfg["ode_steps"] = report.config.ode_steps;
  cfg["tol_scale"] = report.config.tol_scale;
  cfg["cases"] = report.config.cases;
  j["config"] = cfg;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json jc;
    jc["check_id"] = c.check_id;
    jc["anchor"] = c.anchor;
    jc["formula"] = c.formula;
    jc["oracle"] = c.oracle;
    jc["residual"] = c.residual;
    jc["tolerance"] = c.tolerance;
    jc["pass"] = c.pass;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["all_pass"] = report.all_pass();
  return j.dump(2) + "\n";
}

std::string to_csv(const RunReport& report) {
  std::ostringstream os;
  os << "check_id,anchor,formula,oracle,residual,tol,pass\n";
  char buf[64];
  const auto num = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17e", x);
    return std::string(buf);
  };
  for (const auto& c : report.checks) {
    std::string anchor = c.anchor;
    for (auto& ch : anchor)
      if (ch == ',') ch = ';';
    os << c.check_id << "," << anchor << "," << num(c.formula) << ","
       << num(c.oracle) << "," << num(c.residual) << "," << num(c.tolerance)
       << "," << (c.pass ? "true" : "false") << "\n";
  }
  return os.str();
}

void emit(const RunReport& report, ReportFormat format,
          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("emit: cannot write to " + path);
  out << (format == ReportFormat::Json ? to_json(report) : to_csv(report));
  if (!out) throw std::runtime_error("emit: write failed for " + path);
}

}  // namespace wvar
