#include "wvar/variations.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wvar {

VariationReport make_variation_report(double formula, double oracle,
                                      std::uint64_t seed, const PeriodicGrid& g,
                                      const std::string& steps) {
  VariationReport r;
  r.formula_value = formula;
  r.oracle_value = oracle;
  r.abs_residual = std::abs(formula - oracle);
  r.rel_residual = r.abs_residual / std::max(1.0, std::abs(oracle));
  r.seed = seed;
  std::ostringstream os;
  os << g.dim() << "x" << g.points_per_axis();
  r.grid = os.str();
  r.steps = steps;
  return r;
}

namespace {

ScalarField grad_norm_sq(const MetricField& g, const ScalarField& f) {
  const OneFormField df = covariant_derivative(f, g);
  return inner_full(df, df, g);
}

VolumeForm weighted_volume(const MetricField& g, const ScalarField& f) {
  // e^{-f} dV_g as a density against dx.
  ScalarField d(g.grid());
  for (long p = 0; p < g.points(); ++p)
    d[p] = std::exp(-f[p]) * g.sqrt_det_at(p);
  return VolumeForm(std::move(d));
}

}  // namespace

double w_functional(const MetricField& g, const ScalarField& f) {
  require_same_grid(g.grid(), f.grid(), "w_functional");
  const int m = g.dim();
  const CurvaturePack curv = curvature_tensors(g);
  const ScalarField gn = grad_norm_sq(g, f);
  ScalarField integrand(g.grid());
  for (long p = 0; p < g.points(); ++p)
    integrand[p] = gn[p] + curv.scalar[p] + 2.0 * f[p] - m;
  return integrate(integrand, weighted_volume(g, f));
}

double w_functional_laplacian_form(const MetricField& g, const ScalarField& f) {
  require_same_grid(g.grid(), f.grid(), "w_functional_laplacian_form");
  const int m = g.dim();
  const CurvaturePack curv = curvature_tensors(g);
  const Sym2Field hess = hessian_fn(f, g);
  const ScalarField lap = trace_g(hess, g);
  ScalarField integrand(g.grid());
  for (long p = 0; p < g.points(); ++p)
    integrand[p] = lap[p] + curv.scalar[p] + 2.0 * f[p] - m;
  return integrate(integrand, weighted_volume(g, f));
}

double w_omega(const MetricField& g, const VolumeForm& omega) {
  return w_functional(g, log_density(g, omega));
}

double w_omega_trace_form(const MetricField& g, const VolumeForm& omega) {
  const int m = g.dim();
  const Sym2Field ric = bakry_emery(g, omega);
  const ScalarField f = log_density(g, omega);
  const ScalarField tr = trace_g(ric, g);
  ScalarField integrand(g.grid());
  for (long p = 0; p < g.points(); ++p)
    integrand[p] = tr[p] - m + 2.0 * f[p];
  return integrate(integrand, omega);
}

double first_variation(const MetricField& g, const VolumeForm& omega,
                       const Sym2Field& v) {
  const Sym2Field ric = bakry_emery(g, omega);
  const Sym2Field h = field_sub(g.tensor(), ric);
  return integrate(inner_sym2(v, h, g), omega);
}

double hessian_riemannian(const MetricField& g, const VolumeForm& omega,
                          const Sym2Field& v) {
  const Sym2Field ric = bakry_emery(g, omega);
  const EndField vs = endomorphism_of(v, g);
  const EndField rs = endomorphism_of(ric, g);
  ScalarField t1(g.grid());
  for (long p = 0; p < g.points(); ++p) {
    const Mat vp = vs.matrix_at(p);
    t1[p] = (vp * vp * rs.matrix_at(p)).trace();
  }
  const ConnectionCoeffs gamma = christoffel(g);
  const Ten3Field nv = covariant_derivative(v, g, gamma);
  const Ten3Field hv = hat_nabla(v, g, gamma);
  const ScalarField nsq = inner_full(nv, nv, g);
  const ScalarField hsq = inner_full(hv, hv, g);
  ScalarField integrand(g.grid());
  for (long p = 0; p < g.points(); ++p)
    integrand[p] = t1[p] + hsq[p] / 6.0 - nsq[p];
  return integrate(integrand, omega);
}

double hessian_F(const MetricField& g, const VolumeForm& omega,
                 const Sym2Field& v, double f_tol) {
  const double res = f_membership_residual(g, v);
  if (res > f_tol)
    throw std::invalid_argument(
        "hessian_F: direction is not in F_g, membership residual " +
        std::to_string(res) + " exceeds " + std::to_string(f_tol));
  const Sym2Field ric = bakry_emery(g, omega);
  const EndField vs = endomorphism_of(v, g);
  const EndField rs = endomorphism_of(ric, g);
  ScalarField t1(g.grid());
  for (long p = 0; p < g.points(); ++p) {
    const Mat vp = vs.matrix_at(p);
    t1[p] = (vp * vp * rs.matrix_at(p)).trace();
  }
  const Ten3Field nv = covariant_derivative(v, g);
  const ScalarField nsq = inner_full(nv, nv, g);
  ScalarField integrand(g.grid());
  for (long p = 0; p < g.points(); ++p) integrand[p] = t1[p] + 0.5 * nsq[p];
  return integrate(integrand, omega);
}

double bakry_emery_lower_bound(const MetricField& g, const VolumeForm& omega) {
  const Sym2Field ric = bakry_emery(g, omega);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  double lo = std::numeric_limits<double>::infinity();
  const int m = g.dim();
  for (long p = 0; p < g.points(); ++p) {
    Eigen::MatrixXd a(m, m), b(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        a(i, j) = ric.at(p, i, j);
        b(i, j) = g.at(p, i, j);
      }
    eig.compute(a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    lo = std::min(lo, eig.eigenvalues().minCoeff());
  }
  return lo;
}

double richardson_d1(const std::function<double(double)>& f, double h) {
  const auto d = [&](double hh) { return (f(hh) - f(-hh)) / (2.0 * hh); };
  return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

double richardson_d2(const std::function<double(double)>& f, double h) {
  const double f0 = f(0.0);
  const auto d = [&](double hh) {
    return (f(hh) - 2.0 * f0 + f(-hh)) / (hh * hh);
  };
  return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

double fd_oracle(const MetricField& g, const VolumeForm& omega,
                 const Sym2Field& v, int order, const FdOptions& opt) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("fd_oracle: order must be 1 or 2");

  const MetricCurve curve = order == 1 ? MetricCurve::line(g, v)
                                       : MetricCurve::geodesic(g, v);
  const auto w_at = [&](double t) { return w_omega(curve.metric(t), omega); };

  double h = opt.step;
  for (int attempt = 0;; ++attempt) {
    try {
      return order == 1 ? richardson_d1(w_at, h) : richardson_d2(w_at, h);
    } catch (const std::domain_error&) {
      // Perturbed metric left the positivity cone; shrink the stencil.
      if (attempt >= opt.max_halvings) throw;
      h *= 0.5;
    }
  }
}

}  // namespace wvar
