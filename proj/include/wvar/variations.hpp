#pragma once

// The W-functional, its first variation, and the total second variation
// along exact geodesics in the space of metrics, each backed by Richardson-
// extrapolated finite-difference oracles.

#include <cstdint>
#include <string>

#include "wvar/geometry.hpp"
#include "wvar/space_of_metrics.hpp"

namespace wvar {

struct VariationReport {
  double formula_value = 0.0;
  double oracle_value = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  std::uint64_t seed = 0;
  std::string grid;
  std::string steps;
};

VariationReport make_variation_report(double formula, double oracle,
                                      std::uint64_t seed, const PeriodicGrid& g,
                                      const std::string& steps);

// W(g,f) = int (|grad f|^2 + Scal + 2f - m) e^{-f} dV_g.
double w_functional(const MetricField& g, const ScalarField& f);
// Same value through the Laplacian form of the integrand.
double w_functional_laplacian_form(const MetricField& g, const ScalarField& f);

// W_Omega(g) = W(g, log(dV_g/Omega)).
double w_omega(const MetricField& g, const VolumeForm& omega);
// Equivalent trace form int (Tr_g(Ric_g(Omega) - g) + 2 log(dV_g/Omega)) Omega.
double w_omega_trace_form(const MetricField& g, const VolumeForm& omega);

// D W_Omega(v) = int <v, g - Ric_g(Omega)>_g Omega.
double first_variation(const MetricField& g, const VolumeForm& omega,
                       const Sym2Field& v);

// Total second variation along the geodesic with initial velocity v:
// int <v Ric*_g(Omega), v> Omega + int [ (1/6)|hat v|^2 - |grad v|^2 ] Omega.
double hessian_riemannian(const MetricField& g, const VolumeForm& omega,
                          const Sym2Field& v);

// Restriction of the second variation to directions with fully symmetric
// grad v: int [ <v Ric*_g(Omega), v> + (1/2)|grad v|^2 ] Omega. Throws if the
// membership residual exceeds f_tol, reporting the measured residual.
double hessian_F(const MetricField& g, const VolumeForm& omega,
                 const Sym2Field& v, double f_tol = 1e-8);

// Largest eps with Ric_g(Omega) >= eps g pointwise on the grid (the minimum
// generalized eigenvalue over all points; may be negative).
double bakry_emery_lower_bound(const MetricField& g, const VolumeForm& omega);

struct FdOptions {
  double step = 1e-3;   // coarse step; the ladder is {step, step/2}
  int max_halvings = 20;
};

// Richardson-extrapolated central difference of t -> W_Omega(g_t):
// order 1 along the straight line g + t v, order 2 along the exact geodesic.
// Halves the step if a perturbed metric leaves the positivity cone.
double fd_oracle(const MetricField& g, const VolumeForm& omega,
                 const Sym2Field& v, int order, const FdOptions& opt = {});

// Generic Richardson helpers shared with the other variation checks.
double richardson_d1(const std::function<double(double)>& f, double h);
double richardson_d2(const std::function<double(double)>& f, double h);

}  // namespace wvar
