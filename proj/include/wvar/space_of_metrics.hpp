#pragma once

// The Riemannian geometry of the space of metrics with the L^2-type inner
// product G_g(u,v) = int <u,v>_g Omega: Christoffel operator, closed-form
// geodesics through pointwise matrix exponentials, the induced distance,
// the curvature operator and its non-positive sectional curvature.

#include <functional>

#include "wvar/tensor.hpp"

namespace wvar {

// G_g(u,v) = int <u,v>_g Omega.
double big_g_inner(const MetricField& g, const Sym2Field& u,
                   const Sym2Field& v, const VolumeForm& omega);

// 2 Gamma_G(g)(u,v) = -u v*_g - v u*_g.
Sym2Field gamma_G(const MetricField& g, const Sym2Field& u,
                  const Sym2Field& v);

// g_t = g0 exp(t g0^{-1} v0), evaluated pointwise through the similarity
// g0^{-1/2}; symmetric positive definite for every t.
MetricField geodesic_at(const MetricField& g0, const Sym2Field& v0, double t);

// Velocity of the geodesic: dg_t = g_t (g0^{-1} v0).
Sym2Field geodesic_velocity_at(const MetricField& g0, const Sym2Field& v0,
                               double t);

// d_G(g0,g1) = [ int Tr (log(g0^{-1} g1))^2 Omega ]^{1/2}.
double distance_G(const MetricField& g0, const MetricField& g1,
                  const VolumeForm& omega);

// R_G(g)(u,v)w = -(1/4) g [[u*_g, v*_g], w*_g].
Sym2Field curvature_G(const MetricField& g, const Sym2Field& u,
                      const Sym2Field& v, const Sym2Field& w);

// sigma_G(u,v) = -(1/4) int |[u*_g, v*_g]|^2_g Omega <= 0.
double sectional_G(const MetricField& g, const Sym2Field& u,
                   const Sym2Field& v, const VolumeForm& omega);

// Pointwise commutator sup norm, used for the "zero iff commuting" checks.
double commutator_sup(const MetricField& g, const Sym2Field& u,
                      const Sym2Field& v);

// A parametrized family t -> g_t with velocity, used by the variation
// oracles and the complex-structure transport.
class MetricCurve {
 public:
  static MetricCurve geodesic(MetricField g0, Sym2Field v0);
  static MetricCurve line(MetricField g0, Sym2Field v0);
  static MetricCurve custom(std::function<MetricField(double)> metric,
                            std::function<Sym2Field(double)> velocity,
                            PeriodicGrid grid);

  MetricField metric(double t) const;
  Sym2Field velocity(double t) const;
  // g_t^{-1} dg_t as an endomorphism field.
  EndField velocity_endomorphism(double t) const;
  const PeriodicGrid& grid() const { return grid_; }

 private:
  enum class Kind { Geodesic, Line, Custom };
  Kind kind_ = Kind::Geodesic;
  MetricField g0_;
  Sym2Field v0_;
  std::function<MetricField(double)> metric_fn_;
  std::function<Sym2Field(double)> velocity_fn_;
  PeriodicGrid grid_;
};

}  // namespace wvar
