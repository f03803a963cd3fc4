#include "wvar/space_of_metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace wvar {

double big_g_inner(const MetricField& g, const Sym2Field& u,
                   const Sym2Field& v, const VolumeForm& omega) {
  return integrate(inner_sym2(u, v, g), omega);
}

Sym2Field gamma_G(const MetricField& g, const Sym2Field& u,
                  const Sym2Field& v) {
  require_same_grid(u.grid(), v.grid(), "gamma_G");
  Sym2Field out(u.grid());
  for (long p = 0; p < u.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    const Mat up = u.matrix_at(p);
    const Mat vp = v.matrix_at(p);
    out.set_matrix(p, -0.5 * (up * gi * vp + vp * gi * up));
  }
  return out;
}

namespace {

struct SpdSplit {
  Mat root;      // g^{1/2}
  Mat inv_root;  // g^{-1/2}
};

SpdSplit spd_split(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(g);
  if (eig.info() != Eigen::Success)
    throw std::domain_error("spd_split: eigendecomposition failed");
  const auto& q = eig.eigenvectors();
  Vect l = eig.eigenvalues();
  Vect sq = l, isq = l;
  for (int i = 0; i < l.size(); ++i) {
    sq(i) = std::sqrt(l(i));
    isq(i) = 1.0 / sq(i);
  }
  return {q * sq.asDiagonal() * q.transpose(),
          q * isq.asDiagonal() * q.transpose()};
}

}  // namespace

MetricField geodesic_at(const MetricField& g0, const Sym2Field& v0, double t) {
  require_same_grid(g0.grid(), v0.grid(), "geodesic_at");
  Sym2Field out(g0.grid());
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (long p = 0; p < g0.points(); ++p) {
    const SpdSplit s = spd_split(g0.matrix_at(p));
    const Mat w = s.inv_root * v0.matrix_at(p) * s.inv_root;
    eig.compute(w);
    if (eig.info() != Eigen::Success)
      throw std::domain_error("geodesic_at: eigendecomposition failed");
    Vect l = eig.eigenvalues();
    for (int i = 0; i < l.size(); ++i) l(i) = std::exp(t * l(i));
    const Mat e = eig.eigenvectors() * l.asDiagonal() * eig.eigenvectors().transpose();
    out.set_matrix(p, s.root * e * s.root);
  }
  return MetricField(std::move(out));
}

Sym2Field geodesic_velocity_at(const MetricField& g0, const Sym2Field& v0,
                               double t) {
  const MetricField gt = geodesic_at(g0, v0, t);
  Sym2Field out(g0.grid());
  for (long p = 0; p < g0.points(); ++p) {
    const Mat msty = g0.inverse_at(p) * v0.matrix_at(p);
    out.set_matrix(p, gt.matrix_at(p) * msty);
  }
  return out;
}

double distance_G(const MetricField& g0, const MetricField& g1,
                  const VolumeForm& omega) {
  require_same_grid(g0.grid(), g1.grid(), "distance_G");
  ScalarField sq(g0.grid());
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (long p = 0; p < g0.points(); ++p) {
    const SpdSplit s = spd_split(g0.matrix_at(p));
    const Mat w = s.inv_root * g1.matrix_at(p) * s.inv_root;
    eig.compute(w, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw std::domain_error("distance_G: eigendecomposition failed");
    double acc = 0.0;
    for (int i = 0; i < eig.eigenvalues().size(); ++i) {
      const double lg = std::log(eig.eigenvalues()(i));
      acc += lg * lg;
    }
    sq[p] = acc;
  }
  return std::sqrt(integrate(sq, omega));
}

Sym2Field curvature_G(const MetricField& g, const Sym2Field& u,
                      const Sym2Field& v, const Sym2Field& w) {
  Sym2Field out(g.grid());
  for (long p = 0; p < g.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    const Mat us = gi * u.matrix_at(p);
    const Mat vs = gi * v.matrix_at(p);
    const Mat ws = gi * w.matrix_at(p);
    const Mat comm = us * vs - vs * us;
    const Mat dbl = comm * ws - ws * comm;
    out.set_matrix(p, -0.25 * g.matrix_at(p) * dbl);
  }
  return out;
}

double sectional_G(const MetricField& g, const Sym2Field& u,
                   const Sym2Field& v, const VolumeForm& omega) {
  ScalarField sq(g.grid());
  for (long p = 0; p < g.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    const Mat gp = g.matrix_at(p);
    const Mat us = gi * u.matrix_at(p);
    const Mat vs = gi * v.matrix_at(p);
    const Mat comm = us * vs - vs * us;
    const Mat comm_t = gi * comm.transpose() * gp;
    sq[p] = (comm * comm_t).trace();
  }
  return -0.25 * integrate(sq, omega);
}

double commutator_sup(const MetricField& g, const Sym2Field& u,
                      const Sym2Field& v) {
  double sup = 0.0;
  for (long p = 0; p < g.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    const Mat us = gi * u.matrix_at(p);
    const Mat vs = gi * v.matrix_at(p);
    const Mat comm = us * vs - vs * us;
    sup = std::max(sup, comm.cwiseAbs().maxCoeff());
  }
  return sup;
}

MetricCurve MetricCurve::geodesic(MetricField g0, Sym2Field v0) {
  MetricCurve c;
  c.kind_ = Kind::Geodesic;
  c.grid_ = g0.grid();
  c.g0_ = std::move(g0);
  c.v0_ = std::move(v0);
  return c;
}

MetricCurve MetricCurve::line(MetricField g0, Sym2Field v0) {
  MetricCurve c;
  c.kind_ = Kind::Line;
  c.grid_ = g0.grid();
  c.g0_ = std::move(g0);
  c.v0_ = std::move(v0);
  return c;
}

MetricCurve MetricCurve::custom(std::function<MetricField(double)> metric,
                                std::function<Sym2Field(double)> velocity,
                                PeriodicGrid grid) {
  MetricCurve c;
  c.kind_ = Kind::Custom;
  c.metric_fn_ = std::move(metric);
  c.velocity_fn_ = std::move(velocity);
  c.grid_ = std::move(grid);
  return c;
}

MetricField MetricCurve::metric(double t) const {
  switch (kind_) {
    case Kind::Geodesic:
      return geodesic_at(g0_, v0_, t);
    case Kind::Line: {
      Sym2Field s = g0_.tensor();
      const auto& dv = v0_.store().raw();
      auto& r = s.store().raw();
      for (size_t i = 0; i < r.size(); ++i) r[i] += t * dv[i];
      return MetricField(std::move(s));
    }
    case Kind::Custom:
      return metric_fn_(t);
  }
  throw std::logic_error("MetricCurve::metric: bad kind");
}

Sym2Field MetricCurve::velocity(double t) const {
  switch (kind_) {
    case Kind::Geodesic:
      return geodesic_velocity_at(g0_, v0_, t);
    case Kind::Line:
      return v0_;
    case Kind::Custom:
      return velocity_fn_(t);
  }
  throw std::logic_error("MetricCurve::velocity: bad kind");
}

EndField MetricCurve::velocity_endomorphism(double t) const {
  const MetricField gt = metric(t);
  const Sym2Field vt = velocity(t);
  return endomorphism_of(vt, gt);
}

}  // namespace wvar
