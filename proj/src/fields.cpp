#include "wvar/fields.hpp"

#include <stdexcept>
#include <string>

namespace wvar {

Mat Sym2Field::matrix_at(long p) const {
  const int m = dim();
  Mat v(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) v(i, j) = at(p, i, j);
  return v;
}

void Sym2Field::set_matrix(long p, const Mat& v) {
  const int m = dim();
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) at(p, i, j) = 0.5 * (v(i, j) + v(j, i));
}

Mat EndField::matrix_at(long p) const {
  const int m = dim();
  Mat v(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) v(i, j) = at(p, i, j);
  return v;
}

void EndField::set_matrix(long p, const Mat& v) {
  const int m = dim();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) at(p, i, j) = v(i, j);
}

Mat Cov2Field::matrix_at(long p) const {
  const int m = dim();
  Mat v(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) v(i, j) = at(p, i, j);
  return v;
}

void Cov2Field::set_matrix(long p, const Mat& v) {
  const int m = dim();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) at(p, i, j) = v(i, j);
}

MetricField::MetricField(Sym2Field g, double eig_floor) : g_(std::move(g)) {
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  for (long p = 0; p < g_.points(); ++p) {
    eig.compute(g_.matrix_at(p), Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    if (!(lo > eig_floor))
      throw std::domain_error(
          "MetricField: eigenvalue " + std::to_string(lo) +
          " below positivity floor at point " + std::to_string(p));
  }
}

Mat MetricField::inverse_at(long p) const {
  return g_.matrix_at(p).inverse();
}

double MetricField::sqrt_det_at(long p) const {
  return std::sqrt(g_.matrix_at(p).determinant());
}

Sym2Field constant_sym2(const PeriodicGrid& grid, const Mat& v) {
  Sym2Field out(grid);
  for (long p = 0; p < out.points(); ++p) out.set_matrix(p, v);
  return out;
}

EndField constant_end(const PeriodicGrid& grid, const Mat& a) {
  EndField out(grid);
  for (long p = 0; p < out.points(); ++p) out.set_matrix(p, a);
  return out;
}

MetricField identity_metric(const PeriodicGrid& grid) {
  Mat id = Mat::Identity(grid.dim(), grid.dim());
  return MetricField(constant_sym2(grid, id));
}

Sym2Field band_limited_sym2(const PeriodicGrid& grid, std::uint64_t seed,
                            int max_freq, double amplitude) {
  Sym2Field out(grid);
  const int m = grid.dim();
  int c = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j, ++c) {
      ScalarField f = band_limited_field(grid, seed + 0x51ab5u * (c + 1),
                                         max_freq, amplitude);
      for (long p = 0; p < grid.point_count(); ++p) out.at(p, i, j) = f[p];
    }
  }
  return out;
}

MetricField perturbed_metric(const PeriodicGrid& grid, std::uint64_t seed,
                             int max_freq, double amplitude) {
  Sym2Field s = band_limited_sym2(grid, seed, max_freq, amplitude);
  const int m = grid.dim();
  for (long p = 0; p < grid.point_count(); ++p)
    for (int i = 0; i < m; ++i) s.at(p, i, i) += 1.0;
  return MetricField(std::move(s));
}

VolumeForm random_volume_form(const PeriodicGrid& grid, std::uint64_t seed,
                              int max_freq, double amplitude) {
  ScalarField u = band_limited_field(grid, seed, max_freq, amplitude);
  return VolumeForm(pointwise_exp(u));
}

VolumeForm volume_form_of(const MetricField& g) {
  ScalarField d(g.grid());
  for (long p = 0; p < g.points(); ++p) d[p] = g.sqrt_det_at(p);
  return VolumeForm(std::move(d));
}

}  // namespace wvar
