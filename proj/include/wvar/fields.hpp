#pragma once

// Tensor fields on a periodic grid, stored componentwise in the global
// coordinate frame. Covariant tensors carry all indices down; EndField and
// the vector-valued types carry one index up. Component layout is
// component-major: comp c of point p lives at data[c * point_count + p].

#include <Eigen/Dense>

#include "wvar/grid.hpp"

namespace wvar {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Vect = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

namespace detail {

class FieldStore {
 public:
  FieldStore() = default;
  FieldStore(const PeriodicGrid& grid, int comps)
      : grid_(grid),
        comps_(comps),
        data_(static_cast<size_t>(comps) * grid.point_count(), 0.0) {}

  const PeriodicGrid& grid() const { return grid_; }
  int comps() const { return comps_; }
  long points() const { return grid_.point_count(); }
  double& at(int c, long p) { return data_[static_cast<size_t>(c) * points() + p]; }
  double at(int c, long p) const { return data_[static_cast<size_t>(c) * points() + p]; }
  double* comp(int c) { return data_.data() + static_cast<size_t>(c) * points(); }
  const double* comp(int c) const { return data_.data() + static_cast<size_t>(c) * points(); }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

 private:
  PeriodicGrid grid_;
  int comps_ = 0;
  std::vector<double> data_;
};

}  // namespace detail

inline int sym2_index(int m, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * m - i * (i - 1) / 2 + (j - i);
}
inline int sym2_comp_count(int m) { return m * (m + 1) / 2; }

// Symmetric covariant 2-tensor, upper triangle stored once.
class Sym2Field {
 public:
  Sym2Field() = default;
  explicit Sym2Field(const PeriodicGrid& grid)
      : s_(grid, sym2_comp_count(grid.dim())) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int i, int j) { return s_.at(sym2_index(dim(), i, j), p); }
  double at(long p, int i, int j) const { return s_.at(sym2_index(dim(), i, j), p); }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

  Mat matrix_at(long p) const;
  void set_matrix(long p, const Mat& v);  // symmetrizes

 private:
  detail::FieldStore s_;
};

// Endomorphism field A^i_j, full m x m, comp index i*m + j.
class EndField {
 public:
  EndField() = default;
  explicit EndField(const PeriodicGrid& grid)
      : s_(grid, grid.dim() * grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int i, int j) { return s_.at(i * dim() + j, p); }
  double at(long p, int i, int j) const { return s_.at(i * dim() + j, p); }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

  Mat matrix_at(long p) const;
  void set_matrix(long p, const Mat& v);

 private:
  detail::FieldStore s_;
};

// General covariant 2-tensor T_ij (not necessarily symmetric).
class Cov2Field {
 public:
  Cov2Field() = default;
  explicit Cov2Field(const PeriodicGrid& grid)
      : s_(grid, grid.dim() * grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int i, int j) { return s_.at(i * dim() + j, p); }
  double at(long p, int i, int j) const { return s_.at(i * dim() + j, p); }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

  Mat matrix_at(long p) const;
  void set_matrix(long p, const Mat& v);

 private:
  detail::FieldStore s_;
};

// Covariant 3-tensor T_ijk.
class Ten3Field {
 public:
  Ten3Field() = default;
  explicit Ten3Field(const PeriodicGrid& grid)
      : s_(grid, grid.dim() * grid.dim() * grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int i, int j, int k) {
    return s_.at((i * dim() + j) * dim() + k, p);
  }
  double at(long p, int i, int j, int k) const {
    return s_.at((i * dim() + j) * dim() + k, p);
  }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

 private:
  detail::FieldStore s_;
};

// Covariant 4-tensor T_ijkl.
class Cov4Field {
 public:
  Cov4Field() = default;
  explicit Cov4Field(const PeriodicGrid& grid)
      : s_(grid, grid.dim() * grid.dim() * grid.dim() * grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int i, int j, int k, int l) {
    return s_.at(((i * dim() + j) * dim() + k) * dim() + l, p);
  }
  double at(long p, int i, int j, int k, int l) const {
    return s_.at(((i * dim() + j) * dim() + k) * dim() + l, p);
  }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

 private:
  detail::FieldStore s_;
};

// Vector field Z^i.
class VecField {
 public:
  VecField() = default;
  explicit VecField(const PeriodicGrid& grid) : s_(grid, grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int i) { return s_.at(i, p); }
  double at(long p, int i) const { return s_.at(i, p); }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

 private:
  detail::FieldStore s_;
};

// One-form field w_i.
class OneFormField {
 public:
  OneFormField() = default;
  explicit OneFormField(const PeriodicGrid& grid) : s_(grid, grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int i) { return s_.at(i, p); }
  double at(long p, int i) const { return s_.at(i, p); }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

 private:
  detail::FieldStore s_;
};

// T_X-valued 2-tensor T^i_{ab}: value index i up, two covariant slots.
class VecValued2Field {
 public:
  VecValued2Field() = default;
  explicit VecValued2Field(const PeriodicGrid& grid)
      : s_(grid, grid.dim() * grid.dim() * grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int i, int a, int b) {
    return s_.at((i * dim() + a) * dim() + b, p);
  }
  double at(long p, int i, int a, int b) const {
    return s_.at((i * dim() + a) * dim() + b, p);
  }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

 private:
  detail::FieldStore s_;
};

// T_X-valued 3-tensor R^l_{ijk} (the Riemann shape).
class VecValued3Field {
 public:
  VecValued3Field() = default;
  explicit VecValued3Field(const PeriodicGrid& grid)
      : s_(grid, grid.dim() * grid.dim() * grid.dim() * grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int l, int i, int j, int k) {
    return s_.at(((l * dim() + i) * dim() + j) * dim() + k, p);
  }
  double at(long p, int l, int i, int j, int k) const {
    return s_.at(((l * dim() + i) * dim() + j) * dim() + k, p);
  }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

 private:
  detail::FieldStore s_;
};

constexpr double kEigFloor = 1e-10;

// Riemannian metric: Sym2Field with a pointwise positive-definiteness check.
class MetricField {
 public:
  MetricField() = default;
  // Throws std::domain_error if any eigenvalue is below the floor.
  explicit MetricField(Sym2Field g, double eig_floor = kEigFloor);

  const PeriodicGrid& grid() const { return g_.grid(); }
  long points() const { return g_.points(); }
  int dim() const { return g_.dim(); }
  const Sym2Field& tensor() const { return g_; }
  double at(long p, int i, int j) const { return g_.at(p, i, j); }

  Mat matrix_at(long p) const { return g_.matrix_at(p); }
  Mat inverse_at(long p) const;
  double sqrt_det_at(long p) const;

 private:
  Sym2Field g_;
};

// Fill helpers.
Sym2Field constant_sym2(const PeriodicGrid& grid, const Mat& v);
EndField constant_end(const PeriodicGrid& grid, const Mat& a);
MetricField identity_metric(const PeriodicGrid& grid);

// Seeded band-limited symmetric 2-tensor: each component an independent
// band-limited scalar drawn from a per-component sub-seed.
Sym2Field band_limited_sym2(const PeriodicGrid& grid, std::uint64_t seed,
                            int max_freq, double amplitude);

// Identity plus a band-limited symmetric perturbation; throws if not SPD.
MetricField perturbed_metric(const PeriodicGrid& grid, std::uint64_t seed,
                             int max_freq, double amplitude);

// Volume form with density exp(band-limited field).
VolumeForm random_volume_form(const PeriodicGrid& grid, std::uint64_t seed,
                              int max_freq, double amplitude);

// Riemannian volume form of g (density sqrt(det g)).
VolumeForm volume_form_of(const MetricField& g);

// Elementwise arithmetic shared by all field types.
template <typename F>
F field_add(const F& a, const F& b) {
  require_same_grid(a.grid(), b.grid(), "field_add");
  F out = a;
  auto& r = out.store().raw();
  const auto& rb = b.store().raw();
  for (size_t i = 0; i < r.size(); ++i) r[i] += rb[i];
  return out;
}

template <typename F>
F field_sub(const F& a, const F& b) {
  require_same_grid(a.grid(), b.grid(), "field_sub");
  F out = a;
  auto& r = out.store().raw();
  const auto& rb = b.store().raw();
  for (size_t i = 0; i < r.size(); ++i) r[i] -= rb[i];
  return out;
}

template <typename F>
F field_scale(double c, const F& a) {
  F out = a;
  for (auto& x : out.store().raw()) x *= c;
  return out;
}

template <typename F>
double field_sup_norm(const F& a) {
  double sup = 0.0;
  for (double x : a.store().raw()) sup = std::max(sup, std::abs(x));
  return sup;
}

}  // namespace wvar
