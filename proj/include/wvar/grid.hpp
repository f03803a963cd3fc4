#pragma once

// Uniform periodic lattices on the flat torus R^m/Z^m, scalar fields sampled
// on them, spectral (trigonometric-interpolant) differentiation and lattice
// quadrature. Everything here is deterministic: quadrature reduces in a fixed
// lexicographic point order and the seeded field generator yields bitwise
// identical output for identical inputs.

#include <cstdint>
#include <memory>
#include <vector>

namespace wvar {

class PeriodicGrid {
 public:
  PeriodicGrid() = default;

  int dim() const { return d_->m; }
  int points_per_axis() const { return d_->n; }
  double spacing() const { return d_->h; }
  long point_count() const { return d_->count; }
  long stride(int axis) const { return d_->strides[axis]; }

  // Lexicographic index, axis 0 slowest.
  long index(const int* k) const;
  void unindex(long idx, int* k) const;
  double coord(long idx, int axis) const;

  // N x N row-major derivative matrix of the trigonometric interpolant.
  const std::vector<double>& derivative_matrix() const { return d_->deriv; }

  bool valid() const { return static_cast<bool>(d_); }
  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) {
    return a.d_->m == b.d_->m && a.d_->n == b.d_->n;
  }

 private:
  struct Data {
    int m = 0;
    int n = 0;
    double h = 0.0;
    long count = 0;
    std::vector<long> strides;
    std::vector<double> deriv;
  };
  std::shared_ptr<const Data> d_;
  friend PeriodicGrid make_grid(int, int);
};

// m in {1,2,3,4}; n even with 4 <= n <= 256. Odd n is rejected: real
// trigonometric differentiation needs an unambiguous Nyquist convention.
PeriodicGrid make_grid(int dim, int points_per_axis);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const PeriodicGrid& grid, double fill = 0.0)
      : grid_(grid), v_(static_cast<size_t>(grid.point_count()), fill) {}

  const PeriodicGrid& grid() const { return grid_; }
  long size() const { return static_cast<long>(v_.size()); }
  double& operator[](long p) { return v_[static_cast<size_t>(p)]; }
  double operator[](long p) const { return v_[static_cast<size_t>(p)]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

 private:
  PeriodicGrid grid_;
  std::vector<double> v_;
};

// Strictly positive density against the coordinate measure dx.
class VolumeForm {
 public:
  VolumeForm() = default;
  // Throws std::domain_error if the density is not positive everywhere.
  explicit VolumeForm(ScalarField density);

  const PeriodicGrid& grid() const { return density_.grid(); }
  const ScalarField& density() const { return density_; }
  double mass() const;
  VolumeForm normalized() const;  // unit total mass

 private:
  ScalarField density_;
};

// Derivative of the trigonometric interpolant along one axis; exact to
// roundoff for fields band-limited below Nyquist.
ScalarField spectral_partial(const ScalarField& s, int axis);

// In-place variant writing into a raw component array of length point_count.
void spectral_partial_raw(const PeriodicGrid& grid, const double* in,
                          double* out, int axis);

// Lattice quadrature sum s * density * h^m, reduced in lexicographic order.
double integrate(const ScalarField& s, const VolumeForm& vol);

// Plain lattice quadrature against the coordinate measure.
double integrate(const ScalarField& s);

// Seeded real trigonometric polynomial with |k|_inf <= max_freq, sup-norm
// scaled to amplitude. Identical (grid, seed, max_freq, amplitude) give
// bitwise identical fields. Requires max_freq < n/2.
ScalarField band_limited_field(const PeriodicGrid& grid, std::uint64_t seed,
                               int max_freq, double amplitude);

// Small pointwise helpers used throughout.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
ScalarField pointwise_exp(const ScalarField& a);
ScalarField pointwise_log(const ScalarField& a);
ScalarField pointwise_abs(const ScalarField& a);
double sup_norm(const ScalarField& a);

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b,
                       const char* where);

}  // namespace wvar
