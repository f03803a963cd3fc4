#include "wvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace wvar {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> build_derivative_matrix(int n) {
  // Periodic spectral differentiation on [0,1): d_jk = pi (-1)^(j-k)
  // cot(pi (j-k)/n) off the diagonal, zero on it.
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const int diff = j - k;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      d[static_cast<size_t>(j) * n + k] =
          kPi * sign / std::tan(kPi * diff / n);
    }
  }
  return d;
}
}  // namespace

PeriodicGrid make_grid(int dim, int points_per_axis) {
  if (dim < 1 || dim > 4)
    throw std::invalid_argument("make_grid: dim must be in {1,2,3,4}, got " +
                                std::to_string(dim));
  if (points_per_axis < 4 || points_per_axis > 256)
    throw std::invalid_argument("make_grid: points_per_axis must be in [4,256], got " +
                                std::to_string(points_per_axis));
  if (points_per_axis % 2 != 0)
    throw std::invalid_argument(
        "make_grid: points_per_axis must be even (Nyquist convention), got " +
        std::to_string(points_per_axis));

  auto data = std::make_shared<PeriodicGrid::Data>();
  data->m = dim;
  data->n = points_per_axis;
  data->h = 1.0 / points_per_axis;
  data->strides.assign(static_cast<size_t>(dim), 1);
  long count = 1;
  for (int a = dim - 1; a >= 0; --a) {
    data->strides[static_cast<size_t>(a)] = count;
    count *= points_per_axis;
  }
  data->count = count;
  data->deriv = build_derivative_matrix(points_per_axis);

  PeriodicGrid g;
  g.d_ = std::move(data);
  return g;
}

long PeriodicGrid::index(const int* k) const {
  long idx = 0;
  for (int a = 0; a < d_->m; ++a) idx += k[a] * d_->strides[static_cast<size_t>(a)];
  return idx;
}

void PeriodicGrid::unindex(long idx, int* k) const {
  for (int a = 0; a < d_->m; ++a) {
    const long s = d_->strides[static_cast<size_t>(a)];
    k[a] = static_cast<int>(idx / s);
    idx -= k[a] * s;
  }
}

double PeriodicGrid::coord(long idx, int axis) const {
  const long s = d_->strides[static_cast<size_t>(axis)];
  const long k = (idx / s) % d_->n;
  return static_cast<double>(k) * d_->h;
}

VolumeForm::VolumeForm(ScalarField density) : density_(std::move(density)) {
  for (long p = 0; p < density_.size(); ++p) {
    if (!(density_[p] > 0.0))
      throw std::domain_error("VolumeForm: density must be positive everywhere");
  }
}

double VolumeForm::mass() const {
  ScalarField one(grid(), 1.0);
  return integrate(one, *this);
}

VolumeForm VolumeForm::normalized() const {
  const double m = mass();
  ScalarField d = density_;
  for (long p = 0; p < d.size(); ++p) d[p] /= m;
  return VolumeForm(std::move(d));
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b,
                       const char* where) {
  if (!(a == b))
    throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

void spectral_partial_raw(const PeriodicGrid& grid, const double* in,
                          double* out, int axis) {
  const int n = grid.points_per_axis();
  const long stride = grid.stride(axis);
  const long count = grid.point_count();
  const std::vector<double>& d = grid.derivative_matrix();

  // Iterate over all 1-d lines along `axis`. A point is a line base iff its
  // coordinate along the axis is zero.
  std::vector<double> line(static_cast<size_t>(n));
  const long block = stride * n;
  for (long base = 0; base < count; base += block) {
    for (long off = 0; off < stride; ++off) {
      const long start = base + off;
      // Shift by the first sample: the interpolant derivative ignores the
      // constant mode, and constants then map to the exact zero vector.
      const double shift = in[start];
      for (int j = 0; j < n; ++j)
        line[static_cast<size_t>(j)] = in[start + j * stride] - shift;
      for (int j = 0; j < n; ++j) {
        const double* row = &d[static_cast<size_t>(j) * n];
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += row[k] * line[static_cast<size_t>(k)];
        out[start + j * stride] = acc;
      }
    }
  }
}

ScalarField spectral_partial(const ScalarField& s, int axis) {
  const PeriodicGrid& g = s.grid();
  if (axis < 0 || axis >= g.dim())
    throw std::invalid_argument("spectral_partial: axis out of range");
  ScalarField out(g);
  spectral_partial_raw(g, s.values().data(), out.values().data(), axis);
  return out;
}

double integrate(const ScalarField& s, const VolumeForm& vol) {
  require_same_grid(s.grid(), vol.grid(), "integrate");
  const PeriodicGrid& g = s.grid();
  double cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= g.spacing();
  double acc = 0.0;
  const ScalarField& w = vol.density();
  for (long p = 0; p < s.size(); ++p) acc += s[p] * w[p];
  return acc * cell;
}

double integrate(const ScalarField& s) {
  const PeriodicGrid& g = s.grid();
  double cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= g.spacing();
  double acc = 0.0;
  for (long p = 0; p < s.size(); ++p) acc += s[p];
  return acc * cell;
}

namespace {
// Deterministic uniform in [-1,1] from raw mt19937_64 output; avoids
// distribution classes whose streams are implementation defined.
double next_uniform(std::mt19937_64& rng) {
  const std::uint64_t x = rng() >> 11;  // 53 bits
  return 2.0 * (static_cast<double>(x) * (1.0 / 9007199254740992.0)) - 1.0;
}
}  // namespace

ScalarField band_limited_field(const PeriodicGrid& grid, std::uint64_t seed,
                               int max_freq, double amplitude) {
  if (max_freq < 0 || 2 * max_freq >= grid.points_per_axis())
    throw std::invalid_argument("band_limited_field: max_freq must satisfy max_freq < n/2");

  const int m = grid.dim();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

  // Canonical half of the frequency lattice: first nonzero component positive.
  std::vector<std::vector<int>> freqs;
  std::vector<int> k(static_cast<size_t>(m), -max_freq);
  if (max_freq > 0) {
    while (true) {
      int first_nonzero = 0;
      bool all_zero = true;
      for (int a = 0; a < m; ++a) {
        if (k[static_cast<size_t>(a)] != 0) {
          first_nonzero = k[static_cast<size_t>(a)];
          all_zero = false;
          break;
        }
      }
      if (!all_zero && first_nonzero > 0) freqs.push_back(k);
      int a = m - 1;
      while (a >= 0 && k[static_cast<size_t>(a)] == max_freq) {
        k[static_cast<size_t>(a)] = -max_freq;
        --a;
      }
      if (a < 0) break;
      ++k[static_cast<size_t>(a)];
    }
  }

  std::vector<double> ca(freqs.size()), cb(freqs.size());
  for (size_t i = 0; i < freqs.size(); ++i) {
    ca[i] = next_uniform(rng);
    cb[i] = next_uniform(rng);
  }

  ScalarField out(grid);
  const long count = grid.point_count();
  constexpr double twopi = 2.0 * kPi;
  for (long p = 0; p < count; ++p) {
    double acc = 0.0;
    for (size_t i = 0; i < freqs.size(); ++i) {
      double phase = 0.0;
      for (int a = 0; a < m; ++a)
        phase += freqs[i][static_cast<size_t>(a)] * grid.coord(p, a);
      phase *= twopi;
      acc += ca[i] * std::cos(phase) + cb[i] * std::sin(phase);
    }
    out[p] = acc;
  }

  double sup = 0.0;
  for (long p = 0; p < count; ++p) sup = std::max(sup, std::abs(out[p]));
  const double scale = (sup > 0.0 && amplitude != 0.0) ? amplitude / sup : 0.0;
  for (long p = 0; p < count; ++p) out[p] *= scale;
  return out;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "ScalarField+");
  ScalarField out = a;
  for (long p = 0; p < out.size(); ++p) out[p] += b[p];
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "ScalarField-");
  ScalarField out = a;
  for (long p = 0; p < out.size(); ++p) out[p] -= b[p];
  return out;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "ScalarField*");
  ScalarField out = a;
  for (long p = 0; p < out.size(); ++p) out[p] *= b[p];
  return out;
}

ScalarField operator*(double c, const ScalarField& a) {
  ScalarField out = a;
  for (long p = 0; p < out.size(); ++p) out[p] *= c;
  return out;
}

ScalarField pointwise_exp(const ScalarField& a) {
  ScalarField out = a;
  for (long p = 0; p < out.size(); ++p) out[p] = std::exp(out[p]);
  return out;
}

ScalarField pointwise_log(const ScalarField& a) {
  ScalarField out = a;
  for (long p = 0; p < out.size(); ++p) out[p] = std::log(out[p]);
  return out;
}

ScalarField pointwise_abs(const ScalarField& a) {
  ScalarField out = a;
  for (long p = 0; p < out.size(); ++p) out[p] = std::abs(out[p]);
  return out;
}

double sup_norm(const ScalarField& a) {
  double sup = 0.0;
  for (long p = 0; p < a.size(); ++p) sup = std::max(sup, std::abs(a[p]));
  return sup;
}

}  // namespace wvar
