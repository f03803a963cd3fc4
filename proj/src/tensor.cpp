#include "wvar/tensor.hpp"

#include <array>
#include <stdexcept>

namespace wvar {

EndField endomorphism_of(const Sym2Field& v, const MetricField& g) {
  require_same_grid(v.grid(), g.grid(), "endomorphism_of");
  EndField out(v.grid());
  for (long p = 0; p < v.points(); ++p)
    out.set_matrix(p, g.inverse_at(p) * v.matrix_at(p));
  return out;
}

EndField g_transpose(const EndField& a, const MetricField& g) {
  require_same_grid(a.grid(), g.grid(), "g_transpose");
  EndField out(a.grid());
  for (long p = 0; p < a.points(); ++p) {
    const Mat gp = g.matrix_at(p);
    out.set_matrix(p, g.inverse_at(p) * a.matrix_at(p).transpose() * gp);
  }
  return out;
}

ScalarField inner_sym2(const Sym2Field& u, const Sym2Field& v,
                       const MetricField& g) {
  require_same_grid(u.grid(), v.grid(), "inner_sym2");
  require_same_grid(u.grid(), g.grid(), "inner_sym2");
  ScalarField out(u.grid());
  const int m = u.dim();
  for (long p = 0; p < u.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    const Mat us = gi * u.matrix_at(p);
    const Mat vs = gi * v.matrix_at(p);
    // Tr(us vs) accumulated so every addend is invariant under exchanging
    // u and v; the result is then bitwise symmetric in its arguments.
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += us(i, i) * vs(i, i);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        acc += us(i, j) * vs(j, i) + us(j, i) * vs(i, j);
    out[p] = acc;
  }
  return out;
}

ScalarField trace_g(const Sym2Field& v, const MetricField& g) {
  require_same_grid(v.grid(), g.grid(), "trace_g");
  ScalarField out(v.grid());
  for (long p = 0; p < v.points(); ++p)
    out[p] = (g.inverse_at(p) * v.matrix_at(p)).trace();
  return out;
}

Cov2Field compose(const Sym2Field& v, const EndField& a) {
  require_same_grid(v.grid(), a.grid(), "compose");
  Cov2Field out(v.grid());
  for (long p = 0; p < v.points(); ++p)
    out.set_matrix(p, v.matrix_at(p) * a.matrix_at(p));
  return out;
}

Cov2Field compose(const Cov2Field& v, const EndField& a) {
  require_same_grid(v.grid(), a.grid(), "compose");
  Cov2Field out(v.grid());
  for (long p = 0; p < v.points(); ++p)
    out.set_matrix(p, v.matrix_at(p) * a.matrix_at(p));
  return out;
}

EndField compose(const EndField& a, const EndField& b) {
  require_same_grid(a.grid(), b.grid(), "compose");
  EndField out(a.grid());
  for (long p = 0; p < a.points(); ++p)
    out.set_matrix(p, a.matrix_at(p) * b.matrix_at(p));
  return out;
}

Cov2Field cov2_of_end(const MetricField& g, const EndField& a) {
  require_same_grid(g.grid(), a.grid(), "cov2_of_end");
  Cov2Field out(g.grid());
  for (long p = 0; p < g.points(); ++p)
    out.set_matrix(p, g.matrix_at(p) * a.matrix_at(p));
  return out;
}

EndField end_of_cov2(const MetricField& g, const Cov2Field& t) {
  require_same_grid(g.grid(), t.grid(), "end_of_cov2");
  EndField out(g.grid());
  for (long p = 0; p < g.points(); ++p)
    out.set_matrix(p, g.inverse_at(p) * t.matrix_at(p));
  return out;
}

Sym2Field sym_part(const Cov2Field& t) {
  Sym2Field out(t.grid());
  for (long p = 0; p < t.points(); ++p) out.set_matrix(p, t.matrix_at(p));
  return out;
}

Cov2Field cov2_of_sym2(const Sym2Field& v) {
  Cov2Field out(v.grid());
  for (long p = 0; p < v.points(); ++p) out.set_matrix(p, v.matrix_at(p));
  return out;
}

Cov2Field project_alternating(const Cov2Field& t) {
  Cov2Field out(t.grid());
  const int m = t.dim();
  for (long p = 0; p < t.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out.at(p, i, j) = t.at(p, i, j) - t.at(p, j, i);
  return out;
}

Cov2Field project_symmetric(const Cov2Field& t) {
  Cov2Field out(t.grid());
  const int m = t.dim();
  for (long p = 0; p < t.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out.at(p, i, j) = t.at(p, i, j) + t.at(p, j, i);
  return out;
}

namespace {
// Permutations of {0,1,2} with signs.
constexpr int kPerm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                              {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr double kSign3[6] = {1, -1, -1, 1, 1, -1};
}  // namespace

Ten3Field project_alternating(const Ten3Field& t) {
  Ten3Field out(t.grid());
  const int m = t.dim();
  for (long p = 0; p < t.points(); ++p) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const int idx[3] = {i, j, k};
          double acc = 0.0;
          for (int s = 0; s < 6; ++s)
            acc += kSign3[s] * t.at(p, idx[kPerm3[s][0]], idx[kPerm3[s][1]],
                                    idx[kPerm3[s][2]]);
          out.at(p, i, j, k) = acc;
        }
  }
  return out;
}

Ten3Field project_symmetric(const Ten3Field& t) {
  Ten3Field out(t.grid());
  const int m = t.dim();
  for (long p = 0; p < t.points(); ++p) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const int idx[3] = {i, j, k};
          double acc = 0.0;
          for (int s = 0; s < 6; ++s)
            acc += t.at(p, idx[kPerm3[s][0]], idx[kPerm3[s][1]],
                        idx[kPerm3[s][2]]);
          out.at(p, i, j, k) = acc;
        }
  }
  return out;
}

Cov2Field wedge(const OneFormField& a, const OneFormField& b) {
  require_same_grid(a.grid(), b.grid(), "wedge");
  Cov2Field out(a.grid());
  const int m = a.dim();
  for (long p = 0; p < a.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out.at(p, i, j) = a.at(p, i) * b.at(p, j) - a.at(p, j) * b.at(p, i);
  return out;
}

Ten3Field wedge(const OneFormField& a, const OneFormField& b,
                const OneFormField& c) {
  Ten3Field out(a.grid());
  const int m = a.dim();
  for (long p = 0; p < a.points(); ++p) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double f[3][3] = {
              {a.at(p, i), a.at(p, j), a.at(p, k)},
              {b.at(p, i), b.at(p, j), b.at(p, k)},
              {c.at(p, i), c.at(p, j), c.at(p, k)}};
          double acc = 0.0;
          for (int s = 0; s < 6; ++s)
            acc += kSign3[s] * f[0][kPerm3[s][0]] * f[1][kPerm3[s][1]] *
                   f[2][kPerm3[s][2]];
          out.at(p, i, j, k) = acc;
        }
  }
  return out;
}

Cov2Field sym_product(const OneFormField& a, const OneFormField& b) {
  require_same_grid(a.grid(), b.grid(), "sym_product");
  Cov2Field out(a.grid());
  const int m = a.dim();
  for (long p = 0; p < a.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out.at(p, i, j) = a.at(p, i) * b.at(p, j) + a.at(p, j) * b.at(p, i);
  return out;
}

Ten3Field sym_product(const OneFormField& a, const OneFormField& b,
                      const OneFormField& c) {
  Ten3Field out(a.grid());
  const int m = a.dim();
  for (long p = 0; p < a.points(); ++p) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double f[3][3] = {
              {a.at(p, i), a.at(p, j), a.at(p, k)},
              {b.at(p, i), b.at(p, j), b.at(p, k)},
              {c.at(p, i), c.at(p, j), c.at(p, k)}};
          double acc = 0.0;
          for (int s = 0; s < 6; ++s)
            acc += f[0][kPerm3[s][0]] * f[1][kPerm3[s][1]] * f[2][kPerm3[s][2]];
          out.at(p, i, j, k) = acc;
        }
  }
  return out;
}

namespace {

double symmetry_defect2(const Cov2Field& t, TensorKind kind) {
  const int m = t.dim();
  double defect = 0.0;
  const double sg = kind == TensorKind::Alternating ? 1.0 : -1.0;
  for (long p = 0; p < t.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        defect = std::max(defect, std::abs(t.at(p, i, j) + sg * t.at(p, j, i)));
  return defect;
}

double symmetry_defect3(const Ten3Field& t, TensorKind kind) {
  const int m = t.dim();
  double defect = 0.0;
  for (long p = 0; p < t.points(); ++p)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double base = t.at(p, i, j, k);
          const int idx[3] = {i, j, k};
          for (int s = 1; s < 6; ++s) {
            const double other = t.at(p, idx[kPerm3[s][0]], idx[kPerm3[s][1]],
                                      idx[kPerm3[s][2]]);
            const double expect =
                kind == TensorKind::Alternating ? kSign3[s] * base : base;
            defect = std::max(defect, std::abs(other - expect));
          }
        }
  return defect;
}

void require_kind2(const Cov2Field& t, TensorKind kind, const char* where) {
  const double scale = std::max(1.0, field_sup_norm(t));
  if (symmetry_defect2(t, kind) > 1e-10 * scale)
    throw std::invalid_argument(std::string(where) +
                                ": tensor does not have the declared symmetry");
}

void require_kind3(const Ten3Field& t, TensorKind kind, const char* where) {
  const double scale = std::max(1.0, field_sup_norm(t));
  if (symmetry_defect3(t, kind) > 1e-10 * scale)
    throw std::invalid_argument(std::string(where) +
                                ": tensor does not have the declared symmetry");
}

}  // namespace

ScalarField inner_full(const OneFormField& a, const OneFormField& b,
                       const MetricField& g) {
  require_same_grid(a.grid(), b.grid(), "inner_full");
  ScalarField out(a.grid());
  const int m = a.dim();
  for (long p = 0; p < a.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) acc += gi(i, j) * a.at(p, i) * b.at(p, j);
    out[p] = acc;
  }
  return out;
}

ScalarField inner_full(const Cov2Field& a, const Cov2Field& b,
                       const MetricField& g) {
  require_same_grid(a.grid(), b.grid(), "inner_full");
  ScalarField out(a.grid());
  for (long p = 0; p < a.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    // gi * a * gi * b^t traced equals a_{ij} b_{kl} g^{ik} g^{jl}.
    out[p] = (gi * a.matrix_at(p) * gi * b.matrix_at(p).transpose()).trace();
  }
  return out;
}

ScalarField inner_full(const Ten3Field& a, const Ten3Field& b,
                       const MetricField& g) {
  require_same_grid(a.grid(), b.grid(), "inner_full");
  ScalarField out(a.grid());
  const int m = a.dim();
  for (long p = 0; p < a.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            for (int r = 0; r < m; ++r)
              for (int s = 0; s < m; ++s)
                acc += gi(i, l) * gi(j, r) * gi(k, s) * a.at(p, i, j, k) *
                       b.at(p, l, r, s);
    out[p] = acc;
  }
  return out;
}

ScalarField inner_full(const Cov4Field& a, const Cov4Field& b,
                       const MetricField& g) {
  require_same_grid(a.grid(), b.grid(), "inner_full");
  ScalarField out(a.grid());
  const int m = a.dim();
  for (long p = 0; p < a.points(); ++p) {
    const Mat gi = g.inverse_at(p);
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            for (int i2 = 0; i2 < m; ++i2)
              for (int j2 = 0; j2 < m; ++j2)
                for (int k2 = 0; k2 < m; ++k2)
                  for (int l2 = 0; l2 < m; ++l2)
                    acc += gi(i, i2) * gi(j, j2) * gi(k, k2) * gi(l, l2) *
                           a.at(p, i, j, k, l) * b.at(p, i2, j2, k2, l2);
    out[p] = acc;
  }
  return out;
}

ScalarField inner_vv2(const VecValued2Field& a, const VecValued2Field& b,
                      const MetricField& g) {
  require_same_grid(a.grid(), b.grid(), "inner_vv2");
  ScalarField out(a.grid());
  const int m = a.dim();
  for (long p = 0; p < a.points(); ++p) {
    const Mat gp = g.matrix_at(p);
    const Mat gi = g.inverse_at(p);
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int i2 = 0; i2 < m; ++i2)
        for (int x = 0; x < m; ++x)
          for (int x2 = 0; x2 < m; ++x2)
            for (int y = 0; y < m; ++y)
              for (int y2 = 0; y2 < m; ++y2)
                acc += gp(i, i2) * gi(x, x2) * gi(y, y2) * a.at(p, i, x, y) *
                       b.at(p, i2, x2, y2);
    out[p] = acc;
  }
  return out;
}

ScalarField inner_end(const EndField& a, const EndField& b,
                      const MetricField& g) {
  require_same_grid(a.grid(), b.grid(), "inner_end");
  ScalarField out(a.grid());
  for (long p = 0; p < a.points(); ++p) {
    const Mat gp = g.matrix_at(p);
    const Mat gi = g.inverse_at(p);
    const Mat bt = gi * b.matrix_at(p).transpose() * gp;
    out[p] = (a.matrix_at(p) * bt).trace();
  }
  return out;
}

ScalarField pointwise_trace(const EndField& a) {
  ScalarField out(a.grid());
  for (long p = 0; p < a.points(); ++p) out[p] = a.matrix_at(p).trace();
  return out;
}

ScalarField induced_inner_p(const Cov2Field& a, const Cov2Field& b,
                            const MetricField& g, TensorKind kind) {
  require_kind2(a, kind, "induced_inner_p");
  require_kind2(b, kind, "induced_inner_p");
  return inner_full(a, b, g);
}

ScalarField induced_inner_p(const Ten3Field& a, const Ten3Field& b,
                            const MetricField& g, TensorKind kind) {
  require_kind3(a, kind, "induced_inner_p");
  require_kind3(b, kind, "induced_inner_p");
  return inner_full(a, b, g);
}

double g_symmetry_residual(const EndField& a, const MetricField& g) {
  double res = 0.0;
  for (long p = 0; p < a.points(); ++p) {
    const Mat gp = g.matrix_at(p);
    const Mat ga = gp * a.matrix_at(p);
    res = std::max(res, (ga - ga.transpose()).cwiseAbs().maxCoeff());
  }
  return res;
}

double full_symmetry_defect(const Ten3Field& t) {
  const int m = t.dim();
  double defect = 0.0;
  for (long p = 0; p < t.points(); ++p)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          defect = std::max(defect,
                            std::abs(t.at(p, a, b, c) - t.at(p, b, a, c)));
          defect = std::max(defect,
                            std::abs(t.at(p, a, b, c) - t.at(p, c, b, a)));
        }
  return defect;
}

}  // namespace wvar
