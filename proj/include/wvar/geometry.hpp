#pragma once

// Levi-Civita connection, covariant derivatives and their symmetrization,
// curvature, the Bakry-Emery-Ricci tensor, volume-weighted adjoints, and the
// two-route first variation of the Bakry-Emery-Ricci tensor.
//
// Index conventions are spelled out in docs/conventions.md. In brief: the
// first slot of every covariant derivative is the derivative direction,
// Riemann is R(x,y)z = grad_x grad_y z - grad_y grad_x z - grad_[x,y] z with
// components R^l_{ijk} (i,j the antisymmetric pair, k the argument), and
// Ricci(y,z) = Tr[x -> R(x,y)z].

#include "wvar/tensor.hpp"

namespace wvar {

// Christoffel symbols of g, comps (k*m + i)*m + j for Gamma^k_{ij}.
class ConnectionCoeffs {
 public:
  ConnectionCoeffs() = default;
  explicit ConnectionCoeffs(const PeriodicGrid& grid)
      : s_(grid, grid.dim() * grid.dim() * grid.dim()) {}

  const PeriodicGrid& grid() const { return s_.grid(); }
  long points() const { return s_.points(); }
  int dim() const { return grid().dim(); }
  double& at(long p, int k, int i, int j) {
    return s_.at((k * dim() + i) * dim() + j, p);
  }
  double at(long p, int k, int i, int j) const {
    return s_.at((k * dim() + i) * dim() + j, p);
  }
  detail::FieldStore& store() { return s_; }
  const detail::FieldStore& store() const { return s_; }

 private:
  detail::FieldStore s_;
};

struct CurvaturePack {
  VecValued3Field riemann;  // R^l_{ijk}
  Sym2Field ricci;
  ScalarField scalar;
};

ConnectionCoeffs christoffel(const MetricField& g);

// Covariant derivatives; the new (first) slot is the derivative direction.
OneFormField covariant_derivative(const ScalarField& f, const MetricField& g);
Cov2Field covariant_derivative(const OneFormField& w, const MetricField& g,
                               const ConnectionCoeffs& gamma);
Ten3Field covariant_derivative(const Sym2Field& v, const MetricField& g,
                               const ConnectionCoeffs& gamma);
Ten3Field covariant_derivative(const Cov2Field& t, const MetricField& g,
                               const ConnectionCoeffs& gamma);
Cov4Field covariant_derivative(const Ten3Field& t, const MetricField& g,
                               const ConnectionCoeffs& gamma);
// (grad a)^i_{x j}: x the direction, j the argument.
VecValued2Field covariant_derivative(const EndField& a, const MetricField& g,
                                     const ConnectionCoeffs& gamma);
// (grad z)^i_j as an endomorphism, column j the direction.
EndField covariant_derivative(const VecField& z, const MetricField& g,
                              const ConnectionCoeffs& gamma);

// Convenience overloads that compute the connection internally.
Ten3Field covariant_derivative(const Sym2Field& v, const MetricField& g);
VecValued2Field covariant_derivative(const EndField& a, const MetricField& g);

// Symmetrization of grad on symmetric tensors: the cyclic sum over which
// slot is the derivative direction. Output is fully symmetric.
Ten3Field hat_nabla(const Sym2Field& v, const MetricField& g);
Ten3Field hat_nabla(const Sym2Field& v, const MetricField& g,
                    const ConnectionCoeffs& gamma);
Cov4Field hat_nabla3(const Ten3Field& t, const MetricField& g,
                     const ConnectionCoeffs& gamma);  // symmetric 3-tensors

// Covariant exterior derivative on forms (trivial coefficient bundle).
Ten3Field nabla_exterior(const Cov2Field& alpha, const MetricField& g,
                         const ConnectionCoeffs& gamma);
Cov4Field nabla_exterior(const Ten3Field& alpha, const MetricField& g,
                         const ConnectionCoeffs& gamma);

CurvaturePack curvature_tensors(const MetricField& g);

// Hessian grad df of a scalar.
Sym2Field hessian_fn(const ScalarField& f, const MetricField& g);
Sym2Field hessian_fn(const ScalarField& f, const MetricField& g,
                     const ConnectionCoeffs& gamma);

// f = log(dV_g / Omega) pointwise.
ScalarField log_density(const MetricField& g, const VolumeForm& omega);

// Ric_g(Omega) = Ric(g) + grad d log(dV_g/Omega).
Sym2Field bakry_emery(const MetricField& g, const VolumeForm& omega);

// Omega-weighted formal adjoint of grad on 3-tensors:
// (adj T)_{cd} = -g^{ab} grad_a T_{bcd} + T(grad f, c, d).
Sym2Field omega_adjoint(const Ten3Field& t, const MetricField& g,
                        const VolumeForm& omega);
// Adjoint of the symmetrized derivative, valid on fully symmetric 3-tensors
// where it equals 3 times omega_adjoint. Checks the symmetry.
Sym2Field omega_adjoint_hat(const Ten3Field& t, const MetricField& g,
                            const VolumeForm& omega);

// D_g = hat_nabla - 2 grad.
Ten3Field dee_operator(const Sym2Field& v, const MetricField& g);

// Sup norm of the antisymmetrized derivative of v*_g; zero iff grad v is
// fully symmetric.
double f_membership_residual(const MetricField& g, const Sym2Field& v);

// Two equivalent routes for the first variation of the Bakry-Emery
// tensor: the weighted divergence of D v, or the difference of the
// volume-weighted adjoints applied to grad v and hat v.
enum class RicciVariationPath { Divergence, Adjoint };

// Derivative at t=0 of t -> Ric_{g+tv}(Omega), by either stated route.
Sym2Field ricci_variation(const MetricField& g, const VolumeForm& omega,
                          const Sym2Field& v, RicciVariationPath path);

struct AdjointCheckReport {
  double pairing_residual = 0.0;         // pointwise contraction identity
  double repeated_index_residual = 0.0;  // symmetric frame with repeats
  double duality_residual = 0.0;         // integrated adjoint duality
};

// Residuals of the contraction identities <d_F a, b> = (p+1) <grad a, b>
// for alternating (exterior derivative) and symmetric (hat) recombinations,
// evaluated on seeded band-limited tensors, plus the integrated duality of
// grad against its Omega-adjoint.
AdjointCheckReport adjoint_consistency_check(int p, TensorKind kind,
                                             const MetricField& g,
                                             const VolumeForm& omega,
                                             std::uint64_t seed);

}  // namespace wvar
