#pragma once

// Complex structures on flat tori, J-linear/anti-linear splittings, the
// dbar/del operators on endomorphism fields, membership tests for the
// admissible variation spaces, the transport ODE that carries a complex
// structure along a metric curve, the complex decomposition of the
// Bakry-Emery-Ricci tensor, and the Kahler forms of the second variation.
//
// Compositions are plain matrix products in the global frame throughout:
// the symplectic form of a pair (g,J) is the matrix [g][J], and vJ means
// [v][J]. The test complex tori are C^n/Z^{2n}, n in {1,2}, with the
// standard constant J pairing axis 2k with axis 2k+1.

#include <cstdint>

#include "wvar/geometry.hpp"
#include "wvar/space_of_metrics.hpp"

namespace wvar {

struct EndSplit {
  EndField linear;       // (1,0) part, commutes with J
  EndField anti_linear;  // (0,1) part, anticommutes with J
};

// J e_{2k} = e_{2k+1}, J e_{2k+1} = -e_{2k}; requires even dimension.
EndField standard_complex_structure(const PeriodicGrid& grid);

struct CompatibilityReport {
  double sq = 0.0;         // |J^2 + I|
  double skew = 0.0;       // |gJ + J^t g|
  double parallel = 0.0;   // |grad_g J|
  double nijenhuis = 0.0;  // |N_J|
  double max() const;
};

CompatibilityReport compatibility_report(const MetricField& g,
                                         const EndField& j);

// A metric with a validated compatible parallel complex structure.
struct KahlerPair {
  MetricField g;
  EndField j;
};

// Throws std::invalid_argument (with the offending residual) unless every
// compatibility residual is within tol.
KahlerPair make_kahler_pair(MetricField g, EndField j, double tol = 1e-8);

// Nijenhuis tensor N^k_{ij}; zero iff J is integrable.
VecValued2Field nijenhuis(const EndField& j);

// A = A^{1,0} + A^{0,1} with A^{1,0} = (A - JAJ)/2, A^{0,1} = (A + JAJ)/2.
EndSplit split_endomorphism(const EndField& a, const EndField& j);

struct NablaSplit {
  VecValued2Field part10;  // (grad S)(xi,eta) projected J-linearly in xi
  VecValued2Field part01;
};

// First-slot projections of grad S for an endomorphism field S:
// part10(xi,eta) = (grad_xi S - J grad_{J xi} S)(eta)/2, part01 the sum.
NablaSplit nabla_split(const EndField& s, const MetricField& g,
                       const EndField& j);
NablaSplit nabla_split(const VecValued2Field& ns, const EndField& j);

// Antisymmetrizations in the two covariant slots:
// dbar S = antisym(part01), del S = antisym(part10).
VecValued2Field dbar_TX(const EndField& s, const MetricField& g,
                        const EndField& j);
VecValued2Field del_TX(const EndField& s, const MetricField& g,
                       const EndField& j);
struct DbarDel {
  VecValued2Field dbar;
  VecValued2Field del;
};
DbarDel dbar_del_TX(const EndField& a, const MetricField& g,
                    const EndField& j);

// (0,1) projection of the derivative of a vector field, as an endomorphism.
EndField dbar_vector_field(const VecField& z, const MetricField& g,
                           const EndField& j);

struct MembershipReport {
  double f = 0.0;        // antisymmetrized grad of v*
  double d = 0.0;        // del of the linear part and dbar of the anti part
  double dhat = 0.0;     // J-invariance of v plus del of v*
  double kah_f = 0.0;    // dbar of linear part + del of anti part
  double sup_kh_sm = 0.0;  // contraction identity between the mixed parts
};

MembershipReport membership_report(const MetricField& g, const EndField& j,
                                   const Sym2Field& v);

enum class EndoKind { AntiLinear, Linear };

struct SymmetryEquivalenceReport {
  double slotwise = 0.0;    // per-direction g-symmetry of the projected grad
  double total_sym = 0.0;   // symmetry of the projected grad in its two slots
  double closure = 0.0;     // dbar (anti-linear) or del (linear) of M
};

// Residuals of the three equivalent conditions for a g-symmetric M of the
// declared kind. Throws if M fails the kind or symmetry precondition.
SymmetryEquivalenceReport symmetry_equivalence(const MetricField& g,
                                               const EndField& j,
                                               const EndField& m_field,
                                               EndoKind kind);

struct JOdeSample {
  double t = 0.0;
  CompatibilityReport compat;
  double der_j_inv = 0.0;     // 2 (gs)^{0,1} + J dJ + (J dJ)^T_g
  double der_j_inv_t = 0.0;   // (dJ)^T_g + dJ - (J gs - gs J)
  double dbar_jdot = 0.0;     // dbar of dJ
  double jdot_identity = 0.0; // dJ J - (gs)^{0,1}
};

struct JOdeResult {
  std::vector<JOdeSample> samples;
  std::vector<EndField> j_at_samples;
  bool aborted = false;
  double abort_time = 0.0;
};

// Classical 4th-order one-step integration of 2 dJ = J gs - gs J along the
// curve, gs = g_t^{-1} dg_t. Integration invariants are monitored, never
// projected; if |J^2+I| or |gJ + J^t g| exceeds abort_threshold the run
// stops and reports the offending time.
JOdeResult evolve_j(const MetricCurve& curve, const EndField& j0, double t_end,
                    int steps, double abort_threshold = 1e-3);

// i del dbar of a scalar as a real antisymmetric 2-form (constant J chart).
Cov2Field i_del_delbar(const ScalarField& f, const EndField& j);

// Ricci form of a volume form on the complex torus chart: -i del dbar of the
// log-density against the flat coordinate volume. Requires constant J.
Cov2Field ricci_form(const EndField& j, const VolumeForm& omega);

struct CxDecompositionReport {
  double hessian_identity = 0.0;  // grad df vs (i del dbar f) J + g dbar grad f
  double ricci_identity = 0.0;    // Ric_g(Omega) vs Ric_J(Omega) J + g dbar grad f
};

CxDecompositionReport cx_decomposition_check(const MetricField& g,
                                             const EndField& j,
                                             const VolumeForm& omega);

// Second variation in a direction v whose endomorphism has del-closed linear
// part and dbar-closed anti-linear part. Throws if the membership residual
// exceeds tol.
double hessian_kahler(const MetricField& g, const EndField& j,
                      const VolumeForm& omega, const Sym2Field& v,
                      double tol = 1e-8);

// Specialization to fully symmetric grad v:
// int { Tr[(v*)^2 Ric*] + (1/2)|grad A'|^2 + |grad^{1,0} A'|^2 } Omega,
// the form obtained by substituting the restricted-space relation into the
// general formula. It must agree with hessian_F and hessian_riemannian.
double hessian_kahler_F(const MetricField& g, const EndField& j,
                        const VolumeForm& omega, const Sym2Field& v,
                        double tol = 1e-8);

// Single-term form for J-invariant v with d(vJ) = 0.
double hessian_invariant(const MetricField& g, const EndField& j,
                         const VolumeForm& omega, const Sym2Field& v,
                         double tol = 1e-8);

// Residuals of d(vJ) = 0 and J-invariance, the preconditions above.
struct InvariantDirectionReport {
  double j_invariance = 0.0;
  double closed = 0.0;
};
InvariantDirectionReport invariant_direction_residuals(const MetricField& g,
                                                       const EndField& j,
                                                       const Sym2Field& v);

// Residuals of the identities entering the Kahler form of the second
// variation, with the form pairing <.,.>_F = half the embedded-tensor
// contraction (see docs/conventions.md):
//   orth_der:     <hat v', hat v''> + 6 <del A', dbar B>_F
//   der_a_del_a:  |grad^{1,0} A'|^2 - <del A', del A'>_F
//   b_norms:      |grad^{0,1} B|^2 - |grad^{1,0} B|^2
//   f_chain:      |grad^{1,0} A'|^2 + <del A', dbar B>_F  (restricted v)
struct KahlerIdentityReport {
  double orth_der = 0.0;
  double der_a_del_a = 0.0;
  double b_norms = 0.0;
  double f_chain = 0.0;
};

// Integrated residuals (against dV_g) of the pointwise identities entering
// the Kahler form of the second variation. Requires v admissible.
KahlerIdentityReport kahler_identity_checks(const MetricField& g,
                                            const EndField& j,
                                            const Sym2Field& v,
                                            double tol = 1e-8);

// Kahler metric from a potential: g_phi = g0 - (i del dbar phi) J. Throws if
// positivity fails.
MetricField kahler_potential_metric(const MetricField& g0, const EndField& j,
                                    const ScalarField& phi);

// The potential direction g_phi - g0 as a symmetric 2-tensor.
Sym2Field potential_direction(const EndField& j, const ScalarField& phi);

// Seeded band-limited potential rescaled so that the sup norm of its metric
// correction equals target_sup. Second derivatives amplify band-limited
// amplitudes by (2 pi max_freq)^2, so raw potential amplitudes are a poor
// control parameter.
ScalarField scaled_potential(const PeriodicGrid& grid, const EndField& j,
                             std::uint64_t seed, int max_freq,
                             double target_sup);

// g-symmetric endomorphism of the declared kind: the J-(anti)linear part of
// g^{-1} w for a symmetric 2-tensor seed w.
EndField projected_symmetric_endo(const MetricField& g, const EndField& j,
                                  const Sym2Field& w, EndoKind kind);

}  // namespace wvar
