#pragma once

// Pointwise tensor algebra: musical isomorphisms through g, g-transposes,
// traces, the full tensor-product inner products, and the projectors onto
// alternating and symmetric tensors. Forms and symmetric tensors are always
// handled through their embedded full component arrays, so every inner
// product below is the plain tensor-product contraction (the induced metric
// on the subspaces is the restriction, with no degree factors).

#include "wvar/fields.hpp"

namespace wvar {

// v*_g = g^{-1} v, the endomorphism associated to a symmetric 2-tensor.
EndField endomorphism_of(const Sym2Field& v, const MetricField& g);

// A^T_g = g^{-1} A^t g.
EndField g_transpose(const EndField& a, const MetricField& g);

// <u,v>_g = Tr(u*_g v*_g), pointwise.
ScalarField inner_sym2(const Sym2Field& u, const Sym2Field& v,
                       const MetricField& g);

// Tr_g v = Tr(g^{-1} v), pointwise.
ScalarField trace_g(const Sym2Field& v, const MetricField& g);

// Matrix products in the global frame. compose(v, a) is the 2-tensor with
// matrix [v][a], i.e. (v a)(x, y) = v(x, a y).
Cov2Field compose(const Sym2Field& v, const EndField& a);
Cov2Field compose(const Cov2Field& v, const EndField& a);
EndField compose(const EndField& a, const EndField& b);
Cov2Field cov2_of_end(const MetricField& g, const EndField& a);  // [g][a]
EndField end_of_cov2(const MetricField& g, const Cov2Field& t);  // [g^{-1}][t]
Sym2Field sym_part(const Cov2Field& t);
Cov2Field cov2_of_sym2(const Sym2Field& v);

// Projectors of Appendix tensor calculus: A(T) sums signed permutations,
// S(T) sums unsigned ones; no 1/p! normalization, so P(P(T)) = p! P(T).
Cov2Field project_alternating(const Cov2Field& t);
Cov2Field project_symmetric(const Cov2Field& t);
Ten3Field project_alternating(const Ten3Field& t);
Ten3Field project_symmetric(const Ten3Field& t);

// Decomposable builders (wedge and symmetric product of one-forms).
Cov2Field wedge(const OneFormField& a, const OneFormField& b);
Ten3Field wedge(const OneFormField& a, const OneFormField& b,
                const OneFormField& c);
Cov2Field sym_product(const OneFormField& a, const OneFormField& b);
Ten3Field sym_product(const OneFormField& a, const OneFormField& b,
                      const OneFormField& c);

enum class TensorKind { Alternating, Symmetric };

// Inner product on alternating or symmetric p-tensors, p in {2,3}; validates
// that both arguments have the declared symmetry and contracts with the
// tensor-product metric.
ScalarField induced_inner_p(const Cov2Field& a, const Cov2Field& b,
                            const MetricField& g, TensorKind kind);
ScalarField induced_inner_p(const Ten3Field& a, const Ten3Field& b,
                            const MetricField& g, TensorKind kind);

// Full tensor-product contractions (all covariant slots paired with g^{-1}).
ScalarField inner_full(const OneFormField& a, const OneFormField& b,
                       const MetricField& g);
ScalarField inner_full(const Cov2Field& a, const Cov2Field& b,
                       const MetricField& g);
ScalarField inner_full(const Ten3Field& a, const Ten3Field& b,
                       const MetricField& g);
ScalarField inner_full(const Cov4Field& a, const Cov4Field& b,
                       const MetricField& g);

// T_X-valued 2-tensors: g_{ij} on the value slot, g^{-1} on the others.
ScalarField inner_vv2(const VecValued2Field& a, const VecValued2Field& b,
                      const MetricField& g);

// Pointwise endomorphism inner product <a,b>_g = Tr(a b^T_g).
ScalarField inner_end(const EndField& a, const EndField& b,
                      const MetricField& g);

ScalarField pointwise_trace(const EndField& a);

// Max over points of the symmetry defect of [v][a] relative to its size.
double g_symmetry_residual(const EndField& a, const MetricField& g);

// Sup norm of the deviation of T from full symmetry in its three slots.
double full_symmetry_defect(const Ten3Field& t);

}  // namespace wvar
