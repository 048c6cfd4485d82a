// Heat extensions of form fields and the quadrature machinery for integrals
// over the upper half-space: the Riesz/heat-derivative pairing identity, the
// bilinear gradient embedding, and the diagonal/off-diagonal decomposition of
// the multiplier pairing with its chained bound.
//
// The heat semigroup is e^{t Laplacian}, symbol e^{-t|xi|^2}.  All t-integrals
// over (0, infinity) are handled two ways: an exact frequency-domain
// evaluation using int_0^inf e^{-2t|xi|^2} dt = 1/(2|xi|^2), and a numerical
// quadrature over (0, T) that works with actual heat slices.  The quadrature
// splits into a short midpoint head on [0, t_head] (the integrand is smooth
// there but log-spacing would cluster wastefully near 0) and three-point
// Gauss-Legendre panels in log t on [t_head, T], with t_head chosen from the
// decay scale of the spectrum actually present.  The tail beyond T is of
// order e^{-2T min|xi|^2}, so T = 6/min|xi|^2 pushes it below quadrature
// error.
#pragma once

#include <vector>

#include "baforms/fields.hpp"

namespace baf {

struct Quadrature {
  std::vector<double> t, w;  // strictly increasing nodes in (0, T), positive weights
  double T = 0;
};

// n total nodes (n >= 12), truncation T >= 1, decay_scale = the |xi|^2 rate
// dominating the integrand's decay in t (used only to place the head/body
// split).
Quadrature make_quadrature(int n, double T, double decay_scale);

// Convenience: T = 6/min|xi|^2 for the common grid, decay scale 2 * the
// largest active |xi|^2 of either field (falling back to the full lattice for
// spectra that fill it).
Quadrature field_quadrature(const FormField& a, const FormField& b, int n);

// The heat extension at height t together with its m spatial derivatives,
// all as spatial-representation fields.
struct HeatSlice {
  double t = 0;
  FormField field;
  std::vector<FormField> derivatives;
};
HeatSlice heat_slice(const FormField& f, double t);

struct PairingIdentityResult {
  double lhs = 0;             // integral of <R_j R_k phi, psi>
  double rhs_quadrature = 0;  // -2 * quadrature sum of spatial derivative pairings
  double rhs_analytic = 0;    // exact t-integral in frequency space
};

// The pairing of R_j R_k phi with psi equals -2 times the integral over the
// half-space of <d_j phi~, d_k psi~>.  Axes j, k are 1-based.
PairingIdentityResult lp_pairing_identity(const FormField& phi, const FormField& psi, int j, int k,
                                          const Quadrature& quad);

// 2 * integral over the half-space of |grad phi~| |grad psi~|, where |grad f|
// is the Euclidean norm over both the axis index and the form channels.
double embedding_lhs(const FormField& phi, const FormField& psi, const Quadrature& quad);

// Same with the axis l^1 norm: 2 * sum_{i,j} integral of |d_i phi~| |d_j psi~|.
// Dominates embedding_lhs and is at most m times it.
double embedding_l1_lhs(const FormField& phi, const FormField& psi, const Quadrature& quad);

struct PairingDecomposition {
  double pairing = 0;      // <S phi, psi>
  double diagonal = 0;     // contribution of the diagonal multiplier part
  double offdiag = 0;      // contribution of the off-diagonal part
  long long offdiag_terms = 0;  // instrumented count of elementary off-diagonal terms
  // |pairing| <= quadrature l^1 bound <= m (p-1) |phi|_p |psi|_q
  double abs_pairing = 0;
  double l1_bound = 0;
  double norm_bound = 0;
};

// Splits <S phi, psi> into diagonal and off-diagonal channel contributions and
// evaluates the chain of estimates that controls it.  Requires p >= 2 (the
// chain's constant is p - 1).
PairingDecomposition pairing_decomposition(const FormField& phi, const FormField& psi, double p,
                                           const Quadrature& quad);

}  // namespace baf
