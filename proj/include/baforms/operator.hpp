#pragma once

// The degree-k block of (d delta - delta d) Laplacian^{-1} as a per-frequency
// matrix multiplier on form coefficients, plus its realization by composed
// scalar Riesz transforms, structural combinatorics, and an L^p norm-ratio
// search.
//
// Entry formulas (i, j multi-indices of degree k, xi != 0):
//   diagonal (i == j):
//       ( -sum_{p in i} xi_p^2 + sum_{q not in i} xi_q^2 ) / |xi|^2
//   adjacent (i \ j = {p}, j \ i = {q}, shared set S = i n j):
//       -2 (-1)^{alpha+beta} xi_p xi_q / |xi|^2,
//       alpha = #{s in S : s < p},  beta = #{s in S : s < q}
//   otherwise 0.
//
// The permutation sign (-1)^{alpha+beta} is forced by the wedge/contraction
// representation: the matrix must equal ([xi]^t[xi] - [xi][xi]^t)/|xi|^2
// restricted to degree k, and for k >= 2 the basis-ordering signs of
// insertion/removal do not cancel.  Without it the matrix is not orthogonal
// and does not intertwine with the Hodge star.  Equivalently the matrix is
// the k-th compound (minor) matrix of the reflection I - 2 xi xi^t/|xi|^2.
//
// On all of R^m the same operator is alternatively a principal-value
// convolution against a matrix kernel that is even and homogeneous of degree
// -m (a zero-mean angular part Omega(x/|x|) over |x|^m) plus the scalar
// multiple (1 - 2k/m) of the identity; that realization is deliberately not
// implemented — on the torus the multiplier form is exact, while singular
// quadrature of the kernel would add error to identity checks without adding
// information.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "baforms/exterior.hpp"
#include "baforms/fields.hpp"

namespace baf {

double multiplier_entry(const MultiIndex& i, const MultiIndex& j, const Eigen::VectorXd& xi);

enum class MultiplierRoute { entry, wedge };

Eigen::MatrixXd build_multiplier(int m, int k, const Eigen::VectorXd& xi,
                                 MultiplierRoute route = MultiplierRoute::entry);

// Which part of the matrix an application uses (the diagonal/off-diagonal
// split of the pairing decomposition).
enum class MultiplierPart { full, diagonal, offdiag };

// Per-frequency matrix product with the degree-k multiplier; mean components
// are annihilated.  Returns the input representation.
FormField apply_operator(const FormField& f, MultiplierPart part = MultiplierPart::full);

// Same operator assembled channel-by-channel from composed scalar Riesz
// transforms: diagonal sum_{p in i} R_p^2 - sum_{q not in i} R_q^2, adjacent
// 2 (-1)^{alpha+beta} R_p R_q.
FormField apply_operator_riesz(const FormField& f, MultiplierPart part = MultiplierPart::full);

// Number of terms in the off-diagonal part of the pairing decomposition when
// every adjacent matrix entry contributes its factor-2 Riesz composition:
// 2 * binomial(m,k) * (m-k) * k.
long long offdiag_term_count(int m, int k);

// Debug fault-injection hook: adds eps to every entry-route matrix entry.
// Exists so the CLI verification pipeline can prove it detects a broken
// multiplier; never set outside tests.
void set_multiplier_perturbation(double eps);
double multiplier_perturbation();

struct NormSearchReport {
  int m = 0, k = 0;
  double p = 0;               // requested exponent
  double search_exponent = 0; // the exponent actually maximized (dual for p < 2)
  double best_ratio = 0;
  double bound = 0;           // m * (p* - 1)
  bool violated = false;      // any evaluated ratio above bound + 1e-9
  long long evaluations = 0;
  double max_evaluated = 0;   // largest ratio over every field ever evaluated
  std::vector<std::pair<long long, double>> trace;  // (iteration, running best)
};

// Maximize |S f|_p / |f|_p over real mean-zero band-limited fields by random
// restarts plus gradient ascent.  budget = ascent iterations per restart.
NormSearchReport norm_search(const GridSpec& spec, int k, double p, int restarts, int budget,
                             std::uint64_t seed);

}  // namespace baf
