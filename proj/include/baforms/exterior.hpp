#pragma once

// Exact, grid-free exterior algebra over R^m: multi-index enumeration, wedge
// product, Hodge star, and the symbol matrices of xi-wedge / its adjoint.
//
// Conventions (pinned once, tested everywhere):
//  * Basis k-forms e_i = e_{i1} ^ ... ^ e_{ik}, i1 < ... < ik, enumerated in
//    lexicographic order of the index tuples.
//  * The Hodge star is the complex-linear map with  *e_i = sigma(i) e_{i^c},
//    where sigma(i) = (-1)^{#{(a,b) in i x i^c : a > b}}.  This is the unique
//    sign making  conj(beta) ^ *alpha = <alpha, beta> e_1^...^e_m  hold for
//    all equal-degree pairs (Hermitian inner product, antilinear in beta).
//  * wedge_block(xi, k) is the matrix of  w -> xi ^ w  from degree k to k+1;
//    its transpose is the symbol of the interior product (contraction).

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace baf {

using cplx = std::complex<double>;

struct MultiIndex {
  int m = 0;
  std::vector<int> idx;    // strictly increasing, values in 1..m
  std::uint32_t mask = 0;  // bit l-1 set iff l is in idx

  MultiIndex() = default;
  MultiIndex(int m_, std::vector<int> idx_);
  static MultiIndex from_mask(int m, std::uint32_t mask);

  int degree() const { return static_cast<int>(idx.size()); }
  MultiIndex complement() const;
  bool operator==(const MultiIndex& o) const { return m == o.m && mask == o.mask; }
};

long long binomial(int n, int r);

// All k-subsets of {1..m} in lexicographic order.  0 <= k <= m <= 12.
std::vector<MultiIndex> enumerate_multi_indices(int m, int k);

// sigma(i) with *e_i = sigma(i) e_{i^c}; see header comment for the identity
// that fixes the sign.
int permutation_sign(const MultiIndex& i);

// Position of a mask in the lexicographic enumeration for its (m, k).
int lex_position(const MultiIndex& i);

struct FormVector {
  int m = 0;
  int k = 0;
  Eigen::VectorXcd coeffs;  // length binomial(m, k), lexicographic order

  static FormVector zero(int m, int k);
  static FormVector basis(int m, const MultiIndex& i);  // e_i
  double norm() const { return coeffs.norm(); }
};

// Hermitian inner product <a, b>, antilinear in b.
cplx inner(const FormVector& a, const FormVector& b);

FormVector wedge(const FormVector& a, const FormVector& b);
FormVector hodge_star(const FormVector& a);

struct GradedForm {
  int m = 0;
  std::vector<FormVector> comp;  // comp[k] has degree k, k = 0..m

  static GradedForm zero(int m);
  double norm() const;
};

// Matrix of w -> xi ^ w restricted to degree k (rows: degree k+1 basis,
// cols: degree k basis).  Entries are 0 or +-xi_l.
Eigen::MatrixXd wedge_block(const Eigen::VectorXd& xi, int k);

// xi ^ . on a whole graded form (top degree maps to nothing).
GradedForm wedge_apply(const Eigen::VectorXd& xi, const GradedForm& g);

// Adjoint of the above (contraction by xi), degree k+1 -> k.
GradedForm wedge_adjoint_apply(const Eigen::VectorXd& xi, const GradedForm& g);

}  // namespace baf
