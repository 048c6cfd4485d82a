#include "baforms/exterior.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace baf {

namespace {

void check_mk(int m, int k) {
  if (m < 0 || m > 12 || k < 0 || k > m)
    throw std::domain_error("multi-index degree out of range: (m=" + std::to_string(m) +
                            ", k=" + std::to_string(k) + ")");
}

// Sign of merging two disjoint increasing sequences given as masks: number of
// pairs (a in ma, b in mb) with a > b, i.e. inversions of the concatenation
// (ma-sequence first).
int merge_sign(std::uint32_t ma, std::uint32_t mb) {
  int inv = 0;
  for (std::uint32_t t = ma; t; t &= t - 1) {
    const int bit = std::countr_zero(t);
    inv += std::popcount(mb & ((1u << bit) - 1u));
  }
  return (inv % 2 == 0) ? 1 : -1;
}

}  // namespace

MultiIndex::MultiIndex(int m_, std::vector<int> idx_) : m(m_), idx(std::move(idx_)) {
  check_mk(m, static_cast<int>(idx.size()));
  int prev = 0;
  for (int v : idx) {
    if (v <= prev || v > m)
      throw std::domain_error("multi-index not strictly increasing in 1..m");
    prev = v;
    mask |= 1u << (v - 1);
  }
}

MultiIndex MultiIndex::from_mask(int m, std::uint32_t mk) {
  MultiIndex r;
  r.m = m;
  r.mask = mk;
  for (int l = 1; l <= m; ++l)
    if (mk & (1u << (l - 1))) r.idx.push_back(l);
  check_mk(m, r.degree());
  return r;
}

MultiIndex MultiIndex::complement() const {
  const std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1u);
  return from_mask(m, full & ~mask);
}

long long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  long long num = 1;
  for (int i = 0; i < r; ++i) num = num * (n - i) / (i + 1);
  return num;
}

std::vector<MultiIndex> enumerate_multi_indices(int m, int k) {
  check_mk(m, k);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<size_t>(binomial(m, k)));
  std::vector<int> cur(static_cast<size_t>(k));
  // standard lexicographic k-combination walk
  for (int i = 0; i < k; ++i) cur[static_cast<size_t>(i)] = i + 1;
  while (true) {
    out.emplace_back(m, cur);
    if (k == 0) break;
    int pos = k - 1;
    while (pos >= 0 && cur[static_cast<size_t>(pos)] == m - (k - 1 - pos)) --pos;
    if (pos < 0) break;
    ++cur[static_cast<size_t>(pos)];
    for (int j = pos + 1; j < k; ++j)
      cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

int permutation_sign(const MultiIndex& i) {
  // (-1)^{#{(a,b) in i x i^c : a > b}} == merge sign of (i, i^c)
  return merge_sign(i.mask, i.complement().mask);
}

int lex_position(const MultiIndex& i) {
  // rank of the combination in lex order
  long long rank = 0;
  int prev = 0;
  const int k = i.degree();
  for (int t = 0; t < k; ++t) {
    for (int v = prev + 1; v < i.idx[static_cast<size_t>(t)]; ++v)
      rank += binomial(i.m - v, k - t - 1);
    prev = i.idx[static_cast<size_t>(t)];
  }
  return static_cast<int>(rank);
}

FormVector FormVector::zero(int m, int k) {
  check_mk(m, k);
  FormVector f;
  f.m = m;
  f.k = k;
  f.coeffs = Eigen::VectorXcd::Zero(binomial(m, k));
  return f;
}

FormVector FormVector::basis(int m, const MultiIndex& i) {
  FormVector f = zero(m, i.degree());
  f.coeffs[lex_position(i)] = 1.0;
  return f;
}

cplx inner(const FormVector& a, const FormVector& b) {
  if (a.m != b.m || a.k != b.k)
    throw std::domain_error("inner product requires matching (m, k)");
  return b.coeffs.dot(a.coeffs);  // Eigen conjugates the left operand: sum a_i conj(b_i)
}

FormVector wedge(const FormVector& a, const FormVector& b) {
  if (a.m != b.m) throw std::domain_error("wedge requires equal ambient dimension");
  if (a.k + b.k > a.m)
    throw std::domain_error("wedge degree overflow: " + std::to_string(a.k) + "+" +
                            std::to_string(b.k) + " > " + std::to_string(a.m));
  FormVector out = FormVector::zero(a.m, a.k + b.k);
  const auto ia = enumerate_multi_indices(a.m, a.k);
  const auto ib = enumerate_multi_indices(b.m, b.k);
  for (size_t p = 0; p < ia.size(); ++p) {
    const cplx ca = a.coeffs[static_cast<Eigen::Index>(p)];
    if (ca == 0.0) continue;
    for (size_t q = 0; q < ib.size(); ++q) {
      const cplx cb = b.coeffs[static_cast<Eigen::Index>(q)];
      if (cb == 0.0) continue;
      if (ia[p].mask & ib[q].mask) continue;
      const int s = merge_sign(ia[p].mask, ib[q].mask);
      const MultiIndex target = MultiIndex::from_mask(a.m, ia[p].mask | ib[q].mask);
      out.coeffs[lex_position(target)] += static_cast<double>(s) * ca * cb;
    }
  }
  return out;
}

FormVector hodge_star(const FormVector& a) {
  FormVector out = FormVector::zero(a.m, a.m - a.k);
  const auto basis = enumerate_multi_indices(a.m, a.k);
  for (size_t p = 0; p < basis.size(); ++p) {
    const cplx c = a.coeffs[static_cast<Eigen::Index>(p)];
    if (c == 0.0) continue;
    const MultiIndex comp = basis[p].complement();
    out.coeffs[lex_position(comp)] += static_cast<double>(permutation_sign(basis[p])) * c;
  }
  return out;
}

GradedForm GradedForm::zero(int m) {
  GradedForm g;
  g.m = m;
  g.comp.reserve(static_cast<size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) g.comp.push_back(FormVector::zero(m, k));
  return g;
}

double GradedForm::norm() const {
  double s = 0;
  for (const auto& c : comp) s += c.coeffs.squaredNorm();
  return std::sqrt(s);
}

Eigen::MatrixXd wedge_block(const Eigen::VectorXd& xi, int k) {
  const int m = static_cast<int>(xi.size());
  check_mk(m, k);
  if (k == m) return Eigen::MatrixXd::Zero(0, 1);  // top degree has no image
  const auto rows = enumerate_multi_indices(m, k + 1);
  const auto cols = enumerate_multi_indices(m, k);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                            static_cast<Eigen::Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) {
    for (int l = 1; l <= m; ++l) {
      const std::uint32_t lb = 1u << (l - 1);
      if (cols[c].mask & lb) continue;
      const int s = merge_sign(lb, cols[c].mask);  // e_l ^ e_j reordered
      const MultiIndex target = MultiIndex::from_mask(m, cols[c].mask | lb);
      B(lex_position(target), static_cast<Eigen::Index>(c)) = s * xi[l - 1];
    }
  }
  return B;
}

GradedForm wedge_apply(const Eigen::VectorXd& xi, const GradedForm& g) {
  GradedForm out = GradedForm::zero(g.m);
  for (int k = 0; k + 1 <= g.m; ++k)
    out.comp[static_cast<size_t>(k) + 1].coeffs =
        wedge_block(xi, k) * g.comp[static_cast<size_t>(k)].coeffs;
  return out;
}

GradedForm wedge_adjoint_apply(const Eigen::VectorXd& xi, const GradedForm& g) {
  GradedForm out = GradedForm::zero(g.m);
  for (int k = 0; k + 1 <= g.m; ++k)
    out.comp[static_cast<size_t>(k)].coeffs =
        wedge_block(xi, k).transpose() * g.comp[static_cast<size_t>(k) + 1].coeffs;
  return out;
}

}  // namespace baf
