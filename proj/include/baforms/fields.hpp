#pragma once

// Form-valued fields over a periodic grid: one scalar channel per basis
// k-form, lexicographic channel order.  Also the plain-text field file format
// shared by the CLI:
//
//   header:  m k n_1 ... n_m L_1 ... L_m
//   then one row per grid point (row-major), each row holding dim
//   re/im coefficient pairs (2*dim numbers), whitespace separated.

#include <iosfwd>
#include <string>
#include <vector>

#include "baforms/exterior.hpp"
#include "baforms/grid.hpp"
#include "baforms/rng.hpp"

namespace baf {

struct FormField {
  GridSpec spec;
  int k = 0;
  std::vector<ScalarField> ch;  // binomial(m, k) channels, lex order

  static FormField zero(const GridSpec& spec, int k, Rep rep = Rep::spatial);
  int dim() const { return static_cast<int>(ch.size()); }
  Rep rep() const;
  void to_rep(Rep target);
};

FormField random_form_field(const GridSpec& spec, int k, Rng& rng);

void remove_mean(FormField& f);
double active_freq_sq(const FormField& f);

// Pointwise Lambda_k norm -> grid quadrature p-norm.
double norm_lp(const FormField& f, double p);

// Hermitian L2 pairing cellvol * sum_x <f(x), g(x)>.
std::complex<double> pairing_l2(const FormField& f, const FormField& g);

FormField hodge_star(const FormField& f);

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what) : std::runtime_error(what), line(line_) {}
};

void write_field(std::ostream& os, const FormField& f);
void write_field_file(const std::string& path, const FormField& f);
FormField read_field(std::istream& is);
FormField read_field_file(const std::string& path);

}  // namespace baf
