#pragma once

// Periodic discretization of R^m and the frequency-side operator toolkit:
// forward/inverse Fourier transforms, scalar multiplier application, Riesz
// transforms, spectral derivatives and the heat semigroup.
//
// Transform normalization: forward computes  fhat(xi) = (1/N) sum_x f(x)
// e^{-i<xi,x>},  inverse computes  f(x) = sum_xi fhat(xi) e^{+i<xi,x>},  so a
// single mode e^{i<xi0,x>} has one frequency coefficient equal to 1.  The
// frequency lattice is signed: per axis, index j maps to the integer j for
// j <= n/2 and j - n otherwise, and xi_axis = 2*pi*jsigned / L_axis.
//
// All identities verified downstream are exact for these torus symbols; the
// only approximation relative to the continuum is the periodic substitution
// itself (stated in the README) plus t-quadrature where used.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "baforms/rng.hpp"

namespace baf {

struct GridSpec {
  int m = 0;
  std::vector<int> sizes;        // per-axis point counts, powers of two >= 4
  std::vector<double> box;       // per-axis physical lengths, > 0

  void validate() const;         // throws std::domain_error on violation
  std::size_t npoints() const;
  double volume() const;
  double cell_volume() const;
  bool operator==(const GridSpec& o) const {
    return m == o.m && sizes == o.sizes && box == o.box;
  }
};

enum class Rep { spatial, frequency };

struct ScalarField {
  GridSpec spec;
  Rep rep = Rep::spatial;
  std::vector<std::complex<double>> v;  // row-major over the grid

  static ScalarField zero(const GridSpec& s, Rep r = Rep::spatial);
};

// Decode the per-axis signed frequency integers of a linear index.
void frequency_integers(const GridSpec& spec, std::size_t linear, int* out);

// The frequency vector xi at a linear index (frequency representation).
void frequency_vector(const GridSpec& spec, std::size_t linear, double* xi_out);

// Largest |xi|^2 on the full lattice (Nyquist included).
double max_freq_sq(const GridSpec& spec);

// Smallest nonzero |xi|^2 on the lattice.
double min_freq_sq(const GridSpec& spec);

ScalarField transform(const ScalarField& f, Rep target);
void transform_inplace(ScalarField& f, Rep target);

// Frequency coefficient at xi != 0 multiplied by mult(xi); the xi = 0
// coefficient multiplied by zero_mode.  Accepts either representation and
// returns the same representation.  Throws on non-finite multiplier values.
ScalarField apply_scalar_multiplier(const ScalarField& f,
                                    const std::function<std::complex<double>(const double*)>& mult,
                                    std::complex<double> zero_mode);

ScalarField riesz(const ScalarField& f, int axis);               // i xi_l/|xi|, zero-mode 0
ScalarField heat_extend(const ScalarField& f, double t);         // e^{-t|xi|^2}, zero-mode 1
ScalarField partial_derivative(const ScalarField& f, int axis);  // i xi_l, zero-mode 0

std::complex<double> mean_value(const ScalarField& f);
void remove_mean(ScalarField& f);

// Zero every frequency whose per-axis signed integer exceeds sizes[a]/3 in
// magnitude (keeps spectral derivatives well-resolved on test inputs).
void band_limit(ScalarField& f);

// Largest |xi|^2 carried by a nonzero frequency coefficient; 0 for the zero
// field.  Used to scale t-quadratures to the spectrum actually present.
double active_freq_sq(const ScalarField& f);

// Random real-valued, mean-zero, band-limited spatial field.
ScalarField random_real_field(const GridSpec& spec, Rng& rng);

// Discrete integrals: cell_volume * sum over grid points.
std::complex<double> integral(const ScalarField& f);
double norm_l2(const ScalarField& f);

}  // namespace baf
