#ifndef CHLAB_SPECTRAL_HPP
#define CHLAB_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "grid.hpp"

namespace chlab {

// Normalized real-to-complex spectrum: coeffs[j], j = 0..n/2, such that
// u(x) = sum_j coeffs[j] e^{i k_j x} + c.c. (j > 0), k_j = 2*pi*j / L.
using Spectrum = std::vector<std::complex<double>>;

Spectrum analyze(const Field& u);
Field synthesize(const Grid& g, const Spectrum& c);

double wavenumber(const Grid& g, int j);

// in-place multipliers
void apply_derivative(Spectrum& c, const Grid& g);        // *= i k  (Nyquist zeroed)
void apply_helmholtz_inverse(Spectrum& c, const Grid& g); // *= 1/(1+k^2)
void apply_helmholtz(Spectrum& c, const Grid& g);         // *= (1+k^2)

// 2x zero padding for dealiased quadratic products. Coarse Nyquist dropped.
Spectrum pad2(const Spectrum& c, const Grid& g);
Spectrum truncate2(const Spectrum& cf, const Grid& g);
Field synthesize_fine(const Grid& g, const Spectrum& cf);  // on the 2n grid
Spectrum analyze_fine(const Grid& g, const std::vector<double>& wf);

// spatial_field operations
Field spectral_derivative(const Field& f);
Field helmholtz_invert(const Field& m);   // (1 - dxx)^{-1} m
Field helmholtz_apply(const Field& u);    // u - u_xx
Field dealiased_product(const Field& a, const Field& b);

// Fourier shift by dx_shift (exact in the discrete space)
Field spectral_shift(const Field& f, double dx_shift);

}  // namespace chlab

#endif
