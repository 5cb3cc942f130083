#ifndef CHLAB_ISOSPECTRAL_HPP
#define CHLAB_ISOSPECTRAL_HPP

#include <vector>

#include "ch_pde.hpp"
#include "grid.hpp"

namespace chlab {

struct SpectrumResult {
  std::vector<double> eigenvalues;       // lambda_k, descending by real part
  std::vector<double> eigenvalues_imag;  // zeros in the symmetrizable case
  int n_grid = 0;
  bool indefinite_weight = false;  // m changes sign: unsymmetrized solve, warning
  double min_m = 0.0;
  double max_m = 0.0;
};

// Eigenvalues of psi_xx = (1/4 - m/(2 lambda)) psi on the periodic grid
// (second-order central differences). For m > 0 the problem is solved in the
// symmetric inverse form B = m^{1/2} A^{-1} m^{1/2} whose top eigenvalues are
// 2 lambda_k; sign-indefinite m falls back to the real nonsymmetric pencil
// with a warning flag. Throws NoSpectrum when m is numerically zero.
SpectrumResult ch_spectrum(const Field& m, int k_max);

// Max relative drift of the top k eigenvalues across a trajectory's stored
// snapshots (momentum recomputed from u): series of
// max_k |lambda_k(t)/lambda_k(0) - 1|.
std::vector<double> isospectral_drift(const Trajectory& traj, int k_max);

struct Peak {
  double x;
  double height;
};

// Local maxima with quadratic sub-grid refinement, tallest first; peaks
// closer than min_sep to a taller one are dropped.
std::vector<Peak> find_peaks(const Field& u, double floor_frac = 0.05,
                             double min_sep = 0.0);

struct EmergentSpeeds {
  std::vector<double> speeds;   // one per tracked peak, tallest first
  std::vector<double> heights;  // mean height over the fit window
};

// Least-squares speeds of the n_peaks tallest late-time maxima (periodic
// unwrap over >= 10 late snapshots). Throws PeaksNotSeparated (as
// InvalidArgument) when tracked maxima come closer than 5 dx.
EmergentSpeeds emergent_speeds(const Trajectory& traj, int n_peaks);

}  // namespace chlab

#endif
