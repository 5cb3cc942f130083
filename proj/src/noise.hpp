#ifndef CHLAB_NOISE_HPP
#define CHLAB_NOISE_HPP

#include <optional>
#include <vector>

#include "grid.hpp"

namespace chlab {

// One spatial correlation function xi^i(x) with precomputed derivatives.
// Constant is the default (and the isospectral / B^i = 0 family the paper
// analyzes); Exponential C + A e^x + B e^{-x} is inconsistent with
// periodicity and is admitted only for operator diagnostics on windows and
// for peakon dynamics on the line; Sampled is any smooth periodic profile.
struct NoiseMode {
  enum class Kind { Constant, Exponential, Sampled };

  Kind kind = Kind::Constant;
  double c = 0.0;                 // Constant
  double C = 0.0, A = 0.0, B = 0.0;  // Exponential

  // evaluation on the line (peakon dynamics); Sampled interpolates periodically
  double eval(double x) const;
  double eval_dx(double x) const;

  static NoiseMode constant(double c);
  static NoiseMode exponential(double C, double A, double B);
  static NoiseMode sampled(Field xi);

  // Grid realizations of xi and derivatives (Sampled keeps its own grid).
  // For Exponential these sample the formula directly; callers are
  // responsible for restricting to windows where wrap error is acceptable.
  Field xi_field(const Grid& g) const;
  Field xi_x(const Grid& g) const;
  Field xi_xx(const Grid& g) const;
  Field xi_xxx(const Grid& g) const;

 private:
  // Sampled storage
  Field samples_, dx_, dxx_, dxxx_;
};

struct NoiseBasis {
  std::vector<NoiseMode> modes;

  bool empty() const { return modes.empty(); }
  int size() const { return static_cast<int>(modes.size()); }
  bool all_constant() const;
  // sqrt(sum c_i^2) over constant modes; throws unless all_constant()
  double constant_norm() const;
  // Sum_i (||xi||_inf^2 + ||xi_x||_inf^2) on the grid; must be finite
  double strength(const Grid& g) const;
};

}  // namespace chlab

#endif
