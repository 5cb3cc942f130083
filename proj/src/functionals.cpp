#include "functionals.hpp"

#include <cmath>

#include "errors.hpp"
#include "spectral.hpp"

namespace chlab {

double integrate(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s / f.size() * f.grid.length;
}

namespace {
// int a*u^2 + b*u_x^2 with spectral u_x
double quadratic_energy(const Field& u, double a, double b) {
  check_finite(u, "energy functional input");
  Field ux = spectral_derivative(u);
  double s = 0.0;
  for (int j = 0; j < u.size(); ++j) s += a * u[j] * u[j] + b * ux[j] * ux[j];
  return s / u.size() * u.grid.length;
}
}  // namespace

double norm_12(const Field& u) { return quadratic_energy(u, 1.0, 0.5); }

double hamiltonian_h(const Field& u) { return quadratic_energy(u, 0.5, 0.5); }

double sup_norm(const Field& u) {
  check_finite(u, "sup_norm input");
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::fabs(v));
  return m;
}

double steepening_constant(const Field& u) {
  double s = sup_norm(u);
  return s * s;
}

double momentum_total(const Field& m) {
  check_finite(m, "momentum_total input");
  return integrate(m);
}

}  // namespace chlab
