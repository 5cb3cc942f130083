#ifndef CHLAB_FUNCTIONALS_HPP
#define CHLAB_FUNCTIONALS_HPP

#include "grid.hpp"

namespace chlab {

// Spectral quadrature: mean of samples times L; exact for trig polynomials.
double integrate(const Field& f);

double norm_12(const Field& u);        // int u^2 + (1/2) u_x^2
double hamiltonian_h(const Field& u);  // (1/2) int u^2 + u_x^2
double sup_norm(const Field& u);
double steepening_constant(const Field& u);  // (sup|u|)^2
double momentum_total(const Field& m);       // int m dx

}  // namespace chlab

#endif
