#include "noise.hpp"

#include <cmath>

#include "errors.hpp"
#include "functionals.hpp"
#include "spectral.hpp"

namespace chlab {

NoiseMode NoiseMode::constant(double c) {
  require(std::isfinite(c), ErrorKind::InvalidArgument, "constant mode: c not finite");
  NoiseMode m;
  m.kind = Kind::Constant;
  m.c = c;
  return m;
}

NoiseMode NoiseMode::exponential(double C, double A, double B) {
  require(std::isfinite(C) && std::isfinite(A) && std::isfinite(B),
          ErrorKind::InvalidArgument, "exponential mode: non-finite coefficient");
  NoiseMode m;
  m.kind = Kind::Exponential;
  m.C = C;
  m.A = A;
  m.B = B;
  return m;
}

NoiseMode NoiseMode::sampled(Field xi) {
  check_finite(xi, "sampled noise mode");
  NoiseMode m;
  m.kind = Kind::Sampled;
  m.samples_ = xi;
  m.dx_ = spectral_derivative(m.samples_);
  m.dxx_ = spectral_derivative(m.dx_);
  m.dxxx_ = spectral_derivative(m.dxx_);
  return m;
}

double NoiseMode::eval(double x) const {
  switch (kind) {
    case Kind::Constant: return c;
    case Kind::Exponential: return C + A * std::exp(x) + B * std::exp(-x);
    case Kind::Sampled: return interp_linear(samples_, x);
  }
  return 0.0;
}

double NoiseMode::eval_dx(double x) const {
  switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Exponential: return A * std::exp(x) - B * std::exp(-x);
    case Kind::Sampled: return interp_linear(dx_, x);
  }
  return 0.0;
}

namespace {
Field sample_on(const Grid& g, const Field& f) {
  require(f.grid == g, ErrorKind::InvalidArgument,
          "sampled noise mode was built on a different grid");
  return f;
}
}  // namespace

Field NoiseMode::xi_field(const Grid& g) const {
  switch (kind) {
    case Kind::Constant: {
      Field out(g);
      for (auto& v : out.values) v = c;
      return out;
    }
    case Kind::Exponential:
      return make_field(g, [this](double x) { return C + A * std::exp(x) + B * std::exp(-x); });
    case Kind::Sampled: return sample_on(g, samples_);
  }
  return Field(g);
}

Field NoiseMode::xi_x(const Grid& g) const {
  switch (kind) {
    case Kind::Constant: return Field(g);
    case Kind::Exponential:
      return make_field(g, [this](double x) { return A * std::exp(x) - B * std::exp(-x); });
    case Kind::Sampled: return sample_on(g, dx_);
  }
  return Field(g);
}

Field NoiseMode::xi_xx(const Grid& g) const {
  switch (kind) {
    case Kind::Constant: return Field(g);
    case Kind::Exponential:
      return make_field(g, [this](double x) { return A * std::exp(x) + B * std::exp(-x); });
    case Kind::Sampled: return sample_on(g, dxx_);
  }
  return Field(g);
}

Field NoiseMode::xi_xxx(const Grid& g) const {
  switch (kind) {
    case Kind::Constant: return Field(g);
    case Kind::Exponential:
      return make_field(g, [this](double x) { return A * std::exp(x) - B * std::exp(-x); });
    case Kind::Sampled: return sample_on(g, dxxx_);
  }
  return Field(g);
}

bool NoiseBasis::all_constant() const {
  for (const auto& m : modes)
    if (m.kind != NoiseMode::Kind::Constant) return false;
  return true;
}

double NoiseBasis::constant_norm() const {
  require(all_constant(), ErrorKind::InvalidArgument,
          "constant_norm: basis has non-constant modes");
  double s = 0.0;
  for (const auto& m : modes) s += m.c * m.c;
  return std::sqrt(s);
}

double NoiseBasis::strength(const Grid& g) const {
  double s = 0.0;
  for (const auto& m : modes) {
    double a = sup_norm(m.xi_field(g));
    double b = sup_norm(m.xi_x(g));
    s += a * a + b * b;
  }
  require(std::isfinite(s), ErrorKind::InvalidArgument, "noise basis strength not finite");
  return s;
}

}  // namespace chlab
