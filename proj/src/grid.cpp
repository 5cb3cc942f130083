#include "grid.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace chlab {

Grid Grid::make(int n, double length) {
  require(n >= 16, ErrorKind::InvalidArgument,
          "grid: n must be >= 16 (got " + std::to_string(n) + ")");
  require((n & (n - 1)) == 0, ErrorKind::InvalidArgument,
          "grid: n must be a power of two (got " + std::to_string(n) + ")");
  require(std::isfinite(length) && length > 0.0, ErrorKind::InvalidArgument,
          "grid: length must be positive and finite");
  return Grid{n, length};
}

double Grid::periodic_delta(double a, double b) const {
  double d = std::fmod(a - b, length);
  if (d > 0.5 * length) d -= length;
  if (d <= -0.5 * length) d += length;
  return d;
}

bool Field::finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

Field make_field(const Grid& g, const std::function<double(double)>& f) {
  Field out(g);
  for (int j = 0; j < g.n; ++j) out[j] = f(g.node(j));
  return out;
}

double interp_linear(const Field& f, double x) {
  const Grid& g = f.grid;
  double s = x / g.dx();
  double fl = std::floor(s);
  int j = static_cast<int>(fl) % g.n;
  if (j < 0) j += g.n;
  double w = s - fl;
  return f[j] * (1.0 - w) + f[(j + 1) % g.n] * w;
}

void check_finite(const Field& f, const char* what) {
  for (int j = 0; j < f.size(); ++j) {
    if (!std::isfinite(f[j])) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string(what) + ": non-finite sample at node " +
                      std::to_string(j) + " (x=" + std::to_string(f.grid.node(j)) +
                      ", value=" + std::to_string(f[j]) + ")");
    }
  }
}

Field& axpy(Field& y, double a, const Field& x) {
  for (int j = 0; j < y.size(); ++j) y[j] += a * x[j];
  return y;
}

Field lincomb(double a, const Field& x, double b, const Field& y) {
  Field out(x.grid);
  for (int j = 0; j < x.size(); ++j) out[j] = a * x[j] + b * y[j];
  return out;
}

}  // namespace chlab
