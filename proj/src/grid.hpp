#ifndef CHLAB_GRID_HPP
#define CHLAB_GRID_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace chlab {

// Uniform periodic grid: nodes x_j = j * dx, j = 0..n-1, dx = L/n.
struct Grid {
  int n = 0;
  double length = 0.0;

  static Grid make(int n, double length);  // validates n >= 16 power of two, L > 0

  double dx() const { return length / n; }
  double node(int j) const { return j * dx(); }
  // shortest signed periodic distance a - b, in (-L/2, L/2]
  double periodic_delta(double a, double b) const;

  bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
};

struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(static_cast<size_t>(g.n), 0.0) {}

  int size() const { return grid.n; }
  double& operator[](int j) { return values[static_cast<size_t>(j)]; }
  double operator[](int j) const { return values[static_cast<size_t>(j)]; }
  bool finite() const;
};

Field make_field(const Grid& g, const std::function<double(double)>& f);

// Linear interpolation at an arbitrary position (periodic wrap).
double interp_linear(const Field& f, double x);

void check_finite(const Field& f, const char* what);

// in-place BLAS-free helpers; fields must share a grid
Field& axpy(Field& y, double a, const Field& x);       // y += a*x
Field lincomb(double a, const Field& x, double b, const Field& y);

}  // namespace chlab

#endif
