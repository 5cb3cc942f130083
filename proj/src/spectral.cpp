#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <unordered_map>

#include "errors.hpp"

namespace chlab {

namespace {

// FFTW plan creation is not thread-safe; execution on the plan's own buffers
// is. Each thread keeps aligned scratch + plans per transform size.
std::mutex g_plan_mutex;

struct Workspace {
  int n = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  void init(int size) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    n = size;
    real = fftw_alloc_real(static_cast<size_t>(n));
    cplx = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
    fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
  }
  ~Workspace() {
    if (!fwd) return;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(cplx);
  }
  Workspace() = default;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
};

Workspace& workspace(int n) {
  thread_local std::unordered_map<int, Workspace> cache;
  Workspace& w = cache[n];
  if (w.n != n) w.init(n);
  return w;
}

Spectrum forward(int n, const double* data) {
  Workspace& w = workspace(n);
  std::memcpy(w.real, data, sizeof(double) * static_cast<size_t>(n));
  fftw_execute(w.fwd);
  Spectrum c(static_cast<size_t>(n / 2 + 1));
  const double scale = 1.0 / n;
  for (int j = 0; j <= n / 2; ++j)
    c[static_cast<size_t>(j)] = {w.cplx[j][0] * scale, w.cplx[j][1] * scale};
  return c;
}

void backward(int n, const Spectrum& c, double* out) {
  Workspace& w = workspace(n);
  for (int j = 0; j <= n / 2; ++j) {
    w.cplx[j][0] = c[static_cast<size_t>(j)].real();
    w.cplx[j][1] = c[static_cast<size_t>(j)].imag();
  }
  fftw_execute(w.bwd);
  std::memcpy(out, w.real, sizeof(double) * static_cast<size_t>(n));
}

}  // namespace

Spectrum analyze(const Field& u) { return forward(u.grid.n, u.values.data()); }

Field synthesize(const Grid& g, const Spectrum& c) {
  Field out(g);
  backward(g.n, c, out.values.data());
  return out;
}

double wavenumber(const Grid& g, int j) { return 2.0 * M_PI * j / g.length; }

void apply_derivative(Spectrum& c, const Grid& g) {
  for (int j = 0; j < g.n / 2; ++j) {
    double k = wavenumber(g, j);
    c[static_cast<size_t>(j)] *= std::complex<double>(0.0, k);
  }
  c[static_cast<size_t>(g.n / 2)] = 0.0;  // odd derivative has no Nyquist image
}

void apply_helmholtz_inverse(Spectrum& c, const Grid& g) {
  for (int j = 0; j <= g.n / 2; ++j) {
    double k = wavenumber(g, j);
    c[static_cast<size_t>(j)] /= (1.0 + k * k);
  }
}

void apply_helmholtz(Spectrum& c, const Grid& g) {
  for (int j = 0; j <= g.n / 2; ++j) {
    double k = wavenumber(g, j);
    c[static_cast<size_t>(j)] *= (1.0 + k * k);
  }
}

Spectrum pad2(const Spectrum& c, const Grid& g) {
  Spectrum cf(static_cast<size_t>(g.n + 1), {0.0, 0.0});
  for (int j = 0; j < g.n / 2; ++j) cf[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
  return cf;
}

Spectrum truncate2(const Spectrum& cf, const Grid& g) {
  Spectrum c(static_cast<size_t>(g.n / 2 + 1), {0.0, 0.0});
  for (int j = 0; j < g.n / 2; ++j) c[static_cast<size_t>(j)] = cf[static_cast<size_t>(j)];
  return c;
}

Field synthesize_fine(const Grid& g, const Spectrum& cf) {
  Grid fine{2 * g.n, g.length};
  Field out(fine);
  backward(fine.n, cf, out.values.data());
  return out;
}

Spectrum analyze_fine(const Grid& g, const std::vector<double>& wf) {
  return forward(2 * g.n, wf.data());
}

Field spectral_derivative(const Field& f) {
  check_finite(f, "spectral_derivative input");
  Spectrum c = analyze(f);
  apply_derivative(c, f.grid);
  return synthesize(f.grid, c);
}

Field helmholtz_invert(const Field& m) {
  check_finite(m, "helmholtz_invert input");
  Spectrum c = analyze(m);
  apply_helmholtz_inverse(c, m.grid);
  return synthesize(m.grid, c);
}

Field helmholtz_apply(const Field& u) {
  check_finite(u, "helmholtz_apply input");
  Spectrum c = analyze(u);
  apply_helmholtz(c, u.grid);
  return synthesize(u.grid, c);
}

Field dealiased_product(const Field& a, const Field& b) {
  const Grid& g = a.grid;
  require(b.grid == g, ErrorKind::InvalidArgument, "dealiased_product: grid mismatch");
  Field af = synthesize_fine(g, pad2(analyze(a), g));
  Field bf = synthesize_fine(g, pad2(analyze(b), g));
  std::vector<double> wf(static_cast<size_t>(2 * g.n));
  for (int j = 0; j < 2 * g.n; ++j) wf[static_cast<size_t>(j)] = af[j] * bf[j];
  return synthesize(g, truncate2(analyze_fine(g, wf), g));
}

Field spectral_shift(const Field& f, double dx_shift) {
  Spectrum c = analyze(f);
  const Grid& g = f.grid;
  for (int j = 0; j < g.n / 2; ++j) {
    double th = -wavenumber(g, j) * dx_shift;
    c[static_cast<size_t>(j)] *= std::complex<double>(std::cos(th), std::sin(th));
  }
  c[static_cast<size_t>(g.n / 2)] = 0.0;
  return synthesize(g, c);
}

}  // namespace chlab
