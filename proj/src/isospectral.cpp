#include "isospectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "spectral.hpp"

namespace chlab {

namespace {

// First row of A^{-1}, A = 1/4 - D2 (FD2, periodic): circulant, built from
// its DFT symbol 1/4 + (2 - 2 cos(2 pi j / n)) / dx^2.
std::vector<double> green_row(const Grid& g) {
  const int n = g.n;
  const double idx2 = 1.0 / (g.dx() * g.dx());
  Spectrum c(static_cast<size_t>(n / 2 + 1));
  for (int j = 0; j <= n / 2; ++j) {
    const double ev = 0.25 + (2.0 - 2.0 * std::cos(2.0 * M_PI * j / n)) * idx2;
    c[static_cast<size_t>(j)] = 1.0 / (n * ev);
  }
  return synthesize(g, c).values;
}

std::vector<double> symmetric_eigen_desc(std::vector<double>& a, int n) {
  std::vector<double> w(static_cast<size_t>(n));
  const lapack_int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  require(info == 0, ErrorKind::Numerical,
          "dsyev failed with info=" + std::to_string(info));
  std::reverse(w.begin(), w.end());
  return w;
}

}  // namespace

SpectrumResult ch_spectrum(const Field& m, int k_max) {
  check_finite(m, "ch_spectrum input");
  require(k_max >= 1, ErrorKind::InvalidArgument, "ch_spectrum: k_max must be >= 1");
  const Grid& g = m.grid;
  const int n = g.n;
  require(k_max <= n, ErrorKind::InvalidArgument, "ch_spectrum: k_max exceeds grid size");

  SpectrumResult out;
  out.n_grid = n;
  out.min_m = *std::min_element(m.values.begin(), m.values.end());
  out.max_m = *std::max_element(m.values.begin(), m.values.end());
  const double scale = std::max(std::fabs(out.min_m), std::fabs(out.max_m));
  if (scale < 1e-300)
    throw Error(ErrorKind::NoSpectrum, "ch_spectrum: m is numerically zero");

  const std::vector<double> green = green_row(g);
  auto G = [&](int a, int b) {
    int d = std::abs(a - b);
    return green[static_cast<size_t>(std::min(d, n - d))];
  };

  // small negative excursions are discretization noise; genuinely
  // sign-indefinite weights go through the nonsymmetric pencil
  out.indefinite_weight = out.min_m < -1e-8 * scale;

  std::vector<double> lam(static_cast<size_t>(n)), lam_im(static_cast<size_t>(n), 0.0);
  if (!out.indefinite_weight) {
    std::vector<double> sq(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) sq[static_cast<size_t>(j)] = std::sqrt(std::max(m[j], 0.0));
    std::vector<double> B(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        B[static_cast<size_t>(a) * n + b] = sq[static_cast<size_t>(a)] * G(a, b) * sq[static_cast<size_t>(b)];
    std::vector<double> w = symmetric_eigen_desc(B, n);  // descending 2*lambda
    for (int j = 0; j < n; ++j) lam[static_cast<size_t>(j)] = 0.5 * w[static_cast<size_t>(j)];
  } else {
    // C = G diag(m); eigenvalues are 2*lambda (possibly complex)
    std::vector<double> C(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        C[static_cast<size_t>(a) * n + b] = G(a, b) * m[b];
    std::vector<double> wr(static_cast<size_t>(n)), wi(static_cast<size_t>(n));
    const lapack_int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, C.data(), n,
                                          wr.data(), wi.data(), nullptr, n, nullptr, n);
    require(info == 0, ErrorKind::Numerical,
            "dgeev failed with info=" + std::to_string(info));
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return wr[static_cast<size_t>(a)] > wr[static_cast<size_t>(b)]; });
    for (int j = 0; j < n; ++j) {
      lam[static_cast<size_t>(j)] = 0.5 * wr[static_cast<size_t>(order[static_cast<size_t>(j)])];
      lam_im[static_cast<size_t>(j)] = 0.5 * wi[static_cast<size_t>(order[static_cast<size_t>(j)])];
    }
  }
  out.eigenvalues.assign(lam.begin(), lam.begin() + k_max);
  out.eigenvalues_imag.assign(lam_im.begin(), lam_im.begin() + k_max);
  return out;
}

std::vector<double> isospectral_drift(const Trajectory& traj, int k_max) {
  require(!traj.snapshots.empty(), ErrorKind::InvalidArgument,
          "isospectral_drift: empty trajectory");
  std::vector<double> drift;
  SpectrumResult base;
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    Field m = helmholtz_apply(traj.snapshots[i]);
    SpectrumResult s = ch_spectrum(m, k_max);
    if (i == 0) {
      base = s;
      drift.push_back(0.0);
      continue;
    }
    double worst = 0.0;
    for (int k = 0; k < k_max; ++k) {
      const double b = base.eigenvalues[static_cast<size_t>(k)];
      worst = std::max(worst,
                       std::fabs(s.eigenvalues[static_cast<size_t>(k)] / b - 1.0));
    }
    drift.push_back(worst);
  }
  return drift;
}

std::vector<Peak> find_peaks(const Field& u, double floor_frac, double min_sep) {
  const Grid& g = u.grid;
  const int n = g.n;
  double umax = 0.0;
  for (double v : u.values) umax = std::max(umax, v);
  std::vector<Peak> out;
  for (int j = 0; j < n; ++j) {
    const double ym = u[(j - 1 + n) % n], y0 = u[j], yp = u[(j + 1) % n];
    if (!(y0 > ym && y0 >= yp && y0 > floor_frac * umax)) continue;
    const double den = ym - 2.0 * y0 + yp;
    const double d = den != 0.0 ? (ym - yp) / (2.0 * den) : 0.0;
    out.push_back({std::fmod((j + d) * g.dx() + g.length, g.length),
                   y0 - 0.25 * (ym - yp) * d});
  }
  std::sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) {
    return a.height > b.height;
  });
  if (min_sep > 0.0) {
    std::vector<Peak> kept;
    for (const auto& p : out) {
      bool close = false;
      for (const auto& q : kept) {
        double d = std::fabs(g.periodic_delta(p.x, q.x));
        if (d < min_sep) {
          close = true;
          break;
        }
      }
      if (!close) kept.push_back(p);
    }
    out = kept;
  }
  return out;
}

EmergentSpeeds emergent_speeds(const Trajectory& traj, int n_peaks) {
  require(n_peaks >= 1, ErrorKind::InvalidArgument, "emergent_speeds: n_peaks >= 1");
  const size_t total = traj.snapshots.size();
  const size_t window = std::max<size_t>(10, total / 4);
  require(total >= window, ErrorKind::InvalidArgument,
          "emergent_speeds: need at least 10 stored snapshots");
  const Grid& g = traj.grid;
  const double min_sep = 5.0 * g.dx();

  // seed from the final snapshot's tallest peaks
  std::vector<Peak> tips = find_peaks(traj.snapshots.back(), 0.05, min_sep);
  require(static_cast<int>(tips.size()) >= n_peaks, ErrorKind::InvalidArgument,
          "PeaksNotSeparated: fewer than n_peaks maxima spaced >= 5 dx in the "
          "late field");
  tips.resize(static_cast<size_t>(n_peaks));

  EmergentSpeeds out;
  for (int i = 0; i < n_peaks; ++i) {
    std::vector<double> ts, xs, hs;
    // continuity-track backward from the final snapshot: between adjacent
    // snapshots a peak moves far less than the peak spacing
    double prev = tips[static_cast<size_t>(i)].x;
    for (size_t back = 0; back < window; ++back) {
      const size_t k = total - 1 - back;
      // separation-filtered maxima: unresolved twins collapse onto the taller
      std::vector<Peak> pk = find_peaks(traj.snapshots[k], 0.05, min_sep);
      require(!pk.empty(), ErrorKind::InvalidArgument,
              "emergent_speeds: snapshot without maxima in the fit window");
      // nearest (periodically) to the running position
      const Peak* best = &pk[0];
      double bd = std::fabs(g.periodic_delta(pk[0].x, prev));
      for (const auto& c : pk) {
        double d = std::fabs(g.periodic_delta(c.x, prev));
        if (d < bd) {
          bd = d;
          best = &c;
        }
      }
      // unwrap
      double x = prev + g.periodic_delta(best->x, prev);
      ts.push_back(traj.times[k]);
      xs.push_back(x);
      hs.push_back(best->height);
      prev = x;
    }
    // least squares slope
    const size_t nw = ts.size();
    double tm = 0.0, xm = 0.0;
    for (size_t k = 0; k < nw; ++k) {
      tm += ts[k];
      xm += xs[k];
    }
    tm /= nw;
    xm /= nw;
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < nw; ++k) {
      num += (ts[k] - tm) * (xs[k] - xm);
      den += (ts[k] - tm) * (ts[k] - tm);
    }
    out.speeds.push_back(num / den);
    out.heights.push_back(std::accumulate(hs.begin(), hs.end(), 0.0) / nw);
  }
  return out;
}

}  // namespace chlab
