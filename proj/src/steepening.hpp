#ifndef CHLAB_STEEPENING_HPP
#define CHLAB_STEEPENING_HPP

#include <optional>
#include <vector>

#include "ch_pde.hpp"
#include "grid.hpp"
#include "slope_record.hpp"

namespace chlab {

// Locate the tracked inflection point: the first sign change of u_xx to the
// right (periodically) of the global maximum where the slope is negative, or
// the sign change nearest the hint once tracking has started. Sub-grid
// position by linear interpolation of u_xx; slope by linear interpolation of
// the spectral u_x. Returns nullopt when no such inflection exists (e.g. a
// pure peakon, whose corner is a momentum spike, not an inflection).
std::optional<double> find_inflection(const Field& u,
                                      std::optional<double> hint = {});

// Full probe: inflection plus the data entering the slope evolution equation.
std::optional<SlopeRecord> slope_probe(const Field& u, double t,
                                       std::optional<double> hint = {});

// Continuity-tracked records over a trajectory's stored snapshots. Stops at
// the blow-up flag or when the inflection disappears; throws TrackingLost if
// the bracket jumps by more than L/10 between strides.
std::vector<SlopeRecord> track(const Trajectory& traj);

// Riccati envelope s'(t) = -s^2/2 + M through s(0) = s0 on the blow-up branch
// (requires s0 < -sqrt(2M)): sqrt(2M) coth(sigma + t sqrt(2M)/2) with
// sigma = coth^{-1}(s0/sqrt(2M)) < 0; -inf at and past the pole. M = 0 gives
// the limit s0/(1 + s0 t/2).
double coth_envelope(double s0, double M, double t);

// Pole of the envelope: -2 sigma / sqrt(2M) (-2/s0 when M = 0).
double breaking_time_bound(double s0, double M);

// Fill the envelope column from the first record (time-shifted), given M.
void attach_envelope(std::vector<SlopeRecord>& records, double M);

// First record time with s <= slope_threshold. Requires threshold < 0 and
// |threshold| >= 10 |s0|.
std::optional<double> detect_blowup(const std::vector<SlopeRecord>& records,
                                    double slope_threshold);

}  // namespace chlab

#endif
