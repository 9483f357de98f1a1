#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ssalab {

class Rng;

// First hitting times of |B| = r for an increasing radius grid, one motion
// started at the origin. Gaussian increments with absolute step dt; sub-step
// crossings handled by a Brownian-bridge correction on the radial projection
// when bridge is true, by end-of-step snapping when false (naive Euler).
struct HitTimes {
    std::vector<double> times;
    std::vector<bool> truncated;  // horizon reached before this radius
};

HitTimes hit_times_sphere(int dim, std::span<const double> radii, double dt, bool bridge,
                          double horizon_factor, Rng& rng);

// Hitting time of radius 1 from |x0| = start_radius in [0, 1). The unit cell
// of the segment-rescaled multi-radius simulation.
double hit_time_unit_sphere(int dim, double start_radius, double dt, bool bridge, Rng& rng);

// One-sided first passage of 1-D BM to +level. Past `horizon` the remaining
// passage time is completed exactly (level-distance^2 / Z^2), so the output
// carries no censoring; only the stepped segment is approximate.
double first_passage_level(double level, double dt, bool bridge, double horizon, Rng& rng);

// First hitting and last exit times of the radius grid for one transient
// motion (d >= 3). Outside far_multiple * r_max the return probability
// (r_max/R)^{d-2} is exact; a Bernoulli draw decides the return, and for d = 3
// the conditioned return time is sampled exactly (the conditioned radial part
// is a standard Brownian motion), so no last exit is ever censored there.
// For d >= 4 the conditioned return leg is stepped under the h-transform drift.
struct HitAndLastExit {
    std::vector<double> first_hit;
    std::vector<double> last_exit;
    int cycles = 0;
    bool truncated = false;  // cycle cap reached (probability ~ far_multiple^-cycles)
};

HitAndLastExit hit_and_last_exit_sphere(int dim, std::span<const double> radii, double dt,
                                        Rng& rng, double far_multiple = 10.0,
                                        int max_cycles = 64);

// Running suprema sup_{s <= t_k} |B(s)| at increasing checkpoints. Steps are
// rescaled per segment (dt is relative to the segment span); for d = 1 the
// in-step maximum of |B| is sampled from the exact bridge-extremum law.
std::vector<double> sup_abs_at(int dim, std::span<const double> t_grid, double dt_rel, Rng& rng);

// P(|B_t| <= x) for a d-dimensional standard Brownian motion, i.e. the chi_d
// CDF at x / sqrt(t).
double radial_gaussian_cdf(int dim, double x, double t);

// Monte Carlo estimate of P(|B(t)| <= gamma for some t in [b, c]) with bridge
// dip detection between grid points.
double brownian_interval_hit_probability(int dim, double b, double c, double gamma, double dt,
                                         long long count, std::uint64_t seed, double* se_out);

}  // namespace ssalab
