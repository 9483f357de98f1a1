#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssalab/gauge.hpp"

namespace ssalab {

struct BrownianConfig {
    int dim = 3;
    int motions = 1;    // N independent Brownian motions
    double dt = 0.01;   // absolute for single-radius runs, per-segment relative in LIL runs
    double horizon_factor = 1000.0;
    std::uint64_t seed = 1;
    int workers = 1;
};

void validate(const BrownianConfig& c);

// --- hitting statistic (Eq. 5.6 scaling): sup_j T_j(r) / (r^2 (log log r)^{-1})
inline double lil_hitting_statistic(double t_sup, double r) {
    return t_sup * std::log(std::log(r)) / (r * r);
}

// --- sup statistic (Eq. 5.8 scaling): value / sqrt(t log log t)
inline double lil_sup_statistic(double value, double t) {
    return value / std::sqrt(t * std::log(std::log(t)));
}

struct LilHittingReport {
    std::vector<double> radii;  // r_k = e^{k/2}, k = 1..K
    int k_stat_start = 0;       // first k with log log r_k > 0
    int k_band_start = 0;       // window start of the banded running min
    // [replicate][k], NaN before k_stat_start
    std::vector<std::vector<double>> statistic;
    std::vector<std::vector<double>> running_min;  // from k_band_start
    std::vector<std::vector<double>> dual_sup_statistic;
    std::vector<double> median_running_min;  // across replicates per k
    double target = 0.5;                     // N/2
};

LilHittingReport lil_hitting_experiment(const BrownianConfig& config, int K, int replicates);

struct LilSupReport {
    std::vector<double> times;  // t_k = e^k, k = 1..K
    int k_stat_start = 0;
    int k_band_start = 0;
    std::vector<std::vector<double>> statistic;
    std::vector<std::vector<double>> running_max;
    std::vector<double> median_running_max;
    double target = std::sqrt(2.0);  // sqrt(2/N)
};

LilSupReport lil_sup_experiment(const BrownianConfig& config, int K, int replicates);

struct StableSmallBallFit {
    double alpha = 0.5;
    std::vector<double> r;
    std::vector<double> p_hat;
    std::vector<double> se;
    std::vector<bool> used;  // p_hat >= 10/count
    double slope_raw = 0.0;  // straight log(-log p) vs log r fit
    double slope = 0.0;      // prefactor-corrected exponent estimate
    double slope_band = 0.0;
};

// Small-ball probabilities of the unit-scale stable subordinator and the
// fitted exponent of -log P(S(1) <= r) ~ r^{alpha/(alpha-1)}. The raw log-log
// slope carries a slowly varying prefactor bias at Monte Carlo reachable
// radii; the corrected estimate extrapolates pairwise slopes in
// 1/(-log p) -> 0, which removes the first-order term.
StableSmallBallFit stable_small_ball(double alpha, std::span<const double> r_grid,
                                     long long count, std::uint64_t seed);

enum class BoundProcess { Brownian, StableSubordinator };

struct BoundCheckConfig {
    BoundProcess process = BoundProcess::Brownian;
    int dim = 1;          // Brownian only
    double alpha = 0.5;   // stable only; closed forms exist at 0.5
    double b = 1.0;
    double c = 2.0;
    double gamma = 1.0;
    double eps = 1.0;
    long long count = 100000;
    double dt = 1e-3;  // Brownian stepping
    std::uint64_t seed = 1;
};

struct BoundCheckReport {
    double lhs = 0.0;
    double lhs_se = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs + 3 se - lhs
    bool holds = false;
};

// Hitting-probability bound: P(|Z(t)| <= gamma for some b <= t <= c) against
// the ratio of occupation integrals, LHS by Monte Carlo, RHS by quadrature.
BoundCheckReport hitting_probability_bound_check(const BoundCheckConfig& config);

struct IntegralTestRow {
    std::string gauge;
    bool decided = true;
    bool sum_diverges = false;
    double implied_liminf = 0.0;  // 0 or +inf when decided
};

// Symbolic integral test for type-I processes: sum g(n)^d over the power-log
// family, with the numeric classifier as fallback for other gauge forms.
std::vector<IntegralTestRow> type_I_integral_test(double alpha, int d,
                                                  std::span<const Gauge> gauges);

}  // namespace ssalab
