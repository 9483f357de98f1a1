#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssalab/gauge.hpp"
#include "ssalab/sequence.hpp"

namespace ssalab {

// F(r) = P(|W(0)| <= r), analytic or empirical.
class SmallBallCdf {
public:
    static SmallBallCdf analytic(std::function<double(double)> f);
    static SmallBallCdf empirical(std::vector<double> abs_samples);

    double operator()(double r) const;
    bool is_empirical() const { return !samples_.empty(); }
    std::size_t sample_count() const { return samples_.size(); }
    // Smallest radius resolvable by an empirical F (min observed |x|); 0 for
    // analytic forms.
    double resolution() const { return resolution_; }

private:
    SmallBallCdf() = default;
    std::function<double(double)> f_;
    std::vector<double> samples_;  // sorted norms
    double resolution_ = 0.0;
};

enum class SeriesVerdict { Converges, Diverges, Undecided };

std::string to_string(SeriesVerdict v);

struct DeltaVerdict {
    double delta = 0.0;
    SeriesVerdict verdict = SeriesVerdict::Undecided;
    double block_slope = 0.0;          // d log(block sum) / d log(log N)
    std::vector<double> partial_sums;  // at N, 2N, 4N, 8N, 16N
    std::string diagnostic;
};

enum class TernaryVerdict { Yes, No, Undecided };

std::string to_string(TernaryVerdict v);

enum class TypeLabel { A, B, Undecided };

std::string to_string(TypeLabel v);

struct ClassifierReport {
    double c_low = 0.0;
    double c_high = std::numeric_limits<double>::infinity();
    std::vector<DeltaVerdict> per_delta;
    TernaryVerdict dominated_variation = TernaryVerdict::Undecided;
    TypeLabel type_label = TypeLabel::Undecided;
    long long horizon = 0;  // all verdicts are finite-horizon heuristics
};

// Sum classifier behind Theorem 3.1-style dichotomies: partial sums of
// F(delta g(n)) on the doubling schedule N..16N; the fitted slope of the
// doubling-block sums against log log N separates divergence (slope > -1
// boundary, the sum_{1/(n log n)} line) from convergence.
ClassifierReport sum_classifier(const SmallBallCdf& f, const Gauge& g,
                                std::span<const double> deltas, long long horizon);

struct DominatedVariationReport {
    TernaryVerdict verdict = TernaryVerdict::Undecided;
    std::vector<double> r;      // usable grid points
    std::vector<double> ratio;  // F(2r)/F(r)
    double median_ratio = 0.0;
    double smallest_decade_max = 0.0;
    std::string diagnostic;
};

// F(2r)/F(r) along a decreasing grid; bounded ratio at the smallest decade
// means dominated variation.
DominatedVariationReport dominated_variation_test(const SmallBallCdf& f,
                                                  std::span<const double> r_grid);

class DominatedVariationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Staircase gauge from the type-A construction: levels a_k with
// F(a_k / a) <= 2^{-k} F(a_k) and blocks b_{k+1}-b_k with
// 1/2 <= F(a_k)(b_{k+1}-b_k) <= 1. Self-audits both chains before returning.
// Throws DominatedVariationError when no admissible level exists (F is
// dominated-varying at the scanned resolution).
Gauge construct_type_a_gauge(const SmallBallCdf& f, double a, int max_levels = 24,
                             double start_radius = 1.0);

// K_W(r) = r^{-log lambda / log a} exp( int_1^{1/r} (log L(u) - log lambda)/(u log a) du ),
// adaptive quadrature on the log-u axis.
double k_w(double r, const std::function<double(double)>& laplace, double lambda, double a);

// Same integral by plain trapezoid; the independent numerical route.
double k_w_trapezoid(double r, const std::function<double(double)>& laplace, double lambda,
                     double a, long long points);

// Tabulation of min(K_W(r), 1) usable as a classifier F.
SmallBallCdf kw_cdf(const std::function<double(double)>& laplace, double lambda, double a,
                    double r_min = 1e-15);

struct LiminfCurves {
    std::vector<long long> checkpoints;                 // dyadic n schedule
    std::vector<std::vector<double>> running_min;       // [path][checkpoint]
    std::vector<double> pooled_median;
    std::vector<double> pooled_lo;
    std::vector<double> pooled_hi;
};

// Running minimum of |W(n)|/(a^n g(n)) (evaluated as |Y(n)|/g(n) for Y-kind
// paths) on a dyadic checkpoint schedule.
LiminfCurves liminf_estimate(std::span<const PathSample> paths, const Gauge& g, double a);

struct Prop11Report {
    double lambda = 0.0;
    bool type_a_gauge_exists = false;
    double escape_constant_d = 0.0;  // Theorem 1.1(i) constant when positive
    bool has_kw_classifier = false;
    ClassifierReport kw_classifier;
};

// Proposition 1.1 / 1.2 for laws on R_+^d: lambda = 0 means a type-A gauge
// exists; lambda > 0 routes the dichotomy through K_W.
Prop11Report proposition_1_1_check(const IncrementLaw& law, double a, const Gauge& g,
                                   std::span<const double> deltas, long long horizon);

}  // namespace ssalab
