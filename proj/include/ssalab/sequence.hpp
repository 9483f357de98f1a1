#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssalab/law.hpp"

namespace ssalab {

struct SequenceParams {
    double a = 2.0;  // scaling factor, > 1
    int dim = 1;
    long long n_min = 0;
    long long n_max = 0;
};

void validate(const SequenceParams& p);

enum class PathKind { ShiftSelfsimilarW, StationaryY };

// A finite realization of {W(n)} or {Y(n)} over an integer window, together
// with the window increments X_n and the certified truncation metadata of the
// dropped series tail.
struct PathSample {
    SequenceParams params;
    PathKind kind = PathKind::ShiftSelfsimilarW;
    int truncation_depth = 0;
    double truncation_bound = 0.0;  // magnitude bound on the dropped tail at n_min
    std::uint64_t seed = 0;

    std::vector<double> values;      // row-major (window length) x dim
    std::vector<double> increments;  // X_n for n in the window, same layout

    long long length() const { return params.n_max - params.n_min + 1; }
    std::span<const double> value(long long n) const;
    std::span<const double> increment(long long n) const;
};

// Truncation depth M such that a^{-M} * a/(a-1) * Q_{0.999}(|X|) < 1e-9 * a^{n_min}.
int default_truncation_depth(const SequenceParams& params, const IncrementLaw& law);

// W(n) = sum_{j=n_min-M}^{n} a^j X_j.
PathSample build_w_path(const SequenceParams& params, const IncrementLaw& law,
                        int truncation_depth, std::uint64_t seed);

// Y(n) = sum_{j=n_min-M}^{n} a^{j-n} X_j; same increments as build_w_path at
// equal seed, so the pair satisfies the Lamperti identity up to roundoff.
PathSample build_y_path(const SequenceParams& params, const IncrementLaw& law,
                        int truncation_depth, std::uint64_t seed);

// W(n) = a^n Y(n), in either direction. Involutive up to roundoff.
PathSample lamperti(const PathSample& path);

std::vector<PathSample> build_ensemble(const SequenceParams& params, const IncrementLaw& law,
                                       int truncation_depth, std::uint64_t master_seed,
                                       std::size_t count, PathKind kind, int workers = 1);

struct SelfsimilarityTest {
    std::string label;
    double statistic = 0.0;
    double p_value = 1.0;
    bool degenerate = false;  // both samples constant within truncation tolerance
};

struct SelfsimilarityReport {
    std::vector<SelfsimilarityTest> tests;
    double min_p_value = 1.0;
    bool pass(double alpha = 0.01) const;  // Bonferroni over tests.size()
};

// Two-sample comparison of {W(n+lag)} against {a^lag W(n)} on independent
// ensemble halves: componentwise KS at fixed n plus pair projections on 8
// fixed random directions.
SelfsimilarityReport test_shift_selfsimilarity(std::span<const PathSample> paths, long long lag);

// (1/N) sum_k 1{|Y(k) - x| <= delta} over the sample window.
double ergodic_average(const PathSample& path, std::span<const double> x, double delta);

// Effective sample size for ergodic-average tolerance bands under the
// geometric memory a^{-1}: N (1 - 1/a) / (1 + 1/a).
double ergodic_effective_n(double a, double n);

}  // namespace ssalab
