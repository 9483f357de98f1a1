#include "ssalab/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssalab/parallel.hpp"
#include "ssalab/rng.hpp"
#include "ssalab/stats.hpp"

namespace ssalab {

namespace {

constexpr std::uint64_t kPilotSeed = 0x51a7e0auLL;
constexpr std::size_t kPilotCount = 100000;

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

void validate(const SequenceParams& p) {
    if (!(p.a > 1.0)) throw std::invalid_argument("sequence: a must be > 1");
    if (p.dim < 1) throw std::invalid_argument("sequence: dim must be >= 1");
    if (p.n_min > p.n_max) throw std::invalid_argument("sequence: window must satisfy n_min <= n_max");
    // a^{n_max} < 1e300 keeps W-path arithmetic inside double range.
    if (static_cast<double>(p.n_max) * std::log10(p.a) >= 300.0)
        throw std::invalid_argument("sequence: window too wide, a^{n_max} would overflow");
    if (static_cast<double>(-p.n_min) * std::log10(p.a) >= 300.0)
        throw std::invalid_argument("sequence: window too wide, a^{n_min} would underflow");
}

std::span<const double> PathSample::value(long long n) const {
    if (n < params.n_min || n > params.n_max) throw std::out_of_range("PathSample::value");
    auto i = static_cast<std::size_t>(n - params.n_min);
    return {values.data() + i * params.dim, static_cast<std::size_t>(params.dim)};
}

std::span<const double> PathSample::increment(long long n) const {
    if (n < params.n_min || n > params.n_max) throw std::out_of_range("PathSample::increment");
    auto i = static_cast<std::size_t>(n - params.n_min);
    return {increments.data() + i * params.dim, static_cast<std::size_t>(params.dim)};
}

int default_truncation_depth(const SequenceParams& params, const IncrementLaw& law) {
    validate(params);
    double q = law.quantile_abs(0.999, kPilotCount, kPilotSeed);
    if (q <= 0.0) return 8;
    // a^{-M} * a/(a-1) * q < 1e-9  =>  M > (log q + log(a/(a-1)) + 9 log 10) / log a
    double m = (std::log(q) + std::log(params.a / (params.a - 1.0)) + 9.0 * std::log(10.0)) /
               std::log(params.a);
    return std::max(8, static_cast<int>(std::ceil(m)) + 1);
}

namespace {

PathSample build_path(const SequenceParams& params, const IncrementLaw& law, int depth,
                      std::uint64_t seed, PathKind kind) {
    validate(params);
    if (depth < 0) throw std::invalid_argument("build path: truncation depth must be >= 0");
    if (law.dim() != params.dim) throw std::invalid_argument("build path: law/param dim mismatch");

    PathSample p;
    p.params = params;
    p.kind = kind;
    p.truncation_depth = depth;
    p.seed = seed;

    const int d = params.dim;
    const long long len = params.n_max - params.n_min + 1;
    p.values.assign(static_cast<std::size_t>(len) * d, 0.0);
    p.increments.assign(static_cast<std::size_t>(len) * d, 0.0);

    SeedPath root(seed);
    Rng rng(root.child("increments"));
    std::vector<double> x(d);
    std::vector<double> acc(d, 0.0);  // W(j) for W-kind, Y(j) for Y-kind

    const double inv_a = 1.0 / params.a;
    for (long long j = params.n_min - depth; j <= params.n_max; ++j) {
        law.sample_into(x, rng);
        if (kind == PathKind::ShiftSelfsimilarW) {
            double aj = std::pow(params.a, static_cast<double>(j));
            for (int i = 0; i < d; ++i) acc[i] += aj * x[i];
        } else {
            for (int i = 0; i < d; ++i) acc[i] = inv_a * acc[i] + x[i];
        }
        if (j >= params.n_min) {
            auto idx = static_cast<std::size_t>(j - params.n_min) * d;
            std::copy(acc.begin(), acc.end(), p.values.begin() + idx);
            std::copy(x.begin(), x.end(), p.increments.begin() + idx);
        }
    }

    double q = law.quantile_abs(0.999, kPilotCount, kPilotSeed);
    double geom = params.a / (params.a - 1.0);
    if (kind == PathKind::ShiftSelfsimilarW)
        p.truncation_bound = std::pow(params.a, static_cast<double>(params.n_min - depth)) * geom * q;
    else
        p.truncation_bound = std::pow(params.a, static_cast<double>(-depth)) * geom * q;
    return p;
}

}  // namespace

PathSample build_w_path(const SequenceParams& params, const IncrementLaw& law,
                        int truncation_depth, std::uint64_t seed) {
    return build_path(params, law, truncation_depth, seed, PathKind::ShiftSelfsimilarW);
}

PathSample build_y_path(const SequenceParams& params, const IncrementLaw& law,
                        int truncation_depth, std::uint64_t seed) {
    return build_path(params, law, truncation_depth, seed, PathKind::StationaryY);
}

PathSample lamperti(const PathSample& path) {
    PathSample out = path;
    out.kind = path.kind == PathKind::ShiftSelfsimilarW ? PathKind::StationaryY
                                                        : PathKind::ShiftSelfsimilarW;
    const int d = path.params.dim;
    for (long long n = path.params.n_min; n <= path.params.n_max; ++n) {
        double f = path.kind == PathKind::ShiftSelfsimilarW
                       ? std::pow(path.params.a, static_cast<double>(-n))
                       : std::pow(path.params.a, static_cast<double>(n));
        auto idx = static_cast<std::size_t>(n - path.params.n_min) * d;
        for (int i = 0; i < d; ++i) out.values[idx + i] = f * path.values[idx + i];
    }
    double scale = std::pow(path.params.a, static_cast<double>(path.kind == PathKind::ShiftSelfsimilarW
                                                                   ? -path.params.n_min
                                                                   : path.params.n_min));
    out.truncation_bound = path.truncation_bound * scale;
    return out;
}

std::vector<PathSample> build_ensemble(const SequenceParams& params, const IncrementLaw& law,
                                       int truncation_depth, std::uint64_t master_seed,
                                       std::size_t count, PathKind kind, int workers) {
    std::vector<PathSample> out(count);
    SeedPath root(master_seed);
    SeedPath paths = root.child("path");
    parallel_for_indexed(count, workers, [&](std::size_t i) {
        std::uint64_t s = paths.child(static_cast<std::uint64_t>(i)).value();
        out[i] = kind == PathKind::ShiftSelfsimilarW ? build_w_path(params, law, truncation_depth, s)
                                                     : build_y_path(params, law, truncation_depth, s);
    });
    return out;
}

bool SelfsimilarityReport::pass(double alpha) const {
    if (tests.empty()) return false;
    double threshold = alpha / static_cast<double>(tests.size());
    for (const auto& t : tests)
        if (!t.degenerate && t.p_value < threshold) return false;
    for (const auto& t : tests)
        if (t.degenerate && t.statistic != 0.0) return false;
    return true;
}

namespace {

SelfsimilarityTest compare_samples(std::string label, std::vector<double> lhs,
                                   std::vector<double> rhs, double tol) {
    SelfsimilarityTest t;
    t.label = std::move(label);
    auto range = [](const std::vector<double>& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi - *lo;
    };
    if (range(lhs) <= tol && range(rhs) <= tol) {
        // Degenerate marginals (point-mass-driven paths): compare the constants.
        t.degenerate = true;
        double diff = std::abs(lhs.front() - rhs.front());
        t.statistic = diff <= tol ? 0.0 : 1.0;
        t.p_value = diff <= tol ? 1.0 : 0.0;
        return t;
    }
    auto ks = ks_two_sample(std::move(lhs), std::move(rhs));
    t.statistic = ks.statistic;
    t.p_value = ks.p_value;
    return t;
}

}  // namespace

SelfsimilarityReport test_shift_selfsimilarity(std::span<const PathSample> paths, long long lag) {
    if (paths.size() < 500)
        throw std::invalid_argument("selfsimilarity test: need an ensemble of >= 500 paths");
    if (lag < 1) throw std::invalid_argument("selfsimilarity test: lag must be >= 1");
    const auto& params = paths.front().params;
    if (params.n_max - lag < params.n_min)
        throw std::invalid_argument("selfsimilarity test: window too short for requested lag");
    for (const auto& p : paths)
        if (p.kind != PathKind::ShiftSelfsimilarW)
            throw std::invalid_argument("selfsimilarity test: expects W-kind paths");

    const int d = params.dim;
    const double alag = std::pow(params.a, static_cast<double>(lag));
    const std::size_t half = paths.size() / 2;
    double bound = 0.0;
    for (const auto& p : paths) bound = std::max(bound, p.truncation_bound);
    const double tol = 4.0 * (alag + 1.0) * std::max(bound, 1e-300);

    std::vector<long long> test_points;
    test_points.push_back(params.n_min);
    long long mid = (params.n_min + params.n_max - lag) / 2;
    if (mid != params.n_min) test_points.push_back(mid);
    if (params.n_max - lag != mid && params.n_max - lag != params.n_min)
        test_points.push_back(params.n_max - lag);

    SelfsimilarityReport report;

    for (long long n : test_points) {
        for (int i = 0; i < d; ++i) {
            std::vector<double> lhs, rhs;
            lhs.reserve(half);
            rhs.reserve(paths.size() - half);
            for (std::size_t k = 0; k < half; ++k) lhs.push_back(paths[k].value(n + lag)[i]);
            for (std::size_t k = half; k < paths.size(); ++k)
                rhs.push_back(alag * paths[k].value(n)[i]);
            report.tests.push_back(compare_samples(
                "marginal n=" + std::to_string(n) + " comp=" + std::to_string(i), std::move(lhs),
                std::move(rhs), tol));
        }
    }

    // Pair law at (n, n+1) projected on fixed random directions, keeping the
    // joint check dimension-free.
    if (params.n_max - lag - 1 >= params.n_min) {
        Rng dir_rng(0xd17ec7105ULL);
        long long n = test_points.front();
        for (int k = 0; k < 8; ++k) {
            std::vector<double> u(2 * d);
            dir_rng.fill_normals(u);
            double nu = norm2(u);
            for (auto& v : u) v /= nu;
            std::vector<double> lhs, rhs;
            lhs.reserve(half);
            rhs.reserve(paths.size() - half);
            for (std::size_t p = 0; p < half; ++p) {
                auto v0 = paths[p].value(n + lag);
                auto v1 = paths[p].value(n + lag + 1);
                double s = 0.0;
                for (int i = 0; i < d; ++i) s += u[i] * v0[i] + u[d + i] * v1[i];
                lhs.push_back(s);
            }
            for (std::size_t p = half; p < paths.size(); ++p) {
                auto v0 = paths[p].value(n);
                auto v1 = paths[p].value(n + 1);
                double s = 0.0;
                for (int i = 0; i < d; ++i) s += u[i] * v0[i] + u[d + i] * v1[i];
                rhs.push_back(alag * s);
            }
            report.tests.push_back(compare_samples("pair n=" + std::to_string(n) +
                                                       " dir=" + std::to_string(k),
                                                   std::move(lhs), std::move(rhs), tol * 2.0));
        }
    }

    report.min_p_value = 1.0;
    for (const auto& t : report.tests)
        if (!t.degenerate) report.min_p_value = std::min(report.min_p_value, t.p_value);
    return report;
}

double ergodic_average(const PathSample& path, std::span<const double> x, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("ergodic_average: delta must be positive");
    if (static_cast<int>(x.size()) != path.params.dim)
        throw std::invalid_argument("ergodic_average: point dimension mismatch");
    const int d = path.params.dim;
    long long hits = 0;
    for (long long n = path.params.n_min; n <= path.params.n_max; ++n) {
        auto v = path.value(n);
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += (v[i] - x[i]) * (v[i] - x[i]);
        if (std::sqrt(s) <= delta) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(path.length());
}

double ergodic_effective_n(double a, double n) {
    double inv = 1.0 / a;
    return n * (1.0 - inv) / (1.0 + inv);
}

}  // namespace ssalab
