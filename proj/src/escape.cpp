#include "ssalab/escape.hpp"

#include <algorithm>
#include <cmath>

#include "ssalab/quadrature.hpp"
#include "ssalab/stats.hpp"

namespace ssalab {

std::string to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Converges: return "converges";
        case SeriesVerdict::Diverges: return "diverges";
        default: return "undecided";
    }
}

std::string to_string(TernaryVerdict v) {
    switch (v) {
        case TernaryVerdict::Yes: return "yes";
        case TernaryVerdict::No: return "no";
        default: return "undecided";
    }
}

std::string to_string(TypeLabel v) {
    switch (v) {
        case TypeLabel::A: return "A";
        case TypeLabel::B: return "B";
        default: return "undecided";
    }
}

SmallBallCdf SmallBallCdf::analytic(std::function<double(double)> f) {
    if (!f) throw std::invalid_argument("small-ball cdf: empty function");
    SmallBallCdf c;
    c.f_ = std::move(f);
    return c;
}

SmallBallCdf SmallBallCdf::empirical(std::vector<double> abs_samples) {
    if (abs_samples.empty()) throw std::invalid_argument("small-ball cdf: no samples");
    std::sort(abs_samples.begin(), abs_samples.end());
    if (abs_samples.front() < 0.0)
        throw std::invalid_argument("small-ball cdf: samples must be norms");
    SmallBallCdf c;
    c.resolution_ = abs_samples.front();
    c.samples_ = std::move(abs_samples);
    return c;
}

double SmallBallCdf::operator()(double r) const {
    if (r < 0.0) return 0.0;
    if (!samples_.empty()) {
        auto it = std::upper_bound(samples_.begin(), samples_.end(), r);
        return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
    }
    double v = f_(r);
    if (v < 0.0 || v > 1.0 + 1e-12 || !std::isfinite(v))
        throw std::domain_error("small-ball cdf: F(r) outside [0,1]");
    return std::min(v, 1.0);
}

namespace {

// Block-sum slope rule. The sums S(N),...,S(16N) give doubling blocks
// D_k = S(2^k N) - S(2^{k-1} N); regressing log D_k on log log(2^k N) puts the
// sum_{1/(n log n)} boundary exactly at slope -1. Margins of 0.1 on either
// side of -1 produce the undecided zone.
SeriesVerdict block_verdict(const std::vector<double>& sums, const std::vector<double>& log_ns,
                            double* slope_out) {
    std::vector<double> xs, ys;
    double last_block = 0.0;
    for (std::size_t k = 1; k < sums.size(); ++k) {
        double block = sums[k] - sums[k - 1];
        last_block = block;
        if (block <= 0.0) {
            *slope_out = -std::numeric_limits<double>::infinity();
            return SeriesVerdict::Converges;  // tail is exactly flat
        }
        xs.push_back(std::log(log_ns[k]));
        ys.push_back(std::log(block));
    }
    if (last_block <= 1e-6) {
        *slope_out = -std::numeric_limits<double>::infinity();
        return SeriesVerdict::Converges;
    }
    auto fit = least_squares(xs, ys);
    *slope_out = fit.slope;
    if (fit.slope >= -0.9) return SeriesVerdict::Diverges;
    if (fit.slope <= -1.1) return SeriesVerdict::Converges;
    return SeriesVerdict::Undecided;
}

}  // namespace

ClassifierReport sum_classifier(const SmallBallCdf& f, const Gauge& g,
                                std::span<const double> deltas, long long horizon) {
    if (horizon < 10000) throw std::invalid_argument("sum_classifier: horizon must be >= 1e4");
    if (deltas.empty()) throw std::invalid_argument("sum_classifier: empty delta grid");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (deltas[i] <= deltas[i - 1])
            throw std::invalid_argument("sum_classifier: delta grid must increase");

    const long long n0 = g.domain_start() < 2 ? 2 : g.domain_start();
    std::vector<long long> schedule = {horizon, 2 * horizon, 4 * horizon, 8 * horizon,
                                       16 * horizon};

    ClassifierReport report;
    report.horizon = schedule.back();

    std::vector<double> log_ns(schedule.size());
    for (std::size_t k = 0; k < schedule.size(); ++k)
        log_ns[k] = std::log(static_cast<double>(schedule[k]));

    for (double delta : deltas) {
        DeltaVerdict dv;
        dv.delta = delta;
        dv.partial_sums.assign(schedule.size(), 0.0);

        double sum = 0.0;
        std::size_t stage = 0;
        for (long long n = n0; n <= schedule.back(); ++n) {
            sum += f(delta * g.value(n));
            while (stage < schedule.size() && n == schedule[stage]) {
                dv.partial_sums[stage] = sum;
                ++stage;
            }
        }

        if (f.is_empirical() && delta * g.value(schedule.back()) < f.resolution() &&
            f(delta * g.value(schedule.back())) == 0.0) {
            dv.verdict = SeriesVerdict::Undecided;
            dv.diagnostic = "empirical F has no mass below the tail arguments; verdict withheld";
        } else {
            dv.verdict = block_verdict(dv.partial_sums, log_ns, &dv.block_slope);
        }
        report.per_delta.push_back(std::move(dv));
    }

    // Monotonicity audit: converging deltas cannot sit above diverging ones.
    double max_conv = 0.0;
    double min_div = std::numeric_limits<double>::infinity();
    for (const auto& dv : report.per_delta) {
        if (dv.verdict == SeriesVerdict::Converges) max_conv = std::max(max_conv, dv.delta);
        if (dv.verdict == SeriesVerdict::Diverges) min_div = std::min(min_div, dv.delta);
    }
    for (const auto& dv : report.per_delta)
        if (dv.verdict == SeriesVerdict::Diverges && dv.delta < max_conv)
            throw std::logic_error("sum_classifier: verdicts violate monotonicity in delta");

    report.c_low = max_conv;
    report.c_high = min_div;
    if (report.c_low > report.c_high)
        throw std::logic_error("sum_classifier: bracket inverted");
    return report;
}

DominatedVariationReport dominated_variation_test(const SmallBallCdf& f,
                                                  std::span<const double> r_grid) {
    if (r_grid.size() < 4)
        throw std::invalid_argument("dominated variation: need a grid of >= 4 radii");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (r_grid[i] >= r_grid[i - 1])
            throw std::invalid_argument("dominated variation: grid must decrease");

    DominatedVariationReport rep;
    for (double r : r_grid) {
        double fr = f(r);
        double f2r = f(2.0 * r);
        if (fr <= 0.0 || f2r <= 0.0) continue;  // below resolution
        rep.r.push_back(r);
        rep.ratio.push_back(f2r / fr);
    }
    if (rep.ratio.size() < 3) {
        rep.verdict = TernaryVerdict::Undecided;
        rep.diagnostic = "resolution exhausted before enough usable ratios";
        return rep;
    }

    rep.median_ratio = median(rep.ratio);
    int smallest_decade = static_cast<int>(std::floor(std::log10(rep.r.back())));
    rep.smallest_decade_max = 0.0;
    for (std::size_t i = 0; i < rep.r.size(); ++i)
        if (static_cast<int>(std::floor(std::log10(rep.r[i]))) == smallest_decade)
            rep.smallest_decade_max = std::max(rep.smallest_decade_max, rep.ratio[i]);

    if (rep.smallest_decade_max <= 1.5 * rep.median_ratio)
        rep.verdict = TernaryVerdict::Yes;
    else if (rep.smallest_decade_max >= 10.0 * rep.median_ratio)
        rep.verdict = TernaryVerdict::No;
    else
        rep.verdict = TernaryVerdict::Undecided;
    return rep;
}

Gauge construct_type_a_gauge(const SmallBallCdf& f, double a, int max_levels,
                             double start_radius) {
    if (!(a > 1.0)) throw std::invalid_argument("type-A gauge: a must be > 1");
    if (max_levels < 2) throw std::invalid_argument("type-A gauge: need >= 2 levels");

    const double floor_f = f.is_empirical() ? 0.5 / static_cast<double>(f.sample_count())
                                            : 1e-280;
    std::vector<double> levels;
    std::vector<long long> breaks;
    long long b = 0;
    double candidate = start_radius;
    for (int k = 1; k <= max_levels; ++k) {
        candidate /= a * a;  // strictly below previous/a on the geometric grid
        bool found = false;
        for (int step = 0; step < 400; ++step) {
            double fc = f(candidate);
            if (fc <= floor_f) break;  // resolution exhausted
            if (f(candidate / a) <= std::pow(2.0, -k) * fc) {
                found = true;
                break;
            }
            candidate /= a;
        }
        if (!found) {
            if (k <= 2)
                throw DominatedVariationError(
                    "type-A gauge: no admissible level; F(r/a)/F(r) stays bounded below "
                    "2^{-k} (F looks dominated-varying at this resolution)");
            break;  // keep the levels already certified
        }
        double fc = f(candidate);
        long long width = fc > 0.5 ? 1 : static_cast<long long>(std::ceil(1.0 / (2.0 * fc)));
        levels.push_back(candidate);
        breaks.push_back(b);
        if (b > (1LL << 61) / 2) break;  // index overflow guard
        b += width;
    }
    if (levels.size() < 2)
        throw DominatedVariationError("type-A gauge: fewer than two admissible levels");

    // Self-audit: both inequality chains re-checked on the output.
    for (std::size_t k = 0; k < levels.size(); ++k) {
        double fk = f(levels[k]);
        if (f(levels[k] / a) > std::pow(2.0, -(static_cast<double>(k) + 1.0)) * fk)
            throw std::logic_error("type-A gauge: ratio chain failed audit");
        if (k + 1 < levels.size()) {
            if (!(levels[k + 1] < levels[k] / a))
                throw std::logic_error("type-A gauge: levels not separated by a");
            double width = static_cast<double>(breaks[k + 1] - breaks[k]);
            if (fk * width < 0.5 - 1e-12 || fk * width > 1.0 + 1e-12)
                throw std::logic_error("type-A gauge: block-width chain failed audit");
        }
    }
    return Gauge::staircase(std::move(breaks), std::move(levels));
}

namespace {

double kw_exponent(double lambda, double a) { return -std::log(lambda) / std::log(a); }

double kw_integral_adaptive(const std::function<double(double)>& laplace, double lambda, double a,
                            double r) {
    // u = e^t flattens the 1/u weight; integrand decays with L(u) -> lambda.
    double upper = std::log(1.0 / r);
    double log_lambda = std::log(lambda);
    auto integrand = [&](double t) {
        return (std::log(laplace(std::exp(t))) - log_lambda) / std::log(a);
    };
    return adaptive_simpson(integrand, 0.0, upper, 1e-10 * std::max(1.0, upper));
}

}  // namespace

double k_w(double r, const std::function<double(double)>& laplace, double lambda, double a) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("k_w: lambda must be in (0,1)");
    if (!(a > 1.0)) throw std::invalid_argument("k_w: a must be > 1");
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("k_w: r must be in (0,1]");
    if (r == 1.0) return 1.0;
    double integral = kw_integral_adaptive(laplace, lambda, a, r);
    return std::pow(r, kw_exponent(lambda, a)) * std::exp(integral);
}

double k_w_trapezoid(double r, const std::function<double(double)>& laplace, double lambda,
                     double a, long long points) {
    if (r == 1.0) return 1.0;
    double upper = std::log(1.0 / r);
    double log_lambda = std::log(lambda);
    auto integrand = [&](double t) {
        return (std::log(laplace(std::exp(t))) - log_lambda) / std::log(a);
    };
    double integral = trapezoid(integrand, 0.0, upper, points);
    return std::pow(r, kw_exponent(lambda, a)) * std::exp(integral);
}

SmallBallCdf kw_cdf(const std::function<double(double)>& laplace, double lambda, double a,
                    double r_min) {
    // K_W is increasing and expensive per point; interpolate log K on a log-r
    // grid and clip at 1.
    const int npts = 400;
    auto log_rs = std::make_shared<std::vector<double>>();
    auto log_ks = std::make_shared<std::vector<double>>();
    double lo = std::log(r_min), hi = 0.0;
    for (int i = 0; i <= npts; ++i) {
        double lr = lo + (hi - lo) * static_cast<double>(i) / npts;
        log_rs->push_back(lr);
        log_ks->push_back(std::log(k_w(std::exp(lr), laplace, lambda, a)));
    }
    return SmallBallCdf::analytic([log_rs, log_ks, r_min](double r) {
        if (r <= 0.0) return 0.0;
        if (r >= 1.0) return 1.0;
        if (r < r_min) return 0.0;  // below tabulated range
        double lr = std::log(r);
        auto it = std::lower_bound(log_rs->begin(), log_rs->end(), lr);
        std::size_t j = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - log_rs->begin(), 1),
                                              log_rs->size() - 1);
        double t = ((*log_rs)[j] - lr) / ((*log_rs)[j] - (*log_rs)[j - 1]);
        double lk = t * (*log_ks)[j - 1] + (1.0 - t) * (*log_ks)[j];
        return std::min(1.0, std::exp(lk));
    });
}

LiminfCurves liminf_estimate(std::span<const PathSample> paths, const Gauge& g, double a) {
    if (paths.empty()) throw std::invalid_argument("liminf_estimate: no paths");
    const auto& params = paths.front().params;
    const long long n_start = std::max(params.n_min, g.domain_start());
    if (params.n_max < n_start + 1)
        throw std::invalid_argument("liminf_estimate: window does not reach the gauge domain");

    LiminfCurves curves;
    for (long long n = std::max<long long>(n_start, 1); n <= params.n_max; n *= 2)
        curves.checkpoints.push_back(n);
    if (curves.checkpoints.empty() || curves.checkpoints.back() != params.n_max)
        curves.checkpoints.push_back(params.n_max);

    const int d = params.dim;
    for (const auto& p : paths) {
        double running = std::numeric_limits<double>::infinity();
        std::vector<double> row;
        std::size_t cp = 0;
        for (long long n = n_start; n <= params.n_max; ++n) {
            auto v = p.value(n);
            double norm = 0.0;
            for (int i = 0; i < d; ++i) norm += v[i] * v[i];
            norm = std::sqrt(norm);
            double normalized = p.kind == PathKind::StationaryY
                                    ? norm
                                    : norm * std::pow(a, static_cast<double>(-n));
            // scale kept out of the base ratio: c*g divides values by exactly c
            double ratio = (normalized / g.base(n)) / g.scale();
            running = std::min(running, ratio);
            while (cp < curves.checkpoints.size() && n == curves.checkpoints[cp]) {
                row.push_back(running);
                ++cp;
            }
        }
        while (row.size() < curves.checkpoints.size()) row.push_back(running);
        curves.running_min.push_back(std::move(row));
    }

    for (std::size_t c = 0; c < curves.checkpoints.size(); ++c) {
        std::vector<double> col;
        col.reserve(curves.running_min.size());
        for (const auto& row : curves.running_min) col.push_back(row[c]);
        curves.pooled_lo.push_back(*std::min_element(col.begin(), col.end()));
        curves.pooled_hi.push_back(*std::max_element(col.begin(), col.end()));
        curves.pooled_median.push_back(median(std::move(col)));
    }
    return curves;
}

Prop11Report proposition_1_1_check(const IncrementLaw& law, double a, const Gauge& g,
                                   std::span<const double> deltas, long long horizon) {
    if (!law.nonneg_support())
        throw std::invalid_argument("proposition 1.1: law must be supported on R_+^d");
    Prop11Report rep;
    rep.lambda = law.atom_at_zero();
    rep.type_a_gauge_exists = rep.lambda == 0.0;
    if (const auto* pm = std::get_if<PointMassSpec>(&law.spec())) {
        double norm = 0.0;
        for (double v : pm->c) norm += v * v;
        rep.escape_constant_d = std::sqrt(norm) * a / (a - 1.0);
    }
    if (rep.lambda > 0.0) {
        auto laplace = [&law](double u) { return law.laplace(u); };
        rep.has_kw_classifier = true;
        rep.kw_classifier = sum_classifier(kw_cdf(laplace, rep.lambda, a), g, deltas, horizon);
    }
    return rep;
}

}  // namespace ssalab
