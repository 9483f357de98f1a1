#include "ssalab/law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssalab/rng.hpp"

namespace ssalab {

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Lower Cholesky factor of a row-major SPD matrix; false if a pivot fails.
bool cholesky(int n, const std::vector<double>& a, std::vector<double>& lower) {
    lower.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= lower[static_cast<std::size_t>(i) * n + k] *
                     lower[static_cast<std::size_t>(j) * n + k];
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) return false;
                lower[static_cast<std::size_t>(i) * n + j] = std::sqrt(s);
            } else {
                lower[static_cast<std::size_t>(i) * n + j] =
                    s / lower[static_cast<std::size_t>(j) * n + j];
            }
        }
    }
    return true;
}

// Rank of the affine span of a point set, via Gram-Schmidt on differences.
int affine_rank(const std::vector<std::vector<double>>& pts, int dim) {
    if (pts.size() < 2) return 0;
    std::vector<std::vector<double>> basis;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        std::vector<double> v(dim);
        for (int k = 0; k < dim; ++k) v[k] = pts[i][k] - pts[0][k];
        for (const auto& b : basis) {
            double proj = dot(v, b);
            for (int k = 0; k < dim; ++k) v[k] -= proj * b[k];
        }
        double n = norm2(v);
        if (n > 1e-12) {
            for (int k = 0; k < dim; ++k) v[k] /= n;
            basis.push_back(std::move(v));
            if (static_cast<int>(basis.size()) == dim) break;
        }
    }
    return static_cast<int>(basis.size());
}

// Support points of a purely atomic law; empty if the law has a component
// with full-dimensional spread.
bool support_points(const IncrementLaw& law, std::vector<std::vector<double>>& out);

bool support_points_spec(const PointMassSpec& s, int, std::vector<std::vector<double>>& out) {
    out.push_back(s.c);
    return true;
}
bool support_points_spec(const BernoulliScaledSpec& s, int dim,
                         std::vector<std::vector<double>>& out) {
    out.emplace_back(dim, 0.0);
    out.push_back(s.v);
    return true;
}
bool support_points_spec(const MixtureSpec& s, int, std::vector<std::vector<double>>& out) {
    for (const auto& c : s.components)
        if (!support_points(c, out)) return false;
    return true;
}
template <typename T>
bool support_points_spec(const T&, int, std::vector<std::vector<double>>&) {
    return false;  // continuous spread in every axis: full by itself
}

bool support_points(const IncrementLaw& law, std::vector<std::vector<double>>& out) {
    return std::visit([&](const auto& s) { return support_points_spec(s, law.dim(), out); },
                      law.spec());
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

IncrementLaw::IncrementLaw(Spec spec, int dim) : spec_(std::move(spec)), dim_(dim) {
    if (auto* g = std::get_if<GaussianSpec>(&spec_)) {
        if (!cholesky(dim_, g->cov, chol_))
            throw std::invalid_argument("gaussian covariance must be symmetric positive definite");
    }
}

IncrementLaw IncrementLaw::point_mass(std::vector<double> c) {
    if (c.empty()) throw std::invalid_argument("point mass needs a point");
    int d = static_cast<int>(c.size());
    if (d >= 2)
        throw std::invalid_argument("point mass is not full for d >= 2");
    return IncrementLaw(PointMassSpec{std::move(c)}, d);
}

IncrementLaw IncrementLaw::bernoulli_scaled(double lambda, std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("bernoulli law needs a point");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("bernoulli lambda must be in (0,1)");
    int d = static_cast<int>(v.size());
    if (d >= 2)
        throw std::invalid_argument("two-point law is not full for d >= 2");
    if (norm2(v) == 0.0) throw std::invalid_argument("bernoulli point must be nonzero");
    return IncrementLaw(BernoulliScaledSpec{lambda, std::move(v)}, d);
}

IncrementLaw IncrementLaw::exponential(std::vector<double> rates) {
    if (rates.empty()) throw std::invalid_argument("exponential law needs rates");
    for (double r : rates)
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::invalid_argument("exponential rates must be positive finite");
    int d = static_cast<int>(rates.size());
    return IncrementLaw(ExponentialSpec{std::move(rates)}, d);
}

IncrementLaw IncrementLaw::uniform_box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.empty() || lo.size() != hi.size())
        throw std::invalid_argument("uniform box needs matching lo/hi");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("uniform box must have lo < hi per axis");
    int d = static_cast<int>(lo.size());
    return IncrementLaw(UniformBoxSpec{std::move(lo), std::move(hi)}, d);
}

IncrementLaw IncrementLaw::gaussian(std::vector<double> mean, std::vector<double> cov) {
    if (mean.empty()) throw std::invalid_argument("gaussian needs a mean");
    int d = static_cast<int>(mean.size());
    if (cov.size() != static_cast<std::size_t>(d) * d)
        throw std::invalid_argument("gaussian covariance must be d x d");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(cov[static_cast<std::size_t>(i) * d + j] -
                         cov[static_cast<std::size_t>(j) * d + i]) > 1e-12)
                throw std::invalid_argument("gaussian covariance must be symmetric");
    return IncrementLaw(GaussianSpec{std::move(mean), std::move(cov)}, d);
}

IncrementLaw IncrementLaw::positive_stable(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("stable alpha must be strictly inside (0,1)");
    return IncrementLaw(PositiveStableSpec{alpha}, 1);
}

IncrementLaw IncrementLaw::mixture(std::vector<double> weights,
                                   std::vector<IncrementLaw> components) {
    if (weights.empty() || weights.size() != components.size())
        throw std::invalid_argument("mixture needs matching weights/components");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("mixture weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("mixture weights must sum to 1 within 1e-12");
    int d = components.front().dim();
    for (const auto& c : components)
        if (c.dim() != d) throw std::invalid_argument("mixture components must share dimension");

    IncrementLaw law(MixtureSpec{std::move(weights), std::move(components)}, d);
    if (d >= 2) {
        std::vector<std::vector<double>> pts;
        if (support_points(law, pts) && affine_rank(pts, d) < d)
            throw std::invalid_argument("mixture support lies in a hyperplane (not full)");
    }
    return law;
}

IncrementLaw IncrementLaw::atomic_mixture(std::vector<double> weights,
                                          std::vector<std::vector<double>> points) {
    if (weights.empty() || weights.size() != points.size())
        throw std::invalid_argument("atomic mixture needs matching weights/points");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("mixture weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("mixture weights must sum to 1 within 1e-12");
    int d = static_cast<int>(points.front().size());
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != d)
            throw std::invalid_argument("atomic mixture points must share dimension");
    if (d >= 2 && affine_rank(points, d) < d)
        throw std::invalid_argument("atomic mixture support lies in a hyperplane (not full)");
    std::vector<IncrementLaw> comps;
    comps.reserve(points.size());
    for (auto& p : points) comps.push_back(IncrementLaw(PointMassSpec{std::move(p)}, d));
    return IncrementLaw(MixtureSpec{std::move(weights), std::move(comps)}, d);
}

void IncrementLaw::sample_into(std::span<double> out, Rng& rng) const {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassSpec>) {
                std::copy(s.c.begin(), s.c.end(), out.begin());
            } else if constexpr (std::is_same_v<T, BernoulliScaledSpec>) {
                if (rng.uniform01() < s.lambda)
                    std::fill(out.begin(), out.end(), 0.0);
                else
                    std::copy(s.v.begin(), s.v.end(), out.begin());
            } else if constexpr (std::is_same_v<T, ExponentialSpec>) {
                for (int i = 0; i < dim_; ++i) out[i] = rng.exponential() / s.rates[i];
            } else if constexpr (std::is_same_v<T, UniformBoxSpec>) {
                for (int i = 0; i < dim_; ++i)
                    out[i] = s.lo[i] + rng.uniform01() * (s.hi[i] - s.lo[i]);
            } else if constexpr (std::is_same_v<T, GaussianSpec>) {
                std::vector<double> xi(dim_);
                rng.fill_normals(xi);
                for (int i = 0; i < dim_; ++i) {
                    double v = s.mean[i];
                    for (int k = 0; k <= i; ++k)
                        v += chol_[static_cast<std::size_t>(i) * dim_ + k] * xi[k];
                    out[i] = v;
                }
            } else if constexpr (std::is_same_v<T, PositiveStableSpec>) {
                out[0] = rng.positive_stable(s.alpha);
            } else if constexpr (std::is_same_v<T, MixtureSpec>) {
                double u = rng.uniform01();
                double acc = 0.0;
                std::size_t pick = s.components.size() - 1;
                for (std::size_t i = 0; i < s.weights.size(); ++i) {
                    acc += s.weights[i];
                    if (u < acc) {
                        pick = i;
                        break;
                    }
                }
                s.components[pick].sample_into(out, rng);
            }
        },
        spec_);
}

std::vector<double> IncrementLaw::sample(std::size_t count, std::uint64_t seed) const {
    if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
    std::vector<double> out(count * static_cast<std::size_t>(dim_));
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i)
        sample_into(std::span<double>(out.data() + i * dim_, dim_), rng);
    return out;
}

std::complex<double> IncrementLaw::cf(std::span<const double> z) const {
    using C = std::complex<double>;
    return std::visit(
        [&](const auto& s) -> C {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassSpec>) {
                return std::exp(C(0.0, dot(z, s.c)));
            } else if constexpr (std::is_same_v<T, BernoulliScaledSpec>) {
                return s.lambda + (1.0 - s.lambda) * std::exp(C(0.0, dot(z, s.v)));
            } else if constexpr (std::is_same_v<T, ExponentialSpec>) {
                C p(1.0, 0.0);
                for (int i = 0; i < dim_; ++i) p *= s.rates[i] / C(s.rates[i], -z[i]);
                return p;
            } else if constexpr (std::is_same_v<T, UniformBoxSpec>) {
                C p(1.0, 0.0);
                for (int i = 0; i < dim_; ++i) {
                    double w = s.hi[i] - s.lo[i];
                    if (z[i] == 0.0) continue;
                    p *= (std::exp(C(0.0, z[i] * s.hi[i])) - std::exp(C(0.0, z[i] * s.lo[i]))) /
                         C(0.0, z[i] * w);
                }
                return p;
            } else if constexpr (std::is_same_v<T, GaussianSpec>) {
                double q = 0.0;
                for (int i = 0; i < dim_; ++i)
                    for (int j = 0; j < dim_; ++j)
                        q += z[i] * s.cov[static_cast<std::size_t>(i) * dim_ + j] * z[j];
                return std::exp(C(-0.5 * q, dot(z, s.mean)));
            } else if constexpr (std::is_same_v<T, PositiveStableSpec>) {
                // Analytic continuation of exp(-u^alpha): (-iz)^alpha principal branch.
                double az = std::abs(z[0]);
                if (az == 0.0) return C(1.0, 0.0);
                double sgn = z[0] > 0.0 ? 1.0 : -1.0;
                double mod = std::pow(az, s.alpha);
                double re = -mod * std::cos(kPi * s.alpha / 2.0);
                double im = sgn * mod * std::sin(kPi * s.alpha / 2.0);
                return std::exp(C(re, im));
            } else if constexpr (std::is_same_v<T, MixtureSpec>) {
                C acc(0.0, 0.0);
                for (std::size_t i = 0; i < s.weights.size(); ++i)
                    acc += s.weights[i] * s.components[i].cf(z);
                return acc;
            }
        },
        spec_);
}

bool IncrementLaw::nonneg_support() const {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassSpec>) {
                return std::all_of(s.c.begin(), s.c.end(), [](double v) { return v >= 0.0; });
            } else if constexpr (std::is_same_v<T, BernoulliScaledSpec>) {
                return std::all_of(s.v.begin(), s.v.end(), [](double v) { return v >= 0.0; });
            } else if constexpr (std::is_same_v<T, ExponentialSpec>) {
                return true;
            } else if constexpr (std::is_same_v<T, UniformBoxSpec>) {
                return std::all_of(s.lo.begin(), s.lo.end(), [](double v) { return v >= 0.0; });
            } else if constexpr (std::is_same_v<T, GaussianSpec>) {
                return false;
            } else if constexpr (std::is_same_v<T, PositiveStableSpec>) {
                return true;
            } else if constexpr (std::is_same_v<T, MixtureSpec>) {
                return std::all_of(s.components.begin(), s.components.end(),
                                   [](const IncrementLaw& c) { return c.nonneg_support(); });
            }
        },
        spec_);
}

double IncrementLaw::atom_at_zero() const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassSpec>) {
                return norm2(s.c) == 0.0 ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, BernoulliScaledSpec>) {
                return s.lambda;
            } else if constexpr (std::is_same_v<T, MixtureSpec>) {
                double a = 0.0;
                for (std::size_t i = 0; i < s.weights.size(); ++i)
                    a += s.weights[i] * s.components[i].atom_at_zero();
                return a;
            } else {
                return 0.0;
            }
        },
        spec_);
}

bool IncrementLaw::has_closed_form_laplace() const {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassSpec> ||
                          std::is_same_v<T, BernoulliScaledSpec> ||
                          std::is_same_v<T, PositiveStableSpec>) {
                return nonneg_support();
            } else if constexpr (std::is_same_v<T, ExponentialSpec> ||
                                 std::is_same_v<T, UniformBoxSpec>) {
                return dim_ == 1 && nonneg_support();
            } else if constexpr (std::is_same_v<T, MixtureSpec>) {
                return std::all_of(s.components.begin(), s.components.end(),
                                   [](const IncrementLaw& c) { return c.has_closed_form_laplace(); });
            } else {
                return false;
            }
        },
        spec_);
}

double IncrementLaw::laplace(double u) const {
    if (u < 0.0) throw std::invalid_argument("laplace: u must be >= 0");
    if (!nonneg_support())
        throw std::invalid_argument("laplace transform requires support in R_+^d");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassSpec>) {
                return std::exp(-u * norm2(s.c));
            } else if constexpr (std::is_same_v<T, BernoulliScaledSpec>) {
                return s.lambda + (1.0 - s.lambda) * std::exp(-u * norm2(s.v));
            } else if constexpr (std::is_same_v<T, ExponentialSpec>) {
                if (dim_ != 1)
                    throw std::invalid_argument("laplace: no closed form for |X| of a d >= 2 law");
                return s.rates[0] / (s.rates[0] + u);
            } else if constexpr (std::is_same_v<T, UniformBoxSpec>) {
                if (dim_ != 1)
                    throw std::invalid_argument("laplace: no closed form for |X| of a d >= 2 law");
                double w = s.hi[0] - s.lo[0];
                if (u == 0.0) return 1.0;
                return (std::exp(-u * s.lo[0]) - std::exp(-u * s.hi[0])) / (u * w);
            } else if constexpr (std::is_same_v<T, PositiveStableSpec>) {
                return std::exp(-std::pow(u, s.alpha));
            } else if constexpr (std::is_same_v<T, MixtureSpec>) {
                double acc = 0.0;
                for (std::size_t i = 0; i < s.weights.size(); ++i)
                    acc += s.weights[i] * s.components[i].laplace(u);
                return acc;
            } else {
                throw std::invalid_argument("laplace transform requires support in R_+^d");
            }
        },
        spec_);
}

double IncrementLaw::log_moment_bound() const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassSpec>) {
                return std::log(2.0 + norm2(s.c));
            } else if constexpr (std::is_same_v<T, BernoulliScaledSpec>) {
                return s.lambda * std::log(2.0) + (1.0 - s.lambda) * std::log(2.0 + norm2(s.v));
            } else if constexpr (std::is_same_v<T, ExponentialSpec>) {
                double m2 = 0.0;
                for (double r : s.rates) m2 += 2.0 / (r * r);
                return std::log(2.0 + std::sqrt(m2));  // Jensen + E|X| <= sqrt(E|X|^2)
            } else if constexpr (std::is_same_v<T, UniformBoxSpec>) {
                double far = 0.0;
                for (std::size_t i = 0; i < s.lo.size(); ++i) {
                    double m = std::max(std::abs(s.lo[i]), std::abs(s.hi[i]));
                    far += m * m;
                }
                return std::log(2.0 + std::sqrt(far));
            } else if constexpr (std::is_same_v<T, GaussianSpec>) {
                double m2 = dot(s.mean, s.mean);
                for (int i = 0; i < dim_; ++i) m2 += s.cov[static_cast<std::size_t>(i) * dim_ + i];
                return std::log(2.0 + std::sqrt(m2));
            } else if constexpr (std::is_same_v<T, PositiveStableSpec>) {
                // log(2+X) <= log 2 + (X/2)^b / b with b = alpha/2;
                // E X^b = Gamma(1 - b/alpha) / Gamma(1 - b) = sqrt(pi)/Gamma(1 - alpha/2).
                double b = s.alpha / 2.0;
                double frac_moment = std::sqrt(kPi) / std::tgamma(1.0 - b);
                return std::log(2.0) + frac_moment / (b * std::pow(2.0, b));
            } else if constexpr (std::is_same_v<T, MixtureSpec>) {
                double acc = 0.0;
                for (std::size_t i = 0; i < s.weights.size(); ++i)
                    acc += s.weights[i] * s.components[i].log_moment_bound();
                return acc;
            }
        },
        spec_);
}

MeanSe IncrementLaw::log_moment_mc(std::size_t count, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<double> x(dim_);
    std::vector<double> vals(count);
    for (std::size_t i = 0; i < count; ++i) {
        sample_into(x, rng);
        vals[i] = std::log(2.0 + norm2(x));
    }
    return mean_se(vals);
}

double IncrementLaw::quantile_abs(double p, std::size_t pilot_count, std::uint64_t seed) const {
    if (auto* pm = std::get_if<PointMassSpec>(&spec_)) return norm2(pm->c);
    if (auto* bs = std::get_if<BernoulliScaledSpec>(&spec_))
        return bs->lambda >= p ? 0.0 : norm2(bs->v);
    if (auto* ex = std::get_if<ExponentialSpec>(&spec_)) {
        if (dim_ == 1) return -std::log(1.0 - p) / ex->rates[0];
    }
    Rng rng(seed);
    std::vector<double> x(dim_);
    std::vector<double> norms(pilot_count);
    for (std::size_t i = 0; i < pilot_count; ++i) {
        sample_into(x, rng);
        norms[i] = norm2(x);
    }
    return quantile(std::move(norms), p);
}

}  // namespace ssalab
