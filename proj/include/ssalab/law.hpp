#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "ssalab/stats.hpp"

namespace ssalab {

class IncrementLaw;

struct PointMassSpec {
    std::vector<double> c;
};

// P(X = 0) = lambda, P(X = v) = 1 - lambda.
struct BernoulliScaledSpec {
    double lambda = 0.5;
    std::vector<double> v;
};

// Independent exponentials per axis.
struct ExponentialSpec {
    std::vector<double> rates;
};

struct UniformBoxSpec {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct GaussianSpec {
    std::vector<double> mean;
    std::vector<double> cov;  // row-major d x d, symmetric positive definite
};

// One-sided alpha-stable normalized to E exp(-u X) = exp(-u^alpha); d = 1.
struct PositiveStableSpec {
    double alpha = 0.5;
};

struct MixtureSpec {
    std::vector<double> weights;
    std::vector<IncrementLaw> components;
};

// An iid increment law rho. Immutable once constructed; all invalid parameter
// combinations are rejected here, never at sampling time. For d >= 2 the law
// must be full (support not contained in a hyperplane).
class IncrementLaw {
public:
    static IncrementLaw point_mass(std::vector<double> c);
    static IncrementLaw bernoulli_scaled(double lambda, std::vector<double> v);
    static IncrementLaw exponential(std::vector<double> rates);
    static IncrementLaw uniform_box(std::vector<double> lo, std::vector<double> hi);
    static IncrementLaw gaussian(std::vector<double> mean, std::vector<double> cov);
    static IncrementLaw positive_stable(double alpha);
    static IncrementLaw mixture(std::vector<double> weights, std::vector<IncrementLaw> components);
    // Mixture of point atoms. The one way to build a purely atomic law in
    // d >= 2: the atoms together must affinely span R^d (fullness).
    static IncrementLaw atomic_mixture(std::vector<double> weights,
                                       std::vector<std::vector<double>> points);

    int dim() const { return dim_; }

    // count iid draws, row-major count x dim; bit-identical for identical
    // (law, count, seed).
    std::vector<double> sample(std::size_t count, std::uint64_t seed) const;
    void sample_into(std::span<double> out, class Rng& rng) const;  // one draw

    std::complex<double> cf(std::span<const double> z) const;

    bool nonneg_support() const;
    double atom_at_zero() const;              // P(|X| = 0)
    double laplace(double u) const;           // E exp(-u |X|); throws if unsupported
    bool has_closed_form_laplace() const;

    // Certified upper bound on E log(2 + |X|) where a closed form or a clean
    // inequality exists (all supported kinds).
    double log_moment_bound() const;
    MeanSe log_moment_mc(std::size_t count, std::uint64_t seed) const;

    // p-quantile of |X|; analytic for point-type laws, pilot Monte Carlo
    // otherwise (pilot_count draws at the given seed).
    double quantile_abs(double p, std::size_t pilot_count, std::uint64_t seed) const;

    const std::variant<PointMassSpec, BernoulliScaledSpec, ExponentialSpec, UniformBoxSpec,
                       GaussianSpec, PositiveStableSpec, MixtureSpec>&
    spec() const {
        return spec_;
    }

private:
    using Spec = std::variant<PointMassSpec, BernoulliScaledSpec, ExponentialSpec, UniformBoxSpec,
                              GaussianSpec, PositiveStableSpec, MixtureSpec>;

    IncrementLaw(Spec spec, int dim);

    Spec spec_;
    int dim_ = 1;
    std::vector<double> chol_;  // cached Cholesky factor for the Gaussian kind
};

}  // namespace ssalab
