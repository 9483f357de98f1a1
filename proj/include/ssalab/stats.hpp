#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ssalab {

double normal_cdf(double x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double n_eff = 0.0;
};

// Survival function of the Kolmogorov distribution, Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 l^2}.
double ks_asymptotic_sf(double lambda);

// D threshold at significance alpha for effective sample size n_eff.
double ks_critical_value(double alpha, double n_eff);

// Two-sample KS with proper tie handling; inputs copied and sorted.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS against a continuous CDF.
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> v);
double quantile(std::vector<double> v, double p);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> x);

}  // namespace ssalab
