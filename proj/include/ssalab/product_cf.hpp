#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ssalab {

// mu_hat(z) = prod_{n>=0} rho_hat(b^n z) for a b-decomposable law mu.
struct ProductCF {
    std::function<std::complex<double>(std::span<const double>)> rho_cf;
    int dim = 1;
    double b = 0.5;          // in (0, 1)
    double tol = 1e-12;      // tail bound target per evaluation
    int max_terms = 100000;
};

void validate(const ProductCF& pcf);

struct MuHatResult {
    std::complex<double> value;
    double tail_bound = 0.0;
    int terms = 0;
};

class ProductTruncationError : public std::runtime_error {
public:
    ProductTruncationError(MuHatResult partial, const std::string& what)
        : std::runtime_error(what), partial_(partial) {}
    const MuHatResult& partial() const { return partial_; }

private:
    MuHatResult partial_;
};

// Evaluates the product in log space; stops once the estimated tail
// |sum_{n>N} log rho_hat(b^n z)| falls below tol. Throws ProductTruncationError
// carrying the partial value if max_terms is hit first.
MuHatResult mu_hat(const ProductCF& pcf, std::span<const double> z);

// max over the grid of |mu_hat(z) - mu_hat(bz) rho_hat(z)|.
double check_fixed_point(const ProductCF& pcf, std::span<const std::vector<double>> grid);

// max over the grid of |empirical cf of samples - mu_hat|; samples row-major
// count x dim.
double empirical_cf_match(std::span<const double> samples, int dim, const ProductCF& pcf,
                          std::span<const std::vector<double>> grid);

// 41 points per axis in [-5, 5], axes only, plus radius sweeps along 8 fixed
// random directions for d >= 2.
std::vector<std::vector<double>> standard_grid(int dim);

}  // namespace ssalab
