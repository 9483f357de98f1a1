#include "ssalab/product_cf.hpp"

#include <algorithm>
#include <cmath>

#include "ssalab/rng.hpp"
#include "ssalab/stats.hpp"

namespace ssalab {

void validate(const ProductCF& pcf) {
    if (!pcf.rho_cf) throw std::invalid_argument("product cf: rho_cf is empty");
    if (!(pcf.b > 0.0 && pcf.b < 1.0)) throw std::invalid_argument("product cf: b must be in (0,1)");
    if (!(pcf.tol > 0.0)) throw std::invalid_argument("product cf: tol must be positive");
    if (pcf.max_terms < 1) throw std::invalid_argument("product cf: max_terms must be >= 1");
}

namespace {

double norm2(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

// |log rho_hat(w)| <= C |w|^beta near 0, estimated by probing along the
// direction of z. The log-moment assumption gives convergence but no rate, so
// the local power law is measured, not assumed.
struct LocalBound {
    double c = 0.0;
    double beta = 1.0;
    double valid_radius = 1.0;
};

LocalBound probe_local_bound(const ProductCF& pcf, std::span<const double> z) {
    LocalBound lb;
    double zn = norm2(z);
    lb.valid_radius = std::min(1.0, zn);
    std::vector<double> dir(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) dir[i] = z[i] / zn;

    std::vector<double> ts, ss;
    std::vector<double> w(z.size());
    for (int j = 0; j < 7; ++j) {
        double t = lb.valid_radius * std::pow(0.5, j);
        for (std::size_t i = 0; i < z.size(); ++i) w[i] = t * dir[i];
        std::complex<double> v = pcf.rho_cf(w);
        double mag = std::abs(std::log(v));
        if (mag > 0.0 && std::isfinite(mag)) {
            ts.push_back(std::log(t));
            ss.push_back(std::log(mag));
        }
    }
    if (ts.size() < 2) {
        lb.c = 0.0;  // rho_hat == 1 on the probe ray (degenerate at 0)
        return lb;
    }
    auto fit = least_squares(ts, ss);
    lb.beta = std::clamp(fit.slope, 0.05, 2.0);
    double c = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j)
        c = std::max(c, std::exp(ss[j]) / std::pow(std::exp(ts[j]), lb.beta));
    lb.c = 2.0 * c;  // safety factor over the probed ray
    return lb;
}

}  // namespace

MuHatResult mu_hat(const ProductCF& pcf, std::span<const double> z) {
    validate(pcf);
    if (static_cast<int>(z.size()) != pcf.dim)
        throw std::invalid_argument("mu_hat: z dimension mismatch");

    MuHatResult res;
    double zn = norm2(z);
    if (zn == 0.0) {
        res.value = 1.0;
        return res;
    }

    LocalBound lb = probe_local_bound(pcf, z);
    std::complex<double> log_acc(0.0, 0.0);
    std::vector<double> w(z.size());
    double scale = 1.0;
    for (int n = 0; n < pcf.max_terms; ++n) {
        for (std::size_t i = 0; i < z.size(); ++i) w[i] = scale * z[i];
        std::complex<double> v = pcf.rho_cf(w);
        if (std::abs(v) == 0.0) {
            // An exact zero factor kills the whole product.
            res.value = 0.0;
            res.tail_bound = 0.0;
            res.terms = n + 1;
            return res;
        }
        log_acc += std::log(v);
        scale *= pcf.b;

        double next_radius = scale * zn;
        if (next_radius <= lb.valid_radius) {
            double bb = std::pow(pcf.b, lb.beta);
            double tail = lb.c * std::pow(next_radius, lb.beta) / (1.0 - bb);
            if (tail < pcf.tol) {
                res.value = std::exp(log_acc);
                res.tail_bound = tail;
                res.terms = n + 1;
                return res;
            }
        }
    }
    res.value = std::exp(log_acc);
    res.tail_bound = lb.c > 0.0 ? lb.c * std::pow(scale * zn, lb.beta) /
                                      (1.0 - std::pow(pcf.b, lb.beta))
                                : 0.0;
    res.terms = pcf.max_terms;
    throw ProductTruncationError(res, "mu_hat: max_terms reached before tolerance");
}

double check_fixed_point(const ProductCF& pcf, std::span<const std::vector<double>> grid) {
    double worst = 0.0;
    std::vector<double> bz(pcf.dim);
    for (const auto& z : grid) {
        auto lhs = mu_hat(pcf, z);
        for (int i = 0; i < pcf.dim; ++i) bz[i] = pcf.b * z[i];
        auto rhs = mu_hat(pcf, bz);
        double residual = std::abs(lhs.value - rhs.value * pcf.rho_cf(z));
        worst = std::max(worst, residual);
    }
    return worst;
}

double empirical_cf_match(std::span<const double> samples, int dim, const ProductCF& pcf,
                          std::span<const std::vector<double>> grid) {
    if (dim != pcf.dim) throw std::invalid_argument("empirical_cf_match: dim mismatch");
    if (samples.empty() || samples.size() % static_cast<std::size_t>(dim) != 0)
        throw std::invalid_argument("empirical_cf_match: bad sample block");
    const std::size_t count = samples.size() / static_cast<std::size_t>(dim);
    double worst = 0.0;
    for (const auto& z : grid) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t k = 0; k < count; ++k) {
            double phase = 0.0;
            for (int i = 0; i < dim; ++i) phase += z[i] * samples[k * dim + i];
            acc += std::complex<double>(std::cos(phase), std::sin(phase));
        }
        acc /= static_cast<double>(count);
        worst = std::max(worst, std::abs(acc - mu_hat(pcf, z).value));
    }
    return worst;
}

std::vector<std::vector<double>> standard_grid(int dim) {
    std::vector<std::vector<double>> grid;
    for (int axis = 0; axis < dim; ++axis) {
        for (int i = 0; i < 41; ++i) {
            double v = -5.0 + 10.0 * static_cast<double>(i) / 40.0;
            std::vector<double> z(dim, 0.0);
            z[axis] = v;
            grid.push_back(std::move(z));
        }
    }
    if (dim >= 2) {
        Rng rng(0x5eedd170ULL);
        for (int k = 0; k < 8; ++k) {
            std::vector<double> u(dim);
            rng.fill_normals(u);
            double n = 0.0;
            for (double v : u) n += v * v;
            n = std::sqrt(n);
            for (auto& v : u) v /= n;
            for (int j = 1; j <= 10; ++j) {
                double r = 0.5 * static_cast<double>(j);
                std::vector<double> z(dim);
                for (int i = 0; i < dim; ++i) z[i] = r * u[i];
                grid.push_back(std::move(z));
            }
        }
    }
    return grid;
}

}  // namespace ssalab
