#include "ssalab/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssalab/rng.hpp"

namespace ssalab {

namespace {

// P(1-D bridge from y0 to y1 over dt crosses the barrier at c), both
// endpoints on one side.
double bridge_cross_prob(double y0, double y1, double c, double dt) {
    double a = c - y0, b = c - y1;
    if (a <= 0.0 || b <= 0.0) return 1.0;
    return std::exp(-2.0 * a * b / dt);
}

struct Walker {
    std::vector<double> pos;
    std::vector<double> step;
    double rad = 0.0;
    double t = 0.0;

    explicit Walker(int dim) : pos(dim, 0.0), step(dim) {}

    void place_on_sphere(double r) {
        std::fill(pos.begin(), pos.end(), 0.0);
        pos[0] = r;
        rad = r;
    }

    // One Gaussian step; returns the new radius without committing.
    double propose(double dt, Rng& rng) {
        rng.fill_normals(step);
        double s = std::sqrt(dt);
        double r2 = 0.0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            step[i] = pos[i] + s * step[i];
            r2 += step[i] * step[i];
        }
        return std::sqrt(r2);
    }

    void commit(double dt, double new_rad) {
        pos.swap(step);
        rad = new_rad;
        t += dt;
    }

    // Radial projection of the proposed point on the current direction.
    double radial_projection() const {
        if (rad == 0.0) return step[0];
        double s = 0.0;
        for (std::size_t i = 0; i < pos.size(); ++i) s += pos[i] * step[i];
        return s / rad;
    }

    // Commit to the sphere |x| = r at the in-step fraction u.
    void commit_crossing(double r, double u, double dt) {
        double n2 = 0.0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            pos[i] += u * (step[i] - pos[i]);
            n2 += pos[i] * pos[i];
        }
        double n = std::sqrt(n2);
        if (n > 0.0)
            for (auto& v : pos) v *= r / n;
        else
            place_on_sphere(r);
        rad = r;
        t += u * dt;
    }
};

}  // namespace

HitTimes hit_times_sphere(int dim, std::span<const double> radii, double dt, bool bridge,
                          double horizon_factor, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("hit_times_sphere: dim must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("hit_times_sphere: dt must be positive");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("hit_times_sphere: radii must be positive");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw std::invalid_argument("hit_times_sphere: radii must increase");
    }

    HitTimes out;
    out.times.assign(radii.size(), 0.0);
    out.truncated.assign(radii.size(), false);

    Walker w(dim);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double horizon = horizon_factor * r * r;
        bool hit = false;
        while (!hit) {
            if (w.t > horizon) {
                out.truncated[i] = true;
                out.times[i] = w.t;
                break;
            }
            double rad2 = w.propose(dt, rng);
            if (rad2 >= r) {
                if (bridge) {
                    double u = (r - w.rad) / (rad2 - w.rad);
                    w.commit_crossing(r, u, dt);
                } else {
                    // naive Euler: grid time, overshoot position kept
                    w.commit(dt, rad2);
                }
                out.times[i] = w.t;
                hit = true;
            } else if (bridge) {
                double y1 = w.radial_projection();
                double p = bridge_cross_prob(w.rad, y1, r, dt) +
                           bridge_cross_prob(-w.rad, -y1, r, dt);
                if (rng.uniform01() < std::min(1.0, p)) {
                    w.commit_crossing(r, 0.5, dt);
                    out.times[i] = w.t;
                    hit = true;
                } else {
                    w.commit(dt, rad2);
                }
            } else {
                w.commit(dt, rad2);
            }
        }
    }
    return out;
}

double hit_time_unit_sphere(int dim, double start_radius, double dt, bool bridge, Rng& rng) {
    if (!(start_radius >= 0.0 && start_radius < 1.0))
        throw std::invalid_argument("hit_time_unit_sphere: start radius must be in [0,1)");
    Walker w(dim);
    if (start_radius > 0.0) w.place_on_sphere(start_radius);
    while (true) {
        double rad2 = w.propose(dt, rng);
        if (rad2 >= 1.0) {
            if (bridge) {
                double u = (1.0 - w.rad) / (rad2 - w.rad);
                w.commit_crossing(1.0, u, dt);
            } else {
                w.commit(dt, rad2);
            }
            return w.t;
        }
        if (bridge) {
            double y1 = w.radial_projection();
            double p =
                bridge_cross_prob(w.rad, y1, 1.0, dt) + bridge_cross_prob(-w.rad, -y1, 1.0, dt);
            if (rng.uniform01() < std::min(1.0, p)) {
                w.commit_crossing(1.0, 0.5, dt);
                return w.t;
            }
        }
        w.commit(dt, rad2);
    }
}

double first_passage_level(double level, double dt, bool bridge, double horizon, Rng& rng) {
    if (!(level > 0.0)) throw std::invalid_argument("first_passage_level: level must be positive");
    double pos = 0.0, t = 0.0;
    double sdt = std::sqrt(dt);
    while (t < horizon) {
        double pos2 = pos + sdt * rng.normal();
        if (pos2 >= level) {
            if (bridge) return t + dt * (level - pos) / (pos2 - pos);
            return t + dt;
        }
        if (bridge) {
            double p = bridge_cross_prob(pos, pos2, level, dt);
            if (rng.uniform01() < p) return t + 0.5 * dt;
        }
        pos = pos2;
        t += dt;
    }
    // Exact completion: remaining passage time of BM to a level at distance m
    // is m^2 / Z^2.
    double z = rng.normal();
    double m = level - pos;
    return t + m * m / (z * z);
}

HitAndLastExit hit_and_last_exit_sphere(int dim, std::span<const double> radii, double dt,
                                        Rng& rng, double far_multiple, int max_cycles) {
    if (dim < 3) throw std::invalid_argument("last exit requires d >= 3 (transience)");
    if (far_multiple <= 1.0) throw std::invalid_argument("last exit: far_multiple must be > 1");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("last exit: radii must be positive");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw std::invalid_argument("last exit: radii must increase");
    }

    const std::size_t K = radii.size();
    const double r_max = radii.back();
    const double far = far_multiple * r_max;

    HitAndLastExit out;
    out.first_hit.assign(K, std::numeric_limits<double>::infinity());
    out.last_exit.assign(K, 0.0);

    auto record = [&](std::size_t i, double tc) {
        out.first_hit[i] = std::min(out.first_hit[i], tc);
        out.last_exit[i] = std::max(out.last_exit[i], tc);
    };

    Walker w(dim);
    for (int cycle = 0;; ++cycle) {
        if (cycle >= max_cycles) {
            out.truncated = true;
            break;
        }
        out.cycles = cycle + 1;

        // Stepping phase inside |x| <= far.
        while (w.rad < far) {
            double rad2 = w.propose(dt, rng);
            double lo = std::min(w.rad, rad2), hi = std::max(w.rad, rad2);
            double y1 = w.radial_projection();
            for (std::size_t i = 0; i < K; ++i) {
                double r = radii[i];
                if (r >= lo && r <= hi) {
                    double u = (r - w.rad) / (rad2 - w.rad);
                    record(i, w.t + u * dt);
                } else if (r < lo) {
                    // graze from above on the radial projection
                    if (y1 <= r) {
                        record(i, w.t + 0.5 * dt);
                    } else {
                        double p = std::exp(-2.0 * (w.rad - r) * (y1 - r) / dt);
                        if (rng.uniform01() < p) record(i, w.t + 0.5 * dt);
                    }
                } else {
                    double p = bridge_cross_prob(w.rad, y1, r, dt);
                    if (rng.uniform01() < p) record(i, w.t + 0.5 * dt);
                }
            }
            w.commit(dt, rad2);
        }

        // Far phase: exact return probability (r_max / R)^{d-2}.
        double p_return = std::pow(r_max / w.rad, static_cast<double>(dim - 2));
        if (rng.uniform01() >= p_return) break;  // never comes back: all exits final

        if (dim == 3) {
            // Conditioned radial part is a drift-free BM; first passage over
            // distance m is exactly m^2 / Z^2.
            double z = rng.normal();
            double m = w.rad - r_max;
            w.t += m * m / (z * z);
        } else {
            // h-transform drift (3-d)/(2 rho): step the conditioned radial leg.
            double rho = w.rad;
            double sdt = std::sqrt(dt);
            while (rho > r_max) {
                double rho2 = rho + sdt * rng.normal() +
                              (3.0 - static_cast<double>(dim)) / (2.0 * rho) * dt;
                if (rho2 <= r_max) {
                    double u = (rho - r_max) / (rho - rho2);
                    w.t += u * dt;
                    break;
                }
                rho = rho2;
                w.t += dt;
            }
        }
        record(K - 1, w.t);
        w.place_on_sphere(r_max);
    }
    return out;
}

std::vector<double> sup_abs_at(int dim, std::span<const double> t_grid, double dt_rel, Rng& rng) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw std::invalid_argument("sup_abs_at: times must be positive");
        if (i > 0 && t_grid[i] <= t_grid[i - 1])
            throw std::invalid_argument("sup_abs_at: times must increase");
    }
    std::vector<double> out;
    out.reserve(t_grid.size());

    Walker w(dim);
    double running = 0.0;
    double t_prev = 0.0;
    for (double t_k : t_grid) {
        double span = t_k - t_prev;
        long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(1.0 / dt_rel)));
        double dt = span / static_cast<double>(steps);
        for (long long s = 0; s < steps; ++s) {
            if (dim == 1) {
                double y0 = w.pos[0];
                double rad2 = w.propose(dt, rng);
                double y1 = w.step[0];
                // exact bridge extrema over the step
                double d2 = (y0 - y1) * (y0 - y1);
                double mx = 0.5 * (y0 + y1 + std::sqrt(d2 - 2.0 * dt * std::log(rng.uniform_pos())));
                double mn = 0.5 * (y0 + y1 - std::sqrt(d2 - 2.0 * dt * std::log(rng.uniform_pos())));
                running = std::max({running, mx, -mn});
                w.commit(dt, rad2);
            } else {
                double rad2 = w.propose(dt, rng);
                w.commit(dt, rad2);
                running = std::max(running, w.rad);
            }
        }
        out.push_back(running);
        t_prev = t_k;
    }
    return out;
}

namespace {

// Regularized lower incomplete gamma P(s, x), series for x < s+1 and
// continued fraction otherwise.
double gamma_p(double s, double x) {
    if (x <= 0.0) return 0.0;
    if (x < s + 1.0) {
        double term = 1.0 / s;
        double sum = term;
        for (int n = 1; n < 500; ++n) {
            term *= x / (s + n);
            sum += term;
            if (term < sum * 1e-16) break;
        }
        return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    double b = x + 1.0 - s, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

double radial_gaussian_cdf(int dim, double x, double t) {
    if (x <= 0.0) return 0.0;
    if (t <= 0.0) return 1.0;
    double a = x / std::sqrt(t);
    return gamma_p(static_cast<double>(dim) / 2.0, a * a / 2.0);
}

double brownian_interval_hit_probability(int dim, double b, double c, double gamma, double dt,
                                         long long count, std::uint64_t seed, double* se_out) {
    if (!(b > 0.0 && c > b)) throw std::invalid_argument("interval hit: need 0 < b < c");
    if (!(gamma > 0.0)) throw std::invalid_argument("interval hit: gamma must be positive");
    Rng rng(seed);
    long long hits = 0;
    for (long long rep = 0; rep < count; ++rep) {
        Walker w(dim);
        bool hit = false;
        while (w.t < c - 0.5 * dt && !hit) {
            double rad2 = w.propose(dt, rng);
            double t0 = w.t, t1 = w.t + dt;
            if (t1 > b && t0 < c) {
                if (t0 >= b && w.rad <= gamma) {
                    hit = true;
                } else if (rad2 <= gamma && t1 <= c + 0.5 * dt) {
                    hit = true;
                } else if (w.rad > gamma && rad2 > gamma && t0 >= b && t1 <= c + 0.5 * dt) {
                    // bridge dip below gamma on the radial projection
                    double y1 = w.radial_projection();
                    if (y1 <= gamma) {
                        hit = true;
                    } else {
                        double p = std::exp(-2.0 * (w.rad - gamma) * (y1 - gamma) / dt);
                        if (rng.uniform01() < p) hit = true;
                    }
                }
            }
            w.commit(dt, rad2);
        }
        if (hit) ++hits;
    }
    double p = static_cast<double>(hits) / static_cast<double>(count);
    if (se_out) *se_out = std::sqrt(p * (1.0 - p) / static_cast<double>(count));
    return p;
}

}  // namespace ssalab
