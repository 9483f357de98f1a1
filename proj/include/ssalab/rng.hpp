#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace ssalab {

// SplitMix64 finalizer; full-avalanche 64-bit mixer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// Deterministic seed derivation along a labelled path. Labels are framed
// (type tag + length before content) so distinct label paths cannot collide
// by concatenation: child("ab") != child("a").child("b") != child(0xab).
class SeedPath {
public:
    explicit SeedPath(std::uint64_t master)
        : state_(mix64(master ^ 0x9e3779b97f4a7c15ULL)) {}

    SeedPath child(std::string_view label) const {
        std::uint64_t h = mix64(state_ ^ kStringTag ^ static_cast<std::uint64_t>(label.size()));
        std::uint64_t chunk = 0;
        int filled = 0;
        for (unsigned char c : label) {
            chunk = (chunk << 8) | c;
            if (++filled == 8) {
                h = mix64(h ^ chunk);
                chunk = 0;
                filled = 0;
            }
        }
        if (filled > 0)
            h = mix64(h ^ chunk ^ (static_cast<std::uint64_t>(filled) << 56));
        return SeedPath(h, Raw{});
    }

    SeedPath child(std::uint64_t index) const {
        return SeedPath(mix64(mix64(state_ ^ kIndexTag) ^ index), Raw{});
    }

    std::uint64_t value() const { return state_; }

private:
    struct Raw {};
    SeedPath(std::uint64_t state, Raw) : state_(state) {}

    static constexpr std::uint64_t kStringTag = 0x53545200aa55aa55ULL;
    static constexpr std::uint64_t kIndexTag  = 0x49445800cc33cc33ULL;

    std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t master, std::span<const std::string_view> labels) {
    SeedPath p(master);
    for (auto l : labels) p = p.child(l);
    return p.value();
}

// Random stream with hand-rolled variate transforms. The engine (mt19937_64)
// is fully specified by the standard and the transforms below avoid
// std::*_distribution, whose output is implementation-defined; identical
// seeds therefore give bit-identical streams on any conforming toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    explicit Rng(const SeedPath& path) : eng_(path.value()) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // (0, 1]
    double uniform_pos() { return 1.0 - uniform01(); }

    // (0, 1), both endpoints excluded
    double uniform_open() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform_pos()); }

    double normal() {
        double u = uniform_pos();
        double v = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
    }

    // Box-Muller in pairs; n normals consume 2*ceil(n/2) uniforms.
    void fill_normals(std::span<double> out) {
        std::size_t i = 0;
        while (i + 1 < out.size()) {
            double u = uniform_pos();
            double v = uniform01();
            double r = std::sqrt(-2.0 * std::log(u));
            double a = 2.0 * kPi * v;
            out[i++] = r * std::cos(a);
            out[i++] = r * std::sin(a);
        }
        if (i < out.size()) out[i] = normal();
    }

    // One-sided alpha-stable on (0, inf) normalized to E exp(-u X) = exp(-u^alpha),
    // alpha in (0,1). Exact transformation method (Kanter / Zolotarev):
    //   X = (A(V)/E)^{(1-alpha)/alpha},
    //   A(v) = [ sin(a v)^a sin((1-a)v)^{1-a} / sin(v) ]^{1/(1-a)},  V ~ U(0,pi).
    double positive_stable(double alpha) {
        double v = kPi * uniform_open();
        double e = exponential();
        double log_a = (alpha * std::log(std::sin(alpha * v)) +
                        (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * v)) -
                        std::log(std::sin(v))) /
                       (1.0 - alpha);
        return std::exp((1.0 - alpha) / alpha * (log_a - std::log(e)));
    }

private:
    static constexpr double kPi = 3.14159265358979323846;
    std::mt19937_64 eng_;
};

}  // namespace ssalab
