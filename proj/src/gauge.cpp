#include "ssalab/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ssalab {

Gauge Gauge::power_log(double p, double q) {
    if (p < 0.0) throw std::invalid_argument("gauge: power exponent p must be >= 0");
    Gauge g;
    g.form_ = Form::PowerLog;
    g.p_ = p;
    g.q_ = q;
    g.domain_start_ = 2;
    if (q < 0.0) {
        if (p == 0.0) throw std::invalid_argument("gauge: (log n)^{-q} with q < 0 is increasing");
        // decreasing needs p log n >= -q
        double n0 = std::exp(-q / p);
        g.domain_start_ = std::max<long long>(2, static_cast<long long>(std::ceil(n0)) + 1);
    }
    return g;
}

Gauge Gauge::log_power(double s) {
    if (s > 0.0) throw std::invalid_argument("gauge: (log n)^s with s > 0 is increasing");
    Gauge g;
    g.form_ = Form::LogPower;
    g.s_ = s;
    g.domain_start_ = 2;
    return g;
}

Gauge Gauge::constant(double value) {
    if (!(value > 0.0)) throw std::invalid_argument("gauge: constant must be positive");
    Gauge g;
    g.form_ = Form::Constant;
    g.c_ = value;
    g.domain_start_ = 0;
    return g;
}

Gauge Gauge::staircase(std::vector<long long> breaks, std::vector<double> levels) {
    if (breaks.empty() || breaks.size() != levels.size())
        throw std::invalid_argument("gauge: staircase needs matching breaks/levels");
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        if (breaks[i] <= breaks[i - 1])
            throw std::invalid_argument("gauge: staircase breaks must increase");
        if (levels[i] > levels[i - 1])
            throw std::invalid_argument("gauge: staircase levels must decrease");
    }
    for (double v : levels)
        if (!(v > 0.0)) throw std::invalid_argument("gauge: staircase levels must be positive");
    Gauge g;
    g.form_ = Form::Staircase;
    g.domain_start_ = breaks.front();
    g.breaks_ = std::move(breaks);
    g.levels_ = std::move(levels);
    return g;
}

Gauge Gauge::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("gauge: scale must be positive");
    Gauge g = *this;
    g.scale_ = scale_ * factor;
    return g;
}

double Gauge::base(long long n) const {
    if (n < domain_start_) throw std::out_of_range("gauge evaluated before its domain");
    switch (form_) {
        case Form::PowerLog: {
            double x = static_cast<double>(n);
            return std::pow(x, -p_) * std::pow(std::log(x), -q_);
        }
        case Form::LogPower:
            return std::pow(std::log(static_cast<double>(n)), s_);
        case Form::Constant:
            return c_;
        case Form::Staircase: {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), n);
            return levels_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
        }
    }
    return 0.0;
}

std::string Gauge::describe() const {
    std::ostringstream os;
    switch (form_) {
        case Form::PowerLog:
            os << "n^{-" << p_ << "}(log n)^{-" << q_ << "}";
            break;
        case Form::LogPower:
            os << "(log n)^{" << s_ << "}";
            break;
        case Form::Constant:
            os << c_;
            break;
        case Form::Staircase:
            os << "staircase[" << breaks_.size() << " levels]";
            break;
    }
    if (scale_ != 1.0) os << " * " << scale_;
    return os.str();
}

}  // namespace ssalab
