#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ssalab {

// A positive decreasing sequence g(n) on integers n >= domain_start (class G).
// Ratio statistics are computed as (raw / base(n)) / scale so that replacing g
// by c*g divides every reported value by exactly c at the bit level.
class Gauge {
public:
    // n^{-p} (log n)^{-q}; domain start raised until the form is decreasing.
    static Gauge power_log(double p, double q);
    // (log n)^{s}, s <= 0.
    static Gauge log_power(double s);
    static Gauge constant(double value);
    // g(n) = levels[k] on [breaks[k], breaks[k+1]), flat after the last break.
    static Gauge staircase(std::vector<long long> breaks, std::vector<double> levels);

    Gauge scaled(double factor) const;

    double base(long long n) const;
    double value(long long n) const { return scale_ * base(n); }
    double scale() const { return scale_; }
    long long domain_start() const { return domain_start_; }

    bool is_power_log() const { return form_ == Form::PowerLog; }
    double power_p() const { return p_; }
    double power_q() const { return q_; }
    const std::vector<long long>& staircase_breaks() const { return breaks_; }
    const std::vector<double>& staircase_levels() const { return levels_; }

    std::string describe() const;

private:
    enum class Form { PowerLog, LogPower, Constant, Staircase };

    Gauge() = default;

    Form form_ = Form::Constant;
    double p_ = 0.0, q_ = 0.0, s_ = 0.0, c_ = 1.0;
    double scale_ = 1.0;
    long long domain_start_ = 0;
    std::vector<long long> breaks_;
    std::vector<double> levels_;
};

}  // namespace ssalab
