#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssalab/escape.hpp"
#include "ssalab/gauge.hpp"
#include "ssalab/law.hpp"
#include "ssalab/lil.hpp"
#include "ssalab/sequence.hpp"

namespace ssalab {

// Config file errors collect every offending field before failing.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class ExperimentKind {
    SimulateW,
    SimulateY,
    Bdecomp,
    Classify,
    TypeAGauge,
    Kw,
    LilHitting,
    LilSup,
    LilStable,
    BoundCheck,
};

std::string to_string(ExperimentKind k);

struct ClassifierFSpec {
    std::string form;  // power | exp-inv | hitting-form | empirical-w0 | kw
    double beta = 1.0;
    int d = 3;
    std::size_t count = 100000;
};

struct ExperimentConfig {
    int schema_version = 1;
    ExperimentKind kind = ExperimentKind::SimulateW;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    int workers = 1;

    std::optional<IncrementLaw> law;
    std::optional<SequenceParams> sequence;
    std::optional<int> truncation_depth;
    std::size_t path_count = 1;

    double bdecomp_b = 0.5;
    double bdecomp_tol = 1e-12;

    std::optional<Gauge> gauge;
    std::optional<ClassifierFSpec> classifier_f;
    std::vector<double> deltas;
    long long horizon = 10000;
    double dv_r_max = 0.5, dv_r_min = 2e-3;
    int dv_points = 24;

    double escape_a = 2.0;
    int type_a_levels = 24;

    std::vector<double> r_grid;

    BrownianConfig brownian;
    int lil_K = 16;
    int lil_replicates = 50;

    double stable_alpha = 0.5;
    long long mc_count = 1000000;

    BoundCheckConfig bound;

    nlohmann::ordered_json snapshot;  // the parsed file, for replay records
};

// Parses and validates a config file. Unknown keys are errors; every problem
// is reported, not just the first.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const nlohmann::ordered_json& j);

IncrementLaw law_from_json(const nlohmann::ordered_json& j, std::vector<std::string>& problems,
                           const std::string& prefix);
Gauge gauge_from_json(const nlohmann::ordered_json& j, std::vector<std::string>& problems,
                      const std::string& prefix);

}  // namespace ssalab
