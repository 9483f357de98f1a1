#include "ssalab/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ssalab {

namespace {

using Json = nlohmann::ordered_json;

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream os;
    os << "config validation failed:";
    for (const auto& p : problems) os << "\n  - " << p;
    return os.str();
}

// Tracks which keys a section consumed and reports the leftovers.
class Section {
public:
    Section(const Json& j, std::string prefix, std::vector<std::string>& problems)
        : j_(j), prefix_(std::move(prefix)), problems_(problems) {
        if (!j_.is_object()) problems_.push_back(prefix_ + ": expected an object");
    }

    ~Section() {
        if (!j_.is_object()) return;
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                problems_.push_back(prefix_ + "." + it.key() + ": unknown key");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.is_object() && j_.contains(key);
    }

    const Json* get(const std::string& key) {
        seen_.insert(key);
        if (!j_.is_object() || !j_.contains(key)) return nullptr;
        return &j_.at(key);
    }

    template <typename T>
    T require(const std::string& key, T fallback) {
        const Json* v = get(key);
        if (!v) {
            problems_.push_back(prefix_ + "." + key + ": missing required key");
            return fallback;
        }
        return read<T>(*v, key, fallback);
    }

    template <typename T>
    T optional(const std::string& key, T fallback) {
        const Json* v = get(key);
        if (!v) return fallback;
        return read<T>(*v, key, fallback);
    }

private:
    template <typename T>
    T read(const Json& v, const std::string& key, T fallback) {
        try {
            return v.get<T>();
        } catch (const std::exception&) {
            problems_.push_back(prefix_ + "." + key + ": wrong type");
            return fallback;
        }
    }

    const Json& j_;
    std::string prefix_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::SimulateW: return "simulate-w";
        case ExperimentKind::SimulateY: return "simulate-y";
        case ExperimentKind::Bdecomp: return "bdecomp";
        case ExperimentKind::Classify: return "classify";
        case ExperimentKind::TypeAGauge: return "typeA-gauge";
        case ExperimentKind::Kw: return "kw";
        case ExperimentKind::LilHitting: return "lil-hitting";
        case ExperimentKind::LilSup: return "lil-sup";
        case ExperimentKind::LilStable: return "lil-stable";
        case ExperimentKind::BoundCheck: return "bound-check";
    }
    return "?";
}

IncrementLaw law_from_json(const Json& j, std::vector<std::string>& problems,
                           const std::string& prefix) {
    Section s(j, prefix, problems);
    std::string kind = s.require<std::string>("kind", "");
    try {
        if (kind == "point-mass")
            return IncrementLaw::point_mass(s.require<std::vector<double>>("c", {0.0}));
        if (kind == "bernoulli")
            return IncrementLaw::bernoulli_scaled(s.require<double>("lambda", 0.5),
                                                  s.require<std::vector<double>>("v", {1.0}));
        if (kind == "exponential")
            return IncrementLaw::exponential(s.require<std::vector<double>>("rates", {1.0}));
        if (kind == "uniform")
            return IncrementLaw::uniform_box(s.require<std::vector<double>>("lo", {0.0}),
                                             s.require<std::vector<double>>("hi", {1.0}));
        if (kind == "gaussian") {
            auto mean = s.require<std::vector<double>>("mean", {0.0});
            std::vector<double> cov;
            const Json* cv = s.get("cov");
            if (!cv) {
                problems.push_back(prefix + ".cov: missing required key");
                cov.assign(mean.size() * mean.size(), 0.0);
                for (std::size_t i = 0; i < mean.size(); ++i) cov[i * mean.size() + i] = 1.0;
            } else if (cv->is_array() && !cv->empty() && cv->front().is_array()) {
                for (const auto& row : *cv)
                    for (const auto& v : row) cov.push_back(v.get<double>());
            } else {
                cov = cv->get<std::vector<double>>();
            }
            return IncrementLaw::gaussian(std::move(mean), std::move(cov));
        }
        if (kind == "positive-stable")
            return IncrementLaw::positive_stable(s.require<double>("alpha", 0.5));
        if (kind == "mixture") {
            auto weights = s.require<std::vector<double>>("weights", {1.0});
            std::vector<IncrementLaw> comps;
            const Json* cj = s.get("components");
            if (!cj || !cj->is_array()) {
                problems.push_back(prefix + ".components: missing or not an array");
            } else {
                int i = 0;
                for (const auto& c : *cj)
                    comps.push_back(
                        law_from_json(c, problems, prefix + ".components[" + std::to_string(i++) + "]"));
            }
            return IncrementLaw::mixture(std::move(weights), std::move(comps));
        }
        if (kind == "atomic-mixture") {
            auto weights = s.require<std::vector<double>>("weights", {1.0});
            auto points = s.require<std::vector<std::vector<double>>>("points", {{0.0}});
            return IncrementLaw::atomic_mixture(std::move(weights), std::move(points));
        }
        problems.push_back(prefix + ".kind: unsupported law kind '" + kind + "'");
    } catch (const std::invalid_argument& e) {
        problems.push_back(prefix + ": " + e.what());
    }
    return IncrementLaw::point_mass({0.0});
}

Gauge gauge_from_json(const Json& j, std::vector<std::string>& problems,
                      const std::string& prefix) {
    Section s(j, prefix, problems);
    std::string form = s.require<std::string>("form", "");
    double scale = s.optional<double>("scale", 1.0);
    try {
        if (form == "power-log")
            return Gauge::power_log(s.require<double>("p", 1.0), s.optional<double>("q", 0.0))
                .scaled(scale);
        if (form == "log-power")
            return Gauge::log_power(s.require<double>("s", -1.0)).scaled(scale);
        if (form == "constant") return Gauge::constant(s.require<double>("value", 1.0)).scaled(scale);
        if (form == "staircase")
            return Gauge::staircase(s.require<std::vector<long long>>("breaks", {0}),
                                    s.require<std::vector<double>>("levels", {1.0}))
                .scaled(scale);
        problems.push_back(prefix + ".form: unsupported gauge form '" + form + "'");
    } catch (const std::invalid_argument& e) {
        problems.push_back(prefix + ": " + e.what());
    }
    return Gauge::constant(1.0);
}

namespace {

ClassifierFSpec f_from_json(const Json& j, std::vector<std::string>& problems,
                            const std::string& prefix) {
    Section s(j, prefix, problems);
    ClassifierFSpec f;
    f.form = s.require<std::string>("form", "power");
    f.beta = s.optional<double>("beta", 1.0);
    f.d = s.optional<int>("d", 3);
    f.count = s.optional<std::size_t>("count", 100000);
    static const std::set<std::string> known = {"power", "exp-inv", "hitting-form", "empirical-w0",
                                                "kw"};
    if (!known.count(f.form))
        problems.push_back(prefix + ".form: unsupported F form '" + f.form + "'");
    return f;
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
    std::vector<std::string> problems;
    ExperimentConfig cfg;
    cfg.snapshot = j;

    Section s(j, "config", problems);
    cfg.schema_version = s.require<int>("schema_version", 1);
    if (cfg.schema_version != 1)
        problems.push_back("config.schema_version: unsupported version");

    std::string kind = s.require<std::string>("kind", "");
    static const std::map<std::string, ExperimentKind> kinds = {
        {"simulate-w", ExperimentKind::SimulateW},   {"simulate-y", ExperimentKind::SimulateY},
        {"bdecomp", ExperimentKind::Bdecomp},        {"classify", ExperimentKind::Classify},
        {"typeA-gauge", ExperimentKind::TypeAGauge}, {"kw", ExperimentKind::Kw},
        {"lil-hitting", ExperimentKind::LilHitting}, {"lil-sup", ExperimentKind::LilSup},
        {"lil-stable", ExperimentKind::LilStable},   {"bound-check", ExperimentKind::BoundCheck}};
    auto kit = kinds.find(kind);
    if (kit == kinds.end())
        problems.push_back("config.kind: unknown experiment kind '" + kind + "'");
    else
        cfg.kind = kit->second;

    if (!s.has("seed"))
        problems.push_back("config.seed: master seed is required");
    else
        cfg.seed = s.optional<std::uint64_t>("seed", 0);
    cfg.out_dir = s.optional<std::string>("out_dir", "out");
    cfg.workers = s.optional<int>("workers", 1);
    if (cfg.workers < 1) problems.push_back("config.workers: must be >= 1");

    if (const Json* lj = s.get("law")) cfg.law = law_from_json(*lj, problems, "config.law");

    if (const Json* sj = s.get("sequence")) {
        Section sec(*sj, "config.sequence", problems);
        SequenceParams p;
        p.a = sec.require<double>("a", 2.0);
        p.dim = sec.optional<int>("dim", cfg.law ? cfg.law->dim() : 1);
        auto window = sec.require<std::vector<long long>>("window", {0, 0});
        if (window.size() != 2) {
            problems.push_back("config.sequence.window: expected [n_min, n_max]");
        } else {
            p.n_min = window[0];
            p.n_max = window[1];
        }
        if (sec.has("truncation_depth"))
            cfg.truncation_depth = sec.optional<int>("truncation_depth", 0);
        cfg.path_count = sec.optional<std::size_t>("count", 1);
        if (cfg.path_count < 1) problems.push_back("config.sequence.count: must be >= 1");
        try {
            validate(p);
        } catch (const std::invalid_argument& e) {
            problems.push_back(std::string("config.sequence: ") + e.what());
        }
        cfg.sequence = p;
    }

    if (const Json* bj = s.get("bdecomp")) {
        Section sec(*bj, "config.bdecomp", problems);
        cfg.bdecomp_b = sec.require<double>("b", 0.5);
        cfg.bdecomp_tol = sec.optional<double>("tol", 1e-12);
        if (!(cfg.bdecomp_b > 0.0 && cfg.bdecomp_b < 1.0))
            problems.push_back("config.bdecomp.b: must be in (0,1)");
    }

    if (const Json* gj = s.get("gauge")) cfg.gauge = gauge_from_json(*gj, problems, "config.gauge");

    if (const Json* cj = s.get("classifier")) {
        Section sec(*cj, "config.classifier", problems);
        if (const Json* fj = sec.get("f")) cfg.classifier_f = f_from_json(*fj, problems, "config.classifier.f");
        cfg.deltas = sec.optional<std::vector<double>>("deltas", {0.25, 0.5, 1.0, 2.0, 4.0});
        cfg.horizon = sec.optional<long long>("horizon", 10000);
        cfg.dv_r_max = sec.optional<double>("dv_r_max", 0.5);
        cfg.dv_r_min = sec.optional<double>("dv_r_min", 2e-3);
        cfg.dv_points = sec.optional<int>("dv_points", 24);
    }

    if (const Json* ej = s.get("escape")) {
        Section sec(*ej, "config.escape", problems);
        cfg.escape_a = sec.require<double>("a", 2.0);
        cfg.type_a_levels = sec.optional<int>("max_levels", 24);
        if (!(cfg.escape_a > 1.0)) problems.push_back("config.escape.a: must be > 1");
    }

    if (const Json* rj = s.get("r_grid")) {
        try {
            cfg.r_grid = rj->get<std::vector<double>>();
        } catch (const std::exception&) {
            problems.push_back("config.r_grid: expected an array of radii");
        }
    }

    if (const Json* bj = s.get("brownian")) {
        Section sec(*bj, "config.brownian", problems);
        cfg.brownian.dim = sec.optional<int>("dim", 3);
        cfg.brownian.motions = sec.optional<int>("motions", 1);
        cfg.brownian.dt = sec.optional<double>("dt", 0.01);
        cfg.brownian.horizon_factor = sec.optional<double>("horizon_factor", 1000.0);
        cfg.lil_K = sec.optional<int>("K", 16);
        cfg.lil_replicates = sec.optional<int>("replicates", 50);
        try {
            validate(cfg.brownian);
        } catch (const std::invalid_argument& e) {
            problems.push_back(std::string("config.brownian: ") + e.what());
        }
    }

    if (const Json* tj = s.get("stable")) {
        Section sec(*tj, "config.stable", problems);
        cfg.stable_alpha = sec.require<double>("alpha", 0.5);
        cfg.mc_count = sec.optional<long long>("count", 1000000);
        if (cfg.mc_count < 1) problems.push_back("config.stable.count: must be >= 1");
    }

    if (const Json* bj = s.get("bound")) {
        Section sec(*bj, "config.bound", problems);
        std::string process = sec.require<std::string>("process", "brownian");
        if (process == "brownian")
            cfg.bound.process = BoundProcess::Brownian;
        else if (process == "stable")
            cfg.bound.process = BoundProcess::StableSubordinator;
        else
            problems.push_back("config.bound.process: expected 'brownian' or 'stable'");
        cfg.bound.dim = sec.optional<int>("dim", 1);
        cfg.bound.alpha = sec.optional<double>("alpha", 0.5);
        cfg.bound.b = sec.require<double>("b", 1.0);
        cfg.bound.c = sec.require<double>("c", 2.0);
        cfg.bound.gamma = sec.require<double>("gamma", 1.0);
        cfg.bound.eps = sec.require<double>("eps", 1.0);
        cfg.bound.count = sec.optional<long long>("count", 100000);
        cfg.bound.dt = sec.optional<double>("dt", 1e-3);
        if (cfg.bound.count < 1) problems.push_back("config.bound.count: must be >= 1");
    }

    // Per-kind requirements.
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) problems.push_back("config: kind '" + kind + "' requires " + what);
    };
    switch (cfg.kind) {
        case ExperimentKind::SimulateW:
        case ExperimentKind::SimulateY:
            need(cfg.law.has_value(), "a law section");
            need(cfg.sequence.has_value(), "a sequence section");
            break;
        case ExperimentKind::Bdecomp:
            need(cfg.law.has_value(), "a law section");
            break;
        case ExperimentKind::Classify:
            need(cfg.classifier_f.has_value(), "a classifier.f section");
            need(cfg.gauge.has_value(), "a gauge section");
            break;
        case ExperimentKind::TypeAGauge:
            need(cfg.classifier_f.has_value(), "a classifier.f section");
            break;
        case ExperimentKind::Kw:
            need(cfg.law.has_value(), "a law section");
            break;
        case ExperimentKind::LilStable:
            break;
        case ExperimentKind::LilHitting:
        case ExperimentKind::LilSup:
            break;
        case ExperimentKind::BoundCheck:
            break;
    }
    if (cfg.classifier_f.has_value()) {
        const auto& f = *cfg.classifier_f;
        if ((f.form == "empirical-w0" || f.form == "kw") && !cfg.law.has_value())
            problems.push_back("config.classifier.f: form '" + f.form + "' requires a law section");
    }
    if (!cfg.deltas.empty())
        for (std::size_t i = 1; i < cfg.deltas.size(); ++i)
            if (cfg.deltas[i] <= cfg.deltas[i - 1]) {
                problems.push_back("config.classifier.deltas: must strictly increase");
                break;
            }

    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file: " + path});
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
    return parse_config(j);
}

}  // namespace ssalab
