#include "reprisk/config.hpp"

#include <filesystem>
#include <fstream>

#include "reprisk/errors.hpp"

namespace reprisk {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw InputError("config: missing numeric field '" + key + "'");
    return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw InputError("config: field '" + key + "' must be numeric");
    return j.at(key).get<double>();
}

std::uint64_t uint_or(const json& j, const std::string& key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_unsigned() && !j.at(key).is_number_integer())
        throw InputError("config: field '" + key + "' must be a non-negative integer");
    const auto v = j.at(key).get<long long>();
    if (v < 0) throw InputError("config: field '" + key + "' must be non-negative");
    return static_cast<std::uint64_t>(v);
}

std::string require_string(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw InputError("config: missing string field '" + key + "'");
    return j.at(key).get<std::string>();
}

std::vector<double> require_number_array(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw InputError("config: missing array field '" + key + "'");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number())
            throw InputError("config: '" + key + "' must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

std::string variant_name(EstimatorVariant variant) {
    switch (variant) {
        case EstimatorVariant::mc: return "mc";
        case EstimatorVariant::is_rhw: return "is_rhw";
        case EstimatorVariant::alg3: return "alg3";
        case EstimatorVariant::direct_sq: return "direct_sq";
    }
    return "unknown";
}

DistributionPtr parse_distribution(const nlohmann::json& spec) {
    if (!spec.is_object()) throw InputError("config: distribution must be an object");
    const std::string kind = require_string(spec, "kind");
    if (kind == "uniform") {
        return std::make_shared<Uniform1D>(require_number(spec, "lower"),
                                           require_number(spec, "upper"));
    }
    if (kind == "truncated_normal") {
        return std::make_shared<TruncatedNormal1D>(
            require_number(spec, "mean"), require_number(spec, "std"),
            require_number(spec, "lower"), require_number(spec, "upper"));
    }
    if (kind == "categorical") {
        return std::make_shared<Categorical>(require_number_array(spec, "probabilities"));
    }
    if (kind == "mixture") {
        if (!spec.contains("components") || !spec.at("components").is_array())
            throw InputError("config: mixture needs a 'components' array");
        std::vector<DistributionPtr> components;
        for (const auto& c : spec.at("components")) components.push_back(parse_distribution(c));
        return std::make_shared<Mixture1D>(std::move(components),
                                           require_number_array(spec, "weights"));
    }
    throw InputError("config: unknown distribution kind '" + kind + "'");
}

ControllerSpec parse_controller(const nlohmann::json& spec) {
    if (!spec.is_object()) throw InputError("config: controller must be an object");
    const std::string kind = require_string(spec, "kind");
    if (kind == "pid") {
        PidGains g;
        g.kp = number_or(spec, "kp", g.kp);
        g.ki = number_or(spec, "ki", g.ki);
        g.kd = number_or(spec, "kd", g.kd);
        return g;
    }
    if (kind == "lqr") {
        LqrWeights w;
        w.q_theta = number_or(spec, "q_theta", w.q_theta);
        w.q_omega = number_or(spec, "q_omega", w.q_omega);
        w.r = number_or(spec, "r", w.r);
        return w;
    }
    if (kind == "nmpc") {
        NmpcConfig c;
        c.horizon_steps = static_cast<int>(uint_or(spec, "horizon_steps",
                                                   static_cast<std::uint64_t>(c.horizon_steps)));
        c.dt = number_or(spec, "dt", c.dt);
        c.iterations = static_cast<int>(uint_or(spec, "iterations",
                                                static_cast<std::uint64_t>(c.iterations)));
        c.step_size = number_or(spec, "step_size", c.step_size);
        c.control_period_steps = static_cast<int>(
            uint_or(spec, "control_period_steps",
                    static_cast<std::uint64_t>(c.control_period_steps)));
        c.q_theta = number_or(spec, "q_theta", c.q_theta);
        c.q_omega = number_or(spec, "q_omega", c.q_omega);
        c.r = number_or(spec, "r", c.r);
        return c;
    }
    throw InputError("config: unknown controller kind '" + kind + "'");
}

namespace {

SubjectConfig parse_subject(const json& spec, const std::string& base_dir) {
    SubjectConfig subject;
    const std::string kind = require_string(spec, "kind");
    if (kind == "pendulum") {
        subject.kind = SubjectConfig::Kind::pendulum;
        if (spec.contains("params")) {
            const json& p = spec.at("params");
            PendulumParams& pp = subject.pendulum.params;
            pp.length = number_or(p, "length", pp.length);
            pp.mass = number_or(p, "mass", pp.mass);
            pp.friction = number_or(p, "friction", pp.friction);
            pp.gravity = number_or(p, "gravity", pp.gravity);
            pp.dt = number_or(p, "dt", pp.dt);
            pp.horizon = number_or(p, "horizon", pp.horizon);
            pp.fail_angle = number_or(p, "fail_angle", pp.fail_angle);
        }
        if (spec.contains("disturbance")) {
            const json& d = spec.at("disturbance");
            subject.pendulum.disturbance_lower =
                number_or(d, "lower", subject.pendulum.disturbance_lower);
            subject.pendulum.disturbance_upper =
                number_or(d, "upper", subject.pendulum.disturbance_upper);
        }
        subject.pendulum.validate();
        if (!spec.contains("controllers") || !spec.at("controllers").is_array() ||
            spec.at("controllers").empty())
            throw InputError("config: pendulum subject needs a non-empty 'controllers' array");
        for (const auto& c : spec.at("controllers")) {
            subject.controllers.push_back(parse_controller(c));
            std::string name = controller_kind(subject.controllers.back());
            if (c.contains("name")) name = c.at("name").get<std::string>();
            subject.controller_names.push_back(name);
        }
        for (std::size_t i = 0; i < subject.controller_names.size(); ++i)
            for (std::size_t k = i + 1; k < subject.controller_names.size(); ++k)
                if (subject.controller_names[i] == subject.controller_names[k])
                    throw InputError("config: duplicate controller name '" +
                                     subject.controller_names[i] + "'");
        return subject;
    }
    if (kind == "categorical") {
        subject.kind = SubjectConfig::Kind::categorical;
        json labels;
        if (spec.contains("failure_labels")) {
            labels = spec.at("failure_labels");
        } else if (spec.contains("labels_file")) {
            std::filesystem::path path(spec.at("labels_file").get<std::string>());
            if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
            std::ifstream in(path);
            if (!in) throw InputError("config: cannot open labels_file " + path.string());
            in >> labels;
        } else {
            throw InputError("config: categorical subject needs 'failure_labels' or 'labels_file'");
        }
        if (!labels.is_array() || labels.empty())
            throw InputError("config: failure_labels must be a non-empty array");
        for (const auto& v : labels) {
            const auto label = v.get<int>();
            if (label != 0 && label != 1)
                throw InputError("config: failure labels must be 0 or 1");
            subject.categorical.failure_labels.push_back(static_cast<std::uint8_t>(label));
        }
        return subject;
    }
    throw InputError("config: unknown subject kind '" + kind + "'");
}

} // namespace

void CampaignConfig::validate() const {
    if (trials < 1) throw InputError("config: trials must be >= 1");
    if (!p) throw InputError("config: nominal distribution 'p' is required");
    // direct_sq is distribution-agnostic: it runs importance sampling when q
    // is given and plain Monte Carlo otherwise.
    const bool needs_q =
        variant == EstimatorVariant::is_rhw || variant == EstimatorVariant::alg3;
    if (needs_q && !q)
        throw InputError("config: variant '" + variant_name(variant) + "' requires 'q'");
    switch (variant) {
        case EstimatorVariant::mc:
            if (mc_fixed_n < 1) throw InputError("config: mc variant requires fixed_n >= 1");
            break;
        case EstimatorVariant::is_rhw:
            TerminationRule::relative_half_width(rhw); // validates
            break;
        case EstimatorVariant::alg3:
            planner.validate();
            break;
        case EstimatorVariant::direct_sq:
            planner.validate_direct();
            break;
    }
    if (subject.kind == SubjectConfig::Kind::categorical) {
        if (!p->is_discrete())
            throw InputError("config: categorical subject requires a categorical 'p'");
        subject.categorical.validate_against(static_cast<const Categorical&>(*p));
        if (ground_truth.mode == GroundTruthConfig::Mode::enumerate)
            throw InputError("config: categorical subjects use ground_truth mode 'exact'");
    } else {
        if (p->is_discrete())
            throw InputError("config: pendulum subject requires a continuous 'p'");
        if (ground_truth.mode == GroundTruthConfig::Mode::exact)
            throw InputError("config: pendulum subjects use ground_truth mode 'enumerate'");
    }
}

CampaignConfig parse_campaign_config(const nlohmann::json& doc, const std::string& base_dir) {
    if (!doc.is_object()) throw InputError("config: document root must be an object");
    CampaignConfig config;
    if (!doc.contains("subject")) throw InputError("config: missing 'subject' block");
    config.subject = parse_subject(doc.at("subject"), base_dir);

    if (!doc.contains("p")) throw InputError("config: missing nominal distribution 'p'");
    config.p = parse_distribution(doc.at("p"));
    if (doc.contains("q")) config.q = parse_distribution(doc.at("q"));

    if (!doc.contains("estimator") || !doc.at("estimator").is_object())
        throw InputError("config: missing 'estimator' block");
    const json& est = doc.at("estimator");
    const std::string variant = require_string(est, "variant");
    if (variant == "mc") {
        config.variant = EstimatorVariant::mc;
        config.mc_fixed_n = uint_or(est, "fixed_n", 0);
    } else if (variant == "is_rhw") {
        config.variant = EstimatorVariant::is_rhw;
        if (!est.contains("rhw") || !est.at("rhw").is_object())
            throw InputError("config: is_rhw variant needs an 'rhw' block");
        const json& r = est.at("rhw");
        config.rhw.s_r = require_number(r, "s_r");
        config.rhw.confidence_z = number_or(r, "confidence_z", config.rhw.confidence_z);
        config.rhw.n_min = uint_or(r, "n_min", config.rhw.n_min);
        config.rhw.n_max = uint_or(r, "n_max", config.rhw.n_max);
        config.rhw.min_failures = uint_or(r, "min_failures", config.rhw.min_failures);
    } else if (variant == "alg3" || variant == "direct_sq") {
        config.variant = variant == "alg3" ? EstimatorVariant::alg3
                                           : EstimatorVariant::direct_sq;
        if (!est.contains("planner") || !est.at("planner").is_object())
            throw InputError("config: '" + variant + "' variant needs a 'planner' block");
        const json& pl = est.at("planner");
        config.planner.beta = require_number(pl, "beta");
        config.planner.tau = require_number(pl, "tau");
        config.planner.r_bar = number_or(pl, "r_bar", config.planner.r_bar);
        config.planner.c_step = number_or(pl, "c_step", config.planner.c_step);
        config.planner.epsilon = number_or(pl, "epsilon", config.planner.epsilon);
        if (pl.contains("gamma_cap") && !pl.at("gamma_cap").is_null())
            config.planner.gamma_cap = uint_or(pl, "gamma_cap", 0);
        if (config.variant == EstimatorVariant::direct_sq && !pl.contains("epsilon"))
            throw InputError("config: direct_sq variant requires planner.epsilon");
    } else {
        throw InputError("config: unknown estimator variant '" + variant + "'");
    }

    config.trials = uint_or(doc, "trials", config.trials);
    config.master_seed = uint_or(doc, "master_seed", config.master_seed);
    config.grid_seed = uint_or(doc, "grid_seed", config.grid_seed);
    config.workers = static_cast<unsigned int>(uint_or(doc, "workers", 0));

    if (doc.contains("ground_truth")) {
        const json& g = doc.at("ground_truth");
        const std::string mode = require_string(g, "mode");
        if (mode == "disabled") config.ground_truth.mode = GroundTruthConfig::Mode::disabled;
        else if (mode == "enumerate") config.ground_truth.mode = GroundTruthConfig::Mode::enumerate;
        else if (mode == "exact") config.ground_truth.mode = GroundTruthConfig::Mode::exact;
        else throw InputError("config: unknown ground_truth mode '" + mode + "'");
        config.ground_truth.resolution = number_or(g, "resolution", config.ground_truth.resolution);
        // cache_dir is an output-side path: relative values resolve against
        // the working directory, unlike input paths such as labels_file.
        if (g.contains("cache_dir"))
            config.ground_truth.cache_dir = g.at("cache_dir").get<std::string>();
    } else if (config.subject.kind == SubjectConfig::Kind::categorical) {
        config.ground_truth.mode = GroundTruthConfig::Mode::exact;
    }

    if (doc.contains("compare")) {
        const json& c = doc.at("compare");
        config.compare.taus = require_number_array(c, "taus");
        config.compare.r_bars = require_number_array(c, "r_bars");
        config.compare.beta = number_or(c, "beta", config.compare.beta);
        config.compare.epsilon = number_or(c, "epsilon", config.compare.epsilon);
        config.compare.c_step = number_or(c, "c_step", config.compare.c_step);
        config.compare.trials_per_cell = uint_or(c, "trials_per_cell", 1);
    }

    config.validate();
    return config;
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("config: JSON parse error: ") + e.what());
    }
    std::string base_dir = std::filesystem::path(path).parent_path().string();
    if (base_dir.empty()) base_dir = ".";
    try {
        return parse_campaign_config(doc, base_dir);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
}

} // namespace reprisk
