#ifndef REPRISK_CONFIG_HPP
#define REPRISK_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "reprisk/distributions.hpp"
#include "reprisk/estimators.hpp"
#include "reprisk/planner.hpp"
#include "reprisk/subjects.hpp"

namespace reprisk {

enum class EstimatorVariant { mc, is_rhw, alg3, direct_sq };

std::string variant_name(EstimatorVariant variant);

struct GroundTruthConfig {
    enum class Mode { disabled, enumerate, exact };
    Mode mode = Mode::disabled;
    double resolution = 0.002;
    std::string cache_dir;
};

struct CompareConfig {
    std::vector<double> taus;
    std::vector<double> r_bars;
    double beta = 0.4;
    double epsilon = 1e-6;
    double c_step = 0.01;
    std::uint64_t trials_per_cell = 1;
};

struct SubjectConfig {
    enum class Kind { pendulum, categorical };
    Kind kind = Kind::pendulum;
    PendulumSubject pendulum;
    std::vector<ControllerSpec> controllers;
    std::vector<std::string> controller_names;
    CategoricalSubject categorical;
};

struct CampaignConfig {
    SubjectConfig subject;
    DistributionPtr p;
    DistributionPtr q; // may be null for the plain Monte-Carlo variant
    EstimatorVariant variant = EstimatorVariant::alg3;
    PlannerParams planner;
    RhwRule rhw;
    std::uint64_t mc_fixed_n = 0;
    std::uint64_t trials = 100;
    std::uint64_t master_seed = 1;
    std::uint64_t grid_seed = 1;
    unsigned int workers = 0;
    GroundTruthConfig ground_truth;
    CompareConfig compare;
    // Per-sample trace destination for trial 0 of the first controller;
    // set from the CLI verbosity flag, never from the config file.
    std::string trace_path;

    void validate() const;
};

DistributionPtr parse_distribution(const nlohmann::json& spec);
ControllerSpec parse_controller(const nlohmann::json& spec);

// base_dir resolves relative paths referenced by the config (label files,
// truth cache).
CampaignConfig parse_campaign_config(const nlohmann::json& doc, const std::string& base_dir);
CampaignConfig load_campaign_config(const std::string& path);

} // namespace reprisk

#endif
