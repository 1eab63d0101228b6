#ifndef REPRISK_HARNESS_HPP
#define REPRISK_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "reprisk/config.hpp"
#include "reprisk/oracle.hpp"
#include "reprisk/rounding.hpp"

namespace reprisk {

// One estimator execution. Wall time is kept for the timing side-file only;
// the deterministic report artifacts never contain it.
struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::uint64_t seed = 0;
    double raw_estimate = 0.0;
    bool has_rounded = false;
    double rounded_value = 0.0;
    std::int64_t interval_index = 0;
    std::uint64_t sample_count = 0;
    std::uint64_t failure_count = 0;
    bool terminated = true;
    double wall_seconds = 0.0;
};

struct OutputStats {
    double modal_output = 0.0;
    double modal_share = 0.0;        // empirical repeat rate
    double pairwise_equal_rate = 0.0;
    std::uint64_t distinct_outputs = 0;
};

// Fraction of unordered pairs with bit-equal outputs; 1.0 for a single
// output (vacuously repeatable).
double pairwise_equal_rate(const std::vector<double>& outputs);
OutputStats compute_output_stats(const std::vector<double>& outputs);

struct ControllerCampaignResult {
    std::string controller;
    std::vector<TrialRecord> trials;
    OutputStats outputs;
    std::optional<double> r_star;
    std::optional<double> max_abs_error; // vs r_star, over final outputs
    std::uint64_t min_samples = 0;
    std::uint64_t max_samples = 0;
    double mean_samples = 0.0;
    double sample_count_cv = 0.0; // sample std / mean
    bool all_terminated = true;
    std::vector<std::string> warnings;
};

struct CampaignSummary {
    EstimatorVariant variant = EstimatorVariant::alg3;
    std::optional<BudgetPlan> plan;          // alg3
    std::optional<std::uint64_t> planned_n;  // alg3 and direct_sq
    std::optional<RoundingGrid> grid;        // alg3 and direct_sq
    std::vector<ControllerCampaignResult> controllers;
    bool budget_exhausted = false;
};

// Runs `trials` independent executions of the configured estimator variant
// against every configured controller. Fully reproducible from the config:
// per-trial seeds derive from (master_seed, controller index, trial index)
// and the rounding grid uses grid_seed alone.
CampaignSummary run_campaign(const CampaignConfig& config);

// Ground truth for one controller per the config's mode; enumerated truths
// go through the on-disk cache when a cache_dir is set.
std::optional<GroundTruth> campaign_ground_truth(const CampaignConfig& config,
                                                 std::size_t controller_index);

// One cell of the effort-comparison sweep.
struct CompareCell {
    double tau = 0.0;
    double r_bar = 0.0;
    bool alg3_feasible = false;
    double alg3_c = 0.0;
    std::uint64_t alg3_n = 0;
    std::uint64_t direct_n = 0;
    std::optional<double> alg3_abs_error;
    std::optional<double> direct_abs_error;
    std::string note; // diagnostic for infeasible cells
};

// Sweeps (tau, r_bar) with the config's compare block against the configured
// (p, q, subject); deterministic.
std::vector<CompareCell> compare_variants(const CampaignConfig& config);

// Report artifacts. trials CSV and summary JSON are byte-deterministic for
// a fixed config; timing CSV is measurement and deliberately separate.
void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& trials);
std::vector<TrialRecord> read_trials_csv(const std::string& path);
void write_timing_csv(const std::string& path, const std::vector<TrialRecord>& trials);
void write_compare_csv(const std::string& path, const std::vector<CompareCell>& cells);

nlohmann::ordered_json summary_to_json(const CampaignConfig& config,
                                       const CampaignSummary& summary);
void write_summary_json(const std::string& path, const nlohmann::ordered_json& summary);

// Re-aggregates controller statistics from a trials CSV (the `report`
// subcommand); r_star, when supplied, restores the error column.
ControllerCampaignResult aggregate_trials(const std::string& controller,
                                          std::vector<TrialRecord> trials,
                                          std::optional<double> r_star);

} // namespace reprisk

#endif
