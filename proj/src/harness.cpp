#include "reprisk/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "reprisk/errors.hpp"
#include "reprisk/parallel.hpp"

namespace reprisk {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

double pairwise_equal_rate(const std::vector<double>& outputs) {
    if (outputs.empty()) throw InputError("pairwise_equal_rate: empty output list");
    const std::size_t n = outputs.size();
    if (n == 1) return 1.0;
    std::vector<double> sorted = outputs;
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t equal_pairs = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && sorted[j] == sorted[i]) ++j;
        const std::uint64_t run = j - i;
        equal_pairs += run * (run - 1) / 2;
        i = j;
    }
    const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    return static_cast<double>(equal_pairs) / static_cast<double>(total_pairs);
}

OutputStats compute_output_stats(const std::vector<double>& outputs) {
    OutputStats stats;
    stats.pairwise_equal_rate = pairwise_equal_rate(outputs);
    std::vector<double> sorted = outputs;
    std::sort(sorted.begin(), sorted.end());
    std::size_t best_run = 0;
    double best_value = sorted.front();
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const std::size_t run = j - i;
        ++stats.distinct_outputs;
        if (run > best_run) { // ties keep the smallest value
            best_run = run;
            best_value = sorted[i];
        }
        i = j;
    }
    stats.modal_output = best_value;
    stats.modal_share = static_cast<double>(best_run) / static_cast<double>(sorted.size());
    return stats;
}

std::optional<GroundTruth> campaign_ground_truth(const CampaignConfig& config,
                                                 std::size_t controller_index) {
    switch (config.ground_truth.mode) {
        case GroundTruthConfig::Mode::disabled:
            return std::nullopt;
        case GroundTruthConfig::Mode::exact: {
            const auto& law = static_cast<const Categorical&>(*config.p);
            GroundTruth truth;
            truth.r_star = exact_risk_categorical(config.subject.categorical, law);
            truth.resolution = 0.0;
            truth.points_evaluated = law.size();
            truth.failure_set = config.subject.categorical.failure_labels;
            return truth;
        }
        case GroundTruthConfig::Mode::enumerate: {
            const auto& subject = config.subject.pendulum;
            const auto& controller = config.subject.controllers.at(controller_index);
            std::string cache_path;
            if (!config.ground_truth.cache_dir.empty()) {
                std::ostringstream key;
                const auto& pp = subject.params;
                key.precision(17);
                key << "pendulum;" << pp.length << ';' << pp.mass << ';' << pp.friction << ';'
                    << pp.gravity << ';' << pp.dt << ';' << pp.horizon << ';' << pp.fail_angle
                    << ';' << subject.disturbance_lower << ';' << subject.disturbance_upper
                    << ';' << config.subject.controller_names.at(controller_index) << ';';
                std::visit([&](const auto& c) {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, PidGains>) {
                        key << "pid," << c.kp << ',' << c.ki << ',' << c.kd;
                    } else if constexpr (std::is_same_v<T, LqrWeights>) {
                        key << "lqr," << c.q_theta << ',' << c.q_omega << ',' << c.r;
                    } else {
                        key << "nmpc," << c.horizon_steps << ',' << c.dt << ',' << c.iterations
                            << ',' << c.step_size << ',' << c.control_period_steps << ','
                            << c.q_theta << ',' << c.q_omega << ',' << c.r;
                    }
                }, controller);
                key << ';' << config.p->describe() << ';' << config.ground_truth.resolution;
                cache_path = ground_truth_cache_path(config.ground_truth.cache_dir, key.str());
                GroundTruth cached;
                if (load_ground_truth(cache_path, cached)) return cached;
            }
            GroundTruth truth = enumerate_risk(make_failure_predicate(subject, controller),
                                               *config.p, config.ground_truth.resolution,
                                               config.workers);
            if (!cache_path.empty()) save_ground_truth(cache_path, truth);
            return truth;
        }
    }
    return std::nullopt;
}

namespace {

struct VariantSetup {
    TerminationRule rule;
    bool importance = false;
    bool rounds = false;
    RoundingGrid grid;
};

VariantSetup make_setup(const CampaignConfig& config, CampaignSummary& summary) {
    VariantSetup setup;
    switch (config.variant) {
        case EstimatorVariant::mc:
            setup.rule = TerminationRule::fixed(config.mc_fixed_n);
            break;
        case EstimatorVariant::is_rhw:
            setup.rule = TerminationRule::relative_half_width(config.rhw);
            setup.importance = true;
            break;
        case EstimatorVariant::alg3: {
            const BudgetPlan plan = plan_budget(*config.p, *config.q, config.planner);
            summary.plan = plan;
            summary.planned_n = plan.n;
            setup.rule = TerminationRule::fixed(plan.n);
            setup.importance = true;
            setup.rounds = true;
            setup.grid = make_grid(config.planner, GridVariant::alg3, config.grid_seed);
            summary.grid = setup.grid;
            break;
        }
        case EstimatorVariant::direct_sq: {
            const std::uint64_t n = direct_sample_size(config.planner);
            summary.planned_n = n;
            setup.rule = TerminationRule::fixed(n);
            setup.importance = config.q != nullptr;
            setup.rounds = true;
            setup.grid = make_grid(config.planner, GridVariant::direct, config.grid_seed);
            summary.grid = setup.grid;
            break;
        }
    }
    return setup;
}

TrialRecord run_one_trial(const CampaignConfig& config, const VariantSetup& setup,
                          const FailurePredicate& failure, std::size_t controller_index,
                          std::uint64_t trial_index) {
    TrialRecord record;
    record.trial_index = trial_index;
    record.seed = derive_seed(config.master_seed,
                              {static_cast<std::uint64_t>(controller_index), trial_index,
                               static_cast<std::uint64_t>(StreamLabel::trial_sampling)});
    SeededStream rng(record.seed);

    std::ofstream trace_file;
    std::ostream* trace = nullptr;
    if (!config.trace_path.empty() && controller_index == 0 && trial_index == 0) {
        trace_file.open(config.trace_path);
        if (!trace_file) throw InputError("run_campaign: cannot open trace " + config.trace_path);
        trace_file << "index,x,weight,indicator,running_value\n";
        trace = &trace_file;
    }

    const auto start = std::chrono::steady_clock::now();
    const RiskEstimate estimate =
        setup.importance
            ? run_importance_sampling(failure, *config.p, *config.q, setup.rule, rng, trace)
            : run_monte_carlo(failure, *config.p, setup.rule, rng, trace);
    const auto stop = std::chrono::steady_clock::now();

    record.raw_estimate = estimate.value;
    record.sample_count = estimate.sample_count;
    record.failure_count = estimate.failure_count;
    record.terminated = estimate.terminated;
    record.wall_seconds = std::chrono::duration<double>(stop - start).count();
    if (setup.rounds) {
        const RoundedEstimate rounded = round_estimate(estimate.value, setup.grid);
        record.has_rounded = true;
        record.rounded_value = rounded.value;
        record.interval_index = rounded.interval_index;
    }
    return record;
}

} // namespace

ControllerCampaignResult aggregate_trials(const std::string& controller,
                                          std::vector<TrialRecord> trials,
                                          std::optional<double> r_star) {
    if (trials.empty()) throw InputError("aggregate_trials: no trials");
    ControllerCampaignResult result;
    result.controller = controller;

    std::vector<double> outputs;
    outputs.reserve(trials.size());
    double sum_samples = 0.0;
    result.min_samples = trials.front().sample_count;
    result.max_samples = trials.front().sample_count;
    for (const auto& t : trials) {
        outputs.push_back(t.has_rounded ? t.rounded_value : t.raw_estimate);
        result.min_samples = std::min(result.min_samples, t.sample_count);
        result.max_samples = std::max(result.max_samples, t.sample_count);
        sum_samples += static_cast<double>(t.sample_count);
        result.all_terminated = result.all_terminated && t.terminated;
    }
    result.outputs = compute_output_stats(outputs);
    result.mean_samples = sum_samples / static_cast<double>(trials.size());
    if (trials.size() > 1) {
        double ss = 0.0;
        for (const auto& t : trials) {
            const double d = static_cast<double>(t.sample_count) - result.mean_samples;
            ss += d * d;
        }
        const double sample_std = std::sqrt(ss / (static_cast<double>(trials.size()) - 1.0));
        result.sample_count_cv = result.mean_samples > 0.0 ? sample_std / result.mean_samples : 0.0;
    }
    if (r_star) {
        result.r_star = r_star;
        double worst = 0.0;
        for (double out : outputs) worst = std::max(worst, std::abs(out - *r_star));
        result.max_abs_error = worst;
    }
    result.trials = std::move(trials);
    return result;
}

CampaignSummary run_campaign(const CampaignConfig& config) {
    config.validate();
    CampaignSummary summary;
    summary.variant = config.variant;
    const VariantSetup setup = make_setup(config, summary);

    const bool pendulum = config.subject.kind == SubjectConfig::Kind::pendulum;
    const std::size_t controller_count = pendulum ? config.subject.controllers.size() : 1;

    for (std::size_t ci = 0; ci < controller_count; ++ci) {
        const std::string name =
            pendulum ? config.subject.controller_names[ci] : std::string("categorical");
        const FailurePredicate failure =
            pendulum ? make_failure_predicate(config.subject.pendulum,
                                              config.subject.controllers[ci])
                     : make_failure_predicate(config.subject.categorical);

        std::vector<TrialRecord> trials(config.trials);
        parallel_for_indexed(config.trials, config.workers, [&](std::size_t ti) {
            trials[ti] = run_one_trial(config, setup, failure, ci,
                                       static_cast<std::uint64_t>(ti));
        });

        const std::optional<GroundTruth> truth = campaign_ground_truth(config, ci);
        std::optional<double> r_star;
        if (truth) r_star = truth->r_star;
        ControllerCampaignResult result = aggregate_trials(name, std::move(trials), r_star);

        const bool planned = config.variant == EstimatorVariant::alg3 ||
                             config.variant == EstimatorVariant::direct_sq;
        if (planned) {
            for (const auto& t : result.trials)
                if (t.sample_count != *summary.planned_n)
                    throw SimulationError("run_campaign: trial sample count deviates from plan");
            if (r_star && *r_star > config.planner.r_bar) {
                std::ostringstream os;
                os << "ground-truth risk " << *r_star << " exceeds the planner's r_bar "
                   << config.planner.r_bar << "; the planned budget certificate does not cover "
                   << "this subject";
                result.warnings.push_back(os.str());
            }
            double max_raw = 0.0;
            for (const auto& t : result.trials) max_raw = std::max(max_raw, t.raw_estimate);
            if (max_raw > config.planner.r_bar) {
                std::ostringstream os;
                os << "observed raw estimate " << max_raw << " exceeds r_bar "
                   << config.planner.r_bar;
                result.warnings.push_back(os.str());
            }
        }
        summary.budget_exhausted = summary.budget_exhausted || !result.all_terminated;
        summary.controllers.push_back(std::move(result));
    }
    return summary;
}

std::vector<CompareCell> compare_variants(const CampaignConfig& config) {
    if (config.compare.taus.empty() || config.compare.r_bars.empty())
        throw InputError("compare_variants: config needs a 'compare' block with taus and r_bars");
    if (!config.q) throw InputError("compare_variants: requires 'q'");

    std::vector<CompareCell> cells;
    for (double tau : config.compare.taus) {
        for (double r_bar : config.compare.r_bars) {
            CompareCell cell;
            cell.tau = tau;
            cell.r_bar = r_bar;

            PlannerParams params;
            params.beta = config.compare.beta;
            params.tau = tau;
            params.r_bar = r_bar;
            params.c_step = config.compare.c_step;
            params.epsilon = config.compare.epsilon;

            cell.direct_n = direct_sample_size(params);
            try {
                const BudgetPlan plan = plan_budget(*config.p, *config.q, params);
                cell.alg3_feasible = true;
                cell.alg3_c = plan.c;
                cell.alg3_n = plan.n;
            } catch (const PlannerDivergedError& e) {
                cell.alg3_feasible = false;
                cell.note = e.what();
            }

            if (config.ground_truth.mode != GroundTruthConfig::Mode::disabled &&
                config.compare.trials_per_cell > 0) {
                const std::optional<GroundTruth> truth = campaign_ground_truth(config, 0);
                const bool pendulum = config.subject.kind == SubjectConfig::Kind::pendulum;
                const FailurePredicate failure =
                    pendulum ? make_failure_predicate(config.subject.pendulum,
                                                      config.subject.controllers[0])
                             : make_failure_predicate(config.subject.categorical);
                const auto measure = [&](GridVariant variant,
                                         std::uint64_t n) -> double {
                    const RoundingGrid grid = make_grid(params, variant, config.grid_seed);
                    const TerminationRule rule = TerminationRule::fixed(n);
                    double worst = 0.0;
                    for (std::uint64_t t = 0; t < config.compare.trials_per_cell; ++t) {
                        SeededStream rng(derive_seed(
                            config.master_seed,
                            {static_cast<std::uint64_t>(variant == GridVariant::alg3 ? 1 : 2), t,
                             static_cast<std::uint64_t>(StreamLabel::trial_sampling)}));
                        const RiskEstimate est = run_importance_sampling(
                            failure, *config.p, *config.q, rule, rng);
                        const RoundedEstimate rounded = round_estimate(est.value, grid);
                        worst = std::max(worst, std::abs(rounded.value - truth->r_star));
                    }
                    return worst;
                };
                if (cell.alg3_feasible) cell.alg3_abs_error = measure(GridVariant::alg3, cell.alg3_n);
                cell.direct_abs_error = measure(GridVariant::direct, cell.direct_n);
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& trials) {
    std::ofstream out(path);
    if (!out) throw InputError("write_trials_csv: cannot open " + path);
    out << "trial_index,seed,raw_estimate,rounded_value,interval_index,"
           "sample_count,failure_count,terminated\n";
    for (const auto& t : trials) {
        out << t.trial_index << ',' << t.seed << ',' << format_double(t.raw_estimate) << ',';
        if (t.has_rounded) out << format_double(t.rounded_value) << ',' << t.interval_index;
        else out << ',';
        out << ',' << t.sample_count << ',' << t.failure_count << ','
            << (t.terminated ? 1 : 0) << '\n';
    }
}

std::vector<TrialRecord> read_trials_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("read_trials_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("read_trials_csv: empty file " + path);
    std::vector<TrialRecord> trials;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        while (fields.size() < 8) fields.emplace_back();
        TrialRecord t;
        t.trial_index = std::stoull(fields[0]);
        t.seed = std::stoull(fields[1]);
        t.raw_estimate = std::strtod(fields[2].c_str(), nullptr);
        if (!fields[3].empty()) {
            t.has_rounded = true;
            t.rounded_value = std::strtod(fields[3].c_str(), nullptr);
            t.interval_index = std::stoll(fields[4]);
        }
        t.sample_count = std::stoull(fields[5]);
        t.failure_count = std::stoull(fields[6]);
        t.terminated = fields[7] == "1";
        trials.push_back(t);
    }
    return trials;
}

void write_timing_csv(const std::string& path, const std::vector<TrialRecord>& trials) {
    std::ofstream out(path);
    if (!out) throw InputError("write_timing_csv: cannot open " + path);
    out << "trial_index,wall_seconds\n";
    for (const auto& t : trials)
        out << t.trial_index << ',' << format_double(t.wall_seconds) << '\n';
}

void write_compare_csv(const std::string& path, const std::vector<CompareCell>& cells) {
    std::ofstream out(path);
    if (!out) throw InputError("write_compare_csv: cannot open " + path);
    out << "tau,r_bar,alg3_feasible,alg3_c,alg3_n,direct_n,alg3_abs_error,"
           "direct_abs_error,note\n";
    for (const auto& c : cells) {
        out << format_double(c.tau) << ',' << format_double(c.r_bar) << ','
            << (c.alg3_feasible ? 1 : 0) << ',';
        if (c.alg3_feasible) out << format_double(c.alg3_c) << ',' << c.alg3_n;
        else out << ',';
        out << ',' << c.direct_n << ',';
        if (c.alg3_abs_error) out << format_double(*c.alg3_abs_error);
        out << ',';
        if (c.direct_abs_error) out << format_double(*c.direct_abs_error);
        out << ',' << c.note << '\n';
    }
}

nlohmann::ordered_json summary_to_json(const CampaignConfig& config,
                                       const CampaignSummary& summary) {
    nlohmann::ordered_json j;
    j["variant"] = variant_name(summary.variant);
    j["trials"] = config.trials;
    j["master_seed"] = config.master_seed;
    j["grid_seed"] = config.grid_seed;
    if (summary.plan) {
        j["plan"] = {{"kl", summary.plan->kl},
                     {"c", summary.plan->c},
                     {"n", summary.plan->n},
                     {"feasible", summary.plan->feasible},
                     {"lhs_at_c", summary.plan->lhs_at_c}};
    }
    if (summary.planned_n) j["planned_n"] = *summary.planned_n;
    if (summary.grid) {
        j["grid"] = {{"alpha", summary.grid->alpha}, {"alpha0", summary.grid->alpha0}};
    }
    j["budget_exhausted"] = summary.budget_exhausted;
    j["controllers"] = nlohmann::ordered_json::array();
    for (const auto& c : summary.controllers) {
        nlohmann::ordered_json cj;
        cj["controller"] = c.controller;
        cj["modal_output"] = c.outputs.modal_output;
        cj["modal_share"] = c.outputs.modal_share;
        cj["pairwise_equal_rate"] = c.outputs.pairwise_equal_rate;
        cj["distinct_outputs"] = c.outputs.distinct_outputs;
        if (c.r_star) cj["r_star"] = *c.r_star;
        if (c.max_abs_error) cj["max_abs_error"] = *c.max_abs_error;
        cj["min_samples"] = c.min_samples;
        cj["max_samples"] = c.max_samples;
        cj["mean_samples"] = c.mean_samples;
        cj["sample_count_cv"] = c.sample_count_cv;
        cj["all_terminated"] = c.all_terminated;
        cj["warnings"] = c.warnings;
        j["controllers"].push_back(std::move(cj));
    }
    return j;
}

void write_summary_json(const std::string& path, const nlohmann::ordered_json& summary) {
    std::ofstream out(path);
    if (!out) throw InputError("write_summary_json: cannot open " + path);
    out << summary.dump(2) << '\n';
}

} // namespace reprisk
