#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "reprisk/config.hpp"
#include "reprisk/errors.hpp"
#include "reprisk/harness.hpp"
#include "reprisk/planner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitPlannerInfeasible = 3;
constexpr int kExitBudgetExhausted = 4;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::uint64_t> grid_seed_override;
    std::optional<unsigned int> workers_override;
    std::string out_dir = "out";
    bool verbose = false;
};

reprisk::CampaignConfig load_config(const CommonOptions& opts) {
    reprisk::CampaignConfig config = reprisk::load_campaign_config(opts.config_path);
    if (opts.seed_override) config.master_seed = *opts.seed_override;
    if (opts.grid_seed_override) config.grid_seed = *opts.grid_seed_override;
    if (opts.workers_override) config.workers = *opts.workers_override;
    return config;
}

int cmd_plan(const CommonOptions& opts) {
    const reprisk::CampaignConfig config = load_config(opts);
    if (!config.q) throw reprisk::InputError("plan: config must define 'q'");
    nlohmann::ordered_json out;
    const reprisk::BudgetPlan plan =
        reprisk::plan_budget(*config.p, *config.q, config.planner);
    out["kl"] = plan.kl;
    out["c"] = plan.c;
    out["n"] = plan.n;
    out["feasible"] = plan.feasible;
    out["lhs_at_c"] = plan.lhs_at_c;
    out["repeatability_failure_prob"] =
        reprisk::repeatability_failure_prob(plan.n, config.planner.tau);
    const reprisk::RoundingGrid grid =
        reprisk::make_grid(config.planner, reprisk::GridVariant::alg3, config.grid_seed);
    out["alpha"] = grid.alpha;
    if (config.planner.beta - 2.0 * config.planner.epsilon > 0.0)
        out["direct_n"] = reprisk::direct_sample_size(config.planner);
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_truth(const CommonOptions& opts) {
    const reprisk::CampaignConfig config = load_config(opts);
    if (config.ground_truth.mode == reprisk::GroundTruthConfig::Mode::disabled)
        throw reprisk::InputError("truth: ground_truth is disabled in this config");
    const bool pendulum = config.subject.kind == reprisk::SubjectConfig::Kind::pendulum;
    const std::size_t count = pendulum ? config.subject.controllers.size() : 1;
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const auto truth = reprisk::campaign_ground_truth(config, i);
        nlohmann::ordered_json entry;
        entry["controller"] =
            pendulum ? config.subject.controller_names[i] : std::string("categorical");
        entry["r_star"] = truth->r_star;
        entry["resolution"] = truth->resolution;
        entry["points_evaluated"] = truth->points_evaluated;
        out.push_back(std::move(entry));
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_run(const CommonOptions& opts) {
    reprisk::CampaignConfig config = load_config(opts);
    std::filesystem::create_directories(opts.out_dir);
    if (opts.verbose) config.trace_path = opts.out_dir + "/trace_trial0.csv";
    const reprisk::CampaignSummary summary = reprisk::run_campaign(config);

    for (const auto& c : summary.controllers) {
        const std::string base = opts.out_dir + "/trials_" + c.controller;
        reprisk::write_trials_csv(base + ".csv", c.trials);
        reprisk::write_timing_csv(opts.out_dir + "/timing_" + c.controller + ".csv", c.trials);
        if (opts.verbose) {
            std::cerr << "controller " << c.controller << ": modal output "
                      << c.outputs.modal_output << " (share " << c.outputs.modal_share
                      << "), samples [" << c.min_samples << ", " << c.max_samples << "]\n";
        }
        for (const auto& w : c.warnings) std::cerr << "warning: " << w << '\n';
    }
    const nlohmann::ordered_json report = reprisk::summary_to_json(config, summary);
    reprisk::write_summary_json(opts.out_dir + "/summary.json", report);
    std::cout << report.dump(2) << '\n';
    return summary.budget_exhausted ? kExitBudgetExhausted : kExitOk;
}

int cmd_compare(const CommonOptions& opts) {
    const reprisk::CampaignConfig config = load_config(opts);
    const std::vector<reprisk::CompareCell> cells = reprisk::compare_variants(config);
    std::filesystem::create_directories(opts.out_dir);
    const std::string path = opts.out_dir + "/compare.csv";
    reprisk::write_compare_csv(path, cells);
    std::cout << "wrote " << path << " (" << cells.size() << " cells)\n";
    for (const auto& c : cells) {
        std::cout << "tau=" << c.tau << " r_bar=" << c.r_bar;
        if (c.alg3_feasible) std::cout << " alg3_n=" << c.alg3_n;
        else std::cout << " alg3=planner-diverged";
        std::cout << " direct_n=" << c.direct_n << '\n';
    }
    return kExitOk;
}

int cmd_report(const std::string& dir, std::optional<double> r_star) {
    namespace fs = std::filesystem;
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("trials_", 0) == 0 && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw reprisk::InputError("report: no trials_*.csv under " + dir);
    for (const auto& path : files) {
        std::string controller = path.stem().string().substr(7);
        auto result = reprisk::aggregate_trials(controller,
                                                reprisk::read_trials_csv(path.string()), r_star);
        nlohmann::ordered_json cj;
        cj["controller"] = result.controller;
        cj["modal_output"] = result.outputs.modal_output;
        cj["modal_share"] = result.outputs.modal_share;
        cj["pairwise_equal_rate"] = result.outputs.pairwise_equal_rate;
        cj["distinct_outputs"] = result.outputs.distinct_outputs;
        if (result.max_abs_error) cj["max_abs_error"] = *result.max_abs_error;
        cj["min_samples"] = result.min_samples;
        cj["max_samples"] = result.max_samples;
        cj["mean_samples"] = result.mean_samples;
        cj["sample_count_cv"] = result.sample_count_cv;
        cj["all_terminated"] = result.all_terminated;
        out.push_back(std::move(cj));
    }
    reprisk::write_summary_json(dir + "/report.json", out);
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Repeatable and reliable importance-sampling risk estimation"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::uint64_t seed = 0;
    std::uint64_t grid_seed = 0;
    unsigned int workers = 0;
    std::string report_dir;
    std::optional<double> report_r_star;
    double r_star_value = 0.0;

    const auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", opts.config_path, "Campaign config file (JSON)");
        if (needs_config) c->required();
        cmd->add_option("--seed", seed, "Override master_seed")
            ->each([&](const std::string&) { opts.seed_override = seed; });
        cmd->add_option("--grid-seed", grid_seed, "Override grid_seed")
            ->each([&](const std::string&) { opts.grid_seed_override = grid_seed; });
        cmd->add_option("--workers", workers, "Worker thread count (0 = hardware)")
            ->each([&](const std::string&) { opts.workers_override = workers; });
        cmd->add_option("--out", opts.out_dir, "Output directory");
        cmd->add_flag("--verbose", opts.verbose, "Progress and warning chatter on stderr");
    };

    auto* plan = app.add_subcommand("plan", "Print the budget plan for the configured (p, q)");
    add_common(plan, true);
    auto* truth = app.add_subcommand("truth", "Compute or load cached ground-truth risk");
    add_common(truth, true);
    auto* run = app.add_subcommand("run", "Run a campaign and write report files");
    add_common(run, true);
    auto* compare = app.add_subcommand("compare", "Sweep the two planners over (tau, r_bar)");
    add_common(compare, true);
    auto* report = app.add_subcommand("report", "Re-aggregate statistics from trials CSVs");
    report->add_option("--in", report_dir, "Directory holding trials_*.csv")->required();
    report->add_option("--r-star", r_star_value, "Ground-truth risk for the error column")
        ->each([&](const std::string&) { report_r_star = r_star_value; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed()) return cmd_plan(opts);
        if (truth->parsed()) return cmd_truth(opts);
        if (run->parsed()) return cmd_run(opts);
        if (compare->parsed()) return cmd_compare(opts);
        if (report->parsed()) return cmd_report(report_dir, report_r_star);
    } catch (const reprisk::PlannerDivergedError& e) {
        std::cerr << "planner infeasible: " << e.what() << '\n';
        return kExitPlannerInfeasible;
    } catch (const reprisk::BudgetExhaustedError& e) {
        std::cerr << "budget exhausted: " << e.what() << '\n';
        return kExitBudgetExhausted;
    } catch (const reprisk::InputError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
