#include "reprisk/oracle.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reprisk/errors.hpp"
#include "reprisk/parallel.hpp"

namespace reprisk {

GroundTruth enumerate_risk(const FailurePredicate& failure, const Distribution& p,
                           double resolution, unsigned int workers) {
    if (p.is_discrete())
        throw InputError("enumerate_risk: sample space must be continuous");
    if (!(resolution > 0.0))
        throw InputError("enumerate_risk: resolution must be > 0");
    const double lower = p.support_lower();
    const double upper = p.support_upper();
    const double span = upper - lower;
    if (resolution > span)
        throw InputError("enumerate_risk: resolution larger than the support");
    const auto cells = static_cast<std::uint64_t>(std::llround(span / resolution));
    if (cells < 1 || std::abs(static_cast<double>(cells) * resolution - span) > resolution)
        throw InputError("enumerate_risk: resolution must divide the support to within one cell");

    GroundTruth truth;
    truth.resolution = resolution;
    truth.points_evaluated = cells;
    truth.failure_set.assign(cells, 0);

    parallel_for_indexed(cells, workers, [&](std::size_t i) {
        const double center = lower + (static_cast<double>(i) + 0.5) * resolution;
        truth.failure_set[i] = failure(center) ? 1 : 0;
    });

    // Index-ordered reduction; masses renormalized so they sum to one.
    double total_mass = 0.0;
    double failure_mass = 0.0;
    for (std::uint64_t i = 0; i < cells; ++i) {
        const double center = lower + (static_cast<double>(i) + 0.5) * resolution;
        const double mass = p.density(center) * resolution;
        total_mass += mass;
        if (truth.failure_set[i]) failure_mass += mass;
    }
    if (!(total_mass > 0.0))
        throw InputError("enumerate_risk: the discretized law carries no mass");
    truth.r_star = failure_mass / total_mass;
    return truth;
}

double exact_risk_categorical(const CategoricalSubject& subject, const Categorical& p) {
    subject.validate_against(p);
    double r = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (subject.failure_labels[i]) r += p.probabilities()[i];
    return r;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string ground_truth_cache_path(const std::string& cache_dir, const std::string& key) {
    std::ostringstream os;
    os << cache_dir << "/truth_" << std::hex << fnv1a64(key) << ".json";
    return os.str();
}

bool load_ground_truth(const std::string& path, GroundTruth& out) {
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json j;
    in >> j;
    out.r_star = j.at("r_star").get<double>();
    out.resolution = j.at("resolution").get<double>();
    out.points_evaluated = j.at("points_evaluated").get<std::uint64_t>();
    const std::string bits = j.at("failure_set").get<std::string>();
    out.failure_set.assign(bits.size(), 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        out.failure_set[i] = bits[i] == '1' ? 1 : 0;
    return out.failure_set.size() == out.points_evaluated;
}

void save_ground_truth(const std::string& path, const GroundTruth& truth) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::string bits(truth.failure_set.size(), '0');
    for (std::size_t i = 0; i < truth.failure_set.size(); ++i)
        if (truth.failure_set[i]) bits[i] = '1';
    nlohmann::ordered_json j;
    j["r_star"] = truth.r_star;
    j["resolution"] = truth.resolution;
    j["points_evaluated"] = truth.points_evaluated;
    j["failure_set"] = bits;
    std::ofstream out(path);
    if (!out) throw InputError("save_ground_truth: cannot open " + path);
    out << j.dump(2) << '\n';
}

} // namespace reprisk
