#ifndef REPRISK_ORACLE_HPP
#define REPRISK_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "reprisk/distributions.hpp"
#include "reprisk/subjects.hpp"

namespace reprisk {

// Exhaustively enumerated risk over a discretized 1-D sample space.
struct GroundTruth {
    double r_star = 0.0;
    double resolution = 0.0;
    std::uint64_t points_evaluated = 0;
    std::vector<std::uint8_t> failure_set; // one flag per grid cell
};

// Evaluates the failure predicate at every cell center of p's support
// (centers at lower + (k + 0.5) * resolution), weights by the renormalized
// cell p-mass, and reduces in index order so the result is bit-stable for
// any worker count.
GroundTruth enumerate_risk(const FailurePredicate& failure, const Distribution& p,
                           double resolution, unsigned int workers = 0);

// Exact dot product of failure labels and outcome probabilities.
double exact_risk_categorical(const CategoricalSubject& subject, const Categorical& p);

// Cache round-trip for enumerated ground truths, keyed by a caller-supplied
// string describing (subject, controller, p, resolution).
std::string ground_truth_cache_path(const std::string& cache_dir, const std::string& key);
bool load_ground_truth(const std::string& path, GroundTruth& out);
void save_ground_truth(const std::string& path, const GroundTruth& truth);

// FNV-1a hash used to key cache files.
std::uint64_t fnv1a64(const std::string& text);

} // namespace reprisk

#endif
