#ifndef REPRISK_DISTRIBUTIONS_HPP
#define REPRISK_DISTRIBUTIONS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "reprisk/rng.hpp"

namespace reprisk {

// One point of the test sample space. All sample spaces in scope are
// one-dimensional: a real disturbance magnitude, or a categorical outcome
// index embedded as a real.
using SamplePoint = double;

// Number of uniform panels used by every deterministic 1-D quadrature in
// this module (composite Simpson for integrals, midpoint masses for tail
// probabilities). Fixed so that budget planning is bit-stable across runs.
inline constexpr int kDefaultQuadraturePanels = 1 << 17;

// Immutable, sampleable, density-evaluable probability law over a 1-D
// sample space. Instances are safe to share across threads; streams are not.
class Distribution {
public:
    virtual ~Distribution() = default;

    virtual double density(SamplePoint x) const = 0;
    virtual SamplePoint draw(SeededStream& rng) const = 0;

    // Continuous laws report their support interval; categorical laws
    // report [0, size) with is_discrete() = true.
    virtual double support_lower() const = 0;
    virtual double support_upper() const = 0;
    virtual bool is_discrete() const = 0;

    virtual std::string describe() const = 0;
};

using DistributionPtr = std::shared_ptr<const Distribution>;

class Uniform1D final : public Distribution {
public:
    Uniform1D(double lower, double upper);

    double density(SamplePoint x) const override;
    SamplePoint draw(SeededStream& rng) const override;
    double support_lower() const override { return lower_; }
    double support_upper() const override { return upper_; }
    bool is_discrete() const override { return false; }
    std::string describe() const override;

private:
    double lower_;
    double upper_;
    double height_;
};

// Gaussian restricted to [lower, upper]. The normalizer is the integral of
// the untruncated density over the support, computed once at construction
// with the module's fixed Simpson rule.
class TruncatedNormal1D final : public Distribution {
public:
    TruncatedNormal1D(double mean, double std, double lower, double upper);

    double density(SamplePoint x) const override;
    SamplePoint draw(SeededStream& rng) const override;
    double support_lower() const override { return lower_; }
    double support_upper() const override { return upper_; }
    bool is_discrete() const override { return false; }
    std::string describe() const override;

    double mean() const { return mean_; }
    double std_dev() const { return std_; }
    double normalizer() const { return normalizer_; }

private:
    double mean_;
    double std_;
    double lower_;
    double upper_;
    double normalizer_;
};

class Categorical final : public Distribution {
public:
    explicit Categorical(std::vector<double> probabilities);

    double density(SamplePoint x) const override;
    SamplePoint draw(SeededStream& rng) const override;
    double support_lower() const override { return 0.0; }
    double support_upper() const override { return static_cast<double>(probabilities_.size()); }
    bool is_discrete() const override { return true; }
    std::string describe() const override;

    std::size_t size() const { return probabilities_.size(); }
    const std::vector<double>& probabilities() const { return probabilities_; }

private:
    std::vector<double> probabilities_;
};

// Finite mixture of continuous 1-D laws.
class Mixture1D final : public Distribution {
public:
    Mixture1D(std::vector<DistributionPtr> components, std::vector<double> weights);

    double density(SamplePoint x) const override;
    SamplePoint draw(SeededStream& rng) const override;
    double support_lower() const override { return lower_; }
    double support_upper() const override { return upper_; }
    bool is_discrete() const override { return false; }
    std::string describe() const override;

private:
    std::vector<DistributionPtr> components_;
    std::vector<double> weights_;
    double lower_;
    double upper_;
};

// D(p||q), expected log-likelihood ratio under p. Exact summation for
// categorical pairs, composite Simpson over p's support for continuous
// pairs; deterministic in both cases. Throws AbsoluteContinuityError where
// p is positive and q is zero.
double kl_divergence(const Distribution& p, const Distribution& q,
                     int panels = kDefaultQuadraturePanels);

// P_{x~p}( log p(x)/q(x) > threshold ). Exact over categorical support;
// dense-midpoint-grid measure for continuous pairs. Monotone non-increasing
// in the threshold by construction.
double tail_prob_log_ratio(const Distribution& p, const Distribution& q,
                           double threshold, int panels = kDefaultQuadraturePanels);

// Precomputed tail function for one (p, q) pair; the planner's c-scan
// evaluates many thresholds against the same pair. prob_greater() agrees
// with tail_prob_log_ratio bit for bit (same grid, same summation order).
class LogRatioTail {
public:
    LogRatioTail(const Distribution& p, const Distribution& q,
                 int panels = kDefaultQuadraturePanels);

    double prob_greater(double threshold) const;

private:
    std::vector<double> log_ratios_;    // descending
    std::vector<double> prefix_mass_;   // prefix_mass_[i] = mass of first i entries
    double total_mass_ = 0.0;
};

} // namespace reprisk

#endif
