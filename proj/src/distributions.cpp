#include "reprisk/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "reprisk/errors.hpp"

namespace reprisk {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// Composite Simpson on a uniform grid; panels must be even.
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < panels; i += 2) odd += f(a + i * h);
    for (int i = 2; i < panels; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

double gaussian_pdf(double x, double mean, double std) {
    const double z = (x - mean) / std;
    return kInvSqrt2Pi / std * std::exp(-0.5 * z * z);
}

} // namespace

// ---------------------------------------------------------------------------
// Uniform1D

Uniform1D::Uniform1D(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!(lower < upper)) throw InputError("Uniform1D: lower must be < upper");
    height_ = 1.0 / (upper - lower);
}

double Uniform1D::density(SamplePoint x) const {
    return (x >= lower_ && x <= upper_) ? height_ : 0.0;
}

SamplePoint Uniform1D::draw(SeededStream& rng) const {
    return rng.uniform(lower_, upper_);
}

std::string Uniform1D::describe() const {
    std::ostringstream os;
    os << "uniform(" << lower_ << "," << upper_ << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// TruncatedNormal1D

TruncatedNormal1D::TruncatedNormal1D(double mean, double std, double lower, double upper)
    : mean_(mean), std_(std), lower_(lower), upper_(upper) {
    if (!(std > 0.0)) throw InputError("TruncatedNormal1D: std must be > 0");
    if (!(lower < upper)) throw InputError("TruncatedNormal1D: lower must be < upper");
    normalizer_ = simpson([&](double x) { return gaussian_pdf(x, mean, std); },
                          lower, upper, kDefaultQuadraturePanels);
    if (!(normalizer_ > 0.0))
        throw InputError("TruncatedNormal1D: support carries no mass");
}

double TruncatedNormal1D::density(SamplePoint x) const {
    if (x < lower_ || x > upper_) return 0.0;
    return gaussian_pdf(x, mean_, std_) / normalizer_;
}

SamplePoint TruncatedNormal1D::draw(SeededStream& rng) const {
    // Rejection from the untruncated Gaussian. Fine for the supports used
    // here; guarded against pathological far-tail truncations.
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const double x = mean_ + std_ * rng.standard_normal();
        if (x >= lower_ && x <= upper_) return x;
    }
    throw InputError("TruncatedNormal1D::draw: acceptance region too small for rejection sampling");
}

std::string TruncatedNormal1D::describe() const {
    std::ostringstream os;
    os << "truncated_normal(" << mean_ << "," << std_ << ",[" << lower_ << "," << upper_ << "])";
    return os.str();
}

// ---------------------------------------------------------------------------
// Categorical

Categorical::Categorical(std::vector<double> probabilities)
    : probabilities_(std::move(probabilities)) {
    if (probabilities_.empty()) throw InputError("Categorical: empty probability vector");
    double total = 0.0;
    for (double p : probabilities_) {
        if (p < 0.0) throw InputError("Categorical: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InputError("Categorical: probabilities must sum to 1 within 1e-12");
}

double Categorical::density(SamplePoint x) const {
    const auto idx = static_cast<long long>(std::llround(x));
    if (idx < 0 || idx >= static_cast<long long>(probabilities_.size()))
        throw InputError("Categorical::density: index out of range");
    return probabilities_[static_cast<std::size_t>(idx)];
}

SamplePoint Categorical::draw(SeededStream& rng) const {
    const double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probabilities_.size(); ++i) {
        cum += probabilities_[i];
        if (u < cum) return static_cast<double>(i);
    }
    return static_cast<double>(probabilities_.size() - 1);
}

std::string Categorical::describe() const {
    std::ostringstream os;
    os << "categorical(k=" << probabilities_.size() << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Mixture1D

Mixture1D::Mixture1D(std::vector<DistributionPtr> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
    if (components_.empty() || components_.size() != weights_.size())
        throw InputError("Mixture1D: components/weights size mismatch");
    double total = 0.0;
    for (double w : weights_) {
        if (w < 0.0) throw InputError("Mixture1D: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InputError("Mixture1D: weights must sum to 1 within 1e-12");
    lower_ = std::numeric_limits<double>::infinity();
    upper_ = -std::numeric_limits<double>::infinity();
    for (const auto& c : components_) {
        if (!c || c->is_discrete())
            throw InputError("Mixture1D: components must be continuous laws");
        lower_ = std::min(lower_, c->support_lower());
        upper_ = std::max(upper_, c->support_upper());
    }
}

double Mixture1D::density(SamplePoint x) const {
    double d = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i)
        d += weights_[i] * components_[i]->density(x);
    return d;
}

SamplePoint Mixture1D::draw(SeededStream& rng) const {
    const double u = rng.uniform01();
    double cum = 0.0;
    std::size_t pick = components_.size() - 1;
    for (std::size_t i = 0; i + 1 < components_.size(); ++i) {
        cum += weights_[i];
        if (u < cum) { pick = i; break; }
    }
    return components_[pick]->draw(rng);
}

std::string Mixture1D::describe() const {
    std::ostringstream os;
    os << "mixture(k=" << components_.size() << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// KL divergence

namespace {

double kl_categorical(const Categorical& p, const Categorical& q) {
    if (p.size() != q.size())
        throw InputError("kl_divergence: categorical dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p.probabilities()[i];
        if (pi == 0.0) continue;
        const double qi = q.probabilities()[i];
        if (qi == 0.0)
            throw AbsoluteContinuityError("kl_divergence: p positive where q is zero");
        d += pi * std::log(pi / qi);
    }
    return d;
}

} // namespace

double kl_divergence(const Distribution& p, const Distribution& q, int panels) {
    if (p.is_discrete() != q.is_discrete())
        throw InputError("kl_divergence: mixed discrete/continuous pair");
    if (p.is_discrete()) {
        return kl_categorical(static_cast<const Categorical&>(p),
                              static_cast<const Categorical&>(q));
    }
    if (panels < 2 || panels % 2 != 0)
        throw InputError("kl_divergence: panel count must be a positive even number");
    const double a = p.support_lower();
    const double b = p.support_upper();
    const auto integrand = [&](double x) {
        const double pd = p.density(x);
        if (pd == 0.0) return 0.0;
        const double qd = q.density(x);
        if (qd == 0.0)
            throw AbsoluteContinuityError("kl_divergence: p positive where q is zero");
        return pd * std::log(pd / qd);
    };
    return simpson(integrand, a, b, panels);
}

// ---------------------------------------------------------------------------
// Log-ratio tail

LogRatioTail::LogRatioTail(const Distribution& p, const Distribution& q, int panels) {
    if (p.is_discrete() != q.is_discrete())
        throw InputError("tail_prob_log_ratio: mixed discrete/continuous pair");

    std::vector<std::pair<double, double>> entries; // (log ratio, p-mass)
    if (p.is_discrete()) {
        const auto& pc = static_cast<const Categorical&>(p);
        const auto& qc = static_cast<const Categorical&>(q);
        if (pc.size() != qc.size())
            throw InputError("tail_prob_log_ratio: categorical dimension mismatch");
        entries.reserve(pc.size());
        for (std::size_t i = 0; i < pc.size(); ++i) {
            const double pi = pc.probabilities()[i];
            if (pi == 0.0) continue; // measure zero under p
            const double qi = qc.probabilities()[i];
            if (qi == 0.0)
                throw AbsoluteContinuityError("tail_prob_log_ratio: p positive where q is zero");
            entries.emplace_back(std::log(pi / qi), pi);
        }
    } else {
        if (panels < 1)
            throw InputError("tail_prob_log_ratio: panel count must be positive");
        const double a = p.support_lower();
        const double b = p.support_upper();
        const double h = (b - a) / panels;
        entries.reserve(static_cast<std::size_t>(panels));
        for (int i = 0; i < panels; ++i) {
            const double x = a + (i + 0.5) * h;
            const double pd = p.density(x);
            if (pd == 0.0) continue;
            const double qd = q.density(x);
            if (qd == 0.0)
                throw AbsoluteContinuityError("tail_prob_log_ratio: p positive where q is zero");
            entries.emplace_back(std::log(pd / qd), pd * h);
        }
    }

    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& l, const auto& r) { return l.first > r.first; });

    log_ratios_.reserve(entries.size());
    prefix_mass_.reserve(entries.size() + 1);
    prefix_mass_.push_back(0.0);
    double running = 0.0;
    for (const auto& [lr, mass] : entries) {
        log_ratios_.push_back(lr);
        running += mass;
        prefix_mass_.push_back(running);
    }
    total_mass_ = running;
}

double LogRatioTail::prob_greater(double threshold) const {
    if (total_mass_ <= 0.0) return 0.0;
    // First index whose log ratio is <= threshold; everything before it is
    // strictly greater.
    const auto it = std::lower_bound(log_ratios_.begin(), log_ratios_.end(), threshold,
                                     [](double lr, double t) { return lr > t; });
    const auto idx = static_cast<std::size_t>(it - log_ratios_.begin());
    return prefix_mass_[idx] / total_mass_;
}

double tail_prob_log_ratio(const Distribution& p, const Distribution& q,
                           double threshold, int panels) {
    return LogRatioTail(p, q, panels).prob_greater(threshold);
}

} // namespace reprisk
