#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "relmix/combiner.hpp"
#include "relmix/error.hpp"

namespace relmix::combine {

namespace {

constexpr double kWorst = -std::numeric_limits<double>::infinity();

class Search {
public:
    Search(const ScoreFn& fn, const Bounds& b, const TuneOptions& o) : fn_(fn), bounds_(b), options_(o) {}

    double evaluate(const CombineParams& p) {
        ++evaluations_;
        double v = kWorst;
        try {
            p.validate();
            v = fn_(p);
        } catch (const DomainError&) {
            v = kWorst;
        }
        return std::isfinite(v) ? v : kWorst;
    }

    bool exhausted() const { return evaluations_ >= options_.maxEvaluations; }
    unsigned evaluations() const { return evaluations_; }

    std::pair<CombineParams, double> climb(CombineParams x, double fx) {
        double frac = options_.initialStep;
        while (frac >= options_.tolerance && !exhausted()) {
            bool improved = false;
            for (auto which : kAllParams) {
                const auto i = static_cast<std::size_t>(which);
                if (!options_.active[i]) continue;
                const double lo = get(bounds_.lower, which), hi = get(bounds_.upper, which);
                const double step = frac * (hi - lo);
                if (!(step > 0)) continue;
                for (double dir : {+1.0, -1.0}) {
                    if (exhausted()) break;
                    const double cur = get(x, which);
                    const double cand = std::clamp(cur + dir * step, lo, hi);
                    if (cand == cur) continue;
                    CombineParams y = x;
                    set(y, which, cand);
                    const double fy = evaluate(y);
                    if (fy > fx) {
                        x = y;
                        fx = fy;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) frac *= 0.5;
        }
        return {x, fx};
    }

private:
    const ScoreFn& fn_;
    const Bounds& bounds_;
    const TuneOptions& options_;
    unsigned evaluations_ = 0;
};

}  // namespace

Bounds Bounds::defaults() {
    Bounds b;
    b.lower = CombineParams{0.0, 0.0, 0.005, 0.0, 0.0, 0.005, 0.0};
    b.upper = CombineParams{100.0, 1.0, 0.5, 100.0, 1.0, 0.5, 1.0};
    return b;
}

TuneResult tune(const ScoreFn& score, const CombineParams& initial, const Bounds& bounds, const TuneOptions& options) {
    for (auto which : kAllParams)
        if (get(bounds.lower, which) > get(bounds.upper, which))
            throw DomainError("tuning bounds inverted for " + std::string(keyOf(which)));
    if (!(options.initialStep > 0) || !(options.tolerance > 0)) throw DomainError("tuning steps must be positive");

    Search search(score, bounds, options);
    TuneResult result;
    result.initialScore = search.evaluate(initial);
    auto [bestX, bestF] = search.climb(initial, result.initialScore);

    std::mt19937_64 rng(options.seed);
    for (unsigned r = 0; r < options.restarts && !search.exhausted(); ++r) {
        CombineParams start = initial;
        for (auto which : kAllParams) {
            const auto i = static_cast<std::size_t>(which);
            if (!options.active[i]) continue;
            // Top 53 bits as a fraction in [0, 1), the same on every standard library.
            const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const double lo = get(bounds.lower, which), hi = get(bounds.upper, which);
            set(start, which, lo + unit * (hi - lo));
        }
        auto [x, f] = search.climb(start, search.evaluate(start));
        // Restarts replace the incumbent only on a strictly higher score, so
        // ties resolve to the earliest start.
        if (f > bestF) {
            bestX = x;
            bestF = f;
        }
    }
    result.params = bestX;
    result.score = bestF;
    result.evaluations = search.evaluations();
    return result;
}

}  // namespace relmix::combine
