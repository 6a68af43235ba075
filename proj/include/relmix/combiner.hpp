#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace relmix::combine {

struct CombineParams {
    double lambda = 0.0;
    double m = 0.25;
    double s = 0.05;
    double lambdaPrime = 0.0;
    double mPrime = 0.19;
    double sPrime = 0.05;
    double xi = 0.55;

    /// Throws DomainError unless s, s' > 0, lambda, lambda' >= 0, xi in [0, 1], all finite.
    void validate() const;

    friend bool operator==(const CombineParams&, const CombineParams&) = default;
};

enum class Param { Lambda, M, S, LambdaPrime, MPrime, SPrime, Xi };
inline constexpr std::array<Param, 7> kAllParams = {Param::Lambda, Param::M,      Param::S, Param::LambdaPrime,
                                                    Param::MPrime, Param::SPrime, Param::Xi};

/// File key of a parameter ("lambda", "m_prime", ...).
std::string_view keyOf(Param p);
std::optional<Param> paramFromKey(std::string_view key);
double get(const CombineParams& p, Param which);
void set(CombineParams& p, Param which, double value);

/// 1 / (1 + exp(-(x - m) / s)); requires s > 0.
double sigmoid(double x, double m, double s);

/// esa * (1 + lambda * sigmoid(wnp, m, s)).
double ew(double esa, double wnp, const CombineParams& p);
/// ew * (1 + lambda' * sigmoid(cxi, m', s')).
double ewc(double esa, double wnp, double cxi, const CombineParams& p);

/// Shortest decimal that parses back to the same double.
std::string formatDouble(double v);
/// Whole string must be a finite number.
double parseDouble(std::string_view s);

/// `key=value` lines in a fixed order; parsing back yields an identical struct.
void writeParams(const CombineParams& p, std::ostream& out);
/// Unknown keys are errors; missing keys keep their defaults.
CombineParams readParams(std::istream& in, const std::string& sourceName = "<params>");
void saveParams(const CombineParams& p, const std::string& path);
CombineParams loadParams(const std::string& path);

struct Bounds {
    CombineParams lower;
    CombineParams upper;

    static Bounds defaults();
};

struct TuneOptions {
    /// Extra starting points drawn uniformly inside the bounds.
    unsigned restarts = 8;
    std::uint64_t seed = 42;
    /// First step size, as a fraction of each parameter's range.
    double initialStep = 0.25;
    /// Search on a start ends once the step fraction falls below this.
    double tolerance = 1e-5;
    unsigned maxEvaluations = 200000;
    /// Parameters to search over; the rest stay at their initial values.
    std::array<bool, 7> active = {true, true, true, true, true, true, true};
};

struct TuneResult {
    CombineParams params;
    double score = 0.0;
    double initialScore = 0.0;
    unsigned evaluations = 0;
};

using ScoreFn = std::function<double(const CombineParams&)>;

/// Coordinate ascent: each active parameter is moved by +-step (clamped to
/// the bounds) and the move kept on strict improvement; the step halves
/// after a sweep without progress. Repeated from the initial point and from
/// `restarts` seeded random points. Non-finite scores are treated as worse
/// than any finite score. The returned score is never below the initial one.
TuneResult tune(const ScoreFn& score, const CombineParams& initial, const Bounds& bounds,
                const TuneOptions& options = {});

}  // namespace relmix::combine
