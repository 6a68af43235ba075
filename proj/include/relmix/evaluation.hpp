#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace relmix::eval {

struct WordPair {
    std::string w1;
    std::string w2;
    double gold = 0.0;

    friend bool operator==(const WordPair&, const WordPair&) = default;
};

struct TestSet {
    std::vector<WordPair> pairs;
    /// (first, later) row indices of pairs repeated irrespective of order and case.
    std::vector<std::pair<std::size_t, std::size_t>> duplicates;
};

/// `word1<TAB>word2<TAB>score` rows; a first line whose score field is not a
/// number is taken as a header. With `dedupe`, only the first occurrence of a
/// repeated pair is kept (duplicates are still reported).
TestSet loadTestSet(std::istream& in, const std::string& sourceName = "<testset>", bool dedupe = false);
TestSet loadTestSetFile(const std::string& path, bool dedupe = false);

/// Fractional ranks starting at 1; tied values share their average rank.
std::vector<double> averageRanks(std::span<const double> xs);

/// Pearson correlation of average ranks. Throws DomainError on length
/// mismatch, n < 2, or a constant argument.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// Entry i is rho without pair i minus rho of the full set.
std::vector<double> leaveOneOutStability(std::span<const double> scores, std::span<const double> golds);

struct RemovalPoint {
    std::size_t removed = 0;
    double rho = 0.0;
};

/// rho after dropping the k lowest-scoring pairs (ties by input order), k = 0..n-3.
std::vector<RemovalPoint> progressiveRemoval(std::span<const double> scores, std::span<const double> golds);

struct LowessOptions {
    double span = 2.0 / 3.0;
    unsigned iterations = 3;
};

/// Robust locally weighted linear regression: each x is fitted over the
/// int(span * n) nearest points in x with tricube weights, then refitted
/// `iterations` times with bisquare weights on residuals scaled by six times
/// their median. Fitted values are returned in input order.
std::vector<double> lowess(std::span<const double> xs, std::span<const double> ys, const LowessOptions& options = {});

using ScoreFn = std::function<double(const WordPair&)>;

struct EvalOptions {
    /// Drop pairs whose scoring throws instead of failing the run.
    bool skipFailures = false;
};

struct SkippedPair {
    std::size_t index = 0;
    std::string reason;
};

struct EvalReport {
    /// Pairs actually evaluated, in test-set order.
    std::vector<WordPair> pairs;
    std::vector<double> scores;
    double rho = 0.0;
    std::vector<double> stability;
    std::vector<RemovalPoint> removalCurve;
    std::vector<SkippedPair> skipped;
};

/// Scores every pair once, then computes rho, leave-one-out stability and
/// the removal curve.
EvalReport evaluateMeasure(std::span<const WordPair> pairs, const ScoreFn& score, const EvalOptions& options = {});

/// Quotes a CSV field when needed.
std::string csvField(const std::string& s);

/// `pair,score,gold,delta_rho`
void writeStabilityCsv(const EvalReport& report, std::ostream& out);
/// `k,rho`
void writeRemovalCsv(const EvalReport& report, std::ostream& out);
/// `x,y,yhat`
void writeLowessCsv(std::span<const double> xs, std::span<const double> ys, std::span<const double> yhat,
                    std::ostream& out);

struct PlotSpec {
    std::string title;
    std::string xLabel;
    std::string yLabel;
};

/// Scatter plot with an optional fitted line (drawn through the points sorted by x).
void writeScatterSvg(std::ostream& out, std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> line, const PlotSpec& spec);

}  // namespace relmix::eval
