#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace relmix::svr {

struct FeatureRow {
    std::vector<double> features;
    double target = 0.0;
};

/// Per-feature standardization; constant features keep scale 1.
struct Scaling {
    std::vector<double> mean;
    std::vector<double> scale;

    static Scaling fit(std::span<const FeatureRow> rows);
    std::vector<double> apply(std::span<const double> x) const;

    friend bool operator==(const Scaling&, const Scaling&) = default;
};

struct SvrParams {
    unsigned degree = 4;
    double C = 1.0;
    double epsilon = 0.1;
    /// Stop when the maximal KKT violation drops below this.
    double tolerance = 1e-3;
    std::uint64_t maxIterations = 10'000'000;
};

struct SvrModel {
    unsigned degree = 4;
    double C = 1.0;
    double epsilon = 0.1;
    Scaling scaling;
    /// Standardized feature vectors of the support vectors.
    std::vector<std::vector<double>> supportVectors;
    /// alpha - alpha* per support vector, each within [-C, C].
    std::vector<double> coefficients;
    double bias = 0.0;
    std::map<std::string, std::string> metadata;

    std::size_t featureCount() const noexcept { return scaling.mean.size(); }
};

struct TrainInfo {
    std::uint64_t iterations = 0;
    /// Maximal KKT violation at exit (m(alpha) - M(alpha) in the usual notation).
    double kktGap = 0.0;
    /// Dual objective 1/2 b'Kb + eps sum|b| - z'b at the solution, with b = alpha - alpha*.
    double objective = 0.0;
    bool converged = true;
};

/// (u.v + 1)^degree
double polyKernel(std::span<const double> u, std::span<const double> v, unsigned degree);

/// Epsilon-insensitive SVR by SMO with second-order working-set selection.
/// Features are standardized with statistics of `rows` alone. Equal targets
/// give a constant model.
SvrModel trainSvr(std::span<const FeatureRow> rows, const SvrParams& params, TrainInfo* info = nullptr);

/// Throws DomainError when the feature count differs from training.
double predict(const SvrModel& model, std::span<const double> features);

void writeModel(const SvrModel& model, std::ostream& out);
SvrModel readModel(std::istream& in, const std::string& sourceName = "<model>");
void saveModel(const SvrModel& model, const std::string& path);
SvrModel loadModel(const std::string& path);

struct CvOptions {
    std::size_t folds = 10;
    std::uint64_t seed = 42;
};

struct CvResult {
    std::vector<double> predictions;  // aligned with the input rows
    std::vector<std::size_t> foldOf;  // test fold of each row
    std::vector<Scaling> foldScaling;  // scaling fitted on each fold's training rows
    std::vector<TrainInfo> foldInfo;
    double rho = 0.0;
};

/// Seeded permutation of 0..n-1 (Fisher-Yates over mt19937_64, independent
/// of the standard library's distribution implementations).
std::vector<std::size_t> shuffledIndices(std::size_t n, std::uint64_t seed);

/// k-fold cross-validation: rows are shuffled, cut into near-equal
/// contiguous folds, and each fold is predicted by a model trained on the
/// others. rho is Spearman of predictions against targets.
CvResult crossValidate(std::span<const FeatureRow> rows, const SvrParams& params, const CvOptions& options = {});

}  // namespace relmix::svr
