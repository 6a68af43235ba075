#include "relmix/svr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "relmix/combiner.hpp"
#include "relmix/error.hpp"
#include "relmix/evaluation.hpp"

namespace relmix::svr {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void checkRows(std::span<const FeatureRow> rows) {
    if (rows.empty()) throw DomainError("SVR needs training rows");
    const auto d = rows.front().features.size();
    for (const auto& r : rows) {
        if (r.features.size() != d) throw DomainError("SVR rows differ in feature count");
        if (!std::isfinite(r.target)) throw DomainError("SVR target not finite");
        for (double v : r.features)
            if (!std::isfinite(v)) throw DomainError("SVR feature not finite");
    }
}

// Solver for  min 1/2 a'Qa + p'a  s.t. y'a = 0, 0 <= a <= C  over 2l variables,
// with a[i] = alpha_i (y = +1) and a[i + l] = alpha*_i (y = -1).
class Solver {
public:
    Solver(const std::vector<std::vector<double>>& K, std::span<const double> z, double C, double eps)
        : K_(K), l_(z.size()), C_(C), alpha_(2 * l_, 0.0), G_(2 * l_), p_(2 * l_), y_(2 * l_) {
        for (std::size_t i = 0; i < l_; ++i) {
            p_[i] = eps - z[i];
            p_[i + l_] = eps + z[i];
            y_[i] = 1;
            y_[i + l_] = -1;
        }
        G_ = p_;
    }

    TrainInfo solve(double tolerance, std::uint64_t maxIterations) {
        TrainInfo info;
        info.converged = false;
        while (info.iterations < maxIterations) {
            std::size_t i = 0, j = 0;
            double gap = 0;
            if (!select(i, j, gap, tolerance)) {
                info.kktGap = gap;
                info.converged = true;
                break;
            }
            update(i, j);
            ++info.iterations;
        }
        if (!info.converged) {
            std::size_t i = 0, j = 0;
            select(i, j, info.kktGap, tolerance);
        }
        double obj = 0;
        for (std::size_t t = 0; t < 2 * l_; ++t) obj += alpha_[t] * (G_[t] + p_[t]);
        info.objective = obj / 2;
        return info;
    }

    std::vector<double> beta() const {
        std::vector<double> b(l_);
        for (std::size_t i = 0; i < l_; ++i) b[i] = alpha_[i] - alpha_[i + l_];
        return b;
    }

    double rho() const {
        double ub = kInf, lb = -kInf, sumFree = 0;
        std::size_t free = 0;
        for (std::size_t t = 0; t < 2 * l_; ++t) {
            const double yG = y_[t] * G_[t];
            if (upper(t)) {
                if (y_[t] == -1) ub = std::min(ub, yG);
                else lb = std::max(lb, yG);
            } else if (lower(t)) {
                if (y_[t] == 1) ub = std::min(ub, yG);
                else lb = std::max(lb, yG);
            } else {
                ++free;
                sumFree += yG;
            }
        }
        return free > 0 ? sumFree / static_cast<double>(free) : (ub + lb) / 2;
    }

private:
    double Q(std::size_t a, std::size_t b) const { return y_[a] * y_[b] * K_[a % l_][b % l_]; }
    bool upper(std::size_t t) const { return alpha_[t] >= C_; }
    bool lower(std::size_t t) const { return alpha_[t] <= 0; }
    bool inUp(std::size_t t) const { return y_[t] == 1 ? !upper(t) : !lower(t); }
    bool inLow(std::size_t t) const { return y_[t] == 1 ? !lower(t) : !upper(t); }

    bool select(std::size_t& outI, std::size_t& outJ, double& gap, double tolerance) const {
        double gmax = -kInf, gmax2 = -kInf;
        std::size_t i = 2 * l_;
        for (std::size_t t = 0; t < 2 * l_; ++t)
            if (inUp(t) && -y_[t] * G_[t] >= gmax) {
                gmax = -y_[t] * G_[t];
                i = t;
            }
        std::size_t j = 2 * l_;
        double objMin = kInf;
        for (std::size_t t = 0; t < 2 * l_; ++t) {
            if (!inLow(t)) continue;
            gmax2 = std::max(gmax2, y_[t] * G_[t]);
            if (i == 2 * l_) continue;
            const double b = gmax + y_[t] * G_[t];
            if (b <= 0) continue;
            double a = Q(i, i) + Q(t, t) - 2.0 * y_[i] * y_[t] * Q(i, t);
            if (a <= 0) a = kTau;
            const double obj = -(b * b) / a;
            if (obj <= objMin) {
                objMin = obj;
                j = t;
            }
        }
        gap = gmax + gmax2;
        if (gap < tolerance || i == 2 * l_ || j == 2 * l_) return false;
        outI = i;
        outJ = j;
        return true;
    }

    void update(std::size_t i, std::size_t j) {
        const double oldI = alpha_[i], oldJ = alpha_[j];
        const double Qij = Q(i, j);
        if (y_[i] != y_[j]) {
            double quad = Q(i, i) + Q(j, j) + 2 * Qij;
            if (quad <= 0) quad = kTau;
            const double delta = (-G_[i] - G_[j]) / quad;
            const double diff = alpha_[i] - alpha_[j];
            alpha_[i] += delta;
            alpha_[j] += delta;
            if (diff > 0) {
                if (alpha_[j] < 0) {
                    alpha_[j] = 0;
                    alpha_[i] = diff;
                }
            } else if (alpha_[i] < 0) {
                alpha_[i] = 0;
                alpha_[j] = -diff;
            }
            if (diff > 0) {
                if (alpha_[i] > C_) {
                    alpha_[i] = C_;
                    alpha_[j] = C_ - diff;
                }
            } else if (alpha_[j] > C_) {
                alpha_[j] = C_;
                alpha_[i] = C_ + diff;
            }
        } else {
            double quad = Q(i, i) + Q(j, j) - 2 * Qij;
            if (quad <= 0) quad = kTau;
            const double delta = (G_[i] - G_[j]) / quad;
            const double sum = alpha_[i] + alpha_[j];
            alpha_[i] -= delta;
            alpha_[j] += delta;
            if (sum > C_) {
                if (alpha_[i] > C_) {
                    alpha_[i] = C_;
                    alpha_[j] = sum - C_;
                }
            } else if (alpha_[j] < 0) {
                alpha_[j] = 0;
                alpha_[i] = sum;
            }
            if (sum > C_) {
                if (alpha_[j] > C_) {
                    alpha_[j] = C_;
                    alpha_[i] = sum - C_;
                }
            } else if (alpha_[i] < 0) {
                alpha_[i] = 0;
                alpha_[j] = sum;
            }
        }
        const double dI = alpha_[i] - oldI, dJ = alpha_[j] - oldJ;
        for (std::size_t t = 0; t < 2 * l_; ++t) G_[t] += Q(t, i) * dI + Q(t, j) * dJ;
    }

    const std::vector<std::vector<double>>& K_;
    std::size_t l_;
    double C_;
    std::vector<double> alpha_, G_, p_;
    std::vector<int> y_;
};

}  // namespace

Scaling Scaling::fit(std::span<const FeatureRow> rows) {
    checkRows(rows);
    const auto d = rows.front().features.size();
    const auto n = static_cast<double>(rows.size());
    Scaling s;
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    for (std::size_t f = 0; f < d; ++f) {
        double sum = 0;
        for (const auto& r : rows) sum += r.features[f];
        const double mean = sum / n;
        double ss = 0;
        for (const auto& r : rows) ss += (r.features[f] - mean) * (r.features[f] - mean);
        const double sd = std::sqrt(ss / n);
        s.mean[f] = mean;
        s.scale[f] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
    }
    return s;
}

std::vector<double> Scaling::apply(std::span<const double> x) const {
    if (x.size() != mean.size())
        throw DomainError("expected " + std::to_string(mean.size()) + " features, got " + std::to_string(x.size()));
    std::vector<double> out(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) out[f] = (x[f] - mean[f]) / scale[f];
    return out;
}

double polyKernel(std::span<const double> u, std::span<const double> v, unsigned degree) {
    double d = 1.0;
    for (std::size_t i = 0; i < u.size(); ++i) d += u[i] * v[i];
    double r = 1.0;
    for (unsigned k = 0; k < degree; ++k) r *= d;
    return r;
}

SvrModel trainSvr(std::span<const FeatureRow> rows, const SvrParams& params, TrainInfo* info) {
    checkRows(rows);
    if (params.degree < 1) throw DomainError("kernel degree must be at least 1");
    if (!(params.C > 0)) throw DomainError("C must be positive");
    if (!(params.epsilon >= 0)) throw DomainError("epsilon must be non-negative");
    if (rows.size() < 2) throw DomainError("SVR needs at least two rows");

    SvrModel model;
    model.degree = params.degree;
    model.C = params.C;
    model.epsilon = params.epsilon;
    model.scaling = Scaling::fit(rows);

    const double first = rows.front().target;
    if (std::all_of(rows.begin(), rows.end(), [&](const FeatureRow& r) { return r.target == first; })) {
        model.bias = first;
        if (info) *info = TrainInfo{};
        return model;
    }

    const std::size_t l = rows.size();
    std::vector<std::vector<double>> x(l);
    std::vector<double> z(l);
    for (std::size_t i = 0; i < l; ++i) {
        x[i] = model.scaling.apply(rows[i].features);
        z[i] = rows[i].target;
    }
    std::vector<std::vector<double>> K(l, std::vector<double>(l));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j <= i; ++j) K[i][j] = K[j][i] = polyKernel(x[i], x[j], params.degree);

    Solver solver(K, z, params.C, params.epsilon);
    const auto trained = solver.solve(params.tolerance, params.maxIterations);
    if (info) *info = trained;
    const auto beta = solver.beta();
    model.bias = -solver.rho();
    for (std::size_t i = 0; i < l; ++i) {
        if (beta[i] == 0.0) continue;
        model.supportVectors.push_back(x[i]);
        model.coefficients.push_back(beta[i]);
    }
    return model;
}

double predict(const SvrModel& model, std::span<const double> features) {
    const auto x = model.scaling.apply(features);
    double f = model.bias;
    for (std::size_t s = 0; s < model.supportVectors.size(); ++s)
        f += model.coefficients[s] * polyKernel(model.supportVectors[s], x, model.degree);
    return f;
}

// ---------------------------------------------------------------- model file

namespace {

void writeRow(std::ostream& out, std::string_view tag, std::span<const double> v) {
    out << tag;
    for (double d : v) out << ' ' << combine::formatDouble(d);
    out << '\n';
}

}  // namespace

void writeModel(const SvrModel& m, std::ostream& out) {
    out << "relmix-svr 1\n";
    for (const auto& [k, v] : m.metadata) out << "meta " << k << ' ' << v << '\n';
    out << "degree " << m.degree << '\n';
    out << "C " << combine::formatDouble(m.C) << '\n';
    out << "epsilon " << combine::formatDouble(m.epsilon) << '\n';
    out << "features " << m.featureCount() << '\n';
    writeRow(out, "mean", m.scaling.mean);
    writeRow(out, "scale", m.scaling.scale);
    out << "bias " << combine::formatDouble(m.bias) << '\n';
    out << "support " << m.supportVectors.size() << '\n';
    for (std::size_t s = 0; s < m.supportVectors.size(); ++s) {
        out << combine::formatDouble(m.coefficients[s]);
        for (double d : m.supportVectors[s]) out << ' ' << combine::formatDouble(d);
        out << '\n';
    }
}

SvrModel readModel(std::istream& in, const std::string& sourceName) {
    SvrModel m;
    std::string line;
    std::uint64_t lineNo = 0;
    auto next = [&](std::string_view expected) -> std::istringstream {
        while (std::getline(in, line)) {
            ++lineNo;
            if (!line.empty()) break;
        }
        if (!in) throw ParseError(sourceName, lineNo, "unexpected end of model, wanted '" + std::string(expected) + "'");
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (!expected.empty() && tag != expected)
            throw ParseError(sourceName, lineNo, "expected '" + std::string(expected) + "', found '" + tag + "'");
        return ss;
    };
    auto number = [&](std::istringstream& ss) {
        std::string tok;
        if (!(ss >> tok)) throw ParseError(sourceName, lineNo, "missing number");
        try {
            return combine::parseDouble(tok);
        } catch (const Error& e) {
            throw ParseError(sourceName, lineNo, e.what());
        }
    };
    auto header = next("relmix-svr");
    if (number(header) != 1) throw ParseError(sourceName, lineNo, "unsupported model version");
    auto ss = next("");
    ss.seekg(0);
    std::string tag;
    ss >> tag;
    while (tag == "meta") {
        std::string k, v;
        ss >> k;
        std::getline(ss >> std::ws, v);
        m.metadata[k] = v;
        ss = next("");
        ss.seekg(0);
        ss >> tag;
    }
    if (tag != "degree") throw ParseError(sourceName, lineNo, "expected 'degree'");
    m.degree = static_cast<unsigned>(number(ss));
    auto sc = next("C");
    m.C = number(sc);
    auto se = next("epsilon");
    m.epsilon = number(se);
    auto sf = next("features");
    const auto d = static_cast<std::size_t>(number(sf));
    auto sm = next("mean");
    for (std::size_t f = 0; f < d; ++f) m.scaling.mean.push_back(number(sm));
    auto ssc = next("scale");
    for (std::size_t f = 0; f < d; ++f) m.scaling.scale.push_back(number(ssc));
    auto sb = next("bias");
    m.bias = number(sb);
    auto sn = next("support");
    const auto n = static_cast<std::size_t>(number(sn));
    for (std::size_t s = 0; s < n; ++s) {
        while (std::getline(in, line)) {
            ++lineNo;
            if (!line.empty()) break;
        }
        if (!in) throw ParseError(sourceName, lineNo, "missing support vector");
        std::istringstream row(line);
        const double coef = number(row);
        if (std::abs(coef) > m.C * (1 + 1e-12)) throw ParseError(sourceName, lineNo, "coefficient exceeds C");
        m.coefficients.push_back(coef);
        std::vector<double> v;
        for (std::size_t f = 0; f < d; ++f) v.push_back(number(row));
        m.supportVectors.push_back(std::move(v));
    }
    return m;
}

void saveModel(const SvrModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    writeModel(model, out);
}

SvrModel loadModel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model " + path);
    return readModel(in, path);
}

// ---------------------------------------------------------------- cross-validation

std::vector<std::size_t> shuffledIndices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        // Unbiased draw from [0, i) by rejection.
        const std::uint64_t bound = i;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r = rng();
        while (r >= limit) r = rng();
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(r % bound)]);
    }
    return idx;
}

CvResult crossValidate(std::span<const FeatureRow> rows, const SvrParams& params, const CvOptions& options) {
    checkRows(rows);
    const std::size_t n = rows.size();
    if (options.folds < 2) throw DomainError("cross-validation needs at least two folds");
    if (options.folds > n) throw DomainError("more folds than rows");
    const auto order = shuffledIndices(n, options.seed);

    CvResult r;
    r.predictions.assign(n, 0.0);
    r.foldOf.assign(n, 0);
    for (std::size_t f = 0; f < options.folds; ++f) {
        const std::size_t begin = f * n / options.folds, end = (f + 1) * n / options.folds;
        std::vector<FeatureRow> train;
        train.reserve(n - (end - begin));
        for (std::size_t p = 0; p < n; ++p)
            if (p < begin || p >= end) train.push_back(rows[order[p]]);
        TrainInfo info;
        const auto model = trainSvr(train, params, &info);
        r.foldScaling.push_back(model.scaling);
        r.foldInfo.push_back(info);
        for (std::size_t p = begin; p < end; ++p) {
            r.foldOf[order[p]] = f;
            r.predictions[order[p]] = predict(model, rows[order[p]].features);
        }
    }
    std::vector<double> targets;
    for (const auto& row : rows) targets.push_back(row.target);
    r.rho = eval::spearman(r.predictions, targets);
    return r;
}

}  // namespace relmix::svr
