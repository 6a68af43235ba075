#include "relmix/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "relmix/combiner.hpp"
#include "relmix/error.hpp"

namespace relmix::eval {

namespace {

std::vector<std::string_view> splitTabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return out;
}

std::string trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0 || sbb <= 0) throw DomainError("Spearman rho undefined: constant ranks");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

template <typename Keep>
double rhoSubset(std::span<const double> scores, std::span<const double> golds, Keep keep) {
    std::vector<double> xs, ys;
    xs.reserve(scores.size());
    ys.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (keep(i)) {
            xs.push_back(scores[i]);
            ys.push_back(golds[i]);
        }
    return spearman(xs, ys);
}

}  // namespace

TestSet loadTestSet(std::istream& in, const std::string& sourceName, bool dedupe) {
    TestSet set;
    std::map<std::pair<std::string, std::string>, std::size_t> seen;
    std::string line;
    std::uint64_t lineNo = 0;
    bool firstContent = true;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trimmed(line).empty()) continue;
        const auto fields = splitTabs(line);
        if (fields.size() < 3) throw ParseError(sourceName, lineNo, "expected word1<TAB>word2<TAB>score");
        double gold = 0;
        try {
            gold = combine::parseDouble(fields[2]);
        } catch (const Error&) {
            if (firstContent) {
                firstContent = false;
                continue;  // header
            }
            throw ParseError(sourceName, lineNo, "bad score '" + std::string(fields[2]) + "'");
        }
        firstContent = false;
        WordPair p{trimmed(fields[0]), trimmed(fields[1]), gold};
        if (p.w1.empty() || p.w2.empty()) throw ParseError(sourceName, lineNo, "empty word");
        auto a = lower(p.w1), b = lower(p.w2);
        if (b < a) std::swap(a, b);
        auto [it, fresh] = seen.emplace(std::make_pair(a, b), row);
        if (!fresh) {
            set.duplicates.emplace_back(it->second, row);
            ++row;
            if (dedupe) continue;
            set.pairs.push_back(std::move(p));
            continue;
        }
        ++row;
        set.pairs.push_back(std::move(p));
    }
    if (set.pairs.empty()) throw ParseError(sourceName, lineNo, "test set is empty");
    return set;
}

TestSet loadTestSetFile(const std::string& path, bool dedupe) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open test set " + path);
    return loadTestSet(in, path, dedupe);
}

std::vector<double> averageRanks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DomainError("Spearman rho needs equal-length inputs");
    if (xs.size() < 2) throw DomainError("Spearman rho needs at least two points");
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::isnan(xs[i]) || std::isnan(ys[i])) throw DomainError("Spearman rho input contains NaN");
    const auto rx = averageRanks(xs);
    const auto ry = averageRanks(ys);
    return pearson(rx, ry);
}

std::vector<double> leaveOneOutStability(std::span<const double> scores, std::span<const double> golds) {
    if (scores.size() != golds.size()) throw DomainError("scores and golds differ in length");
    if (scores.size() < 3) throw DomainError("stability needs at least three pairs");
    const double all = spearman(scores, golds);
    std::vector<double> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        out[i] = rhoSubset(scores, golds, [i](std::size_t j) { return j != i; }) - all;
    return out;
}

std::vector<RemovalPoint> progressiveRemoval(std::span<const double> scores, std::span<const double> golds) {
    if (scores.size() != golds.size()) throw DomainError("scores and golds differ in length");
    if (scores.size() < 3) throw DomainError("removal curve needs at least three pairs");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
    std::vector<bool> removed(scores.size(), false);
    std::vector<RemovalPoint> curve;
    for (std::size_t k = 0; k + 3 <= scores.size(); ++k) {
        if (k > 0) removed[order[k - 1]] = true;
        curve.push_back({k, rhoSubset(scores, golds, [&](std::size_t j) { return !removed[j]; })});
    }
    return curve;
}

EvalReport evaluateMeasure(std::span<const WordPair> pairs, const ScoreFn& score, const EvalOptions& options) {
    EvalReport r;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        double v = 0;
        try {
            v = score(pairs[i]);
            if (!std::isfinite(v)) throw DomainError("non-finite score");
        } catch (const std::exception& e) {
            if (!options.skipFailures)
                throw Error("scoring failed for pair " + std::to_string(i + 1) + " (" + pairs[i].w1 + ", " +
                            pairs[i].w2 + "): " + e.what());
            r.skipped.push_back({i, e.what()});
            continue;
        }
        r.pairs.push_back(pairs[i]);
        r.scores.push_back(v);
    }
    std::vector<double> golds;
    for (const auto& p : r.pairs) golds.push_back(p.gold);
    r.rho = spearman(r.scores, golds);
    r.stability = leaveOneOutStability(r.scores, golds);
    r.removalCurve = progressiveRemoval(r.scores, golds);
    return r;
}

std::string csvField(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void writeStabilityCsv(const EvalReport& report, std::ostream& out) {
    out << "pair,score,gold,delta_rho\n";
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        const auto& p = report.pairs[i];
        out << csvField(p.w1 + "/" + p.w2) << ',' << combine::formatDouble(report.scores[i]) << ','
            << combine::formatDouble(p.gold) << ',' << combine::formatDouble(report.stability[i]) << '\n';
    }
}

void writeRemovalCsv(const EvalReport& report, std::ostream& out) {
    out << "k,rho\n";
    for (const auto& pt : report.removalCurve) out << pt.removed << ',' << combine::formatDouble(pt.rho) << '\n';
}

void writeLowessCsv(std::span<const double> xs, std::span<const double> ys, std::span<const double> yhat,
                    std::ostream& out) {
    if (xs.size() != ys.size() || xs.size() != yhat.size()) throw Error("lowess columns differ in length");
    out << "x,y,yhat\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << combine::formatDouble(xs[i]) << ',' << combine::formatDouble(ys[i]) << ','
            << combine::formatDouble(yhat[i]) << '\n';
}

}  // namespace relmix::eval
