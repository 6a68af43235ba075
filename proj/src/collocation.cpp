#include "relmix/collocation.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

#include "relmix/error.hpp"

namespace relmix::collocation {

namespace {

std::string fold(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

template <typename T>
bool parseNumber(std::string_view s, T& v) {
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

struct Row {
    std::string_view ngram;
    int year = 0;
    std::uint64_t count = 0;
};

bool parseRow(std::string_view line, Row& row) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto t1 = line.find('\t');
    if (t1 == std::string_view::npos || t1 == 0) return false;
    auto t2 = line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) return false;
    auto t3 = line.find('\t', t2 + 1);
    row.ngram = line.substr(0, t1);
    return parseNumber(line.substr(t1 + 1, t2 - t1 - 1), row.year) &&
           parseNumber(line.substr(t2 + 1, t3 == std::string_view::npos ? std::string_view::npos : t3 - t2 - 1),
                       row.count);
}

template <typename Accept>
void loadRows(std::istream& in, const LoadOptions& options, LoadDiagnostics* diag, Accept accept) {
    LoadDiagnostics local;
    auto& d = diag ? *diag : local;
    std::string line;
    Row row;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++d.rows;
        if (!parseRow(line, row)) {
            ++d.malformed;
            continue;
        }
        if (row.year <= options.minYear) {
            ++d.tooOld;
            continue;
        }
        switch (accept(row)) {
            case 0: break;
            case 1: ++d.malformed; break;
            default: ++d.outOfVocabulary; break;
        }
    }
}

bool inVocabulary(const LoadOptions& o, const std::string& w) { return !o.vocabulary || o.vocabulary->contains(w); }

}  // namespace

std::uint64_t NgramTable::unigram(std::string_view w) const {
    auto it = unigrams_.find(fold(w));
    return it == unigrams_.end() ? 0 : it->second;
}

std::uint64_t NgramTable::bigram(std::string_view w1, std::string_view w2) const {
    auto it = bigrams_.find(fold(w1) + ' ' + fold(w2));
    return it == bigrams_.end() ? 0 : it->second;
}

void NgramTable::addUnigram(std::string_view w, std::uint64_t count) { unigrams_[fold(w)] += count; }

void NgramTable::addBigram(std::string_view w1, std::string_view w2, std::uint64_t count) {
    bigrams_[fold(w1) + ' ' + fold(w2)] += count;
}

void loadUnigrams(NgramTable& table, std::istream& in, const LoadOptions& options, LoadDiagnostics* diag) {
    loadRows(in, options, diag, [&](const Row& row) {
        if (row.ngram.find(' ') != std::string_view::npos) return 1;
        auto w = fold(row.ngram);
        if (!inVocabulary(options, w)) return 2;
        table.addUnigram(w, row.count);
        return 0;
    });
}

void loadBigrams(NgramTable& table, std::istream& in, const LoadOptions& options, LoadDiagnostics* diag) {
    loadRows(in, options, diag, [&](const Row& row) {
        auto sp = row.ngram.find(' ');
        if (sp == std::string_view::npos || sp == 0 || sp + 1 == row.ngram.size() ||
            row.ngram.find(' ', sp + 1) != std::string_view::npos)
            return 1;
        auto w1 = fold(row.ngram.substr(0, sp));
        auto w2 = fold(row.ngram.substr(sp + 1));
        if (!inVocabulary(options, w1) || !inVocabulary(options, w2)) return 2;
        table.addBigram(w1, w2, row.count);
        return 0;
    });
}

NgramTable loadNgrams(std::istream& unigrams, std::istream& bigrams, const LoadOptions& options,
                      LoadDiagnostics* diag) {
    NgramTable t(options.minYear);
    loadUnigrams(t, unigrams, options, diag);
    loadBigrams(t, bigrams, options, diag);
    return t;
}

CollocationParts collocationParts(const NgramTable& t, std::string_view w1, std::string_view w2) {
    const double denom = static_cast<double>(t.unigram(w1)) + static_cast<double>(t.unigram(w2));
    if (denom <= 0)
        throw DomainError("collocation undefined: no unigram count for '" + std::string(w1) + "' or '" +
                          std::string(w2) + "'");
    return {2.0 * static_cast<double>(t.bigram(w1, w2)) / denom, 2.0 * static_cast<double>(t.bigram(w2, w1)) / denom};
}

double collocationIndex(const NgramTable& t, std::string_view w1, std::string_view w2) {
    return collocationParts(t, w1, w2).direct;
}

double mixedCollocation(const NgramTable& t, std::string_view w1, std::string_view w2, double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("xi must lie in [0, 1]");
    const auto p = collocationParts(t, w1, w2);
    return p.direct + xi * p.inverse;
}

namespace {
void exportSorted(const std::unordered_map<std::string, std::uint64_t>& m, std::ostream& out) {
    std::vector<std::pair<std::string_view, std::uint64_t>> rows(m.begin(), m.end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [k, v] : rows) out << k << '\t' << v << '\n';
}
}  // namespace

void exportBigrams(const NgramTable& t, std::ostream& out) { exportSorted(t.bigrams(), out); }
void exportUnigrams(const NgramTable& t, std::ostream& out) { exportSorted(t.unigrams(), out); }

}  // namespace relmix::collocation
