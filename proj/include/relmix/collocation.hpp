#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace relmix::collocation {

/// Unigram and ordered-bigram frequencies, case-folded, restricted to rows
/// newer than a cutoff year.
class NgramTable {
public:
    explicit NgramTable(int minYear = 1970) : minYear_(minYear) {}

    int minYear() const noexcept { return minYear_; }
    std::uint64_t unigram(std::string_view w) const;
    /// Count of the ordered bigram "w1 w2".
    std::uint64_t bigram(std::string_view w1, std::string_view w2) const;

    void addUnigram(std::string_view w, std::uint64_t count);
    void addBigram(std::string_view w1, std::string_view w2, std::uint64_t count);

    const std::unordered_map<std::string, std::uint64_t>& unigrams() const noexcept { return unigrams_; }
    /// Keyed by "w1 w2".
    const std::unordered_map<std::string, std::uint64_t>& bigrams() const noexcept { return bigrams_; }

    friend bool operator==(const NgramTable&, const NgramTable&) = default;

private:
    int minYear_;
    std::unordered_map<std::string, std::uint64_t> unigrams_;
    std::unordered_map<std::string, std::uint64_t> bigrams_;
};

struct LoadOptions {
    /// Rows are kept when year > minYear.
    int minYear = 1970;
    /// When set, only unigrams in the set and bigrams with both words in it are kept.
    const std::unordered_set<std::string>* vocabulary = nullptr;
};

struct LoadDiagnostics {
    std::uint64_t rows = 0;
    std::uint64_t malformed = 0;
    std::uint64_t tooOld = 0;
    std::uint64_t outOfVocabulary = 0;
};

/// Rows are `ngram<TAB>year<TAB>match_count[<TAB>...]`. Malformed rows are
/// skipped and counted.
void loadUnigrams(NgramTable& table, std::istream& in, const LoadOptions& options, LoadDiagnostics* diag = nullptr);
void loadBigrams(NgramTable& table, std::istream& in, const LoadOptions& options, LoadDiagnostics* diag = nullptr);
NgramTable loadNgrams(std::istream& unigrams, std::istream& bigrams, const LoadOptions& options,
                      LoadDiagnostics* diag = nullptr);

/// 2 #(w1 w2) / (#w1 + #w2). Throws DomainError when both unigram counts are 0.
double collocationIndex(const NgramTable& t, std::string_view w1, std::string_view w2);

/// Direct index plus xi times the index of the reversed bigram.
double mixedCollocation(const NgramTable& t, std::string_view w1, std::string_view w2, double xi);

/// The two summands of mixedCollocation before weighting by xi.
struct CollocationParts {
    double direct = 0.0;
    double inverse = 0.0;
};
CollocationParts collocationParts(const NgramTable& t, std::string_view w1, std::string_view w2);

/// Sorted `w1 w2<TAB>count` lines.
void exportBigrams(const NgramTable& t, std::ostream& out);
/// Sorted `w<TAB>count` lines.
void exportUnigrams(const NgramTable& t, std::ostream& out);

}  // namespace relmix::collocation
