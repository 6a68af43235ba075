#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace relmix::text {

struct Token {
    std::string surface;
    std::uint32_t position = 0;

    friend bool operator==(const Token&, const Token&) = default;
};

/// An index term: a stemmed (or lemmatized) word.
struct Term {
    std::string text;

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

/// Lowercased runs of ASCII letters; everything else separates tokens.
std::vector<Token> tokenize(std::string_view text);

class StopwordList {
public:
    StopwordList() = default;
    StopwordList(std::string id, std::unordered_set<std::string> words);

    /// Parses one word per line; '#' starts a comment line. The first comment's
    /// text becomes the list id when present.
    static StopwordList parse(std::string_view text, std::string fallbackId = "custom");

    bool contains(std::string_view word) const;
    const std::string& id() const noexcept { return id_; }
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::string id_;
    std::unordered_set<std::string> words_;
};

/// The bundled English list (data/stopwords_en.txt).
const StopwordList& defaultStopwords();

/// One pass of the Porter stemmer (Porter 1980, as in the reference C release).
/// Input must be lowercase ASCII; words of length <= 2 are returned unchanged.
std::string porterStem(std::string_view word);

inline constexpr int kStemPasses = 3;
inline constexpr std::size_t kMinTermLength = 3;

/// porterStem applied kStemPasses times.
std::string stemRepeated(std::string_view word, int passes = kStemPasses);

/// At least `minPasses` passes, continuing until the stem stops changing.
/// Equal to stemRepeated on ordinary vocabulary; only words stacking many
/// derivational suffixes need more than three passes.
std::string stemFixedPoint(std::string_view word, int minPasses = kStemPasses);

/// Drops stop words and words shorter than three letters, stems the rest
/// (stemFixedPoint) and drops stems that turn out short or stop words
/// themselves. Applying it to its own output changes nothing.
std::vector<Term> normalizeStemmed(const std::vector<Token>& tokens, const StopwordList& stopwords);

/// Memoizing single-word normalizer for bulk work. Not thread-safe; use one per worker.
class StemmingNormalizer {
public:
    explicit StemmingNormalizer(const StopwordList& stopwords) : stopwords_(&stopwords) {}

    /// Normalized term for one lowercase token, or empty when the token is dropped.
    const std::string& normalize(const std::string& token);

    std::vector<Term> normalize(const std::vector<Token>& tokens);
    const StopwordList& stopwords() const noexcept { return *stopwords_; }

private:
    const StopwordList* stopwords_;
    std::unordered_map<std::string, std::string> cache_;
};

}  // namespace relmix::text

template <>
struct std::hash<relmix::text::Term> {
    std::size_t operator()(const relmix::text::Term& t) const noexcept {
        return std::hash<std::string>{}(t.text);
    }
};
