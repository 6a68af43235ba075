#include "relmix/text.hpp"

#include <utility>

namespace relmix::detail {
extern const std::string_view kStopwordsText;
}

namespace relmix::text {

namespace {

constexpr bool isAsciiLetter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
constexpr char toLowerAscii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool keepSurface(const std::string& word, const StopwordList& stopwords) {
    return word.size() >= kMinTermLength && !stopwords.contains(word);
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::uint32_t position = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !isAsciiLetter(text[i])) ++i;
        if (i == text.size()) break;
        std::string word;
        while (i < text.size() && isAsciiLetter(text[i])) word.push_back(toLowerAscii(text[i++]));
        out.push_back(Token{std::move(word), position++});
    }
    return out;
}

StopwordList::StopwordList(std::string id, std::unordered_set<std::string> words)
    : id_(std::move(id)), words_(std::move(words)) {}

StopwordList StopwordList::parse(std::string_view text, std::string fallbackId) {
    std::unordered_set<std::string> words;
    std::string id;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = trim(text.substr(pos, end - pos));
        if (!line.empty() && line.front() == '#') {
            if (id.empty()) id = std::string(trim(line.substr(1)));
        } else if (!line.empty()) {
            std::string w;
            for (char c : line) w.push_back(toLowerAscii(c));
            words.insert(std::move(w));
        }
        pos = end + 1;
    }
    return StopwordList(id.empty() ? std::move(fallbackId) : std::move(id), std::move(words));
}

bool StopwordList::contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
}

const StopwordList& defaultStopwords() {
    static const StopwordList list = StopwordList::parse(detail::kStopwordsText, "relmix-stopwords-en");
    return list;
}

std::vector<Term> normalizeStemmed(const std::vector<Token>& tokens, const StopwordList& stopwords) {
    std::vector<Term> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        if (!keepSurface(tok.surface, stopwords)) continue;
        auto stem = stemFixedPoint(tok.surface);
        if (!keepSurface(stem, stopwords)) continue;
        out.push_back(Term{std::move(stem)});
    }
    return out;
}

const std::string& StemmingNormalizer::normalize(const std::string& token) {
    auto it = cache_.find(token);
    if (it != cache_.end()) return it->second;
    std::string result;
    if (keepSurface(token, *stopwords_)) {
        auto stem = stemFixedPoint(token);
        if (keepSurface(stem, *stopwords_)) result = std::move(stem);
    }
    return cache_.emplace(token, std::move(result)).first->second;
}

std::vector<Term> StemmingNormalizer::normalize(const std::vector<Token>& tokens) {
    std::vector<Term> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        const auto& t = normalize(tok.surface);
        if (!t.empty()) out.push_back(Term{t});
    }
    return out;
}

}  // namespace relmix::text
