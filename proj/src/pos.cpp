#include "relmix/pos.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "relmix/error.hpp"

namespace relmix::text {

namespace {

constexpr std::array<std::string_view, 45> kPennTags = {
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN",
    "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", "#", "$", ".", ",", ":", "(", ")", "``", "''"};

bool keepTag(std::string_view tag, PosMode mode) {
    if (mode == PosMode::NounOnly) return tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS";
    return tag.starts_with("NN") || tag.starts_with("VB") || tag.starts_with("JJ");
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::string_view stripCr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

PosToken parseTokenLine(std::string_view line, const std::string& source, std::uint64_t lineNo) {
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t1 == std::string_view::npos || t2 == std::string_view::npos || t1 == 0)
        throw ParseError(source, lineNo, "expected surface<TAB>tag<TAB>lemma");
    PosToken tok;
    tok.surface = std::string(line.substr(0, t1));
    tok.tag = std::string(line.substr(t1 + 1, t2 - t1 - 1));
    auto rest = line.substr(t2 + 1);
    auto t3 = rest.find('\t');
    tok.lemma = std::string(rest.substr(0, t3));
    // TreeTagger writes <unknown> when it has no lemma.
    if (tok.lemma.empty() || tok.lemma == "<unknown>") tok.lemma = tok.surface;
    return tok;
}

}  // namespace

bool isPennTag(std::string_view tag) {
    if (tag == "-LRB-" || tag == "-RRB-") return true;
    return std::find(kPennTags.begin(), kPennTags.end(), tag) != kPennTags.end();
}

std::vector<Term> normalizePos(const std::vector<PosToken>& tokens, PosMode mode,
                               const StopwordList& stopwords, PosDiagnostics* diagnostics) {
    std::vector<Term> out;
    for (const auto& tok : tokens) {
        if (!isPennTag(tok.tag)) {
            if (diagnostics) ++diagnostics->unknownTags;
            continue;
        }
        if (!keepTag(tok.tag, mode)) continue;
        auto lemma = lower(tok.lemma);
        if (lemma.size() < kMinTermLength || stopwords.contains(lemma)) continue;
        out.push_back(Term{std::move(lemma)});
    }
    return out;
}

std::vector<PosSentence> readPosSentences(std::istream& in, const std::string& sourceName) {
    std::vector<PosSentence> out;
    PosSentence current;
    std::string raw;
    std::uint64_t lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        auto line = stripCr(raw);
        if (line.empty()) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
            continue;
        }
        current.push_back(parseTokenLine(line, sourceName, lineNo));
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

std::map<std::int64_t, PageAnnotations> readPosSidecar(std::istream& in, const std::string& sourceName) {
    std::map<std::int64_t, PageAnnotations> out;
    PageAnnotations* page = nullptr;
    std::size_t section = 0;
    std::string raw;
    std::uint64_t lineNo = 0;
    auto parseNumber = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || v < 0)
            throw ParseError(sourceName, lineNo, "bad number '" + std::string(s) + "'");
        return v;
    };
    while (std::getline(in, raw)) {
        ++lineNo;
        auto line = stripCr(raw);
        if (line.empty()) continue;
        if (line.starts_with("#page ")) {
            page = &out[parseNumber(line.substr(6))];
            page->sections.assign(1, {});
            section = 0;
            continue;
        }
        if (line.starts_with("#section ")) {
            if (!page) throw ParseError(sourceName, lineNo, "#section before #page");
            section = static_cast<std::size_t>(parseNumber(line.substr(9)));
            if (section >= page->sections.size()) page->sections.resize(section + 1);
            continue;
        }
        if (!page) throw ParseError(sourceName, lineNo, "token before #page");
        page->sections[section].push_back(parseTokenLine(line, sourceName, lineNo));
    }
    return out;
}

}  // namespace relmix::text
