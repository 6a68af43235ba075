#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "relmix/text.hpp"

namespace relmix::text {

struct PosToken {
    std::string surface;
    std::string lemma;
    std::string tag;  // Penn Treebank tag

    friend bool operator==(const PosToken&, const PosToken&) = default;
};

enum class PosMode { NounOnly, NounVerbAdj };

struct PosDiagnostics {
    std::size_t unknownTags = 0;
};

bool isPennTag(std::string_view tag);

/// Keeps nouns (NN, NNS, NNP, NNPS) or, in NounVerbAdj mode, every tag starting
/// with NN, VB or JJ. Survivors emit their lowercased lemma; stop words and
/// lemmas shorter than three letters are dropped as in the stemmed pipeline.
/// Tokens carrying a tag outside the Penn set are dropped and counted.
std::vector<Term> normalizePos(const std::vector<PosToken>& tokens, PosMode mode,
                               const StopwordList& stopwords, PosDiagnostics* diagnostics = nullptr);

using PosSentence = std::vector<PosToken>;

/// Reads `surface<TAB>tag<TAB>lemma` lines, blank line between sentences.
std::vector<PosSentence> readPosSentences(std::istream& in, const std::string& sourceName = "<pos>");

/// POS annotations of one page, one token list per section (lead section first).
struct PageAnnotations {
    std::vector<std::vector<PosToken>> sections;
};

/// Sidecar file: the token format above, with `#page <id>` lines opening a page
/// and `#section <index>` lines opening a section within it.
std::map<std::int64_t, PageAnnotations> readPosSidecar(std::istream& in,
                                                       const std::string& sourceName = "<pos>");

}  // namespace relmix::text
