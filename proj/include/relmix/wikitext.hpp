#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "relmix/corpus.hpp"

namespace relmix::corpus {

struct CleanedText {
    std::vector<Section> sections;  // lead section first, always present
    std::vector<Link> links;        // in order of appearance
    std::size_t diagnostics = 0;    // unbalanced constructs recovered from
};

/// Strips templates, tables, references, comments, categories, file and
/// interlanguage links. `[[target|anchor]]` contributes the anchor to the text
/// and the target to `links`; `== Heading ==` lines open sections.
CleanedText cleanWikitext(std::string_view markup);

/// Canonical title form: underscores to spaces, whitespace collapsed and
/// trimmed, first letter upper-cased, `#fragment` removed.
std::string normalizeTitle(std::string_view title);

/// Splits a paragraph into sentences at `.`, `!` or `?` followed by whitespace.
std::vector<std::string> splitSentences(std::string_view paragraph);

}  // namespace relmix::corpus
