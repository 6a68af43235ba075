#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>

namespace relmix::corpus {

/// A `<page>` element as it appears in the export, before any cleaning.
struct RawPage {
    std::int64_t id = 0;
    std::string title;
    int ns = 0;
    std::optional<std::string> redirectTarget;
    std::string wikitext;
};

struct DumpSummary {
    std::size_t pages = 0;
    std::size_t redirects = 0;
    std::uint64_t bytes = 0;
};

/// Streams a MediaWiki XML export, calling `sink` once per complete `<page>`.
/// Memory use is bounded by the largest page. Malformed or truncated input
/// raises ParseError carrying the byte offset; pages completed before the
/// error have already been delivered.
DumpSummary parseDump(std::istream& in, const std::function<void(RawPage&&)>& sink,
                      const std::string& sourceName = "<dump>");

}  // namespace relmix::corpus
