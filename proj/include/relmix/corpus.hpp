#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "relmix/pos.hpp"
#include "relmix/text.hpp"

namespace relmix::corpus {

struct Link {
    std::string target;  // normalized title
    std::string anchor;  // visible text

    friend bool operator==(const Link&, const Link&) = default;
};

struct Section {
    std::string heading;  // empty for the lead section
    std::vector<std::string> sentences;
    /// Past-tense verbs over all verbs; unset when the section has no verbs or
    /// no annotations were supplied.
    std::optional<double> pastTenseRatio;

    friend bool operator==(const Section&, const Section&) = default;
};

/// A cleaned article. After main-namespace filtering every Page is one concept.
struct Page {
    std::int64_t id = 0;
    std::string title;
    int ns = 0;
    std::vector<Section> sections;
    std::vector<Link> outLinks;
    std::vector<std::string> anchorsIn;
    std::size_t linksIn = 0;
    std::size_t linksOut = 0;
    std::size_t distinctTerms = 0;

    friend bool operator==(const Page&, const Page&) = default;
};

/// Redirect source title -> redirect target title (both normalized).
using RedirectMap = std::unordered_map<std::string, std::string>;

inline constexpr int kMaxRedirectDepth = 3;

struct FilterCriteria {
    std::size_t minTerms = 0;
    std::size_t minLinks = 0;  // in-links plus out-links

    static constexpr FilterCriteria esaOriginal() { return {100, 5}; }
    static constexpr FilterCriteria adapted2011() { return {200, 14}; }

    friend bool operator==(const FilterCriteria&, const FilterCriteria&) = default;
};

struct LinkCounts {
    std::size_t in = 0;
    std::size_t out = 0;

    friend bool operator==(const LinkCounts&, const LinkCounts&) = default;
};

struct LinkStatsResult {
    std::vector<LinkCounts> counts;                  // aligned with the input pages
    std::vector<std::vector<std::string>> anchorsIn;  // aligned with the input pages
};

/// Resolves a title through the redirect map (at most kMaxRedirectDepth hops).
/// Returns nullopt when the chain is longer or cyclic.
std::optional<std::string> resolveRedirect(const std::string& title, const RedirectMap& redirects);

/// Counts distinct resolved links between the given pages. Self-links and links
/// to titles outside `pages` are ignored, so the sum of `in` equals the sum of `out`.
LinkStatsResult linkStats(std::span<const Page> pages, const RedirectMap& redirects);

/// linkStats, written back into the pages (linksIn, linksOut, anchorsIn).
void applyLinkStats(std::span<Page> pages, const RedirectMap& redirects);

/// Number of distinct terms of the page under the stemmed pipeline.
std::size_t countDistinctTerms(const Page& page, text::StemmingNormalizer& normalizer);

/// Keeps pages with distinctTerms >= minTerms and linksIn + linksOut >= minLinks.
std::vector<Page> filterPages(std::vector<Page> pages, const FilterCriteria& criteria);
bool passesFilter(const Page& page, const FilterCriteria& criteria);

/// Weight per sentence, indexed [section][sentence].
using SentenceWeights = std::vector<std::vector<int>>;

/// Sentences mentioning the page title, one of its non-stop words or an anchor
/// text of an incoming link get `factor`, all others 1. Matching is done on
/// stemmed forms.
SentenceWeights weightSentences(const Page& page, int factor, text::StemmingNormalizer& normalizer);

inline const std::set<std::string>& defaultBannedHeadings() {
    static const std::set<std::string> headings = {"History",         "External links", "References",
                                                   "See also",        "Further reading", "Bibliography"};
    return headings;
}

struct PruneSettings {
    double threshold = 0.8;
    std::set<std::string> bannedHeadings = defaultBannedHeadings();
};

struct VerbCounts {
    std::size_t pastTense = 0;  // VBD
    std::size_t verbs = 0;      // VB*
};

VerbCounts countVerbs(const std::vector<text::PosToken>& tokens);
std::optional<double> pastTenseRatio(const VerbCounts& counts);

struct PruneResult {
    Page page;
    std::size_t removedSections = 0;
    std::vector<std::size_t> keptSections;  // indices into the input page's sections
};

/// Drops historical sections (ratio >= threshold on a page whose own ratio is
/// below it) and sections with a banned heading. The lead section is never
/// removed by heading. `annotations` supplies tokens per section by index; it
/// may be null, in which case only the heading rule applies.
PruneResult pruneSections(const Page& page, const PruneSettings& settings,
                          const text::PageAnnotations* annotations);

}  // namespace relmix::corpus
