#include "relmix/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace relmix::corpus {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Every token stemmed, stop words included, so multi-word titles match as runs.
std::vector<std::string> stemSequence(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& tok : text::tokenize(text)) out.push_back(text::stemFixedPoint(tok.surface));
    return out;
}

bool containsSequence(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

}  // namespace

std::optional<std::string> resolveRedirect(const std::string& title, const RedirectMap& redirects) {
    std::string current = title;
    for (int hop = 0; hop <= kMaxRedirectDepth; ++hop) {
        auto it = redirects.find(current);
        if (it == redirects.end()) return current;
        if (hop == kMaxRedirectDepth) break;
        current = it->second;
    }
    return std::nullopt;
}

LinkStatsResult linkStats(std::span<const Page> pages, const RedirectMap& redirects) {
    std::unordered_map<std::string, std::size_t> byTitle;
    byTitle.reserve(pages.size());
    for (std::size_t i = 0; i < pages.size(); ++i) byTitle.emplace(pages[i].title, i);

    LinkStatsResult result;
    result.counts.resize(pages.size());
    result.anchorsIn.resize(pages.size());
    std::unordered_set<std::size_t> seen;
    for (std::size_t src = 0; src < pages.size(); ++src) {
        seen.clear();
        for (const auto& link : pages[src].outLinks) {
            auto resolved = resolveRedirect(link.target, redirects);
            if (!resolved) continue;
            auto it = byTitle.find(*resolved);
            if (it == byTitle.end() || it->second == src) continue;
            const auto dst = it->second;
            if (!link.anchor.empty()) result.anchorsIn[dst].push_back(link.anchor);
            if (!seen.insert(dst).second) continue;
            ++result.counts[src].out;
            ++result.counts[dst].in;
        }
    }
    return result;
}

void applyLinkStats(std::span<Page> pages, const RedirectMap& redirects) {
    auto stats = linkStats(pages, redirects);
    for (std::size_t i = 0; i < pages.size(); ++i) {
        pages[i].linksIn = stats.counts[i].in;
        pages[i].linksOut = stats.counts[i].out;
        pages[i].anchorsIn = std::move(stats.anchorsIn[i]);
    }
}

std::size_t countDistinctTerms(const Page& page, text::StemmingNormalizer& normalizer) {
    std::unordered_set<std::string> terms;
    for (const auto& section : page.sections)
        for (const auto& sentence : section.sentences)
            for (const auto& tok : text::tokenize(sentence)) {
                const auto& t = normalizer.normalize(tok.surface);
                if (!t.empty()) terms.insert(t);
            }
    return terms.size();
}

bool passesFilter(const Page& page, const FilterCriteria& criteria) {
    return page.distinctTerms >= criteria.minTerms && page.linksIn + page.linksOut >= criteria.minLinks;
}

std::vector<Page> filterPages(std::vector<Page> pages, const FilterCriteria& criteria) {
    std::erase_if(pages, [&](const Page& p) { return !passesFilter(p, criteria); });
    return pages;
}

SentenceWeights weightSentences(const Page& page, int factor, text::StemmingNormalizer& normalizer) {
    SentenceWeights weights;
    weights.reserve(page.sections.size());
    if (factor == 1) {
        for (const auto& section : page.sections) weights.emplace_back(section.sentences.size(), 1);
        return weights;
    }

    const auto titleSeq = stemSequence(page.title);
    std::unordered_set<std::string> titleWords;
    for (const auto& t : normalizer.normalize(text::tokenize(page.title))) titleWords.insert(t.text);
    std::vector<std::vector<std::string>> anchors;
    for (const auto& a : page.anchorsIn) {
        auto seq = stemSequence(a);
        if (!seq.empty()) anchors.push_back(std::move(seq));
    }
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

    for (const auto& section : page.sections) {
        auto& row = weights.emplace_back();
        row.reserve(section.sentences.size());
        for (const auto& sentence : section.sentences) {
            const auto seq = stemSequence(sentence);
            bool selected = containsSequence(seq, titleSeq);
            if (!selected)
                selected = std::any_of(seq.begin(), seq.end(), [&](const std::string& s) { return titleWords.contains(s); });
            if (!selected)
                selected = std::any_of(anchors.begin(), anchors.end(),
                                       [&](const auto& a) { return containsSequence(seq, a); });
            row.push_back(selected ? factor : 1);
        }
    }
    return weights;
}

VerbCounts countVerbs(const std::vector<text::PosToken>& tokens) {
    VerbCounts c;
    for (const auto& t : tokens) {
        if (!t.tag.starts_with("VB")) continue;
        ++c.verbs;
        if (t.tag == "VBD") ++c.pastTense;
    }
    return c;
}

std::optional<double> pastTenseRatio(const VerbCounts& counts) {
    if (counts.verbs == 0) return std::nullopt;
    return static_cast<double>(counts.pastTense) / static_cast<double>(counts.verbs);
}

PruneResult pruneSections(const Page& page, const PruneSettings& settings, const text::PageAnnotations* annotations) {
    std::unordered_set<std::string> banned;
    for (const auto& h : settings.bannedHeadings) banned.insert(lower(h));

    std::vector<std::optional<double>> ratios(page.sections.size());
    VerbCounts total;
    if (annotations) {
        for (std::size_t i = 0; i < page.sections.size() && i < annotations->sections.size(); ++i) {
            auto c = countVerbs(annotations->sections[i]);
            total.pastTense += c.pastTense;
            total.verbs += c.verbs;
            ratios[i] = pastTenseRatio(c);
        }
    }
    const auto pageRatio = pastTenseRatio(total);

    PruneResult result;
    result.page = page;
    result.page.sections.clear();
    for (std::size_t i = 0; i < page.sections.size(); ++i) {
        Section s = page.sections[i];
        s.pastTenseRatio = ratios[i];
        const bool historical = ratios[i] && pageRatio && *ratios[i] >= settings.threshold && *pageRatio < settings.threshold;
        const bool bannedHeading = !s.heading.empty() && banned.contains(lower(s.heading));
        if (historical || bannedHeading) {
            ++result.removedSections;
            continue;
        }
        result.page.sections.push_back(std::move(s));
        result.keptSections.push_back(i);
    }
    return result;
}

}  // namespace relmix::corpus
