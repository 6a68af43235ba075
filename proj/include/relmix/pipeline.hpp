#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "relmix/collocation.hpp"
#include "relmix/config.hpp"
#include "relmix/corpus.hpp"
#include "relmix/dump.hpp"
#include "relmix/esa.hpp"
#include "relmix/pos.hpp"
#include "relmix/wordnet.hpp"

namespace relmix::harness {

struct IngestReport {
    corpus::DumpSummary dump;
    std::size_t mainPages = 0;
    std::size_t otherNamespace = 0;
    std::size_t cleanDiagnostics = 0;
    bool fromCache = false;
};

/// Parses and cleans a dump: main-namespace pages with sections, links,
/// link statistics and distinct-term counts filled in. Redirects only feed
/// link resolution.
std::vector<corpus::Page> ingestDump(std::istream& in, const std::string& sourceName, IngestReport* report = nullptr);

/// As above from a file. When `cacheDir` is non-empty the page store is kept
/// there, keyed by the dump's path, size and modification time.
std::vector<corpus::Page> ingestDumpFile(const std::string& path, const std::string& cacheDir,
                                         IngestReport* report = nullptr);

/// Value of RELMIX_CACHE_DIR, or empty.
std::string cacheDirFromEnv();

struct BuildReport {
    IngestReport ingest;
    std::size_t candidatePages = 0;
    std::size_t concepts = 0;
    std::size_t removedSections = 0;
};

using Annotations = std::map<std::int64_t, text::PageAnnotations>;

/// Concept documents of the pages surviving the filter, after optional
/// section pruning and sentence weighting. `termCounts`, when given,
/// receives corpus-wide term frequencies of the same documents.
std::vector<esa::ConceptDocument> conceptDocuments(const std::vector<corpus::Page>& pages, const RunConfig& cfg,
                                                   const Annotations* annotations, BuildReport* report = nullptr,
                                                   std::unordered_map<std::string, double>* termCounts = nullptr);

esa::InvertedIndex buildIndexFromPages(const std::vector<corpus::Page>& pages, const RunConfig& cfg,
                                       const Annotations* annotations, BuildReport* report = nullptr,
                                       std::unordered_map<std::string, double>* termCounts = nullptr);

/// Full build from cfg.dump (and cfg.posAnnotations where needed).
esa::InvertedIndex buildIndexFromConfig(const RunConfig& cfg, BuildReport* report = nullptr,
                                        std::unordered_map<std::string, double>* termCounts = nullptr);

/// `term<TAB>count` lines, sorted by term.
void writeTermCounts(const std::unordered_map<std::string, double>& counts, std::ostream& out);
std::unordered_map<std::string, double> readTermCounts(std::istream& in, const std::string& sourceName = "<counts>");

/// Companion file of an index holding its corpus term counts.
std::string termCountsPath(const std::string& indexPath);

struct Components {
    double esa = 0.0;
    double wnp = 0.0;
    double direct = 0.0;   // collocation index of w1 w2
    double inverse = 0.0;  // collocation index of w2 w1

    double cxi(double xi) const { return direct + xi * inverse; }
};

/// Loaded resources for scoring word pairs. Missing resources contribute 0.
class Engine {
public:
    /// Loads whatever cfg names: index, WordNet (+ IC table or index term
    /// counts), n-grams restricted to `vocabulary` when non-null.
    explicit Engine(const RunConfig& cfg, const std::unordered_set<std::string>* vocabulary = nullptr);
    Engine(const RunConfig& cfg, std::shared_ptr<const esa::InvertedIndex> index,
           std::shared_ptr<const wordnet::WordnetGraph> graph, std::shared_ptr<const collocation::NgramTable> ngrams);

    Components components(std::string_view w1, std::string_view w2) const;
    double ew(std::string_view w1, std::string_view w2) const;
    double ewc(std::string_view w1, std::string_view w2) const;

    /// Named measure: esa, wnp, wup, lch, res, jcn, lin, colloc, cxi, ew, ewc.
    double measure(std::string_view name, std::string_view w1, std::string_view w2) const;

    const RunConfig& config() const noexcept { return cfg_; }
    void setParams(const combine::CombineParams& p) { cfg_.params = p; }
    const esa::InvertedIndex* index() const noexcept { return index_.get(); }
    const wordnet::WordnetGraph* graph() const noexcept { return graph_.get(); }
    const collocation::NgramTable* ngrams() const noexcept { return ngrams_.get(); }

private:
    RunConfig cfg_;
    std::shared_ptr<const esa::InvertedIndex> index_;
    std::shared_ptr<const wordnet::WordnetGraph> graph_;
    std::shared_ptr<const collocation::NgramTable> ngrams_;
};

}  // namespace relmix::harness
