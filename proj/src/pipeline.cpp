#include "relmix/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "relmix/error.hpp"
#include "relmix/page_store.hpp"
#include "relmix/text.hpp"
#include "relmix/wikitext.hpp"

namespace relmix::harness {

namespace fs = std::filesystem;

std::vector<corpus::Page> ingestDump(std::istream& in, const std::string& sourceName, IngestReport* report) {
    IngestReport local;
    auto& r = report ? *report : local;
    std::vector<corpus::Page> pages;
    corpus::RedirectMap redirects;
    r.dump = corpus::parseDump(
        in,
        [&](corpus::RawPage&& raw) {
            if (raw.redirectTarget) {
                redirects[corpus::normalizeTitle(raw.title)] = corpus::normalizeTitle(*raw.redirectTarget);
                return;
            }
            if (raw.ns != 0) {
                ++r.otherNamespace;
                return;
            }
            auto cleaned = corpus::cleanWikitext(raw.wikitext);
            r.cleanDiagnostics += cleaned.diagnostics;
            corpus::Page p;
            p.id = raw.id;
            p.title = corpus::normalizeTitle(raw.title);
            p.ns = 0;
            p.sections = std::move(cleaned.sections);
            p.outLinks = std::move(cleaned.links);
            pages.push_back(std::move(p));
        },
        sourceName);
    corpus::applyLinkStats(pages, redirects);
    text::StemmingNormalizer normalizer(text::defaultStopwords());
    for (auto& p : pages) p.distinctTerms = corpus::countDistinctTerms(p, normalizer);
    r.mainPages = pages.size();
    return pages;
}

std::string cacheDirFromEnv() {
    const char* v = std::getenv("RELMIX_CACHE_DIR");
    return v ? std::string(v) : std::string();
}

std::vector<corpus::Page> ingestDumpFile(const std::string& path, const std::string& cacheDir, IngestReport* report) {
    if (!fs::exists(path)) throw Error("dump not found: " + path);
    fs::path cached;
    if (!cacheDir.empty()) {
        const auto stamp = fs::last_write_time(path).time_since_epoch().count();
        const auto key = fnv1aHex(fs::absolute(path).string() + "\n" + std::to_string(fs::file_size(path)) + "\n" +
                                  std::to_string(stamp));
        fs::create_directories(cacheDir);
        cached = fs::path(cacheDir) / ("pages-" + key + ".ndjson");
        if (fs::exists(cached)) {
            std::ifstream in(cached);
            auto pages = corpus::readPageStore(in, cached.string());
            if (report) {
                *report = IngestReport{};
                report->fromCache = true;
                report->mainPages = pages.size();
            }
            return pages;
        }
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dump " + path);
    auto pages = ingestDump(in, path, report);
    if (!cached.empty()) {
        const auto tmp = cached.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            for (const auto& p : pages) corpus::writePageRecord(out, p);
            if (!out) throw Error("failed writing page cache " + tmp);
        }
        fs::rename(tmp, cached);
    }
    return pages;
}

namespace {

class TermAccumulator {
public:
    void add(const std::string& term, double weight) {
        auto [it, fresh] = slot_.try_emplace(term, tf_.size());
        if (fresh) tf_.emplace_back(term, 0.0);
        tf_[it->second].second += weight;
    }
    std::vector<std::pair<std::string, double>> take() { return std::move(tf_); }

private:
    std::unordered_map<std::string, std::size_t> slot_;
    std::vector<std::pair<std::string, double>> tf_;
};

}  // namespace

std::vector<esa::ConceptDocument> conceptDocuments(const std::vector<corpus::Page>& pages, const RunConfig& cfg,
                                                   const Annotations* annotations, BuildReport* report,
                                                   std::unordered_map<std::string, double>* termCounts) {
    cfg.validate();
    const bool posMode = cfg.mode != esa::PipelineMode::Stemmed;
    if (posMode && !annotations) throw Error("POS pipeline needs annotations");
    const auto posMode_ = cfg.mode == esa::PipelineMode::PosNoun ? text::PosMode::NounOnly : text::PosMode::NounVerbAdj;
    const auto pruneSettings = cfg.pruneSettings();
    const auto& stop = text::defaultStopwords();
    text::StemmingNormalizer normalizer(stop);

    std::vector<esa::ConceptDocument> docs;
    if (report) report->candidatePages = pages.size();
    for (const auto& original : pages) {
        if (!corpus::passesFilter(original, cfg.filter)) continue;
        const text::PageAnnotations* ann = nullptr;
        if (annotations)
            if (auto it = annotations->find(original.id); it != annotations->end()) ann = &it->second;

        corpus::Page page = original;
        std::vector<std::size_t> kept(page.sections.size());
        for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
        if (cfg.pruneSections) {
            auto pruned = corpus::pruneSections(original, pruneSettings, ann);
            if (report) report->removedSections += pruned.removedSections;
            page = std::move(pruned.page);
            kept = std::move(pruned.keptSections);
        }

        TermAccumulator acc;
        if (!posMode) {
            const auto weights = corpus::weightSentences(page, cfg.sentenceWeight, normalizer);
            for (std::size_t s = 0; s < page.sections.size(); ++s)
                for (std::size_t k = 0; k < page.sections[s].sentences.size(); ++k) {
                    const double w = weights[s][k];
                    for (const auto& tok : text::tokenize(page.sections[s].sentences[k])) {
                        const auto& t = normalizer.normalize(tok.surface);
                        if (!t.empty()) acc.add(t, w);
                    }
                }
        } else if (ann) {
            for (auto idx : kept) {
                if (idx >= ann->sections.size()) continue;
                for (const auto& term : text::normalizePos(ann->sections[idx], posMode_, stop)) acc.add(term.text, 1.0);
            }
        }
        esa::ConceptDocument doc;
        doc.pageId = page.id;
        doc.title = page.title;
        doc.termFrequencies = acc.take();
        if (termCounts)
            for (const auto& [t, c] : doc.termFrequencies) (*termCounts)[t] += c;
        docs.push_back(std::move(doc));
    }
    if (report) report->concepts = docs.size();
    return docs;
}

namespace {

esa::BuildSettings buildSettings(const RunConfig& cfg) {
    esa::BuildSettings s;
    s.mode = cfg.mode;
    s.tf = cfg.tf;
    s.normalization = cfg.normalization;
    s.topK = cfg.topK;
    s.workers = cfg.workers;
    s.extraMetadata["min_terms"] = std::to_string(cfg.filter.minTerms);
    s.extraMetadata["min_links"] = std::to_string(cfg.filter.minLinks);
    s.extraMetadata["sentence_weight"] = std::to_string(cfg.sentenceWeight);
    s.extraMetadata["prune_sections"] = cfg.pruneSections ? "true" : "false";
    s.extraMetadata["index_config_hash"] = indexConfigHash(cfg);
    return s;
}

}  // namespace

esa::InvertedIndex buildIndexFromPages(const std::vector<corpus::Page>& pages, const RunConfig& cfg,
                                       const Annotations* annotations, BuildReport* report,
                                       std::unordered_map<std::string, double>* termCounts) {
    const auto docs = conceptDocuments(pages, cfg, annotations, report, termCounts);
    return esa::buildIndex(docs, buildSettings(cfg));
}

esa::InvertedIndex buildIndexFromConfig(const RunConfig& cfg, BuildReport* report,
                                        std::unordered_map<std::string, double>* termCounts) {
    if (cfg.dump.empty()) throw Error("no dump given");
    IngestReport ingest;
    const auto pages = ingestDumpFile(cfg.dump, cacheDirFromEnv(), &ingest);
    if (report) report->ingest = ingest;
    std::optional<Annotations> annotations;
    if (!cfg.posAnnotations.empty()) {
        std::ifstream in(cfg.posAnnotations);
        if (!in) throw Error("cannot open POS annotations " + cfg.posAnnotations);
        annotations = text::readPosSidecar(in, cfg.posAnnotations);
    }
    return buildIndexFromPages(pages, cfg, annotations ? &*annotations : nullptr, report, termCounts);
}

void writeTermCounts(const std::unordered_map<std::string, double>& counts, std::ostream& out) {
    std::vector<std::pair<std::string_view, double>> rows(counts.begin(), counts.end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [t, c] : rows) out << t << '\t' << combine::formatDouble(c) << '\n';
}

std::unordered_map<std::string, double> readTermCounts(std::istream& in, const std::string& sourceName) {
    std::unordered_map<std::string, double> counts;
    std::string line;
    std::uint64_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(sourceName, lineNo, "expected term<TAB>count");
        try {
            counts[line.substr(0, tab)] += combine::parseDouble(std::string_view(line).substr(tab + 1));
        } catch (const Error& e) {
            throw ParseError(sourceName, lineNo, e.what());
        }
    }
    return counts;
}

std::string termCountsPath(const std::string& indexPath) { return indexPath + ".counts"; }

// ---------------------------------------------------------------- Engine

Engine::Engine(const RunConfig& cfg, std::shared_ptr<const esa::InvertedIndex> index,
               std::shared_ptr<const wordnet::WordnetGraph> graph, std::shared_ptr<const collocation::NgramTable> ngrams)
    : cfg_(cfg), index_(std::move(index)), graph_(std::move(graph)), ngrams_(std::move(ngrams)) {}

Engine::Engine(const RunConfig& cfg, const std::unordered_set<std::string>* vocabulary) : cfg_(cfg) {
    if (!cfg.index.empty()) index_ = std::make_shared<esa::InvertedIndex>(esa::loadIndex(cfg.index));
    if (!cfg.wordnetDir.empty()) {
        auto g = std::make_shared<wordnet::WordnetGraph>(wordnet::loadWordnet(cfg.wordnetDir));
        if (!cfg.icTable.empty()) {
            std::ifstream in(cfg.icTable);
            if (!in) throw Error("cannot open IC table " + cfg.icTable);
            g->setInformationContent(wordnet::readIC(*g, in, cfg.icTable));
        } else if (!cfg.index.empty() && fs::exists(termCountsPath(cfg.index))) {
            std::ifstream in(termCountsPath(cfg.index));
            const auto counts = readTermCounts(in, termCountsPath(cfg.index));
            if (!counts.empty()) g->setInformationContent(wordnet::computeIC(*g, counts));
        }
        graph_ = std::move(g);
    }
    if (!cfg.ngramsUni.empty() || !cfg.ngramsBi.empty()) {
        if (cfg.ngramsUni.empty() || cfg.ngramsBi.empty()) throw Error("n-gram input needs both unigram and bigram files");
        std::ifstream uni(cfg.ngramsUni), bi(cfg.ngramsBi);
        if (!uni) throw Error("cannot open " + cfg.ngramsUni);
        if (!bi) throw Error("cannot open " + cfg.ngramsBi);
        collocation::LoadOptions o;
        o.minYear = cfg.minYear;
        o.vocabulary = vocabulary;
        ngrams_ = std::make_shared<collocation::NgramTable>(collocation::loadNgrams(uni, bi, o));
    }
}

Components Engine::components(std::string_view w1, std::string_view w2) const {
    Components c;
    if (index_) c.esa = esa::esa(*index_, w1, w2);
    if (graph_) c.wnp = wordnet::wordMeasure(wordnet::Measure::WNP, *graph_, w1, w2);
    if (ngrams_) {
        try {
            const auto parts = collocation::collocationParts(*ngrams_, w1, w2);
            c.direct = parts.direct;
            c.inverse = parts.inverse;
        } catch (const DomainError&) {
            // Neither word occurs in the n-gram corpus.
        }
    }
    return c;
}

double Engine::ew(std::string_view w1, std::string_view w2) const {
    const auto c = components(w1, w2);
    return combine::ew(c.esa, c.wnp, cfg_.params);
}

double Engine::ewc(std::string_view w1, std::string_view w2) const {
    const auto c = components(w1, w2);
    return combine::ewc(c.esa, c.wnp, c.cxi(cfg_.params.xi), cfg_.params);
}

double Engine::measure(std::string_view name, std::string_view w1, std::string_view w2) const {
    if (name == "esa") return index_ ? esa::esa(*index_, w1, w2) : 0.0;
    if (name == "ew") return ew(w1, w2);
    if (name == "ewc") return ewc(w1, w2);
    if (name == "colloc") return components(w1, w2).direct;
    if (name == "cxi") return components(w1, w2).cxi(cfg_.params.xi);
    const auto kind = wordnet::parseMeasure(name);
    return graph_ ? wordnet::wordMeasure(kind, *graph_, w1, w2) : 0.0;
}

}  // namespace relmix::harness
