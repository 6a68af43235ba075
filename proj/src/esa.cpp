#include "relmix/esa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "relmix/error.hpp"
#include "relmix/text.hpp"

namespace relmix::esa {

SparseVector::SparseVector(std::vector<SparseEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].weight == 0.0 || !std::isfinite(entries_[i].weight))
            throw DomainError("sparse vector holds a zero or non-finite weight");
        if (i > 0 && entries_[i - 1].conceptId >= entries_[i].conceptId)
            throw DomainError("sparse vector concept ids must be strictly increasing");
    }
}

double SparseVector::squaredNorm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.weight * e.weight;
    return s;
}

SparseVector operator+(const SparseVector& a, const SparseVector& b) {
    std::vector<SparseEntry> out;
    out.reserve(a.size() + b.size());
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
        if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->conceptId < ib->conceptId)) {
            out.push_back(*ia++);
        } else if (ia == a.entries_.end() || ib->conceptId < ia->conceptId) {
            out.push_back(*ib++);
        } else {
            const double w = ia->weight + ib->weight;
            if (w != 0.0) out.push_back({ia->conceptId, w});
            ++ia;
            ++ib;
        }
    }
    SparseVector v;
    v.entries_ = std::move(out);
    return v;
}

double dot(const SparseVector& a, const SparseVector& b) {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].conceptId < eb[j].conceptId) {
            ++i;
        } else if (eb[j].conceptId < ea[i].conceptId) {
            ++j;
        } else {
            s += ea[i].weight * eb[j].weight;
            ++i;
            ++j;
        }
    }
    return s;
}

double cosine(const SparseVector& a, const SparseVector& b) {
    if (a.empty() || b.empty()) return 0.0;
    const double d = dot(a, b);
    if (d <= 0.0) return 0.0;
    const double r = d / std::sqrt(a.squaredNorm() * b.squaredNorm());
    return std::min(1.0, r);
}

std::string_view toString(PipelineMode m) {
    switch (m) {
        case PipelineMode::Stemmed: return "stemmed";
        case PipelineMode::PosNoun: return "pos-noun";
        case PipelineMode::PosAll: return "pos-all";
    }
    return "stemmed";
}

std::string_view toString(TfScheme t) { return t == TfScheme::Raw ? "raw" : "log"; }

std::string_view toString(Normalization n) {
    switch (n) {
        case Normalization::Concept: return "concept-l2";
        case Normalization::Term: return "term-l2";
        case Normalization::None: return "none";
    }
    return "concept-l2";
}

PipelineMode parsePipelineMode(std::string_view s) {
    if (s == "stemmed") return PipelineMode::Stemmed;
    if (s == "pos-noun") return PipelineMode::PosNoun;
    if (s == "pos-all") return PipelineMode::PosAll;
    throw Error("unknown pipeline mode '" + std::string(s) + "' (expected stemmed, pos-noun or pos-all)");
}

TfScheme parseTfScheme(std::string_view s) {
    if (s == "raw") return TfScheme::Raw;
    if (s == "log") return TfScheme::Log;
    throw Error("unknown tf scheme '" + std::string(s) + "' (expected raw or log)");
}

Normalization parseNormalization(std::string_view s) {
    if (s == "concept-l2") return Normalization::Concept;
    if (s == "term-l2") return Normalization::Term;
    if (s == "none") return Normalization::None;
    throw Error("unknown normalization '" + std::string(s) + "' (expected concept-l2, term-l2 or none)");
}

InvertedIndex::InvertedIndex(std::vector<ConceptInfo> concepts, std::vector<std::string> terms,
                             std::vector<SparseVector> vectors, std::map<std::string, std::string> metadata)
    : concepts_(std::move(concepts)), terms_(std::move(terms)), vectors_(std::move(vectors)), metadata_(std::move(metadata)) {
    if (terms_.size() != vectors_.size()) throw Error("index terms and vectors differ in length");
    lookup_.reserve(terms_.size());
    for (std::uint32_t i = 0; i < terms_.size(); ++i) {
        if (i > 0 && !(terms_[i - 1] < terms_[i])) throw Error("index terms must be sorted and unique");
        for (const auto& e : vectors_[i].entries())
            if (e.conceptId >= concepts_.size()) throw Error("index posting refers to unknown concept");
        lookup_.emplace(terms_[i], i);
    }
}

const SparseVector* InvertedIndex::find(std::string_view term) const {
    auto it = lookup_.find(std::string(term));
    return it == lookup_.end() ? nullptr : &vectors_[it->second];
}

std::size_t InvertedIndex::documentFrequency(std::string_view term) const {
    const auto* v = find(term);
    return v ? v->size() : 0;
}

PipelineMode InvertedIndex::mode() const {
    auto it = metadata_.find("pipeline_mode");
    return it == metadata_.end() ? PipelineMode::Stemmed : parsePipelineMode(it->second);
}

namespace {

struct WeightedTerm {
    std::uint32_t term;
    double weight;
};

template <typename Fn>
void parallelFor(std::size_t n, unsigned workers, Fn&& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

InvertedIndex buildIndex(std::span<const ConceptDocument> documents, const BuildSettings& settings) {
    if (documents.empty()) throw DomainError("cannot build an index from an empty corpus");
    const std::size_t n = documents.size();

    // Intern terms in first-appearance order and count document frequencies.
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<std::string> names;
    std::vector<std::uint32_t> df;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> docTerms(n);
    std::uint64_t corpusPostings = 0;
    for (std::size_t d = 0; d < n; ++d) {
        auto& row = docTerms[d];
        for (const auto& [term, tf] : documents[d].termFrequencies) {
            if (!(tf > 0.0)) continue;
            auto [it, inserted] = ids.emplace(term, static_cast<std::uint32_t>(names.size()));
            if (inserted) {
                names.push_back(term);
                df.push_back(0);
            }
            row.emplace_back(it->second, tf);
        }
        // Merge duplicate mentions of a term within one document.
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::size_t out = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (out > 0 && row[out - 1].first == row[i].first)
                row[out - 1].second += row[i].second;
            else
                row[out++] = row[i];
        }
        row.resize(out);
        for (const auto& [t, _] : row) ++df[t];
        corpusPostings += row.size();
    }

    const double total = static_cast<double>(n);
    std::vector<double> idf(names.size());
    for (std::size_t t = 0; t < names.size(); ++t) idf[t] = std::log(total / static_cast<double>(df[t]));

    std::vector<std::vector<WeightedTerm>> weighted(n);
    parallelFor(n, settings.workers, [&](std::size_t d) {
        auto& out = weighted[d];
        out.reserve(docTerms[d].size());
        double sq = 0.0;
        for (const auto& [t, tf] : docTerms[d]) {
            if (idf[t] <= 0.0) continue;
            const double tfw = settings.tf == TfScheme::Raw ? tf : 1.0 + std::log(tf);
            const double w = tfw * idf[t];
            if (!(w > 0.0)) continue;
            out.push_back({t, w});
            sq += w * w;
        }
        if (settings.normalization == Normalization::Concept && sq > 0.0) {
            const double norm = std::sqrt(sq);
            for (auto& e : out) e.weight /= norm;
        }
    });

    std::vector<std::vector<SparseEntry>> postings(names.size());
    for (std::size_t d = 0; d < n; ++d)
        for (const auto& e : weighted[d])
            if (e.weight > 0.0) postings[e.term].push_back({static_cast<ConceptId>(d), e.weight});

    if (settings.normalization == Normalization::Term) {
        for (auto& p : postings) {
            double sq = 0.0;
            for (const auto& e : p) sq += e.weight * e.weight;
            if (sq <= 0.0) continue;
            const double norm = std::sqrt(sq);
            for (auto& e : p) e.weight /= norm;
        }
    }
    if (settings.topK > 0) {
        for (auto& p : postings) {
            if (p.size() <= settings.topK) continue;
            std::stable_sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.weight > b.weight; });
            p.resize(settings.topK);
            std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.conceptId < b.conceptId; });
        }
    }

    std::vector<std::uint32_t> order;
    for (std::uint32_t t = 0; t < names.size(); ++t)
        if (!postings[t].empty()) order.push_back(t);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return names[a] < names[b]; });

    std::vector<std::string> terms;
    std::vector<SparseVector> vectors;
    terms.reserve(order.size());
    vectors.reserve(order.size());
    for (auto t : order) {
        terms.push_back(names[t]);
        vectors.emplace_back(std::move(postings[t]));
    }

    std::vector<ConceptInfo> concepts;
    concepts.reserve(n);
    for (const auto& d : documents) concepts.push_back({d.pageId, d.title});

    auto metadata = settings.extraMetadata;
    metadata["pipeline_mode"] = std::string(toString(settings.mode));
    metadata["tokenizer"] = "ascii-letters-lowercase-v1";
    metadata["stopwords"] = text::defaultStopwords().id();
    metadata["stemmer"] = settings.mode == PipelineMode::Stemmed ? "porter-min3-fixpoint" : "lemma";
    metadata["tf"] = std::string(toString(settings.tf));
    metadata["idf"] = "ln(N/df)";
    metadata["normalization"] = std::string(toString(settings.normalization));
    metadata["top_k"] = std::to_string(settings.topK);
    metadata["corpus_terms"] = std::to_string(names.size());
    metadata["corpus_postings"] = std::to_string(corpusPostings);
    return InvertedIndex(std::move(concepts), std::move(terms), std::move(vectors), std::move(metadata));
}

SparseVector conceptVector(const InvertedIndex& index, std::string_view word) {
    const auto tokens = text::tokenize(word);
    std::vector<std::string> terms;
    if (index.mode() == PipelineMode::Stemmed) {
        for (auto& t : text::normalizeStemmed(tokens, text::defaultStopwords())) terms.push_back(std::move(t.text));
    } else {
        for (const auto& t : tokens)
            if (t.surface.size() >= text::kMinTermLength && !text::defaultStopwords().contains(t.surface))
                terms.push_back(t.surface);
    }
    SparseVector out;
    for (const auto& t : terms) {
        const auto* v = index.find(t);
        if (!v) continue;
        out = out.empty() ? *v : out + *v;
    }
    return out;
}

double esa(const InvertedIndex& index, std::string_view w1, std::string_view w2) {
    return cosine(conceptVector(index, w1), conceptVector(index, w2));
}

IndexStats indexStats(const InvertedIndex& index) {
    IndexStats s;
    s.conceptCount = index.conceptCount();
    s.indexedTermCount = index.termCount();
    std::uint64_t postings = 0;
    std::size_t terms = 0;
    const auto& md = index.metadata();
    auto ct = md.find("corpus_terms");
    auto cp = md.find("corpus_postings");
    if (ct != md.end() && cp != md.end()) {
        terms = std::stoull(ct->second);
        postings = std::stoull(cp->second);
    } else {
        terms = index.termCount();
        for (const auto& v : index.vectors()) postings += v.size();
    }
    s.termCount = terms;
    if (s.conceptCount > 0) s.termsPerConcept = static_cast<double>(postings) / static_cast<double>(s.conceptCount);
    if (terms > 0) s.meanDocumentFrequency = static_cast<double>(postings) / static_cast<double>(terms);
    if (s.conceptCount > 0) s.termDensity = s.meanDocumentFrequency / static_cast<double>(s.conceptCount);
    return s;
}

std::string formatStats(const IndexStats& s) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os << "#concepts\t" << s.conceptCount << '\n';
    os.precision(4);
    os << "#terms/concept\t" << s.termsPerConcept << '\n';
    os << "#terms\t" << s.termCount << '\n';
    os << "mean df\t" << s.meanDocumentFrequency << '\n';
    os.precision(5);
    os << "term density\t" << s.termDensity << '\n';
    os << "#indexed terms\t" << s.indexedTermCount << '\n';
    return os.str();
}

}  // namespace relmix::esa
