#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace relmix::esa {

using ConceptId = std::uint32_t;

struct SparseEntry {
    ConceptId conceptId = 0;
    double weight = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Concept vector of one term: entries sorted by strictly increasing concept
/// id, no zero weights.
class SparseVector {
public:
    SparseVector() = default;
    /// Takes entries already sorted by concept id; throws if the invariant fails.
    explicit SparseVector(std::vector<SparseEntry> entries);

    const std::vector<SparseEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    double squaredNorm() const;

    /// Sum of two vectors (merge by concept id).
    friend SparseVector operator+(const SparseVector& a, const SparseVector& b);
    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    std::vector<SparseEntry> entries_;
};

double dot(const SparseVector& a, const SparseVector& b);

/// Cosine similarity in [0, 1]; 0 when either vector is empty. Exactly
/// symmetric, and exactly 1 for a vector with itself.
double cosine(const SparseVector& a, const SparseVector& b);

enum class PipelineMode { Stemmed, PosNoun, PosAll };
enum class TfScheme { Raw, Log };
enum class Normalization { Concept, Term, None };

std::string_view toString(PipelineMode m);
std::string_view toString(TfScheme t);
std::string_view toString(Normalization n);
PipelineMode parsePipelineMode(std::string_view s);
TfScheme parseTfScheme(std::string_view s);
Normalization parseNormalization(std::string_view s);

struct BuildSettings {
    PipelineMode mode = PipelineMode::Stemmed;
    TfScheme tf = TfScheme::Raw;
    Normalization normalization = Normalization::Concept;
    std::size_t topK = 0;  // 0 keeps every posting
    unsigned workers = 1;
    /// Free-form provenance (filter criteria, config hash, ...) stored verbatim.
    std::map<std::string, std::string> extraMetadata;
};

/// One concept's term frequencies, already normalized by the text pipeline
/// (and multiplied by sentence weights where used).
struct ConceptDocument {
    std::int64_t pageId = 0;
    std::string title;
    std::vector<std::pair<std::string, double>> termFrequencies;
};

struct ConceptInfo {
    std::int64_t pageId = 0;
    std::string title;

    friend bool operator==(const ConceptInfo&, const ConceptInfo&) = default;
};

class InvertedIndex {
public:
    InvertedIndex() = default;
    InvertedIndex(std::vector<ConceptInfo> concepts, std::vector<std::string> terms,
                  std::vector<SparseVector> vectors, std::map<std::string, std::string> metadata);

    /// Stored vector of an index term, or nullptr.
    const SparseVector* find(std::string_view term) const;
    std::size_t documentFrequency(std::string_view term) const;

    std::size_t conceptCount() const noexcept { return concepts_.size(); }
    std::size_t termCount() const noexcept { return terms_.size(); }
    const std::vector<ConceptInfo>& concepts() const noexcept { return concepts_; }
    /// Sorted lexicographically; aligned with vectors().
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::vector<SparseVector>& vectors() const noexcept { return vectors_; }
    const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }
    PipelineMode mode() const;

    friend bool operator==(const InvertedIndex& a, const InvertedIndex& b) {
        return a.concepts_ == b.concepts_ && a.terms_ == b.terms_ && a.vectors_ == b.vectors_ &&
               a.metadata_ == b.metadata_;
    }

private:
    std::vector<ConceptInfo> concepts_;
    std::vector<std::string> terms_;
    std::vector<SparseVector> vectors_;
    std::map<std::string, std::string> metadata_;
    std::unordered_map<std::string, std::uint32_t> lookup_;
};

/// tfidf index: weight(t, c) = tf(t, c) * ln(N / df(t)), each concept's weights
/// L2-normalized (by default) and inverted into per-term concept vectors.
/// Terms present in every concept get idf 0 and are dropped. Result is
/// bit-identical for any worker count. Throws DomainError on an empty corpus.
InvertedIndex buildIndex(std::span<const ConceptDocument> documents, const BuildSettings& settings);

/// Applies the index's own text pipeline to `word`; unknown words give an
/// empty vector. A word normalizing to several terms gets their sum.
SparseVector conceptVector(const InvertedIndex& index, std::string_view word);

double esa(const InvertedIndex& index, std::string_view w1, std::string_view w2);

struct IndexStats {
    std::size_t conceptCount = 0;
    double termsPerConcept = 0.0;
    std::size_t termCount = 0;
    double meanDocumentFrequency = 0.0;
    double termDensity = 0.0;
    std::size_t indexedTermCount = 0;  // terms surviving the idf cut
};

/// Corpus statistics over distinct terms per concept, computed before
/// ubiquitous terms are dropped.
IndexStats indexStats(const InvertedIndex& index);
std::string formatStats(const IndexStats& stats);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

void writeIndex(const InvertedIndex& index, std::ostream& out);
InvertedIndex readIndex(std::istream& in, const std::string& sourceName = "<index>");
void saveIndex(const InvertedIndex& index, const std::string& path);
InvertedIndex loadIndex(const std::string& path);

/// `term<TAB>conceptId:weight,...` per line, weights printed round-trip exact.
void exportText(const InvertedIndex& index, std::ostream& out);

}  // namespace relmix::esa
