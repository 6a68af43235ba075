#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace relmix::wordnet {

enum class Pos : char { Noun = 'n', Verb = 'v', Adjective = 'a', Adverb = 'r' };

/// Dense index into WordnetGraph::synsets().
using SynsetId = std::uint32_t;

struct Synset {
    std::string key;  // pos letter + 8-digit offset, e.g. "n02084071"
    Pos pos = Pos::Noun;
    std::vector<std::string> lemmas;  // lowercase, '_' joins multiword lemmas
    std::vector<SynsetId> hypernyms;  // hypernyms and instance hypernyms
    bool virtualRoot = false;
};

/// Hypernym graph over synsets. Nouns and verbs each get a virtual root
/// joining their top-level synsets, so every same-POS pair of those has a
/// common subsumer. Immutable after construction.
class WordnetGraph {
public:
    /// Incremental construction, used by the database loader and by fixtures.
    class Builder {
    public:
        /// Hypernym keys may refer to synsets added later.
        /// `origin` (e.g. "data.noun:42") is quoted when the synset fails to link.
        void addSynset(std::string key, Pos pos, std::vector<std::string> lemmas,
                       std::vector<std::string> hypernymKeys, std::string origin = {});
        /// Adds lemma -> synset mappings beyond those implied by addSynset (index files).
        void addLemma(std::string lemma, std::string synsetKey, std::string origin = {});
        void addException(Pos pos, std::string inflected, std::string base);
        WordnetGraph build() &&;

    private:
        struct Pending {
            std::string key;
            Pos pos;
            std::vector<std::string> lemmas;
            std::vector<std::string> hypernymKeys;
            std::string origin;
        };
        struct PendingLemma {
            std::string lemma;
            std::string key;
            std::string origin;
        };
        std::vector<Pending> pending_;
        std::vector<PendingLemma> extraLemmas_;
        std::vector<std::tuple<Pos, std::string, std::string>> exceptions_;
    };

    std::size_t size() const noexcept { return synsets_.size(); }
    const Synset& synset(SynsetId id) const { return synsets_.at(id); }
    const std::vector<Synset>& synsets() const noexcept { return synsets_; }
    std::optional<SynsetId> find(std::string_view key) const;
    std::size_t count(Pos pos) const;  // real synsets only

    /// Synsets holding the lemma exactly (lowercased, spaces as '_').
    std::span<const SynsetId> sensesOf(std::string_view lemma) const;
    /// Synsets of the surface form together with those of every base form
    /// reachable by the exception lists or the detachment rules.
    std::vector<SynsetId> lookup(std::string_view word) const;

    std::span<const SynsetId> hyponyms(SynsetId id) const { return hyponyms_.at(id); }
    std::optional<SynsetId> root(Pos pos) const;
    /// Longest hypernym chain to the virtual root (root depth 0). Synsets of
    /// POS without a hierarchy have depth 0.
    unsigned depth(SynsetId id) const { return depth_.at(id); }
    /// Largest depth in the hierarchy of `pos`.
    unsigned maxDepth(Pos pos) const;
    /// The synset and all its transitive hypernyms.
    std::vector<SynsetId> ancestors(SynsetId id) const;

    bool hasInformationContent() const noexcept { return !ic_.empty(); }
    double informationContent(SynsetId id) const;
    const std::vector<double>& informationContentTable() const noexcept { return ic_; }
    /// Installs an IC table aligned with synsets().
    void setInformationContent(std::vector<double> ic);

private:
    std::vector<Synset> synsets_;
    std::unordered_map<std::string, SynsetId> byKey_;
    std::unordered_map<std::string, std::vector<SynsetId>> lemmas_;
    std::unordered_map<std::string, std::vector<std::string>> exceptions_;  // "pos:inflected" -> bases
    std::vector<std::vector<SynsetId>> hyponyms_;
    std::vector<unsigned> depth_;
    std::array<unsigned, 4> maxDepth_{};
    std::vector<double> ic_;
};

/// Reads data.{noun,verb,adj,adv} (and index.* / *.exc when present) from a
/// WordNet 3.0 `dict` directory. Errors name the file and line.
WordnetGraph loadWordnet(const std::string& directory);

/// Parses one data.* file into the builder.
void readDataFile(std::istream& in, const std::string& sourceName, WordnetGraph::Builder& builder);

/// Fewest edges between the synsets, edges traversed in either direction;
/// nullopt when they are not connected.
std::optional<unsigned> pathLength(const WordnetGraph& g, SynsetId s1, SynsetId s2);

/// Shortest distance between any member of `from` and any member of `to`.
std::optional<unsigned> pathLength(const WordnetGraph& g, std::span<const SynsetId> from,
                                   std::span<const SynsetId> to);

/// Deepest common hypernym (the synsets themselves included).
std::optional<SynsetId> lowestCommonSubsumer(const WordnetGraph& g, SynsetId s1, SynsetId s2);

enum class Measure { WNP, WUP, LCH, RES, JCN, LIN };

std::string_view toString(Measure m);
Measure parseMeasure(std::string_view s);
bool needsInformationContent(Measure m);

struct MeasureOptions {
    /// JCN value when IC(s1) + IC(s2) - 2 IC(lcs) is zero.
    double jcnCeiling = 1e6;
};

/// WNP = 1/(1+len); WUP = 2 depth(lcs)/(depth1+depth2);
/// LCH = -ln((len+1)/(2 D)) with D the deepest chain of the POS counted in nodes;
/// RES = IC(lcs); LIN = 2 IC(lcs)/(IC1+IC2); JCN = 1/(IC1+IC2-2 IC(lcs)).
/// Pairs without a common hierarchy score 0.
double synsetMeasure(Measure kind, const WordnetGraph& g, SynsetId s1, SynsetId s2, const MeasureOptions& options = {});

/// Maximum of synsetMeasure over all sense pairs; 0 when a word is unknown.
double wordMeasure(Measure kind, const WordnetGraph& g, std::string_view w1, std::string_view w2,
                   const MeasureOptions& options = {});

struct IcOptions {
    /// Look lemmas up under the stemmed index pipeline (counts keyed by stems).
    bool stemLemmas = true;
};

/// Resnik-style information content from corpus term counts: each lemma's
/// count is split evenly over its senses, every synset gets one extra
/// (add-one smoothing), counts propagate to every ancestor, and
/// IC(s) = -ln(count(s) / count(root)). Throws DomainError on empty counts.
std::vector<double> computeIC(const WordnetGraph& g, const std::unordered_map<std::string, double>& counts,
                              const IcOptions& options = {});

/// `synsetKey<TAB>ic` per line.
void writeIC(const WordnetGraph& g, std::ostream& out);
std::vector<double> readIC(const WordnetGraph& g, std::istream& in, const std::string& sourceName = "<ic>");

}  // namespace relmix::wordnet
