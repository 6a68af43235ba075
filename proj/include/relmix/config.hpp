#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "relmix/combiner.hpp"
#include "relmix/corpus.hpp"
#include "relmix/esa.hpp"

namespace relmix::harness {

enum class SvrFeatures { Components, Combined };

/// One experiment: pipeline variant, filters, combination parameters and inputs.
struct RunConfig {
    esa::PipelineMode mode = esa::PipelineMode::Stemmed;
    corpus::FilterCriteria filter = corpus::FilterCriteria::adapted2011();
    int sentenceWeight = 1;
    bool pruneSections = false;
    double pruneThreshold = 0.8;
    std::string bannedHeadings = "History,External links,References,See also,Further reading,Bibliography";
    esa::TfScheme tf = esa::TfScheme::Raw;
    esa::Normalization normalization = esa::Normalization::Concept;
    std::size_t topK = 0;
    unsigned workers = 1;

    combine::CombineParams params;
    int minYear = 1970;

    std::uint64_t seed = 42;
    unsigned tuneRestarts = 8;
    bool dedupe = false;
    bool skipFailures = false;

    unsigned svrDegree = 4;
    double svrC = 1.0;
    double svrEpsilon = 0.1;
    std::size_t svrFolds = 10;
    SvrFeatures svrFeatures = SvrFeatures::Components;

    double lowessSpan = 2.0 / 3.0;
    unsigned lowessIterations = 3;

    std::string dump;
    std::string posAnnotations;
    std::string wordnetDir;
    std::string icTable;
    std::string ngramsUni;
    std::string ngramsBi;
    std::string testset;
    std::string index;
    std::string outDir = ".";

    corpus::PruneSettings pruneSettings() const;

    /// Throws Error on an inconsistent combination (e.g. POS modes without annotations).
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string_view toString(SvrFeatures f);
SvrFeatures parseSvrFeatures(std::string_view s);

/// Sets one `key=value` entry; throws Error naming an unknown key.
void setConfigValue(RunConfig& cfg, std::string_view key, std::string_view value);

/// Every key, one per line, in a fixed order.
void writeConfig(const RunConfig& cfg, std::ostream& out);
RunConfig readConfig(std::istream& in, const std::string& sourceName = "<config>");

/// Missing input paths named in the config are reported as errors.
void checkInputPaths(const RunConfig& cfg);

RunConfig loadConfig(const std::string& path, bool checkPaths = true);
void saveConfig(const RunConfig& cfg, const std::string& path);

/// FNV-1a over the canonical serialization (out_dir excluded), as 16 hex digits.
std::string configHash(const RunConfig& cfg);
/// Same, restricted to the settings that determine the index contents.
std::string indexConfigHash(const RunConfig& cfg);

std::string fnv1aHex(std::string_view data);

}  // namespace relmix::harness
