#include "relmix/config.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "relmix/error.hpp"

namespace relmix::harness {

namespace {

using combine::formatDouble;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename T>
T parseUnsigned(std::string_view key, std::string_view v) {
    T out{};
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
        throw Error("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
    return out;
}

bool parseBool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw Error("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
}

double parseReal(std::string_view key, std::string_view v) {
    try {
        return combine::parseDouble(v);
    } catch (const Error&) {
        throw Error("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
    }
}

const char* boolText(bool b) { return b ? "true" : "false"; }

// Keys that shape the index, in serialization order.
constexpr std::string_view kIndexKeys[] = {"mode",        "min_terms",    "min_links",      "sentence_weight",
                                           "prune_sections", "prune_threshold", "banned_headings", "tf",
                                           "normalization",  "top_k",       "pos_annotations"};

std::vector<std::pair<std::string, std::string>> entries(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> e = {
        {"mode", std::string(esa::toString(c.mode))},
        {"min_terms", std::to_string(c.filter.minTerms)},
        {"min_links", std::to_string(c.filter.minLinks)},
        {"sentence_weight", std::to_string(c.sentenceWeight)},
        {"prune_sections", boolText(c.pruneSections)},
        {"prune_threshold", formatDouble(c.pruneThreshold)},
        {"banned_headings", c.bannedHeadings},
        {"tf", std::string(esa::toString(c.tf))},
        {"normalization", std::string(esa::toString(c.normalization))},
        {"top_k", std::to_string(c.topK)},
        {"workers", std::to_string(c.workers)},
    };
    for (auto p : combine::kAllParams) e.emplace_back(combine::keyOf(p), formatDouble(combine::get(c.params, p)));
    const std::vector<std::pair<std::string, std::string>> rest = {
        {"min_year", std::to_string(c.minYear)},
        {"seed", std::to_string(c.seed)},
        {"tune_restarts", std::to_string(c.tuneRestarts)},
        {"dedupe", boolText(c.dedupe)},
        {"skip_failures", boolText(c.skipFailures)},
        {"svr_degree", std::to_string(c.svrDegree)},
        {"svr_c", formatDouble(c.svrC)},
        {"svr_epsilon", formatDouble(c.svrEpsilon)},
        {"svr_folds", std::to_string(c.svrFolds)},
        {"svr_features", std::string(toString(c.svrFeatures))},
        {"lowess_span", formatDouble(c.lowessSpan)},
        {"lowess_iterations", std::to_string(c.lowessIterations)},
        {"dump", c.dump},
        {"pos_annotations", c.posAnnotations},
        {"wordnet_dir", c.wordnetDir},
        {"ic_table", c.icTable},
        {"ngrams_uni", c.ngramsUni},
        {"ngrams_bi", c.ngramsBi},
        {"testset", c.testset},
        {"index", c.index},
        {"out_dir", c.outDir},
    };
    e.insert(e.end(), rest.begin(), rest.end());
    return e;
}

}  // namespace

corpus::PruneSettings RunConfig::pruneSettings() const {
    corpus::PruneSettings s;
    s.threshold = pruneThreshold;
    s.bannedHeadings.clear();
    std::string_view rest = bannedHeadings;
    while (!rest.empty()) {
        auto comma = rest.find(',');
        auto h = trim(rest.substr(0, comma));
        if (!h.empty()) s.bannedHeadings.emplace(h);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return s;
}

void RunConfig::validate() const {
    params.validate();
    if (sentenceWeight < 1) throw Error("sentence_weight must be a positive integer");
    if (mode != esa::PipelineMode::Stemmed && posAnnotations.empty())
        throw Error("mode " + std::string(esa::toString(mode)) + " needs pos_annotations");
    if (mode != esa::PipelineMode::Stemmed && sentenceWeight != 1)
        throw Error("sentence_weight applies to the stemmed pipeline only");
    if (!(pruneThreshold >= 0 && pruneThreshold <= 1)) throw Error("prune_threshold must lie in [0, 1]");
    if (svrDegree < 1) throw Error("svr_degree must be at least 1");
    if (!(svrC > 0)) throw Error("svr_c must be positive");
    if (!(svrEpsilon >= 0)) throw Error("svr_epsilon must be non-negative");
    if (svrFolds < 2) throw Error("svr_folds must be at least 2");
    if (!(lowessSpan > 0 && lowessSpan <= 1)) throw Error("lowess_span must lie in (0, 1]");
    if (workers < 1) throw Error("workers must be at least 1");
}

std::string_view toString(SvrFeatures f) { return f == SvrFeatures::Components ? "components" : "combined"; }

SvrFeatures parseSvrFeatures(std::string_view s) {
    if (s == "components") return SvrFeatures::Components;
    if (s == "combined") return SvrFeatures::Combined;
    throw Error("unknown svr_features '" + std::string(s) + "'");
}

void setConfigValue(RunConfig& c, std::string_view key, std::string_view value) {
    const auto v = trim(value);
    if (auto p = combine::paramFromKey(key)) {
        combine::set(c.params, *p, parseReal(key, v));
        return;
    }
    if (key == "mode") c.mode = esa::parsePipelineMode(v);
    else if (key == "min_terms") c.filter.minTerms = parseUnsigned<std::size_t>(key, v);
    else if (key == "min_links") c.filter.minLinks = parseUnsigned<std::size_t>(key, v);
    else if (key == "sentence_weight") c.sentenceWeight = parseUnsigned<int>(key, v);
    else if (key == "prune_sections") c.pruneSections = parseBool(key, v);
    else if (key == "prune_threshold") c.pruneThreshold = parseReal(key, v);
    else if (key == "banned_headings") c.bannedHeadings = std::string(v);
    else if (key == "tf") c.tf = esa::parseTfScheme(v);
    else if (key == "normalization") c.normalization = esa::parseNormalization(v);
    else if (key == "top_k") c.topK = parseUnsigned<std::size_t>(key, v);
    else if (key == "workers") c.workers = parseUnsigned<unsigned>(key, v);
    else if (key == "min_year") c.minYear = parseUnsigned<int>(key, v);
    else if (key == "seed") c.seed = parseUnsigned<std::uint64_t>(key, v);
    else if (key == "tune_restarts") c.tuneRestarts = parseUnsigned<unsigned>(key, v);
    else if (key == "dedupe") c.dedupe = parseBool(key, v);
    else if (key == "skip_failures") c.skipFailures = parseBool(key, v);
    else if (key == "svr_degree") c.svrDegree = parseUnsigned<unsigned>(key, v);
    else if (key == "svr_c") c.svrC = parseReal(key, v);
    else if (key == "svr_epsilon") c.svrEpsilon = parseReal(key, v);
    else if (key == "svr_folds") c.svrFolds = parseUnsigned<std::size_t>(key, v);
    else if (key == "svr_features") c.svrFeatures = parseSvrFeatures(v);
    else if (key == "lowess_span") c.lowessSpan = parseReal(key, v);
    else if (key == "lowess_iterations") c.lowessIterations = parseUnsigned<unsigned>(key, v);
    else if (key == "dump") c.dump = std::string(v);
    else if (key == "pos_annotations") c.posAnnotations = std::string(v);
    else if (key == "wordnet_dir") c.wordnetDir = std::string(v);
    else if (key == "ic_table") c.icTable = std::string(v);
    else if (key == "ngrams_uni") c.ngramsUni = std::string(v);
    else if (key == "ngrams_bi") c.ngramsBi = std::string(v);
    else if (key == "testset") c.testset = std::string(v);
    else if (key == "index") c.index = std::string(v);
    else if (key == "out_dir") c.outDir = std::string(v);
    else throw Error("unknown config key '" + std::string(key) + "'");
}

void writeConfig(const RunConfig& cfg, std::ostream& out) {
    for (const auto& [k, v] : entries(cfg)) out << k << '=' << v << '\n';
}

RunConfig readConfig(std::istream& in, const std::string& sourceName) {
    RunConfig cfg;
    std::string line;
    std::uint64_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError(sourceName, lineNo, "expected key=value");
        try {
            setConfigValue(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(sourceName, lineNo, e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw ParseError(sourceName, lineNo, e.what());
    }
    return cfg;
}

void checkInputPaths(const RunConfig& cfg) {
    const std::pair<const char*, const std::string*> inputs[] = {
        {"dump", &cfg.dump},           {"pos_annotations", &cfg.posAnnotations}, {"wordnet_dir", &cfg.wordnetDir},
        {"ic_table", &cfg.icTable},    {"ngrams_uni", &cfg.ngramsUni},           {"ngrams_bi", &cfg.ngramsBi},
        {"testset", &cfg.testset},
    };
    for (const auto& [key, path] : inputs)
        if (!path->empty() && !std::filesystem::exists(*path))
            throw Error(std::string(key) + " not found: " + *path);
}

RunConfig loadConfig(const std::string& path, bool checkPaths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path);
    auto cfg = readConfig(in, path);
    if (checkPaths) checkInputPaths(cfg);
    return cfg;
}

void saveConfig(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    writeConfig(cfg, out);
}

std::string fnv1aHex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string configHash(const RunConfig& cfg) {
    // Where artifacts go does not change them.
    auto c = cfg;
    c.outDir.clear();
    std::ostringstream ss;
    writeConfig(c, ss);
    return fnv1aHex(ss.str());
}

std::string indexConfigHash(const RunConfig& cfg) {
    std::string canon;
    for (const auto& [k, v] : entries(cfg))
        for (auto key : kIndexKeys)
            if (k == key) canon += k + "=" + v + "\n";
    return fnv1aHex(canon);
}

}  // namespace relmix::harness
