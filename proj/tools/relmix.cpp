// relmix command-line front end. Exit codes: 0 success, 1 runtime failure
// (one `relmix: error: <kind>: <message>` line on stderr), 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "relmix/collocation.hpp"
#include "relmix/combiner.hpp"
#include "relmix/config.hpp"
#include "relmix/error.hpp"
#include "relmix/esa.hpp"
#include "relmix/evaluation.hpp"
#include "relmix/pipeline.hpp"
#include "relmix/svr.hpp"
#include "relmix/wordnet.hpp"

namespace fs = std::filesystem;
using namespace relmix;

namespace {

struct MissingInput : Error {
    using Error::Error;
};

struct ConfigMismatch : Error {
    using Error::Error;
};

struct Options {
    std::string config;
    std::optional<std::string> dump, wordnetDir, ngramsUni, ngramsBi, testset, index, mode, outDir, params;
    std::optional<std::size_t> minTerms, minLinks;
    std::optional<int> sentenceWeight;
    std::optional<std::string> pruneSections;
    std::optional<std::uint64_t> seed;
    bool dedupe = false;
    bool force = false;
    std::string measure = "ewc";
    std::string svrModel = "ewc";
    std::string exportPath;
    std::vector<std::string> words;
};

harness::RunConfig resolveConfig(const Options& o, bool indexIsInput = true) {
    harness::RunConfig cfg;
    if (!o.config.empty()) {
        if (!fs::exists(o.config)) throw MissingInput("config not found: " + o.config);
        cfg = harness::loadConfig(o.config, false);
    }
    auto set = [&](std::string_view key, const auto& v) {
        if (v) {
            std::ostringstream ss;
            ss << *v;
            harness::setConfigValue(cfg, key, ss.str());
        }
    };
    set("dump", o.dump);
    set("wordnet_dir", o.wordnetDir);
    set("ngrams_uni", o.ngramsUni);
    set("ngrams_bi", o.ngramsBi);
    set("testset", o.testset);
    set("index", o.index);
    set("mode", o.mode);
    set("out_dir", o.outDir);
    set("min_terms", o.minTerms);
    set("min_links", o.minLinks);
    set("sentence_weight", o.sentenceWeight);
    set("prune_sections", o.pruneSections);
    set("seed", o.seed);
    if (o.dedupe) cfg.dedupe = true;
    if (o.params) {
        if (!fs::exists(*o.params)) throw MissingInput("params file not found: " + *o.params);
        cfg.params = combine::loadParams(*o.params);
    }
    cfg.validate();
    try {
        harness::checkInputPaths(cfg);
    } catch (const Error& e) {
        throw MissingInput(e.what());
    }
    if (indexIsInput && !cfg.index.empty() && !fs::exists(cfg.index))
        throw MissingInput("index not found: " + cfg.index);
    return cfg;
}

void require(bool present, const std::string& what) {
    if (!present) throw MissingInput(what + " not given");
}

std::string outPath(const harness::RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.outDir);
    return (fs::path(cfg.outDir) / name).string();
}

std::ofstream openOut(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

std::ofstream openCsv(const std::string& path, const harness::RunConfig& cfg) {
    auto out = openOut(path);
    out << "# config_hash=" << harness::configHash(cfg) << '\n';
    return out;
}

void writeManifest(const harness::RunConfig& cfg, const std::string& command, nlohmann::ordered_json extra) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config_hash"] = harness::configHash(cfg);
    j["index_config_hash"] = harness::indexConfigHash(cfg);
    for (auto& [k, v] : extra.items()) j[k] = v;
    auto out = openOut(outPath(cfg, "manifest.json"));
    out << j.dump(2) << '\n';
    std::ostringstream cs;
    harness::writeConfig(cfg, cs);
    auto cfgOut = openOut(outPath(cfg, "run.config"));
    cfgOut << cs.str();
}

// ---------------------------------------------------------------- scoring over a test set

struct Scored {
    eval::TestSet set;
    std::unique_ptr<harness::Engine> engine;
};

Scored loadForTestSet(const harness::RunConfig& cfg, bool force) {
    require(!cfg.testset.empty(), "--testset");
    Scored s;
    s.set = eval::loadTestSetFile(cfg.testset, cfg.dedupe);
    if (!s.set.duplicates.empty())
        std::cerr << "relmix: note: " << s.set.duplicates.size() << " duplicate pair(s) in " << cfg.testset
                  << (cfg.dedupe ? " (dropped)" : " (kept)") << '\n';
    std::unordered_set<std::string> vocab;
    for (const auto& p : s.set.pairs) {
        std::string a = p.w1, b = p.w2;
        std::transform(a.begin(), a.end(), a.begin(), [](unsigned char c) { return std::tolower(c); });
        std::transform(b.begin(), b.end(), b.begin(), [](unsigned char c) { return std::tolower(c); });
        vocab.insert(a);
        vocab.insert(b);
    }
    s.engine = std::make_unique<harness::Engine>(cfg, &vocab);
    if (const auto* idx = s.engine->index()) {
        auto it = idx->metadata().find("index_config_hash");
        if (it != idx->metadata().end() && it->second != harness::indexConfigHash(cfg) && !force)
            throw ConfigMismatch("index " + cfg.index + " was built with index settings " + it->second +
                                 ", config has " + harness::indexConfigHash(cfg) + " (use --force to override)");
    }
    return s;
}

eval::ScoreFn scoreFunction(const harness::Engine& engine, const std::string& measure) {
    if (measure == "gold") return [](const eval::WordPair& p) { return p.gold; };
    if (measure == "neg-gold") return [](const eval::WordPair& p) { return -p.gold; };
    // Validates the name before any pair is scored.
    static const std::vector<std::string> known = {"esa", "wnp", "wup", "lch", "res", "jcn",
                                                   "lin", "colloc", "cxi", "ew", "ewc"};
    if (std::find(known.begin(), known.end(), measure) == known.end())
        throw Error("unknown measure '" + measure + "'");
    return [&engine, measure](const eval::WordPair& p) { return engine.measure(measure, p.w1, p.w2); };
}

// ---------------------------------------------------------------- commands

int cmdBuildIndex(const Options& o) {
    auto cfg = resolveConfig(o, false);
    require(!cfg.dump.empty(), "--dump");
    const std::string indexPath = cfg.index.empty() ? outPath(cfg, "index.bin") : cfg.index;
    harness::BuildReport report;
    std::unordered_map<std::string, double> counts;
    const auto index = harness::buildIndexFromConfig(cfg, &report, &counts);
    if (auto parent = fs::path(indexPath).parent_path(); !parent.empty()) fs::create_directories(parent);
    esa::saveIndex(index, indexPath);
    {
        auto out = openOut(harness::termCountsPath(indexPath));
        harness::writeTermCounts(counts, out);
    }
    std::cout << "index=" << indexPath << " pages=" << report.candidatePages << " concepts=" << report.concepts
              << " terms=" << index.termCount() << " config_hash=" << harness::configHash(cfg)
              << (report.ingest.fromCache ? " cache=hit" : "") << '\n';
    return 0;
}

int cmdMeasure(const Options& o) {
    auto cfg = resolveConfig(o);
    if (o.words.size() != 2) throw Error("measure needs exactly two words");
    std::unordered_set<std::string> vocab;
    for (auto w : o.words) {
        std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
        vocab.insert(w);
    }
    harness::Engine engine(cfg, &vocab);
    const auto c = engine.components(o.words[0], o.words[1]);
    const auto& p = cfg.params;
    std::cout << "esa=" << combine::formatDouble(c.esa) << '\n'
              << "wnp=" << combine::formatDouble(c.wnp) << '\n'
              << "colloc=" << combine::formatDouble(c.direct) << '\n'
              << "colloc_inverse=" << combine::formatDouble(c.inverse) << '\n'
              << "cxi=" << combine::formatDouble(c.cxi(p.xi)) << '\n'
              << "ew=" << combine::formatDouble(combine::ew(c.esa, c.wnp, p)) << '\n'
              << "ewc=" << combine::formatDouble(combine::ewc(c.esa, c.wnp, c.cxi(p.xi), p)) << '\n';
    return 0;
}

int cmdEval(const Options& o, const std::string& which) {
    auto cfg = resolveConfig(o);
    auto s = loadForTestSet(cfg, o.force);
    eval::EvalOptions eo;
    eo.skipFailures = cfg.skipFailures;
    const auto report = eval::evaluateMeasure(s.set.pairs, scoreFunction(*s.engine, o.measure), eo);
    for (const auto& sk : report.skipped)
        std::cerr << "relmix: note: skipped pair " << sk.index + 1 << ": " << sk.reason << '\n';

    nlohmann::ordered_json extra;
    extra["measure"] = o.measure;
    extra["pairs"] = report.pairs.size();
    extra["rho"] = report.rho;
    std::vector<std::string> files;

    if (which == "eval" || which == "stability") {
        auto out = openCsv(outPath(cfg, "stability.csv"), cfg);
        eval::writeStabilityCsv(report, out);
        files.push_back("stability.csv");
    }
    if (which == "eval" || which == "removal-curve") {
        auto out = openCsv(outPath(cfg, "removal_curve.csv"), cfg);
        eval::writeRemovalCsv(report, out);
        files.push_back("removal_curve.csv");
    }
    if (which == "eval") {
        // Collocation index against stability when n-grams are loaded, else score against gold.
        std::vector<double> xs, ys;
        std::string xName = "score", yName = "gold";
        if (s.engine->ngrams()) {
            xName = "collocation_index";
            yName = "delta_rho";
            for (std::size_t i = 0; i < report.pairs.size(); ++i) {
                xs.push_back(s.engine->components(report.pairs[i].w1, report.pairs[i].w2).direct);
                ys.push_back(report.stability[i]);
            }
        } else {
            xs = report.scores;
            for (const auto& p : report.pairs) ys.push_back(p.gold);
        }
        extra["lowess_x"] = xName;
        extra["lowess_y"] = yName;
        extra["lowess_span"] = cfg.lowessSpan;
        extra["lowess_iterations"] = cfg.lowessIterations;
        try {
            const auto yhat = eval::lowess(xs, ys, {cfg.lowessSpan, cfg.lowessIterations});
            auto out = openCsv(outPath(cfg, "lowess.csv"), cfg);
            eval::writeLowessCsv(xs, ys, yhat, out);
            auto svg = openOut(outPath(cfg, "lowess.svg"));
            eval::writeScatterSvg(svg, xs, ys, yhat, {o.measure + " (rho " + combine::formatDouble(report.rho) + ")", xName, yName});
            files.push_back("lowess.csv");
            files.push_back("lowess.svg");
        } catch (const DomainError& e) {
            std::cerr << "relmix: note: no lowess output: " << e.what() << '\n';
        }
        std::vector<double> ks, rhos;
        for (const auto& pt : report.removalCurve) {
            ks.push_back(static_cast<double>(pt.removed));
            rhos.push_back(pt.rho);
        }
        auto svg = openOut(outPath(cfg, "removal_curve.svg"));
        eval::writeScatterSvg(svg, ks, rhos, rhos, {"progressive removal, " + o.measure, "pairs removed", "rho"});
        files.push_back("removal_curve.svg");
    }
    if (which == "stability") {
        std::vector<std::size_t> order(report.pairs.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](auto a, auto b) { return report.stability[a] > report.stability[b]; });
        for (std::size_t r = 0; r < std::min<std::size_t>(40, order.size()); ++r) {
            const auto& p = report.pairs[order[r]];
            std::cout << p.w1 << '/' << p.w2 << '\t' << combine::formatDouble(report.stability[order[r]]) << '\n';
        }
    }
    extra["files"] = files;
    writeManifest(cfg, which, extra);
    std::cout << "rho=" << combine::formatDouble(report.rho) << " pairs=" << report.pairs.size() << '\n';
    return 0;
}

int cmdTune(const Options& o) {
    auto cfg = resolveConfig(o);
    auto s = loadForTestSet(cfg, o.force);
    std::vector<harness::Components> comps;
    std::vector<double> golds;
    for (const auto& p : s.set.pairs) {
        comps.push_back(s.engine->components(p.w1, p.w2));
        golds.push_back(p.gold);
    }
    const bool withCollocation = s.engine->ngrams() != nullptr;
    auto score = [&](const combine::CombineParams& params) {
        std::vector<double> v(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i)
            v[i] = combine::ewc(comps[i].esa, comps[i].wnp, comps[i].cxi(params.xi), params);
        try {
            return eval::spearman(v, golds);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    combine::TuneOptions to;
    to.restarts = cfg.tuneRestarts;
    to.seed = cfg.seed;
    if (!withCollocation)
        for (auto p : {combine::Param::LambdaPrime, combine::Param::MPrime, combine::Param::SPrime, combine::Param::Xi})
            to.active[static_cast<std::size_t>(p)] = false;
    const auto result = combine::tune(score, cfg.params, combine::Bounds::defaults(), to);
    cfg.params = result.params;
    const auto path = outPath(cfg, "params.txt");
    combine::saveParams(result.params, path);
    nlohmann::ordered_json extra;
    extra["initial_rho"] = result.initialScore;
    extra["rho"] = result.score;
    extra["evaluations"] = result.evaluations;
    extra["files"] = {"params.txt"};
    writeManifest(cfg, "tune", extra);
    std::cout << "rho=" << combine::formatDouble(result.score) << " initial_rho=" << combine::formatDouble(result.initialScore)
              << " params=" << path << '\n';
    combine::writeParams(result.params, std::cout);
    return 0;
}

int cmdSvrEval(const Options& o) {
    auto cfg = resolveConfig(o);
    auto s = loadForTestSet(cfg, o.force);
    if (o.svrModel != "ew" && o.svrModel != "ewc") throw Error("--model must be ew or ewc");
    std::vector<svr::FeatureRow> rows;
    for (const auto& p : s.set.pairs) {
        const auto c = s.engine->components(p.w1, p.w2);
        svr::FeatureRow r;
        r.target = p.gold;
        if (cfg.svrFeatures == harness::SvrFeatures::Combined) {
            r.features = {o.svrModel == "ew" ? combine::ew(c.esa, c.wnp, cfg.params)
                                             : combine::ewc(c.esa, c.wnp, c.cxi(cfg.params.xi), cfg.params)};
        } else if (o.svrModel == "ew") {
            r.features = {c.esa, c.wnp};
        } else {
            r.features = {c.esa, c.wnp, c.direct, c.inverse};
        }
        rows.push_back(std::move(r));
    }
    svr::SvrParams sp;
    sp.degree = cfg.svrDegree;
    sp.C = cfg.svrC;
    sp.epsilon = cfg.svrEpsilon;
    const auto cv = svr::crossValidate(rows, sp, {cfg.svrFolds, cfg.seed});
    {
        auto out = openCsv(outPath(cfg, "predictions.csv"), cfg);
        out << "w1,w2,gold,prediction\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
            out << eval::csvField(s.set.pairs[i].w1) << ',' << eval::csvField(s.set.pairs[i].w2) << ','
                << combine::formatDouble(rows[i].target) << ',' << combine::formatDouble(cv.predictions[i]) << '\n';
    }
    auto model = svr::trainSvr(rows, sp);
    model.metadata["config_hash"] = harness::configHash(cfg);
    model.metadata["features"] = std::string(harness::toString(cfg.svrFeatures)) + ":" + o.svrModel;
    svr::saveModel(model, outPath(cfg, "model.txt"));
    nlohmann::ordered_json extra;
    extra["rho"] = cv.rho;
    extra["folds"] = cfg.svrFolds;
    extra["features"] = model.metadata["features"];
    extra["files"] = {"predictions.csv", "model.txt"};
    writeManifest(cfg, "svr-eval", extra);
    std::cout << "rho=" << combine::formatDouble(cv.rho) << " pairs=" << rows.size() << " folds=" << cfg.svrFolds << '\n';
    return 0;
}

int cmdIndexStats(const Options& o) {
    auto cfg = resolveConfig(o);
    require(!cfg.index.empty(), "--index");
    if (!fs::exists(cfg.index)) throw MissingInput("index not found: " + cfg.index);
    const auto index = esa::loadIndex(cfg.index);
    std::cout << esa::formatStats(esa::indexStats(index));
    for (const auto& [k, v] : index.metadata()) std::cout << "meta." << k << '=' << v << '\n';
    if (!o.exportPath.empty()) {
        auto out = openOut(o.exportPath);
        esa::exportText(index, out);
    }
    return 0;
}

void errorLine(std::string_view kind, std::string message) {
    std::replace(message.begin(), message.end(), '\n', ' ');
    std::cerr << "relmix: error: " << kind << ": " << message << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relmix: ESA, WordNet and collocation relatedness measures with evaluation tools", "relmix"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config, "key=value run configuration");
    app.add_option("--dump", o.dump, "MediaWiki XML dump");
    app.add_option("--wordnet-dir", o.wordnetDir, "WordNet 3.0 dict directory");
    app.add_option("--ngrams-uni", o.ngramsUni, "unigram counts (ngram, year, count TSV)");
    app.add_option("--ngrams-bi", o.ngramsBi, "bigram counts (ngram, year, count TSV)");
    app.add_option("--testset", o.testset, "word1<TAB>word2<TAB>score test set");
    app.add_option("--index", o.index, "index file");
    app.add_option("--min-terms", o.minTerms, "minimum distinct terms per concept");
    app.add_option("--min-links", o.minLinks, "minimum in- plus out-links per concept");
    app.add_option("--mode", o.mode, "stemmed | pos-noun | pos-all");
    app.add_option("--sentence-weight", o.sentenceWeight, "weight of sentences mentioning the page topic");
    app.add_option("--prune-sections", o.pruneSections, "on | off");
    app.add_option("--seed", o.seed, "seed for tuning restarts and fold shuffling");
    app.add_flag("--dedupe", o.dedupe, "keep only the first occurrence of a repeated pair");
    app.add_option("--out-dir", o.outDir, "directory for artifacts");
    app.add_option("--params", o.params, "combination parameters file");

    auto* build = app.add_subcommand("build-index", "dump -> index file");
    auto* measure = app.add_subcommand("measure", "print component and combined measures of a word pair");
    measure->add_option("words", o.words, "two words")->expected(2)->required();
    auto* evalCmd = app.add_subcommand("eval", "evaluate a measure on a test set");
    auto* tuneCmd = app.add_subcommand("tune", "optimize combination parameters");
    auto* stability = app.add_subcommand("stability", "leave-one-out stability");
    auto* removal = app.add_subcommand("removal-curve", "progressive removal curve");
    for (auto* c : {evalCmd, stability, removal}) {
        c->add_option("--measure", o.measure, "esa|wnp|wup|lch|res|jcn|lin|colloc|cxi|ew|ewc|gold");
        c->add_flag("--force", o.force, "accept an index built with different settings");
    }
    tuneCmd->add_flag("--force", o.force, "accept an index built with different settings");
    auto* svrCmd = app.add_subcommand("svr-eval", "cross-validated SVR over component measures");
    svrCmd->add_option("--model", o.svrModel, "ew | ewc feature set");
    svrCmd->add_flag("--force", o.force, "accept an index built with different settings");
    auto* stats = app.add_subcommand("index-stats", "index statistics");
    stats->add_option("--export", o.exportPath, "write the term<TAB>concept:weight text export");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "relmix: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (build->parsed()) return cmdBuildIndex(o);
        if (measure->parsed()) return cmdMeasure(o);
        if (evalCmd->parsed()) return cmdEval(o, "eval");
        if (stability->parsed()) return cmdEval(o, "stability");
        if (removal->parsed()) return cmdEval(o, "removal-curve");
        if (tuneCmd->parsed()) return cmdTune(o);
        if (svrCmd->parsed()) return cmdSvrEval(o);
        if (stats->parsed()) return cmdIndexStats(o);
    } catch (const MissingInput& e) {
        errorLine("missing-input", e.what());
        return 1;
    } catch (const ConfigMismatch& e) {
        errorLine("config-mismatch", e.what());
        return 1;
    } catch (const ParseError& e) {
        errorLine("parse", e.what());
        return 1;
    } catch (const DomainError& e) {
        errorLine("domain", e.what());
        return 1;
    } catch (const std::exception& e) {
        errorLine("failed", e.what());
        return 1;
    }
    return 2;
}
