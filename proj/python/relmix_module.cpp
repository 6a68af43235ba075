#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>

#include "relmix/collocation.hpp"
#include "relmix/combiner.hpp"
#include "relmix/config.hpp"
#include "relmix/error.hpp"
#include "relmix/esa.hpp"
#include "relmix/evaluation.hpp"
#include "relmix/pipeline.hpp"
#include "relmix/svr.hpp"
#include "relmix/text.hpp"
#include "relmix/wordnet.hpp"

namespace py = pybind11;
using namespace relmix;

namespace {

std::vector<std::string> normalizeText(const std::string& s) {
    std::vector<std::string> out;
    for (auto& t : text::normalizeStemmed(text::tokenize(s), text::defaultStopwords())) out.push_back(std::move(t.text));
    return out;
}

esa::InvertedIndex indexFromDocuments(const std::vector<std::pair<std::string, std::string>>& docs, unsigned workers) {
    std::vector<esa::ConceptDocument> cds;
    text::StemmingNormalizer norm(text::defaultStopwords());
    std::int64_t id = 0;
    for (const auto& [title, body] : docs) {
        std::map<std::string, double> tf;
        for (const auto& t : norm.normalize(text::tokenize(body))) tf[t.text] += 1.0;
        cds.push_back({++id, title, {tf.begin(), tf.end()}});
    }
    esa::BuildSettings settings;
    settings.workers = workers;
    return esa::buildIndex(cds, settings);
}

std::vector<svr::FeatureRow> toRows(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("feature and target counts differ");
    std::vector<svr::FeatureRow> rows;
    for (std::size_t i = 0; i < x.size(); ++i) rows.push_back({x[i], y[i]});
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "relmix: ESA, WordNet and collocation relatedness measures";
    m.attr("__version__") = "0.3.0";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());

    // text
    m.def("tokenize", [](const std::string& s) {
        std::vector<std::string> out;
        for (auto& t : text::tokenize(s)) out.push_back(std::move(t.surface));
        return out;
    });
    m.def("normalize", &normalizeText, "Stop-word removal and repeated Porter stemming.");
    m.def("porter_stem", &text::porterStem, py::arg("word"));
    m.def("stem_repeated", &text::stemRepeated, py::arg("word"), py::arg("passes") = text::kStemPasses);

    // esa
    py::class_<esa::InvertedIndex>(m, "Index")
        .def_static("load", &esa::loadIndex, py::arg("path"))
        .def_static("from_documents", &indexFromDocuments, py::arg("documents"), py::arg("workers") = 1,
                    "Builds an index from (title, text) pairs with the stemmed pipeline.")
        .def("save", [](const esa::InvertedIndex& ix, const std::string& path) { esa::saveIndex(ix, path); })
        .def_property_readonly("concept_count", &esa::InvertedIndex::conceptCount)
        .def_property_readonly("term_count", &esa::InvertedIndex::termCount)
        .def_property_readonly("terms", &esa::InvertedIndex::terms)
        .def_property_readonly("metadata", &esa::InvertedIndex::metadata)
        .def("document_frequency", &esa::InvertedIndex::documentFrequency)
        .def("concept_vector", [](const esa::InvertedIndex& ix, const std::string& word) {
            std::vector<std::pair<esa::ConceptId, double>> out;
            for (const auto& e : esa::conceptVector(ix, word).entries()) out.emplace_back(e.conceptId, e.weight);
            return out;
        })
        .def("esa", [](const esa::InvertedIndex& ix, const std::string& a, const std::string& b) {
            return esa::esa(ix, a, b);
        });

    // wordnet
    py::class_<wordnet::WordnetGraph, std::shared_ptr<wordnet::WordnetGraph>>(m, "WordNet")
        .def_static("load", [](const std::string& dir) { return std::make_shared<wordnet::WordnetGraph>(wordnet::loadWordnet(dir)); })
        .def("__len__", &wordnet::WordnetGraph::size)
        .def("lookup", [](const wordnet::WordnetGraph& g, const std::string& w) {
            std::vector<std::string> keys;
            for (auto id : g.lookup(w)) keys.push_back(g.synset(id).key);
            return keys;
        })
        .def("measure", [](const wordnet::WordnetGraph& g, const std::string& kind, const std::string& a, const std::string& b) {
            return wordnet::wordMeasure(wordnet::parseMeasure(kind), g, a, b);
        }, py::arg("kind"), py::arg("w1"), py::arg("w2"))
        .def("wnp", [](const wordnet::WordnetGraph& g, const std::string& a, const std::string& b) {
            return wordnet::wordMeasure(wordnet::Measure::WNP, g, a, b);
        });

    // collocation
    py::class_<collocation::NgramTable>(m, "NgramTable")
        .def(py::init<int>(), py::arg("min_year") = 1970)
        .def("add_unigram", &collocation::NgramTable::addUnigram)
        .def("add_bigram", &collocation::NgramTable::addBigram)
        .def("unigram", &collocation::NgramTable::unigram)
        .def("bigram", &collocation::NgramTable::bigram)
        .def("collocation_index", [](const collocation::NgramTable& t, const std::string& a, const std::string& b) {
            return collocation::collocationIndex(t, a, b);
        })
        .def("mixed", [](const collocation::NgramTable& t, const std::string& a, const std::string& b, double xi) {
            return collocation::mixedCollocation(t, a, b, xi);
        }, py::arg("w1"), py::arg("w2"), py::arg("xi"));

    // combination
    py::class_<combine::CombineParams>(m, "CombineParams")
        .def(py::init<>())
        .def_readwrite("lam", &combine::CombineParams::lambda)
        .def_readwrite("m", &combine::CombineParams::m)
        .def_readwrite("s", &combine::CombineParams::s)
        .def_readwrite("lam_prime", &combine::CombineParams::lambdaPrime)
        .def_readwrite("m_prime", &combine::CombineParams::mPrime)
        .def_readwrite("s_prime", &combine::CombineParams::sPrime)
        .def_readwrite("xi", &combine::CombineParams::xi)
        .def("validate", &combine::CombineParams::validate)
        .def("__eq__", [](const combine::CombineParams& a, const combine::CombineParams& b) { return a == b; })
        .def("__repr__", [](const combine::CombineParams& p) {
            std::ostringstream ss;
            combine::writeParams(p, ss);
            std::string s = ss.str();
            for (auto& c : s) if (c == '\n') c = ' ';
            return "CombineParams(" + s + ")";
        });
    m.def("sigmoid", &combine::sigmoid, py::arg("x"), py::arg("m"), py::arg("s"));
    m.def("ew", &combine::ew, py::arg("esa"), py::arg("wnp"), py::arg("params"));
    m.def("ewc", &combine::ewc, py::arg("esa"), py::arg("wnp"), py::arg("cxi"), py::arg("params"));

    // evaluation
    m.def("average_ranks", [](const std::vector<double>& x) { return eval::averageRanks(x); });
    m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return eval::spearman(x, y); });
    m.def("leave_one_out_stability", [](const std::vector<double>& s, const std::vector<double>& g) {
        return eval::leaveOneOutStability(s, g);
    });
    m.def("progressive_removal", [](const std::vector<double>& s, const std::vector<double>& g) {
        std::vector<std::pair<std::size_t, double>> out;
        for (const auto& p : eval::progressiveRemoval(s, g)) out.emplace_back(p.removed, p.rho);
        return out;
    });
    m.def("lowess", [](const std::vector<double>& x, const std::vector<double>& y, double span, unsigned iterations) {
        return eval::lowess(x, y, {span, iterations});
    }, py::arg("x"), py::arg("y"), py::arg("frac") = 2.0 / 3.0, py::arg("it") = 3u);

    // svr
    py::class_<svr::SvrModel>(m, "SvrModel")
        .def_readonly("bias", &svr::SvrModel::bias)
        .def_readonly("coefficients", &svr::SvrModel::coefficients)
        .def("predict", [](const svr::SvrModel& mdl, const std::vector<double>& x) { return svr::predict(mdl, x); })
        .def("save", [](const svr::SvrModel& mdl, const std::string& path) { svr::saveModel(mdl, path); })
        .def_static("load", &svr::loadModel);
    m.def("train_svr", [](const std::vector<std::vector<double>>& x, const std::vector<double>& y, unsigned degree,
                          double C, double epsilon) {
        return svr::trainSvr(toRows(x, y), {degree, C, epsilon});
    }, py::arg("x"), py::arg("y"), py::arg("degree") = 4u, py::arg("C") = 1.0, py::arg("epsilon") = 0.1);
    m.def("cross_validate", [](const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                               std::size_t folds, std::uint64_t seed, unsigned degree) {
        const auto r = svr::crossValidate(toRows(x, y), {degree}, {folds, seed});
        return py::make_tuple(r.predictions, r.foldOf, r.rho);
    }, py::arg("x"), py::arg("y"), py::arg("folds") = 10, py::arg("seed") = 42, py::arg("degree") = 4u);

    // harness
    py::class_<harness::RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_static("load", [](const std::string& path) { return harness::loadConfig(path, false); })
        .def("set", [](harness::RunConfig& c, const std::string& k, const std::string& v) { harness::setConfigValue(c, k, v); })
        .def_readwrite("params", &harness::RunConfig::params)
        .def("hash", &harness::configHash)
        .def("__str__", [](const harness::RunConfig& c) {
            std::ostringstream ss;
            harness::writeConfig(c, ss);
            return ss.str();
        });
    py::class_<harness::Engine>(m, "Engine")
        .def(py::init([](const harness::RunConfig& cfg) { return std::make_unique<harness::Engine>(cfg); }))
        .def("components", [](const harness::Engine& e, const std::string& a, const std::string& b) {
            const auto c = e.components(a, b);
            return py::dict(py::arg("esa") = c.esa, py::arg("wnp") = c.wnp, py::arg("direct") = c.direct,
                            py::arg("inverse") = c.inverse);
        })
        .def("measure", &harness::Engine::measure, py::arg("name"), py::arg("w1"), py::arg("w2"))
        .def("set_params", &harness::Engine::setParams);
}
