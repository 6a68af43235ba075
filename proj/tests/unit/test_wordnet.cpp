#include <doctest.h>

#include <cmath>
#include <sstream>

#include "relmix/error.hpp"
#include "relmix/wordnet.hpp"

using namespace relmix;
using namespace relmix::wordnet;

namespace {

const WordnetGraph& toy() {
    static const WordnetGraph g = loadWordnet(RELMIX_FIXTURES "/wordnet");
    return g;
}

SynsetId id(const WordnetGraph& g, const char* key) {
    auto s = g.find(key);
    REQUIRE(s.has_value());
    return *s;
}

double wnp(const char* a, const char* b) { return wordMeasure(Measure::WNP, toy(), a, b); }

}  // namespace

TEST_CASE("loader reads all parts of speech and maps satellites to adjectives") {
    const auto& g = toy();
    CHECK(g.count(Pos::Noun) == 19);
    CHECK(g.count(Pos::Verb) == 4);
    CHECK(g.count(Pos::Adjective) == 2);
    CHECK(g.find("a00020002").has_value());
    CHECK(g.synset(id(g, "n00002011")).lemmas == std::vector<std::string>{"forest", "wood", "woods"});
    CHECK(g.root(Pos::Noun).has_value());
    CHECK(g.root(Pos::Verb).has_value());
    CHECK_FALSE(g.root(Pos::Adjective).has_value());
}

TEST_CASE("depth counts edges from the virtual root") {
    const auto& g = toy();
    CHECK(g.depth(*g.root(Pos::Noun)) == 0);
    CHECK(g.depth(id(g, "n00001740")) == 1);
    CHECK(g.depth(id(g, "n00002004")) == 5);
    CHECK(g.depth(id(g, "n00002014")) == 2);
    CHECK(g.maxDepth(Pos::Noun) == 5);
    CHECK(g.maxDepth(Pos::Verb) == 2);
}

TEST_CASE("WNP at hypernym distances 0 to 3") {
    CHECK(wnp("oak", "oak") == 1.0);
    CHECK(wnp("wood", "forest") == 1.0);
    CHECK(wnp("oak", "tree") == 0.5);
    CHECK(wnp("oak", "pine") == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(wnp("oak", "organism") == 0.25);
    CHECK(wnp("tree", "oak") == 0.5);
}

TEST_CASE("WNP ignores non-hypernym pointers and follows instance hypernyms") {
    CHECK(wnp("puppy", "cat") == 0.25);
    CHECK(wnp("lassie", "dog") == 0.5);
}

TEST_CASE("separate noun hierarchies meet at the virtual root") {
    CHECK(wnp("oak", "idea") == 0.125);
    CHECK(wnp("run", "oak") == 0.125);
}

TEST_CASE("verbs get their own root; cross-POS pairs score zero") {
    CHECK(wnp("run", "walk") == doctest::Approx(1.0 / 3));
    CHECK(wnp("run", "think") == 0.25);
    CHECK(wnp("walk", "oak") == 0.0);
    CHECK(wnp("big", "huge") == 0.0);
    CHECK(wnp("big", "big") == 1.0);
    CHECK(wnp("big", "oak") == 0.0);
}

TEST_CASE("unknown words score zero") {
    CHECK(wnp("oak", "zyzzyva") == 0.0);
    CHECK(wnp("", "oak") == 0.0);
}

TEST_CASE("lookup applies base-form rules and exception lists") {
    const auto& g = toy();
    CHECK(g.lookup("dogs").size() == 1);
    CHECK(g.lookup("mice") == std::vector<SynsetId>{id(g, "n00002015")});
    CHECK(g.lookup("Oak") == g.lookup("oak"));
    CHECK(g.lookup("domestic dog") == std::vector<SynsetId>{id(g, "n00002007")});
    // Surface form and base form senses are merged.
    CHECK(g.lookup("woods") == g.lookup("wood"));
    CHECK(g.lookup("wood").size() == 2);
    CHECK(g.lookup("cats") == std::vector<SynsetId>{id(g, "n00002008")});
    CHECK(wnp("ran", "walk") == doctest::Approx(1.0 / 3));
}

TEST_CASE("lowest common subsumer") {
    const auto& g = toy();
    CHECK(lowestCommonSubsumer(g, id(g, "n00002004"), id(g, "n00002005")) == id(g, "n00002003"));
    CHECK(lowestCommonSubsumer(g, id(g, "n00002004"), id(g, "n00002007")) == id(g, "n00002001"));
    CHECK(lowestCommonSubsumer(g, id(g, "n00002004"), id(g, "n00002014")) == g.root(Pos::Noun));
    CHECK(lowestCommonSubsumer(g, id(g, "n00002004"), id(g, "n00002003")) == id(g, "n00002003"));
    CHECK_FALSE(lowestCommonSubsumer(g, id(g, "n00002004"), id(g, "v00010002")).has_value());
}

TEST_CASE("WUP and LCH") {
    const auto& g = toy();
    const auto oak = id(g, "n00002004"), pine = id(g, "n00002005");
    CHECK(synsetMeasure(Measure::WUP, g, oak, pine) == doctest::Approx(0.8));
    CHECK(synsetMeasure(Measure::WUP, g, oak, oak) == 1.0);
    // D = 6 nodes on the deepest noun chain.
    CHECK(synsetMeasure(Measure::LCH, g, oak, pine) == doctest::Approx(-std::log(3.0 / 12.0)));
    CHECK(synsetMeasure(Measure::LCH, g, oak, oak) == doctest::Approx(std::log(12.0)));
}

TEST_CASE("IC measures require a table") {
    const auto& g = toy();
    CHECK_THROWS_AS(synsetMeasure(Measure::RES, g, 0, 0), Error);
    CHECK(needsInformationContent(Measure::LIN));
    CHECK_FALSE(needsInformationContent(Measure::WUP));
}

TEST_CASE("information content from term counts") {
    WordnetGraph g = loadWordnet(RELMIX_FIXTURES "/wordnet");
    const auto ic = computeIC(g, {{"oak", 9.0}, {"wood", 4.0}});
    g.setInformationContent(ic);
    // 19 noun synsets with add-one, plus 9 + 4 counted.
    const double total = 32.0;
    CHECK(ic[id(g, "n00002004")] == doctest::Approx(-std::log(10.0 / total)).epsilon(1e-14));
    CHECK(ic[id(g, "n00002003")] == doctest::Approx(-std::log(12.0 / total)).epsilon(1e-14));
    // "wood" and "woods" share a stem: forest gets one share of the split, not two.
    CHECK(ic[id(g, "n00002011")] == doctest::Approx(-std::log(3.0 / total)).epsilon(1e-14));
    CHECK(ic[id(g, "n00002002")] == doctest::Approx(-std::log(16.0 / total)).epsilon(1e-14));
    CHECK(ic[id(g, "n00002001")] == doctest::Approx(-std::log(23.0 / total)).epsilon(1e-14));
    CHECK(ic[id(g, "n00001740")] == doctest::Approx(-std::log(29.0 / total)).epsilon(1e-14));
    CHECK(ic[*g.root(Pos::Noun)] == 0.0);
    CHECK(ic[id(g, "v00010001")] == doctest::Approx(-std::log(3.0 / 4.0)));
    CHECK(ic[id(g, "a00020001")] == doctest::Approx(std::log(2.0)));

    const auto oak = id(g, "n00002004"), pine = id(g, "n00002005");
    const double icTree = -std::log(12.0 / total), icOak = -std::log(10.0 / total), icPine = std::log(total);
    CHECK(synsetMeasure(Measure::RES, g, oak, pine) == doctest::Approx(icTree));
    CHECK(synsetMeasure(Measure::LIN, g, oak, pine) == doctest::Approx(2 * icTree / (icOak + icPine)));
    CHECK(synsetMeasure(Measure::JCN, g, oak, pine) == doctest::Approx(1.0 / (icOak + icPine - 2 * icTree)));
    CHECK(synsetMeasure(Measure::JCN, g, oak, oak) == 1e6);
    CHECK(synsetMeasure(Measure::JCN, g, oak, oak, {.jcnCeiling = 42.0}) == 42.0);
    CHECK(synsetMeasure(Measure::LIN, g, oak, oak) == 1.0);
}

TEST_CASE("IC is monotone along hypernym chains") {
    WordnetGraph g = loadWordnet(RELMIX_FIXTURES "/wordnet");
    const auto ic = computeIC(g, {{"dog", 3.0}, {"cat", 1.0}, {"car", 7.0}, {"idea", 2.0}});
    for (SynsetId s = 0; s < g.size(); ++s)
        for (auto h : g.synset(s).hypernyms) CHECK(ic[h] <= ic[s] + 1e-12);
}

TEST_CASE("IC needs counts") {
    CHECK_THROWS_AS(computeIC(toy(), {}), DomainError);
}

TEST_CASE("IC table round trip") {
    WordnetGraph g = loadWordnet(RELMIX_FIXTURES "/wordnet");
    g.setInformationContent(computeIC(g, {{"oak", 9.0}}));
    std::stringstream ss;
    writeIC(g, ss);
    const auto back = readIC(g, ss);
    CHECK(back == g.informationContentTable());

    std::istringstream partial("n00002004\t1.5\n");
    CHECK_THROWS_AS(readIC(g, partial), Error);
    std::istringstream bad("n00002004\tabc\n");
    CHECK_THROWS_AS(readIC(g, bad), ParseError);
}

TEST_CASE("builder rejects broken graphs") {
    {
        WordnetGraph::Builder b;
        b.addSynset("n00000001", Pos::Noun, {"a"}, {});
        b.addSynset("n00000001", Pos::Noun, {"b"}, {});
        CHECK_THROWS_AS(std::move(b).build(), Error);
    }
    {
        WordnetGraph::Builder b;
        b.addSynset("n00000001", Pos::Noun, {"a"}, {"n00000009"}, "data.noun:3");
        try {
            std::move(b).build();
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("data.noun:3") != std::string::npos);
        }
    }
    {
        WordnetGraph::Builder b;
        b.addSynset("n00000001", Pos::Noun, {"a"}, {"n00000002"});
        b.addSynset("n00000002", Pos::Noun, {"b"}, {"n00000001"});
        CHECK_THROWS_AS(std::move(b).build(), Error);
    }
    {
        WordnetGraph::Builder b;
        b.addSynset("n00000001", Pos::Noun, {"a"}, {});
        b.addSynset("v00000002", Pos::Verb, {"b"}, {"n00000001"});
        CHECK_THROWS_AS(std::move(b).build(), Error);
    }
}

TEST_CASE("malformed data lines name file and line") {
    WordnetGraph::Builder b;
    std::istringstream in("  1 header\n00000001 03 n zz a 0 000 | x\n");
    try {
        readDataFile(in, "data.noun", b);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location() == 2);
        CHECK(e.source() == "data.noun");
    }
}

TEST_CASE("LCS ties go to higher IC, then to the smaller id") {
    WordnetGraph::Builder b;
    b.addSynset("n00000001", Pos::Noun, {"a"}, {});
    b.addSynset("n00000002", Pos::Noun, {"b"}, {});
    b.addSynset("n00000003", Pos::Noun, {"c"}, {"n00000001", "n00000002"});
    b.addSynset("n00000004", Pos::Noun, {"d"}, {"n00000001", "n00000002"});
    auto g = std::move(b).build();
    const auto a = *g.find("n00000001"), bb = *g.find("n00000002");
    const auto c = *g.find("n00000003"), d = *g.find("n00000004");
    CHECK(lowestCommonSubsumer(g, c, d) == a);
    std::vector<double> ic(g.size(), 0.0);
    ic[a] = 0.5;
    ic[bb] = 0.7;
    g.setInformationContent(ic);
    CHECK(lowestCommonSubsumer(g, c, d) == bb);
}

TEST_CASE("path length is symmetric and satisfies the triangle inequality") {
    const auto& g = toy();
    std::vector<SynsetId> nouns;
    for (SynsetId s = 0; s < g.size(); ++s)
        if (g.synset(s).pos == Pos::Noun) nouns.push_back(s);
    for (auto x : nouns)
        for (auto y : nouns) {
            auto dxy = pathLength(g, x, y);
            REQUIRE(dxy.has_value());
            CHECK(dxy == pathLength(g, y, x));
            CHECK((*dxy == 0) == (x == y));
            for (auto z : {nouns[3], nouns[11]}) CHECK(*dxy <= *pathLength(g, x, z) + *pathLength(g, z, y));
        }
}

TEST_CASE("measure names") {
    for (auto m : {Measure::WNP, Measure::WUP, Measure::LCH, Measure::RES, Measure::JCN, Measure::LIN})
        CHECK((parseMeasure(toString(m)) == m));
    CHECK_THROWS_AS(parseMeasure("nope"), Error);
}
