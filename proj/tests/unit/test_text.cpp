#include <doctest.h>

#include <random>
#include <sstream>

#include "relmix/error.hpp"
#include "relmix/pos.hpp"
#include "relmix/text.hpp"

using namespace relmix;
using namespace relmix::text;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& toks) {
    std::vector<std::string> out;
    for (const auto& t : toks) out.push_back(t.surface);
    return out;
}

std::vector<std::string> texts(const std::vector<Term>& terms) {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(t.text);
    return out;
}

std::vector<std::string> normalize(std::string_view s) {
    return texts(normalizeStemmed(tokenize(s), defaultStopwords()));
}

// NLTK PorterStemmer(mode=MARTIN_EXTENSIONS), see tests/oracles/porter_oracle.py.
const std::pair<const char*, const char*> kPorter[] = {
    {"caresses", "caress"}, {"ponies", "poni"}, {"ties", "ti"}, {"caress", "caress"}, {"cats", "cat"},
    {"feed", "feed"}, {"agreed", "agre"}, {"plastered", "plaster"}, {"bled", "bled"}, {"motoring", "motor"},
    {"sing", "sing"}, {"conflated", "conflat"}, {"troubled", "troubl"}, {"sized", "size"}, {"hopping", "hop"},
    {"tanned", "tan"}, {"falling", "fall"}, {"hissing", "hiss"}, {"fizzed", "fizz"}, {"failing", "fail"},
    {"filing", "file"}, {"happy", "happi"}, {"sky", "sky"}, {"relational", "relat"}, {"conditional", "condit"},
    {"rational", "ration"}, {"valenci", "valenc"}, {"hesitanci", "hesit"}, {"digitizer", "digit"},
    {"conformabli", "conform"}, {"radicalli", "radic"}, {"differentli", "differ"}, {"vileli", "vile"},
    {"analogousli", "analog"}, {"vietnamization", "vietnam"}, {"predication", "predic"}, {"operator", "oper"},
    {"feudalism", "feudal"}, {"decisiveness", "decis"}, {"hopefulness", "hope"}, {"callousness", "callous"},
    {"formaliti", "formal"}, {"sensitiviti", "sensit"}, {"sensibiliti", "sensibl"}, {"triplicate", "triplic"},
    {"formative", "form"}, {"formalize", "formal"}, {"electriciti", "electr"}, {"electrical", "electr"},
    {"hopeful", "hope"}, {"goodness", "good"}, {"revival", "reviv"}, {"allowance", "allow"},
    {"inference", "infer"}, {"airliner", "airlin"}, {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"},
    {"defensible", "defens"}, {"irritant", "irrit"}, {"replacement", "replac"}, {"adjustment", "adjust"},
    {"dependent", "depend"}, {"adoption", "adopt"}, {"homologou", "homolog"}, {"communism", "commun"},
    {"activate", "activ"}, {"angulariti", "angular"}, {"homologous", "homolog"}, {"effective", "effect"},
    {"bowdlerize", "bowdler"}, {"probate", "probat"}, {"rate", "rate"}, {"cease", "ceas"},
    {"controll", "control"}, {"roll", "roll"}, {"generalizations", "gener"}, {"oscillators", "oscil"},
    {"archaeology", "archaeolog"}, {"methodology", "methodolog"}, {"relatedness", "related"},
    {"wikipedia", "wikipedia"}, {"semantic", "semant"}, {"concepts", "concept"}, {"agreement", "agreement"},
};

const std::pair<const char*, const char*> kThreePasses[] = {
    {"generalizations", "gener"}, {"relational", "relat"}, {"conditional", "condit"}, {"oscillators", "oscil"},
    {"effectively", "effect"},    {"relatedness", "relat"}, {"universities", "univ"}, {"generously", "gener"},
    {"organizational", "organiz"}, {"hopefulness", "hope"},
};

}  // namespace

TEST_CASE("tokenize lowercases ASCII letter runs and numbers positions") {
    const auto toks = tokenize("The O'Neil-family's 3 cats, naïve  dogs!");
    CHECK(surfaces(toks) == std::vector<std::string>{"the", "o", "neil", "family", "s", "cats", "na", "ve", "dogs"});
    for (std::size_t i = 0; i < toks.size(); ++i) CHECK(toks[i].position == i);
    CHECK(tokenize("").empty());
    CHECK(tokenize("12 -- 34").empty());
}

TEST_CASE("Porter stemmer agrees with the reference implementation") {
    for (const auto& [word, stem] : kPorter) {
        CAPTURE(word);
        CHECK(porterStem(word) == stem);
    }
    CHECK(porterStem("is") == "is");
    CHECK(porterStem("a") == "a");
    CHECK(porterStem("") == "");
}

TEST_CASE("three stemming passes") {
    for (const auto& [word, stem] : kThreePasses) {
        CAPTURE(word);
        CHECK(stemRepeated(word) == stem);
        CHECK(stemFixedPoint(word) == stem);
    }
}

TEST_CASE("stemFixedPoint keeps stemming while the stem changes") {
    // Three passes leave "yoeous"; a fourth gives "yoeou".
    CHECK(stemRepeated("yoeousnessationible") == "yoeous");
    CHECK(stemFixedPoint("yoeousnessationible") == "yoeou");
    CHECK(porterStem(stemFixedPoint("yoeousnessationible")) == "yoeou");
}

TEST_CASE("default stop-word list") {
    const auto& sw = defaultStopwords();
    CHECK(sw.size() == 394);
    CHECK(sw.contains("the"));
    CHECK(sw.contains("between"));
    CHECK_FALSE(sw.contains("forest"));
    CHECK_FALSE(sw.id().empty());
}

TEST_CASE("stop-word parsing") {
    const auto sw = StopwordList::parse("# tiny list v1\nfoo\n  bar \n\n# other comment\nbaz\n");
    CHECK(sw.id() == "tiny list v1");
    CHECK(sw.size() == 3);
    CHECK(sw.contains("bar"));
    CHECK(StopwordList::parse("x\n").id() == "custom");
}

TEST_CASE("normalizeStemmed drops stop words and short words") {
    CHECK(normalize("The running dogs were eating an apple") == std::vector<std::string>{"run", "dog", "eat", "appl"});
    CHECK(normalize("a an of to be it ox") .empty());
    // "ties" stems to "ti", which is too short to keep.
    CHECK(normalize("ties").empty());
}

TEST_CASE("normalizeStemmed output terms are long, never stop words, and idempotent") {
    std::mt19937_64 rng(7);
    const std::string letters = "abcdefghilmnoprstuvy";
    const char* suffixes[] = {"ational", "ization", "fulness", "ousli", "aliti", "ness", "ing", "ed",
                              "s", "ies", "ive", "ate", "ement", "ous", "al", "er", "ly", "y"};
    for (int i = 0; i < 20000; ++i) {
        std::string w;
        for (int k = 2 + static_cast<int>(rng() % 5); k > 0; --k) w += letters[rng() % letters.size()];
        for (int k = 1 + static_cast<int>(rng() % 5); k > 0; --k) w += suffixes[rng() % std::size(suffixes)];
        const auto once = normalizeStemmed(tokenize(w), defaultStopwords());
        std::string joined;
        for (const auto& t : once) {
            CHECK(t.text.size() >= kMinTermLength);
            CHECK_FALSE(defaultStopwords().contains(t.text));
            joined += t.text + " ";
        }
        CAPTURE(w);
        CHECK(normalizeStemmed(tokenize(joined), defaultStopwords()) == once);
    }
}

TEST_CASE("memoizing normalizer matches normalizeStemmed") {
    StemmingNormalizer norm(defaultStopwords());
    const std::string s = "Concepts of semantic relatedness are related to the relational concepts";
    CHECK(norm.normalize(tokenize(s)) == normalizeStemmed(tokenize(s), defaultStopwords()));
    CHECK(norm.normalize(std::string("the")).empty());
    CHECK(norm.normalize(std::string("forests")) == "forest");
}

TEST_CASE("Penn tags") {
    CHECK(isPennTag("NN"));
    CHECK(isPennTag("PRP$"));
    CHECK(isPennTag("-LRB-"));
    CHECK_FALSE(isPennTag("NOUN"));
    CHECK_FALSE(isPennTag(""));
}

TEST_CASE("normalizePos keeps the requested word classes") {
    const std::vector<PosToken> toks = {
        {"Dogs", "dog", "NNS"},  {"were", "be", "VBD"},     {"chasing", "chase", "VBG"},
        {"big", "big", "JJ"},    {"London", "London", "NNP"}, {"cats", "cat", "NNS"},
        {"quickly", "quickly", "RB"}, {"xyz", "xyz", "BOGUS"}, {"ox", "ox", "NN"},
    };
    PosDiagnostics diag;
    CHECK(texts(normalizePos(toks, PosMode::NounOnly, defaultStopwords(), &diag)) ==
          std::vector<std::string>{"dog", "london", "cat"});
    CHECK(diag.unknownTags == 1);
    CHECK(texts(normalizePos(toks, PosMode::NounVerbAdj, defaultStopwords())) ==
          std::vector<std::string>{"dog", "chase", "big", "london", "cat"});
}

TEST_CASE("POS sentence reader") {
    std::istringstream in("The\tDT\tthe\ncats\tNNS\tcat\n\nRan\tVBD\t<unknown>\r\n");
    const auto s = readPosSentences(in);
    REQUIRE(s.size() == 2);
    CHECK(s[0][1] == PosToken{"cats", "cat", "NNS"});
    CHECK(s[1][0].lemma == "Ran");

    std::istringstream bad("ok\tNN\tok\nbroken line\n");
    try {
        readPosSentences(bad, "x.pos");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location() == 2);
    }
}

TEST_CASE("POS sidecar groups tokens by page and section") {
    std::istringstream in("#page 12\nA\tDT\ta\n#section 2\nwent\tVBD\tgo\n#page 7\ncat\tNN\tcat\n");
    const auto pages = readPosSidecar(in);
    REQUIRE(pages.size() == 2);
    const auto& p12 = pages.at(12);
    REQUIRE(p12.sections.size() == 3);
    CHECK(p12.sections[0].size() == 1);
    CHECK(p12.sections[1].empty());
    CHECK(p12.sections[2][0].tag == "VBD");
    CHECK(pages.at(7).sections[0][0].lemma == "cat");

    std::istringstream orphan("cat\tNN\tcat\n");
    CHECK_THROWS_AS(readPosSidecar(orphan), ParseError);
}
