#include <doctest.h>

#include <random>
#include <sstream>

#include "relmix/collocation.hpp"
#include "relmix/error.hpp"

using namespace relmix;
using namespace relmix::collocation;

namespace {

NgramTable table(std::uint64_t ab, std::uint64_t ba, std::uint64_t a, std::uint64_t b) {
    NgramTable t;
    t.addUnigram("alpha", a);
    t.addUnigram("beta", b);
    if (ab) t.addBigram("alpha", "beta", ab);
    if (ba) t.addBigram("beta", "alpha", ba);
    return t;
}

}  // namespace

TEST_CASE("collocation index and mixed index") {
    const auto t = table(10, 4, 100, 100);
    CHECK(collocationIndex(t, "alpha", "beta") == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(collocationIndex(t, "beta", "alpha") == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(mixedCollocation(t, "alpha", "beta", 0.55) == doctest::Approx(0.122).epsilon(1e-15));
    CHECK(mixedCollocation(t, "alpha", "beta", 0.0) == collocationIndex(t, "alpha", "beta"));
    const auto parts = collocationParts(t, "alpha", "beta");
    CHECK(parts.direct == collocationIndex(t, "alpha", "beta"));
    CHECK(parts.inverse == collocationIndex(t, "beta", "alpha"));
}

TEST_CASE("collocation lookups are case-insensitive") {
    const auto t = table(10, 4, 100, 100);
    CHECK(collocationIndex(t, "ALPHA", "Beta") == collocationIndex(t, "alpha", "beta"));
}

TEST_CASE("self pairs are not 1") {
    NgramTable t;
    t.addUnigram("new", 50);
    t.addBigram("new", "new", 5);
    CHECK(collocationIndex(t, "new", "new") == doctest::Approx(0.1));
}

TEST_CASE("missing unigram counts") {
    NgramTable t;
    t.addUnigram("alpha", 5);
    CHECK(collocationIndex(t, "alpha", "gamma") == 0.0);
    CHECK_THROWS_AS(collocationIndex(t, "gamma", "delta"), DomainError);
    CHECK_THROWS_AS(mixedCollocation(t, "alpha", "gamma", 1.5), DomainError);
}

TEST_CASE("xi = 1 makes the mixed index symmetric") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        const auto t = table(rng() % 50, rng() % 50, 1 + rng() % 1000, rng() % 1000);
        CHECK(mixedCollocation(t, "alpha", "beta", 1.0) == mixedCollocation(t, "beta", "alpha", 1.0));
    }
}

TEST_CASE("loading applies the year cut, case folding and vocabulary") {
    std::istringstream uni("Alpha\t1960\t100\t3\nalpha\t1970\t7\t1\nalpha\t1971\t10\t2\nALPHA\t2000\t5\t1\n"
                           "beta\t1999\t20\nbad row\ngamma\tyear\t3\nnew york\t1999\t5\n");
    std::istringstream bi("alpha beta\t1980\t4\t1\nAlpha Beta\t1981\t1\nbeta gamma\t1990\t2\nalpha\t1990\t9\n"
                          "alpha beta\t1900\t50\n");
    const std::unordered_set<std::string> vocab = {"alpha", "beta"};
    LoadDiagnostics d;
    const auto t = loadNgrams(uni, bi, {1970, &vocab}, &d);
    CHECK(t.unigram("alpha") == 15);
    CHECK(t.unigram("beta") == 20);
    CHECK(t.unigram("gamma") == 0);
    CHECK(t.bigram("alpha", "beta") == 5);
    CHECK(t.bigram("beta", "gamma") == 0);
    CHECK(d.rows == 13);
    CHECK(d.tooOld == 3);
    CHECK(d.malformed == 4);
    CHECK(d.outOfVocabulary == 1);
    CHECK(t.minYear() == 1970);
}

TEST_CASE("sorted export formats") {
    NgramTable t;
    t.addBigram("b", "a", 2);
    t.addBigram("a", "b", 3);
    t.addUnigram("b", 1);
    t.addUnigram("a", 9);
    std::ostringstream bi, uni;
    exportBigrams(t, bi);
    exportUnigrams(t, uni);
    CHECK(bi.str() == "a b\t3\nb a\t2\n");
    CHECK(uni.str() == "a\t9\nb\t1\n");
}
