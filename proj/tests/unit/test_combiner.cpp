#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "relmix/combiner.hpp"
#include "relmix/error.hpp"

using namespace relmix;
using namespace relmix::combine;

namespace {

CombineParams randomParams(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CombineParams p;
    p.lambda = 20 * u(rng);
    p.m = u(rng);
    p.s = 0.01 + 0.3 * u(rng);
    p.lambdaPrime = 20 * u(rng);
    p.mPrime = u(rng);
    p.sPrime = 0.01 + 0.3 * u(rng);
    p.xi = u(rng);
    return p;
}

}  // namespace

TEST_CASE("sigmoid") {
    CHECK(sigmoid(0.25, 0.25, 0.05) == 0.5);
    CHECK(sigmoid(0.30, 0.25, 0.05) == doctest::Approx(1 / (1 + std::exp(-1.0))));
    CHECK(sigmoid(1e9, 0, 1) == 1.0);
    CHECK(sigmoid(-1e9, 0, 1) == 0.0);
    CHECK_THROWS_AS(sigmoid(0, 0, 0), DomainError);
}

TEST_CASE("ew and ewc formulas") {
    CombineParams p;
    p.lambda = 2;
    p.lambdaPrime = 3;
    const double esa = 0.4, wnp = 0.5, c = 0.2;
    const double ewv = esa * (1 + 2 * sigmoid(wnp, p.m, p.s));
    CHECK(ew(esa, wnp, p) == doctest::Approx(ewv).epsilon(1e-15));
    CHECK(ewc(esa, wnp, c, p) == doctest::Approx(ewv * (1 + 3 * sigmoid(c, p.mPrime, p.sPrime))).epsilon(1e-15));
}

TEST_CASE("zero weights reduce ewc to esa exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        auto p = randomParams(rng);
        p.lambda = p.lambdaPrime = 0;
        const double e = u(rng);
        CHECK(ewc(e, u(rng), u(rng), p) == e);
        CHECK(ew(e, u(rng), p) == e);
    }
}

TEST_CASE("ewc is monotone in each component") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-4;
    for (int i = 0; i < 1000; ++i) {
        const auto p = randomParams(rng);
        const double e = u(rng), w = u(rng), c = u(rng);
        const double base = ewc(e, w, c, p);
        CHECK(ewc(e + h, w, c, p) >= base);
        CHECK(ewc(e, w + h, c, p) >= base);
        CHECK(ewc(e, w, c + h, p) >= base);
    }
}

TEST_CASE("parameter validation") {
    CombineParams p;
    CHECK_NOTHROW(p.validate());
    p.s = 0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {};
    p.xi = 1.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {};
    p.lambda = -1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {};
    p.m = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("params file round trip is exact") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto p = randomParams(rng);
        std::stringstream ss;
        writeParams(p, ss);
        CHECK(readParams(ss) == p);
    }
    std::ostringstream out;
    writeParams(CombineParams{}, out);
    CHECK(out.str() == "lambda=0\nm=0.25\ns=0.05\nlambda_prime=0\nm_prime=0.19\ns_prime=0.05\nxi=0.55\n");
}

TEST_CASE("params parsing") {
    std::istringstream partial("# tuned\nlambda = 3.5\n\nxi=1\n");
    const auto p = readParams(partial);
    CHECK(p.lambda == 3.5);
    CHECK(p.xi == 1.0);
    CHECK(p.m == 0.25);
    std::istringstream unknown("lambda=1\ngamma=2\n");
    try {
        readParams(unknown, "p.txt");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location() == 2);
    }
    std::istringstream badValue("s=abc\n");
    CHECK_THROWS_AS(readParams(badValue), ParseError);
    std::istringstream invalid("s=-1\n");
    CHECK_THROWS_AS(readParams(invalid), Error);
}

TEST_CASE("parameter keys") {
    for (auto which : kAllParams) {
        CHECK(paramFromKey(keyOf(which)) == which);
        CombineParams p;
        set(p, which, 0.125);
        CHECK(get(p, which) == 0.125);
    }
    CHECK_FALSE(paramFromKey("nope").has_value());
}

TEST_CASE("number formatting") {
    CHECK(formatDouble(0.1) == "0.1");
    CHECK(parseDouble(formatDouble(1.0 / 3)) == 1.0 / 3);
    CHECK_THROWS(parseDouble("1.5x"));
    CHECK_THROWS(parseDouble("inf"));
}

// ---------------------------------------------------------------- tuner

TEST_CASE("tuner climbs a smooth objective") {
    auto score = [](const CombineParams& p) {
        return -((p.lambda - 3) * (p.lambda - 3) + (p.m - 0.4) * (p.m - 0.4) * 100);
    };
    TuneOptions o;
    o.restarts = 2;
    o.active = {true, true, false, false, false, false, false};
    const auto r = tune(score, CombineParams{}, Bounds::defaults(), o);
    CHECK(r.params.lambda == doctest::Approx(3).epsilon(1e-3));
    CHECK(r.params.m == doctest::Approx(0.4).epsilon(1e-3));
    CHECK(r.score >= r.initialScore);
    CHECK(r.params.s == CombineParams{}.s);
}

TEST_CASE("tuner never returns less than the starting score") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto target = randomParams(rng);
        auto score = [&](const CombineParams& p) {
            double d = 0;
            for (auto w : kAllParams) d += std::abs(get(p, w) - get(target, w));
            return std::sin(7 * d) - d;
        };
        TuneOptions o;
        o.restarts = 2;
        o.seed = trial;
        const auto start = randomParams(rng);
        const auto r = tune(score, start, Bounds::defaults(), o);
        CHECK(r.initialScore == score(start));
        CHECK(r.score >= r.initialScore);
        CHECK(r.score == score(r.params));
    }
}

TEST_CASE("a constant objective keeps the starting point") {
    CombineParams start;
    start.lambda = 1.25;
    const auto r = tune([](const CombineParams&) { return 0.5; }, start, Bounds::defaults());
    CHECK(r.params == start);
}

TEST_CASE("non-finite and failing scores count as worst") {
    auto score = [](const CombineParams& p) -> double {
        if (p.lambda > 50) throw DomainError("undefined");
        if (p.lambda > 10) return std::numeric_limits<double>::quiet_NaN();
        return p.lambda;
    };
    TuneOptions o;
    o.active = {true, false, false, false, false, false, false};
    const auto r = tune(score, CombineParams{}, Bounds::defaults(), o);
    CHECK(r.params.lambda <= 10);
    CHECK(r.score == doctest::Approx(10).epsilon(1e-3));
}

TEST_CASE("tuning is reproducible for a seed and stays in bounds") {
    auto score = [](const CombineParams& p) { return std::cos(5 * p.m) * std::sin(p.lambda) + p.xi * p.sPrime; };
    TuneOptions o;
    o.restarts = 3;
    o.seed = 17;
    const auto a = tune(score, CombineParams{}, Bounds::defaults(), o);
    const auto b = tune(score, CombineParams{}, Bounds::defaults(), o);
    CHECK(a.params == b.params);
    CHECK(a.evaluations == b.evaluations);
    const auto bounds = Bounds::defaults();
    for (auto w : kAllParams) {
        CHECK(get(a.params, w) >= get(bounds.lower, w));
        CHECK(get(a.params, w) <= get(bounds.upper, w));
    }
}
