#include "relmix/combiner.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "relmix/error.hpp"

namespace relmix::combine {

namespace {
constexpr std::array<std::string_view, 7> kKeys = {"lambda", "m", "s", "lambda_prime", "m_prime", "s_prime", "xi"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}
}  // namespace

void CombineParams::validate() const {
    for (auto p : kAllParams)
        if (!std::isfinite(get(*this, p))) throw DomainError(std::string(keyOf(p)) + " must be finite");
    if (!(s > 0)) throw DomainError("s must be positive");
    if (!(sPrime > 0)) throw DomainError("s_prime must be positive");
    if (lambda < 0) throw DomainError("lambda must be non-negative");
    if (lambdaPrime < 0) throw DomainError("lambda_prime must be non-negative");
    if (xi < 0 || xi > 1) throw DomainError("xi must lie in [0, 1]");
}

std::string_view keyOf(Param p) { return kKeys[static_cast<std::size_t>(p)]; }

std::optional<Param> paramFromKey(std::string_view key) {
    for (auto p : kAllParams)
        if (keyOf(p) == key) return p;
    return std::nullopt;
}

double get(const CombineParams& p, Param which) {
    switch (which) {
        case Param::Lambda: return p.lambda;
        case Param::M: return p.m;
        case Param::S: return p.s;
        case Param::LambdaPrime: return p.lambdaPrime;
        case Param::MPrime: return p.mPrime;
        case Param::SPrime: return p.sPrime;
        case Param::Xi: return p.xi;
    }
    return 0.0;
}

void set(CombineParams& p, Param which, double value) {
    switch (which) {
        case Param::Lambda: p.lambda = value; break;
        case Param::M: p.m = value; break;
        case Param::S: p.s = value; break;
        case Param::LambdaPrime: p.lambdaPrime = value; break;
        case Param::MPrime: p.mPrime = value; break;
        case Param::SPrime: p.sPrime = value; break;
        case Param::Xi: p.xi = value; break;
    }
}

double sigmoid(double x, double m, double s) {
    if (!(s > 0)) throw DomainError("sigmoid steepness must be positive");
    return 1.0 / (1.0 + std::exp(-(x - m) / s));
}

double ew(double esa, double wnp, const CombineParams& p) { return esa * (1.0 + p.lambda * sigmoid(wnp, p.m, p.s)); }

double ewc(double esa, double wnp, double cxi, const CombineParams& p) {
    return ew(esa, wnp, p) * (1.0 + p.lambdaPrime * sigmoid(cxi, p.mPrime, p.sPrime));
}

std::string formatDouble(double v) {
    std::array<char, 32> buf{};
    auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
}

double parseDouble(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v))
        throw Error("not a finite number: '" + std::string(s) + "'");
    return v;
}

void writeParams(const CombineParams& p, std::ostream& out) {
    for (auto which : kAllParams) out << keyOf(which) << '=' << formatDouble(get(p, which)) << '\n';
}

CombineParams readParams(std::istream& in, const std::string& sourceName) {
    CombineParams p;
    std::string line;
    std::uint64_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError(sourceName, lineNo, "expected key=value");
        auto key = trim(t.substr(0, eq));
        auto which = paramFromKey(key);
        if (!which) throw ParseError(sourceName, lineNo, "unknown key '" + std::string(key) + "'");
        try {
            set(p, *which, parseDouble(t.substr(eq + 1)));
        } catch (const Error& e) {
            throw ParseError(sourceName, lineNo, e.what());
        }
    }
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ParseError(sourceName, lineNo, e.what());
    }
    return p;
}

void saveParams(const CombineParams& p, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    writeParams(p, out);
}

CombineParams loadParams(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open params file " + path);
    return readParams(in, path);
}

}  // namespace relmix::combine
