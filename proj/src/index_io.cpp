// On-disk layout (all integers little-endian):
//   "RLMXESA\0"  u32 version
//   u32 metadata count, then (str key, str value) pairs
//   u64 concept count, then (i64 page id, str title)
//   u64 term count, then the dictionary: (str term, u32 postings)
//   postings of every term in dictionary order: (u32 concept, f64 weight)
//   "RLMXEND\0"
// where str is a u32 byte length followed by the bytes.

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>

#include "relmix/error.hpp"
#include "relmix/esa.hpp"

namespace relmix::esa {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'L', 'M', 'X', 'E', 'S', 'A', '\0'};
constexpr std::array<char, 8> kTrailer = {'R', 'L', 'M', 'X', 'E', 'N', 'D', '\0'};

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    template <typename T>
    void integer(T v) {
        using U = std::make_unsigned_t<T>;
        auto u = static_cast<U>(v);
        std::array<char, sizeof(T)> buf{};
        for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((u >> (8 * i)) & 0xFF);
        out_.write(buf.data(), buf.size());
    }
    void real(double v) { integer(std::bit_cast<std::uint64_t>(v)); }
    void string(const std::string& s) {
        integer(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    void raw(const std::array<char, 8>& bytes) { out_.write(bytes.data(), bytes.size()); }

private:
    std::ostream& out_;
};

class Reader {
public:
    Reader(std::istream& in, const std::string& source) : in_(in), source_(source) {}

    template <typename T>
    T integer() {
        std::array<unsigned char, sizeof(T)> buf{};
        read(reinterpret_cast<char*>(buf.data()), buf.size());
        std::make_unsigned_t<T> u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<std::make_unsigned_t<T>>(buf[i]) << (8 * i);
        return static_cast<T>(u);
    }
    double real() { return std::bit_cast<double>(integer<std::uint64_t>()); }
    std::string string() {
        const auto n = integer<std::uint32_t>();
        if (n > (1u << 30)) fail("string length out of range");
        std::string s(n, '\0');
        read(s.data(), n);
        return s;
    }
    std::array<char, 8> raw() {
        std::array<char, 8> b{};
        read(b.data(), b.size());
        return b;
    }
    [[noreturn]] void fail(const std::string& what) { throw ParseError(source_, offset_, what, true); }

private:
    void read(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) fail("unexpected end of index file");
        offset_ += n;
    }

    std::istream& in_;
    std::string source_;
    std::uint64_t offset_ = 0;
};

std::string formatWeight(double w) {
    std::array<char, 32> buf{};
    auto r = std::to_chars(buf.data(), buf.data() + buf.size(), w);
    return std::string(buf.data(), r.ptr);
}

}  // namespace

void writeIndex(const InvertedIndex& index, std::ostream& out) {
    Writer w(out);
    w.raw(kMagic);
    w.integer(kIndexFormatVersion);
    w.integer(static_cast<std::uint32_t>(index.metadata().size()));
    for (const auto& [k, v] : index.metadata()) {
        w.string(k);
        w.string(v);
    }
    w.integer(static_cast<std::uint64_t>(index.conceptCount()));
    for (const auto& c : index.concepts()) {
        w.integer(c.pageId);
        w.string(c.title);
    }
    w.integer(static_cast<std::uint64_t>(index.termCount()));
    for (std::size_t t = 0; t < index.termCount(); ++t) {
        w.string(index.terms()[t]);
        w.integer(static_cast<std::uint32_t>(index.vectors()[t].size()));
    }
    for (const auto& v : index.vectors())
        for (const auto& e : v.entries()) {
            w.integer(e.conceptId);
            w.real(e.weight);
        }
    w.raw(kTrailer);
    if (!out) throw Error("failed writing index");
}

InvertedIndex readIndex(std::istream& in, const std::string& sourceName) {
    Reader r(in, sourceName);
    if (r.raw() != kMagic) r.fail("not a relmix index (bad magic)");
    const auto version = r.integer<std::uint32_t>();
    if (version != kIndexFormatVersion) r.fail("unsupported index version " + std::to_string(version));
    std::map<std::string, std::string> metadata;
    const auto mdCount = r.integer<std::uint32_t>();
    for (std::uint32_t i = 0; i < mdCount; ++i) {
        auto k = r.string();
        metadata[k] = r.string();
    }
    const auto conceptCount = r.integer<std::uint64_t>();
    std::vector<ConceptInfo> concepts;
    concepts.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(conceptCount, 1u << 24)));
    for (std::uint64_t i = 0; i < conceptCount; ++i) {
        ConceptInfo c;
        c.pageId = r.integer<std::int64_t>();
        c.title = r.string();
        concepts.push_back(std::move(c));
    }
    const auto termCount = r.integer<std::uint64_t>();
    std::vector<std::string> terms;
    std::vector<std::uint32_t> sizes;
    for (std::uint64_t i = 0; i < termCount; ++i) {
        terms.push_back(r.string());
        sizes.push_back(r.integer<std::uint32_t>());
    }
    std::vector<SparseVector> vectors;
    vectors.reserve(terms.size());
    for (auto n : sizes) {
        std::vector<SparseEntry> entries(n);
        for (auto& e : entries) {
            e.conceptId = r.integer<std::uint32_t>();
            e.weight = r.real();
        }
        try {
            vectors.emplace_back(std::move(entries));
        } catch (const Error& e) {
            r.fail(e.what());
        }
    }
    if (r.raw() != kTrailer) r.fail("missing index trailer");
    try {
        return InvertedIndex(std::move(concepts), std::move(terms), std::move(vectors), std::move(metadata));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        r.fail(e.what());
    }
}

void saveIndex(const InvertedIndex& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    writeIndex(index, out);
}

InvertedIndex loadIndex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index " + path);
    return readIndex(in, path);
}

void exportText(const InvertedIndex& index, std::ostream& out) {
    for (std::size_t t = 0; t < index.termCount(); ++t) {
        out << index.terms()[t] << '\t';
        bool first = true;
        for (const auto& e : index.vectors()[t].entries()) {
            if (!first) out << ',';
            first = false;
            out << e.conceptId << ':' << formatWeight(e.weight);
        }
        out << '\n';
    }
}

}  // namespace relmix::esa
