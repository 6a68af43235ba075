#include "relmix/wordnet.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include "relmix/error.hpp"
#include "relmix/text.hpp"

namespace relmix::wordnet {

namespace {

constexpr SynsetId kNone = std::numeric_limits<SynsetId>::max();

std::size_t posIndex(Pos p) {
    switch (p) {
        case Pos::Noun: return 0;
        case Pos::Verb: return 1;
        case Pos::Adjective: return 2;
        case Pos::Adverb: return 3;
    }
    return 0;
}

constexpr std::array<Pos, 4> kAllPos = {Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb};

std::optional<Pos> posFromChar(char c) {
    switch (c) {
        case 'n': return Pos::Noun;
        case 'v': return Pos::Verb;
        case 'a':
        case 's': return Pos::Adjective;
        case 'r': return Pos::Adverb;
        default: return std::nullopt;
    }
}

std::string normalizeLemma(std::string_view word) {
    std::string out;
    out.reserve(word.size());
    bool pendingSep = false;
    for (char c : word) {
        if (c == ' ' || c == '_' || c == '\t') {
            pendingSep = !out.empty();
            continue;
        }
        if (pendingSep) out.push_back('_');
        pendingSep = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string virtualRootKey(Pos p) { return std::string(1, static_cast<char>(p)) + "*root*"; }

// Detachment suffixes of WordNet's morphological processor.
struct Rule {
    std::string_view suffix;
    std::string_view ending;
};
constexpr Rule kNounRules[] = {{"s", ""}, {"ses", "s"}, {"xes", "x"}, {"zes", "z"},
                               {"ches", "ch"}, {"shes", "sh"}, {"men", "man"}, {"ies", "y"}};
constexpr Rule kVerbRules[] = {{"s", ""}, {"ies", "y"}, {"es", "e"}, {"es", ""},
                               {"ed", "e"}, {"ed", ""}, {"ing", "e"}, {"ing", ""}};
constexpr Rule kAdjRules[] = {{"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"}};

std::span<const Rule> rulesFor(Pos p) {
    switch (p) {
        case Pos::Noun: return kNounRules;
        case Pos::Verb: return kVerbRules;
        case Pos::Adjective: return kAdjRules;
        case Pos::Adverb: return {};
    }
    return {};
}

}  // namespace

// ---------------------------------------------------------------- Builder

void WordnetGraph::Builder::addSynset(std::string key, Pos pos, std::vector<std::string> lemmas,
                                      std::vector<std::string> hypernymKeys, std::string origin) {
    for (auto& l : lemmas) l = normalizeLemma(l);
    pending_.push_back(Pending{std::move(key), pos, std::move(lemmas), std::move(hypernymKeys), std::move(origin)});
}

void WordnetGraph::Builder::addLemma(std::string lemma, std::string synsetKey, std::string origin) {
    extraLemmas_.push_back(PendingLemma{normalizeLemma(lemma), std::move(synsetKey), std::move(origin)});
}

void WordnetGraph::Builder::addException(Pos pos, std::string inflected, std::string base) {
    exceptions_.emplace_back(pos, normalizeLemma(inflected), normalizeLemma(base));
}

WordnetGraph WordnetGraph::Builder::build() && {
    WordnetGraph g;
    auto where = [](const std::string& origin, const std::string& key) {
        return origin.empty() ? "synset " + key : origin;
    };

    g.synsets_.reserve(pending_.size() + 2);
    for (auto& p : pending_) {
        SynsetId id = static_cast<SynsetId>(g.synsets_.size());
        if (!g.byKey_.emplace(p.key, id).second) throw Error(where(p.origin, p.key) + ": duplicate synset " + p.key);
        Synset s;
        s.key = p.key;
        s.pos = p.pos;
        s.lemmas = p.lemmas;
        g.synsets_.push_back(std::move(s));
    }

    for (std::size_t i = 0; i < pending_.size(); ++i) {
        auto& s = g.synsets_[i];
        for (const auto& hk : pending_[i].hypernymKeys) {
            auto it = g.byKey_.find(hk);
            if (it == g.byKey_.end())
                throw Error(where(pending_[i].origin, s.key) + ": unknown hypernym " + hk + " of " + s.key);
            if (g.synsets_[it->second].pos != s.pos)
                throw Error(where(pending_[i].origin, s.key) + ": hypernym " + hk + " has a different part of speech");
            if (std::find(s.hypernyms.begin(), s.hypernyms.end(), it->second) == s.hypernyms.end())
                s.hypernyms.push_back(it->second);
        }
    }

    // Virtual roots for the two hierarchical parts of speech.
    for (Pos p : {Pos::Noun, Pos::Verb}) {
        const auto realCount = g.count(p);
        if (realCount == 0) continue;
        SynsetId rootId = static_cast<SynsetId>(g.synsets_.size());
        Synset root;
        root.key = virtualRootKey(p);
        root.pos = p;
        root.virtualRoot = true;
        for (std::size_t i = 0; i < rootId; ++i) {
            auto& s = g.synsets_[i];
            if (s.pos == p && !s.virtualRoot && s.hypernyms.empty()) s.hypernyms.push_back(rootId);
        }
        g.byKey_.emplace(root.key, rootId);
        g.synsets_.push_back(std::move(root));
    }

    g.hyponyms_.assign(g.synsets_.size(), {});
    for (SynsetId id = 0; id < g.synsets_.size(); ++id)
        for (auto h : g.synsets_[id].hypernyms) g.hyponyms_[h].push_back(id);

    // Longest path to the root, with cycle detection.
    constexpr unsigned kUnset = std::numeric_limits<unsigned>::max();
    g.depth_.assign(g.synsets_.size(), kUnset);
    std::vector<std::uint8_t> state(g.synsets_.size(), 0);  // 0 new, 1 on stack, 2 done
    for (SynsetId start = 0; start < g.synsets_.size(); ++start) {
        if (state[start] == 2) continue;
        std::vector<std::pair<SynsetId, std::size_t>> stack{{start, 0}};
        state[start] = 1;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            const auto& hyp = g.synsets_[node].hypernyms;
            if (next < hyp.size()) {
                SynsetId h = hyp[next++];
                if (state[h] == 1) throw Error("hypernym cycle through synset " + g.synsets_[h].key);
                if (state[h] == 0) {
                    state[h] = 1;
                    stack.emplace_back(h, 0);
                }
                continue;
            }
            unsigned d = 0;
            if (!g.synsets_[node].virtualRoot) {
                bool any = false;
                for (auto h : hyp) {
                    d = std::max(d, g.depth_[h] + 1);
                    any = true;
                }
                if (!any) d = 0;
            }
            g.depth_[node] = d;
            state[node] = 2;
            stack.pop_back();
        }
    }
    for (SynsetId id = 0; id < g.synsets_.size(); ++id) {
        auto& m = g.maxDepth_[posIndex(g.synsets_[id].pos)];
        m = std::max(m, g.depth_[id]);
    }

    for (SynsetId id = 0; id < g.synsets_.size(); ++id)
        for (const auto& l : g.synsets_[id].lemmas) g.lemmas_[l].push_back(id);
    for (const auto& el : extraLemmas_) {
        auto it = g.byKey_.find(el.key);
        if (it == g.byKey_.end()) throw Error(where(el.origin, el.key) + ": unknown synset " + el.key + " for lemma " + el.lemma);
        auto& v = g.lemmas_[el.lemma];
        if (std::find(v.begin(), v.end(), it->second) == v.end()) v.push_back(it->second);
    }
    for (auto& [_, v] : g.lemmas_) std::sort(v.begin(), v.end());

    for (const auto& [pos, inflected, base] : exceptions_)
        g.exceptions_[std::string(1, static_cast<char>(pos)) + ":" + inflected].push_back(base);

    return g;
}

// ---------------------------------------------------------------- queries

std::optional<SynsetId> WordnetGraph::find(std::string_view key) const {
    auto it = byKey_.find(std::string(key));
    if (it == byKey_.end()) return std::nullopt;
    return it->second;
}

std::size_t WordnetGraph::count(Pos pos) const {
    return static_cast<std::size_t>(std::count_if(synsets_.begin(), synsets_.end(),
                                                  [&](const Synset& s) { return s.pos == pos && !s.virtualRoot; }));
}

std::span<const SynsetId> WordnetGraph::sensesOf(std::string_view lemma) const {
    auto it = lemmas_.find(normalizeLemma(lemma));
    if (it == lemmas_.end()) return {};
    return it->second;
}

std::vector<SynsetId> WordnetGraph::lookup(std::string_view word) const {
    const std::string form = normalizeLemma(word);
    std::vector<SynsetId> out;
    if (form.empty()) return out;
    auto addForm = [&](const std::string& f, Pos p) {
        auto it = lemmas_.find(f);
        if (it == lemmas_.end()) return;
        for (auto id : it->second)
            if (synsets_[id].pos == p) out.push_back(id);
    };
    for (Pos p : kAllPos) {
        addForm(form, p);
        auto ex = exceptions_.find(std::string(1, static_cast<char>(p)) + ":" + form);
        if (ex != exceptions_.end())
            for (const auto& base : ex->second) addForm(base, p);
        for (const auto& r : rulesFor(p)) {
            if (form.size() <= r.suffix.size() || !form.ends_with(r.suffix)) continue;
            addForm(form.substr(0, form.size() - r.suffix.size()) + std::string(r.ending), p);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<SynsetId> WordnetGraph::root(Pos pos) const {
    if (pos != Pos::Noun && pos != Pos::Verb) return std::nullopt;
    return find(virtualRootKey(pos));
}

unsigned WordnetGraph::maxDepth(Pos pos) const { return maxDepth_[posIndex(pos)]; }

std::vector<SynsetId> WordnetGraph::ancestors(SynsetId id) const {
    std::vector<SynsetId> out{id};
    std::unordered_set<SynsetId> seen{id};
    for (std::size_t i = 0; i < out.size(); ++i)
        for (auto h : synsets_.at(out[i]).hypernyms)
            if (seen.insert(h).second) out.push_back(h);
    return out;
}

double WordnetGraph::informationContent(SynsetId id) const {
    if (ic_.empty()) throw Error("no information-content table loaded");
    return ic_.at(id);
}

void WordnetGraph::setInformationContent(std::vector<double> ic) {
    if (ic.size() != synsets_.size())
        throw Error("information-content table has " + std::to_string(ic.size()) + " entries, graph has " +
                    std::to_string(synsets_.size()));
    for (double v : ic)
        if (!std::isfinite(v) || v < 0) throw DomainError("information content must be finite and non-negative");
    ic_ = std::move(ic);
}

// ---------------------------------------------------------------- loading

void readDataFile(std::istream& in, const std::string& sourceName, WordnetGraph::Builder& builder) {
    std::string line;
    std::uint64_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == ' ') continue;  // license header
        auto fail = [&](const std::string& what) -> void { throw ParseError(sourceName, lineNo, what); };
        auto bar = line.find(" | ");
        std::istringstream ss(bar == std::string::npos ? line : line.substr(0, bar));
        std::string offset, lexFile, ssType, wCntHex;
        if (!(ss >> offset >> lexFile >> ssType >> wCntHex)) fail("truncated synset record");
        if (offset.size() != 8 || !std::all_of(offset.begin(), offset.end(), ::isdigit)) fail("bad synset offset '" + offset + "'");
        if (ssType.size() != 1 || !posFromChar(ssType[0])) fail("bad synset type '" + ssType + "'");
        const Pos pos = *posFromChar(ssType[0]);
        unsigned wCnt = 0;
        if (std::from_chars(wCntHex.data(), wCntHex.data() + wCntHex.size(), wCnt, 16).ec != std::errc{} || wCnt == 0)
            fail("bad word count '" + wCntHex + "'");
        std::vector<std::string> lemmas;
        for (unsigned i = 0; i < wCnt; ++i) {
            std::string word, lexId;
            if (!(ss >> word >> lexId)) fail("truncated word list");
            if (auto paren = word.find('('); paren != std::string::npos && word.back() == ')') word.erase(paren);
            lemmas.push_back(std::move(word));
        }
        unsigned pCnt = 0;
        if (!(ss >> pCnt)) fail("missing pointer count");
        std::vector<std::string> hypernyms;
        for (unsigned i = 0; i < pCnt; ++i) {
            std::string sym, target, tpos, srcTgt;
            if (!(ss >> sym >> target >> tpos >> srcTgt)) fail("truncated pointer list");
            if (sym != "@" && sym != "@i") continue;
            if (tpos.size() != 1 || !posFromChar(tpos[0])) fail("bad pointer part of speech '" + tpos + "'");
            hypernyms.push_back(std::string(1, static_cast<char>(*posFromChar(tpos[0]))) + target);
        }
        builder.addSynset(std::string(1, static_cast<char>(pos)) + offset, pos, std::move(lemmas), std::move(hypernyms),
                          sourceName + ":" + std::to_string(lineNo));
    }
}

namespace {

void readIndexFile(std::istream& in, const std::string& sourceName, Pos pos, WordnetGraph::Builder& builder) {
    std::string line;
    std::uint64_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == ' ') continue;
        auto fail = [&](const std::string& what) -> void { throw ParseError(sourceName, lineNo, what); };
        std::istringstream ss(line);
        std::string lemma, p;
        unsigned synsetCnt = 0, ptrCnt = 0;
        if (!(ss >> lemma >> p >> synsetCnt >> ptrCnt)) fail("truncated index record");
        for (unsigned i = 0; i < ptrCnt; ++i) {
            std::string sym;
            if (!(ss >> sym)) fail("truncated pointer symbols");
        }
        unsigned senseCnt = 0, tagged = 0;
        if (!(ss >> senseCnt >> tagged)) fail("missing sense counts");
        for (unsigned i = 0; i < synsetCnt; ++i) {
            std::string offset;
            if (!(ss >> offset)) fail("truncated synset offsets");
            builder.addLemma(lemma, std::string(1, static_cast<char>(pos)) + offset,
                             sourceName + ":" + std::to_string(lineNo));
        }
    }
}

void readExceptionFile(std::istream& in, Pos pos, WordnetGraph::Builder& builder) {
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string inflected, base;
        if (!(ss >> inflected)) continue;
        while (ss >> base) builder.addException(pos, inflected, base);
    }
}

}  // namespace

WordnetGraph loadWordnet(const std::string& directory) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    if (!fs::is_directory(dir)) throw Error(directory + ": WordNet directory not found");
    struct Part {
        Pos pos;
        const char* name;
    };
    constexpr Part parts[] = {{Pos::Noun, "noun"}, {Pos::Verb, "verb"}, {Pos::Adjective, "adj"}, {Pos::Adverb, "adv"}};

    WordnetGraph::Builder builder;
    for (const auto& part : parts) {
        const auto data = dir / (std::string("data.") + part.name);
        if (!fs::exists(data)) {
            if (part.pos == Pos::Noun) throw Error(data.string() + ": file not found");
            continue;
        }
        std::ifstream in(data);
        if (!in) throw Error(data.string() + ": cannot open");
        readDataFile(in, data.string(), builder);

        const auto index = dir / (std::string("index.") + part.name);
        if (fs::exists(index)) {
            std::ifstream ii(index);
            if (!ii) throw Error(index.string() + ": cannot open");
            readIndexFile(ii, index.string(), part.pos, builder);
        }
        const auto exc = dir / (std::string(part.name) + ".exc");
        if (fs::exists(exc)) {
            std::ifstream ie(exc);
            readExceptionFile(ie, part.pos, builder);
        }
    }
    return std::move(builder).build();
}

// ---------------------------------------------------------------- paths

std::optional<unsigned> pathLength(const WordnetGraph& g, std::span<const SynsetId> from,
                                   std::span<const SynsetId> to) {
    if (from.empty() || to.empty()) return std::nullopt;
    std::unordered_set<SynsetId> targets(to.begin(), to.end());
    std::unordered_map<SynsetId, unsigned> dist;
    std::queue<SynsetId> q;
    for (auto s : from) {
        if (targets.contains(s)) return 0u;
        if (dist.emplace(s, 0).second) q.push(s);
    }
    while (!q.empty()) {
        const SynsetId u = q.front();
        q.pop();
        const unsigned du = dist[u];
        auto visit = [&](SynsetId v) -> bool {
            if (!dist.emplace(v, du + 1).second) return false;
            if (targets.contains(v)) return true;
            q.push(v);
            return false;
        };
        for (auto v : g.synset(u).hypernyms)
            if (visit(v)) return du + 1;
        for (auto v : g.hyponyms(u))
            if (visit(v)) return du + 1;
    }
    return std::nullopt;
}

std::optional<unsigned> pathLength(const WordnetGraph& g, SynsetId s1, SynsetId s2) {
    if (s1 >= g.size() || s2 >= g.size()) throw Error("synset id out of range");
    if (s1 == s2) return 0u;
    if (g.synset(s1).pos != g.synset(s2).pos) return std::nullopt;
    // Bidirectional BFS: expand the smaller frontier one full level at a time.
    std::unordered_map<SynsetId, unsigned> da{{s1, 0}}, db{{s2, 0}};
    std::vector<SynsetId> fa{s1}, fb{s2};
    unsigned levelA = 0, levelB = 0;
    while (!fa.empty() && !fb.empty()) {
        const bool expandA = fa.size() <= fb.size();
        auto& frontier = expandA ? fa : fb;
        auto& mine = expandA ? da : db;
        auto& other = expandA ? db : da;
        unsigned& level = expandA ? levelA : levelB;
        std::vector<SynsetId> next;
        std::optional<unsigned> best;
        for (auto u : frontier) {
            auto step = [&](SynsetId v) {
                if (mine.contains(v)) return;
                mine.emplace(v, level + 1);
                if (auto it = other.find(v); it != other.end()) {
                    const unsigned total = level + 1 + it->second;
                    if (!best || total < *best) best = total;
                }
                next.push_back(v);
            };
            for (auto v : g.synset(u).hypernyms) step(v);
            for (auto v : g.hyponyms(u)) step(v);
        }
        if (best) return best;
        ++level;
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::optional<SynsetId> lowestCommonSubsumer(const WordnetGraph& g, SynsetId s1, SynsetId s2) {
    if (g.synset(s1).pos != g.synset(s2).pos) return std::nullopt;
    const auto a1 = g.ancestors(s1);
    const std::unordered_set<SynsetId> set1(a1.begin(), a1.end());
    SynsetId best = kNone;
    for (auto a : g.ancestors(s2)) {
        if (!set1.contains(a)) continue;
        if (best == kNone) {
            best = a;
            continue;
        }
        const auto da = g.depth(a), db = g.depth(best);
        if (da != db) {
            if (da > db) best = a;
            continue;
        }
        if (g.hasInformationContent()) {
            const double ia = g.informationContent(a), ib = g.informationContent(best);
            if (ia != ib) {
                if (ia > ib) best = a;
                continue;
            }
        }
        best = std::min(best, a);
    }
    if (best == kNone) return std::nullopt;
    return best;
}

// ---------------------------------------------------------------- measures

std::string_view toString(Measure m) {
    switch (m) {
        case Measure::WNP: return "wnp";
        case Measure::WUP: return "wup";
        case Measure::LCH: return "lch";
        case Measure::RES: return "res";
        case Measure::JCN: return "jcn";
        case Measure::LIN: return "lin";
    }
    return "wnp";
}

Measure parseMeasure(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (auto m : {Measure::WNP, Measure::WUP, Measure::LCH, Measure::RES, Measure::JCN, Measure::LIN})
        if (toString(m) == lower) return m;
    throw Error("unknown WordNet measure '" + std::string(s) + "'");
}

bool needsInformationContent(Measure m) { return m == Measure::RES || m == Measure::JCN || m == Measure::LIN; }

double synsetMeasure(Measure kind, const WordnetGraph& g, SynsetId s1, SynsetId s2, const MeasureOptions& options) {
    if (needsInformationContent(kind) && !g.hasInformationContent())
        throw Error(std::string(toString(kind)) + " needs an information-content table");
    if (g.synset(s1).pos != g.synset(s2).pos) return 0.0;
    switch (kind) {
        case Measure::WNP: {
            auto d = pathLength(g, s1, s2);
            return d ? 1.0 / (1.0 + *d) : 0.0;
        }
        case Measure::LCH: {
            auto d = pathLength(g, s1, s2);
            if (!d) return 0.0;
            const double maxNodes = g.maxDepth(g.synset(s1).pos) + 1.0;
            return -std::log((*d + 1.0) / (2.0 * maxNodes));
        }
        case Measure::WUP: {
            if (s1 == s2) return 1.0;
            auto lcs = lowestCommonSubsumer(g, s1, s2);
            if (!lcs) return 0.0;
            const double denom = double(g.depth(s1)) + double(g.depth(s2));
            return denom > 0 ? 2.0 * g.depth(*lcs) / denom : 0.0;
        }
        case Measure::RES: {
            auto lcs = lowestCommonSubsumer(g, s1, s2);
            return lcs ? g.informationContent(*lcs) : 0.0;
        }
        case Measure::LIN: {
            if (s1 == s2) return 1.0;
            auto lcs = lowestCommonSubsumer(g, s1, s2);
            if (!lcs) return 0.0;
            const double denom = g.informationContent(s1) + g.informationContent(s2);
            return denom > 0 ? 2.0 * g.informationContent(*lcs) / denom : 0.0;
        }
        case Measure::JCN: {
            auto lcs = lowestCommonSubsumer(g, s1, s2);
            if (!lcs) return 0.0;
            const double d = g.informationContent(s1) + g.informationContent(s2) - 2.0 * g.informationContent(*lcs);
            return d <= 1e-12 ? options.jcnCeiling : 1.0 / d;
        }
    }
    return 0.0;
}

double wordMeasure(Measure kind, const WordnetGraph& g, std::string_view w1, std::string_view w2,
                   const MeasureOptions& options) {
    const auto a = g.lookup(w1);
    const auto b = g.lookup(w2);
    if (a.empty() || b.empty()) return 0.0;
    if (kind == Measure::WNP) {
        // Shortest distance over all sense pairs; cross-POS pairs are never connected.
        auto d = pathLength(g, a, b);
        return d ? 1.0 / (1.0 + *d) : 0.0;
    }
    double best = 0.0;
    for (auto s1 : a)
        for (auto s2 : b) best = std::max(best, synsetMeasure(kind, g, s1, s2, options));
    return best;
}

// ---------------------------------------------------------------- information content

std::vector<double> computeIC(const WordnetGraph& g, const std::unordered_map<std::string, double>& counts,
                              const IcOptions& options) {
    if (counts.empty()) throw DomainError("information content needs non-empty corpus counts");
    const auto& stop = text::defaultStopwords();

    auto keyOf = [&](const std::string& lemma) -> std::string {
        if (!options.stemLemmas) return lemma;
        std::string spaced = lemma;
        std::replace(spaced.begin(), spaced.end(), '_', ' ');
        const auto tokens = text::tokenize(spaced);
        if (tokens.size() != 1) return {};
        const auto terms = text::normalizeStemmed(tokens, stop);
        return terms.size() == 1 ? terms.front().text : std::string{};
    };

    std::vector<double> own(g.size(), 0.0);
    for (SynsetId id = 0; id < g.size(); ++id)
        if (!g.synset(id).virtualRoot) own[id] = 1.0;  // add-one smoothing

    // Each count key is split evenly over the same-POS synsets having a lemma
    // with that key; a synset whose lemmas share a key is counted once.
    std::unordered_map<std::string, std::string> keyCache;
    std::map<std::pair<std::string, Pos>, std::set<SynsetId>> holders;
    for (SynsetId id = 0; id < g.size(); ++id) {
        const auto& s = g.synset(id);
        for (const auto& lemma : s.lemmas) {
            auto [it, inserted] = keyCache.try_emplace(lemma);
            if (inserted) it->second = keyOf(lemma);
            if (it->second.empty()) continue;
            auto c = counts.find(it->second);
            if (c == counts.end() || c->second <= 0) continue;
            holders[{it->second, s.pos}].insert(id);
        }
    }
    for (const auto& [key, ids] : holders) {
        const double share = counts.at(key.first) / static_cast<double>(ids.size());
        for (auto id : ids) own[id] += share;
    }

    std::vector<double> cumulative(g.size(), 0.0);
    for (SynsetId id = 0; id < g.size(); ++id) {
        if (own[id] == 0.0) continue;
        for (auto a : g.ancestors(id)) cumulative[a] += own[id];
    }

    std::array<double, 4> totals{};
    for (Pos p : kAllPos) {
        if (auto r = g.root(p)) {
            totals[posIndex(p)] = cumulative[*r];
        } else {
            double t = 0;
            for (SynsetId id = 0; id < g.size(); ++id)
                if (g.synset(id).pos == p) t += own[id];
            totals[posIndex(p)] = t;
        }
    }

    std::vector<double> ic(g.size(), 0.0);
    for (SynsetId id = 0; id < g.size(); ++id) {
        const double total = totals[posIndex(g.synset(id).pos)];
        const double c = cumulative[id];
        ic[id] = (c > 0 && total > 0) ? std::max(0.0, -std::log(c / total)) : 0.0;
    }
    return ic;
}

void writeIC(const WordnetGraph& g, std::ostream& out) {
    const auto& ic = g.informationContentTable();
    if (ic.empty()) throw Error("no information-content table to write");
    std::array<char, 32> buf{};
    for (SynsetId id = 0; id < g.size(); ++id) {
        auto r = std::to_chars(buf.data(), buf.data() + buf.size(), ic[id]);
        out << g.synset(id).key << '\t' << std::string_view(buf.data(), static_cast<std::size_t>(r.ptr - buf.data()))
            << '\n';
    }
}

std::vector<double> readIC(const WordnetGraph& g, std::istream& in, const std::string& sourceName) {
    std::vector<double> ic(g.size(), 0.0);
    std::vector<bool> seen(g.size(), false);
    std::string line;
    std::uint64_t lineNo = 0;
    std::size_t filled = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(sourceName, lineNo, "expected synsetId<TAB>ic");
        auto id = g.find(std::string_view(line).substr(0, tab));
        if (!id) throw ParseError(sourceName, lineNo, "unknown synset " + line.substr(0, tab));
        double v = 0;
        const char* first = line.data() + tab + 1;
        const char* last = line.data() + line.size();
        auto r = std::from_chars(first, last, v);
        if (r.ec != std::errc{} || r.ptr != last || !std::isfinite(v) || v < 0)
            throw ParseError(sourceName, lineNo, "bad information-content value");
        if (seen[*id]) throw ParseError(sourceName, lineNo, "duplicate synset " + line.substr(0, tab));
        seen[*id] = true;
        ic[*id] = v;
        ++filled;
    }
    if (filled != g.size())
        throw ParseError(sourceName, lineNo, "table covers " + std::to_string(filled) + " of " +
                                                 std::to_string(g.size()) + " synsets");
    return ic;
}

}  // namespace relmix::wordnet
