#include "relmix/wikitext.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace relmix::corpus {

namespace {

bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool isAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && isSpace(s.front())) s.remove_prefix(1);
    while (!s.empty() && isSpace(s.back())) s.remove_suffix(1);
    return s;
}

bool startsWithNoCase(std::string_view s, std::size_t pos, std::string_view prefix) {
    if (s.size() - pos < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
    return true;
}

std::size_t findNoCase(std::string_view s, std::string_view needle, std::size_t from) {
    for (std::size_t i = from; i + needle.size() <= s.size(); ++i)
        if (startsWithNoCase(s, i, needle)) return i;
    return std::string_view::npos;
}

// Tags whose content never reaches the text.
constexpr std::array<std::string_view, 11> kDropContentTags = {
    "ref", "math", "gallery", "timeline", "score", "syntaxhighlight",
    "source", "imagemap", "graph", "chem", "hiero"};

// Link prefixes whose links are removed with their text.
constexpr std::array<std::string_view, 4> kRemovedNamespaces = {"category", "file", "image", "media"};

// Link prefixes that render as text but do not point at a concept.
constexpr std::array<std::string_view, 24> kOtherNamespaces = {
    "template", "wikipedia", "wp", "help", "portal", "user", "user talk", "talk", "special", "module",
    "draft", "mediawiki", "book", "wiktionary", "wikt", "commons", "meta", "wikisource", "wikiquote",
    "wikinews", "wikibooks", "wikispecies", "wikiversity", "wikivoyage"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

bool looksLikeLanguageCode(std::string_view prefix) {
    // "de", "fr", "simple", "zh-min-nan"
    if (prefix.size() < 2 || prefix.size() > 12) return false;
    std::size_t run = 0;
    for (char c : prefix) {
        if (c >= 'a' && c <= 'z') {
            ++run;
        } else if (c == '-' && run > 0) {
            run = 0;
        } else {
            return false;
        }
    }
    return run > 0 && (prefix.find('-') != std::string_view::npos || prefix.size() <= 3 || prefix == "simple");
}

class Cleaner {
public:
    std::size_t diagnostics = 0;
    std::vector<Link> links;

    std::string stripComments(std::string_view in) {
        std::string out;
        out.reserve(in.size());
        std::size_t pos = 0;
        while (pos < in.size()) {
            auto open = in.find("<!--", pos);
            if (open == std::string_view::npos) {
                out.append(in.substr(pos));
                break;
            }
            out.append(in.substr(pos, open - pos));
            auto close = in.find("-->", open + 4);
            if (close == std::string_view::npos) {
                ++diagnostics;
                break;
            }
            pos = close + 3;
        }
        return out;
    }

    std::string stripTags(std::string_view in) {
        std::string out;
        out.reserve(in.size());
        std::size_t pos = 0;
        while (pos < in.size()) {
            auto lt = in.find('<', pos);
            if (lt == std::string_view::npos) {
                out.append(in.substr(pos));
                break;
            }
            out.append(in.substr(pos, lt - pos));
            std::size_t p = lt + 1;
            const bool closing = p < in.size() && in[p] == '/';
            if (closing) ++p;
            std::size_t nameStart = p;
            while (p < in.size() && (isAlpha(in[p]) || (p > nameStart && std::isdigit(static_cast<unsigned char>(in[p])))))
                ++p;
            if (p == nameStart) {  // not a tag
                out.push_back('<');
                pos = lt + 1;
                continue;
            }
            auto gt = in.find('>', p);
            if (gt == std::string_view::npos) {
                ++diagnostics;
                out.push_back(' ');
                pos = p;
                continue;
            }
            const auto name = lower(in.substr(nameStart, p - nameStart));
            const bool selfClosing = in[gt - 1] == '/';
            pos = gt + 1;
            if (!closing && !selfClosing && contains(kDropContentTags, name)) {
                auto end = findNoCase(in, "</" + name, pos);
                if (end == std::string_view::npos) {
                    ++diagnostics;
                } else {
                    auto endGt = in.find('>', end);
                    pos = endGt == std::string_view::npos ? in.size() : endGt + 1;
                }
            }
            out.push_back(' ');
        }
        return out;
    }

    // Removes balanced open...close spans (templates, tables), nesting allowed.
    std::string stripBalanced(std::string_view in, std::string_view open, std::string_view close) {
        std::string out;
        out.reserve(in.size());
        std::size_t pos = 0;
        while (pos < in.size()) {
            auto start = in.find(open, pos);
            auto strayClose = in.find(close, pos);
            if (strayClose != std::string_view::npos && (start == std::string_view::npos || strayClose < start)) {
                out.append(in.substr(pos, strayClose - pos));
                ++diagnostics;
                pos = strayClose + close.size();
                continue;
            }
            if (start == std::string_view::npos) {
                out.append(in.substr(pos));
                break;
            }
            out.append(in.substr(pos, start - pos));
            int depth = 0;
            std::size_t p = start;
            std::size_t end = std::string_view::npos;
            while (p < in.size()) {
                if (in.compare(p, open.size(), open) == 0) {
                    ++depth;
                    p += open.size();
                } else if (in.compare(p, close.size(), close) == 0) {
                    --depth;
                    p += close.size();
                    if (depth == 0) {
                        end = p;
                        break;
                    }
                } else {
                    ++p;
                }
            }
            if (end == std::string_view::npos) {
                // Unclosed: drop the opener only and keep scanning.
                ++diagnostics;
                pos = start + open.size();
                continue;
            }
            pos = end;
        }
        return out;
    }

    std::string resolveLinks(std::string_view in) {
        std::string out;
        out.reserve(in.size());
        std::size_t pos = 0;
        while (pos < in.size()) {
            if (in.compare(pos, 2, "[[") == 0) {
                auto end = matchingLinkEnd(in, pos);
                if (end == std::string_view::npos) {
                    ++diagnostics;
                    pos += 2;
                    continue;
                }
                internalLink(in.substr(pos + 2, end - pos - 2), out);
                pos = end + 2;
                continue;
            }
            if (in[pos] == '[' && isExternalStart(in, pos + 1)) {
                auto close = in.find(']', pos);
                auto nl = in.find('\n', pos);
                if (close == std::string_view::npos || (nl != std::string_view::npos && nl < close)) {
                    ++diagnostics;
                    ++pos;
                    continue;
                }
                auto body = in.substr(pos + 1, close - pos - 1);
                auto sp = body.find_first_of(" \t");
                if (sp != std::string_view::npos) out.append(body.substr(sp + 1));
                pos = close + 1;
                continue;
            }
            if (isExternalStart(in, pos) && (pos == 0 || !isAlpha(in[pos - 1]))) {
                // bare URL
                while (pos < in.size() && !isSpace(in[pos]) && in[pos] != '|' && in[pos] != ']') ++pos;
                continue;
            }
            out.push_back(in[pos++]);
        }
        return out;
    }

private:
    static bool isExternalStart(std::string_view s, std::size_t pos) {
        return startsWithNoCase(s, pos, "http://") || startsWithNoCase(s, pos, "https://") ||
               startsWithNoCase(s, pos, "ftp://") || s.compare(pos, 2, "//") == 0;
    }

    static std::size_t matchingLinkEnd(std::string_view s, std::size_t start) {
        int depth = 0;
        std::size_t p = start;
        while (p + 1 < s.size()) {
            if (s[p] == '[' && s[p + 1] == '[') {
                ++depth;
                p += 2;
            } else if (s[p] == ']' && s[p + 1] == ']') {
                if (--depth == 0) return p;
                p += 2;
            } else {
                ++p;
            }
        }
        return std::string_view::npos;
    }

    void internalLink(std::string_view body, std::string& out) {
        bool leadingColon = false;
        auto b = trim(body);
        if (!b.empty() && b.front() == ':') {
            leadingColon = true;
            b.remove_prefix(1);
        }
        auto bar = b.find('|');
        auto target = trim(b.substr(0, bar));
        std::string_view anchor = bar == std::string_view::npos ? target : b.substr(bar + 1);

        bool conceptLink = !leadingColon;
        auto colon = target.find(':');
        if (colon != std::string_view::npos) {
            auto prefixRaw = trim(target.substr(0, colon));
            auto prefix = lower(prefixRaw);
            if (!leadingColon && contains(kRemovedNamespaces, prefix)) return;
            if (!leadingColon && prefixRaw == prefix && looksLikeLanguageCode(prefix)) return;
            if (contains(kOtherNamespaces, prefix) || contains(kRemovedNamespaces, prefix)) conceptLink = false;
        }
        // Anchors may hold nested links and formatting.
        std::string text = resolveLinks(anchor);
        if (bar != std::string_view::npos && trim(text).empty()) text = std::string(target);
        if (conceptLink) {
            auto title = normalizeTitle(target);
            if (!title.empty()) links.push_back(Link{title, std::string(trim(stripQuotes(text)))});
        }
        out.append(text);
    }

public:
    static std::string stripQuotes(std::string_view in) {
        std::string out;
        out.reserve(in.size());
        std::size_t i = 0;
        while (i < in.size()) {
            if (in[i] == '\'') {
                std::size_t j = i;
                while (j < in.size() && in[j] == '\'') ++j;
                if (j - i >= 2) {
                    i = j;
                    continue;
                }
            }
            out.push_back(in[i++]);
        }
        return out;
    }

    static std::string decodeEntities(std::string_view in) {
        std::string out;
        out.reserve(in.size());
        std::size_t i = 0;
        while (i < in.size()) {
            if (in[i] == '&') {
                auto semi = in.find(';', i);
                if (semi != std::string_view::npos && semi - i <= 10) {
                    auto name = in.substr(i + 1, semi - i - 1);
                    std::string rep;
                    bool known = true;
                    if (name == "amp") rep = "&";
                    else if (name == "lt") rep = "<";
                    else if (name == "gt") rep = ">";
                    else if (name == "quot") rep = "\"";
                    else if (name == "apos") rep = "'";
                    else if (name == "nbsp" || name == "ensp" || name == "emsp" || name == "thinsp") rep = " ";
                    else if (name == "ndash" || name == "mdash" || name == "minus") rep = " - ";
                    else if (!name.empty() && name[0] == '#') {
                        unsigned code = 0;
                        std::from_chars_result r{};
                        if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
                            r = std::from_chars(name.data() + 2, name.data() + name.size(), code, 16);
                        else
                            r = std::from_chars(name.data() + 1, name.data() + name.size(), code);
                        if (r.ec != std::errc{} || r.ptr != name.data() + name.size()) known = false;
                        else rep = (code >= 32 && code < 127) ? std::string(1, static_cast<char>(code)) : " ";
                    } else {
                        known = false;
                    }
                    if (known) {
                        out.append(rep);
                        i = semi + 1;
                        continue;
                    }
                }
            }
            out.push_back(in[i++]);
        }
        return out;
    }
};

// "== Heading ==" -> "Heading"; not a heading -> npos-length result.
bool parseHeading(std::string_view line, std::string& heading) {
    line = trim(line);
    if (line.size() < 3 || line.front() != '=' || line.back() != '=') return false;
    std::size_t lead = 0;
    while (lead < line.size() && line[lead] == '=') ++lead;
    std::size_t tail = 0;
    while (tail < line.size() && line[line.size() - 1 - tail] == '=') ++tail;
    auto level = std::min({lead, tail, std::size_t{6}});
    if (2 * level >= line.size()) return false;
    auto inner = trim(line.substr(level, line.size() - 2 * level));
    if (inner.empty()) return false;
    heading = std::string(inner);
    return true;
}

std::string_view stripLinePrefix(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == '*' || line[i] == '#' || line[i] == ':' || line[i] == ';')) ++i;
    return line.substr(i);
}

bool isMagicWord(std::string_view s, std::size_t pos, std::size_t& end) {
    if (s.compare(pos, 2, "__") != 0) return false;
    std::size_t p = pos + 2;
    while (p < s.size() && s[p] >= 'A' && s[p] <= 'Z') ++p;
    if (p == pos + 2 || s.compare(p, 2, "__") != 0) return false;
    end = p + 2;
    return true;
}

}  // namespace

std::string normalizeTitle(std::string_view title) {
    auto hash = title.find('#');
    if (hash != std::string_view::npos) title = title.substr(0, hash);
    std::string out;
    bool pendingSpace = false;
    for (char c : title) {
        if (c == '_' || isSpace(c)) {
            pendingSpace = !out.empty();
            continue;
        }
        if (pendingSpace) out.push_back(' ');
        pendingSpace = false;
        out.push_back(c);
    }
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out;
}

std::vector<std::string> splitSentences(std::string_view paragraph) {
    std::vector<std::string> out;
    std::size_t start = 0;
    auto emit = [&](std::size_t end) {
        auto s = trim(paragraph.substr(start, end - start));
        if (!s.empty()) {
            std::string collapsed;
            bool space = false;
            for (char c : s) {
                if (isSpace(c)) {
                    space = true;
                    continue;
                }
                if (space) collapsed.push_back(' ');
                space = false;
                collapsed.push_back(c);
            }
            out.push_back(std::move(collapsed));
        }
    };
    for (std::size_t i = 0; i < paragraph.size(); ++i) {
        const char c = paragraph[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t j = i;
        while (j + 1 < paragraph.size() && (paragraph[j + 1] == '.' || paragraph[j + 1] == '!' || paragraph[j + 1] == '?'))
            ++j;
        if (j + 1 == paragraph.size() || isSpace(paragraph[j + 1])) {
            emit(j + 1);
            start = j + 1;
        }
        i = j;
    }
    emit(paragraph.size());
    return out;
}

CleanedText cleanWikitext(std::string_view markup) {
    Cleaner cleaner;
    auto text = cleaner.stripComments(markup);
    text = cleaner.stripTags(text);
    text = cleaner.stripBalanced(text, "{{", "}}");
    text = cleaner.stripBalanced(text, "{|", "|}");
    text = cleaner.resolveLinks(text);
    text = Cleaner::stripQuotes(text);

    CleanedText result;
    result.sections.push_back(Section{});
    std::string paragraph;
    auto flush = [&]() {
        auto decoded = Cleaner::decodeEntities(paragraph);
        for (auto& s : splitSentences(decoded)) result.sections.back().sentences.push_back(std::move(s));
        paragraph.clear();
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string_view line(text.data() + pos, nl - pos);
        pos = nl + 1;

        std::string heading;
        if (parseHeading(line, heading)) {
            flush();
            result.sections.push_back(Section{Cleaner::decodeEntities(heading), {}, std::nullopt});
            continue;
        }
        auto body = trim(line);
        if (body.starts_with("----")) continue;
        auto unprefixed = trim(stripLinePrefix(body));
        const bool listItem = unprefixed.size() != body.size();
        if (unprefixed.empty()) {
            flush();
            continue;
        }
        std::string cleanedLine;
        for (std::size_t i = 0; i < unprefixed.size(); ++i) {
            std::size_t end = 0;
            if (isMagicWord(unprefixed, i, end)) {
                i = end - 1;
                continue;
            }
            cleanedLine.push_back(unprefixed[i]);
        }
        if (listItem) {
            flush();
            paragraph = std::move(cleanedLine);
            flush();
            continue;
        }
        if (!paragraph.empty()) paragraph.push_back(' ');
        paragraph += cleanedLine;
    }
    flush();
    result.links = std::move(cleaner.links);
    result.diagnostics = cleaner.diagnostics;
    return result;
}

}  // namespace relmix::corpus
