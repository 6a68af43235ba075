#include <expat.h>

#include <array>
#include <charconv>
#include <cstring>
#include <memory>
#include <string_view>

#include "relmix/dump.hpp"
#include "relmix/error.hpp"

namespace relmix::corpus {

namespace {

enum class Field { None, Title, Ns, Id, Text };

struct ParserState {
    const std::function<void(RawPage&&)>* sink = nullptr;
    DumpSummary summary;
    RawPage page;
    bool inPage = false;
    bool inRevision = false;
    bool haveId = false;
    Field field = Field::None;
    std::string buffer;
    std::string callbackError;
    XML_Parser parser = nullptr;
};

std::int64_t parseInt(const std::string& s) {
    std::int64_t v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && (*first == ' ' || *first == '\n' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\n' || last[-1] == '\t')) --last;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last) return 0;
    return v;
}

void XMLCALL onStart(void* userData, const XML_Char* name, const XML_Char** attrs) {
    auto& st = *static_cast<ParserState*>(userData);
    std::string_view n(name);
    if (n == "page") {
        st.inPage = true;
        st.inRevision = false;
        st.haveId = false;
        st.page = RawPage{};
        return;
    }
    if (!st.inPage) return;
    if (n == "revision") {
        st.inRevision = true;
    } else if (n == "redirect") {
        std::string target;
        for (int i = 0; attrs[i]; i += 2)
            if (std::string_view(attrs[i]) == "title") target = attrs[i + 1];
        st.page.redirectTarget = std::move(target);
    } else if (n == "title" && !st.inRevision) {
        st.field = Field::Title;
    } else if (n == "ns" && !st.inRevision) {
        st.field = Field::Ns;
    } else if (n == "id" && !st.inRevision && !st.haveId) {
        st.field = Field::Id;
    } else if (n == "text" && st.inRevision) {
        st.field = Field::Text;
    }
    st.buffer.clear();
}

void XMLCALL onEnd(void* userData, const XML_Char* name) {
    auto& st = *static_cast<ParserState*>(userData);
    std::string_view n(name);
    if (!st.inPage) return;
    switch (st.field) {
        case Field::Title:
            if (n == "title") st.page.title = std::move(st.buffer);
            break;
        case Field::Ns:
            if (n == "ns") st.page.ns = static_cast<int>(parseInt(st.buffer));
            break;
        case Field::Id:
            if (n == "id") {
                st.page.id = parseInt(st.buffer);
                st.haveId = true;
            }
            break;
        case Field::Text:
            if (n == "text") st.page.wikitext = std::move(st.buffer);
            break;
        case Field::None:
            break;
    }
    st.field = Field::None;
    st.buffer.clear();
    if (n == "revision") {
        st.inRevision = false;
    } else if (n == "page") {
        st.inPage = false;
        ++st.summary.pages;
        if (st.page.redirectTarget) ++st.summary.redirects;
        try {
            (*st.sink)(std::move(st.page));
        } catch (const std::exception& e) {
            st.callbackError = e.what();
            XML_StopParser(st.parser, XML_FALSE);
        }
        st.page = RawPage{};
    }
}

void XMLCALL onText(void* userData, const XML_Char* s, int len) {
    auto& st = *static_cast<ParserState*>(userData);
    if (st.field != Field::None) st.buffer.append(s, static_cast<std::size_t>(len));
}

struct ParserDeleter {
    void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

DumpSummary parseDump(std::istream& in, const std::function<void(RawPage&&)>& sink,
                      const std::string& sourceName) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
    if (!parser) throw Error("cannot allocate XML parser");
    ParserState state;
    state.sink = &sink;
    state.parser = parser.get();
    XML_SetUserData(parser.get(), &state);
    XML_SetElementHandler(parser.get(), onStart, onEnd);
    XML_SetCharacterDataHandler(parser.get(), onText);

    auto fail = [&]() {
        throw ParseError(sourceName, static_cast<std::uint64_t>(XML_GetCurrentByteIndex(parser.get())),
                         XML_ErrorString(XML_GetErrorCode(parser.get())), true);
    };

    std::array<char, 1 << 16> chunk{};
    for (;;) {
        in.read(chunk.data(), chunk.size());
        const auto got = in.gcount();
        const bool last = got < static_cast<std::streamsize>(chunk.size());
        state.summary.bytes += static_cast<std::uint64_t>(got);
        const auto status =
            XML_Parse(parser.get(), chunk.data(), static_cast<int>(got), last ? XML_TRUE : XML_FALSE);
        if (!state.callbackError.empty()) throw Error(state.callbackError);
        if (status == XML_STATUS_ERROR) fail();
        if (last) break;
    }
    return state.summary;
}

}  // namespace relmix::corpus
