#include "relmix/page_store.hpp"

#include <json.hpp>

#include "relmix/error.hpp"

namespace relmix::corpus {

using nlohmann::ordered_json;

void writePageRecord(std::ostream& out, const Page& page) {
    ordered_json j;
    j["id"] = page.id;
    j["title"] = page.title;
    j["ns"] = page.ns;
    j["links_in"] = page.linksIn;
    j["links_out"] = page.linksOut;
    j["distinct_terms"] = page.distinctTerms;
    j["anchors_in"] = page.anchorsIn;
    auto links = ordered_json::array();
    for (const auto& l : page.outLinks) links.push_back(ordered_json::array({l.target, l.anchor}));
    j["out_links"] = std::move(links);
    auto sections = ordered_json::array();
    for (const auto& s : page.sections) {
        ordered_json js;
        js["heading"] = s.heading;
        js["past_tense_ratio"] = s.pastTenseRatio ? ordered_json(*s.pastTenseRatio) : ordered_json(nullptr);
        js["sentences"] = s.sentences;
        sections.push_back(std::move(js));
    }
    j["sections"] = std::move(sections);
    // Invalid UTF-8 from damaged dumps is replaced rather than rejected.
    out << j.dump(-1, ' ', false, ordered_json::error_handler_t::replace) << '\n';
}

Page parsePageRecord(const std::string& line, const std::string& sourceName, std::uint64_t lineNo) {
    try {
        auto j = ordered_json::parse(line);
        Page p;
        p.id = j.at("id").get<std::int64_t>();
        p.title = j.at("title").get<std::string>();
        p.ns = j.at("ns").get<int>();
        p.linksIn = j.at("links_in").get<std::size_t>();
        p.linksOut = j.at("links_out").get<std::size_t>();
        p.distinctTerms = j.at("distinct_terms").get<std::size_t>();
        p.anchorsIn = j.at("anchors_in").get<std::vector<std::string>>();
        for (const auto& l : j.at("out_links")) p.outLinks.push_back(Link{l.at(0).get<std::string>(), l.at(1).get<std::string>()});
        for (const auto& js : j.at("sections")) {
            Section s;
            s.heading = js.at("heading").get<std::string>();
            if (!js.at("past_tense_ratio").is_null()) s.pastTenseRatio = js.at("past_tense_ratio").get<double>();
            s.sentences = js.at("sentences").get<std::vector<std::string>>();
            p.sections.push_back(std::move(s));
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(sourceName, lineNo, e.what());
    }
}

std::vector<Page> readPageStore(std::istream& in, const std::string& sourceName) {
    std::vector<Page> pages;
    std::string line;
    std::uint64_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        pages.push_back(parsePageRecord(line, sourceName, lineNo));
    }
    return pages;
}

}  // namespace relmix::corpus
