#include <doctest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "relmix/corpus.hpp"
#include "relmix/dump.hpp"
#include "relmix/error.hpp"
#include "relmix/page_store.hpp"
#include "relmix/wikitext.hpp"

using namespace relmix;
using namespace relmix::corpus;

namespace {

std::string leadText(std::string_view markup) {
    const auto c = cleanWikitext(markup);
    std::string out;
    for (const auto& s : c.sections.front().sentences) out += (out.empty() ? "" : " | ") + s;
    return out;
}

std::vector<std::string> targets(std::string_view markup) {
    std::vector<std::string> out;
    for (const auto& l : cleanWikitext(markup).links) out.push_back(l.target);
    return out;
}

struct WikiCase {
    const char* markup;
    const char* text;
};

// One construct per row; expected lead-section sentences joined by " | ".
const WikiCase kCases[] = {
    {"Plain text.", "Plain text."},
    {"One. Two! Three? Four", "One. | Two! | Three? | Four"},
    {"Version 2.5 is out.", "Version 2.5 is out."},
    {"Wait... really?! Yes.", "Wait... | really?! | Yes."},
    {"'''Bold''' and ''italic'' and '''''both'''''.", "Bold and italic and both."},
    {"It's fine.", "It's fine."},
    {"A [[tree]] grows.", "A tree grows."},
    {"A [[Oak tree|oak]] grows.", "A oak grows."},
    {"[[tree]]s grow.", "trees grow."},
    {"See [[:Category:Trees|trees]].", "See trees."},
    {"Pic [[File:Oak.jpg|thumb|An [[oak]] tree]] here.", "Pic here."},
    {"Pic [[Image:Oak.jpg|thumb]] here.", "Pic here."},
    {"Text [[Category:Trees]] end.", "Text end."},
    {"Text [[de:Baum]] end.", "Text end."},
    {"Text [[simple:Tree]] end.", "Text end."},
    {"Help at [[Wikipedia:Manual|the manual]].", "Help at the manual."},
    {"Go [[tree#Leaves|leaves]].", "Go leaves."},
    {"Empty [[tree|]] anchor.", "Empty tree anchor."},
    {"A {{convert|3|m}} pole.", "A pole."},
    {"A {{outer|{{inner|x}}|y}} nest.", "A nest."},
    {"{{Infobox\n| name = Oak\n}}\nOak is a tree.", "Oak is a tree."},
    {"Before\n{| class=wikitable\n|-\n| cell\n|}\nAfter.", "Before | After."},
    {"Claim.<ref>Source, 2001.</ref> More.", "Claim. | More."},
    {"Claim.<ref name=\"a\" /> More.", "Claim. | More."},
    {"Formula <math>x^2</math> here.", "Formula here."},
    {"Hidden <!-- comment --> text.", "Hidden text."},
    {"Line<br/>break.", "Line break."},
    {"Some <small>small</small> text.", "Some small text."},
    {"Less < more.", "Less < more."},
    {"Tom &amp; Jerry.", "Tom & Jerry."},
    {"A&nbsp;B.", "A B."},
    {"1990&ndash;1995.", "1990 - 1995."},
    {"Code &#65;&#x42;.", "Code AB."},
    {"Odd &bogus; entity.", "Odd &bogus; entity."},
    {"Visit [http://example.org the site].", "Visit the site."},
    {"Bare http://example.org/x here.", "Bare here."},
    {"Ref [http://example.org] here.", "Ref here."},
    {"__NOTOC__Intro text.", "Intro text."},
    {"First line\nsecond line.", "First line second line."},
    {"Para one.\n\nPara two.", "Para one. | Para two."},
    {"* item one\n* item two", "item one | item two"},
    {"# numbered\n#: indented", "numbered | indented"},
    {"; term\n: definition", "term | definition"},
    {"Above\n----\nBelow.", "Above Below."},
    {"Unclosed {{template text.", "Unclosed template text."},
    {"Stray }} closer.", "Stray closer."},
    {"Broken [[link text.", "Broken link text."},
    {"Open <!-- never closed", "Open"},
    {"Dropped <ref>never closed", "Dropped never closed"},
    {"Gallery <gallery>a.jpg</gallery> done.", "Gallery done."},
};

}  // namespace

TEST_CASE("wikitext constructs") {
    for (const auto& c : kCases) {
        CAPTURE(c.markup);
        CHECK(leadText(c.markup) == c.text);
    }
}

TEST_CASE("wikitext links") {
    CHECK(targets("A [[tree]] and [[oak tree|oak]] and [[ tree_house#Top ]].") ==
          std::vector<std::string>{"Tree", "Oak tree", "Tree house"});
    CHECK(targets("[[Category:X]] [[File:y.png]] [[de:Baum]] [[:Category:X|x]] [[Help:Y]]").empty());
    const auto c = cleanWikitext("The [[Oak tree|'''oak''']] grows.");
    REQUIRE(c.links.size() == 1);
    CHECK(c.links[0].anchor == "oak");
    // Links inside file captions are discarded with the caption.
    CHECK(targets("[[File:a.jpg|thumb|An [[oak]]]]").empty());
}

TEST_CASE("wikitext sections") {
    const auto c = cleanWikitext("Lead text.\n== History ==\nOld things happened.\n=== Early ===\nVery old.\n==Uses==\nUsed.");
    REQUIRE(c.sections.size() == 4);
    CHECK(c.sections[0].heading.empty());
    CHECK(c.sections[1].heading == "History");
    CHECK(c.sections[2].heading == "Early");
    CHECK(c.sections[3].heading == "Uses");
    CHECK(c.sections[2].sentences == std::vector<std::string>{"Very old."});
    CHECK(cleanWikitext("").sections.size() == 1);
    CHECK(cleanWikitext("== ==\ntext").sections.size() == 1);
}

TEST_CASE("unbalanced markup is recovered from and counted") {
    CHECK(cleanWikitext("fine text").diagnostics == 0);
    CHECK(cleanWikitext("Unclosed {{template").diagnostics == 1);
    CHECK(cleanWikitext("Stray }} closer").diagnostics == 1);
    CHECK(cleanWikitext("Open <!-- x").diagnostics == 1);
}

TEST_CASE("title normalization") {
    CHECK(normalizeTitle("oak_tree") == "Oak tree");
    CHECK(normalizeTitle("  oak   tree ") == "Oak tree");
    CHECK(normalizeTitle("oak#Leaves") == "Oak");
    CHECK(normalizeTitle("eBay") == "EBay");
    CHECK(normalizeTitle("") == "");
}

TEST_CASE("sentence splitting") {
    CHECK(splitSentences("A b. C d.") == std::vector<std::string>{"A b.", "C d."});
    CHECK(splitSentences("e.g. this") == std::vector<std::string>{"e.g.", "this"});
    CHECK(splitSentences("  ") .empty());
    CHECK(splitSentences("No end") == std::vector<std::string>{"No end"});
}

// ---------------------------------------------------------------- XML dump

namespace {

std::string page(std::int64_t id, const std::string& title, int ns, const std::string& text,
                 const std::string& redirect = "") {
    std::string r = redirect.empty() ? "" : "<redirect title=\"" + redirect + "\" />";
    return "<page><title>" + title + "</title><ns>" + std::to_string(ns) + "</ns><id>" + std::to_string(id) +
           "</id>" + r + "<revision><id>99</id><text xml:space=\"preserve\">" + text + "</text></revision></page>\n";
}

std::string dump(const std::string& pages) {
    return "<mediawiki xmlns=\"http://www.mediawiki.org/xml/export-0.10/\"><siteinfo><sitename>W</sitename>"
           "</siteinfo>\n" + pages + "</mediawiki>\n";
}

}  // namespace

TEST_CASE("dump parser delivers pages in order") {
    std::istringstream in(dump(page(1, "Oak", 0, "An '''oak''' &amp; [[tree]].") + page(2, "Talk:Oak", 1, "chat") +
                               page(3, "Quercus", 0, "#REDIRECT [[Oak]]", "Oak")));
    std::vector<RawPage> pages;
    const auto summary = parseDump(in, [&](RawPage&& p) { pages.push_back(std::move(p)); });
    REQUIRE(pages.size() == 3);
    CHECK(summary.pages == 3);
    CHECK(summary.redirects == 1);
    CHECK(pages[0].id == 1);
    CHECK(pages[0].title == "Oak");
    CHECK(pages[0].wikitext == "An '''oak''' & [[tree]].");
    CHECK(pages[1].ns == 1);
    CHECK(pages[2].redirectTarget == "Oak");
    CHECK_FALSE(pages[0].redirectTarget.has_value());
}

TEST_CASE("truncated dump raises ParseError with a byte offset after delivering complete pages") {
    std::string text = dump(page(1, "Oak", 0, "one") + page(2, "Pine", 0, "two"));
    text.resize(text.find("Pine") + 2);
    std::istringstream in(text);
    std::vector<std::int64_t> ids;
    try {
        parseDump(in, [&](RawPage&& p) { ids.push_back(p.id); }, "cut.xml");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.source() == "cut.xml");
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
    CHECK(ids == std::vector<std::int64_t>{1});
}

TEST_CASE("malformed XML is rejected") {
    std::istringstream in("<mediawiki><page><title>x</titl></page></mediawiki>");
    CHECK_THROWS_AS(parseDump(in, [](RawPage&&) {}), ParseError);
}

// ---------------------------------------------------------------- links and filters

namespace {

Page makePage(std::string title, std::vector<std::string> linkTargets) {
    Page p;
    p.title = std::move(title);
    for (auto& t : linkTargets) p.outLinks.push_back({t, t});
    return p;
}

}  // namespace

TEST_CASE("redirect resolution") {
    RedirectMap r{{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}, {"X", "Y"}, {"Y", "X"}};
    CHECK(resolveRedirect("Q", r) == "Q");
    CHECK(resolveRedirect("B", r) == "E");
    CHECK(resolveRedirect("C", r) == "E");
    CHECK_FALSE(resolveRedirect("A", r).has_value());  // four hops
    CHECK_FALSE(resolveRedirect("X", r).has_value());
}

TEST_CASE("link statistics count distinct resolved targets") {
    std::vector<Page> pages = {makePage("Oak", {"Tree", "Tree", "Quercus", "Oak", "Nowhere"}),
                               makePage("Tree", {"Oak"}), makePage("Pine", {"Tree"})};
    RedirectMap r{{"Quercus", "Oak"}};
    applyLinkStats(pages, r);
    CHECK(pages[0].linksOut == 1);  // Tree once; self-link, redirect to self and dangling link ignored
    CHECK(pages[0].linksIn == 1);
    CHECK(pages[1].linksIn == 2);
    CHECK(pages[1].linksOut == 1);
    CHECK(pages[2].linksOut == 1);
    CHECK(pages[1].anchorsIn == std::vector<std::string>{"Tree", "Tree", "Tree"});
}

TEST_CASE("link counts balance on random graphs") {
    std::mt19937_64 rng(3);
    std::vector<Page> pages;
    for (int i = 0; i < 60; ++i) {
        std::vector<std::string> out;
        for (int k = 0; k < 8; ++k) out.push_back("P" + std::to_string(rng() % 70));
        pages.push_back(makePage("P" + std::to_string(i), out));
    }
    const auto stats = linkStats(pages, {});
    std::size_t in = 0, out = 0;
    for (const auto& c : stats.counts) {
        in += c.in;
        out += c.out;
    }
    CHECK(in == out);
}

TEST_CASE("filter thresholds") {
    Page p;
    p.distinctTerms = 200;
    p.linksIn = 10;
    p.linksOut = 4;
    CHECK(passesFilter(p, FilterCriteria::adapted2011()));
    p.linksOut = 3;
    CHECK_FALSE(passesFilter(p, FilterCriteria::adapted2011()));
    CHECK(passesFilter(p, FilterCriteria::esaOriginal()));
    p.distinctTerms = 99;
    CHECK_FALSE(passesFilter(p, FilterCriteria::esaOriginal()));
}

TEST_CASE("raising a threshold never admits more pages") {
    std::mt19937_64 rng(11);
    std::vector<Page> pages(300);
    for (auto& p : pages) {
        p.distinctTerms = rng() % 400;
        p.linksIn = rng() % 20;
        p.linksOut = rng() % 20;
    }
    std::size_t previous = pages.size() + 1;
    for (std::size_t t = 0; t <= 400; t += 25) {
        const auto n = filterPages(pages, {t, 10}).size();
        CHECK(n <= previous);
        previous = n;
    }
}

TEST_CASE("distinct terms use the stemmed pipeline") {
    Page p;
    p.sections.push_back({"", {"Trees and tree.", "The forests!"}, std::nullopt});
    text::StemmingNormalizer norm(text::defaultStopwords());
    CHECK(countDistinctTerms(p, norm) == 2);
}

TEST_CASE("sentence weights select title, title words and incoming anchors") {
    Page p;
    p.title = "Oak tree";
    p.anchorsIn = {"Quercus robur"};
    p.sections.push_back({"", {"Oak trees are large.", "Acorns fall.", "The quercus robur is common.", "Roots."}, {}});
    p.sections.push_back({"Uses", {"Wooden trees burn.", "Nothing here."}, {}});
    text::StemmingNormalizer norm(text::defaultStopwords());
    CHECK(weightSentences(p, 3, norm) == SentenceWeights{{3, 1, 3, 1}, {3, 1}});
    CHECK(weightSentences(p, 1, norm) == SentenceWeights{{1, 1, 1, 1}, {1, 1}});
}

TEST_CASE("section pruning") {
    Page p;
    p.title = "Oak";
    p.sections = {{"", {"Lead."}, {}}, {"History", {"Old."}, {}}, {"Past", {"Was."}, {}}, {"Uses", {"Use."}, {}}};
    text::PageAnnotations ann;
    ann.sections = {
        {{"is", "be", "VBZ"}, {"grows", "grow", "VBZ"}},
        {{"is", "be", "VBZ"}},
        {{"was", "be", "VBD"}, {"grew", "grow", "VBD"}},
        {{"uses", "use", "VBZ"}},
    };
    SUBCASE("headings only without annotations") {
        const auto r = pruneSections(p, {}, nullptr);
        CHECK(r.removedSections == 1);
        CHECK(r.keptSections == std::vector<std::size_t>{0, 2, 3});
    }
    SUBCASE("past-tense sections on a present-tense page") {
        const auto r = pruneSections(p, {}, &ann);
        CHECK(r.removedSections == 2);
        CHECK(r.keptSections == std::vector<std::size_t>{0, 3});
        CHECK(r.page.sections[0].pastTenseRatio == 0.0);
    }
    SUBCASE("a mostly past-tense page keeps its past-tense sections") {
        ann.sections[0] = {{"was", "be", "VBD"}, {"grew", "grow", "VBD"}};
        ann.sections[3] = {{"used", "use", "VBD"}};
        const auto r = pruneSections(p, {0.8, {}}, &ann);
        CHECK(r.removedSections == 0);
    }
    CHECK(pastTenseRatio({0, 0}) == std::nullopt);
    CHECK(pastTenseRatio({1, 4}) == 0.25);
}

// ---------------------------------------------------------------- page store

TEST_CASE("page store round trip") {
    Page p;
    p.id = 42;
    p.title = "Oak \"tree\"\tnew";
    p.linksIn = 3;
    p.linksOut = 2;
    p.distinctTerms = 17;
    p.anchorsIn = {"oak", "quercus"};
    p.outLinks = {{"Tree", "tree"}};
    p.sections = {{"", {"Oak is a tree.", "Unicode caf\xc3\xa9."}, 0.25}, {"Uses", {}, std::nullopt}};
    std::stringstream ss;
    writePageRecord(ss, p);
    Page q = p;
    q.id = 43;
    writePageRecord(ss, q);
    const auto raw = ss.str();
    CHECK(std::count(raw.begin(), raw.end(), '\n') == 2);
    const auto back = readPageStore(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == p);
    CHECK(back[1] == q);
}

TEST_CASE("page store errors carry line numbers") {
    std::istringstream in("{\"id\":1,\"title\":\"A\",\"ns\":0,\"links_in\":0,\"links_out\":0,\"distinct_terms\":0,"
                          "\"anchors_in\":[],\"out_links\":[],\"sections\":[]}\nnot json\n");
    try {
        readPageStore(in, "pages.ndjson");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location() == 2);
    }
}
