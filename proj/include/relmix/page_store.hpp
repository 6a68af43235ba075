#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "relmix/corpus.hpp"

namespace relmix::corpus {

/// Newline-delimited JSON, one object per page. Field order:
/// id, title, ns, links_in, links_out, distinct_terms, anchors_in,
/// out_links [[target, anchor], ...], sections [{heading, past_tense_ratio, sentences}].
void writePageRecord(std::ostream& out, const Page& page);
Page parsePageRecord(const std::string& line, const std::string& sourceName = "<pages>",
                     std::uint64_t lineNo = 0);
std::vector<Page> readPageStore(std::istream& in, const std::string& sourceName = "<pages>");

}  // namespace relmix::corpus
