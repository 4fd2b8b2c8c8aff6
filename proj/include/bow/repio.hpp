#pragma once

#include "bow/rep.hpp"

#include <iosfwd>
#include <string>

namespace bow {

// Text format for representations: the diagram record first, then one block
// per part keyed by kind and index, matrices row-major with entries "p/q".
std::string serialize_rep(const BowRep& r);
BowRep parse_rep(const std::string& text);

std::string serialize_wconfig(const WConfig& w);
WConfig parse_wconfig(const std::string& text); // lists split by '|', entries by ','

} // namespace bow
