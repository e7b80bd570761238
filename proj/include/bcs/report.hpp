#pragma once

// Text and key=value renderings of verdicts and reports. The machine format
// prints one `key=value` per line in a fixed order so runs can be diffed.

#include <string>
#include <vector>

#include "bcs/actions.hpp"
#include "bcs/associated.hpp"
#include "bcs/oracle.hpp"

namespace bcs {

enum class Format { Text, Machine };

std::string render(const std::string& prefix, const Verdict& v, Format f);
std::string render(const CheckReport& r, Format f);
std::string render(const Classification& c, Format f);
std::string render(const TheoremReport& t, Format f);
std::string render(const std::vector<oracle::CrossCheckReport>& reports, Format f);

}  // namespace bcs
