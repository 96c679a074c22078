#pragma once

#include <string>
#include <string_view>

namespace reclink {

// Classic American Soundex over an uppercase A-Z name. The first letter
// is kept verbatim; the rest map through the coding table with adjacent
// duplicate codes collapsed (H and W do not break a run), and vowels
// separating two like codes re-enable the second one. Always returns a
// letter followed by three digits.
std::string soundex(std::string_view name);

}  // namespace reclink
