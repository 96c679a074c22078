#include "reclink/soundex.hpp"

#include <cassert>

namespace reclink {

namespace {

// 0 = vowel (A E I O U Y): resets the duplicate-collapse state.
// 7 = H or W: skipped without touching the state.
int code_of(char c) {
    switch (c) {
        case 'B': case 'F': case 'P': case 'V': return 1;
        case 'C': case 'G': case 'J': case 'K': case 'Q': case 'S': case 'X': case 'Z': return 2;
        case 'D': case 'T': return 3;
        case 'L': return 4;
        case 'M': case 'N': return 5;
        case 'R': return 6;
        case 'H': case 'W': return 7;
        default: return 0;
    }
}

}  // namespace

std::string soundex(std::string_view name) {
    assert(!name.empty());
    std::string out(1, name[0]);
    int last = code_of(name[0]);
    if (last == 7) last = 0;
    for (std::size_t i = 1; i < name.size() && out.size() < 4; ++i) {
        int code = code_of(name[i]);
        if (code == 7) continue;  // H/W: invisible to the collapse rule
        if (code == 0) {
            last = 0;  // vowel: the next consonant always codes
            continue;
        }
        if (code != last) out.push_back(static_cast<char>('0' + code));
        last = code;
    }
    out.resize(4, '0');
    return out;
}

}  // namespace reclink
