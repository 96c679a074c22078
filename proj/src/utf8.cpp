#include "reclink/utf8.hpp"

namespace reclink::utf8 {

char32_t next_codepoint(std::string_view s, std::size_t& pos) {
    unsigned char b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    auto cont = [&](std::size_t i) {
        return i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80;
    };
    if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
        char32_t cp = (char32_t(b0 & 0x1F) << 6) |
                      (static_cast<unsigned char>(s[pos + 1]) & 0x3F);
        pos += 2;
        return cp < 0x80 ? kReplacement : cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
        char32_t cp = (char32_t(b0 & 0x0F) << 12) |
                      (char32_t(static_cast<unsigned char>(s[pos + 1]) & 0x3F) << 6) |
                      (static_cast<unsigned char>(s[pos + 2]) & 0x3F);
        pos += 3;
        return cp < 0x800 ? kReplacement : cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
        char32_t cp = (char32_t(b0 & 0x07) << 18) |
                      (char32_t(static_cast<unsigned char>(s[pos + 1]) & 0x3F) << 12) |
                      (char32_t(static_cast<unsigned char>(s[pos + 2]) & 0x3F) << 6) |
                      (static_cast<unsigned char>(s[pos + 3]) & 0x3F);
        pos += 4;
        return (cp < 0x10000 || cp > 0x10FFFF) ? kReplacement : cp;
    }
    ++pos;
    return kReplacement;
}

namespace {

// Latin-1 Supplement letters, 0x00C0..0x00FF. Uppercase and lowercase rows
// fold to the same uppercase base.
std::string_view fold_latin1(char32_t cp) {
    if (cp >= 0x00E0 && cp <= 0x00FE && cp != 0x00F7) cp -= 0x20;  // lowercase row
    switch (cp) {
        case 0x00C0: case 0x00C1: case 0x00C2: case 0x00C3:
        case 0x00C4: case 0x00C5: return "A";
        case 0x00C6: return "AE";
        case 0x00C7: return "C";
        case 0x00C8: case 0x00C9: case 0x00CA: case 0x00CB: return "E";
        case 0x00CC: case 0x00CD: case 0x00CE: case 0x00CF: return "I";
        case 0x00D0: return "D";   // Eth
        case 0x00D1: return "N";
        case 0x00D2: case 0x00D3: case 0x00D4: case 0x00D5:
        case 0x00D6: case 0x00D8: return "O";
        case 0x00D9: case 0x00DA: case 0x00DB: case 0x00DC: return "U";
        case 0x00DD: return "Y";
        case 0x00DE: return "TH";  // Thorn
        case 0x00DF: return "SS";  // sharp s (not shifted by the row rule)
        case 0x00FF: return "Y";
        default: return {};
    }
}

// Latin Extended-A, 0x0100..0x017F. The block is organized in
// case-alternating pairs per base letter.
std::string_view fold_extended_a(char32_t cp) {
    if (cp >= 0x0100 && cp <= 0x0105) return "A";
    if (cp >= 0x0106 && cp <= 0x010D) return "C";
    if (cp >= 0x010E && cp <= 0x0111) return "D";
    if (cp >= 0x0112 && cp <= 0x011B) return "E";
    if (cp >= 0x011C && cp <= 0x0123) return "G";
    if (cp >= 0x0124 && cp <= 0x0127) return "H";
    if (cp >= 0x0128 && cp <= 0x0131) return "I";
    if (cp == 0x0132 || cp == 0x0133) return "IJ";
    if (cp == 0x0134 || cp == 0x0135) return "J";
    if (cp >= 0x0136 && cp <= 0x0138) return "K";
    if (cp >= 0x0139 && cp <= 0x0142) return "L";
    if (cp >= 0x0143 && cp <= 0x014B) return "N";  // incl. 'n-with-apostrophe, Eng
    if (cp >= 0x014C && cp <= 0x0151) return "O";
    if (cp == 0x0152 || cp == 0x0153) return "OE";
    if (cp >= 0x0154 && cp <= 0x0159) return "R";
    if (cp >= 0x015A && cp <= 0x0161) return "S";
    if (cp >= 0x0162 && cp <= 0x0167) return "T";
    if (cp >= 0x0168 && cp <= 0x0173) return "U";
    if (cp == 0x0174 || cp == 0x0175) return "W";
    if (cp >= 0x0176 && cp <= 0x0178) return "Y";
    if (cp >= 0x0179 && cp <= 0x017E) return "Z";
    if (cp == 0x017F) return "S";  // long s
    return {};
}

// Latin Extended Additional, 0x1E00..0x1EFF. Full coverage of the block:
// 0x1E00..0x1E95 alternates case pairs over a fixed base-letter sequence;
// 0x1EA0..0x1EF9 is the Vietnamese vowel region.
std::string_view fold_extended_additional(char32_t cp) {
    if (cp >= 0x1E00 && cp <= 0x1E95) {
        // One base letter per case pair: A, B*3, C, D*5, E*5, F, G, H*5,
        // I*2, K*3, L*4, M*3, N*4, O*4, P*2, R*4, S*5, T*4, U*5, V*2,
        // W*5, X*2, Y, Z*3 (75 pairs).
        static constexpr std::string_view kBases =
            "ABBBCDDDDDEEEEEFGHHHHHIIKKKLLLLMMMNNNNOOOOPPRRRRSSSSSTTTTUUUUUVV"
            "WWWWWXXYZZZ";
        static_assert(kBases.size() == 75);
        return kBases.substr((cp - 0x1E00) / 2, 1);
    }
    if (cp >= 0x1E96 && cp <= 0x1E9B) {
        switch (cp) {
            case 0x1E96: return "H";
            case 0x1E97: return "T";
            case 0x1E98: return "W";
            case 0x1E99: return "Y";
            case 0x1E9A: return "A";
            case 0x1E9B: return "S";
        }
    }
    if (cp == 0x1E9E) return "SS";  // capital sharp s
    if (cp >= 0x1EA0 && cp <= 0x1EB7) return "A";
    if (cp >= 0x1EB8 && cp <= 0x1EC7) return "E";
    if (cp >= 0x1EC8 && cp <= 0x1ECB) return "I";
    if (cp >= 0x1ECC && cp <= 0x1EE3) return "O";
    if (cp >= 0x1EE4 && cp <= 0x1EF1) return "U";
    if (cp >= 0x1EF2 && cp <= 0x1EF9) return "Y";
    return {};
}

}  // namespace

std::string_view fold_to_ascii(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') {
        static constexpr std::string_view kUpper = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
        return kUpper.substr(cp - 'A', 1);
    }
    if (cp >= 'a' && cp <= 'z') {
        static constexpr std::string_view kUpper = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
        return kUpper.substr(cp - 'a', 1);
    }
    if (cp >= 0x00C0 && cp <= 0x00FF) return fold_latin1(cp);
    if (cp >= 0x0100 && cp <= 0x017F) return fold_extended_a(cp);
    if (cp >= 0x0180 && cp <= 0x024F) {
        // Latin Extended-B: map the handful seen in name data, drop the rest.
        switch (cp) {
            case 0x0180: case 0x0181: case 0x0182: case 0x0183: return "B";
            case 0x018F: case 0x0259: return "E";  // schwa
            case 0x01A0: case 0x01A1: return "O";  // O-horn (Vietnamese)
            case 0x01AF: case 0x01B0: return "U";  // U-horn (Vietnamese)
            case 0x01E6: case 0x01E7: return "G";
            case 0x01F4: case 0x01F5: return "G";
            default: return {};
        }
    }
    if (cp >= 0x1E00 && cp <= 0x1EFF) return fold_extended_additional(cp);
    return {};
}

std::string latin1_to_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    for (unsigned char c : bytes) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

}  // namespace reclink::utf8
