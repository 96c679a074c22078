#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "reclink/normalize.hpp"

namespace reclink {

// One element of a token recipe. `length` is used by `prefix` only.
enum class PartKind : std::uint8_t {
    whole,         // the full normalized field value
    ssn_last4,     // digits 6-9 of the ssn
    prefix,        // first `length` characters (whole value when shorter)
    initial,       // first character
    year,          // first 4 digits of a date field
    soundex_code,  // phonetic code of a name field
};

struct TokenPart {
    PartKind kind;
    Field field;
    std::size_t length = 0;

    bool operator==(const TokenPart&) const = default;
};

struct TokenRule {
    int id = 0;
    std::vector<TokenPart> parts;

    // Fields this rule reads, in first-appearance order, deduplicated.
    std::vector<Field> referenced() const;
    // Human-readable recipe, e.g. "ssn (last 4) + birth_date".
    std::string describe() const;

    bool operator==(const TokenRule&) const = default;
};

// The 20 built-in linkage rules, ids 1-20.
const std::vector<TokenRule>& builtin_rules();

// Parses a rule table from JSON text:
//   {"rules": [{"id": 21, "parts": [
//       {"kind": "whole", "field": "last_name"},
//       {"kind": "prefix", "field": "first_name", "length": 3}]}]}
// Part kinds: whole, ssn-last4, prefix, initial, year, soundex.
// Throws FatalError on malformed input, duplicate ids, or kind/field
// mismatches (year needs a date field, soundex/initial/prefix a name).
std::vector<TokenRule> parse_rules(const std::string& json_text);
std::vector<TokenRule> load_rules_file(const std::string& path);

// Tokens for one record, positionally aligned with the rule table used
// to generate them.
struct TokenSet {
    std::string record_id;
    std::vector<std::optional<std::string>> tokens;
};

// Null unless every field the rule references is valid in `rec`.
std::optional<std::string> generate_token(const TokenRule& rule, const CleanRecord& rec);

TokenSet generate_all(const CleanRecord& rec, std::span<const TokenRule> rules);

std::vector<TokenSet> generate_dataset(std::span<const CleanRecord> records,
                                       std::span<const TokenRule> rules, unsigned threads = 1);

// Audit dump: one "record_id<TAB>token_id<TAB>value" row per non-null
// token, in record order then rule order.
void write_token_dump(std::ostream& out, std::span<const TokenSet> sets,
                      std::span<const TokenRule> rules);

}  // namespace reclink
