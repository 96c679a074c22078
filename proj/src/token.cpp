#include "reclink/token.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "reclink/soundex.hpp"

namespace reclink {

std::vector<Field> TokenRule::referenced() const {
    std::vector<Field> out;
    for (const auto& part : parts) {
        if (std::find(out.begin(), out.end(), part.field) == out.end()) out.push_back(part.field);
    }
    return out;
}

std::string TokenRule::describe() const {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " + ";
        const TokenPart& p = parts[i];
        std::string fname(field_name(p.field));
        switch (p.kind) {
            case PartKind::whole: out += fname; break;
            case PartKind::ssn_last4: out += fname + " (last 4)"; break;
            case PartKind::prefix:
                out += "1st " + std::to_string(p.length) + " characters of " + fname;
                break;
            case PartKind::initial: out += "1st initial of " + fname; break;
            case PartKind::year: out += "YYYY of " + fname; break;
            case PartKind::soundex_code: out += fname + " (soundex)"; break;
        }
    }
    return out;
}

namespace {

TokenPart whole(Field f) { return {PartKind::whole, f}; }
TokenPart last4() { return {PartKind::ssn_last4, Field::ssn}; }
TokenPart prefix(Field f, std::size_t n) { return {PartKind::prefix, f, n}; }
TokenPart initial(Field f) { return {PartKind::initial, f}; }
TokenPart year(Field f) { return {PartKind::year, f}; }
TokenPart sdx(Field f) { return {PartKind::soundex_code, f}; }

constexpr Field kFirst = Field::first_name;
constexpr Field kMiddle = Field::middle_name;
constexpr Field kLast = Field::last_name;
constexpr Field kDob = Field::birth_date;
constexpr Field kSsn = Field::ssn;

}  // namespace

const std::vector<TokenRule>& builtin_rules() {
    static const std::vector<TokenRule> rules = {
        {1, {whole(kSsn), whole(kLast), whole(kMiddle), whole(kFirst), whole(kDob)}},
        {2, {whole(kSsn), whole(kLast), whole(kFirst), whole(kDob)}},
        {3, {whole(kSsn), whole(kDob)}},
        {4, {whole(kSsn), year(kDob), whole(kFirst), whole(kLast)}},
        {5, {whole(kSsn), whole(kLast), whole(kMiddle), whole(kFirst)}},
        {6, {whole(kSsn)}},
        {7, {last4(), whole(kLast), whole(kMiddle), whole(kFirst), whole(kDob)}},
        {8, {last4(), whole(kDob)}},
        {9, {whole(kLast), whole(kMiddle), whole(kFirst), whole(kDob)}},
        {10, {whole(kLast), whole(kMiddle), whole(kFirst), year(kDob)}},
        {11, {whole(kLast), whole(kFirst), whole(kDob)}},
        {12, {whole(kLast), initial(kMiddle), whole(kFirst)}},
        {13, {whole(kLast), prefix(kFirst, 3), whole(kDob)}},
        {14, {whole(kLast), initial(kFirst), whole(kDob)}},
        {15, {sdx(kLast), sdx(kMiddle), sdx(kFirst), whole(kDob)}},
        {16, {sdx(kLast), sdx(kMiddle), sdx(kFirst), year(kDob)}},
        {17, {sdx(kLast), sdx(kFirst), whole(kDob)}},
        {18, {whole(kLast)}},
        {19, {whole(kFirst)}},
        {20, {whole(kDob)}},
    };
    return rules;
}

namespace {

bool is_name_field(Field f) {
    return f == Field::first_name || f == Field::middle_name || f == Field::last_name;
}

bool is_date_field(Field f) { return f == Field::birth_date || f == Field::death_date; }

PartKind kind_from_name(const std::string& s) {
    if (s == "whole") return PartKind::whole;
    if (s == "ssn-last4") return PartKind::ssn_last4;
    if (s == "prefix") return PartKind::prefix;
    if (s == "initial") return PartKind::initial;
    if (s == "year") return PartKind::year;
    if (s == "soundex") return PartKind::soundex_code;
    throw FatalError("unknown token part kind: " + s);
}

}  // namespace

std::vector<TokenRule> parse_rules(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw FatalError(std::string("rule table is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array())
        throw FatalError("rule table must be an object with a \"rules\" array");

    std::vector<TokenRule> rules;
    std::unordered_set<int> seen_ids;
    for (const auto& jr : doc["rules"]) {
        if (!jr.is_object() || !jr.contains("id") || !jr["id"].is_number_integer() ||
            !jr.contains("parts") || !jr["parts"].is_array() || jr["parts"].empty())
            throw FatalError("each rule needs an integer \"id\" and a non-empty \"parts\" array");
        TokenRule rule;
        rule.id = jr["id"].get<int>();
        if (rule.id < 1) throw FatalError("rule ids must be positive");
        if (!seen_ids.insert(rule.id).second)
            throw FatalError("duplicate rule id " + std::to_string(rule.id));
        for (const auto& jp : jr["parts"]) {
            if (!jp.is_object() || !jp.contains("kind") || !jp["kind"].is_string())
                throw FatalError("each part needs a string \"kind\"");
            TokenPart part;
            part.kind = kind_from_name(jp["kind"].get<std::string>());
            if (part.kind == PartKind::ssn_last4) {
                part.field = Field::ssn;
            } else {
                if (!jp.contains("field") || !jp["field"].is_string())
                    throw FatalError("part kind needs a \"field\" name");
                auto field = field_from_name(jp["field"].get<std::string>());
                if (!field)
                    throw FatalError("unknown field name: " + jp["field"].get<std::string>());
                part.field = *field;
            }
            if (part.kind == PartKind::prefix) {
                if (!jp.contains("length") || !jp["length"].is_number_unsigned() ||
                    jp["length"].get<std::size_t>() < 1)
                    throw FatalError("prefix parts need \"length\" >= 1");
                part.length = jp["length"].get<std::size_t>();
            }
            if (part.kind == PartKind::year && !is_date_field(part.field))
                throw FatalError("year parts apply to date fields only");
            if ((part.kind == PartKind::soundex_code || part.kind == PartKind::initial ||
                 part.kind == PartKind::prefix) &&
                !is_name_field(part.field))
                throw FatalError("soundex/initial/prefix parts apply to name fields only");
            rule.parts.push_back(part);
        }
        rules.push_back(std::move(rule));
    }
    if (rules.empty()) throw FatalError("rule table contains no rules");
    return rules;
}

std::vector<TokenRule> load_rules_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FatalError("cannot open rule table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rules(std::move(buf).str());
}

std::optional<std::string> generate_token(const TokenRule& rule, const CleanRecord& rec) {
    for (const auto& part : rule.parts) {
        if (rec.status_of(part.field) != FieldStatus::valid) return std::nullopt;
    }
    std::string out;
    for (const auto& part : rule.parts) {
        const std::string& value = *rec.field(part.field);
        switch (part.kind) {
            case PartKind::whole: out += value; break;
            case PartKind::ssn_last4: out += value.substr(5, 4); break;
            case PartKind::prefix: out += value.substr(0, part.length); break;
            case PartKind::initial: out += value.substr(0, 1); break;
            case PartKind::year: out += value.substr(0, 4); break;
            case PartKind::soundex_code: out += soundex(value); break;
        }
    }
    return out;
}

TokenSet generate_all(const CleanRecord& rec, std::span<const TokenRule> rules) {
    TokenSet set;
    set.record_id = rec.record_id;
    set.tokens.reserve(rules.size());
    for (const auto& rule : rules) set.tokens.push_back(generate_token(rule, rec));
    return set;
}

std::vector<TokenSet> generate_dataset(std::span<const CleanRecord> records,
                                       std::span<const TokenRule> rules, unsigned threads) {
    std::vector<TokenSet> out(records.size());
    parallel_chunks(records.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = generate_all(records[i], rules);
    });
    return out;
}

void write_token_dump(std::ostream& out, std::span<const TokenSet> sets,
                      std::span<const TokenRule> rules) {
    for (const auto& set : sets) {
        for (std::size_t i = 0; i < rules.size() && i < set.tokens.size(); ++i) {
            if (!set.tokens[i]) continue;
            out << set.record_id << '\t' << rules[i].id << '\t' << *set.tokens[i] << '\n';
        }
    }
}

}  // namespace reclink
