#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "reclink/normalize.hpp"
#include "reclink/token.hpp"

namespace reclink {

// Value -> positions (into the owning dataset) of records holding that
// token value. Only records with a non-null token appear.
struct TokenIndex {
    int token_id = 0;
    std::unordered_map<std::string, std::vector<std::uint32_t>> entries;

    // 1 when exactly one record holds `value`, else the list size (0 if absent).
    std::size_t multiplicity(const std::string& value) const {
        auto it = entries.find(value);
        return it == entries.end() ? 0 : it->second.size();
    }
};

TokenIndex build_index(std::span<const TokenSet> sets, std::size_t rule_pos, int token_id);

struct ValidationStats {
    int token_id = 0;
    std::uint64_t one_to_one = 0;    // patients passing the uniqueness gates
    std::uint64_t dod_match = 0;     // of those, death dates agree
    std::uint64_t dod_nonmatch = 0;  // of those, death dates differ

    std::optional<double> match_rate() const {
        if (one_to_one == 0) return std::nullopt;
        return double(dod_match) / double(one_to_one);
    }
};

// How "matches exactly one external record" is read:
//   single_record - the token value occurs on exactly one external record.
//   unique_dod    - the value may occur on several external records as
//                   long as they agree on a single non-null death date.
enum class ValidationMode : std::uint8_t { single_record, unique_dod };

std::string_view to_string(ValidationMode m);

// Per-token validation over the subset of patients with a valid
// death_date. A patient contributes iff its token is non-null, the value
// occurs exactly once within that subset, and the external side
// qualifies per `mode`. Contribution is a match iff the death dates
// agree (within tolerance_days; 0 = exact equality).
ValidationStats validate_token(int token_id, std::size_t rule_pos,
                               std::span<const CleanRecord> patients,
                               std::span<const TokenSet> patient_tokens,
                               std::span<const std::size_t> validation_subset,
                               std::span<const CleanRecord> external,
                               const TokenIndex& external_index, ValidationMode mode,
                               int tolerance_days = 0);

// Signed day difference between two YYYYMMDD dates (b - a).
long date_diff_days(std::string_view a, std::string_view b);

enum class Category : std::uint8_t { category1 = 1, category2 = 2, category3 = 3 };

std::string_view category_name(Category c);  // "1", "2", "3"

struct CategoryThresholds {
    double category1_exclusive_min = 0.80;  // rate strictly above -> Category 1
    double category2_inclusive_min = 0.50;  // rate at least this -> Category 2
};

// No category when the rate is undefined (no one-to-one contributions).
std::optional<Category> categorize(const ValidationStats& stats, const CategoryThresholds& t);

// Token ids ordered by match rate descending; ties broken by larger
// one-to-one count, then smaller id. Undefined-rate tokens are excluded.
std::vector<int> rank_tokens(std::span<const ValidationStats> stats);

struct RankedToken {
    int token_id = 0;
    Category category = Category::category3;
};

// rank_tokens + categorize in one pass, for feeding link_deaths.
std::vector<RankedToken> ranked_tokens_with_categories(std::span<const ValidationStats> stats,
                                                       const CategoryThresholds& thresholds);

struct LinkedRow {
    std::string record_id;
    std::optional<std::string> dod_patient;
    std::optional<std::string> dod_external;
    std::optional<Category> category;
    std::optional<int> token_id;
    std::optional<std::string> external_record_id;

    bool operator==(const LinkedRow&) const = default;
};

// One row per patient, in patient order. For each patient the ranked
// tokens are scanned in order; the first whose value occurs exactly once
// in the patient dataset AND exactly once in the external dataset links
// the pair. Unlinked patients keep null dod_external/category/token_id.
std::vector<LinkedRow> link_deaths(std::span<const CleanRecord> patients,
                                   std::span<const TokenSet> patient_tokens,
                                   std::span<const CleanRecord> external,
                                   std::span<const TokenSet> external_tokens,
                                   std::span<const TokenRule> rules,
                                   std::span<const RankedToken> ranked, unsigned threads = 1);

}  // namespace reclink
