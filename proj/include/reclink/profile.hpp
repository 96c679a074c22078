#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "reclink/normalize.hpp"
#include "reclink/token.hpp"

namespace reclink {

// Distinct-value counter: exact hash set by default, or a bounded
// k-minimum-values sketch for very large runs (estimates, clearly
// labeled as such in reports).
class DistinctCounter {
  public:
    explicit DistinctCounter(bool approximate = false);

    void add(std::string_view value);
    void merge(const DistinctCounter& other);
    std::uint64_t count() const;
    bool approximate() const { return approx_; }

  private:
    static constexpr std::size_t kSketchSize = 1024;

    bool approx_;
    std::unordered_set<std::string> exact_;
    std::vector<std::uint64_t> sketch_;  // sorted ascending, size <= kSketchSize
};

struct FieldProfile {
    Field field = Field::first_name;
    std::uint64_t total_records = 0;
    std::uint64_t complete = 0;  // raw value present (invalid still counts)
    std::uint64_t distinct = 0;  // distinct present raw values (trimmed)
    std::uint64_t invalid = 0;   // present but failing validation
    bool distinct_approximate = false;
};

struct TokenProfile {
    int token_id = 0;
    std::uint64_t total_records = 0;
    std::uint64_t complete = 0;  // records with a non-null token
    std::uint64_t distinct = 0;  // distinct token values
    bool distinct_approximate = false;

    double complete_pct() const { return total_records ? double(complete) / total_records : 0.0; }
    double distinct_pct() const { return total_records ? double(distinct) / total_records : 0.0; }
};

// Raw and clean spans describe the same records in the same order.
FieldProfile profile_field(std::span<const RawRecord> raws, std::span<const CleanRecord> cleans,
                           Field field, bool approximate = false);

TokenProfile profile_token(std::span<const TokenSet> sets, std::size_t rule_pos, int token_id,
                           bool approximate = false);

// Incremental profiler: feed batches of records (with their cleaned and
// tokenized forms), or merge partials built on separate shards, then read
// the final field and token profiles. Equivalent to the one-shot functions
// above but without holding the whole dataset in memory at once.
class DatasetProfiler {
  public:
    DatasetProfiler(std::span<const TokenRule> rules, bool approximate = false);

    // The three spans describe the same records in the same order.
    void add_batch(std::span<const RawRecord> raws, std::span<const CleanRecord> cleans,
                   std::span<const TokenSet> sets);
    void merge(const DatasetProfiler& other);

    std::vector<FieldProfile> field_profiles() const;
    std::vector<TokenProfile> token_profiles() const;

  private:
    struct Tally {
        std::uint64_t total = 0;
        std::uint64_t complete = 0;
        std::uint64_t invalid = 0;
        DistinctCounter distinct;

        explicit Tally(bool approximate) : distinct(approximate) {}
    };

    bool approx_;
    std::vector<int> token_ids_;
    std::vector<Tally> fields_;  // one per Field, canonical order
    std::vector<Tally> tokens_;  // one per rule, rule order
};

std::vector<FieldProfile> profile_all_fields(std::span<const RawRecord> raws,
                                             std::span<const CleanRecord> cleans,
                                             bool approximate = false);

std::vector<TokenProfile> profile_all_tokens(std::span<const TokenSet> sets,
                                             std::span<const TokenRule> rules,
                                             bool approximate = false);

// One bucket of the invalid-SSN pattern table, e.g. {"9xx-xx-xxxx", 17}
// or an exact masked value like {"888-88-8888", 3}.
struct SsnPatternCount {
    std::string pattern;
    std::uint64_t count = 0;

    bool operator==(const SsnPatternCount&) const = default;
};

// Classifies every invalid SSN in the dataset by its first failing rule.
// Structural failures aggregate into masked buckets (9xx-xx-xxxx,
// 000-xx-xxxx, 666-xx-xxxx, xxx-00-xxxx, xxx-xx-0000, not-9-digits);
// repeated-digit and denylist failures report the exact value formatted
// DDD-DD-DDDD. Rows sorted by count descending, then pattern ascending.
std::vector<SsnPatternCount> invalid_ssn_breakdown(std::span<const RawRecord> raws,
                                                   std::span<const CleanRecord> cleans,
                                                   const ValidityConfig& cfg);

}  // namespace reclink
