#include "reclink/profile.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>

namespace reclink {

namespace {

// The k-minimum-values estimator assumes hashes uniform over the 64-bit
// space. FNV-1a avalanches poorly on short, similar keys, so finish it
// with a full 64-bit mixer before sketching.
std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

DistinctCounter::DistinctCounter(bool approximate) : approx_(approximate) {
    if (approx_) sketch_.reserve(kSketchSize);
}

void DistinctCounter::add(std::string_view value) {
    if (!approx_) {
        exact_.emplace(value);
        return;
    }
    std::uint64_t h = mix64(fnv1a64(value));
    auto it = std::lower_bound(sketch_.begin(), sketch_.end(), h);
    if (it != sketch_.end() && *it == h) return;
    if (sketch_.size() < kSketchSize) {
        sketch_.insert(it, h);
    } else if (h < sketch_.back()) {
        sketch_.insert(it, h);
        sketch_.pop_back();
    }
}

void DistinctCounter::merge(const DistinctCounter& other) {
    assert(approx_ == other.approx_);
    if (!approx_) {
        exact_.insert(other.exact_.begin(), other.exact_.end());
        return;
    }
    std::vector<std::uint64_t> merged;
    merged.reserve(sketch_.size() + other.sketch_.size());
    std::merge(sketch_.begin(), sketch_.end(), other.sketch_.begin(), other.sketch_.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (merged.size() > kSketchSize) merged.resize(kSketchSize);
    sketch_ = std::move(merged);
}

std::uint64_t DistinctCounter::count() const {
    if (!approx_) return exact_.size();
    if (sketch_.size() < kSketchSize) return sketch_.size();
    // k-minimum-values estimator: (k-1) / fraction of hash space spanned.
    long double frac = static_cast<long double>(sketch_.back()) /
                       static_cast<long double>(std::numeric_limits<std::uint64_t>::max());
    if (frac <= 0) return sketch_.size();
    return static_cast<std::uint64_t>((kSketchSize - 1) / frac);
}

FieldProfile profile_field(std::span<const RawRecord> raws, std::span<const CleanRecord> cleans,
                           Field field, bool approximate) {
    assert(raws.size() == cleans.size());
    FieldProfile p;
    p.field = field;
    p.total_records = raws.size();
    p.distinct_approximate = approximate;
    DistinctCounter distinct(approximate);
    std::size_t i = field_index(field);
    for (std::size_t r = 0; r < raws.size(); ++r) {
        const auto& raw = raws[r].fields[i];
        if (!raw || is_blank(*raw)) continue;
        ++p.complete;
        distinct.add(trim_view(*raw));
        if (cleans[r].status[i] == FieldStatus::invalid) ++p.invalid;
    }
    p.distinct = distinct.count();
    return p;
}

TokenProfile profile_token(std::span<const TokenSet> sets, std::size_t rule_pos, int token_id,
                           bool approximate) {
    TokenProfile p;
    p.token_id = token_id;
    p.total_records = sets.size();
    p.distinct_approximate = approximate;
    DistinctCounter distinct(approximate);
    for (const auto& set : sets) {
        const auto& token = set.tokens[rule_pos];
        if (!token) continue;
        ++p.complete;
        distinct.add(*token);
    }
    p.distinct = distinct.count();
    return p;
}

std::vector<FieldProfile> profile_all_fields(std::span<const RawRecord> raws,
                                             std::span<const CleanRecord> cleans,
                                             bool approximate) {
    std::vector<FieldProfile> out;
    out.reserve(kFieldCount);
    for (Field f : kAllFields) out.push_back(profile_field(raws, cleans, f, approximate));
    return out;
}

std::vector<TokenProfile> profile_all_tokens(std::span<const TokenSet> sets,
                                             std::span<const TokenRule> rules,
                                             bool approximate) {
    std::vector<TokenProfile> out;
    out.reserve(rules.size());
    // One token id at a time keeps at most one distinct-value set alive.
    for (std::size_t pos = 0; pos < rules.size(); ++pos)
        out.push_back(profile_token(sets, pos, rules[pos].id, approximate));
    return out;
}

DatasetProfiler::DatasetProfiler(std::span<const TokenRule> rules, bool approximate)
    : approx_(approximate) {
    token_ids_.reserve(rules.size());
    for (const auto& rule : rules) token_ids_.push_back(rule.id);
    fields_.assign(kFieldCount, Tally(approx_));
    tokens_.assign(rules.size(), Tally(approx_));
}

void DatasetProfiler::add_batch(std::span<const RawRecord> raws,
                                std::span<const CleanRecord> cleans,
                                std::span<const TokenSet> sets) {
    assert(raws.size() == cleans.size() && raws.size() == sets.size());
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        Tally& t = fields_[i];
        t.total += raws.size();
        for (std::size_t r = 0; r < raws.size(); ++r) {
            const auto& raw = raws[r].fields[i];
            if (!raw || is_blank(*raw)) continue;
            ++t.complete;
            t.distinct.add(trim_view(*raw));
            if (cleans[r].status[i] == FieldStatus::invalid) ++t.invalid;
        }
    }
    for (std::size_t pos = 0; pos < tokens_.size(); ++pos) {
        Tally& t = tokens_[pos];
        t.total += sets.size();
        for (const auto& set : sets) {
            const auto& token = set.tokens[pos];
            if (!token) continue;
            ++t.complete;
            t.distinct.add(*token);
        }
    }
}

void DatasetProfiler::merge(const DatasetProfiler& other) {
    assert(approx_ == other.approx_ && token_ids_ == other.token_ids_);
    auto fold = [](Tally& into, const Tally& from) {
        into.total += from.total;
        into.complete += from.complete;
        into.invalid += from.invalid;
        into.distinct.merge(from.distinct);
    };
    for (std::size_t i = 0; i < fields_.size(); ++i) fold(fields_[i], other.fields_[i]);
    for (std::size_t i = 0; i < tokens_.size(); ++i) fold(tokens_[i], other.tokens_[i]);
}

std::vector<FieldProfile> DatasetProfiler::field_profiles() const {
    std::vector<FieldProfile> out;
    out.reserve(kFieldCount);
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        const Tally& t = fields_[i];
        out.push_back({kAllFields[i], t.total, t.complete, t.distinct.count(), t.invalid, approx_});
    }
    return out;
}

std::vector<TokenProfile> DatasetProfiler::token_profiles() const {
    std::vector<TokenProfile> out;
    out.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        const Tally& t = tokens_[i];
        out.push_back({token_ids_[i], t.total, t.complete, t.distinct.count(), approx_});
    }
    return out;
}

namespace {

std::string format_ssn_mask(std::string_view digits) {
    std::string out(digits.substr(0, 3));
    out += '-';
    out += digits.substr(3, 2);
    out += '-';
    out += digits.substr(5, 4);
    return out;
}

}  // namespace

std::vector<SsnPatternCount> invalid_ssn_breakdown(std::span<const RawRecord> raws,
                                                   std::span<const CleanRecord> cleans,
                                                   const ValidityConfig& cfg) {
    assert(raws.size() == cleans.size());
    std::map<std::string, std::uint64_t> counts;
    std::size_t i = field_index(Field::ssn);
    for (std::size_t r = 0; r < raws.size(); ++r) {
        if (cleans[r].status[i] != FieldStatus::invalid) continue;
        auto digits = normalize_digits(raws[r].fields[i]);
        std::string_view d = digits ? std::string_view(*digits) : std::string_view();
        auto failure = ssn_failure(d, cfg);
        assert(failure);
        // Well-known junk values (all one digit, or denylisted) get their own
        // pattern row even when a positional rule would also reject them, so
        // the report separates "999-99-9999" from the rest of the 9xx range.
        bool nine = d.size() == 9;
        bool all_same = nine && d.find_first_not_of(d[0]) == std::string_view::npos;
        bool listed = nine && cfg.ssn_denylist.count(std::string(d)) != 0;
        std::string bucket;
        if (all_same || listed) {
            bucket = format_ssn_mask(d);
        } else {
            switch (*failure) {
                case SsnFailure::not_nine_digits: bucket = "not-9-digits"; break;
                case SsnFailure::area_000: bucket = "000-xx-xxxx"; break;
                case SsnFailure::area_666: bucket = "666-xx-xxxx"; break;
                case SsnFailure::area_9xx: bucket = "9xx-xx-xxxx"; break;
                case SsnFailure::group_00: bucket = "xxx-00-xxxx"; break;
                case SsnFailure::serial_0000: bucket = "xxx-xx-0000"; break;
                case SsnFailure::repeated_digit:
                case SsnFailure::denylist: bucket = format_ssn_mask(d); break;
            }
        }
        ++counts[bucket];
    }
    std::vector<SsnPatternCount> out;
    out.reserve(counts.size());
    for (auto& [pattern, count] : counts) out.push_back({pattern, count});
    std::sort(out.begin(), out.end(), [](const SsnPatternCount& a, const SsnPatternCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.pattern < b.pattern;
    });
    return out;
}

}  // namespace reclink
