#include "reclink/link.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdlib>

namespace reclink {

TokenIndex build_index(std::span<const TokenSet> sets, std::size_t rule_pos, int token_id) {
    TokenIndex index;
    index.token_id = token_id;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const auto& token = sets[i].tokens[rule_pos];
        if (token) index.entries[*token].push_back(static_cast<std::uint32_t>(i));
    }
    return index;
}

std::string_view to_string(ValidationMode m) {
    return m == ValidationMode::single_record ? "single_record" : "unique_dod";
}

long date_diff_days(std::string_view a, std::string_view b) {
    auto to_days = [](std::string_view d) {
        int y = (d[0] - '0') * 1000 + (d[1] - '0') * 100 + (d[2] - '0') * 10 + (d[3] - '0');
        int m = (d[4] - '0') * 10 + (d[5] - '0');
        int dd = (d[6] - '0') * 10 + (d[7] - '0');
        using namespace std::chrono;
        return sys_days(year_month_day(year(y), month(unsigned(m)), day(unsigned(dd))));
    };
    return (to_days(b) - to_days(a)).count();
}

namespace {

bool dod_agrees(const std::string& patient_dod, const std::string& external_dod,
                int tolerance_days) {
    if (tolerance_days == 0) return patient_dod == external_dod;
    return std::labs(date_diff_days(patient_dod, external_dod)) <= tolerance_days;
}

// In unique_dod mode a token value qualifies when the external records
// bearing it agree on exactly one non-null death date; returns it.
std::optional<std::string> unique_external_dod(const std::vector<std::uint32_t>& positions,
                                               std::span<const CleanRecord> external) {
    std::optional<std::string> dod;
    for (std::uint32_t pos : positions) {
        const auto& d = external[pos].field(Field::death_date);
        if (!d) continue;
        if (!dod) {
            dod = *d;
        } else if (*dod != *d) {
            return std::nullopt;
        }
    }
    return dod;
}

}  // namespace

ValidationStats validate_token(int token_id, std::size_t rule_pos,
                               std::span<const CleanRecord> patients,
                               std::span<const TokenSet> patient_tokens,
                               std::span<const std::size_t> validation_subset,
                               std::span<const CleanRecord> external,
                               const TokenIndex& external_index, ValidationMode mode,
                               int tolerance_days) {
    if (external_index.token_id != token_id)
        throw FatalError("external index was built for token " +
                         std::to_string(external_index.token_id) + ", not " +
                         std::to_string(token_id));
    ValidationStats stats;
    stats.token_id = token_id;

    // Occurrences of each token value within the validation subset only.
    std::unordered_map<std::string_view, std::uint32_t> subset_count;
    for (std::size_t i : validation_subset) {
        const auto& token = patient_tokens[i].tokens[rule_pos];
        if (token) ++subset_count[*token];
    }

    for (std::size_t i : validation_subset) {
        const auto& token = patient_tokens[i].tokens[rule_pos];
        if (!token) continue;
        if (subset_count[*token] != 1) continue;
        auto it = external_index.entries.find(*token);
        if (it == external_index.entries.end()) continue;

        const auto& patient_dod = patients[i].field(Field::death_date);
        assert(patient_dod);  // the subset is defined by valid death_date

        bool match = false;
        if (mode == ValidationMode::single_record) {
            if (it->second.size() != 1) continue;
            const auto& external_dod = external[it->second[0]].field(Field::death_date);
            match = external_dod && dod_agrees(*patient_dod, *external_dod, tolerance_days);
        } else {
            auto dod = unique_external_dod(it->second, external);
            if (!dod) continue;
            match = dod_agrees(*patient_dod, *dod, tolerance_days);
        }
        ++stats.one_to_one;
        if (match) {
            ++stats.dod_match;
        } else {
            ++stats.dod_nonmatch;
        }
    }
    return stats;
}

std::string_view category_name(Category c) {
    switch (c) {
        case Category::category1: return "1";
        case Category::category2: return "2";
        case Category::category3: return "3";
    }
    return "?";
}

std::optional<Category> categorize(const ValidationStats& stats, const CategoryThresholds& t) {
    auto rate = stats.match_rate();
    if (!rate) return std::nullopt;
    if (*rate > t.category1_exclusive_min) return Category::category1;
    if (*rate >= t.category2_inclusive_min) return Category::category2;
    return Category::category3;
}

namespace {

std::vector<const ValidationStats*> ranked_stats(std::span<const ValidationStats> stats) {
    std::vector<const ValidationStats*> defined;
    for (const auto& s : stats) {
        if (s.match_rate()) defined.push_back(&s);
    }
    std::sort(defined.begin(), defined.end(), [](const ValidationStats* a,
                                                 const ValidationStats* b) {
        double ra = *a->match_rate(), rb = *b->match_rate();
        if (ra != rb) return ra > rb;
        if (a->one_to_one != b->one_to_one) return a->one_to_one > b->one_to_one;
        return a->token_id < b->token_id;
    });
    return defined;
}

}  // namespace

std::vector<int> rank_tokens(std::span<const ValidationStats> stats) {
    std::vector<int> out;
    for (const auto* s : ranked_stats(stats)) out.push_back(s->token_id);
    return out;
}

std::vector<RankedToken> ranked_tokens_with_categories(std::span<const ValidationStats> stats,
                                                       const CategoryThresholds& thresholds) {
    std::vector<RankedToken> out;
    for (const auto* s : ranked_stats(stats)) out.push_back({s->token_id, *categorize(*s, thresholds)});
    return out;
}

std::vector<LinkedRow> link_deaths(std::span<const CleanRecord> patients,
                                   std::span<const TokenSet> patient_tokens,
                                   std::span<const CleanRecord> external,
                                   std::span<const TokenSet> external_tokens,
                                   std::span<const TokenRule> rules,
                                   std::span<const RankedToken> ranked, unsigned threads) {
    assert(patients.size() == patient_tokens.size());
    assert(external.size() == external_tokens.size());

    std::unordered_map<int, std::size_t> pos_by_id;
    for (std::size_t pos = 0; pos < rules.size(); ++pos) pos_by_id[rules[pos].id] = pos;

    struct RankedSlot {
        std::size_t rule_pos;
        Category category;
        TokenIndex patient_index;
        TokenIndex external_index;
    };
    std::vector<RankedSlot> slots;
    slots.reserve(ranked.size());
    for (const auto& rt : ranked) {
        auto it = pos_by_id.find(rt.token_id);
        if (it == pos_by_id.end())
            throw FatalError("ranked token id " + std::to_string(rt.token_id) +
                             " is not in the rule table");
        slots.push_back({it->second, rt.category, {}, {}});
    }
    parallel_chunks(slots.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            slots[s].patient_index = build_index(patient_tokens, slots[s].rule_pos,
                                                 ranked[s].token_id);
            slots[s].external_index = build_index(external_tokens, slots[s].rule_pos,
                                                  ranked[s].token_id);
        }
    });

    std::vector<LinkedRow> rows(patients.size());
    parallel_chunks(patients.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            LinkedRow& row = rows[i];
            row.record_id = patients[i].record_id;
            row.dod_patient = patients[i].field(Field::death_date);
            for (std::size_t s = 0; s < slots.size(); ++s) {
                const auto& token = patient_tokens[i].tokens[slots[s].rule_pos];
                if (!token) continue;
                if (slots[s].patient_index.multiplicity(*token) != 1) continue;
                auto it = slots[s].external_index.entries.find(*token);
                if (it == slots[s].external_index.entries.end() || it->second.size() != 1) continue;
                const CleanRecord& hit = external[it->second[0]];
                row.dod_external = hit.field(Field::death_date);
                row.category = slots[s].category;
                row.token_id = ranked[s].token_id;
                row.external_record_id = hit.record_id;
                break;
            }
        }
    });
    return rows;
}

}  // namespace reclink
