#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "reclink/common.hpp"
#include "reclink/ingest.hpp"

namespace reclink {

enum class FieldStatus : std::uint8_t { missing, valid, invalid };

std::string_view status_name(FieldStatus s);

// What to do with accented letters before stripping: map them to their
// ASCII base letters, or drop them with every other non-ASCII character.
enum class DiacriticMode : std::uint8_t { fold, erase };

struct ValidityConfig {
    int min_year = 1850;
    int max_year;  // inclusive; callers default this to the run year
    bool check_month_day = true;
    DiacriticMode diacritics = DiacriticMode::fold;
    std::unordered_set<std::string> ssn_denylist;

    ValidityConfig();
};

// Year of the current date (local civil time). Used as the default
// upper bound for plausible dates.
int current_year();

enum class SsnFailure : std::uint8_t {
    not_nine_digits,
    area_000,
    area_666,
    area_9xx,
    group_00,
    serial_0000,
    repeated_digit,
    denylist,
};
std::string_view to_string(SsnFailure f);

enum class DateFailure : std::uint8_t {
    not_eight_digits,
    year_below_min,
    year_above_max,
    month_out_of_range,
    day_out_of_range,
};
std::string_view to_string(DateFailure f);

// Removes every non-digit character. Null input, or nothing surviving,
// yields null.
std::optional<std::string> normalize_digits(const std::optional<std::string>& raw);

enum class NameKind : std::uint8_t { first, middle, last };

// Folds (or erases) diacritics, drops every non-letter, uppercases, then
// truncates: 15 characters for first/middle, 20 for last. Null input, or
// nothing surviving, yields null.
std::optional<std::string> normalize_name(const std::optional<std::string>& raw, NameKind kind,
                                          DiacriticMode mode = DiacriticMode::fold);

// First failing rule, or nullopt when the digit string is a plausible SSN.
std::optional<SsnFailure> ssn_failure(std::string_view digits, const ValidityConfig& cfg);

// First failing rule, or nullopt when the digit string is a plausible
// YYYYMMDD date.
std::optional<DateFailure> date_failure(std::string_view digits, const ValidityConfig& cfg);

inline int days_in_month(int year, int month) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return kDays[month - 1];
}

struct CleanRecord {
    std::string record_id;
    std::array<std::optional<std::string>, kFieldCount> fields;
    std::array<FieldStatus, kFieldCount> status{};

    std::optional<std::string>& field(Field f) { return fields[field_index(f)]; }
    const std::optional<std::string>& field(Field f) const { return fields[field_index(f)]; }
    FieldStatus status_of(Field f) const { return status[field_index(f)]; }

    bool operator==(const CleanRecord&) const = default;
};

// Cleans one record. Raw null / whitespace-only -> missing; raw present
// but failing validation (or emptied by cleaning) -> invalid; otherwise
// valid with the normalized value. A field holds a value iff valid.
CleanRecord clean_record(const RawRecord& raw, const ValidityConfig& cfg);

std::vector<CleanRecord> clean_dataset(std::span<const RawRecord> raws, const ValidityConfig& cfg,
                                       unsigned threads = 1);

struct StatusTally {
    std::uint64_t valid = 0;
    std::uint64_t missing = 0;
    std::uint64_t invalid = 0;
};

std::array<StatusTally, kFieldCount> tally_statuses(std::span<const CleanRecord> records);

}  // namespace reclink
