#include "reclink/normalize.hpp"

#include <cctype>
#include <chrono>

#include "reclink/utf8.hpp"

namespace reclink {

std::string_view status_name(FieldStatus s) {
    switch (s) {
        case FieldStatus::missing: return "missing";
        case FieldStatus::valid: return "valid";
        case FieldStatus::invalid: return "invalid";
    }
    return "?";
}

ValidityConfig::ValidityConfig()
    : max_year(current_year()),
      ssn_denylist{"123456789", "012345678", "001010001", "090909090"} {}

int current_year() {
    using namespace std::chrono;
    auto today = floor<days>(system_clock::now());
    return static_cast<int>(year_month_day(today).year());
}

std::string_view to_string(SsnFailure f) {
    switch (f) {
        case SsnFailure::not_nine_digits: return "not-9-digits";
        case SsnFailure::area_000: return "area-000";
        case SsnFailure::area_666: return "area-666";
        case SsnFailure::area_9xx: return "area-9xx";
        case SsnFailure::group_00: return "group-00";
        case SsnFailure::serial_0000: return "serial-0000";
        case SsnFailure::repeated_digit: return "repeated-digit";
        case SsnFailure::denylist: return "denylist";
    }
    return "?";
}

std::string_view to_string(DateFailure f) {
    switch (f) {
        case DateFailure::not_eight_digits: return "not-8-digits";
        case DateFailure::year_below_min: return "year-below-min";
        case DateFailure::year_above_max: return "year-above-max";
        case DateFailure::month_out_of_range: return "month-out-of-range";
        case DateFailure::day_out_of_range: return "day-out-of-range";
    }
    return "?";
}

std::optional<std::string> normalize_digits(const std::optional<std::string>& raw) {
    if (!raw) return std::nullopt;
    std::string out;
    out.reserve(raw->size());
    for (char c : *raw) {
        if (c >= '0' && c <= '9') out.push_back(c);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

std::optional<std::string> normalize_name(const std::optional<std::string>& raw, NameKind kind,
                                          DiacriticMode mode) {
    if (!raw) return std::nullopt;
    std::string out;
    out.reserve(raw->size());
    std::size_t pos = 0;
    while (pos < raw->size()) {
        char32_t cp = utf8::next_codepoint(*raw, pos);
        if (cp < 0x80) {
            if (cp >= 'A' && cp <= 'Z') {
                out.push_back(static_cast<char>(cp));
            } else if (cp >= 'a' && cp <= 'z') {
                out.push_back(static_cast<char>(cp - 'a' + 'A'));
            }
            continue;
        }
        if (mode == DiacriticMode::fold) out += utf8::fold_to_ascii(cp);
    }
    std::size_t cap = kind == NameKind::last ? 20 : 15;
    if (out.size() > cap) out.resize(cap);
    if (out.empty()) return std::nullopt;
    return out;
}

namespace {

bool all_same_digit(std::string_view s) {
    for (char c : s) {
        if (c != s[0]) return false;
    }
    return true;
}

}  // namespace

std::optional<SsnFailure> ssn_failure(std::string_view digits, const ValidityConfig& cfg) {
    if (digits.size() != 9) return SsnFailure::not_nine_digits;
    std::string_view area = digits.substr(0, 3);
    if (area == "000") return SsnFailure::area_000;
    if (area == "666") return SsnFailure::area_666;
    if (area[0] == '9') return SsnFailure::area_9xx;
    if (digits.substr(3, 2) == "00") return SsnFailure::group_00;
    if (digits.substr(5, 4) == "0000") return SsnFailure::serial_0000;
    if (all_same_digit(digits)) return SsnFailure::repeated_digit;
    if (cfg.ssn_denylist.count(std::string(digits))) return SsnFailure::denylist;
    return std::nullopt;
}

std::optional<DateFailure> date_failure(std::string_view digits, const ValidityConfig& cfg) {
    if (digits.size() != 8) return DateFailure::not_eight_digits;
    int year = (digits[0] - '0') * 1000 + (digits[1] - '0') * 100 + (digits[2] - '0') * 10 +
               (digits[3] - '0');
    if (year < cfg.min_year) return DateFailure::year_below_min;
    if (year > cfg.max_year) return DateFailure::year_above_max;
    if (cfg.check_month_day) {
        int month = (digits[4] - '0') * 10 + (digits[5] - '0');
        if (month < 1 || month > 12) return DateFailure::month_out_of_range;
        int day = (digits[6] - '0') * 10 + (digits[7] - '0');
        if (day < 1 || day > days_in_month(year, month)) return DateFailure::day_out_of_range;
    }
    return std::nullopt;
}

namespace {

NameKind name_kind(Field f) {
    switch (f) {
        case Field::first_name: return NameKind::first;
        case Field::middle_name: return NameKind::middle;
        default: return NameKind::last;
    }
}

}  // namespace

CleanRecord clean_record(const RawRecord& raw, const ValidityConfig& cfg) {
    CleanRecord out;
    out.record_id = raw.record_id;
    for (Field f : kAllFields) {
        std::size_t i = field_index(f);
        const auto& value = raw.fields[i];
        if (!value || is_blank(*value)) {
            out.status[i] = FieldStatus::missing;
            continue;
        }
        std::optional<std::string> cleaned;
        bool ok = false;
        switch (f) {
            case Field::first_name:
            case Field::middle_name:
            case Field::last_name:
                cleaned = normalize_name(value, name_kind(f), cfg.diacritics);
                ok = cleaned.has_value();
                break;
            case Field::birth_date:
            case Field::death_date:
                cleaned = normalize_digits(value);
                ok = cleaned && !date_failure(*cleaned, cfg);
                break;
            case Field::ssn:
                cleaned = normalize_digits(value);
                ok = cleaned && !ssn_failure(*cleaned, cfg);
                break;
        }
        if (ok) {
            out.status[i] = FieldStatus::valid;
            out.fields[i] = std::move(cleaned);
        } else {
            out.status[i] = FieldStatus::invalid;
        }
    }
    return out;
}

std::vector<CleanRecord> clean_dataset(std::span<const RawRecord> raws, const ValidityConfig& cfg,
                                       unsigned threads) {
    std::vector<CleanRecord> out(raws.size());
    parallel_chunks(raws.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = clean_record(raws[i], cfg);
    });
    return out;
}

std::array<StatusTally, kFieldCount> tally_statuses(std::span<const CleanRecord> records) {
    std::array<StatusTally, kFieldCount> tallies{};
    for (const auto& rec : records) {
        for (std::size_t i = 0; i < kFieldCount; ++i) {
            switch (rec.status[i]) {
                case FieldStatus::valid: ++tallies[i].valid; break;
                case FieldStatus::missing: ++tallies[i].missing; break;
                case FieldStatus::invalid: ++tallies[i].invalid; break;
            }
        }
    }
    return tallies;
}

}  // namespace reclink
