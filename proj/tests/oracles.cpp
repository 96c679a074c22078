#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>

#include "reclink/soundex.hpp"

namespace oracle {

namespace {

bool all_digits(std::string_view s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

}  // namespace

std::string check_ssn(std::string_view digits, const std::unordered_set<std::string>& denylist) {
    if (digits.size() != 9 || !all_digits(digits)) return "not-9-digits";
    int area = to_int(digits.substr(0, 3));
    int group = to_int(digits.substr(3, 2));
    int serial = to_int(digits.substr(5, 4));
    if (area == 0) return "area-000";
    if (area == 666) return "area-666";
    if (area >= 900) return "area-9xx";
    if (group == 0) return "group-00";
    if (serial == 0) return "serial-0000";
    if (std::all_of(digits.begin(), digits.end(), [&](char c) { return c == digits[0]; }))
        return "repeated-digit";
    if (denylist.count(std::string(digits)) != 0) return "denylist";
    return "";
}

std::string check_date(std::string_view digits, int min_year, int max_year, bool check_month_day) {
    if (digits.size() != 8 || !all_digits(digits)) return "not-8-digits";
    int y = to_int(digits.substr(0, 4));
    int m = to_int(digits.substr(4, 2));
    int d = to_int(digits.substr(6, 2));
    if (y < min_year) return "year-below-min";
    if (y > max_year) return "year-above-max";
    if (check_month_day) {
        if (m < 1 || m > 12) return "month-out-of-range";
        std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
        if (!ymd.ok()) return "day-out-of-range";
    }
    return "";
}

std::size_t distinct_sorted(std::vector<std::string> values) {
    std::sort(values.begin(), values.end());
    return std::unique(values.begin(), values.end()) - values.begin();
}

long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    long long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                   static_cast<unsigned>(d) - 1u;
    unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097LL + static_cast<long long>(doe) - 719468LL;
}

long long date_diff(std::string_view a, std::string_view b) {
    auto days = [](std::string_view s) {
        return days_from_civil(to_int(s.substr(0, 4)), to_int(s.substr(4, 2)),
                               to_int(s.substr(6, 2)));
    };
    return days(b) - days(a);
}

std::array<std::optional<std::string>, 20> builtin_tokens(const reclink::CleanRecord& r) {
    using reclink::Field;
    const auto& F = r.field(Field::first_name);
    const auto& M = r.field(Field::middle_name);
    const auto& L = r.field(Field::last_name);
    const auto& B = r.field(Field::birth_date);
    const auto& S = r.field(Field::ssn);

    auto last4 = [](const std::string& s) { return s.substr(5, 4); };
    auto yr = [](const std::string& s) { return s.substr(0, 4); };
    auto ini = [](const std::string& s) { return s.substr(0, 1); };
    auto pre3 = [](const std::string& s) { return s.substr(0, 3); };
    auto sdx = [](const std::string& s) { return reclink::soundex(s); };

    std::array<std::optional<std::string>, 20> t;
    if (S && L && M && F && B) t[0] = *S + *L + *M + *F + *B;
    if (S && L && F && B) t[1] = *S + *L + *F + *B;
    if (S && B) t[2] = *S + *B;
    if (S && B && F && L) t[3] = *S + yr(*B) + *F + *L;
    if (S && L && M && F) t[4] = *S + *L + *M + *F;
    if (S) t[5] = *S;
    if (S && L && M && F && B) t[6] = last4(*S) + *L + *M + *F + *B;
    if (S && B) t[7] = last4(*S) + *B;
    if (L && M && F && B) t[8] = *L + *M + *F + *B;
    if (L && M && F && B) t[9] = *L + *M + *F + yr(*B);
    if (L && F && B) t[10] = *L + *F + *B;
    if (L && M && F) t[11] = *L + ini(*M) + *F;
    if (L && F && B) t[12] = *L + pre3(*F) + *B;
    if (L && F && B) t[13] = *L + ini(*F) + *B;
    if (L && M && F && B) t[14] = sdx(*L) + sdx(*M) + sdx(*F) + *B;
    if (L && M && F && B) t[15] = sdx(*L) + sdx(*M) + sdx(*F) + yr(*B);
    if (L && F && B) t[16] = sdx(*L) + sdx(*F) + *B;
    if (L) t[17] = *L;
    if (F) t[18] = *F;
    if (B) t[19] = *B;
    return t;
}

LinkOutcome link_reference(std::span<const reclink::CleanRecord> patients,
                           std::span<const reclink::CleanRecord> external,
                           reclink::ValidationMode mode, int tolerance_days,
                           const reclink::CategoryThresholds& thresholds) {
    using reclink::Field;
    const std::size_t P = patients.size();
    const std::size_t E = external.size();

    std::vector<std::array<std::optional<std::string>, 20>> pt(P), et(E);
    for (std::size_t i = 0; i < P; ++i) pt[i] = builtin_tokens(patients[i]);
    for (std::size_t e = 0; e < E; ++e) et[e] = builtin_tokens(external[e]);

    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < P; ++i)
        if (patients[i].field(Field::death_date)) subset.push_back(i);

    auto dods_agree = [&](const std::string& a, const std::string& b) {
        if (tolerance_days == 0) return a == b;
        return std::llabs(date_diff(a, b)) <= tolerance_days;
    };

    LinkOutcome out;
    for (int pos = 0; pos < 20; ++pos) {
        reclink::ValidationStats st;
        st.token_id = pos + 1;
        for (std::size_t i : subset) {
            const auto& tv = pt[i][pos];
            if (!tv) continue;
            std::size_t within = 0;
            for (std::size_t j : subset)
                if (pt[j][pos] && *pt[j][pos] == *tv) ++within;
            if (within != 1) continue;

            bool qualifies = false;
            std::optional<std::string> ext_dod;
            if (mode == reclink::ValidationMode::single_record) {
                std::size_t hits = 0, hit = 0;
                for (std::size_t e = 0; e < E; ++e)
                    if (et[e][pos] && *et[e][pos] == *tv) {
                        ++hits;
                        hit = e;
                    }
                if (hits == 1) {
                    qualifies = true;
                    ext_dod = external[hit].field(Field::death_date);
                }
            } else {
                bool any = false;
                std::vector<std::string> dods;
                for (std::size_t e = 0; e < E; ++e) {
                    if (!et[e][pos] || *et[e][pos] != *tv) continue;
                    any = true;
                    const auto& dod = external[e].field(Field::death_date);
                    if (dod && std::find(dods.begin(), dods.end(), *dod) == dods.end())
                        dods.push_back(*dod);
                }
                if (any && dods.size() == 1) {
                    qualifies = true;
                    ext_dod = dods.front();
                }
            }
            if (!qualifies) continue;

            ++st.one_to_one;
            const auto& pdod = *patients[i].field(Field::death_date);
            if (ext_dod && dods_agree(pdod, *ext_dod))
                ++st.dod_match;
            else
                ++st.dod_nonmatch;
        }
        out.stats.push_back(st);
    }

    struct Row {
        int id;
        double rate;
        std::uint64_t count;
    };
    std::vector<Row> defined;
    for (const auto& st : out.stats)
        if (st.one_to_one > 0)
            defined.push_back({st.token_id, double(st.dod_match) / double(st.one_to_one),
                               st.one_to_one});
    std::sort(defined.begin(), defined.end(), [](const Row& a, const Row& b) {
        if (a.rate != b.rate) return a.rate > b.rate;
        if (a.count != b.count) return a.count > b.count;
        return a.id < b.id;
    });
    for (const Row& row : defined) {
        reclink::Category cat = reclink::Category::category3;
        if (row.rate > thresholds.category1_exclusive_min)
            cat = reclink::Category::category1;
        else if (row.rate >= thresholds.category2_inclusive_min)
            cat = reclink::Category::category2;
        out.ranked.push_back({row.id, cat});
    }

    for (std::size_t i = 0; i < P; ++i) {
        reclink::LinkedRow row;
        row.record_id = patients[i].record_id;
        row.dod_patient = patients[i].field(Field::death_date);
        for (const auto& rt : out.ranked) {
            std::size_t pos = static_cast<std::size_t>(rt.token_id) - 1;
            const auto& tv = pt[i][pos];
            if (!tv) continue;
            std::size_t pcount = 0;
            for (std::size_t j = 0; j < P; ++j)
                if (pt[j][pos] && *pt[j][pos] == *tv) ++pcount;
            if (pcount != 1) continue;
            std::size_t ecount = 0, hit = 0;
            for (std::size_t e = 0; e < E; ++e)
                if (et[e][pos] && *et[e][pos] == *tv) {
                    ++ecount;
                    hit = e;
                }
            if (ecount != 1) continue;
            row.dod_external = external[hit].field(Field::death_date);
            row.category = rt.category;
            row.token_id = rt.token_id;
            row.external_record_id = external[hit].record_id;
            break;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::span<const NamedCode> soundex_fixture() {
    static constexpr NamedCode kPairs[] = {
        {"ROBERT", "R163"},     {"RUPERT", "R163"},     {"ASHCRAFT", "A261"},
        {"ASHCROFT", "A261"},   {"TYMCZAK", "T522"},    {"PFISTER", "P236"},
        {"HONEYMAN", "H555"},   {"JACKSON", "J250"},    {"WASHINGTON", "W252"},
        {"LEE", "L000"},        {"GUTIERREZ", "G362"},  {"EULER", "E460"},
        {"ELLERY", "E460"},     {"GAUSS", "G200"},      {"GHOSH", "G200"},
        {"HILBERT", "H416"},    {"HEILBRONN", "H416"},  {"KNUTH", "K530"},
        {"KANT", "K530"},       {"LLOYD", "L300"},      {"LADD", "L300"},
        {"LUKASIEWICZ", "L222"},{"LISSAJOUS", "L222"},  {"WACHS", "W200"},
        {"WAUGH", "W200"},      {"A", "A000"},          {"SMITH", "S530"},
        {"SMYTH", "S530"},      {"JOHNSON", "J525"},    {"WILLIAMS", "W452"},
        {"BROWN", "B650"},      {"JONES", "J520"},      {"MILLER", "M460"},
        {"DAVIS", "D120"},      {"GARCIA", "G620"},     {"RODRIGUEZ", "R362"},
        {"MARTINEZ", "M635"},   {"HERNANDEZ", "H655"},  {"LOPEZ", "L120"},
        {"GONZALEZ", "G524"},   {"WILSON", "W425"},     {"ANDERSON", "A536"},
        {"THOMAS", "T520"},     {"TAYLOR", "T460"},     {"MOORE", "M600"},
        {"THOMPSON", "T512"},   {"WHITE", "W300"},      {"CLARK", "C462"},
        {"LEWIS", "L200"},      {"WALKER", "W426"},     {"HALL", "H400"},
        {"YOUNG", "Y520"},      {"KING", "K520"},       {"SCHMIDT", "S530"},
        {"SCHNEIDER", "S536"},  {"VANDEUSEN", "V532"},  {"OBRIENSMITH", "O165"},
        {"JOSE", "J200"},       {"MUELLER", "M460"},    {"MULLER", "M460"},
        {"NGUYEN", "N250"},     {"CZARNECKI", "C652"},  {"PEREZ", "P620"},
        {"ROBINSON", "R152"},   {"OCONNOR", "O256"},    {"WRIGHT", "W623"},
        {"LU", "L000"},         {"NG", "N200"},         {"XU", "X000"},
        {"EE", "E000"},         {"BRZEZINSKI", "B622"}, {"DEJESUS", "D222"},
    };
    return kPairs;
}

}  // namespace oracle
