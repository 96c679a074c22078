#include "reclink/synth.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <unordered_map>

#include "reclink/normalize.hpp"

namespace reclink {

namespace {

// splitmix64: tiny, portable, and stable across platforms — the std
// distributions are implementation-defined, which would break the
// byte-identical-output promise.
struct Stream {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double unit() { return (next() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

std::uint64_t mix_key(std::initializer_list<std::uint64_t> parts) {
    Stream s{0x8FB3DCEDA3E5B1A7ull};
    std::uint64_t h = 0;
    for (std::uint64_t p : parts) {
        s.state ^= p;
        h ^= s.next();
    }
    return h;
}

constexpr std::string_view kGivenNames[] = {
    "James", "Mary", "Robert", "Patricia", "John", "Jennifer", "Michael", "Linda", "David",
    "Elizabeth", "William", "Barbara", "Richard", "Susan", "Joseph", "Jessica", "Thomas",
    "Sarah", "Charles", "Karen", "Christopher", "Lisa", "Daniel", "Nancy", "Matthew", "Betty",
    "Anthony", "Sandra", "Mark", "Margaret", "Donald", "Ashley", "Steven", "Kimberly", "Andrew",
    "Emily", "Paul", "Donna", "Joshua", "Michelle", "Kenneth", "Carol", "Kevin", "Amanda",
    "Brian", "Melissa", "George", "Deborah", "Timothy", "Stephanie", "Ronald", "Rebecca",
    "Jason", "Sharon", "Edward", "Laura", "Jeffrey", "Cynthia", "Ryan", "Dorothy", "Jacob",
    "Amy", "Gary", "Kathleen", "Nicholas", "Angela", "Eric", "Shirley", "Jonathan", "Emma",
    "Stephen", "Brenda", "Larry", "Pamela", "Justin", "Nicole", "Scott", "Anna", "Brandon",
    "Samantha", "Benjamin", "Katherine", "Samuel", "Christine", "Gregory", "Debra", "Alexander",
    "Rachel", "Patrick", "Carolyn", "Frank", "Janet", "Raymond", "Maria", "Jack", "Olivia",
    "Dennis", "Heather", "Jerry", "Helen", "Tyler", "Catherine", "Aaron", "Diane", "Adam",
    "Julie", "Nathan", "Victoria", "Henry", "Joyce", "Zachary", "Lauren", "Douglas", "Kelly",
    "Peter", "Christina", "Kyle", "Ruth", "Noah", "Joan", "Ethan", "Virginia", "Jeremy",
    "Judith", "Christian", "Evelyn", "Walter", "Hannah", "Keith", "Andrea", "Austin", "Megan",
    "Roger", "Cheryl", "Terry", "Jacqueline", "Sean", "Madison", "Gerald", "Teresa", "Carl",
    "Abigail", "Dylan", "Sophia", "Harold", "Martha", "Jordan", "Gloria", "Jesse", "Janice",
    "Bryan", "Kathryn", "Lawrence", "Ann", "Arthur", "Isabella", "Gabriel", "Judy", "Bruce",
    "Charlotte", "Logan", "Julia", "Billy", "Grace", "Joe", "Amber", "Alan", "Alice", "Juan",
    "Jean", "Elijah", "Denise", "Willie", "Frances", "Albert", "Danielle", "Wayne", "Marilyn",
    "Randy", "Natalie", "Mason", "Beverly", "Vincent", "Diana", "Liam", "Brittany", "Roy",
    "Theresa", "Bobby", "Kayla", "Caleb", "Alexis", "Bradley", "Doris", "José", "María",
    "André", "Renée", "Zoë", "Chloé", "François", "Søren", "Björn", "Agnès", "Inés", "Raúl",
    "Łukasz", "Ömer", "Céline", "Nadia",
};

constexpr std::string_view kSurnames[] = {
    "Smith", "Johnson", "Williams", "Brown", "Jones", "Garcia", "Miller", "Davis", "Rodriguez",
    "Martinez", "Hernandez", "Lopez", "Gonzalez", "Wilson", "Anderson", "Thomas", "Taylor",
    "Moore", "Jackson", "Martin", "Lee", "Perez", "Thompson", "White", "Harris", "Sanchez",
    "Clark", "Ramirez", "Lewis", "Robinson", "Walker", "Young", "Allen", "King", "Wright",
    "Scott", "Torres", "Nguyen", "Hill", "Flores", "Green", "Adams", "Nelson", "Baker", "Hall",
    "Rivera", "Campbell", "Mitchell", "Carter", "Roberts", "Gomez", "Phillips", "Evans",
    "Turner", "Diaz", "Parker", "Cruz", "Edwards", "Collins", "Reyes", "Stewart", "Morris",
    "Morales", "Murphy", "Cook", "Rogers", "Gutierrez", "Ortiz", "Morgan", "Cooper", "Peterson",
    "Bailey", "Reed", "Kelly", "Howard", "Ramos", "Kim", "Cox", "Ward", "Richardson", "Watson",
    "Brooks", "Chavez", "Wood", "James", "Bennett", "Gray", "Mendoza", "Ruiz", "Hughes",
    "Price", "Alvarez", "Castillo", "Sanders", "Patel", "Myers", "Long", "Ross", "Foster",
    "Jimenez", "Powell", "Jenkins", "Perry", "Russell", "Sullivan", "Bell", "Coleman", "Butler",
    "Henderson", "Barnes", "Gonzales", "Fisher", "Vasquez", "Simmons", "Romero", "Jordan",
    "Patterson", "Alexander", "Hamilton", "Graham", "Reynolds", "Griffin", "Wallace", "Moreno",
    "West", "Cole", "Hayes", "Bryant", "Herrera", "Gibson", "Ellis", "Tran", "Medina",
    "Aguilar", "Stevens", "Murray", "Ford", "Castro", "Marshall", "Owens", "Harrison",
    "Fernandez", "McDonald", "Woods", "Washington", "Kennedy", "Wells", "Vargas", "Henry",
    "Chen", "Freeman", "Webb", "Tucker", "Guzman", "Burns", "Crawford", "Olson", "Simpson",
    "Porter", "Hunter", "Gordon", "Mendez", "Silva", "Shaw", "Snyder", "Mason", "Dixon",
    "Hunt", "Hicks", "Holmes", "Palmer", "Wagner", "Black", "Robertson", "Boyd", "Rose",
    "Stone", "Salazar", "Fox", "Warren", "Mills", "Meyer", "Rice", "Schmidt", "Garza",
    "Daniels", "Ferguson", "Nichols", "Stephens", "Soto", "Weaver", "Ryan", "O'Brien",
    "O'Connor", "Müller", "García", "Muñoz", "Nuñez", "Ibáñez", "Dvořák", "Çelik", "Björk",
    "Løken", "D'Angelo", "Peña",
};

// Every entry fails validation, each through a different rule.
constexpr std::string_view kInvalidSsnPool[] = {
    "123-45-6789", "012-34-5678", "001-01-0001", "090-90-9090", "000-12-3456", "666-12-3456",
    "999-12-3456", "123-00-4567", "123-45-0000", "111-11-1111", "888-88-8888", "12345",
};

constexpr std::string_view kTypoAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

struct Date {
    int y, m, d;
};

std::string format_date(const Date& dt) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "%04d/%02d/%02d", dt.y, dt.m, dt.d);
    return buf;
}

std::string format_ssn(std::uint64_t area, std::uint64_t group, std::uint64_t serial) {
    char buf[12];
    std::snprintf(buf, sizeof buf, "%03llu-%02llu-%04llu", (unsigned long long)area,
                  (unsigned long long)group, (unsigned long long)serial);
    return buf;
}

struct Person {
    std::string first, middle, last;
    Date dob, dod;
    std::string ssn;  // raw DDD-DD-DDDD form, structurally valid
};

// Sequential enumeration of the valid-SSN space (area 001-665, group
// 01-99, serial 0001-9999), skipping the handful of denylisted decodes.
// Injective, so generated identities never collide on ssn.
class SsnWell {
  public:
    explicit SsnWell(const ValidityConfig& cfg) : cfg_(cfg) {}

    std::string draw() {
        for (;;) {
            std::uint64_t slot = next_++;
            std::uint64_t serial = slot % 9999 + 1;
            std::uint64_t group = slot / 9999 % 99 + 1;
            std::uint64_t area = slot / (9999 * 99) % 665 + 1;
            std::string raw = format_ssn(area, group, serial);
            auto digits = normalize_digits(std::optional<std::string>(raw));
            if (!ssn_failure(*digits, cfg_)) return raw;
        }
    }

  private:
    const ValidityConfig& cfg_;
    std::uint64_t next_ = 0;
};

Person make_person(std::uint64_t seed, std::uint64_t index, SsnWell& well) {
    Stream s{mix_key({seed, 0x1D, index})};
    Person p;
    p.first = kGivenNames[s.below(std::size(kGivenNames))];
    p.middle = kGivenNames[s.below(std::size(kGivenNames))];
    p.last = kSurnames[s.below(std::size(kSurnames))];
    p.dob.y = 1900 + static_cast<int>(s.below(106));  // 1900..2005
    p.dob.m = 1 + static_cast<int>(s.below(12));
    p.dob.d = 1 + static_cast<int>(s.below(static_cast<std::uint64_t>(days_in_month(p.dob.y, p.dob.m))));
    int dod_min = std::max(1980, p.dob.y);
    p.dod.y = dod_min + static_cast<int>(s.below(static_cast<std::uint64_t>(2021 - dod_min + 1)));
    p.dod.m = 1 + static_cast<int>(s.below(12));
    p.dod.d = 1 + static_cast<int>(s.below(static_cast<std::uint64_t>(days_in_month(p.dod.y, p.dod.m))));
    p.ssn = well.draw();
    return p;
}

enum class Side : std::uint64_t { patient = 1, external = 2 };

// Renders one raw field value for one dataset side. Every decision reads
// a fixed slot of a per-(side,person,field) stream, so changing one rate
// never reshuffles any other decision — raising null_rate can only turn
// present values into nulls for a fixed seed.
std::optional<std::string> render_field(std::uint64_t seed, Side side, std::uint64_t person_idx,
                                        Field field, const std::string& base,
                                        const FieldErrorRates& rates, double presence_prob) {
    Stream s{mix_key({seed, static_cast<std::uint64_t>(side), person_idx,
                      static_cast<std::uint64_t>(field_index(field)) + 0x10})};
    double u_null = s.unit();
    double u_invalid = s.unit();
    std::uint64_t invalid_pick = s.next();
    double u_typo = s.unit();
    std::uint64_t typo_pos = s.next();
    std::uint64_t typo_char = s.next();
    double u_transpose = s.unit();
    std::uint64_t trans_pos = s.next();
    double u_swap = s.unit();

    if (u_null >= presence_prob) return std::nullopt;

    if (field == Field::ssn && u_invalid < rates.invalid_ssn)
        return std::string(kInvalidSsnPool[invalid_pick % std::size(kInvalidSsnPool)]);

    std::string value = base;
    if (u_typo < rates.typo && !value.empty()) {
        std::size_t pos = typo_pos % value.size();
        std::size_t pick = typo_char % kTypoAlphabet.size();
        if (kTypoAlphabet[pick] == value[pos]) pick = (pick + 1) % kTypoAlphabet.size();
        value[pos] = kTypoAlphabet[pick];
    }
    if (u_transpose < rates.transpose && value.size() >= 2) {
        std::size_t pos = trans_pos % (value.size() - 1);
        std::swap(value[pos], value[pos + 1]);
    }
    bool is_date = field == Field::birth_date || field == Field::death_date;
    if (is_date && u_swap < rates.date_swap && value.size() == 10) {
        std::swap(value[5], value[8]);
        std::swap(value[6], value[9]);
    }
    return value;
}

RawRecord render_record(std::uint64_t seed, Side side, std::uint64_t idx, const Person& p,
                        const SynthConfig& cfg, std::string record_id) {
    RawRecord rec;
    rec.record_id = std::move(record_id);
    auto put = [&](Field f, const std::string& base, double presence) {
        rec.field(f) = render_field(seed, side, idx, f, base, cfg.rates(f), presence);
    };
    auto presence_of = [&](Field f) { return 1.0 - cfg.rates(f).null_rate; };
    put(Field::first_name, p.first, presence_of(Field::first_name));
    put(Field::middle_name, p.middle, presence_of(Field::middle_name));
    put(Field::last_name, p.last, presence_of(Field::last_name));
    put(Field::birth_date, format_date(p.dob), presence_of(Field::birth_date));
    double dod_presence = side == Side::external ? cfg.dod_coverage
                                                 : presence_of(Field::death_date);
    put(Field::death_date, format_date(p.dod), dod_presence);
    put(Field::ssn, p.ssn, presence_of(Field::ssn));
    return rec;
}

std::string padded_id(char prefix, std::uint64_t n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%07llu", prefix, (unsigned long long)n);
    return buf;
}

void shuffle_rows(std::vector<RawRecord>& rows, std::uint64_t seed, Side side) {
    Stream s{mix_key({seed, 0x5F, static_cast<std::uint64_t>(side)})};
    for (std::size_t i = rows.size(); i > 1; --i) {
        std::size_t j = s.below(i);
        std::swap(rows[i - 1], rows[j]);
    }
}

}  // namespace

SynthOutput generate_population(const SynthConfig& cfg) {
    if (cfg.n_persons < 1) throw FatalError("synth: n_persons must be at least 1");
    auto check_fraction = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) throw FatalError(std::string("synth: ") + what + " must be in [0,1]");
    };
    check_fraction(cfg.overlap_fraction, "overlap_fraction");
    check_fraction(cfg.dod_coverage, "dod_coverage");
    for (Field f : kAllFields) {
        const auto& r = cfg.rates(f);
        check_fraction(r.null_rate, "null_rate");
        check_fraction(r.invalid_ssn, "invalid_ssn");
        check_fraction(r.typo, "typo");
        check_fraction(r.transpose, "transpose");
        check_fraction(r.date_swap, "date_swap");
    }

    ValidityConfig validity;  // structural SSN rules only; year bounds unused here
    SsnWell well(validity);
    auto n_overlap = static_cast<std::uint64_t>(cfg.overlap_fraction * double(cfg.n_persons) + 0.5);
    if (n_overlap > cfg.n_persons) n_overlap = cfg.n_persons;

    SynthOutput out;
    for (std::uint64_t k = 0; k < cfg.n_persons; ++k) {
        Person p = make_person(cfg.seed, k, well);
        bool in_patient = k < n_overlap || (k - n_overlap) % 2 == 0;
        bool in_external = k < n_overlap || (k - n_overlap) % 2 == 1;
        if (in_patient)
            out.patients.push_back(render_record(cfg.seed, Side::patient, k, p, cfg, padded_id('P', k)));
        if (in_external)
            out.external.push_back(render_record(cfg.seed, Side::external, k, p, cfg, padded_id('D', k)));
        if (in_patient && in_external) out.truth.emplace_back(padded_id('P', k), padded_id('D', k));
    }
    shuffle_rows(out.patients, cfg.seed, Side::patient);
    shuffle_rows(out.external, cfg.seed, Side::external);
    std::sort(out.truth.begin(), out.truth.end());
    return out;
}

TruthScore score_against_truth(std::span<const LinkedRow> rows,
                               std::span<const std::pair<std::string, std::string>> truth,
                               const std::unordered_set<std::string>* external_ids) {
    std::unordered_map<std::string, const std::string*> expected;  // patient -> external
    for (const auto& [p, e] : truth) {
        expected.emplace(p, &e);
        if (external_ids && !external_ids->count(e))
            throw FatalError("truth map references unknown external id " + e);
    }

    TruthScore score;
    std::unordered_set<std::string> linked_truth_patients;
    for (const auto& row : rows) {
        if (!row.external_record_id) continue;
        if (external_ids && !external_ids->count(*row.external_record_id))
            throw FatalError("linked row references unknown external id " + *row.external_record_id);
        auto it = expected.find(row.record_id);
        if (it == expected.end()) {
            ++score.false_positive;  // linked a patient with no true twin
        } else if (*it->second == *row.external_record_id) {
            ++score.true_positive;
            linked_truth_patients.insert(row.record_id);
        } else {
            ++score.false_positive;
            linked_truth_patients.insert(row.record_id);
        }
    }
    for (const auto& [p, e] : truth) {
        if (!linked_truth_patients.count(p)) ++score.false_negative;
    }
    return score;
}

std::string serialize_truth(std::span<const std::pair<std::string, std::string>> truth) {
    std::string out = "patient_id,external_id\n";
    for (const auto& [p, e] : truth) {
        out += p;
        out += ',';
        out += e;
        out += '\n';
    }
    return out;
}

}  // namespace reclink
