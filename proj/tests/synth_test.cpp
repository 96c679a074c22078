#include <doctest.h>

#include <string>
#include <unordered_set>
#include <vector>

#include "oracles.hpp"
#include "reclink/synth.hpp"

using namespace reclink;

namespace {

ValidityConfig synth_validity() {
    ValidityConfig cfg;
    cfg.max_year = 2022;  // generated dates stay at or below 2021
    return cfg;
}

SynthConfig base_config(std::uint64_t n, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.n_persons = n;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("generation is deterministic in the config") {
    SynthConfig cfg = base_config(200, 42);
    cfg.overlap_fraction = 0.7;
    cfg.dod_coverage = 0.8;
    cfg.rates(Field::first_name).null_rate = 0.2;
    cfg.rates(Field::ssn).invalid_ssn = 0.1;

    SynthOutput a = generate_population(cfg);
    SynthOutput b = generate_population(cfg);
    CHECK(a.patients == b.patients);
    CHECK(a.external == b.external);
    CHECK(a.truth == b.truth);

    SynthConfig other = cfg;
    other.seed = 43;
    SynthOutput c = generate_population(other);
    CHECK(a.patients != c.patients);
}

TEST_CASE("overlap controls dataset sizes and the truth map") {
    SynthConfig cfg = base_config(100, 7);
    cfg.overlap_fraction = 0.5;
    SynthOutput out = generate_population(cfg);

    // 50 shared persons; the other 50 alternate sides, 25 each.
    CHECK(out.truth.size() == 50);
    CHECK(out.patients.size() == 75);
    CHECK(out.external.size() == 75);

    // Truth ids exist in their datasets, each exactly once.
    std::unordered_set<std::string> pids, eids;
    for (const auto& r : out.patients) CHECK(pids.insert(r.record_id).second);
    for (const auto& r : out.external) CHECK(eids.insert(r.record_id).second);
    for (const auto& [pid, eid] : out.truth) {
        CHECK(pids.count(pid) == 1);
        CHECK(eids.count(eid) == 1);
    }

    // Full overlap pairs everyone.
    SynthConfig full = base_config(40, 7);
    SynthOutput everyone = generate_population(full);
    CHECK(everyone.truth.size() == 40);
    CHECK(everyone.patients.size() == 40);
    CHECK(everyone.external.size() == 40);
}

TEST_CASE("bad configs are rejected") {
    CHECK_THROWS_AS(generate_population(base_config(0, 1)), FatalError);

    SynthConfig bad_overlap = base_config(10, 1);
    bad_overlap.overlap_fraction = 1.5;
    CHECK_THROWS_AS(generate_population(bad_overlap), FatalError);

    SynthConfig bad_rate = base_config(10, 1);
    bad_rate.rates(Field::ssn).typo = -0.1;
    CHECK_THROWS_AS(generate_population(bad_rate), FatalError);

    SynthConfig bad_coverage = base_config(10, 1);
    bad_coverage.dod_coverage = 2.0;
    CHECK_THROWS_AS(generate_population(bad_coverage), FatalError);
}

TEST_CASE("raw values use the documented surface formats") {
    SynthConfig cfg = base_config(150, 11);
    SynthOutput out = generate_population(cfg);
    ValidityConfig validity = synth_validity();

    for (const auto& r : out.patients) {
        for (Field f : {Field::birth_date, Field::death_date}) {
            if (!r.field(f)) continue;
            const std::string& v = *r.field(f);
            REQUIRE(v.size() == 10);
            CHECK(v[4] == '/');
            CHECK(v[7] == '/');
        }
        if (r.field(Field::ssn)) {
            const std::string& v = *r.field(Field::ssn);
            REQUIRE(v.size() == 11);
            CHECK(v[3] == '-');
            CHECK(v[6] == '-');
        }
    }

    // With no injected errors every generated field cleans to valid.
    auto cleans = clean_dataset(out.patients, validity, 1);
    for (const auto& c : cleans)
        for (Field f : kAllFields)
            CHECK(c.status_of(f) != FieldStatus::invalid);
}

TEST_CASE("every person carries a birth date and the overlap share dods") {
    SynthConfig cfg = base_config(80, 13);
    cfg.dod_coverage = 1.0;
    SynthOutput out = generate_population(cfg);
    for (const auto& r : out.external) CHECK(r.field(Field::death_date).has_value());

    cfg.dod_coverage = 0.0;
    out = generate_population(cfg);
    for (const auto& r : out.external) CHECK_FALSE(r.field(Field::death_date).has_value());
}

TEST_CASE("null-rate raises missingness monotonically at a fixed seed") {
    auto complete_first_names = [](double null_rate) {
        SynthConfig cfg = base_config(400, 99);
        cfg.rates(Field::first_name).null_rate = null_rate;
        SynthOutput out = generate_population(cfg);
        std::size_t n = 0;
        for (const auto& r : out.patients)
            if (r.field(Field::first_name)) ++n;
        return n;
    };
    std::size_t at0 = complete_first_names(0.0);
    std::size_t at3 = complete_first_names(0.3);
    std::size_t at7 = complete_first_names(0.7);
    std::size_t at10 = complete_first_names(1.0);
    CHECK(at0 == 400);
    CHECK(at0 >= at3);
    CHECK(at3 >= at7);
    CHECK(at7 >= at10);
    CHECK(at10 == 0);
    // The intermediate rates actually bite.
    CHECK(at3 < 400);
    CHECK(at7 < at3);
}

TEST_CASE("invalid_ssn forces structurally bad ssns") {
    SynthConfig cfg = base_config(120, 17);
    cfg.rates(Field::ssn).invalid_ssn = 1.0;
    SynthOutput out = generate_population(cfg);
    ValidityConfig validity = synth_validity();
    auto cleans = clean_dataset(out.patients, validity, 1);
    std::size_t present = 0;
    for (const auto& c : cleans) {
        if (c.status_of(Field::ssn) == FieldStatus::missing) continue;
        ++present;
        CHECK(c.status_of(Field::ssn) == FieldStatus::invalid);
    }
    CHECK(present > 0);
}

TEST_CASE("typos keep the value present but may break validity") {
    SynthConfig cfg = base_config(300, 19);
    cfg.rates(Field::last_name).typo = 1.0;
    SynthOutput typod = generate_population(cfg);
    SynthConfig clean_cfg = base_config(300, 19);
    SynthOutput untouched = generate_population(clean_cfg);

    // Same seed, same presence pattern; the values differ where a typo hit.
    REQUIRE(typod.patients.size() == untouched.patients.size());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < typod.patients.size(); ++i) {
        CHECK(typod.patients[i].field(Field::last_name).has_value() ==
              untouched.patients[i].field(Field::last_name).has_value());
        if (typod.patients[i].field(Field::last_name) !=
            untouched.patients[i].field(Field::last_name))
            ++changed;
    }
    CHECK(changed > 250);  // rate 1.0 changes nearly every name
}

TEST_CASE("date_swap swaps the month and day fields") {
    SynthConfig cfg = base_config(200, 23);
    cfg.rates(Field::birth_date).date_swap = 1.0;
    SynthOutput swapped = generate_population(cfg);
    SynthConfig plain_cfg = base_config(200, 23);
    SynthOutput plain = generate_population(plain_cfg);

    std::size_t differing = 0;
    for (std::size_t i = 0; i < swapped.patients.size(); ++i) {
        const auto& a = swapped.patients[i].field(Field::birth_date);
        const auto& b = plain.patients[i].field(Field::birth_date);
        REQUIRE(a.has_value() == b.has_value());
        if (!a) continue;
        // YYYY/MM/DD with MM and DD exchanged.
        CHECK(a->substr(0, 4) == b->substr(0, 4));
        CHECK(a->substr(5, 2) == b->substr(8, 2));
        CHECK(a->substr(8, 2) == b->substr(5, 2));
        if (*a != *b) ++differing;
    }
    CHECK(differing > 0);
}

TEST_CASE("scoring compares emitted links against the truth map") {
    std::vector<std::pair<std::string, std::string>> truth = {
        {"p1", "e1"}, {"p2", "e2"}, {"p3", "e3"}};
    std::unordered_set<std::string> universe = {"e1", "e2", "e3", "e9"};

    auto row = [](std::string pid, const char* eid) {
        LinkedRow r;
        r.record_id = std::move(pid);
        if (eid) {
            r.external_record_id = eid;
            r.token_id = 6;
            r.category = Category::category2;
        }
        return r;
    };

    std::vector<LinkedRow> rows;
    rows.push_back(row("p1", "e1"));      // true positive
    rows.push_back(row("p2", "e9"));      // contradicts truth -> false positive
    rows.push_back(row("p3", nullptr));   // truth pair left unlinked -> false negative
    rows.push_back(row("p4", "e2"));      // outside truth but linked -> false positive
    rows.push_back(row("p5", nullptr));   // outside truth, unlinked -> ignored

    TruthScore score = score_against_truth(rows, truth, &universe);
    CHECK(score.true_positive == 1);
    CHECK(score.false_positive == 2);
    CHECK(score.false_negative == 1);

    // Unknown external id in truth trips the consistency check.
    std::vector<std::pair<std::string, std::string>> bad_truth = {{"p1", "nope"}};
    CHECK_THROWS_AS(score_against_truth(rows, bad_truth, &universe), FatalError);
}

TEST_CASE("truth serializes as two-column csv") {
    std::vector<std::pair<std::string, std::string>> truth = {{"p1", "e1"}, {"p2", "e2"}};
    CHECK(serialize_truth(truth) == "patient_id,external_id\np1,e1\np2,e2\n");
}

TEST_CASE("an error-free world links completely and correctly") {
    SynthConfig cfg = base_config(150, 29);
    SynthOutput out = generate_population(cfg);
    ValidityConfig validity = synth_validity();

    auto patients = clean_dataset(out.patients, validity, 1);
    auto external = clean_dataset(out.external, validity, 1);
    CategoryThresholds thresholds;
    auto reference = oracle::link_reference(patients, external,
                                            ValidationMode::single_record, 0, thresholds);

    std::unordered_set<std::string> universe;
    for (const auto& r : out.external) universe.insert(r.record_id);
    TruthScore score = score_against_truth(reference.rows, out.truth, &universe);
    CHECK(score.true_positive == out.truth.size());
    CHECK(score.false_positive == 0);
    CHECK(score.false_negative == 0);
}
