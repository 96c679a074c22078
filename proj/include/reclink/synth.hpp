#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "reclink/ingest.hpp"
#include "reclink/link.hpp"

namespace reclink {

// Error injection rates for one field, applied to the raw string form
// before any cleaning. `invalid_ssn` only fires on the ssn field;
// `date_swap` (MM/DD component swap) only on date fields.
struct FieldErrorRates {
    double null_rate = 0.0;
    double invalid_ssn = 0.0;
    double typo = 0.0;       // one character replaced (A-Z0-9 alphabet)
    double transpose = 0.0;  // two adjacent characters swapped
    double date_swap = 0.0;

    bool operator==(const FieldErrorRates&) const = default;
};

struct SynthConfig {
    std::uint64_t n_persons = 0;
    double overlap_fraction = 1.0;  // persons present in both datasets
    std::uint64_t seed = 0;
    double dod_coverage = 1.0;  // external records carrying a death date
    std::array<FieldErrorRates, kFieldCount> errors{};

    FieldErrorRates& rates(Field f) { return errors[field_index(f)]; }
    const FieldErrorRates& rates(Field f) const { return errors[field_index(f)]; }
};

// Generated dataset pair plus the ground-truth pairing. Row order is a
// seeded shuffle; `truth` is sorted by patient record_id.
struct SynthOutput {
    std::vector<RawRecord> patients;
    std::vector<RawRecord> external;
    std::vector<std::pair<std::string, std::string>> truth;
};

// Deterministic in cfg: the same config yields byte-identical datasets.
// Overlap persons appear in both datasets with independently injected
// errors; the rest alternate between patient-only and external-only.
// Throws FatalError on invalid config.
SynthOutput generate_population(const SynthConfig& cfg);

struct TruthScore {
    std::uint64_t true_positive = 0;
    std::uint64_t false_positive = 0;
    std::uint64_t false_negative = 0;
};

// TP: emitted link agrees with truth. FP: link contradicts truth or
// attaches a patient outside it. FN: truth pair whose patient row has no
// link. When `external_ids` is given, truth targets are checked against
// it (fatal on unknown ids).
TruthScore score_against_truth(std::span<const LinkedRow> rows,
                               std::span<const std::pair<std::string, std::string>> truth,
                               const std::unordered_set<std::string>* external_ids = nullptr);

// Serialization of the truth map as two-column delimited text.
std::string serialize_truth(std::span<const std::pair<std::string, std::string>> truth);

}  // namespace reclink
