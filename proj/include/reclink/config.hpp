#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "reclink/ingest.hpp"
#include "reclink/link.hpp"
#include "reclink/normalize.hpp"
#include "reclink/synth.hpp"

namespace reclink {

// Delimited CSV with a header row naming every column after its role:
// record_id, first_name, middle_name, last_name, birth_date, death_date,
// ssn. The format cmd_synth emits and cleaned outputs use.
SourceLayout default_layout();

struct SourceSpec {
    std::string path;
    SourceLayout layout = default_layout();
};

struct RunConfig {
    std::optional<SourceSpec> patient;
    std::optional<SourceSpec> external;
    ValidityConfig validity;
    CategoryThresholds thresholds;
    ValidationMode validation_mode = ValidationMode::single_record;
    int date_tolerance_days = 0;
    std::optional<std::string> rules_path;
    std::string output_dir = "out";
    int report_sig_figs = 4;
    std::uint64_t max_row_errors = 0;
    unsigned threads = 1;
    bool approx_distinct = false;
    bool token_dump = false;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

SynthConfig parse_synth_config(const std::string& json_text);
SynthConfig load_synth_config(const std::string& path);

// The fixed historical profile: year ceiling 2022, no month/day checks.
void apply_strict_paper(ValidityConfig& validity);

// Effective-config echo for run summaries.
nlohmann::ordered_json run_config_json(const RunConfig& cfg);
nlohmann::ordered_json synth_config_json(const SynthConfig& cfg);

}  // namespace reclink
