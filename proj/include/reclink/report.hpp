#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "reclink/link.hpp"
#include "reclink/profile.hpp"
#include "reclink/token.hpp"

namespace reclink {

// One validation row ready for presentation: stats joined with the rule
// text and the assigned category.
struct ValidationRow {
    int token_id = 0;
    std::string rule_text;
    ValidationStats stats;
    std::optional<Category> category;
};

// Human-readable fixed-width table renderers. `sig_figs` controls
// percentage precision. All renderers emit fully deterministic text.
std::string render_field_profiles(std::string_view dataset_label,
                                  std::span<const FieldProfile> profiles, int sig_figs);
std::string render_token_profiles(std::string_view dataset_label,
                                  std::span<const TokenProfile> profiles,
                                  std::span<const TokenRule> rules, int sig_figs);
std::string render_ssn_breakdown(std::string_view dataset_label,
                                 std::span<const SsnPatternCount> rows);
std::string render_status_tallies(std::string_view dataset_label,
                                  std::span<const StatusTally> tallies);
std::string render_validation_table(std::span<const ValidationRow> rows, int sig_figs);

// Machine-readable counterparts (stable key order).
nlohmann::ordered_json field_profiles_json(std::span<const FieldProfile> profiles, int sig_figs);
nlohmann::ordered_json token_profiles_json(std::span<const TokenProfile> profiles,
                                           std::span<const TokenRule> rules, int sig_figs);
nlohmann::ordered_json ssn_breakdown_json(std::span<const SsnPatternCount> rows);
nlohmann::ordered_json status_tallies_json(std::span<const StatusTally> tallies);
nlohmann::ordered_json validation_rows_json(std::span<const ValidationRow> rows, int sig_figs);

// Linked output in delimited form: record_id, dod_patient, dod_external,
// category, token_id, external_record_id. Nulls render as empty cells.
std::string serialize_linked_rows(std::span<const LinkedRow> rows);

// Creates parent directories as needed; throws FatalError on IO failure.
void write_file(const std::string& path, std::string_view content);
std::string read_file_bytes(const std::string& path);

}  // namespace reclink
