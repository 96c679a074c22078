#include "reclink/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "reclink/report.hpp"

namespace reclink {

namespace {

using nlohmann::ordered_json;

std::string fingerprint_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a64(bytes));
    return buf;
}

struct LoadedSource {
    std::string label;
    std::string path;
    std::string fingerprint;
    IngestResult ingest;
    std::vector<CleanRecord> clean;
};

LoadedSource load_source(const SourceSpec& spec, DatasetRole role, const char* label,
                         const ValidityConfig& validity, unsigned threads) {
    validate_layout(spec.layout, role);
    LoadedSource src;
    src.label = label;
    src.path = spec.path;
    std::string bytes = read_file_bytes(spec.path);
    src.fingerprint = fingerprint_hex(bytes);
    try {
        src.ingest = parse_source(spec.layout, decode_bytes(spec.layout, std::move(bytes)));
    } catch (const FatalError& e) {
        throw FatalError(std::string(label) + " source " + spec.path + ": " + e.what());
    }
    src.clean = clean_dataset(src.ingest.records, validity, threads);
    return src;
}

ordered_json input_json(const LoadedSource& src) {
    return ordered_json{
        {"path", src.path},
        {"fnv1a64", src.fingerprint},
        {"rows_read", src.ingest.rows_read},
        {"records", src.ingest.records.size()},
        {"row_errors", src.ingest.errors.size()},
    };
}

void write_summary(const RunConfig& cfg, const char* command, ordered_json inputs,
                   ordered_json results) {
    ordered_json summary{
        {"command", command},
        {"inputs", std::move(inputs)},
        {"config", run_config_json(cfg)},
        {"results", std::move(results)},
    };
    write_file(cfg.output_dir + "/run_summary.json", summary.dump(2) + "\n");
}

// Writes row_errors.txt when any source had bad rows, then maps the
// total against the configured ceiling: above it -> exit 2.
int error_exit_code(const RunConfig& cfg, const std::vector<LoadedSource>& sources) {
    std::uint64_t total = 0;
    std::string detail;
    for (const auto& src : sources) {
        total += src.ingest.errors.size();
        for (const auto& err : src.ingest.errors) {
            detail += src.label;
            detail += " line ";
            detail += std::to_string(err.line);
            detail += ": ";
            detail += err.message;
            detail += '\n';
        }
    }
    if (!detail.empty()) write_file(cfg.output_dir + "/row_errors.txt", detail);
    return total > cfg.max_row_errors ? 2 : 0;
}

std::vector<RawRecord> clean_to_raw(std::span<const CleanRecord> cleans) {
    std::vector<RawRecord> out;
    out.reserve(cleans.size());
    for (const auto& c : cleans) {
        RawRecord r;
        r.record_id = c.record_id;
        r.fields = c.fields;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TokenRule> effective_rules(const RunConfig& cfg) {
    if (cfg.rules_path) return load_rules_file(*cfg.rules_path);
    return builtin_rules();
}

std::string token_dump_text(std::span<const TokenSet> sets, std::span<const TokenRule> rules) {
    std::ostringstream out;
    write_token_dump(out, sets, rules);
    return std::move(out).str();
}

}  // namespace

int cmd_normalize(const RunConfig& cfg) {
    if (!cfg.patient && !cfg.external)
        throw FatalError("normalize needs a patient and/or external source");
    std::vector<LoadedSource> sources;
    if (cfg.patient)
        sources.push_back(
            load_source(*cfg.patient, DatasetRole::patient, "patient", cfg.validity, cfg.threads));
    if (cfg.external)
        sources.push_back(load_source(*cfg.external, DatasetRole::death_master, "external",
                                      cfg.validity, cfg.threads));

    std::string text;
    ordered_json inputs, results;
    for (const auto& src : sources) {
        auto tallies = tally_statuses(src.clean);
        auto profiles = profile_all_fields(src.ingest.records, src.clean, cfg.approx_distinct);
        auto breakdown = invalid_ssn_breakdown(src.ingest.records, src.clean, cfg.validity);

        text += render_status_tallies(src.label, tallies);
        text += '\n';
        text += render_field_profiles(src.label, profiles, cfg.report_sig_figs);
        text += '\n';
        text += render_ssn_breakdown(src.label, breakdown);
        text += '\n';

        inputs[src.label] = input_json(src);
        results[src.label] = ordered_json{
            {"field_validity", status_tallies_json(tallies)},
            {"field_profiles", field_profiles_json(profiles, cfg.report_sig_figs)},
            {"invalid_ssn_patterns", ssn_breakdown_json(breakdown)},
        };

        write_file(cfg.output_dir + "/cleaned_" + src.label + ".csv",
                   serialize_records(default_layout(), clean_to_raw(src.clean)));
    }
    write_file(cfg.output_dir + "/normalize_report.txt", text);
    write_file(cfg.output_dir + "/normalize_report.json", results.dump(2) + "\n");
    write_summary(cfg, "normalize", std::move(inputs),
                  ordered_json{{"report", "normalize_report.json"}});
    return error_exit_code(cfg, sources);
}

int cmd_profile(const RunConfig& cfg) {
    if (!cfg.patient && !cfg.external)
        throw FatalError("profile needs a patient and/or external source");
    auto rules = effective_rules(cfg);
    std::vector<LoadedSource> sources;
    if (cfg.patient)
        sources.push_back(
            load_source(*cfg.patient, DatasetRole::patient, "patient", cfg.validity, cfg.threads));
    if (cfg.external)
        sources.push_back(load_source(*cfg.external, DatasetRole::death_master, "external",
                                      cfg.validity, cfg.threads));

    std::string text;
    ordered_json inputs, results;
    for (const auto& src : sources) {
        auto tokens = generate_dataset(src.clean, rules, cfg.threads);
        auto field_profiles = profile_all_fields(src.ingest.records, src.clean, cfg.approx_distinct);
        auto token_profiles = profile_all_tokens(tokens, rules, cfg.approx_distinct);
        auto breakdown = invalid_ssn_breakdown(src.ingest.records, src.clean, cfg.validity);

        text += render_field_profiles(src.label, field_profiles, cfg.report_sig_figs);
        text += '\n';
        text += render_token_profiles(src.label, token_profiles, rules, cfg.report_sig_figs);
        text += '\n';
        text += render_ssn_breakdown(src.label, breakdown);
        text += '\n';

        inputs[src.label] = input_json(src);
        results[src.label] = ordered_json{
            {"field_profiles", field_profiles_json(field_profiles, cfg.report_sig_figs)},
            {"token_profiles", token_profiles_json(token_profiles, rules, cfg.report_sig_figs)},
            {"invalid_ssn_patterns", ssn_breakdown_json(breakdown)},
        };

        if (cfg.token_dump)
            write_file(cfg.output_dir + "/tokens_" + src.label + ".tsv",
                       token_dump_text(tokens, rules));
    }
    write_file(cfg.output_dir + "/profile_report.txt", text);
    write_file(cfg.output_dir + "/profile_report.json", results.dump(2) + "\n");
    write_summary(cfg, "profile", std::move(inputs),
                  ordered_json{{"report", "profile_report.json"}});
    return error_exit_code(cfg, sources);
}

int cmd_link(const RunConfig& cfg) {
    if (!cfg.patient || !cfg.external)
        throw FatalError("link needs both a patient and an external source");
    auto rules = effective_rules(cfg);
    std::vector<LoadedSource> sources;
    sources.push_back(
        load_source(*cfg.patient, DatasetRole::patient, "patient", cfg.validity, cfg.threads));
    sources.push_back(load_source(*cfg.external, DatasetRole::death_master, "external",
                                  cfg.validity, cfg.threads));
    const LoadedSource& patient = sources[0];
    const LoadedSource& external = sources[1];

    auto patient_tokens = generate_dataset(patient.clean, rules, cfg.threads);
    auto external_tokens = generate_dataset(external.clean, rules, cfg.threads);

    std::vector<std::size_t> validation_subset;
    for (std::size_t i = 0; i < patient.clean.size(); ++i) {
        if (patient.clean[i].status_of(Field::death_date) == FieldStatus::valid)
            validation_subset.push_back(i);
    }

    std::vector<ValidationStats> stats(rules.size());
    parallel_chunks(rules.size(), cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t pos = begin; pos < end; ++pos) {
            TokenIndex index = build_index(external_tokens, pos, rules[pos].id);
            stats[pos] = validate_token(rules[pos].id, pos, patient.clean, patient_tokens,
                                        validation_subset, external.clean, index,
                                        cfg.validation_mode, cfg.date_tolerance_days);
        }
    });

    auto ranked = ranked_tokens_with_categories(stats, cfg.thresholds);
    auto linked = link_deaths(patient.clean, patient_tokens, external.clean, external_tokens,
                              rules, ranked, cfg.threads);

    // Validation rows in rank order, then undefined-rate tokens by id.
    std::vector<ValidationRow> rows;
    std::unordered_map<int, const ValidationStats*> stats_by_id;
    std::unordered_map<int, const TokenRule*> rules_by_id;
    for (std::size_t pos = 0; pos < rules.size(); ++pos) {
        stats_by_id[rules[pos].id] = &stats[pos];
        rules_by_id[rules[pos].id] = &rules[pos];
    }
    for (const auto& rt : ranked)
        rows.push_back({rt.token_id, rules_by_id[rt.token_id]->describe(),
                        *stats_by_id[rt.token_id], rt.category});
    std::vector<int> undefined_ids;
    for (const auto& s : stats) {
        if (!s.match_rate()) undefined_ids.push_back(s.token_id);
    }
    std::sort(undefined_ids.begin(), undefined_ids.end());
    for (int id : undefined_ids)
        rows.push_back({id, rules_by_id[id]->describe(), *stats_by_id[id], std::nullopt});

    std::uint64_t linked_count = 0;
    std::array<std::uint64_t, 3> by_category{};
    for (const auto& row : linked) {
        if (!row.token_id) continue;
        ++linked_count;
        ++by_category[static_cast<int>(*row.category) - 1];
    }

    ordered_json inputs{{"patient", input_json(patient)}, {"external", input_json(external)}};
    ordered_json ranked_json = ordered_json::array();
    for (const auto& rt : ranked)
        ranked_json.push_back(ordered_json{{"token_id", rt.token_id},
                                           {"category", std::string(category_name(rt.category))}});
    ordered_json results{
        {"patients", patient.clean.size()},
        {"external_records", external.clean.size()},
        {"validation_subset", validation_subset.size()},
        {"ranked_tokens", std::move(ranked_json)},
        {"linked", linked_count},
        {"linked_by_category",
         ordered_json{{"1", by_category[0]}, {"2", by_category[1]}, {"3", by_category[2]}}},
        {"validation", validation_rows_json(rows, cfg.report_sig_figs)},
    };

    if (cfg.token_dump) {
        write_file(cfg.output_dir + "/tokens_patient.tsv", token_dump_text(patient_tokens, rules));
        write_file(cfg.output_dir + "/tokens_external.tsv",
                   token_dump_text(external_tokens, rules));
    }
    write_file(cfg.output_dir + "/validation_report.txt",
               render_validation_table(rows, cfg.report_sig_figs));
    write_file(cfg.output_dir + "/validation_report.json",
               validation_rows_json(rows, cfg.report_sig_figs).dump(2) + "\n");
    write_file(cfg.output_dir + "/linked_output.csv", serialize_linked_rows(linked));
    write_summary(cfg, "link", std::move(inputs), std::move(results));
    return error_exit_code(cfg, sources);
}

int cmd_synth(const SynthConfig& cfg, const std::string& output_dir) {
    SynthOutput out = generate_population(cfg);
    std::string patients_csv = serialize_records(default_layout(), out.patients);
    std::string external_csv = serialize_records(default_layout(), out.external);
    std::string truth_csv = serialize_truth(out.truth);

    write_file(output_dir + "/patients.csv", patients_csv);
    write_file(output_dir + "/external.csv", external_csv);
    write_file(output_dir + "/truth.csv", truth_csv);

    ordered_json summary{
        {"command", "synth"},
        {"config", synth_config_json(cfg)},
        {"outputs",
         ordered_json{
             {"patients", ordered_json{{"path", output_dir + "/patients.csv"},
                                       {"records", out.patients.size()},
                                       {"fnv1a64", fingerprint_hex(patients_csv)}}},
             {"external", ordered_json{{"path", output_dir + "/external.csv"},
                                       {"records", out.external.size()},
                                       {"fnv1a64", fingerprint_hex(external_csv)}}},
             {"truth", ordered_json{{"path", output_dir + "/truth.csv"},
                                    {"pairs", out.truth.size()},
                                    {"fnv1a64", fingerprint_hex(truth_csv)}}},
         }},
    };
    write_file(output_dir + "/run_summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_merge(const RunConfig& cfg, const std::string& existing_path,
              const std::string& update_path) {
    SourceLayout layout = cfg.external ? cfg.external->layout : default_layout();
    validate_layout(layout, DatasetRole::death_master);

    SourceSpec existing_spec{existing_path, layout};
    SourceSpec update_spec{update_path, layout};
    std::vector<LoadedSource> sources;
    sources.push_back(load_source(existing_spec, DatasetRole::death_master, "existing",
                                  cfg.validity, cfg.threads));
    sources.push_back(
        load_source(update_spec, DatasetRole::death_master, "update", cfg.validity, cfg.threads));

    MergeResult merged = merge_monthly_update(sources[0].ingest.records, sources[1].ingest.records);
    write_file(cfg.output_dir + "/merged.csv", serialize_records(layout, merged.records));

    std::string notes;
    for (const auto& w : merged.warnings) notes += w + '\n';
    for (const auto& r : merged.rejected)
        notes += "rejected row " + std::to_string(r.line) + ": " + r.message + '\n';
    if (!notes.empty()) write_file(cfg.output_dir + "/merge_notes.txt", notes);

    std::uint64_t replaced = sources[0].ingest.records.size() + sources[1].ingest.records.size() -
                             merged.rejected.size() - merged.records.size();
    ordered_json inputs{{"existing", input_json(sources[0])}, {"update", input_json(sources[1])}};
    ordered_json results{
        {"merged_records", merged.records.size()},
        {"replaced", replaced},
        {"rejected", merged.rejected.size()},
        {"duplicate_key_warnings", merged.warnings.size()},
    };
    write_summary(cfg, "merge", std::move(inputs), std::move(results));

    std::uint64_t row_errors =
        sources[0].ingest.errors.size() + sources[1].ingest.errors.size() + merged.rejected.size();
    if (error_exit_code(cfg, sources) != 0 || row_errors > cfg.max_row_errors) return 2;
    return 0;
}

}  // namespace reclink
