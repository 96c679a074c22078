#include "reclink/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace reclink {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw FatalError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FatalError(std::string("cannot open ") + what + ": " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known,
                         const char* where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw FatalError(std::string("unknown key \"") + key + "\" in " + where);
    }
}

ColumnRef parse_column_ref(const json& j, const std::string& name) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_object()) {
        reject_unknown_keys(j, {"start", "length"}, "column span");
        if (!j.contains("start") || !j.contains("length") || !j["start"].is_number_unsigned() ||
            !j["length"].is_number_unsigned())
            throw FatalError("column \"" + name + "\": span needs unsigned start and length");
        return FixedSpan{j["start"].get<std::size_t>(), j["length"].get<std::size_t>()};
    }
    throw FatalError("column \"" + name + "\" must be a header name, index, or {start,length}");
}

SourceLayout parse_layout(const json& j) {
    reject_unknown_keys(j, {"format", "delimiter", "has_header", "encoding", "columns"}, "layout");
    SourceLayout layout;
    if (j.contains("format")) {
        std::string f = j["format"].get<std::string>();
        if (f == "delimited") {
            layout.format = SourceFormat::delimited;
        } else if (f == "fixed_width") {
            layout.format = SourceFormat::fixed_width;
        } else {
            throw FatalError("layout format must be \"delimited\" or \"fixed_width\"");
        }
    }
    if (j.contains("delimiter")) {
        std::string d = j["delimiter"].get<std::string>();
        if (d.size() != 1) throw FatalError("delimiter must be a single character");
        layout.delimiter = d[0];
    }
    if (j.contains("has_header")) layout.has_header = j["has_header"].get<bool>();
    if (j.contains("encoding")) layout.encoding = j["encoding"].get<std::string>();
    if (!j.contains("columns") || !j["columns"].is_object())
        throw FatalError("layout needs a \"columns\" object");
    for (const auto& [name, ref] : j["columns"].items()) {
        if (name == "record_id") {
            layout.record_id = parse_column_ref(ref, name);
        } else {
            auto field = field_from_name(name);
            if (!field) throw FatalError("unknown layout column: " + name);
            layout.column(*field) = parse_column_ref(ref, name);
        }
    }
    return layout;
}

SourceSpec parse_source_spec(const json& j, const char* which) {
    reject_unknown_keys(j, {"path", "layout"}, which);
    if (!j.contains("path") || !j["path"].is_string())
        throw FatalError(std::string(which) + " needs a \"path\" string");
    SourceSpec spec;
    spec.path = j["path"].get<std::string>();
    if (j.contains("layout")) spec.layout = parse_layout(j["layout"]);
    return spec;
}

void parse_validity(const json& j, ValidityConfig& v) {
    reject_unknown_keys(
        j, {"min_year", "max_year", "check_month_day", "diacritics", "ssn_denylist_extra"},
        "validity");
    if (j.contains("min_year")) v.min_year = j["min_year"].get<int>();
    if (j.contains("max_year")) v.max_year = j["max_year"].get<int>();
    if (j.contains("check_month_day")) v.check_month_day = j["check_month_day"].get<bool>();
    if (j.contains("diacritics")) {
        std::string d = j["diacritics"].get<std::string>();
        if (d == "fold") {
            v.diacritics = DiacriticMode::fold;
        } else if (d == "erase") {
            v.diacritics = DiacriticMode::erase;
        } else {
            throw FatalError("diacritics must be \"fold\" or \"erase\"");
        }
    }
    if (j.contains("ssn_denylist_extra")) {
        for (const auto& entry : j["ssn_denylist_extra"]) {
            std::string s = entry.get<std::string>();
            if (s.size() != 9 || s.find_first_not_of("0123456789") != std::string::npos)
                throw FatalError("ssn_denylist_extra entries must be 9 digits: " + s);
            v.ssn_denylist.insert(s);
        }
    }
    if (v.min_year >= v.max_year) throw FatalError("validity: min_year must be below max_year");
}

}  // namespace

SourceLayout default_layout() {
    SourceLayout layout;
    layout.format = SourceFormat::delimited;
    layout.delimiter = ',';
    layout.has_header = true;
    layout.record_id = std::string("record_id");
    for (Field f : kAllFields) layout.column(f) = std::string(field_name(f));
    return layout;
}

RunConfig parse_run_config(const std::string& json_text) {
    json j = parse_json(json_text, "run config");
    if (!j.is_object()) throw FatalError("run config must be a JSON object");
    reject_unknown_keys(j,
                        {"patient", "external", "validity", "thresholds", "validation_mode",
                         "date_tolerance_days", "rules_path", "output_dir", "report_sig_figs",
                         "max_row_errors", "threads", "approx_distinct", "token_dump"},
                        "run config");
    RunConfig cfg;
    if (j.contains("patient")) cfg.patient = parse_source_spec(j["patient"], "patient");
    if (j.contains("external")) cfg.external = parse_source_spec(j["external"], "external");
    if (j.contains("validity")) parse_validity(j["validity"], cfg.validity);
    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        reject_unknown_keys(t, {"category1_above", "category2_min"}, "thresholds");
        if (t.contains("category1_above"))
            cfg.thresholds.category1_exclusive_min = t["category1_above"].get<double>();
        if (t.contains("category2_min"))
            cfg.thresholds.category2_inclusive_min = t["category2_min"].get<double>();
        auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!in_unit(cfg.thresholds.category1_exclusive_min) ||
            !in_unit(cfg.thresholds.category2_inclusive_min))
            throw FatalError("thresholds: match-rate bounds must lie in [0, 1]");
        if (!(cfg.thresholds.category2_inclusive_min <= cfg.thresholds.category1_exclusive_min))
            throw FatalError("thresholds: category2_min must not exceed category1_above");
    }
    if (j.contains("validation_mode")) {
        std::string m = j["validation_mode"].get<std::string>();
        if (m == "single_record") {
            cfg.validation_mode = ValidationMode::single_record;
        } else if (m == "unique_dod") {
            cfg.validation_mode = ValidationMode::unique_dod;
        } else {
            throw FatalError("validation_mode must be \"single_record\" or \"unique_dod\"");
        }
    }
    if (j.contains("date_tolerance_days")) {
        cfg.date_tolerance_days = j["date_tolerance_days"].get<int>();
        if (cfg.date_tolerance_days < 0) throw FatalError("date_tolerance_days must be >= 0");
    }
    if (j.contains("rules_path")) cfg.rules_path = j["rules_path"].get<std::string>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("report_sig_figs")) {
        cfg.report_sig_figs = j["report_sig_figs"].get<int>();
        if (cfg.report_sig_figs < 1 || cfg.report_sig_figs > 17)
            throw FatalError("report_sig_figs must be in 1..17");
    }
    if (j.contains("max_row_errors")) cfg.max_row_errors = j["max_row_errors"].get<std::uint64_t>();
    if (j.contains("threads")) {
        cfg.threads = j["threads"].get<unsigned>();
        if (cfg.threads < 1) throw FatalError("threads must be >= 1");
    }
    if (j.contains("approx_distinct")) cfg.approx_distinct = j["approx_distinct"].get<bool>();
    if (j.contains("token_dump")) cfg.token_dump = j["token_dump"].get<bool>();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_file(path, "run config"));
}

SynthConfig parse_synth_config(const std::string& json_text) {
    json j = parse_json(json_text, "synth config");
    if (!j.is_object()) throw FatalError("synth config must be a JSON object");
    reject_unknown_keys(j, {"n_persons", "overlap_fraction", "seed", "dod_coverage", "errors"},
                        "synth config");
    SynthConfig cfg;
    if (!j.contains("n_persons")) throw FatalError("synth config needs n_persons");
    cfg.n_persons = j["n_persons"].get<std::uint64_t>();
    if (j.contains("overlap_fraction")) cfg.overlap_fraction = j["overlap_fraction"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("dod_coverage")) cfg.dod_coverage = j["dod_coverage"].get<double>();
    if (j.contains("errors")) {
        for (const auto& [name, rates] : j["errors"].items()) {
            auto f = field_from_name(name);
            if (!f) throw FatalError("unknown field in synth error rates: " + name);
            reject_unknown_keys(rates, {"null", "invalid_ssn", "typo", "transpose", "date_swap"},
                                "error rates");
            FieldErrorRates& r = cfg.rates(*f);
            if (rates.contains("null")) r.null_rate = rates["null"].get<double>();
            if (rates.contains("invalid_ssn")) r.invalid_ssn = rates["invalid_ssn"].get<double>();
            if (rates.contains("typo")) r.typo = rates["typo"].get<double>();
            if (rates.contains("transpose")) r.transpose = rates["transpose"].get<double>();
            if (rates.contains("date_swap")) r.date_swap = rates["date_swap"].get<double>();
        }
    }
    return cfg;
}

SynthConfig load_synth_config(const std::string& path) {
    return parse_synth_config(read_file(path, "synth config"));
}

void apply_strict_paper(ValidityConfig& validity) {
    validity.max_year = 2022;
    validity.check_month_day = false;
}

namespace {

ordered_json column_ref_json(const ColumnRef& ref) {
    if (auto* name = std::get_if<std::string>(&ref)) return *name;
    if (auto* idx = std::get_if<std::size_t>(&ref)) return *idx;
    const auto& span = std::get<FixedSpan>(ref);
    return ordered_json{{"start", span.start}, {"length", span.length}};
}

ordered_json layout_json(const SourceLayout& layout) {
    ordered_json columns;
    if (layout.record_id) columns["record_id"] = column_ref_json(*layout.record_id);
    for (Field f : kAllFields) {
        if (layout.column(f)) columns[std::string(field_name(f))] = column_ref_json(*layout.column(f));
    }
    return ordered_json{
        {"format", layout.format == SourceFormat::delimited ? "delimited" : "fixed_width"},
        {"delimiter", std::string(1, layout.delimiter)},
        {"has_header", layout.has_header},
        {"encoding", layout.encoding},
        {"columns", columns},
    };
}

ordered_json source_spec_json(const SourceSpec& spec) {
    return ordered_json{{"path", spec.path}, {"layout", layout_json(spec.layout)}};
}

ordered_json validity_json(const ValidityConfig& v) {
    std::vector<std::string> denylist(v.ssn_denylist.begin(), v.ssn_denylist.end());
    std::sort(denylist.begin(), denylist.end());
    return ordered_json{
        {"min_year", v.min_year},
        {"max_year", v.max_year},
        {"check_month_day", v.check_month_day},
        {"diacritics", v.diacritics == DiacriticMode::fold ? "fold" : "erase"},
        {"ssn_denylist", denylist},
    };
}

}  // namespace

ordered_json run_config_json(const RunConfig& cfg) {
    ordered_json j;
    if (cfg.patient) j["patient"] = source_spec_json(*cfg.patient);
    if (cfg.external) j["external"] = source_spec_json(*cfg.external);
    j["validity"] = validity_json(cfg.validity);
    j["thresholds"] = ordered_json{{"category1_above", cfg.thresholds.category1_exclusive_min},
                                   {"category2_min", cfg.thresholds.category2_inclusive_min}};
    j["validation_mode"] = std::string(to_string(cfg.validation_mode));
    j["date_tolerance_days"] = cfg.date_tolerance_days;
    if (cfg.rules_path) j["rules_path"] = *cfg.rules_path;
    j["output_dir"] = cfg.output_dir;
    j["report_sig_figs"] = cfg.report_sig_figs;
    j["max_row_errors"] = cfg.max_row_errors;
    j["threads"] = cfg.threads;
    j["approx_distinct"] = cfg.approx_distinct;
    j["token_dump"] = cfg.token_dump;
    return j;
}

ordered_json synth_config_json(const SynthConfig& cfg) {
    ordered_json errors;
    for (Field f : kAllFields) {
        const FieldErrorRates& r = cfg.rates(f);
        errors[std::string(field_name(f))] = ordered_json{
            {"null", r.null_rate},          {"invalid_ssn", r.invalid_ssn}, {"typo", r.typo},
            {"transpose", r.transpose},     {"date_swap", r.date_swap},
        };
    }
    return ordered_json{
        {"n_persons", cfg.n_persons},   {"overlap_fraction", cfg.overlap_fraction},
        {"seed", cfg.seed},             {"dod_coverage", cfg.dod_coverage},
        {"errors", errors},
    };
}

}  // namespace reclink
