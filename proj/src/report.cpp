#include "reclink/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace reclink {

namespace {

using nlohmann::ordered_json;

// Minimal fixed-width table: left-aligned first column, right-aligned
// numbers, two-space gutters.
class TextTable {
  public:
    explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    std::string render(std::string_view title) const {
        std::vector<std::size_t> widths(header_.size());
        for (std::size_t c = 0; c < header_.size(); ++c) widths[c] = header_[c].size();
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c)
                widths[c] = std::max(widths[c], row[c].size());
        }
        std::ostringstream out;
        out << title << '\n';
        auto emit = [&](const std::vector<std::string>& cells) {
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (c) out << "  ";
                if (c == 0) {
                    out << cells[c] << std::string(widths[c] - cells[c].size(), ' ');
                } else {
                    out << std::string(widths[c] - cells[c].size(), ' ') << cells[c];
                }
            }
            out << '\n';
        };
        emit(header_);
        std::size_t total = 0;
        for (std::size_t c = 0; c < header_.size(); ++c) total += widths[c] + (c ? 2 : 0);
        out << std::string(total, '-') << '\n';
        for (const auto& row : rows_) emit(row);
        return std::move(out).str();
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string opt_rate(std::optional<double> rate, int sig_figs) {
    if (!rate) return "-";
    return format_percent(*rate, sig_figs);
}

std::string category_cell(const std::optional<Category>& c) {
    return c ? std::string(category_name(*c)) : std::string("-");
}

}  // namespace

std::string render_field_profiles(std::string_view dataset_label,
                                  std::span<const FieldProfile> profiles, int sig_figs) {
    TextTable table({"field", "total", "complete", "complete%", "distinct", "invalid"});
    bool approx = false;
    for (const auto& p : profiles) {
        approx = approx || p.distinct_approximate;
        double pct = p.total_records ? double(p.complete) / double(p.total_records) : 0.0;
        table.add_row({std::string(field_name(p.field)), std::to_string(p.total_records),
                       std::to_string(p.complete), format_percent(pct, sig_figs),
                       std::to_string(p.distinct), std::to_string(p.invalid)});
    }
    std::string title = "field profile: " + std::string(dataset_label);
    if (approx) title += " (distinct counts approximate)";
    return table.render(title);
}

std::string render_token_profiles(std::string_view dataset_label,
                                  std::span<const TokenProfile> profiles,
                                  std::span<const TokenRule> rules, int sig_figs) {
    TextTable table({"token", "rule", "complete", "complete%", "distinct", "distinct%"});
    bool approx = false;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        approx = approx || p.distinct_approximate;
        table.add_row({std::to_string(p.token_id),
                       i < rules.size() ? rules[i].describe() : std::string("?"),
                       std::to_string(p.complete), format_percent(p.complete_pct(), sig_figs),
                       std::to_string(p.distinct), format_percent(p.distinct_pct(), sig_figs)});
    }
    std::string title = "token profile: " + std::string(dataset_label);
    if (approx) title += " (distinct counts approximate)";
    return table.render(title);
}

std::string render_ssn_breakdown(std::string_view dataset_label,
                                 std::span<const SsnPatternCount> rows) {
    TextTable table({"pattern", "count"});
    for (const auto& row : rows) table.add_row({row.pattern, std::to_string(row.count)});
    return table.render("invalid ssn patterns: " + std::string(dataset_label));
}

std::string render_status_tallies(std::string_view dataset_label,
                                  std::span<const StatusTally> tallies) {
    TextTable table({"field", "valid", "missing", "invalid"});
    for (std::size_t i = 0; i < tallies.size() && i < kFieldCount; ++i) {
        table.add_row({std::string(field_name(kAllFields[i])), std::to_string(tallies[i].valid),
                       std::to_string(tallies[i].missing), std::to_string(tallies[i].invalid)});
    }
    return table.render("field validity: " + std::string(dataset_label));
}

std::string render_validation_table(std::span<const ValidationRow> rows, int sig_figs) {
    TextTable table({"token", "rule", "one_to_one", "dod_match", "dod_nonmatch", "match_rate",
                     "category"});
    for (const auto& row : rows) {
        table.add_row({std::to_string(row.token_id), row.rule_text,
                       std::to_string(row.stats.one_to_one), std::to_string(row.stats.dod_match),
                       std::to_string(row.stats.dod_nonmatch),
                       opt_rate(row.stats.match_rate(), sig_figs), category_cell(row.category)});
    }
    return table.render("token validation (ranked)");
}

nlohmann::ordered_json field_profiles_json(std::span<const FieldProfile> profiles, int sig_figs) {
    ordered_json rows = ordered_json::array();
    for (const auto& p : profiles) {
        double pct = p.total_records ? double(p.complete) / double(p.total_records) : 0.0;
        rows.push_back(ordered_json{
            {"field", std::string(field_name(p.field))},
            {"total_records", p.total_records},
            {"complete", p.complete},
            {"complete_pct", format_percent(pct, sig_figs)},
            {"distinct", p.distinct},
            {"distinct_mode", p.distinct_approximate ? "approximate" : "exact"},
            {"invalid", p.invalid},
        });
    }
    return rows;
}

nlohmann::ordered_json token_profiles_json(std::span<const TokenProfile> profiles,
                                           std::span<const TokenRule> rules, int sig_figs) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        rows.push_back(ordered_json{
            {"token_id", p.token_id},
            {"rule", i < rules.size() ? rules[i].describe() : "?"},
            {"total_records", p.total_records},
            {"complete", p.complete},
            {"complete_pct", format_percent(p.complete_pct(), sig_figs)},
            {"distinct", p.distinct},
            {"distinct_pct", format_percent(p.distinct_pct(), sig_figs)},
            {"distinct_mode", p.distinct_approximate ? "approximate" : "exact"},
        });
    }
    return rows;
}

nlohmann::ordered_json ssn_breakdown_json(std::span<const SsnPatternCount> rows) {
    ordered_json out = ordered_json::array();
    for (const auto& row : rows)
        out.push_back(ordered_json{{"pattern", row.pattern}, {"count", row.count}});
    return out;
}

nlohmann::ordered_json status_tallies_json(std::span<const StatusTally> tallies) {
    ordered_json out = ordered_json::array();
    for (std::size_t i = 0; i < tallies.size() && i < kFieldCount; ++i) {
        out.push_back(ordered_json{
            {"field", std::string(field_name(kAllFields[i]))},
            {"valid", tallies[i].valid},
            {"missing", tallies[i].missing},
            {"invalid", tallies[i].invalid},
        });
    }
    return out;
}

nlohmann::ordered_json validation_rows_json(std::span<const ValidationRow> rows, int sig_figs) {
    ordered_json out = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json j{
            {"token_id", row.token_id},
            {"rule", row.rule_text},
            {"one_to_one", row.stats.one_to_one},
            {"dod_match", row.stats.dod_match},
            {"dod_nonmatch", row.stats.dod_nonmatch},
        };
        auto rate = row.stats.match_rate();
        j["match_rate"] = rate ? ordered_json(format_percent(*rate, sig_figs)) : ordered_json();
        j["category"] = row.category ? ordered_json(std::string(category_name(*row.category)))
                                     : ordered_json();
        out.push_back(std::move(j));
    }
    return out;
}

std::string serialize_linked_rows(std::span<const LinkedRow> rows) {
    std::string out = "record_id,dod_patient,dod_external,category,token_id,external_record_id\n";
    for (const auto& row : rows) {
        out += row.record_id;
        out += ',';
        if (row.dod_patient) out += *row.dod_patient;
        out += ',';
        if (row.dod_external) out += *row.dod_external;
        out += ',';
        if (row.category) out += category_name(*row.category);
        out += ',';
        if (row.token_id) out += std::to_string(*row.token_id);
        out += ',';
        if (row.external_record_id) out += *row.external_record_id;
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, std::string_view content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw FatalError("cannot create directory " + p.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FatalError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw FatalError("write failed: " + path);
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FatalError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

}  // namespace reclink
