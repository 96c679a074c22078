#include "reclink/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "reclink/utf8.hpp"

namespace reclink {

namespace {

const char* role_name(DatasetRole role) {
    return role == DatasetRole::patient ? "patient" : "death_master";
}

std::string column_ref_str(const ColumnRef& ref) {
    if (auto* name = std::get_if<std::string>(&ref)) return *name;
    if (auto* idx = std::get_if<std::size_t>(&ref)) return "#" + std::to_string(*idx);
    const auto& span = std::get<FixedSpan>(ref);
    return "[" + std::to_string(span.start) + "+" + std::to_string(span.length) + ")";
}

std::string strip_non_digits(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c >= '0' && c <= '9') out.push_back(c);
    }
    return out;
}

}  // namespace

void validate_layout(const SourceLayout& layout, DatasetRole role) {
    std::vector<std::pair<std::string, const ColumnRef*>> refs;
    if (layout.record_id) refs.emplace_back("record_id", &*layout.record_id);
    for (Field f : kAllFields) {
        if (layout.column(f)) refs.emplace_back(std::string(field_name(f)), &*layout.column(f));
    }
    if (refs.empty()) throw FatalError("layout maps no columns");

    if (role == DatasetRole::patient && !layout.record_id)
        throw FatalError("patient layout requires a record_id column");
    if (role == DatasetRole::death_master && !layout.column(Field::ssn))
        throw FatalError("death_master layout requires an ssn column");

    for (const auto& [name, ref] : refs) {
        bool is_span = std::holds_alternative<FixedSpan>(*ref);
        if (layout.format == SourceFormat::fixed_width && !is_span)
            throw FatalError("fixed_width layout: column " + name + " must be a byte span");
        if (layout.format == SourceFormat::delimited && is_span)
            throw FatalError("delimited layout: column " + name + " must be a name or index");
        if (layout.format == SourceFormat::delimited && layout.has_header &&
            !std::holds_alternative<std::string>(*ref))
            throw FatalError("delimited layout with header: column " + name + " must be a header name");
        if (layout.format == SourceFormat::delimited && !layout.has_header &&
            std::holds_alternative<std::string>(*ref))
            throw FatalError("headerless delimited layout: column " + name +
                             " must be a zero-based index");
        if (is_span && std::get<FixedSpan>(*ref).length < 1)
            throw FatalError("fixed_width span for " + name + " must have length >= 1");
    }

    // Each role at most once, and no two roles sharing a column.
    for (std::size_t i = 0; i < refs.size(); ++i) {
        for (std::size_t j = i + 1; j < refs.size(); ++j) {
            if (*refs[i].second == *refs[j].second)
                throw FatalError("layout maps " + refs[i].first + " and " + refs[j].first +
                                 " to the same column " + column_ref_str(*refs[i].second));
        }
    }

    if (layout.format == SourceFormat::fixed_width) {
        std::vector<FixedSpan> spans;
        for (const auto& [name, ref] : refs) spans.push_back(std::get<FixedSpan>(*ref));
        std::sort(spans.begin(), spans.end(),
                  [](const FixedSpan& a, const FixedSpan& b) { return a.start < b.start; });
        for (std::size_t i = 1; i < spans.size(); ++i) {
            if (spans[i].start < spans[i - 1].end())
                throw FatalError("fixed_width spans overlap");
        }
    }
}

namespace {

// Line splitter that tolerates \n and \r\n, ignoring a trailing empty
// segment after the final newline.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        std::string_view line;
        if (pos == std::string_view::npos) {
            line = text.substr(start);
            start = text.size() + 1;
            if (line.empty()) break;
        } else {
            line = text.substr(start, pos - start);
            start = pos + 1;
        }
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
    }
    return lines;
}

struct DelimitedPlan {
    std::optional<std::size_t> record_id;
    std::array<std::optional<std::size_t>, kFieldCount> fields;
    std::size_t min_columns = 0;          // smallest usable row width
    std::optional<std::size_t> exact_columns;  // enforced when header present
};

DelimitedPlan plan_delimited(const SourceLayout& layout, std::string_view header_line) {
    DelimitedPlan plan;
    std::unordered_map<std::string, std::size_t> by_name;
    if (layout.has_header) {
        auto cells = split_view(header_line, layout.delimiter);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::string name(trim_view(cells[i]));
            auto [it, inserted] = by_name.emplace(name, i);
            if (!inserted) throw FatalError("header name '" + name + "' appears twice");
        }
        plan.exact_columns = cells.size();
    }
    auto resolve = [&](const ColumnRef& ref, const std::string& what) -> std::size_t {
        if (auto* idx = std::get_if<std::size_t>(&ref)) return *idx;
        const auto& name = std::get<std::string>(ref);
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw FatalError("header does not contain column '" + name + "' (needed for " + what + ")");
        return it->second;
    };
    if (layout.record_id) plan.record_id = resolve(*layout.record_id, "record_id");
    for (Field f : kAllFields) {
        if (layout.column(f))
            plan.fields[field_index(f)] = resolve(*layout.column(f), std::string(field_name(f)));
    }
    std::size_t max_idx = 0;
    if (plan.record_id) max_idx = std::max(max_idx, *plan.record_id);
    for (auto& idx : plan.fields) {
        if (idx) max_idx = std::max(max_idx, *idx);
    }
    plan.min_columns = max_idx + 1;
    return plan;
}

std::optional<std::string> cell_value(std::string_view cell) {
    if (is_blank(cell)) return std::nullopt;
    return std::string(cell);
}

}  // namespace

IngestResult parse_source(const SourceLayout& layout, std::string_view text) {
    IngestResult result;
    auto lines = split_lines(text);
    if (lines.empty()) return result;

    std::size_t first_data = 0;
    std::optional<DelimitedPlan> plan;
    if (layout.format == SourceFormat::delimited) {
        plan = plan_delimited(layout, layout.has_header ? lines[0] : std::string_view{});
        if (layout.has_header) first_data = 1;
    } else if (layout.has_header) {
        first_data = 1;
    }

    std::size_t max_span_end = 0;
    if (layout.format == SourceFormat::fixed_width) {
        if (layout.record_id)
            max_span_end = std::max(max_span_end, std::get<FixedSpan>(*layout.record_id).end());
        for (Field f : kAllFields) {
            if (layout.column(f))
                max_span_end = std::max(max_span_end, std::get<FixedSpan>(*layout.column(f)).end());
        }
    }

    std::unordered_set<std::string> seen_ids;
    result.records.reserve(lines.size() - first_data);

    for (std::size_t i = first_data; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (is_blank(line)) continue;
        std::size_t line_no = i + 1;
        ++result.rows_read;
        RawRecord rec;

        if (layout.format == SourceFormat::delimited) {
            auto cells = split_view(line, layout.delimiter);
            if (plan->exact_columns && cells.size() != *plan->exact_columns) {
                result.errors.push_back({line_no, "expected " + std::to_string(*plan->exact_columns) +
                                                      " fields, got " + std::to_string(cells.size())});
                continue;
            }
            if (cells.size() < plan->min_columns) {
                result.errors.push_back({line_no, "row has " + std::to_string(cells.size()) +
                                                      " fields, layout needs " +
                                                      std::to_string(plan->min_columns)});
                continue;
            }
            if (plan->record_id) {
                auto id = cell_value(cells[*plan->record_id]);
                if (!id) {
                    result.errors.push_back({line_no, "empty record_id"});
                    continue;
                }
                rec.record_id = std::string(trim_view(*id));
            }
            for (Field f : kAllFields) {
                if (auto idx = plan->fields[field_index(f)]) rec.field(f) = cell_value(cells[*idx]);
            }
        } else {
            if (line.size() < max_span_end) {
                result.errors.push_back({line_no, "line shorter than layout (" +
                                                      std::to_string(line.size()) + " < " +
                                                      std::to_string(max_span_end) + " bytes)"});
                continue;
            }
            auto slice = [&](const ColumnRef& ref) -> std::optional<std::string> {
                const auto& span = std::get<FixedSpan>(ref);
                std::string_view v = trim_view(line.substr(span.start, span.length));
                if (v.empty()) return std::nullopt;
                return std::string(v);
            };
            if (layout.record_id) {
                auto id = slice(*layout.record_id);
                if (!id) {
                    result.errors.push_back({line_no, "empty record_id"});
                    continue;
                }
                rec.record_id = *id;
            }
            for (Field f : kAllFields) {
                if (layout.column(f)) rec.field(f) = slice(*layout.column(f));
            }
        }

        if (!layout.record_id) {
            rec.record_id = "#" + std::to_string(result.rows_read);
        } else if (!seen_ids.insert(rec.record_id).second) {
            result.errors.push_back({line_no, "duplicate record_id '" + rec.record_id + "'"});
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

std::string decode_bytes(const SourceLayout& layout, std::string bytes) {
    std::string enc = layout.encoding;
    std::transform(enc.begin(), enc.end(), enc.begin(), [](unsigned char c) { return std::tolower(c); });
    std::string text;
    if (enc == "utf-8" || enc == "utf8" || enc == "ascii" || enc == "us-ascii") {
        text = std::move(bytes);
        if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
    } else if (enc == "latin-1" || enc == "latin1" || enc == "iso-8859-1" || enc == "iso8859-1") {
        text = utf8::latin1_to_utf8(bytes);
    } else {
        throw FatalError("unsupported encoding: " + layout.encoding);
    }
    return text;
}

IngestResult parse_file(const SourceLayout& layout, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FatalError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_source(layout, decode_bytes(layout, std::move(buf).str()));
}

std::string serialize_records(const SourceLayout& layout, std::span<const RawRecord> records) {
    std::string out;
    // Canonical column order: record_id first, then the identity fields.
    std::vector<std::pair<std::string, int>> cols;  // (header name, field index or -1 for id)
    if (layout.record_id) {
        auto* name = std::get_if<std::string>(&*layout.record_id);
        cols.emplace_back(name ? *name : "record_id", -1);
    }
    for (Field f : kAllFields) {
        if (layout.column(f)) {
            auto* name = std::get_if<std::string>(&*layout.column(f));
            cols.emplace_back(name ? *name : std::string(field_name(f)), field_index(f));
        }
    }

    if (layout.format == SourceFormat::delimited) {
        if (layout.has_header) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (i) out.push_back(layout.delimiter);
                out += cols[i].first;
            }
            out.push_back('\n');
        }
        for (const auto& rec : records) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (i) out.push_back(layout.delimiter);
                if (cols[i].second < 0) {
                    out += rec.record_id;
                } else if (const auto& v = rec.fields[cols[i].second]) {
                    out += *v;
                }
            }
            out.push_back('\n');
        }
        return out;
    }

    // Fixed width: place each value at its span, pad gaps with spaces.
    std::size_t width = 0;
    auto span_of = [&](int field_idx) -> FixedSpan {
        if (field_idx < 0) return std::get<FixedSpan>(*layout.record_id);
        return std::get<FixedSpan>(*layout.columns[field_idx]);
    };
    for (const auto& [name, fi] : cols) width = std::max(width, span_of(fi).end());
    for (const auto& rec : records) {
        std::string line(width, ' ');
        for (const auto& [name, fi] : cols) {
            FixedSpan span = span_of(fi);
            std::string_view v;
            if (fi < 0) {
                v = rec.record_id;
            } else if (rec.fields[fi]) {
                v = *rec.fields[fi];
            }
            v = v.substr(0, span.length);
            std::copy(v.begin(), v.end(), line.begin() + span.start);
        }
        out += line;
        out.push_back('\n');
    }
    return out;
}

MergeResult merge_monthly_update(std::span<const RawRecord> existing,
                                 std::span<const RawRecord> update) {
    MergeResult result;
    std::unordered_map<std::string, std::size_t> slot_by_key;

    auto ingest_set = [&](std::span<const RawRecord> recs, const char* label) {
        std::size_t row = 0;
        for (const auto& rec : recs) {
            ++row;
            std::string key = rec.field(Field::ssn) ? strip_non_digits(*rec.field(Field::ssn))
                                                    : std::string();
            if (key.empty()) {
                result.rejected.push_back({row, std::string(label) + " record '" + rec.record_id +
                                                    "' has no ssn key"});
                continue;
            }
            auto it = slot_by_key.find(key);
            if (it == slot_by_key.end()) {
                slot_by_key.emplace(std::move(key), result.records.size());
                result.records.push_back(rec);
            } else {
                // Within one input this is a duplicate (last in file wins);
                // across inputs it is the update replacing older data.
                result.records[it->second] = rec;
            }
        }
    };

    std::unordered_set<std::string> existing_keys;
    {
        // Pre-scan for duplicate warnings per input.
        auto warn_dups = [&](std::span<const RawRecord> recs, const char* label) {
            std::unordered_set<std::string> seen;
            for (const auto& rec : recs) {
                if (!rec.field(Field::ssn)) continue;
                std::string key = strip_non_digits(*rec.field(Field::ssn));
                if (key.empty()) continue;
                if (!seen.insert(key).second)
                    result.warnings.push_back(std::string(label) + " input repeats ssn key " + key +
                                              "; keeping the later record");
            }
        };
        warn_dups(existing, "existing");
        warn_dups(update, "update");
    }

    ingest_set(existing, "existing");
    ingest_set(update, "update");
    return result;
}

}  // namespace reclink
