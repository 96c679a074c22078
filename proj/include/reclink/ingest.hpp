#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "reclink/common.hpp"

namespace reclink {

enum class SourceFormat { delimited, fixed_width };

// Byte span of one field on a fixed-width line.
struct FixedSpan {
    std::size_t start = 0;
    std::size_t length = 0;
    std::size_t end() const { return start + length; }
    bool operator==(const FixedSpan&) const = default;
};

// A column is addressed by header name (delimited with header), by
// 0-based position (delimited without header), or by byte span
// (fixed width).
using ColumnRef = std::variant<std::string, std::size_t, FixedSpan>;

struct SourceLayout {
    SourceFormat format = SourceFormat::delimited;
    char delimiter = ',';
    bool has_header = true;
    std::string encoding = "utf-8";
    std::optional<ColumnRef> record_id;
    std::array<std::optional<ColumnRef>, kFieldCount> columns;

    std::optional<ColumnRef>& column(Field f) { return columns[field_index(f)]; }
    const std::optional<ColumnRef>& column(Field f) const { return columns[field_index(f)]; }
};

// Which side of the linkage a file plays. The schema is identical; the
// role only changes which layout columns are mandatory.
enum class DatasetRole { patient, death_master };

// Throws FatalError on an unusable layout: duplicate column references,
// overlapping or empty fixed-width spans, wrong ref kind for the format,
// missing record_id (patient) or ssn (death master) column.
void validate_layout(const SourceLayout& layout, DatasetRole role);

struct RawRecord {
    std::string record_id;
    std::array<std::optional<std::string>, kFieldCount> fields;

    std::optional<std::string>& field(Field f) { return fields[field_index(f)]; }
    const std::optional<std::string>& field(Field f) const { return fields[field_index(f)]; }
    bool operator==(const RawRecord&) const = default;
};

struct RowError {
    std::size_t line = 0;  // 1-based physical line number
    std::string message;
};

struct IngestResult {
    std::vector<RawRecord> records;
    std::vector<RowError> errors;
    std::size_t rows_read = 0;  // data rows seen (header excluded)
};

// Parses decoded text. Bad rows are collected in `errors` and skipped;
// an unusable header throws FatalError.
IngestResult parse_source(const SourceLayout& layout, std::string_view text);

// Applies the layout's declared encoding to raw file bytes, yielding
// UTF-8 text ready for parse_source. Throws on unsupported encodings.
std::string decode_bytes(const SourceLayout& layout, std::string bytes);

// Opens `path`, applies layout.encoding (utf-8 passthrough, latin-1
// transcode), then parses. Throws FatalError on IO/encoding problems.
IngestResult parse_file(const SourceLayout& layout, const std::string& path);

// Writes records back out under the same layout (inverse of parse for
// populated fields). Fixed-width output pads fields with spaces.
std::string serialize_records(const SourceLayout& layout, std::span<const RawRecord> records);

struct MergeResult {
    std::vector<RawRecord> records;
    std::vector<RowError> rejected;     // records without a usable ssn key
    std::vector<std::string> warnings;  // duplicate keys within one input
};

// Monthly-update semantics for the death-master dataset: one output
// record per ssn, and for an ssn present in both inputs the update's
// record replaces the existing one wholesale. Keys are the digit-stripped
// ssn. Output order: existing-file order, then new keys in update order.
MergeResult merge_monthly_update(std::span<const RawRecord> existing,
                                 std::span<const RawRecord> update);

}  // namespace reclink
