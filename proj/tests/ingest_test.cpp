#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "reclink/ingest.hpp"

using namespace reclink;

namespace {

SourceLayout standard_layout() {
    SourceLayout layout;
    layout.record_id = ColumnRef{std::string("record_id")};
    layout.column(Field::first_name) = ColumnRef{std::string("first_name")};
    layout.column(Field::middle_name) = ColumnRef{std::string("middle_name")};
    layout.column(Field::last_name) = ColumnRef{std::string("last_name")};
    layout.column(Field::birth_date) = ColumnRef{std::string("birth_date")};
    layout.column(Field::death_date) = ColumnRef{std::string("death_date")};
    layout.column(Field::ssn) = ColumnRef{std::string("ssn")};
    return layout;
}

constexpr const char* kHeader =
    "record_id,first_name,middle_name,last_name,birth_date,death_date,ssn\n";

RawRecord make_record(std::string id, std::optional<std::string> ssn,
                      std::optional<std::string> dod = std::nullopt) {
    RawRecord r;
    r.record_id = std::move(id);
    r.field(Field::ssn) = std::move(ssn);
    r.field(Field::death_date) = std::move(dod);
    return r;
}

}  // namespace

TEST_CASE("delimited parsing with a header row") {
    std::string text = std::string(kHeader) +
                       "p1,John,Q,Doe,1950/05/07,,123-35-4789\n"
                       "p2,Ann,,Lee,1960/01/02,2007/12/03,\n";
    auto result = parse_source(standard_layout(), text);
    REQUIRE(result.errors.empty());
    REQUIRE(result.records.size() == 2);
    CHECK(result.rows_read == 2);

    const RawRecord& p1 = result.records[0];
    CHECK(p1.record_id == "p1");
    CHECK(p1.field(Field::first_name) == "John");
    CHECK(p1.field(Field::ssn) == "123-35-4789");
    CHECK_FALSE(p1.field(Field::death_date).has_value());  // blank cell -> null

    const RawRecord& p2 = result.records[1];
    CHECK_FALSE(p2.field(Field::middle_name).has_value());
    CHECK(p2.field(Field::death_date) == "2007/12/03");
    CHECK_FALSE(p2.field(Field::ssn).has_value());
}

TEST_CASE("delimited parsing tolerates CRLF and skips blank lines") {
    std::string text = std::string(kHeader) +
                       "p1,John,Q,Doe,1950/05/07,,123-35-4789\r\n"
                       "\r\n"
                       "p2,Ann,,Lee,1960/01/02,,\r\n";
    auto result = parse_source(standard_layout(), text);
    CHECK(result.errors.empty());
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].field(Field::ssn) == "123-35-4789");  // no trailing \r
}

TEST_CASE("rows with the wrong cell count become row errors") {
    std::string text = std::string(kHeader) +
                       "p1,John,Q,Doe,1950/05/07,,123-35-4789\n"
                       "p2,short,row\n"
                       "p3,Ann,,Lee,1960/01/02,,\n";
    auto result = parse_source(standard_layout(), text);
    REQUIRE(result.records.size() == 2);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 3);  // header is line 1
    CHECK(result.rows_read == 3);
}

TEST_CASE("duplicate and missing record ids are row errors") {
    std::string text = std::string(kHeader) +
                       "p1,John,,Doe,,,\n"
                       "p1,Jane,,Roe,,,\n"
                       ",Nan,,Null,,,\n";
    auto result = parse_source(standard_layout(), text);
    REQUIRE(result.records.size() == 1);
    CHECK(result.errors.size() == 2);
}

TEST_CASE("missing header column throws FatalError") {
    SourceLayout layout = standard_layout();
    std::string text = "record_id,first_name\np1,John\n";
    CHECK_THROWS_AS(parse_source(layout, text), FatalError);
}

TEST_CASE("duplicate header names throw FatalError") {
    std::string text =
        "record_id,first_name,first_name,last_name,birth_date,death_date,ssn\n";
    CHECK_THROWS_AS(parse_source(standard_layout(), text), FatalError);
}

TEST_CASE("headerless delimited input uses positional references") {
    SourceLayout layout;
    layout.has_header = false;
    layout.delimiter = '|';
    layout.record_id = ColumnRef{std::size_t{0}};
    layout.column(Field::last_name) = ColumnRef{std::size_t{1}};
    layout.column(Field::ssn) = ColumnRef{std::size_t{2}};

    auto result = parse_source(layout, "a|Doe|123456780\nb|Lee|\n");
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].record_id == "a");
    CHECK(result.records[0].field(Field::last_name) == "Doe");
    CHECK_FALSE(result.records[0].field(Field::first_name).has_value());
    CHECK_FALSE(result.records[1].field(Field::ssn).has_value());
}

TEST_CASE("records without a record_id column get ordinal ids") {
    SourceLayout layout;
    layout.has_header = false;
    layout.column(Field::ssn) = ColumnRef{std::size_t{0}};
    layout.column(Field::death_date) = ColumnRef{std::size_t{1}};

    auto result = parse_source(layout, "111223333,2001/02/03\n444556666,\n");
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].record_id == "#1");
    CHECK(result.records[1].record_id == "#2");
}

TEST_CASE("fixed-width parsing slices and trims spans") {
    SourceLayout layout;
    layout.format = SourceFormat::fixed_width;
    layout.has_header = false;
    layout.record_id = ColumnRef{FixedSpan{0, 4}};
    layout.column(Field::last_name) = ColumnRef{FixedSpan{4, 10}};
    layout.column(Field::ssn) = ColumnRef{FixedSpan{14, 9}};

    auto result = parse_source(layout,
                               "r001Doe       123456780\n"
                               "r002Lee                \n"
                               "r003short\n");
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].record_id == "r001");
    CHECK(result.records[0].field(Field::last_name) == "Doe");
    CHECK(result.records[0].field(Field::ssn) == "123456780");
    CHECK_FALSE(result.records[1].field(Field::ssn).has_value());  // all spaces -> null
    REQUIRE(result.errors.size() == 1);                            // short line
    CHECK(result.errors[0].line == 3);
}

TEST_CASE("validate_layout rejects structural mistakes") {
    // Patient source must carry a record id.
    SourceLayout no_id = standard_layout();
    no_id.record_id.reset();
    CHECK_THROWS_AS(validate_layout(no_id, DatasetRole::patient), FatalError);
    // ...but a death-master source does not need one.
    SourceLayout dm = standard_layout();
    dm.record_id.reset();
    CHECK_NOTHROW(validate_layout(dm, DatasetRole::death_master));

    // Death-master source must map ssn.
    SourceLayout no_ssn = standard_layout();
    no_ssn.column(Field::ssn).reset();
    CHECK_THROWS_AS(validate_layout(no_ssn, DatasetRole::death_master), FatalError);
    CHECK_NOTHROW(validate_layout(no_ssn, DatasetRole::patient));

    // Two fields must not read the same column.
    SourceLayout dup = standard_layout();
    dup.column(Field::middle_name) = ColumnRef{std::string("first_name")};
    CHECK_THROWS_AS(validate_layout(dup, DatasetRole::patient), FatalError);

    // Name refs require a header.
    SourceLayout headerless = standard_layout();
    headerless.has_header = false;
    CHECK_THROWS_AS(validate_layout(headerless, DatasetRole::patient), FatalError);

    // Fixed-width spans must not overlap and must have non-zero length.
    SourceLayout fw;
    fw.format = SourceFormat::fixed_width;
    fw.has_header = false;
    fw.record_id = ColumnRef{FixedSpan{0, 4}};
    fw.column(Field::ssn) = ColumnRef{FixedSpan{2, 9}};
    CHECK_THROWS_AS(validate_layout(fw, DatasetRole::patient), FatalError);
    fw.column(Field::ssn) = ColumnRef{FixedSpan{4, 0}};
    CHECK_THROWS_AS(validate_layout(fw, DatasetRole::patient), FatalError);
}

TEST_CASE("serialize_records round-trips through parse_source") {
    std::string text = std::string(kHeader) +
                       "p1,John,Q,Doe,1950/05/07,,123-35-4789\n"
                       "p2,Ann,,Lee,1960/01/02,2007/12/03,\n";
    SourceLayout layout = standard_layout();
    auto first = parse_source(layout, text);
    REQUIRE(first.errors.empty());

    std::string rewritten = serialize_records(layout, first.records);
    auto second = parse_source(layout, rewritten);
    CHECK(second.errors.empty());
    CHECK(second.records == first.records);
}

TEST_CASE("fixed-width serialization pads and round-trips") {
    SourceLayout layout;
    layout.format = SourceFormat::fixed_width;
    layout.has_header = false;
    layout.record_id = ColumnRef{FixedSpan{0, 4}};
    layout.column(Field::last_name) = ColumnRef{FixedSpan{4, 10}};
    layout.column(Field::ssn) = ColumnRef{FixedSpan{14, 9}};

    std::vector<RawRecord> records;
    RawRecord r;
    r.record_id = "r001";
    r.field(Field::last_name) = "Doe";
    r.field(Field::ssn) = "123456780";
    records.push_back(r);

    std::string text = serialize_records(layout, records);
    auto parsed = parse_source(layout, text);
    REQUIRE(parsed.errors.empty());
    REQUIRE(parsed.records.size() == 1);
    CHECK(parsed.records[0] == records[0]);
}

TEST_CASE("parse_file decodes latin-1 when the layout says so") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "reclink_ingest_test";
    fs::create_directories(dir);
    fs::path file = dir / "latin1.csv";
    {
        std::ofstream out(file, std::ios::binary);
        out << "record_id,first_name,middle_name,last_name,birth_date,death_date,ssn\n";
        out << "p1,Jos\xE9,,Mu\xF1oz,,,\n";  // latin-1 bytes
    }
    SourceLayout layout = standard_layout();
    layout.encoding = "latin-1";
    auto result = parse_file(layout, file.string());
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].field(Field::first_name) == "Jos\xC3\xA9");  // UTF-8 é
    CHECK(result.records[0].field(Field::last_name) == "Mu\xC3\xB1oz");

    SourceLayout bad = standard_layout();
    bad.encoding = "utf-99";
    CHECK_THROWS_AS(parse_file(bad, file.string()), FatalError);
    CHECK_THROWS_AS(parse_file(layout, (dir / "missing.csv").string()), FatalError);
    fs::remove_all(dir);
}

TEST_CASE("decode_bytes strips a UTF-8 byte order mark") {
    SourceLayout layout = standard_layout();
    std::string with_bom = "\xEF\xBB\xBFrecord_id";
    CHECK(decode_bytes(layout, with_bom) == "record_id");
}

TEST_CASE("merge keeps existing order and lets the update win") {
    std::vector<RawRecord> existing = {
        make_record("e1", "111223333", "2001/01/01"),
        make_record("e2", "222334444", "2002/02/02"),
        make_record("e3", "333445555", "2003/03/03"),
    };
    std::vector<RawRecord> update = {
        make_record("u1", "222-33-4444", "2012/12/12"),  // same key, punctuated
        make_record("u2", "444556666", "2004/04/04"),    // new key
    };

    auto merged = merge_monthly_update(existing, update);
    REQUIRE(merged.records.size() == 4);
    CHECK(merged.rejected.empty());

    // Existing order kept; replaced slot carries the update's record.
    CHECK(merged.records[0].record_id == "e1");
    CHECK(merged.records[1].record_id == "u1");
    CHECK(merged.records[1].field(Field::death_date) == "2012/12/12");
    CHECK(merged.records[2].record_id == "e3");
    CHECK(merged.records[3].record_id == "u2");
}

TEST_CASE("merge rejects records without an ssn key") {
    std::vector<RawRecord> existing = {make_record("e1", "111223333")};
    std::vector<RawRecord> update = {
        make_record("u1", std::nullopt),
        make_record("u2", "--"),  // no digits survive
    };
    auto merged = merge_monthly_update(existing, update);
    CHECK(merged.records.size() == 1);
    CHECK(merged.rejected.size() == 2);
}

TEST_CASE("merge warns on duplicate keys within one input and keeps the later record") {
    std::vector<RawRecord> existing = {make_record("e1", "111223333", "2001/01/01")};
    std::vector<RawRecord> update = {
        make_record("u1", "111223333", "2010/10/10"),
        make_record("u2", "111223333", "2011/11/11"),
    };
    auto merged = merge_monthly_update(existing, update);
    REQUIRE(merged.records.size() == 1);
    CHECK(merged.records[0].record_id == "u2");
    CHECK_FALSE(merged.warnings.empty());
}

TEST_CASE("merge is idempotent") {
    std::vector<RawRecord> data = {
        make_record("e1", "111223333", "2001/01/01"),
        make_record("e2", "222334444", "2002/02/02"),
    };
    auto merged = merge_monthly_update(data, data);
    CHECK(merged.records == data);
    auto again = merge_monthly_update(merged.records, data);
    CHECK(again.records == data);
}
