#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include "reclink/common.hpp"

using namespace reclink;

TEST_CASE("trim_view strips ASCII whitespace from both ends") {
    CHECK(trim_view("  hello  ") == "hello");
    CHECK(trim_view("\t a b \r\n") == "a b");
    CHECK(trim_view("") == "");
    CHECK(trim_view("   ") == "");
    CHECK(trim_view("x") == "x");
}

TEST_CASE("is_blank accepts empty and whitespace-only strings") {
    CHECK(is_blank(""));
    CHECK(is_blank(" \t\r\n"));
    CHECK_FALSE(is_blank(" . "));
}

TEST_CASE("split_view keeps empty cells and trailing delimiters") {
    auto parts = split_view("a,b,,d", ',');
    REQUIRE(parts.size() == 4);
    CHECK(parts[0] == "a");
    CHECK(parts[2] == "");
    CHECK(parts[3] == "d");

    CHECK(split_view("", ',').size() == 1);
    CHECK(split_view(",", ',').size() == 2);
    CHECK(split_view("a|b", '|').size() == 2);
}

TEST_CASE("field names round-trip") {
    for (Field f : kAllFields) {
        auto back = field_from_name(field_name(f));
        REQUIRE(back.has_value());
        CHECK(*back == f);
    }
    CHECK_FALSE(field_from_name("nope").has_value());
    CHECK(field_name(Field::ssn) == "ssn");
    CHECK(field_name(Field::birth_date) == "birth_date");
}

TEST_CASE("fnv1a64 matches published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(fnv1a64("ab") != fnv1a64("ba"));
}

TEST_CASE("format_significant keeps significant figures without exponents") {
    CHECK(format_significant(80.6, 3) == "80.6");
    CHECK(format_significant(80.6, 4) == "80.6");
    CHECK(format_significant(0.5, 2) == "0.5");
    CHECK(format_significant(100.0, 3) == "100");
    CHECK(format_significant(99.9999, 6) == "99.9999");
}

TEST_CASE("format_percent scales fractions") {
    CHECK(format_percent(0.806, 3) == "80.6%");
    CHECK(format_percent(1.0, 3) == "100%");
    CHECK(format_percent(0.0, 3) == "0%");
    CHECK(format_percent(0.051, 2) == "5.1%");
}

TEST_CASE("parallel_chunks covers every index exactly once at any width") {
    for (unsigned threads : {1u, 2u, 3u, 8u}) {
        const std::size_t n = 10007;
        std::vector<std::atomic<int>> hits(n);
        parallel_chunks(n, threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) hits[i].fetch_add(1);
        });
        std::size_t total = 0;
        for (auto& h : hits) {
            CHECK(h.load() == 1);
            total += static_cast<std::size_t>(h.load());
        }
        CHECK(total == n);
    }
}

TEST_CASE("parallel_chunks chunk boundaries do not depend on thread count") {
    const std::size_t n = 9001;
    auto boundaries = [&](unsigned threads) {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        std::mutex m;
        parallel_chunks(n, threads, [&](std::size_t b, std::size_t e) {
            std::lock_guard<std::mutex> lock(m);
            out.emplace_back(b, e);
        });
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(boundaries(1) == boundaries(4));
}

TEST_CASE("parallel_chunks handles empty and tiny ranges") {
    bool ran = false;
    parallel_chunks(0, 4, [&](std::size_t, std::size_t) { ran = true; });
    CHECK_FALSE(ran);

    std::vector<int> one(1, 0);
    parallel_chunks(1, 4, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) one[i] = 7;
    });
    CHECK(one[0] == 7);
}
