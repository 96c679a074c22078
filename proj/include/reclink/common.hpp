#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reclink {

// Unrecoverable error (bad config, unreadable input, corrupted state).
// Row-level data problems are never thrown; they are collected as values.
class FatalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The six identity fields shared by both source datasets. record_id is
// carried separately because it is an opaque key, not an identity element.
enum class Field : int {
    first_name = 0,
    middle_name,
    last_name,
    birth_date,
    death_date,
    ssn,
};

inline constexpr int kFieldCount = 6;

inline constexpr std::array<Field, kFieldCount> kAllFields = {
    Field::first_name, Field::middle_name, Field::last_name,
    Field::birth_date, Field::death_date,  Field::ssn,
};

std::string_view field_name(Field f);
std::optional<Field> field_from_name(std::string_view name);

inline int field_index(Field f) { return static_cast<int>(f); }

// --- small string helpers -------------------------------------------------

std::string_view trim_view(std::string_view s);
bool is_blank(std::string_view s);
std::vector<std::string_view> split_view(std::string_view s, char delim);

// --- hashing ---------------------------------------------------------------

// FNV-1a, used for dataset fingerprints and output determinism checks.
std::uint64_t fnv1a64(std::string_view bytes);

// --- number formatting -----------------------------------------------------

// Formats v to `sig_figs` significant figures (no exponent for the
// magnitudes reports deal in). format_percent() scales a fraction by 100
// and appends '%'.
std::string format_significant(double v, int sig_figs);
std::string format_percent(double fraction, int sig_figs);

// --- parallel helper --------------------------------------------------------

// Runs fn(begin, end) over disjoint chunks of [0, n) on up to `threads`
// workers. Chunk boundaries do not depend on the thread count, so writers
// that fill pre-sized slots produce identical results at any parallelism.
void parallel_chunks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace reclink
