#include "reclink/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace reclink {

std::string_view field_name(Field f) {
    switch (f) {
        case Field::first_name: return "first_name";
        case Field::middle_name: return "middle_name";
        case Field::last_name: return "last_name";
        case Field::birth_date: return "birth_date";
        case Field::death_date: return "death_date";
        case Field::ssn: return "ssn";
    }
    return "?";
}

std::optional<Field> field_from_name(std::string_view name) {
    for (Field f : kAllFields) {
        if (field_name(f) == name) return f;
    }
    return std::nullopt;
}

std::string_view trim_view(std::string_view s) {
    const char* ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool is_blank(std::string_view s) { return trim_view(s).empty(); }

std::vector<std::string_view> split_view(std::string_view s, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_significant(double v, int sig_figs) {
    if (sig_figs < 1) sig_figs = 1;
    if (!std::isfinite(v)) return "nan";
    if (v == 0.0) return "0";
    // %.{sig}g, then strip exponent forms back to plain decimal if needed.
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig_figs, v);
    std::string s(buf);
    if (s.find('e') == std::string::npos && s.find('E') == std::string::npos) return s;
    // Magnitude outside %g's plain range; fall back to fixed with enough digits.
    int int_digits = (std::abs(v) >= 1.0)
                         ? static_cast<int>(std::floor(std::log10(std::abs(v)))) + 1
                         : 0;
    int decimals = std::max(0, sig_figs - int_digits);
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

std::string format_percent(double fraction, int sig_figs) {
    return format_significant(fraction * 100.0, sig_figs) + "%";
}

void parallel_chunks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (threads == 0) threads = hw;
    threads = std::min<unsigned>(threads, hw);

    // Fixed chunk geometry: independent of the worker count actually used.
    const std::size_t kChunk = 4096;
    std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    if (threads <= 1 || n_chunks <= 1) {
        fn(0, n);
        return;
    }

    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n_chunks));
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) break;
                std::size_t b = c * kChunk;
                std::size_t e = std::min(n, b + kChunk);
                fn(b, e);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace reclink
