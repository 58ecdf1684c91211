#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpseq {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Malformed input from a caller or a file. CLI maps this to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A size guard refused the request. CLI maps this to exit code 3.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail_input(const std::string& msg) { throw input_error(msg); }
[[noreturn]] inline void fail_guard(const std::string& msg) { throw guard_error(msg); }

inline u64 checked_add(u64 a, u64 b) {
    if (a > std::numeric_limits<u64>::max() - b) fail_guard("64-bit addition overflow");
    return a + b;
}

inline u64 checked_mul(u64 a, u64 b) {
    if (b != 0 && a > std::numeric_limits<u64>::max() / b) fail_guard("64-bit multiplication overflow");
    return a * b;
}

// Shared line-oriented parsing helpers for the text formats.
namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

[[noreturn]] inline void parse_fail(u32 lineno, const std::string& msg) {
    fail_input("line " + std::to_string(lineno) + ": " + msg);
}

inline u64 parse_u64_field(const std::string& tok, u32 lineno, const std::string& what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        parse_fail(lineno, what + " must be a nonnegative integer, got '" + tok + "'");
    errno = 0;
    char* end = nullptr;
    u64 v = std::strtoull(tok.c_str(), &end, 10);
    if (errno != 0 || end != tok.c_str() + tok.size())
        parse_fail(lineno, what + " out of range: '" + tok + "'");
    return v;
}

inline u32 parse_u32_field(const std::string& tok, u32 lineno, const std::string& what) {
    u64 v = parse_u64_field(tok, lineno, what);
    if (v > 0xffffffffull) parse_fail(lineno, what + " out of range: '" + tok + "'");
    return static_cast<u32>(v);
}

// Accepts "key=<value>", returns <value>.
inline u32 parse_kv(const std::string& tok, const std::string& key, u32 lineno) {
    std::string prefix = key + "=";
    if (tok.rfind(prefix, 0) != 0)
        parse_fail(lineno, "expected " + key + "=<value>, got '" + tok + "'");
    return parse_u32_field(tok.substr(prefix.size()), lineno, key);
}

} // namespace detail

// Deterministic RNG wrapper. All randomness in the project flows through this
// type; only raw engine output is used, so identical seeds give identical
// results on every platform.
struct rng64 {
    std::mt19937_64 eng;

    explicit rng64(u64 seed) : eng(seed) {}

    u64 next() { return eng(); }

    // Uniform in [0, n). Modulo bias is irrelevant here: n is tiny and the
    // only requirement is determinism.
    u32 below(u32 n) { return static_cast<u32>(next() % n); }

    // Uniform in [0, 1), 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace bpseq
