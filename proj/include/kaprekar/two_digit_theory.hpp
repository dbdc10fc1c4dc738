#pragma once

// Closed-form analysis of the 2-digit Kaprekar system. Every nonzero value
// in the image is a multiple of m - 1, so the dynamics reduce to the index
// map f2(a) = |2a - (m+1)| on X_m = {0, ..., m}. Cycle structure is governed
// entirely by the arithmetic of m + 1: odd divisors select the minimal
// periods, the power of two in m + 1 selects which indexes are periodic.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "base_digits.hpp"

namespace kaprekar::two_digit {

namespace detail {

inline std::uint64_t successor(Base m) {
    // Bounding m keeps every derived quantity (2a, doubling mod d) in range.
    if (m.m >= (std::uint64_t{1} << 63))
        throw std::overflow_error("index analysis supports bases below 2^63");
    return m.m + 1;
}

/// Least t >= 1 with 2^t = +-1 (mod d), for odd d >= 3. Exists because 2 is
/// a unit mod d; found by successive doubling, no overflow for d < 2^63.
inline std::uint64_t least_flip_exponent(std::uint64_t d) {
    std::uint64_t p = 2 % d;
    for (std::uint64_t t = 1; t <= d; ++t) {
        if (p == 1 || p == d - 1) return t;
        p = (p * 2) % d;
    }
    throw std::logic_error("no flip exponent found for d = " + std::to_string(d));
}

}  // namespace detail

/// Index form of the 2-digit map under x = a(m-1): f2(a) = |2a - (m+1)|,
/// with f2(0) = 0 for the trivial constant.
inline Value f2_index(Value a, Base m) {
    if (a > m.m)
        throw std::domain_error("index " + std::to_string(a) + " outside X_m = {0, ..., " +
                                std::to_string(m.m) + "}");
    if (a == 0) return 0;
    const std::uint64_t s = detail::successor(m);
    const std::uint64_t twice = 2 * a;
    return twice >= s ? twice - s : s - twice;
}

/// v2(k): exponent of the largest power of two dividing k. Undefined at 0.
inline unsigned two_adic_valuation(std::uint64_t k) {
    if (k == 0) throw std::domain_error("2-adic valuation is undefined at 0");
    return static_cast<unsigned>(std::countr_zero(k));
}

struct PeriodSolutionSet {
    std::uint64_t m = 0;
    std::uint64_t t = 0;
    std::vector<Value> indexes;  // every nonzero a with f2^t(a) = a, ascending

    friend bool operator==(const PeriodSolutionSet&, const PeriodSolutionSet&) = default;
};

/// All nonzero solutions of f2^t(a) = a: the odd multiples of (m+1)/g below
/// m+1, for g = gcd(m+1, 2^t + 1) and g = gcd(m+1, 2^t - 1). Empty exactly
/// when both gcds are 1.
inline PeriodSolutionSet period_solutions(Base m, unsigned t) {
    if (t == 0) throw std::domain_error("period t must be at least 1");
    if (t > 62) throw std::domain_error("2^t + 1 exceeds the 64-bit range for t = " +
                                        std::to_string(t));
    const std::uint64_t s = detail::successor(m);
    const std::uint64_t pw = std::uint64_t{1} << t;
    std::set<Value> solutions;
    for (const std::uint64_t side : {pw + 1, pw - 1}) {
        const std::uint64_t g = std::gcd(s, side);
        const std::uint64_t stride = s / g;
        for (std::uint64_t xi = 1; xi < g; xi += 2) solutions.insert(xi * stride);
    }
    return {m.m, t, std::vector<Value>(solutions.begin(), solutions.end())};
}

/// The minimal periods realized by the system: for every odd divisor d > 1
/// of m+1, the least t with d | 2^t - 1 or d | 2^t + 1. Empty exactly when
/// m+1 is a power of two (only the trivial constant remains).
inline std::vector<std::uint64_t> minimal_periods(Base m) {
    const std::uint64_t s = detail::successor(m);
    std::set<std::uint64_t> periods;
    for (std::uint64_t i = 1; i <= s / i; ++i) {
        if (s % i != 0) continue;
        for (const std::uint64_t d : {i, s / i})
            if (d > 1 && d % 2 == 1) periods.insert(detail::least_flip_exponent(d));
    }
    return std::vector<std::uint64_t>(periods.begin(), periods.end());
}

/// The periodic indexes are exactly those carrying the same 2-factor count
/// as m+1: {a in X_m : v2(a) = v2(m+1)}. Empty when m+1 is a power of two.
inline std::vector<Value> periodic_indexes(Base m) {
    const std::uint64_t s = detail::successor(m);
    const unsigned r = two_adic_valuation(s);
    const Value unit = Value{1} << r;
    std::vector<Value> out;
    for (Value a = unit; a <= m.m; a += 2 * unit) out.push_back(a);
    return out;
}

/// Partition of the periodic indexes into f2-orbits. Each cycle starts at
/// its smallest member and follows f2; cycles are listed shortest first,
/// ties broken by smallest member.
inline std::vector<std::vector<Value>> fixed_sets(Base m) {
    std::vector<std::vector<Value>> cycles;
    std::unordered_set<Value> seen;
    for (const Value start : periodic_indexes(m)) {
        if (seen.contains(start)) continue;
        std::vector<Value> cycle;
        Value cur = start;
        do {
            cycle.push_back(cur);
            seen.insert(cur);
            cur = f2_index(cur, m);
            if (cycle.size() > m.m) throw std::logic_error("f2 orbit escaped the periodic set");
        } while (cur != start);
        cycles.push_back(std::move(cycle));
    }
    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.front() < b.front();
    });
    return cycles;
}

/// Upper bound on S(X): v2(m+1) + 2. Tightness varies by base; the orbit
/// engine reports the exact value.
inline std::uint64_t max_step_bound(Base m) {
    return two_adic_valuation(detail::successor(m)) + 2;
}

/// S(x) without orbit enumeration: normalize x to a multiple of m-1 (one
/// step charged unless it already is one), then count f2 applications until
/// the 2-factor count reaches v2(m+1) or the orbit dies at 0.
inline std::uint64_t step_of(Value x, Base m) {
    const Value size = domain_size(m, 2);
    if (x >= size)
        throw std::domain_error("value " + std::to_string(x) +
                                " outside the 2-digit base-" + std::to_string(m.m) + " domain");
    if (x == 0) return 0;
    if (is_repdigit(x, m, 2)) return 1;  // maps straight to the trivial constant

    const Value mm1 = m.m - 1;
    std::uint64_t steps = 0;
    Value a;
    if (x % mm1 == 0) {
        a = x / mm1;
    } else {
        a = kaprekar_map(x, m, 2) / mm1;
        steps = 1;
    }
    const unsigned r = two_adic_valuation(detail::successor(m));
    const std::uint64_t guard = max_step_bound(m) + 2;
    while (a != 0 && two_adic_valuation(a) != r) {
        a = f2_index(a, m);
        if (++steps > guard)
            throw std::logic_error("2-digit step iteration exceeded its proven bound");
    }
    return steps;
}

/// Everything the closed forms say about one base.
struct BaseAnalysis {
    std::uint64_t m = 0;
    unsigned r = 0;  // v2(m+1)
    std::vector<std::uint64_t> minimal_periods;
    std::vector<std::vector<Value>> cycles;  // index cycles, as in fixed_sets
    std::uint64_t max_step_bound = 0;
    std::vector<Value> periodic_indexes;

    friend bool operator==(const BaseAnalysis&, const BaseAnalysis&) = default;
};

inline BaseAnalysis analyze(Base m) {
    BaseAnalysis out;
    out.m = m.m;
    out.r = two_adic_valuation(detail::successor(m));
    out.minimal_periods = minimal_periods(m);
    out.cycles = fixed_sets(m);
    out.max_step_bound = max_step_bound(m);
    out.periodic_indexes = periodic_indexes(m);
    return out;
}

}  // namespace kaprekar::two_digit
