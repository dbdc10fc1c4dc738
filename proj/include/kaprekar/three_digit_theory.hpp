#pragma once

// Closed-form analysis of the 3-digit Kaprekar system. The image consists
// of multiples of m^2 - 1, and in the index factorization x = a(m^2 - 1)
// the map walks indexes toward the midpoint of X_m, where the single
// non-trivial fixed set sits: {m/2} for even m, {(m-1)/2, (m+1)/2} for odd.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "base_digits.hpp"

namespace kaprekar::three_digit {

/// Index form of the 3-digit map under x = a(m^2 - 1): a-1 from the upper
/// half of X_m, m-a from the lower half, 0 at the trivial constant.
inline Value f3_index(Value a, Base m) {
    if (m.m >= (std::uint64_t{1} << 63))
        throw std::overflow_error("index analysis supports bases below 2^63");
    if (a > m.m)
        throw std::domain_error("index " + std::to_string(a) + " outside X_m = {0, ..., " +
                                std::to_string(m.m) + "}");
    if (a == 0) return 0;
    return 2 * a >= m.m + 1 ? a - 1 : m.m - a;
}

/// The unique non-trivial fixed set, as indexes.
inline std::vector<Value> fixed_set(Base m) {
    if (m.m % 2 == 0) return {m.m / 2};
    return {(m.m - 1) / 2, (m.m + 1) / 2};
}

/// Normalization indicator: 1 when x still needs its first iteration to
/// become a multiple of m^2 - 1, 0 once it is one.
inline unsigned delta(Value x, Base m) {
    const Value size = domain_size(m, 3);
    if (x >= size)
        throw std::domain_error("value " + std::to_string(x) +
                                " outside the 3-digit base-" + std::to_string(m.m) + " domain");
    return x % (m.m * m.m - 1) == 0 ? 0 : 1;
}

/// f3 iterations from index a to the fixed set; 0 on the set and at 0.
inline std::uint64_t entry_distance(Value a, Base m) {
    if (m.m >= (std::uint64_t{1} << 63))
        throw std::overflow_error("index analysis supports bases below 2^63");
    if (a > m.m)
        throw std::domain_error("index " + std::to_string(a) + " outside X_m = {0, ..., " +
                                std::to_string(m.m) + "}");
    if (a == 0) return 0;
    const std::uint64_t mm = m.m;
    if (mm % 2 == 0) {
        if (a == mm / 2) return 0;
        return 2 * a > mm ? a - mm / 2 : mm / 2 + 1 - a;
    }
    const std::uint64_t upper = (mm + 1) / 2;
    if (a == upper || a == upper - 1) return 0;
    return 2 * a >= mm + 1 ? a - upper : upper - a;
}

/// S(x) without orbit enumeration: normalize to a multiple of m^2 - 1 (one
/// step charged unless x already is one), then the walk to the fixed set
/// has closed-form length.
inline std::uint64_t step_of(Value x, Base m) {
    const Value size = domain_size(m, 3);
    if (x >= size)
        throw std::domain_error("value " + std::to_string(x) +
                                " outside the 3-digit base-" + std::to_string(m.m) + " domain");
    if (x == 0) return 0;
    const Value cof = m.m * m.m - 1;
    std::uint64_t charged = 0;
    Value a;
    if (x % cof == 0) {
        a = x / cof;
    } else {
        a = kaprekar_map(x, m, 3) / cof;
        charged = 1;
    }
    return charged + entry_distance(a, m);
}

/// Exact S(X). The long chain behind the even/odd closed form starts at
/// index 1 and needs m >= 4 to clear the fixed set; at m = 2 and m = 3
/// every value lands in a fixed set after at most one iteration.
inline std::uint64_t max_step(Base m) {
    if (m.m <= 3) return 1;
    return m.m % 2 == 0 ? m.m / 2 + 1 : (m.m + 1) / 2;
}

struct ThreeDigitAnalysis {
    std::uint64_t m = 0;
    std::vector<Value> fixed_indexes;
    std::vector<Value> fixed_values;  // indexes scaled by m^2 - 1
    std::uint64_t max_step = 0;

    friend bool operator==(const ThreeDigitAnalysis&, const ThreeDigitAnalysis&) = default;
};

inline ThreeDigitAnalysis analyze(Base m) {
    domain_size(m, 3);  // bases this wide cannot form a 3-digit system
    ThreeDigitAnalysis out;
    out.m = m.m;
    out.fixed_indexes = fixed_set(m);
    const Value cof = m.m * m.m - 1;
    for (const Value a : out.fixed_indexes) out.fixed_values.push_back(a * cof);
    out.max_step = max_step(m);
    return out;
}

}  // namespace kaprekar::three_digit
