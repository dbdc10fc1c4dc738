#pragma once

// Fixed-width digit strings over an arbitrary radix, and the Kaprekar map
// built on them: sort the digits of x descending and ascending (keeping
// leading zeros) and take the difference.

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace kaprekar {

/// Every number in a system lives in {0, ..., m^n - 1}; 64 bits bounds the
/// representable systems.
using Value = std::uint64_t;

/// Radix of a positional system. Valid bases are m >= 2.
struct Base {
    std::uint64_t m;

    explicit Base(std::uint64_t radix) : m(radix) {
        if (m < 2)
            throw std::domain_error("base must be at least 2, got " + std::to_string(radix));
    }

    friend bool operator==(const Base&, const Base&) = default;
};

namespace detail {

inline constexpr std::uint64_t value_max = std::numeric_limits<std::uint64_t>::max();

/// m^n with overflow detection: pairs whose domain does not fit in 64 bits
/// are rejected instead of silently wrapping.
inline std::uint64_t pow_checked(std::uint64_t m, unsigned n) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (r > value_max / m)
            throw std::overflow_error("m^n exceeds the 64-bit value range: m=" +
                                      std::to_string(m) + ", n=" + std::to_string(n));
        r *= m;
    }
    return r;
}

// m >= 2 and m^n <= 2^64 - 1 force n <= 63, so digit scratch fits on the stack.
inline constexpr unsigned max_digits = 63;

struct DigitBuffer {
    std::array<std::uint32_t, max_digits> d;
    unsigned n = 0;
};

inline void extract_digits(Value x, std::uint64_t m, unsigned n, DigitBuffer& buf) {
    buf.n = n;
    for (unsigned i = 0; i < n; ++i) {
        buf.d[i] = static_cast<std::uint32_t>(x % m);
        x /= m;
    }
}

inline void sort_ascending(DigitBuffer& buf, std::uint64_t m) {
    // Counting sort pays O(m) per call, which is only worth it for many
    // digits over a small radix; the practical systems (n <= 4) take the
    // insertion path. Wide expansions force a small radix anyway, since m^n
    // has to fit in 64 bits.
    if (buf.n >= 32 && m <= 256) {
        std::array<std::uint16_t, 256> count{};
        for (unsigned i = 0; i < buf.n; ++i) ++count[buf.d[i]];
        unsigned k = 0;
        for (std::uint32_t v = 0; v < m; ++v)
            for (std::uint16_t c = count[v]; c > 0; --c) buf.d[k++] = v;
        return;
    }
    for (unsigned i = 1; i < buf.n; ++i) {
        const std::uint32_t key = buf.d[i];
        unsigned j = i;
        for (; j > 0 && buf.d[j - 1] > key; --j) buf.d[j] = buf.d[j - 1];
        buf.d[j] = key;
    }
}

/// Difference between the descending and ascending digit arrangements.
/// Assumes buf is sorted ascending.
inline Value arrangement_difference(const DigitBuffer& buf, std::uint64_t m) {
    Value desc = 0;
    Value asc = 0;
    for (unsigned i = buf.n; i-- > 0;) desc = desc * m + buf.d[i];
    for (unsigned i = 0; i < buf.n; ++i) asc = asc * m + buf.d[i];
    return desc - asc;
}

}  // namespace detail

/// Number of n-digit base-m strings, i.e. m^n. Throws std::overflow_error
/// when the domain is not representable and std::domain_error for n = 0.
inline Value domain_size(Base m, unsigned digit_count) {
    if (digit_count == 0) throw std::domain_error("digit count must be at least 1");
    return detail::pow_checked(m.m, digit_count);
}

/// A fixed-width digit string: exactly n digits in base m, most significant
/// first, leading zeros preserved. (1, 0, 1) is the 3-digit base-13 rendering
/// of 170; (0, 9, 9, 9) is the 4-digit base-10 rendering of 999.
struct DigitVector {
    Base base;
    std::vector<std::uint32_t> digits;

    DigitVector(Base b, std::vector<std::uint32_t> ds) : base(b), digits(std::move(ds)) {
        if (digits.empty()) throw std::invalid_argument("digit string must not be empty");
        for (const std::uint32_t d : digits)
            if (d >= base.m)
                throw std::invalid_argument("digit " + std::to_string(d) +
                                            " out of range for base " + std::to_string(base.m));
        domain_size(base, static_cast<unsigned>(digits.size()));  // width must be representable
    }

    friend bool operator==(const DigitVector&, const DigitVector&) = default;
};

/// Zero-padded digit expansion of x. Throws when x needs more than
/// digit_count digits.
inline DigitVector to_digits(Value x, Base m, unsigned digit_count) {
    const Value size = domain_size(m, digit_count);
    if (x >= size)
        throw std::domain_error("value " + std::to_string(x) + " is not representable in " +
                                std::to_string(digit_count) + " base-" + std::to_string(m.m) +
                                " digits");
    std::vector<std::uint32_t> ds(digit_count);
    for (unsigned i = 0; i < digit_count; ++i) {
        ds[digit_count - 1 - i] = static_cast<std::uint32_t>(x % m.m);
        x /= m.m;
    }
    return DigitVector(m, std::move(ds));
}

/// Value of a digit string. Exact inverse of to_digits at the same width.
inline Value from_digits(const DigitVector& dv) {
    Value x = 0;
    for (const std::uint32_t d : dv.digits) x = x * dv.base.m + d;
    return x;
}

/// One application of the base-m, n-digit Kaprekar map.
inline Value kaprekar_map(Value x, Base m, unsigned digit_count) {
    const Value size = domain_size(m, digit_count);
    if (x >= size)
        throw std::domain_error("value " + std::to_string(x) + " outside the " +
                                std::to_string(digit_count) + "-digit base-" +
                                std::to_string(m.m) + " domain");
    detail::DigitBuffer buf;
    detail::extract_digits(x, m.m, digit_count, buf);
    detail::sort_ascending(buf, m.m);
    return detail::arrangement_difference(buf, m.m);
}

/// True when all digits of the padded expansion are equal. Repdigits are
/// exactly the preimages of the trivial constant 0.
inline bool is_repdigit(Value x, Base m, unsigned digit_count) {
    const Value size = domain_size(m, digit_count);
    if (x >= size)
        throw std::domain_error("value " + std::to_string(x) + " outside the " +
                                std::to_string(digit_count) + "-digit base-" +
                                std::to_string(m.m) + " domain");
    detail::DigitBuffer buf;
    detail::extract_digits(x, m.m, digit_count, buf);
    for (unsigned i = 1; i < buf.n; ++i)
        if (buf.d[i] != buf.d[0]) return false;
    return true;
}

/// The Kaprekar map packaged as a self-map on {0, ..., m^n - 1}. Evaluation
/// assumes in-domain input; the orbit engine checks closure on every image.
class KaprekarMap {
public:
    KaprekarMap(Base m, unsigned digit_count)
        : base_(m), digit_count_(digit_count), size_(kaprekar::domain_size(m, digit_count)) {}

    Value operator()(Value x) const {
        detail::DigitBuffer buf;
        detail::extract_digits(x, base_.m, digit_count_, buf);
        detail::sort_ascending(buf, base_.m);
        return detail::arrangement_difference(buf, base_.m);
    }

    Value domain_size() const { return size_; }
    Base base() const { return base_; }
    unsigned digit_count() const { return digit_count_; }

private:
    Base base_;
    unsigned digit_count_;
    Value size_;
};

}  // namespace kaprekar
