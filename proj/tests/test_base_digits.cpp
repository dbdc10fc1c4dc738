#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "kaprekar/base_digits.hpp"

using kaprekar::Base;
using kaprekar::DigitVector;
using kaprekar::Value;

// Reference subtraction built on std::sort, used to cross-check the
// production digit paths without sharing any code with them.
namespace {

Value reference_map(Value x, Base m, unsigned n) {
    std::vector<Value> d(n);
    for (unsigned i = 0; i < n; ++i) {
        d[i] = x % m.m;
        x /= m.m;
    }
    std::sort(d.begin(), d.end());
    Value asc = 0;
    Value desc = 0;
    for (unsigned i = 0; i < n; ++i) asc = asc * m.m + d[i];
    for (unsigned i = n; i-- > 0;) desc = desc * m.m + d[i];
    return desc - asc;
}

}  // namespace

TEST_CASE("base validation") {
    CHECK_THROWS_AS(Base(0), std::domain_error);
    CHECK_THROWS_AS(Base(1), std::domain_error);
    CHECK(Base(2).m == 2);
}

TEST_CASE("domain sizes and overflow refusal") {
    CHECK(kaprekar::domain_size(Base(10), 4) == 10000);
    CHECK(kaprekar::domain_size(Base(2), 3) == 8);
    CHECK(kaprekar::domain_size(Base(7), 1) == 7);
    CHECK_THROWS_AS(kaprekar::domain_size(Base(10), 0), std::domain_error);
    CHECK_THROWS_AS(kaprekar::domain_size(Base(std::uint64_t{1} << 32), 3), std::overflow_error);
    CHECK_THROWS_AS(kaprekar::domain_size(Base(10), 63), std::overflow_error);
}

TEST_CASE("digit extraction keeps leading zeros") {
    // digits are stored most significant first
    CHECK(kaprekar::to_digits(170, Base(13), 3).digits == std::vector<std::uint32_t>{1, 0, 1});
    CHECK(kaprekar::to_digits(0, Base(10), 4).digits == std::vector<std::uint32_t>{0, 0, 0, 0});
    CHECK(kaprekar::to_digits(999, Base(10), 4).digits == std::vector<std::uint32_t>{0, 9, 9, 9});
    CHECK_THROWS_AS(kaprekar::to_digits(10000, Base(10), 4), std::domain_error);
}

TEST_CASE("digit vectors reassemble to values") {
    CHECK(kaprekar::from_digits(DigitVector(Base(13), {0, 12, 12})) == 168);
    CHECK(kaprekar::from_digits(DigitVector(Base(7), {0, 0})) == 0);
    CHECK(kaprekar::from_digits(DigitVector(Base(10), {6, 1, 7, 4})) == 6174);
    CHECK(kaprekar::from_digits(DigitVector(Base(10), {4, 7, 1, 6})) == 4716);
}

TEST_CASE("digit vector validation") {
    CHECK_THROWS_AS(DigitVector(Base(10), {}), std::invalid_argument);
    CHECK_THROWS_AS(DigitVector(Base(10), {10}), std::invalid_argument);
    CHECK_THROWS_AS(DigitVector(Base(2), {0, 2, 1}), std::invalid_argument);
}

TEST_CASE("digit round trip") {
    std::mt19937_64 rng(0x5eed);
    for (int trial = 0; trial < 2000; ++trial) {
        const unsigned n = 1 + static_cast<unsigned>(rng() % 4);
        const Base m(2 + rng() % (n >= 4 ? 65534 : 999999));
        const Value x = rng() % kaprekar::domain_size(m, n);
        const DigitVector dv = kaprekar::to_digits(x, m, n);
        REQUIRE(dv.digits.size() == n);
        for (const auto d : dv.digits) REQUIRE(d < m.m);
        REQUIRE(kaprekar::from_digits(dv) == x);
    }
}

TEST_CASE("subtraction step on pinned values") {
    CHECK(kaprekar::kaprekar_map(9990, Base(10), 4) == 8991);
    CHECK(kaprekar::kaprekar_map(3333, Base(10), 4) == 0);
    CHECK(kaprekar::kaprekar_map(170, Base(13), 3) == 168);
    CHECK(kaprekar::kaprekar_map(15, Base(10), 2) == 36);
    CHECK_THROWS_AS(kaprekar::kaprekar_map(10000, Base(10), 4), std::domain_error);
}

TEST_CASE("single-digit systems collapse immediately") {
    for (Value x = 0; x < 9; ++x) CHECK(kaprekar::kaprekar_map(x, Base(9), 1) == 0);
}

TEST_CASE("repdigit detection") {
    CHECK(kaprekar::is_repdigit(3333, Base(10), 4));
    CHECK(kaprekar::is_repdigit(0, Base(10), 4));
    CHECK_FALSE(kaprekar::is_repdigit(6174, Base(10), 4));
    CHECK_FALSE(kaprekar::is_repdigit(5, Base(10), 2));
}

TEST_CASE("repdigits are exactly the kernel of the map") {
    std::mt19937_64 rng(0xabcd);
    for (int trial = 0; trial < 4000; ++trial) {
        const Base m(2 + rng() % 200);
        const unsigned n = 2 + static_cast<unsigned>(rng() % 3);
        const Value x = rng() % kaprekar::domain_size(m, n);
        CAPTURE(m.m, n, x);
        REQUIRE(kaprekar::is_repdigit(x, m, n) == (kaprekar::kaprekar_map(x, m, n) == 0));
    }
}

TEST_CASE("map output divisible by m-1 and closed in the domain") {
    std::mt19937_64 rng(0xd1ce);
    for (int trial = 0; trial < 4000; ++trial) {
        const unsigned n = 2 + static_cast<unsigned>(rng() % 3);
        const Base m(2 + rng() % (n >= 4 ? 65534 : 999999));
        const Value size = kaprekar::domain_size(m, n);
        const Value x = rng() % size;
        const Value y = kaprekar::kaprekar_map(x, m, n);
        CAPTURE(m.m, n, x, y);
        REQUIRE(y < size);
        REQUIRE(y % (m.m - 1) == 0);
        if (n == 3) REQUIRE(y % (m.m * m.m - 1) == 0);
    }
}

TEST_CASE("map depends only on the digit multiset") {
    std::mt19937_64 rng(0xfeed);
    for (int trial = 0; trial < 1000; ++trial) {
        const Base m(2 + rng() % 5000);
        const unsigned n = 2 + static_cast<unsigned>(rng() % 3);
        const Value x = rng() % kaprekar::domain_size(m, n);
        auto digits = kaprekar::to_digits(x, m, n).digits;
        std::shuffle(digits.begin(), digits.end(), rng);
        const Value shuffled = kaprekar::from_digits(DigitVector(m, digits));
        REQUIRE(kaprekar::kaprekar_map(shuffled, m, n) == kaprekar::kaprekar_map(x, m, n));
    }
}

TEST_CASE("production map matches a std::sort reference") {
    std::mt19937_64 rng(0xcafe);
    SECTION("narrow expansions, insertion path") {
        for (int trial = 0; trial < 600; ++trial) {
            const Base m(2 + rng() % 4095);
            const unsigned n = 2 + static_cast<unsigned>(rng() % 4);
            const Value x = rng() % kaprekar::domain_size(m, n);
            CAPTURE(m.m, n, x);
            REQUIRE(kaprekar::kaprekar_map(x, m, n) == reference_map(x, m, n));
        }
    }
    SECTION("wide expansions, counting path") {
        // only bases 2 and 3 support 32+ digits within 64 bits
        for (const std::uint64_t mm : {2, 3}) {
            const Base m(mm);
            const unsigned max_n = mm == 2 ? 62 : 39;
            for (unsigned n = 32; n <= max_n; ++n) {
                const Value size = kaprekar::domain_size(m, n);
                for (int trial = 0; trial < 20; ++trial) {
                    const Value x = rng() % size;
                    CAPTURE(mm, n, x);
                    REQUIRE(kaprekar::kaprekar_map(x, m, n) == reference_map(x, m, n));
                }
            }
        }
    }
}

TEST_CASE("kaprekar map object exposes its system") {
    const kaprekar::KaprekarMap f(Base(10), 4);
    CHECK(f.domain_size() == 10000);
    CHECK(f.base().m == 10);
    CHECK(f.digit_count() == 4);
    CHECK(f(9990) == 8991);
    CHECK(f(6174) == 6174);
}
