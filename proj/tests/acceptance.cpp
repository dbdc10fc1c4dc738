// End-to-end acceptance checks: ten criteria, one pass/fail line each, with
// wall-clock pins where a criterion carries a time limit. Exits nonzero when
// any criterion fails. Pass --cli PATH so the sweep criteria can drive the
// command-line binary.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "kaprekar/kaprekar.hpp"

using kaprekar::Base;
using kaprekar::KaprekarMap;
using kaprekar::SystemReport;
using kaprekar::Value;
namespace two = kaprekar::two_digit;
namespace three = kaprekar::three_digit;

namespace {

std::string g_cli_path;

struct Outcome {
    bool pass = false;
    std::string detail;
};

template <typename T>
std::string join_arrows(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += " → ";
        out += std::to_string(v[i]);
    }
    return out;
}

bool expect(Outcome& o, bool cond, const std::string& what) {
    if (!cond && o.detail.empty()) o.detail = what;
    o.pass = o.pass && cond;
    return cond;
}

int run_cli_command(const std::string& args) {
    const std::string cmd = "\"" + g_cli_path + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_two_digit_base_10() {
    Outcome o{true, ""};
    const auto cycles = two::fixed_sets(Base(10));
    expect(o, cycles.size() == 1, "expected a single non-trivial cycle");
    std::set<Value> values;
    for (const Value a : cycles.front()) values.insert(a * 9);
    expect(o, values == std::set<Value>{9, 27, 45, 63, 81}, "fixed set mismatch");
    expect(o, two::minimal_periods(Base(10)) == std::vector<std::uint64_t>{5},
           "minimal period mismatch");

    const auto rep = kaprekar::analyze_orbit(KaprekarMap(Base(10), 2), 15);
    std::vector<Value> chain = rep.tail;
    chain.insert(chain.end(), rep.cycle.begin(), rep.cycle.end());
    chain.push_back(rep.cycle.front());
    expect(o,
           join_arrows(chain) ==
               "15 → 36 → 27 → 45 → 9 → 81 → 63 → 27",
           "trajectory of 15 mismatch: " + join_arrows(chain));
    return o;
}

Outcome criterion_three_digit_base_10() {
    Outcome o{true, ""};
    const SystemReport sys = kaprekar::analyze_system(Base(10), 3, {});
    expect(o, sys.cycles == std::vector<std::vector<Value>>{{0}, {495}},
           "cycle inventory mismatch");
    expect(o, sys.max_step == 6, "S(X) mismatch");
    expect(o, three::max_step(Base(10)) == 6, "closed-form S(X) mismatch");

    const auto rep = kaprekar::analyze_orbit(KaprekarMap(Base(10), 3), 667);
    expect(o, rep.tail == std::vector<Value>{667, 99, 891, 792, 693, 594},
           "tail of 667 mismatch");
    expect(o, rep.cycle == std::vector<Value>{495} && rep.step == 6,
           "667 does not reach 495 in six steps");
    return o;
}

Outcome criterion_three_digit_base_13() {
    Outcome o{true, ""};
    const auto theory = three::analyze(Base(13));
    expect(o, theory.fixed_indexes == std::vector<Value>{6, 7}, "fixed indexes mismatch");
    expect(o, theory.fixed_values == std::vector<Value>{1008, 1176}, "fixed values mismatch");
    expect(o, theory.max_step == 7, "closed-form S(X) mismatch");

    const SystemReport sys = kaprekar::analyze_system(Base(13), 3, {});
    expect(o, sys.max_step == 7, "engine S(X) mismatch");
    expect(o, sys.cycles == std::vector<std::vector<Value>>{{0}, {1008, 1176}},
           "cycle inventory mismatch");

    const auto rep = kaprekar::analyze_orbit(KaprekarMap(Base(13), 3), 170);
    expect(o, rep.step == 7, "170 should enter the fixed set in exactly 7 steps");
    expect(o, rep.tail == std::vector<Value>{170, 168, 2016, 1848, 1680, 1512, 1344},
           "tail of 170 mismatch");
    expect(o, std::set<Value>(rep.cycle.begin(), rep.cycle.end()) ==
                  std::set<Value>{1008, 1176},
           "cycle of 170 mismatch");
    return o;
}

Outcome criterion_two_digit_base_27() {
    Outcome o{true, ""};
    expect(o, two::minimal_periods(Base(27)) == std::vector<std::uint64_t>{3},
           "minimal periods mismatch");
    const auto cycles = two::fixed_sets(Base(27));
    expect(o, cycles.size() == 1, "expected one cycle");
    std::set<Value> values;
    for (const Value a : cycles.front()) values.insert(a * 26);
    expect(o, values == std::set<Value>{4 * 26, 12 * 26, 20 * 26}, "fixed set mismatch");
    expect(o, kaprekar::verify::verify_two_digit(Base(27)).overall,
           "engine disagrees with the closed forms");
    return o;
}

Outcome criterion_bases_14_and_59() {
    Outcome o{true, ""};
    const std::vector<std::uint64_t> periods{1, 2, 4};
    expect(o, two::minimal_periods(Base(14)) == periods, "base 14 periods mismatch");
    expect(o, two::minimal_periods(Base(59)) == periods, "base 59 periods mismatch");

    using Cycles = std::vector<std::vector<Value>>;
    expect(o, two::fixed_sets(Base(14)) == Cycles{{5}, {3, 9}, {1, 13, 11, 7}},
           "base 14 fixed sets mismatch");
    expect(o, two::fixed_sets(Base(59)) == Cycles{{20}, {12, 36}, {4, 52, 44, 28}},
           "base 59 fixed sets mismatch");

    const SystemReport sys14 = kaprekar::analyze_system(Base(14), 2, {});
    const SystemReport sys59 = kaprekar::analyze_system(Base(59), 2, {});
    expect(o, sys14.max_step == 2, "base 14 S(X) mismatch");
    expect(o, sys59.max_step == 4, "base 59 S(X) mismatch");
    expect(o, sys14.max_step <= two::max_step_bound(Base(14)), "base 14 bound violated");
    expect(o, sys59.max_step <= two::max_step_bound(Base(59)), "base 59 bound violated");
    return o;
}

Outcome criterion_four_digit_base_10() {
    Outcome o{true, ""};
    const SystemReport sys = kaprekar::analyze_system(Base(10), 4, {});
    expect(o, sys.cycles == std::vector<std::vector<Value>>{{0}, {6174}},
           "6174 is not the unique non-trivial cycle");
    expect(o, sys.max_step == 7, "some value needs more than 7 steps");
    // the only values not reaching 6174 are the ten repdigits, which form
    // the basin of the trivial constant
    expect(o, sys.basin_sizes == std::vector<std::uint64_t>{10, 9990},
           "basin split mismatch");
    return o;
}

Outcome criterion_cli_two_digit_sweep() {
    Outcome o{true, ""};
    if (g_cli_path.empty()) {
        o.pass = false;
        o.detail = "no --cli path provided";
        return o;
    }
    const int code = run_cli_command("verify --digits 2 --base-range 2..500");
    expect(o, code == 0, "verify exited with code " + std::to_string(code));
    return o;
}

Outcome criterion_cli_three_digit_sweep() {
    Outcome o{true, ""};
    if (g_cli_path.empty()) {
        o.pass = false;
        o.detail = "no --cli path provided";
        return o;
    }
    const int code = run_cli_command("verify --digits 3 --base-range 2..128");
    expect(o, code == 0, "verify exited with code " + std::to_string(code));
    return o;
}

Outcome criterion_corollaries() {
    Outcome o{true, ""};
    for (const std::uint64_t mm : {3, 7, 15, 31, 63, 127}) {
        expect(o, two::fixed_sets(Base(mm)).empty(),
               "base " + std::to_string(mm) + " should have no non-trivial cycle");
        const auto rep = kaprekar::verify::verify_two_digit(Base(mm));
        expect(o, rep.overall, "base " + std::to_string(mm) + " verification failed");
    }
    expect(o, two::minimal_periods(Base(14)) == two::minimal_periods(Base(59)),
           "periods of 14 and 59 differ");
    auto scaled = two::periodic_indexes(Base(14));
    for (Value& a : scaled) a *= 4;
    expect(o, scaled == two::periodic_indexes(Base(59)),
           "periodic indexes of 59 are not 4x those of 14");
    expect(o, kaprekar::verify::scaling_check_pair(Base(14), Base(59)).pass,
           "scaling pair check failed");
    return o;
}

std::vector<Value> brute_periodic_points(std::uint64_t m, unsigned t) {
    std::vector<Value> out;
    const std::uint64_t s = m + 1;
    for (Value a = 1; a <= m; ++a) {
        Value v = a;
        for (unsigned i = 0; i < t; ++i) v = v * 2 >= s ? v * 2 - s : s - v * 2;
        if (v == a) out.push_back(a);
    }
    return out;
}

Outcome criterion_property_suite() {
    Outcome o{true, ""};

    for (std::uint64_t m = 2; m <= 500 && o.pass; ++m)
        for (unsigned t = 1; t <= 12 && o.pass; ++t)
            expect(o, two::period_solutions(Base(m), t).indexes == brute_periodic_points(m, t),
                   "period solutions wrong at m=" + std::to_string(m) +
                       ", t=" + std::to_string(t));

    std::mt19937_64 rng(20260816);
    for (int trial = 0; trial < 20000 && o.pass; ++trial) {
        const unsigned n = 2 + static_cast<unsigned>(rng() % 3);
        const Base m(2 + rng() % (n >= 4 ? 65534 : 999999));
        const Value size = kaprekar::domain_size(m, n);
        const Value x = rng() % size;
        const Value y = kaprekar::kaprekar_map(x, m, n);
        expect(o, y < size && y % (m.m - 1) == 0,
               "divisibility/closure broken at m=" + std::to_string(m.m) +
                   ", n=" + std::to_string(n) + ", x=" + std::to_string(x));
    }

    for (const auto& [mm, n] :
         std::vector<std::pair<std::uint64_t, unsigned>>{{59, 2}, {10, 3}}) {
        const KaprekarMap f(Base(mm), n);
        std::vector<std::pair<Value, std::uint64_t>> serial_steps;
        std::vector<std::pair<Value, std::uint64_t>> parallel_steps;
        kaprekar::EngineConfig serial_cfg;
        kaprekar::EngineConfig parallel_cfg;
        parallel_cfg.workers = 4;
        const SystemReport serial = kaprekar::exhaustive_analysis(
            f, serial_cfg,
            [&](Value x, std::uint64_t s) { serial_steps.emplace_back(x, s); });
        const SystemReport parallel = kaprekar::exhaustive_analysis(
            f, parallel_cfg,
            [&](Value x, std::uint64_t s) { parallel_steps.emplace_back(x, s); });
        expect(o, serial == parallel && serial_steps == parallel_steps,
               "parallel run diverges from serial on base " + std::to_string(mm));
    }
    return o;
}

struct Criterion {
    int id;
    std::string label;
    double limit_ms;  // 0 = no pin
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];

    const std::vector<Criterion> criteria{
        {1, "two-digit base 10: fixed set, minimal period, trace of 15", 1.0,
         criterion_two_digit_base_10},
        {2, "three-digit base 10: unique fixed point 495, S(X)=6, trace of 667", 10.0,
         criterion_three_digit_base_10},
        {3, "three-digit base 13: fixed pair {1008,1176}, S(X)=7, trace of 170", 10.0,
         criterion_three_digit_base_13},
        {4, "two-digit base 27: minimal periods {3}, fixed set {104,312,520}", 0.0,
         criterion_two_digit_base_27},
        {5, "two-digit bases 14 and 59: periods, fixed sets, exact steps, bound", 0.0,
         criterion_bases_14_and_59},
        {6, "four-digit base 10: 6174 unique, every non-repdigit within 7 steps", 1000.0,
         criterion_four_digit_base_10},
        {7, "cli verify, two-digit bases 2..500", 30000.0, criterion_cli_two_digit_sweep},
        {8, "cli verify, three-digit bases 2..128", 300000.0, criterion_cli_three_digit_sweep},
        {9, "power-of-two successors trivial; (14,59) is a scaling family", 0.0,
         criterion_corollaries},
        {10, "property suite: period solutions, divisibility, determinism", 0.0,
         criterion_property_suite},
    };

    // warm pass for the microsecond-scale criteria so the pins measure the
    // computation, not first-touch allocation
    criterion_two_digit_base_10();

    int failures = 0;
    for (const auto& criterion : criteria) {
        Outcome outcome;
        double ms = 0.0;
        try {
            const auto before = std::chrono::steady_clock::now();
            outcome = criterion.run();
            const auto after = std::chrono::steady_clock::now();
            ms = std::chrono::duration<double, std::milli>(after - before).count();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        if (outcome.pass && criterion.limit_ms > 0.0 && ms >= criterion.limit_ms) {
            outcome.pass = false;
            outcome.detail = "exceeded the " + std::to_string(criterion.limit_ms) + " ms limit";
        }

        std::ostringstream line;
        line << "criterion " << criterion.id << ": " << (outcome.pass ? "PASS" : "FAIL") << "  "
             << criterion.label << "  (" << ms << " ms";
        if (criterion.limit_ms > 0.0) line << ", limit " << criterion.limit_ms << " ms";
        line << ")";
        std::cout << line.str() << "\n";
        if (!outcome.pass) {
            ++failures;
            if (!outcome.detail.empty()) std::cout << "    " << outcome.detail << "\n";
        }
    }

    std::cout << "acceptance: " << (criteria.size() - failures) << "/" << criteria.size()
              << " criteria pass\n";
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
