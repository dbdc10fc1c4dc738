#pragma once

// Agreement checks between the closed-form theory and the orbit engine.
// Every check pits a prediction against raw enumeration, never one formula
// against another, and serializes both sides in the same canonical form so
// passing is literal string equality wherever the check is an equality.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "base_digits.hpp"
#include "orbit_engine.hpp"
#include "three_digit_theory.hpp"
#include "two_digit_theory.hpp"

namespace kaprekar::verify {

struct CheckResult {
    std::string name;
    std::string predicted;
    std::string observed;
    bool pass = false;
    std::string counterexample;  // minimal offender, empty when passing

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct VerificationReport {
    std::uint64_t m = 0;
    unsigned digits = 0;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;
    bool overall = false;

    friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

inline constexpr Value two_digit_default_budget = Value{1} << 32;    // bases through 65536
inline constexpr Value three_digit_default_budget = Value{1} << 30;  // bases through 1024

struct VerifyConfig {
    /// Max states for one base's exhaustive run; 0 picks the per-width
    /// default above.
    Value state_budget = 0;
    unsigned workers = 1;
    /// Deliberately corrupt one prediction per report. Exists to exercise the
    /// failure path end to end; never set in normal operation.
    bool inject_mismatch = false;
};

namespace detail {

template <typename T>
std::string join(const std::vector<T>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

template <typename T>
std::string set_string(const std::vector<T>& v) {
    return "{" + join(v, " ") + "}";
}

inline std::string cycle_string(const std::vector<Value>& c) { return "(" + join(c, " ") + ")"; }

inline std::string cycles_string(const std::vector<std::vector<Value>>& cs) {
    std::string out = "[";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i > 0) out += " ";
        out += cycle_string(cs[i]);
    }
    return out + "]";
}

inline std::string cycles_counterexample(const std::vector<std::vector<Value>>& predicted,
                                         const std::vector<std::vector<Value>>& observed) {
    const std::size_t common = std::min(predicted.size(), observed.size());
    for (std::size_t i = 0; i < common; ++i)
        if (predicted[i] != observed[i])
            return "cycle " + std::to_string(i) + ": predicted " + cycle_string(predicted[i]) +
                   ", observed " + cycle_string(observed[i]);
    return "predicted " + std::to_string(predicted.size()) + " cycles, observed " +
           std::to_string(observed.size());
}

template <typename T>
std::string smallest_set_difference(const std::vector<T>& predicted,
                                    const std::vector<T>& observed) {
    // both sorted; report the smallest element present on only one side
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < predicted.size() && j < observed.size()) {
        if (predicted[i] == observed[j]) {
            ++i;
            ++j;
        } else if (predicted[i] < observed[j]) {
            return std::to_string(predicted[i]) + " predicted but not observed";
        } else {
            return std::to_string(observed[j]) + " observed but not predicted";
        }
    }
    if (i < predicted.size()) return std::to_string(predicted[i]) + " predicted but not observed";
    if (j < observed.size()) return std::to_string(observed[j]) + " observed but not predicted";
    return "";
}

inline bool is_trivial_cycle(const std::vector<Value>& c) { return c.size() == 1 && c[0] == 0; }

struct StepMismatch {
    std::uint64_t count = 0;
    Value x = 0;
    std::uint64_t predicted = 0;
    std::uint64_t observed = 0;
};

inline CheckResult step_agreement_check(const StepMismatch& bad, Value states) {
    CheckResult chk;
    chk.name = "per_value_step";
    chk.predicted = "closed-form step agrees with the engine on all " + std::to_string(states) +
                    " values";
    if (bad.count == 0) {
        chk.observed = chk.predicted;
        chk.pass = true;
    } else {
        chk.observed = std::to_string(bad.count) + " of " + std::to_string(states) +
                       " values disagree; first at x = " + std::to_string(bad.x) +
                       ": closed form " + std::to_string(bad.predicted) + ", engine " +
                       std::to_string(bad.observed);
        chk.pass = false;
        chk.counterexample = "x = " + std::to_string(bad.x);
    }
    return chk;
}

}  // namespace detail

/// Five checks for one 2-digit base: cycle inventory, cycle lengths,
/// periodic values, the step bound, and per-value step agreement.
inline VerificationReport verify_two_digit(Base m, const VerifyConfig& cfg = {}) {
    const Value states = domain_size(m, 2);
    const Value budget = cfg.state_budget != 0 ? cfg.state_budget : two_digit_default_budget;
    if (states > budget)
        throw budget_error("2-digit verification of base " + std::to_string(m.m) + " needs " +
                           std::to_string(states) + " states, over the budget of " +
                           std::to_string(budget));

    EngineConfig ec;
    ec.state_budget = budget;
    ec.workers = cfg.workers;

    const two_digit::BaseAnalysis theory = two_digit::analyze(m);

    detail::StepMismatch bad;
    const SystemReport sys = analyze_system(m, 2, ec, [&](Value x, std::uint64_t observed) {
        const std::uint64_t predicted = two_digit::step_of(x, m);
        if (predicted != observed && bad.count++ == 0) {
            bad.x = x;
            bad.predicted = predicted;
            bad.observed = observed;
        }
    });

    VerificationReport report;
    report.m = m.m;
    report.digits = 2;

    // 1. full cycle inventory: the trivial constant plus every fixed set,
    //    scaled back from indexes to values
    std::vector<std::vector<Value>> predicted_cycles;
    predicted_cycles.push_back({0});
    for (const auto& index_cycle : theory.cycles) {
        std::vector<Value> values;
        values.reserve(index_cycle.size());
        for (const Value a : index_cycle) values.push_back(a * (m.m - 1));
        predicted_cycles.push_back(std::move(values));
    }
    std::sort(predicted_cycles.begin(), predicted_cycles.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    {
        CheckResult chk;
        chk.name = "cycle_inventory";
        chk.predicted = detail::cycles_string(predicted_cycles);
        chk.observed = detail::cycles_string(sys.cycles);
        chk.pass = chk.predicted == chk.observed;
        if (!chk.pass)
            chk.counterexample = detail::cycles_counterexample(predicted_cycles, sys.cycles);
        report.checks.push_back(std::move(chk));
    }

    // 2. distinct non-trivial cycle lengths against the minimal periods
    {
        std::vector<std::uint64_t> observed_lengths;
        for (const auto& c : sys.cycles)
            if (!detail::is_trivial_cycle(c)) observed_lengths.push_back(c.size());
        std::sort(observed_lengths.begin(), observed_lengths.end());
        observed_lengths.erase(std::unique(observed_lengths.begin(), observed_lengths.end()),
                               observed_lengths.end());
        std::vector<std::uint64_t> predicted_lengths = theory.minimal_periods;
        if (cfg.inject_mismatch) predicted_lengths.push_back(999);

        CheckResult chk;
        chk.name = "cycle_lengths";
        chk.predicted = detail::set_string(predicted_lengths);
        chk.observed = detail::set_string(observed_lengths);
        chk.pass = chk.predicted == chk.observed;
        if (!chk.pass)
            chk.counterexample =
                detail::smallest_set_difference(predicted_lengths, observed_lengths);
        report.checks.push_back(std::move(chk));
    }

    // 3. members of non-trivial cycles, reduced to indexes
    {
        CheckResult chk;
        chk.name = "periodic_values";
        chk.predicted = detail::set_string(theory.periodic_indexes);
        std::vector<Value> observed_indexes;
        std::string stray;
        for (const auto& c : sys.cycles) {
            if (detail::is_trivial_cycle(c)) continue;
            for (const Value v : c) {
                if (v % (m.m - 1) != 0) {
                    if (stray.empty())
                        stray = "cycle value " + std::to_string(v) +
                                " is not a multiple of " + std::to_string(m.m - 1);
                    continue;
                }
                observed_indexes.push_back(v / (m.m - 1));
            }
        }
        std::sort(observed_indexes.begin(), observed_indexes.end());
        chk.observed = detail::set_string(observed_indexes);
        chk.pass = stray.empty() && chk.predicted == chk.observed;
        if (!chk.pass)
            chk.counterexample =
                !stray.empty()
                    ? stray
                    : detail::smallest_set_difference(theory.periodic_indexes, observed_indexes);
        report.checks.push_back(std::move(chk));
    }

    // 4. the proven step bound
    {
        CheckResult chk;
        chk.name = "max_step_bound";
        chk.predicted = "S(X) <= " + std::to_string(theory.max_step_bound);
        chk.observed = "S(X) = " + std::to_string(sys.max_step);
        chk.pass = sys.max_step <= theory.max_step_bound;
        if (!chk.pass && !sys.argmax_values.empty())
            chk.counterexample = "x = " + std::to_string(sys.argmax_values.front());
        report.checks.push_back(std::move(chk));
        if (sys.max_step == theory.max_step_bound)
            report.notes.push_back("S(X) = " + std::to_string(sys.max_step) +
                                   " attains the bound v2(m+1) + 2");
        else
            report.notes.push_back("S(X) = " + std::to_string(sys.max_step) +
                                   " sits below the bound v2(m+1) + 2 = " +
                                   std::to_string(theory.max_step_bound));
    }

    // 5. per-value steps, collected during the sweep
    report.checks.push_back(detail::step_agreement_check(bad, states));

    report.overall = true;
    for (const auto& chk : report.checks) report.overall = report.overall && chk.pass;
    return report;
}

/// Three checks for one 3-digit base: the unique non-trivial fixed set, the
/// exact S(X), and per-value step agreement.
inline VerificationReport verify_three_digit(Base m, const VerifyConfig& cfg = {}) {
    const Value states = domain_size(m, 3);
    const Value budget = cfg.state_budget != 0 ? cfg.state_budget : three_digit_default_budget;
    if (states > budget)
        throw budget_error("3-digit verification of base " + std::to_string(m.m) + " needs " +
                           std::to_string(states) + " states, over the budget of " +
                           std::to_string(budget));

    EngineConfig ec;
    ec.state_budget = budget;
    ec.workers = cfg.workers;

    const three_digit::ThreeDigitAnalysis theory = three_digit::analyze(m);

    detail::StepMismatch bad;
    const SystemReport sys = analyze_system(m, 3, ec, [&](Value x, std::uint64_t observed) {
        const std::uint64_t predicted = three_digit::step_of(x, m);
        if (predicted != observed && bad.count++ == 0) {
            bad.x = x;
            bad.predicted = predicted;
            bad.observed = observed;
        }
    });

    VerificationReport report;
    report.m = m.m;
    report.digits = 3;

    // 1. exactly one non-trivial cycle, and it is the predicted fixed set
    {
        std::vector<std::vector<Value>> predicted_cycles;
        predicted_cycles.push_back(theory.fixed_values);  // canonical: ascending already
        std::vector<std::vector<Value>> observed_cycles;
        for (const auto& c : sys.cycles)
            if (!detail::is_trivial_cycle(c)) observed_cycles.push_back(c);

        CheckResult chk;
        chk.name = "fixed_set_cycle";
        chk.predicted = detail::cycles_string(predicted_cycles);
        chk.observed = detail::cycles_string(observed_cycles);
        chk.pass = chk.predicted == chk.observed;
        if (!chk.pass)
            chk.counterexample = detail::cycles_counterexample(predicted_cycles, observed_cycles);
        report.checks.push_back(std::move(chk));
    }

    // 2. exact S(X) against the closed form
    {
        const std::uint64_t predicted_max =
            theory.max_step + (cfg.inject_mismatch ? 1 : 0);
        CheckResult chk;
        chk.name = "max_step";
        chk.predicted = "S(X) = " + std::to_string(predicted_max);
        chk.observed = "S(X) = " + std::to_string(sys.max_step);
        chk.pass = chk.predicted == chk.observed;
        if (!chk.pass && !sys.argmax_values.empty())
            chk.counterexample = "x = " + std::to_string(sys.argmax_values.front());
        report.checks.push_back(std::move(chk));
    }

    // 3. per-value steps
    report.checks.push_back(detail::step_agreement_check(bad, states));

    if (m.m == 13)
        report.notes.push_back(
            "base 13: the fixed indexes {6, 7} render as digit strings (5,12,7) and (6,12,6); "
            "a rendering that lists (7,12,5) as fixed is a suspected typo, since (7,12,5) is "
            "index 8 and 8 -> 7 -> 6 -> 7 under the index map, so index 8 is not periodic");

    report.overall = true;
    for (const auto& chk : report.checks) report.overall = report.overall && chk.pass;
    return report;
}

/// Cross-base check: when m1+1 and m2+1 share their odd part, the index
/// dynamics coincide up to the power-of-two scale between them.
inline CheckResult scaling_check_pair(Base m1, Base m2) {
    using two_digit::two_adic_valuation;
    const unsigned r1 = two_adic_valuation(m1.m + 1);
    const unsigned r2 = two_adic_valuation(m2.m + 1);
    const std::uint64_t q1 = (m1.m + 1) >> r1;
    const std::uint64_t q2 = (m2.m + 1) >> r2;

    CheckResult chk;
    chk.name = "two_factor_scaling/" + std::to_string(m1.m) + "~" + std::to_string(m2.m);
    if (q1 != q2) {
        chk.predicted = "m+1 share their odd part";
        chk.observed = "odd parts " + std::to_string(q1) + " and " + std::to_string(q2);
        chk.pass = false;
        chk.counterexample = "odd parts differ";
        return chk;
    }

    const Base lo = r1 <= r2 ? m1 : m2;
    const Base hi = r1 <= r2 ? m2 : m1;
    const unsigned shift = (r1 <= r2 ? r2 - r1 : r1 - r2);
    const Value scale = Value{1} << shift;
    chk.predicted = "periods equal; periodic indexes of " + std::to_string(hi.m) + " are " +
                    std::to_string(scale) + " * those of " + std::to_string(lo.m) +
                    "; f2 commutes with the scaling";

    if (two_digit::minimal_periods(lo) != two_digit::minimal_periods(hi)) {
        chk.observed = "minimal periods differ: " +
                       detail::set_string(two_digit::minimal_periods(lo)) + " vs " +
                       detail::set_string(two_digit::minimal_periods(hi));
        chk.pass = false;
        chk.counterexample = "minimal periods differ";
        return chk;
    }
    std::vector<Value> scaled = two_digit::periodic_indexes(lo);
    for (Value& a : scaled) a *= scale;
    if (scaled != two_digit::periodic_indexes(hi)) {
        chk.observed = "periodic index sets do not scale by " + std::to_string(scale);
        chk.pass = false;
        chk.counterexample = detail::smallest_set_difference(scaled,
                                                             two_digit::periodic_indexes(hi));
        return chk;
    }
    for (Value a = 0; a <= lo.m; ++a) {
        if (two_digit::f2_index(a * scale, hi) != scale * two_digit::f2_index(a, lo)) {
            chk.observed = "f2 does not commute with the scaling at index " + std::to_string(a);
            chk.pass = false;
            chk.counterexample = "a = " + std::to_string(a);
            return chk;
        }
    }
    chk.observed = chk.predicted;
    chk.pass = true;
    return chk;
}

/// One dataset row per base: observed cycle structure next to the predicted
/// step ceiling.
struct SurveyRow {
    std::uint64_t m = 0;
    unsigned digits = 0;
    bool has_r = false;  // r applies to 2-digit rows only
    unsigned r = 0;
    std::vector<std::uint64_t> minimal_periods;  // distinct non-trivial cycle lengths
    std::uint64_t cycle_count = 0;               // non-trivial cycles
    std::vector<std::uint64_t> cycle_sizes;      // ascending, with multiplicity
    std::uint64_t max_step_exact = 0;
    std::uint64_t max_step_predicted = 0;
    bool bound_tight = false;

    friend bool operator==(const SurveyRow&, const SurveyRow&) = default;
};

struct ScalingCheck {
    std::uint64_t odd_part = 0;
    std::vector<std::uint64_t> bases;
    bool consistent = false;
    std::string detail;

    friend bool operator==(const ScalingCheck&, const ScalingCheck&) = default;
};

struct SurveyResult {
    unsigned digits = 0;
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::vector<SurveyRow> rows;
    std::vector<ScalingCheck> scaling_checks;  // 2-digit surveys only
    std::vector<std::string> skipped;          // per-base budget refusals

    friend bool operator==(const SurveyResult&, const SurveyResult&) = default;
};

inline SurveyResult survey(std::uint64_t lo, std::uint64_t hi, unsigned digits,
                           const VerifyConfig& cfg = {}) {
    if (digits != 2 && digits != 3)
        throw std::domain_error("survey covers 2- and 3-digit systems, got " +
                                std::to_string(digits) + " digits");
    if (lo > hi)
        throw std::domain_error("empty base range " + std::to_string(lo) + ".." +
                                std::to_string(hi));
    (void)Base(lo);  // validates lo >= 2

    SurveyResult result;
    result.digits = digits;
    result.lo = lo;
    result.hi = hi;

    for (std::uint64_t mm = lo; mm <= hi; ++mm) {
        const Base m(mm);
        SystemReport sys;
        try {
            const Value states = domain_size(m, digits);
            const Value budget = cfg.state_budget != 0
                                     ? cfg.state_budget
                                     : (digits == 2 ? two_digit_default_budget
                                                    : three_digit_default_budget);
            EngineConfig ec;
            ec.state_budget = budget;
            ec.workers = cfg.workers;
            if (states > budget)
                throw budget_error(std::to_string(states) + " states, over the budget of " +
                                   std::to_string(budget));
            sys = analyze_system(m, digits, ec);
        } catch (const budget_error& e) {
            result.skipped.push_back("m=" + std::to_string(mm) + ": " + e.what());
            continue;
        } catch (const std::overflow_error& e) {
            result.skipped.push_back("m=" + std::to_string(mm) + ": " + e.what());
            continue;
        }

        SurveyRow row;
        row.m = mm;
        row.digits = digits;
        if (digits == 2) {
            row.has_r = true;
            row.r = two_digit::two_adic_valuation(mm + 1);
            row.max_step_predicted = two_digit::max_step_bound(m);
        } else {
            row.max_step_predicted = three_digit::max_step(m);
        }
        for (const auto& c : sys.cycles) {
            if (detail::is_trivial_cycle(c)) continue;
            ++row.cycle_count;
            row.cycle_sizes.push_back(c.size());
        }
        std::sort(row.cycle_sizes.begin(), row.cycle_sizes.end());
        row.minimal_periods = row.cycle_sizes;
        row.minimal_periods.erase(
            std::unique(row.minimal_periods.begin(), row.minimal_periods.end()),
            row.minimal_periods.end());
        row.max_step_exact = sys.max_step;
        row.bound_tight = row.max_step_exact == row.max_step_predicted;
        result.rows.push_back(std::move(row));
    }

    if (digits == 2) {
        std::map<std::uint64_t, std::vector<std::uint64_t>> groups;  // odd part -> bases
        for (const auto& row : result.rows)
            groups[(row.m + 1) >> two_digit::two_adic_valuation(row.m + 1)].push_back(row.m);
        for (const auto& [odd_part, bases] : groups) {
            if (bases.size() < 2) continue;
            ScalingCheck sc;
            sc.odd_part = odd_part;
            sc.bases = bases;
            sc.consistent = true;
            for (std::size_t i = 1; i < bases.size(); ++i) {
                const CheckResult pair = scaling_check_pair(Base(bases[0]), Base(bases[i]));
                if (!pair.pass) {
                    sc.consistent = false;
                    sc.detail = pair.name + ": " + pair.observed;
                    break;
                }
            }
            if (sc.consistent)
                sc.detail = "all " + std::to_string(bases.size()) +
                            " bases share periods and scale into each other";
            result.scaling_checks.push_back(std::move(sc));
        }
    }
    return result;
}

}  // namespace kaprekar::verify
