#pragma once

// Exact orbit analysis for finite discrete dynamical systems. Works for any
// pure self-map on {0, ..., N-1}; knows nothing about digits. Single orbits
// use Brent's cycle finding, exhaustive runs use either one shared memo
// table (serial default) or a direct per-orbit walk that partitions the
// domain across workers and merges deterministically.

#include <algorithm>
#include <cstdint>
#include <concepts>
#include <exception>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "base_digits.hpp"

namespace kaprekar {

/// Contract for a finite discrete dynamical system: a pure self-map on
/// {0, ..., domain_size() - 1}.
template <typename F>
concept SelfMap = requires(const F& f, Value x) {
    { f(x) } -> std::convertible_to<Value>;
    { f.domain_size() } -> std::convertible_to<Value>;
};

/// Thrown when a SelfMap steps outside its declared domain.
class closure_error : public std::logic_error {
public:
    closure_error(Value arg, Value img, Value size)
        : std::logic_error("self-map closure violated: f(" + std::to_string(arg) + ") = " +
                           std::to_string(img) + " lies outside the domain of size " +
                           std::to_string(size)),
          argument(arg),
          image(img) {}

    Value argument;
    Value image;
};

/// Thrown when an exhaustive run would exceed the configured state budget.
class budget_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EngineConfig {
    /// Exhaustive analysis refuses domains with more states than this.
    Value state_budget = Value{1} << 30;
    /// analyze_orbit aborts once a tail grows past this; it never truncates.
    std::uint64_t tail_cap = 1'000'000;
    /// Worker threads for exhaustive analysis: 1 = serial, 0 = hardware pick.
    unsigned workers = 1;
    /// Serial exhaustive runs share one memo table across orbits by default.
    /// With memoize = false (or workers > 1) every orbit is walked directly;
    /// both modes produce identical reports.
    bool memoize = true;
};

/// Full decomposition of one orbit: x needs step applications to enter its
/// cycle, which then repeats with minimal period.
struct OrbitReport {
    Value start = 0;
    std::uint64_t step = 0;
    std::uint64_t period = 0;
    std::vector<Value> tail;   // f^0(x), ..., f^(step-1)(x)
    std::vector<Value> cycle;  // trajectory order from f^step(x)

    friend bool operator==(const OrbitReport&, const OrbitReport&) = default;
};

/// Whole-domain summary. Cycles are canonical: each rotated so its smallest
/// member leads, the list sorted by that member, basin sizes aligned.
struct SystemReport {
    std::uint64_t base = 0;    // stamped by analyze_system, 0 for generic maps
    unsigned digit_count = 0;  // likewise
    Value domain_size = 0;
    std::uint64_t max_step = 0;
    std::vector<Value> argmax_values;  // every x attaining max_step, ascending
    std::vector<std::vector<Value>> cycles;
    std::vector<std::uint64_t> basin_sizes;

    friend bool operator==(const SystemReport&, const SystemReport&) = default;
};

namespace detail {

struct NullSink {
    void operator()(Value, std::uint64_t) const noexcept {}
};

template <SelfMap F>
inline Value checked_eval(const F& f, Value x, Value size) {
    const Value y = f(x);
    if (y >= size) throw closure_error(x, y, size);
    return y;
}

/// Brent's algorithm: minimal period first, then the entry step.
template <SelfMap F>
inline std::pair<std::uint64_t, std::uint64_t> find_step_period(const F& f, Value x, Value size,
                                                                std::uint64_t tail_cap) {
    Value tortoise = x;
    Value hare = checked_eval(f, x, size);
    std::uint64_t power = 1;
    std::uint64_t period = 1;
    while (tortoise != hare) {
        if (power == period) {
            tortoise = hare;
            power <<= 1;
            period = 0;
        }
        hare = checked_eval(f, hare, size);
        ++period;
    }

    Value ahead = x;
    for (std::uint64_t i = 0; i < period; ++i) ahead = checked_eval(f, ahead, size);
    Value walker = x;
    std::uint64_t step = 0;
    while (walker != ahead) {
        walker = checked_eval(f, walker, size);
        ahead = checked_eval(f, ahead, size);
        if (++step > tail_cap)
            throw budget_error("orbit tail of " + std::to_string(x) +
                               " exceeds the configured cap of " + std::to_string(tail_cap));
    }
    return {step, period};
}

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Memo-table sentinels must stay above any real cycle id.
inline constexpr std::uint32_t memo_unvisited = 0xFFFFFFFFu;
inline constexpr std::uint32_t memo_on_path = 0xFFFFFFFEu;
inline constexpr Value memo_domain_limit = Value{0xFFFF0000u};

template <SelfMap F, typename Sink>
SystemReport exhaustive_memo(const F& f, Sink&& sink) {
    const Value n = f.domain_size();
    // owner: memo_unvisited, memo_on_path (step then holds the path index),
    // or the id of the cycle the value drains into.
    std::vector<std::uint32_t> owner(n, memo_unvisited);
    std::vector<std::uint32_t> step(n);
    std::vector<std::vector<Value>> cycles;
    std::vector<Value> path;

    for (Value x = 0; x < n; ++x) {
        if (owner[x] != memo_unvisited) continue;
        path.clear();
        Value cur = x;
        while (owner[cur] == memo_unvisited) {
            owner[cur] = memo_on_path;
            step[cur] = static_cast<std::uint32_t>(path.size());
            path.push_back(cur);
            cur = checked_eval(f, cur, n);
        }
        const std::uint32_t len = static_cast<std::uint32_t>(path.size());
        if (owner[cur] == memo_on_path) {
            const std::uint32_t pos = step[cur];
            const std::uint32_t cid = static_cast<std::uint32_t>(cycles.size());
            cycles.emplace_back(path.begin() + pos, path.end());
            for (std::uint32_t i = pos; i < len; ++i) {
                owner[path[i]] = cid;
                step[path[i]] = 0;
            }
            for (std::uint32_t i = pos; i-- > 0;) {
                owner[path[i]] = cid;
                step[path[i]] = pos - i;
            }
        } else {
            const std::uint32_t cid = owner[cur];
            const std::uint32_t into = step[cur];
            for (std::uint32_t i = len; i-- > 0;) {
                owner[path[i]] = cid;
                step[path[i]] = into + (len - i);
            }
        }
    }

    for (auto& c : cycles) std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
    std::vector<std::uint32_t> order(cycles.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return cycles[a].front() < cycles[b].front(); });
    std::vector<std::uint32_t> rank(cycles.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    SystemReport report;
    report.domain_size = n;
    report.cycles.resize(cycles.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) report.cycles[i] = std::move(cycles[order[i]]);
    report.basin_sizes.assign(report.cycles.size(), 0);
    for (Value x = 0; x < n; ++x) ++report.basin_sizes[rank[owner[x]]];

    for (Value x = 0; x < n; ++x) {
        if (step[x] > report.max_step) {
            report.max_step = step[x];
            report.argmax_values.clear();
        }
        if (step[x] == report.max_step) report.argmax_values.push_back(x);
    }
    for (Value x = 0; x < n; ++x) sink(x, step[x]);
    return report;
}

struct CycleAccum {
    std::vector<Value> canonical;
    std::uint64_t basin = 0;
};

struct Partial {
    std::uint64_t max_step = 0;
    bool started = false;
    std::vector<Value> argmax;
    std::map<Value, CycleAccum> cycles;  // keyed by cycle minimum
    std::exception_ptr error;
};

template <SelfMap F>
void direct_chunk(const F& f, Value lo, Value hi, Value n, std::uint64_t tail_cap,
                  Partial& out, std::uint32_t* step_slot) {
    for (Value x = lo; x < hi; ++x) {
        const auto [step, period] = find_step_period(f, x, n, tail_cap);
        Value entry = x;
        for (std::uint64_t i = 0; i < step; ++i) entry = checked_eval(f, entry, n);
        Value least = entry;
        Value v = entry;
        for (std::uint64_t i = 1; i < period; ++i) {
            v = checked_eval(f, v, n);
            least = std::min(least, v);
        }
        auto [it, inserted] = out.cycles.try_emplace(least);
        if (inserted) {
            auto& canonical = it->second.canonical;
            canonical.reserve(period);
            Value c = least;
            for (std::uint64_t i = 0; i < period; ++i) {
                canonical.push_back(c);
                c = checked_eval(f, c, n);
            }
        }
        ++it->second.basin;
        if (!out.started || step > out.max_step) {
            out.started = true;
            out.max_step = step;
            out.argmax.assign(1, x);
        } else if (step == out.max_step) {
            out.argmax.push_back(x);
        }
        if (step_slot != nullptr) step_slot[x] = static_cast<std::uint32_t>(step);
    }
}

template <SelfMap F, typename Sink>
SystemReport exhaustive_direct(const F& f, const EngineConfig& cfg, Sink&& sink) {
    constexpr bool has_sink = !std::is_same_v<std::decay_t<Sink>, NullSink>;
    const Value n = f.domain_size();
    std::vector<std::uint32_t> steps;
    if constexpr (has_sink) steps.resize(n);

    const unsigned workers =
        static_cast<unsigned>(std::min<Value>(resolve_workers(cfg.workers), n));
    std::vector<Partial> partials(workers);
    const Value chunk = n / workers;
    const Value extra = n % workers;

    auto run = [&](unsigned w, Value lo, Value hi) {
        try {
            direct_chunk(f, lo, hi, n, cfg.tail_cap, partials[w], steps.empty() ? nullptr : steps.data());
        } catch (...) {
            partials[w].error = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0, 0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        Value lo = 0;
        for (unsigned w = 0; w < workers; ++w) {
            const Value hi = lo + chunk + (w < extra ? 1 : 0);
            pool.emplace_back(run, w, lo, hi);
            lo = hi;
        }
        for (auto& t : pool) t.join();
    }
    for (auto& p : partials)
        if (p.error) std::rethrow_exception(p.error);

    // Deterministic merge: cycle keys ascend in the map, workers ascend by
    // chunk, chunks ascend by value, so every output is ordered by content.
    SystemReport report;
    report.domain_size = n;
    std::map<Value, CycleAccum> merged;
    for (auto& p : partials) {
        for (auto& [least, accum] : p.cycles) {
            auto [it, inserted] = merged.try_emplace(least);
            if (inserted) {
                it->second.canonical = std::move(accum.canonical);
            } else if (it->second.canonical != accum.canonical) {
                throw std::logic_error("workers disagree on the cycle through " +
                                       std::to_string(least));
            }
            it->second.basin += accum.basin;
        }
        if (p.started && p.max_step > report.max_step) report.max_step = p.max_step;
    }
    for (auto& p : partials)
        if (p.started && p.max_step == report.max_step)
            report.argmax_values.insert(report.argmax_values.end(), p.argmax.begin(),
                                        p.argmax.end());
    for (auto& [least, accum] : merged) {
        report.cycles.push_back(std::move(accum.canonical));
        report.basin_sizes.push_back(accum.basin);
    }
    if constexpr (has_sink)
        for (Value x = 0; x < n; ++x) sink(x, steps[x]);
    return report;
}

}  // namespace detail

/// f^t(x): t-fold application, f^0(x) = x.
template <SelfMap F>
Value iterate(const F& f, Value x, std::uint64_t t) {
    const Value size = f.domain_size();
    if (x >= size)
        throw std::domain_error("start value " + std::to_string(x) +
                                " outside the domain of size " + std::to_string(size));
    for (; t > 0; --t) x = detail::checked_eval(f, x, size);
    return x;
}

/// Step, minimal period, tail, and cycle of the orbit of x.
template <SelfMap F>
OrbitReport analyze_orbit(const F& f, Value x, const EngineConfig& cfg = {}) {
    const Value size = f.domain_size();
    if (x >= size)
        throw std::domain_error("start value " + std::to_string(x) +
                                " outside the domain of size " + std::to_string(size));
    const auto [step, period] = detail::find_step_period(f, x, size, cfg.tail_cap);

    OrbitReport report;
    report.start = x;
    report.step = step;
    report.period = period;
    report.tail.reserve(step);
    report.cycle.reserve(period);
    Value v = x;
    for (std::uint64_t i = 0; i < step; ++i) {
        report.tail.push_back(v);
        v = detail::checked_eval(f, v, size);
    }
    for (std::uint64_t i = 0; i < period; ++i) {
        report.cycle.push_back(v);
        v = detail::checked_eval(f, v, size);
    }
    return report;
}

/// Whole-domain analysis. The sink, when given, receives (x, step) for every
/// x in ascending order; memoized, direct, and parallel runs all produce
/// identical reports and sink sequences.
template <SelfMap F, typename Sink>
    requires std::invocable<Sink&, Value, std::uint64_t>
SystemReport exhaustive_analysis(const F& f, const EngineConfig& cfg, Sink&& sink) {
    const Value n = f.domain_size();
    if (n == 0) throw std::domain_error("self-map domain must not be empty");
    if (n > cfg.state_budget)
        throw budget_error("domain of " + std::to_string(n) +
                           " states exceeds the enumeration budget of " +
                           std::to_string(cfg.state_budget) +
                           "; raise the budget to proceed");
    constexpr bool has_sink = !std::is_same_v<std::decay_t<Sink>, detail::NullSink>;
    if (has_sink && n > detail::memo_domain_limit)
        throw budget_error("per-value step tables support at most " +
                           std::to_string(detail::memo_domain_limit) + " states");

    if (cfg.memoize && cfg.workers <= 1 && n <= detail::memo_domain_limit)
        return detail::exhaustive_memo(f, std::forward<Sink>(sink));
    return detail::exhaustive_direct(f, cfg, std::forward<Sink>(sink));
}

template <SelfMap F>
SystemReport exhaustive_analysis(const F& f, const EngineConfig& cfg = {}) {
    return exhaustive_analysis(f, cfg, detail::NullSink{});
}

/// Exhaustive analysis of the (m, n) Kaprekar system, with the report
/// stamped by base and digit count.
template <typename Sink>
SystemReport analyze_system(Base m, unsigned digit_count, const EngineConfig& cfg, Sink&& sink) {
    const KaprekarMap f(m, digit_count);
    SystemReport report = exhaustive_analysis(f, cfg, std::forward<Sink>(sink));
    report.base = m.m;
    report.digit_count = digit_count;
    return report;
}

inline SystemReport analyze_system(Base m, unsigned digit_count, const EngineConfig& cfg = {}) {
    return analyze_system(m, digit_count, cfg, detail::NullSink{});
}

}  // namespace kaprekar
