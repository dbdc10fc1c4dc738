// Command-line front end: trace orbits, analyze single bases, run
// verification sweeps, and emit surveys as JSON or CSV.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage or domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kaprekar/kaprekar.hpp"

namespace {

using kaprekar::Base;
using kaprekar::EngineConfig;
using kaprekar::KaprekarMap;
using kaprekar::OrbitReport;
using kaprekar::SystemReport;
using kaprekar::Value;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct CliConfig {
    std::uint64_t base = 0;
    bool has_base = false;
    std::uint64_t range_lo = 0;
    std::uint64_t range_hi = 0;
    bool has_range = false;
    unsigned digits = 0;
    std::uint64_t value = 0;
    bool has_value = false;
    std::string format;  // json | csv | table
    std::string out_path;
    std::uint64_t budget = 0;  // 0 keeps library defaults
    unsigned threads = 1;
    bool show_digits = false;
    bool inject_mismatch = false;
};

class usage_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void parse_range(const std::string& text, CliConfig& cfg) {
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw usage_error("--base-range wants the form a..b, got '" + text + "'");
    try {
        std::size_t used = 0;
        cfg.range_lo = std::stoull(text.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument(text);
        const std::string hi = text.substr(dots + 2);
        cfg.range_hi = std::stoull(hi, &used);
        if (used != hi.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw usage_error("--base-range wants the form a..b, got '" + text + "'");
    }
    if (cfg.range_lo < 2)
        throw usage_error("base range starts below 2");
    if (cfg.range_lo > cfg.range_hi)
        throw usage_error("empty base range " + std::to_string(cfg.range_lo) + ".." +
                          std::to_string(cfg.range_hi));
    cfg.has_range = true;
}

// Digit tuple in the (most significant, ..., least significant) convention,
// e.g. 1176 in base 13 renders as (6,12,6).
std::string digit_tuple(Value x, Base m, unsigned n) {
    const auto dv = kaprekar::to_digits(x, m, n);
    std::string out = "(";
    for (unsigned i = 0; i < n; ++i) {
        if (i > 0) out += ",";
        out += std::to_string(dv.digits[i]);
    }
    return out + ")";
}

std::string render_value(Value x, Base m, unsigned n, bool show_digits) {
    std::string out = std::to_string(x);
    if (show_digits) out += digit_tuple(x, m, n);
    return out;
}

template <typename T>
std::string join(const std::vector<T>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

std::string set_line(const std::vector<Value>& v) { return "{" + join(v, " ") + "}"; }

std::string cycles_line(const std::vector<std::vector<Value>>& cs) {
    std::string out = "[";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i > 0) out += " ";
        out += "(" + join(cs[i], " ") + ")";
    }
    return out + "]";
}

ordered_json json_cycles(const std::vector<std::vector<Value>>& cs) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : cs) arr.push_back(c);
    return arr;
}

ordered_json json_engine_block(const SystemReport& sys) {
    ordered_json j;
    j["domain_size"] = sys.domain_size;
    j["max_step"] = sys.max_step;
    j["argmax_values"] = sys.argmax_values;
    j["cycles"] = json_cycles(sys.cycles);
    j["basin_sizes"] = sys.basin_sizes;
    return j;
}

void check_format(const CliConfig& cfg, bool csv_allowed) {
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "table")
        throw usage_error("--format wants json, csv, or table, got '" + cfg.format + "'");
    if (cfg.format == "csv" && !csv_allowed)
        throw usage_error("csv output is only defined for survey");
}

// Output goes through a buffer so --out failures surface before any work and
// the file, when requested, receives exactly the bytes stdout would have.
void emit(const std::string& text, const CliConfig& cfg) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw usage_error("cannot open output path '" + cfg.out_path + "'");
    out << text;
    if (!out) throw usage_error("cannot write output path '" + cfg.out_path + "'");
}

void require_writable(const CliConfig& cfg) {
    if (cfg.out_path.empty()) return;
    std::ofstream probe(cfg.out_path, std::ios::binary | std::ios::app);
    if (!probe) throw usage_error("cannot open output path '" + cfg.out_path + "'");
}

std::string arrow_chain(const OrbitReport& rep, Base m, unsigned n, bool show_digits) {
    std::string out;
    for (const Value x : rep.tail) out += render_value(x, m, n, show_digits) + " → ";
    out += "[";
    for (std::size_t i = 0; i < rep.cycle.size(); ++i) {
        if (i > 0) out += " → ";
        out += render_value(rep.cycle[i], m, n, show_digits);
    }
    if (rep.cycle.size() > 1)
        out += " → " + render_value(rep.cycle.front(), m, n, show_digits);
    return out + "]";
}

int run_trace(const CliConfig& cfg) {
    require_writable(cfg);
    check_format(cfg, false);
    if (cfg.digits < 2) throw usage_error("--digits must be at least 2");
    const Base m(cfg.base);
    const KaprekarMap f(m, cfg.digits);
    const OrbitReport rep = kaprekar::analyze_orbit(f, cfg.value);

    std::ostringstream out;
    if (cfg.format == "json") {
        ordered_json j;
        j["base"] = cfg.base;
        j["digits"] = cfg.digits;
        j["start"] = rep.start;
        j["tail"] = rep.tail;
        j["cycle"] = rep.cycle;
        j["step"] = rep.step;
        j["period"] = rep.period;
        out << j.dump(2) << "\n";
    } else {
        out << "base " << cfg.base << ", " << cfg.digits << " digits, start "
            << render_value(rep.start, m, cfg.digits, cfg.show_digits) << "\n";
        out << arrow_chain(rep, m, cfg.digits, cfg.show_digits) << "\n";
        out << "step " << rep.step << ", period " << rep.period << "\n";
    }
    emit(out.str(), cfg);
    return kExitOk;
}

// Engine confirmation for analyze; returns false when the domain is over
// budget or too wide to enumerate, with the reason in `skip_reason`.
bool engine_block(const CliConfig& cfg, SystemReport& sys, std::string& skip_reason) {
    try {
        EngineConfig ec;
        ec.state_budget = cfg.budget != 0 ? cfg.budget : (Value{1} << 30);
        ec.workers = cfg.threads;
        sys = kaprekar::analyze_system(Base(cfg.base), cfg.digits, ec);
        return true;
    } catch (const kaprekar::budget_error& e) {
        skip_reason = e.what();
        return false;
    } catch (const std::overflow_error& e) {
        skip_reason = e.what();
        return false;
    }
}

// Index sets grow like m / 2^r; past this many entries the listing is noise,
// so analyze reports the counts and moves on.
constexpr Value kListingCap = Value{1} << 20;

int run_analyze(const CliConfig& cfg) {
    require_writable(cfg);
    check_format(cfg, false);
    if (cfg.digits < 2) throw usage_error("--digits must be at least 2");
    const Base m(cfg.base);

    SystemReport sys;
    std::string engine_skip;
    const bool have_engine = engine_block(cfg, sys, engine_skip);

    std::ostringstream out;
    ordered_json j;
    std::vector<std::string> notes;
    j["base"] = cfg.base;
    j["digits"] = cfg.digits;

    if (cfg.format == "table")
        out << "base " << cfg.base << ", " << cfg.digits << " digits\n";

    if (cfg.digits == 2) {
        const unsigned r = kaprekar::two_digit::two_adic_valuation(m.m + 1);
        const auto periods = kaprekar::two_digit::minimal_periods(m);
        const auto bound = kaprekar::two_digit::max_step_bound(m);
        const bool list_sets = (m.m >> r) < kListingCap;

        j["r"] = r;
        j["minimal_periods"] = periods;
        j["max_step_bound"] = bound;
        if (cfg.format == "table") {
            out << "r = v2(m+1) = " << r << "  [analytic]\n";
            out << "minimal periods: " << set_line(periods) << "  [analytic]\n";
            out << "max step: <= " << bound << "  [analytic]\n";
        }
        if (list_sets) {
            const auto indexes = kaprekar::two_digit::periodic_indexes(m);
            const auto cycles = kaprekar::two_digit::fixed_sets(m);
            std::vector<std::vector<Value>> value_cycles;
            for (const auto& c : cycles) {
                std::vector<Value> vc;
                vc.reserve(c.size());
                for (const Value a : c) vc.push_back(a * (m.m - 1));
                value_cycles.push_back(std::move(vc));
            }
            j["periodic_indexes"] = indexes;
            j["fixed_sets_indexes"] = json_cycles(cycles);
            j["fixed_sets_values"] = json_cycles(value_cycles);
            if (cfg.format == "table") {
                out << "periodic indexes: " << set_line(indexes) << "  [analytic]\n";
                out << "fixed sets (indexes): " << cycles_line(cycles) << "  [analytic]\n";
                out << "fixed sets (values): " << cycles_line(value_cycles)
                    << "  [analytic]\n";
            }
        } else {
            j["periodic_indexes"] = nullptr;
            j["fixed_sets_indexes"] = nullptr;
            j["fixed_sets_values"] = nullptr;
            notes.push_back("index sets near " + std::to_string(m.m >> r) +
                            " entries; listing skipped");
        }
    } else if (cfg.digits == 3) {
        const auto theory = kaprekar::three_digit::analyze(m);
        j["fixed_indexes"] = theory.fixed_indexes;
        j["fixed_values"] = theory.fixed_values;
        j["max_step"] = theory.max_step;
        if (cfg.format == "table") {
            out << "fixed indexes: " << set_line(theory.fixed_indexes) << "  [analytic]\n";
            out << "fixed values: " << set_line(theory.fixed_values) << "  [analytic]\n";
            out << "max step: S(X) = " << theory.max_step << "  [analytic]\n";
        }
    } else {
        notes.push_back("no closed-form analysis for " + std::to_string(cfg.digits) +
                        "-digit systems; engine results only");
    }

    if (have_engine) {
        j["engine"] = json_engine_block(sys);
        if (cfg.format == "table") {
            out << "max step: = " << sys.max_step;
            if (!sys.argmax_values.empty())
                out << ", attained at x = "
                    << render_value(sys.argmax_values.front(), m, cfg.digits,
                                    cfg.show_digits);
            out << "  [engine]\n";
            out << "cycles: " << cycles_line(sys.cycles) << "  [engine]\n";
        }
    } else {
        j["engine"] = nullptr;
        notes.push_back("engine confirmation skipped: " + engine_skip);
    }

    j["notes"] = notes;
    if (cfg.format == "json") {
        out << j.dump(2) << "\n";
    } else {
        for (const auto& n : notes) out << "note: " << n << "\n";
    }
    emit(out.str(), cfg);
    return kExitOk;
}

ordered_json json_report(const kaprekar::verify::VerificationReport& rep) {
    ordered_json j;
    j["m"] = rep.m;
    j["digits"] = rep.digits;
    ordered_json checks = ordered_json::array();
    for (const auto& chk : rep.checks) {
        ordered_json c;
        c["name"] = chk.name;
        c["predicted"] = chk.predicted;
        c["observed"] = chk.observed;
        c["pass"] = chk.pass;
        c["counterexample"] = chk.counterexample;
        checks.push_back(std::move(c));
    }
    j["checks"] = std::move(checks);
    j["notes"] = rep.notes;
    j["overall"] = rep.overall;
    return j;
}

int run_verify(const CliConfig& cfg) {
    require_writable(cfg);
    check_format(cfg, false);
    if (cfg.digits != 2 && cfg.digits != 3)
        throw usage_error("verify covers 2- and 3-digit systems, got --digits " +
                          std::to_string(cfg.digits));
    const std::uint64_t lo = cfg.has_range ? cfg.range_lo : cfg.base;
    const std::uint64_t hi = cfg.has_range ? cfg.range_hi : cfg.base;

    kaprekar::verify::VerifyConfig vc;
    vc.state_budget = cfg.budget;
    vc.workers = cfg.threads;
    vc.inject_mismatch = cfg.inject_mismatch;

    std::ostringstream out;
    ordered_json jreports = ordered_json::array();
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    for (std::uint64_t mm = lo; mm <= hi; ++mm) {
        const auto rep = cfg.digits == 2
                             ? kaprekar::verify::verify_two_digit(Base(mm), vc)
                             : kaprekar::verify::verify_three_digit(Base(mm), vc);
        (rep.overall ? passed : failed) += 1;
        if (cfg.format == "json") {
            jreports.push_back(json_report(rep));
            continue;
        }
        out << "base " << mm << " [" << cfg.digits << " digits]: "
            << (rep.overall ? "PASS" : "FAIL") << "\n";
        for (const auto& chk : rep.checks) {
            out << "  [" << (chk.pass ? "ok" : "FAIL") << "] " << chk.name << "\n";
            if (!chk.pass) {
                out << "        predicted: " << chk.predicted << "\n";
                out << "        observed:  " << chk.observed << "\n";
                if (!chk.counterexample.empty())
                    out << "        counterexample: " << chk.counterexample << "\n";
            }
        }
        for (const auto& note : rep.notes) out << "  note: " << note << "\n";
    }

    if (cfg.format == "json") {
        ordered_json j;
        j["digits"] = cfg.digits;
        j["lo"] = lo;
        j["hi"] = hi;
        j["reports"] = std::move(jreports);
        j["passed"] = passed;
        j["failed"] = failed;
        out << j.dump(2) << "\n";
    } else {
        out << "verified " << (passed + failed) << " base" << (passed + failed == 1 ? "" : "s")
            << ": " << passed << " pass, " << failed << " fail\n";
    }
    emit(out.str(), cfg);
    return failed == 0 ? kExitOk : kExitMismatch;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

int run_survey(const CliConfig& cfg) {
    require_writable(cfg);
    check_format(cfg, true);
    if (!cfg.has_range)
        throw usage_error("survey wants --base-range a..b (or --base m for one base)");

    kaprekar::verify::VerifyConfig vc;
    vc.state_budget = cfg.budget;
    vc.workers = cfg.threads;
    const auto result = kaprekar::verify::survey(cfg.range_lo, cfg.range_hi, cfg.digits, vc);

    for (const auto& skip : result.skipped) std::cerr << "skipped " << skip << "\n";

    std::ostringstream out;
    if (cfg.format == "csv") {
        out << "m,digits,r,minimal_periods,cycle_count,cycle_sizes,max_step_exact,"
               "max_step_predicted,bound_tight\n";
        for (const auto& row : result.rows) {
            out << row.m << "," << row.digits << ",";
            if (row.has_r) out << row.r;
            out << "," << join(row.minimal_periods, ";") << "," << row.cycle_count << ","
                << join(row.cycle_sizes, ";") << "," << row.max_step_exact << ","
                << row.max_step_predicted << "," << csv_bool(row.bound_tight) << "\n";
        }
    } else if (cfg.format == "json") {
        ordered_json j;
        j["digits"] = result.digits;
        j["lo"] = result.lo;
        j["hi"] = result.hi;
        ordered_json rows = ordered_json::array();
        for (const auto& row : result.rows) {
            ordered_json r;
            r["m"] = row.m;
            r["digits"] = row.digits;
            if (row.has_r)
                r["r"] = row.r;
            else
                r["r"] = nullptr;
            r["minimal_periods"] = row.minimal_periods;
            r["cycle_count"] = row.cycle_count;
            r["cycle_sizes"] = row.cycle_sizes;
            r["max_step_exact"] = row.max_step_exact;
            r["max_step_predicted"] = row.max_step_predicted;
            r["bound_tight"] = row.bound_tight;
            rows.push_back(std::move(r));
        }
        j["rows"] = std::move(rows);
        ordered_json scaling = ordered_json::array();
        for (const auto& sc : result.scaling_checks) {
            ordered_json s;
            s["odd_part"] = sc.odd_part;
            s["bases"] = sc.bases;
            s["consistent"] = sc.consistent;
            s["detail"] = sc.detail;
            scaling.push_back(std::move(s));
        }
        j["scaling_checks"] = std::move(scaling);
        j["skipped"] = result.skipped;
        out << j.dump(2) << "\n";
    } else {
        out << "survey: " << cfg.digits << "-digit systems, bases " << result.lo << ".."
            << result.hi << "\n";
        out << "m\tr\tperiods\tcycles\tsizes\tS_exact\tS_pred\ttight\n";
        for (const auto& row : result.rows) {
            out << row.m << "\t";
            if (row.has_r) out << row.r;
            out << "\t" << join(row.minimal_periods, ";") << "\t" << row.cycle_count << "\t"
                << join(row.cycle_sizes, ";") << "\t" << row.max_step_exact << "\t"
                << row.max_step_predicted << "\t" << csv_bool(row.bound_tight) << "\n";
        }
        for (const auto& sc : result.scaling_checks)
            out << "scaling odd_part=" << sc.odd_part << " bases {" << join(sc.bases, " ")
                << "}: " << (sc.consistent ? "consistent" : "INCONSISTENT") << " (" << sc.detail
                << ")\n";
    }
    emit(out.str(), cfg);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kaprekar routine toolkit: exact cycle structure, step counts, and "
                 "engine-vs-formula verification for n-digit systems in any base"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string range_text;

    auto add_common = [&](CLI::App* sub, const char* default_format) {
        sub->add_option("--format", cfg.format,
                        std::string("Output format: json, csv, or table (default: ") +
                            default_format + ")");
        sub->add_option("--out", cfg.out_path, "Write output to this path instead of stdout");
        sub->add_option("--budget", cfg.budget,
                        "Max states for exhaustive runs (0 keeps the built-in default)");
        sub->add_option("--threads", cfg.threads, "Worker threads for exhaustive runs");
    };

    CLI::App* trace = app.add_subcommand("trace", "Follow one value to its cycle");
    trace->add_option("--base", cfg.base, "Radix m >= 2")->required();
    trace->add_option("--digits", cfg.digits, "Digit count n >= 2")->required();
    trace->add_option("--value", cfg.value, "Start value, 0 <= x < m^n")->required();
    trace->add_flag("--show-digits", cfg.show_digits,
                    "Render each value also as a base-m digit tuple (table format)");
    add_common(trace, "table");

    CLI::App* analyze = app.add_subcommand("analyze", "Closed-form structure of one base");
    analyze->add_option("--base", cfg.base, "Radix m >= 2")->required();
    analyze->add_option("--digits", cfg.digits, "Digit count n >= 2")->required();
    analyze->add_flag("--show-digits", cfg.show_digits,
                      "Render highlighted values also as base-m digit tuples (table format)");
    add_common(analyze, "table");

    CLI::App* verify = app.add_subcommand(
        "verify", "Check the closed forms against exhaustive enumeration");
    verify->add_option("--base", cfg.base, "Single radix to verify");
    verify->add_option("--base-range", range_text, "Inclusive radix range a..b");
    verify->add_option("--digits", cfg.digits, "Digit count: 2 or 3")->required();
    verify->add_flag("--inject-mismatch", cfg.inject_mismatch,
                     "Corrupt one prediction per base to exercise the failure path");
    add_common(verify, "table");

    CLI::App* survey = app.add_subcommand(
        "survey", "Tabulate cycle structure and step counts over a base range");
    survey->add_option("--base", cfg.base, "Single radix to tabulate");
    survey->add_option("--base-range", range_text, "Inclusive radix range a..b");
    survey->add_option("--digits", cfg.digits, "Digit count: 2 or 3")->required();
    add_common(survey, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        CLI::App* active = trace->parsed()     ? trace
                           : analyze->parsed() ? analyze
                           : verify->parsed()  ? verify
                                               : survey;
        if (active->count("--format") == 0) cfg.format = active == survey ? "csv" : "table";

        for (CLI::App* sub : {verify, survey}) {
            if (!sub->parsed()) continue;
            const bool has_base = sub->count("--base") > 0;
            const bool has_range = sub->count("--base-range") > 0;
            if (has_base == has_range)
                throw usage_error(sub->get_name() + " wants exactly one of --base, --base-range");
            if (has_range) {
                parse_range(range_text, cfg);
            } else {
                cfg.range_lo = cfg.range_hi = cfg.base;
                cfg.has_range = true;
            }
        }

        if (trace->parsed()) return run_trace(cfg);
        if (analyze->parsed()) return run_analyze(cfg);
        if (verify->parsed()) return run_verify(cfg);
        return run_survey(cfg);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const kaprekar::budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
}
