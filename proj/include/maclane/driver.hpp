#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "maclane/cache.hpp"
#include "maclane/hochschild.hpp"
#include "maclane/selftest.hpp"
#include "maclane/table_io.hpp"

namespace maclane {

enum class Command { hml, q_homology, additivity, selftest };
enum class OutputFormat { text, json };

/// Exit statuses the CLI maps errors onto.
enum ExitStatus : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_parse_error = 2,
    exit_validation_error = 3,
    exit_budget_error = 4,
};

struct ComputationRequest {
    Command command = Command::selftest;
    std::string ring_spec;             // hml: "Z/n" or a table file path
    std::string coefficients = "self"; // hml: "self" or a bimodule table file path
    std::string group_spec;            // q-homology
    std::string left_spec, right_spec; // additivity
    int max_degree = 0;
    std::uint64_t budget = k_default_budget;
    OutputFormat format = OutputFormat::text;
    std::string cache_dir; // empty = caching disabled
};

struct Report {
    int exit_code = exit_ok;
    std::string body; // rendered in the requested format, newline-terminated
};

namespace driver_detail {

using Clock = std::chrono::steady_clock;

inline long long ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

inline QProviders providers_for(const QCache& cache) {
    QProviders p;
    p.basis = [&cache](const FinAbGroup& g, int n, std::uint64_t budget) { return cache.basis(g, n, budget); };
    p.delta = [&cache](const FinAbGroup& g, int n, std::uint64_t budget) { return cache.delta(g, n, budget); };
    return p;
}

inline std::string render(const nlohmann::ordered_json& j, const std::vector<std::string>& text_lines,
                          OutputFormat format) {
    if (format == OutputFormat::json) return j.dump(2) + "\n";
    std::string out;
    for (const auto& line : text_lines) out += line + "\n";
    return out;
}

} // namespace driver_detail

inline Report run(const ComputationRequest& request) {
    using driver_detail::ms_since;
    using nlohmann::ordered_json;
    QCache cache(request.cache_dir);
    QProviders providers = driver_detail::providers_for(cache);
    const QProviders* prov = cache.enabled() ? &providers : nullptr;

    ordered_json j;
    std::vector<std::string> lines;
    Report report;

    try {
        if (request.max_degree < 0) throw ParseError("max degree must be >= 0");
        if (request.budget < 1) throw ParseError("budget must be >= 1");
        switch (request.command) {
        case Command::hml: {
            if (request.ring_spec.empty()) throw ParseError("hml needs a ring spec");
            RingTable ring = ring_from_spec_or_file(request.ring_spec);
            BimoduleTable module = coefficients_from_spec(ring, request.coefficients);
            const int k = request.max_degree;
            auto start = driver_detail::Clock::now();
            TotalComplex tc(ring, module, k, request.budget, false, prov);
            const long long setup = ms_since(start); // complex construction counts toward degree 0
            std::vector<std::string> groups;
            std::vector<long long> timings;
            for (int d = 0; d <= k; ++d) {
                auto t0 = driver_detail::Clock::now();
                groups.push_back(tc.homology(d).to_string());
                timings.push_back(ms_since(t0));
            }
            timings[0] += setup;
            j["command"] = "hml";
            j["input"] = {{"ring", request.ring_spec}, {"coefficients", request.coefficients}};
            j["degrees"] = ordered_json::array();
            j["groups"] = ordered_json::array();
            for (int d = 0; d <= k; ++d) {
                j["degrees"].push_back(d);
                j["groups"].push_back(groups[static_cast<std::size_t>(d)]);
            }
            j["HML"] = j["groups"];
            j["timings_ms"] = timings;
            lines.push_back("HML of " + request.ring_spec + " with coefficients " + request.coefficients + ":");
            for (int d = 0; d <= k; ++d)
                lines.push_back("  HML_" + std::to_string(d) + " = " + groups[static_cast<std::size_t>(d)]);
            break;
        }
        case Command::q_homology: {
            if (request.group_spec.empty()) throw ParseError("q-homology needs a group spec");
            FinAbGroup group = FinAbGroup::parse(request.group_spec);
            const int k = request.max_degree;
            std::vector<QBasis> bases;
            std::vector<std::string> groups;
            std::vector<long long> timings;
            auto start = driver_detail::Clock::now();
            for (int n = 0; n <= k + 1; ++n) bases.push_back(provide_basis(prov, group, n, request.budget));
            FPComplex complex(0, k + 1);
            for (int n = 0; n <= k + 1; ++n) complex.set_free_group(n, bases[static_cast<std::size_t>(n)].rank());
            for (int n = 1; n <= k + 1; ++n)
                complex.set_diff(n, provide_delta(prov, group, n, request.budget, bases[static_cast<std::size_t>(n)],
                                                  bases[static_cast<std::size_t>(n - 1)]));
            const long long setup = ms_since(start);
            for (int d = 0; d <= k; ++d) {
                auto t0 = driver_detail::Clock::now();
                groups.push_back(homology_of_fp_complex(complex, d).to_string());
                timings.push_back(ms_since(t0));
            }
            timings[0] += setup;
            j["command"] = "q-homology";
            j["input"] = {{"group", request.group_spec}};
            j["degrees"] = ordered_json::array();
            j["groups"] = ordered_json::array();
            for (int d = 0; d <= k; ++d) {
                j["degrees"].push_back(d);
                j["groups"].push_back(groups[static_cast<std::size_t>(d)]);
            }
            j["timings_ms"] = timings;
            lines.push_back("H_*(Q(" + request.group_spec + ")):");
            for (int d = 0; d <= k; ++d)
                lines.push_back("  H_" + std::to_string(d) + " = " + groups[static_cast<std::size_t>(d)]);
            break;
        }
        case Command::additivity: {
            if (request.left_spec.empty() || request.right_spec.empty())
                throw ParseError("additivity needs left and right group specs");
            FinAbGroup u = FinAbGroup::parse(request.left_spec);
            FinAbGroup v = FinAbGroup::parse(request.right_spec);
            auto t0 = driver_detail::Clock::now();
            auto verdicts = additivity_check(u, v, request.max_degree, request.budget, prov);
            const long long elapsed = ms_since(t0);
            bool all_iso = true;
            j["command"] = "additivity";
            j["input"] = {{"left", request.left_spec}, {"right", request.right_spec}};
            j["degrees"] = ordered_json::array();
            j["groups"] = ordered_json::array();
            j["isomorphism"] = ordered_json::array();
            lines.push_back("Q(" + request.left_spec + ") (+) Q(" + request.right_spec + ") -> Q(direct sum):");
            for (const auto& verdict : verdicts) {
                j["degrees"].push_back(verdict.degree);
                j["groups"].push_back(verdict.target.to_string());
                j["isomorphism"].push_back(verdict.isomorphism);
                all_iso = all_iso && verdict.isomorphism;
                lines.push_back("  H_" + std::to_string(verdict.degree) + ": " + verdict.source.to_string() +
                                " -> " + verdict.target.to_string() +
                                (verdict.isomorphism ? "  [isomorphism]" : "  [NOT an isomorphism]"));
            }
            j["timings_ms"] = {elapsed};
            if (!all_iso) report.exit_code = exit_failure;
            break;
        }
        case Command::selftest: {
            auto t0 = driver_detail::Clock::now();
            auto results = run_selftest(request.budget);
            const long long elapsed = ms_since(t0);
            bool all_ok = true;
            j["command"] = "selftest";
            j["input"] = ordered_json::object();
            j["checks"] = ordered_json::array();
            for (const auto& r : results) {
                all_ok = all_ok && r.ok;
                j["checks"].push_back({{"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
                lines.push_back(std::string(r.ok ? "PASS " : "FAIL ") + r.name + (r.detail.empty() ? "" : "  (" + r.detail + ")"));
            }
            j["timings_ms"] = {elapsed};
            lines.push_back(all_ok ? "selftest: all checks passed" : "selftest: FAILURES present");
            if (!all_ok) report.exit_code = exit_failure;
            break;
        }
        }
    } catch (const ParseError& e) {
        report.exit_code = exit_parse_error;
        report.body = std::string("error: ") + e.what() + "\n";
        return report;
    } catch (const BudgetError& e) {
        report.exit_code = exit_budget_error;
        report.body = std::string("error: ") + e.what() + "\n";
        return report;
    } catch (const ValidationError& e) {
        report.exit_code = exit_validation_error;
        report.body = std::string("error: ") + e.what() + "\n";
        return report;
    } catch (const std::exception& e) {
        report.exit_code = exit_failure;
        report.body = std::string("error: ") + e.what() + "\n";
        return report;
    }

    report.body = driver_detail::render(j, lines, request.format);
    return report;
}

/// Default cache directory: the MACLANE_CACHE_DIR environment variable, if
/// set; otherwise caching is off.
inline std::string default_cache_dir() {
    const char* env = std::getenv("MACLANE_CACHE_DIR");
    return env ? env : "";
}

} // namespace maclane
