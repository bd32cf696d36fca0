#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "maclane/abgroup.hpp"

namespace maclane {

namespace table_detail {

inline std::uint64_t coords_to_index(const FinAbGroup& g, const nlohmann::json& arr, const char* what) {
    if (!arr.is_array()) throw ParseError(std::string(what) + " must be a coordinate array");
    std::vector<std::uint32_t> coords;
    for (const auto& c : arr) {
        if (!c.is_number_unsigned()) throw ParseError(std::string(what) + " has a non-integer coordinate");
        coords.push_back(c.get<std::uint32_t>());
    }
    try {
        return g.encode(coords);
    } catch (const ValidationError& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

} // namespace table_detail

/**
 * Ring table JSON:
 *   { "group": "Z/2 x Z/2", "one": [coords],
 *     "mul": [ [[a],[b],[c]], ... ] }
 * with one triple a * b = c per element pair, listed in canonical
 * enumeration order. Missing or misplaced pairs are an error.
 */
inline RingTable ring_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("group") || !j.contains("one") || !j.contains("mul"))
        throw ParseError("ring table needs \"group\", \"one\" and \"mul\"");
    FinAbGroup g = FinAbGroup::parse(j["group"].get<std::string>());
    const std::uint64_t n = g.order();
    const std::uint64_t one = table_detail::coords_to_index(g, j["one"], "one");
    const auto& mul_json = j["mul"];
    if (!mul_json.is_array() || mul_json.size() != n * n)
        throw ParseError("mul lists " + std::to_string(mul_json.size()) + " pairs, expected " +
                         std::to_string(n * n) + " (every pair, canonical order)");
    std::vector<std::uint32_t> mul(n * n);
    for (std::uint64_t k = 0; k < n * n; ++k) {
        const auto& triple = mul_json[k];
        if (!triple.is_array() || triple.size() != 3) throw ParseError("mul entry is not a triple");
        const std::uint64_t a = table_detail::coords_to_index(g, triple[0], "mul lhs");
        const std::uint64_t b = table_detail::coords_to_index(g, triple[1], "mul rhs");
        const std::uint64_t c = table_detail::coords_to_index(g, triple[2], "mul value");
        if (a != k / n || b != k % n)
            throw ParseError("mul entry " + std::to_string(k) + " is out of canonical enumeration order");
        mul[k] = static_cast<std::uint32_t>(c);
    }
    return RingTable(std::move(g), std::move(mul), one);
}

/**
 * Bimodule table JSON over a given ring:
 *   { "group": "Z/2 x Z/2",
 *     "left":  [ [[r],[m],[m']], ... ],   // r * m = m', pairs (r, m) in canonical order
 *     "right": [ [[m],[r],[m']], ... ] }  // m * r = m', pairs (m, r) in canonical order
 */
inline BimoduleTable bimodule_from_json(const RingTable& ring, const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("group") || !j.contains("left") || !j.contains("right"))
        throw ParseError("bimodule table needs \"group\", \"left\" and \"right\"");
    FinAbGroup g = FinAbGroup::parse(j["group"].get<std::string>());
    const FinAbGroup& rg = ring.additive();
    const std::uint64_t nr = rg.order(), nm = g.order();
    auto read_table = [&](const nlohmann::json& arr, const FinAbGroup& first, const FinAbGroup& second,
                          std::uint64_t rows, std::uint64_t cols, const char* what) {
        if (!arr.is_array() || arr.size() != rows * cols)
            throw ParseError(std::string(what) + " lists " + std::to_string(arr.size()) + " pairs, expected " +
                             std::to_string(rows * cols));
        std::vector<std::uint32_t> table(rows * cols);
        for (std::uint64_t k = 0; k < rows * cols; ++k) {
            const auto& triple = arr[k];
            if (!triple.is_array() || triple.size() != 3) throw ParseError(std::string(what) + " entry is not a triple");
            const std::uint64_t a = table_detail::coords_to_index(first, triple[0], what);
            const std::uint64_t b = table_detail::coords_to_index(second, triple[1], what);
            const std::uint64_t c = table_detail::coords_to_index(g, triple[2], what);
            if (a != k / cols || b != k % cols)
                throw ParseError(std::string(what) + " entry " + std::to_string(k) + " is out of canonical order");
            table[k] = static_cast<std::uint32_t>(c);
        }
        return table;
    };
    std::vector<std::uint32_t> left = read_table(j["left"], rg, g, nr, nm, "left");
    std::vector<std::uint32_t> right = read_table(j["right"], g, rg, nm, nr, "right");
    return BimoduleTable(ring, std::move(g), std::move(left), std::move(right));
}

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open table file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed JSON in '" + path + "': " + e.what());
    }
}

/// "Z/n" for the cyclic ring, otherwise a path to a ring table JSON file.
inline RingTable ring_from_spec_or_file(const std::string& spec) {
    if (spec.rfind("Z/", 0) == 0) return RingTable::from_spec(spec);
    return ring_from_json(parse_json_file(spec));
}

/// "self" for the ring acting on itself, otherwise a path to a bimodule
/// table JSON file.
inline BimoduleTable coefficients_from_spec(const RingTable& ring, const std::string& spec) {
    if (spec == "self") return self_bimodule(ring);
    return bimodule_from_json(ring, parse_json_file(spec));
}

} // namespace maclane
