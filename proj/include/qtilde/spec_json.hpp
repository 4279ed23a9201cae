#pragma once

#include "qtilde/matrix_spec.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <string>

namespace qtilde {

namespace detail {

inline Rational json_rational(const nlohmann::json& j, const std::string& path) {
    try {
        if (j.is_string())
            return parse_rational(j.get<std::string>());
        if (j.is_number_integer())
            return Rational(BigInt(j.get<long long>()));
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
    throw parse_error(path + ": expected rational string (\"num/den\") or integer");
}

inline ColumnPair json_column(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object())
        throw parse_error(path + ": expected object with \"q\" and \"p\" arrays");
    ColumnPair c;
    for (const char* key : {"q", "p"}) {
        if (!j.contains(key) || !j[key].is_array())
            throw parse_error(path + "." + key + ": missing or not an array");
        auto& dst = (*key == 'q') ? c.q : c.p;
        size_t i = 0;
        for (const auto& e : j[key])
            dst.push_back(json_rational(e, path + "." + key + "[" + std::to_string(i++) + "]"));
    }
    return c;
}

} // namespace detail

inline SystemSpec parse_system_spec(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("spec file: ") + e.what());
    }
    if (!j.is_object())
        throw parse_error("spec file: top level must be an object");
    SystemSpec spec;
    if (j.contains("preamble")) {
        if (!j["preamble"].is_array())
            throw parse_error("preamble: expected array of columns");
        size_t i = 0;
        for (const auto& col : j["preamble"])
            spec.preamble.push_back(
                detail::json_column(col, "preamble[" + std::to_string(i++) + "]"));
    }
    if (!j.contains("block") || !j["block"].is_array() || j["block"].empty())
        throw parse_error("block: required non-empty array of columns");
    size_t i = 0;
    for (const auto& col : j["block"])
        spec.block.push_back(detail::json_column(col, "block[" + std::to_string(i++) + "]"));
    return spec;
}

inline SystemSpec load_system_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open spec file '" + path + "'");
    return parse_system_spec(in);
}

} // namespace qtilde
