#pragma once

// Flat key=value model files.
//
//   file    = { line } ;
//   line    = [ key "=" value ] [ "#" comment ] newline ;
//   key     = "model" | "A" | "B" | "C" | "D" | "h"
//           | "bounds" | "tol" | "grid" | "step" | "probe" ;
//
// Exactly one definition: model=<id>, h=<expr>, or all four of A..D.
// bounds is "u_min,u_max,v_min,v_max". Expression values use the grammar in
// expr.hpp.

#include "mixotype/error.hpp"
#include "mixotype/models.hpp"
#include "mixotype/syscore.hpp"
#include "mixotype/types.hpp"

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mixotype {

struct ModelFile {
    SystemDef system;
    std::optional<Rect> bounds;
    std::optional<double> tol;
    std::optional<std::size_t> grid;
    std::optional<double> step;
    std::optional<double> probe;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<double> parse_number_list(const std::string& s, std::size_t expected, std::size_t offset) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const Expression e = Expression::parse(trim(item));
        if (!e.is_constant()) throw ParseError("expected numbers in '" + s + "'", offset);
        out.push_back(*e.constant_value());
    }
    if (out.size() != expected)
        throw ParseError("expected " + std::to_string(expected) + " comma-separated numbers in '" + s + "'", offset);
    return out;
}

}  // namespace detail

inline Rect parse_bounds(const std::string& s, std::size_t offset = 0) {
    const auto b = detail::parse_number_list(s, 4, offset);
    if (!(b[0] < b[1] && b[2] < b[3])) throw ParseError("bounds must satisfy u_min < u_max and v_min < v_max", offset);
    return {b[0], b[1], b[2], b[3]};
}

inline Point parse_point(const std::string& s, std::size_t offset = 0) {
    const auto p = detail::parse_number_list(s, 2, offset);
    return {p[0], p[1]};
}

inline ModelFile parse_model_file(std::string_view text) {
    std::map<std::string, std::pair<std::string, std::size_t>> kv;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string body = detail::trim(line);
        if (!body.empty()) {
            const auto eq = body.find('=');
            if (eq == std::string::npos) throw ParseError("expected key=value", pos);
            const std::string key = detail::trim(std::string_view(body).substr(0, eq));
            const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
            static const char* const known[] = {"model", "A", "B", "C", "D", "h", "bounds", "tol", "grid", "step", "probe"};
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) throw ParseError("unknown key '" + key + "'", pos);
            if (!kv.emplace(key, std::make_pair(value, pos)).second) throw ParseError("duplicate key '" + key + "'", pos);
        }
        pos = nl + 1;
    }

    const bool has_model = kv.count("model") > 0;
    const bool has_h = kv.count("h") > 0;
    const int matrix_keys = static_cast<int>(kv.count("A") + kv.count("B") + kv.count("C") + kv.count("D"));
    if (matrix_keys != 0 && matrix_keys != 4) throw ParseError("matrix definitions need all of A, B, C, D", 0);
    if (static_cast<int>(has_model) + static_cast<int>(has_h) + (matrix_keys == 4 ? 1 : 0) != 1)
        throw ParseError("model file must define exactly one of: model, h, or A/B/C/D", 0);

    auto system = [&]() -> SystemDef {
        if (has_model) return model_from_id(kv.at("model").first);
        if (has_h) return from_hamiltonian(HamiltonianDensity::parse(kv.at("h").first), "hamiltonian:h=" + kv.at("h").first);
        return SystemDef::parse(kv.at("A").first, kv.at("B").first, kv.at("C").first, kv.at("D").first);
    }();

    ModelFile mf{system, {}, {}, {}, {}, {}};
    if (kv.count("bounds")) mf.bounds = parse_bounds(kv.at("bounds").first, kv.at("bounds").second);
    auto number = [&](const char* key) -> std::optional<double> {
        if (!kv.count(key)) return std::nullopt;
        return detail::parse_number_list(kv.at(key).first, 1, kv.at(key).second)[0];
    };
    mf.tol = number("tol");
    mf.step = number("step");
    mf.probe = number("probe");
    if (auto g = number("grid")) {
        if (*g < 64 || *g != static_cast<double>(static_cast<std::size_t>(*g)))
            throw ParseError("grid must be an integer >= 64", kv.at("grid").second);
        mf.grid = static_cast<std::size_t>(*g);
    }
    return mf;
}

inline ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file '" + path + "'", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_file(ss.str());
}

}  // namespace mixotype
