#pragma once

// Concrete systems: dispersionless NLS, dispersionless Boussinesq, isentropic
// gas dynamics, nonlinear wave equations and Hamiltonian densities.

#include "mixotype/error.hpp"
#include "mixotype/expr.hpp"
#include "mixotype/hamiltonian.hpp"
#include "mixotype/syscore.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mixotype {

inline SystemDef from_hamiltonian(const HamiltonianDensity& h, std::string tag = "hamiltonian") {
    return SystemDef::from_hamiltonian(h, std::move(tag));
}

/// h = v^2/2 + v u^2/2: u_t = (v + u^2/2)_x, v_t = (uv)_x. TL v = 0.
inline SystemDef dnls() {
    return from_hamiltonian(HamiltonianDensity::parse("v^2/2 + v*u^2/2"), "dnls").with_indicator(Expression::parse("v"));
}

/// h = v^2/2 + u^3/6 + c^2 u^2/2, the Boussinesq density shifted by c. TL u = -c^2.
inline SystemDef boussinesq_shifted(double c) {
    const Expression u = Expression::variable(Var::u);
    const Expression v = Expression::variable(Var::v);
    Expression h = (1.0 / 2.0) * pow(v, Rational(2)) + (1.0 / 6.0) * pow(u, Rational(3));
    std::string tag = "boussinesq";
    if (c != 0.0) {
        h = h + (0.5 * c * c) * pow(u, Rational(2));
        tag += ":c=" + expr::format_double(c);
    }
    return from_hamiltonian(HamiltonianDensity(h), tag).with_indicator(u + c * c);
}

/// h = v^2/2 + u^3/6: u_t = v_x, v_t = u u_x. TL u = 0.
inline SystemDef boussinesq() { return boussinesq_shifted(0.0); }

/// Isentropic gas dynamics with pressure P(rho), rho written as v:
/// u_t = u u_x + P'(v)/v v_x, v_t = (u v)_x (time reversed). Omega = 4 P'(v).
inline SystemDef gas_dynamics(const Expression& pressure) {
    const Expression u = Expression::variable(Var::u);
    const Expression v = Expression::variable(Var::v);
    const Expression dp = pressure.dv();
    return SystemDef(u, dp / v, v, u, "gas:P=" + pressure.str(), Provenance::named)
        .with_indicator(dp);
}

/// h = F2(v) + F3(u): V = [[0, F2''(v)], [F3''(u), 0]].
inline SystemDef nonlinear_wave(const Expression& f2, const Expression& f3) {
    return from_hamiltonian(HamiltonianDensity(f2 + f3), "nlw:F2=" + f2.str() + ",F3=" + f3.str());
}

/// u_t = v_x, v_t = v^alpha u_x for alpha = 2n+1 or 1/(2n+1). TL v = 0.
inline SystemDef power_wave(Rational alpha) {
    const bool odd_integer = alpha.den == 1 && alpha.num > 0 && alpha.num % 2 == 1;
    const bool odd_reciprocal = alpha.num == 1 && alpha.den > 1 && alpha.den % 2 == 1;
    if (!odd_integer && !odd_reciprocal) throw DomainError("power_wave requires alpha = 2n+1 or 1/(2n+1), got " + alpha.str());
    const Expression v = Expression::variable(Var::v);
    return SystemDef(Expression::constant(0.0), Expression::constant(1.0), pow(v, alpha), Expression::constant(0.0),
                     "power_wave:alpha=" + alpha.str(), Provenance::named)
        .with_indicator(pow(v, alpha));
}

/// h = F1(v) + v u^2/2: A = D = u, B = F1''(v), C = v.
inline SystemDef h1_family(const Expression& f1) {
    const Expression u = Expression::variable(Var::u);
    const Expression v = Expression::variable(Var::v);
    return from_hamiltonian(HamiltonianDensity(f1 + 0.5 * (v * pow(u, Rational(2)))), "h1:F1=" + f1.str());
}

struct HamiltonianDeltaT {
    double value = 0.0;
    bool at_infinity = false;
    bool undetermined = false;
};

/// dT = h_uuu / h_uuv on the h_uu = 0 branch of the TL.
inline HamiltonianDeltaT hamiltonian_delta_t(const HamiltonianDensity& h, Point p,
                                             double tol_factor = kDefaultTolFactor) {
    const double huu = h(2, 0, p), hvv = h(0, 2, p), huv = h(1, 1, p);
    const double scale = 1.0 + std::fabs(huu) + std::fabs(hvv) + 2.0 * std::fabs(huv);
    const double tol = tol_factor * scale * scale;
    if (std::fabs(huu) > tol) throw DomainError("point is not on the h_uu = 0 branch of the transition line");
    if (std::fabs(hvv) <= tol) throw DomainError("h_vv vanishes at the point");
    const double huuu = h(3, 0, p), huuv = h(2, 1, p);
    HamiltonianDeltaT out;
    if (std::fabs(huuu) <= tol && std::fabs(huuv) <= tol) {
        out.undetermined = true;
        out.value = std::nan("");
    } else if (std::fabs(huuv) <= tol) {
        out.at_infinity = true;
        out.value = std::numeric_limits<double>::infinity();
    } else {
        out.value = huuu / huuv;
    }
    return out;
}

/// Local exponent of the simple wave at a contact on h_uu = 0: k/2 for the
/// lowest order k >= 3 with d^k h / du^k != 0; nullopt (Undetermined) when
/// orders 3..6 all vanish.
inline std::optional<Rational> exponent_prediction(const HamiltonianDensity& h, Point p,
                                                   double tol_factor = kDefaultTolFactor) {
    const double huu = h(2, 0, p), hvv = h(0, 2, p);
    const double scale = 1.0 + std::fabs(huu) + std::fabs(hvv) + 2.0 * std::fabs(h(1, 1, p));
    const double tol = tol_factor * scale * scale;
    if (std::fabs(huu) > tol) throw DomainError("point is not on the h_uu = 0 branch of the transition line");
    if (std::fabs(hvv) <= tol) throw DomainError("h_vv vanishes at the point");
    for (int k = 3; k <= 5; ++k)
        if (std::fabs(h(k, 0, p)) > tol) return Rational(k, 2);
    if (std::fabs(h.partial(5, 0).du().evaluate(p)) > tol) return Rational(3);
    return std::nullopt;
}

namespace detail {

// Splits "k1=e1,k2=e2" at top-level commas.
inline std::map<std::string, std::string> parse_params(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t start = 0;
    int depth = 0;
    auto flush = [&](std::size_t end) {
        const std::string_view item = text.substr(start, end - start);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) throw ParseError("expected key=value in model id", start);
        std::string key(item.substr(0, eq));
        if (!out.emplace(key, std::string(item.substr(eq + 1))).second)
            throw ParseError("duplicate model parameter '" + key + "'", start);
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        else if (text[i] == ')') --depth;
        else if (text[i] == ',' && depth == 0) {
            flush(i);
            start = i + 1;
        }
    }
    flush(text.size());
    return out;
}

inline double parse_number(const std::string& s) {
    const Expression e = Expression::parse(s);
    if (!e.is_constant()) throw ParseError("expected a numeric constant, got '" + s + "'", 0);
    return *e.constant_value();
}

inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const long long n = std::stoll(s, &used);
            if (used != s.size()) throw ParseError("malformed rational '" + s + "'", used);
            return Rational(n);
        }
        const long long n = std::stoll(s.substr(0, slash), &used);
        if (used != slash) throw ParseError("malformed rational '" + s + "'", used);
        const std::string den = s.substr(slash + 1);
        const long long d = std::stoll(den, &used);
        if (used != den.size() || d == 0) throw ParseError("malformed rational '" + s + "'", slash + 1 + used);
        return Rational(n, d);
    } catch (const std::logic_error&) {
        throw ParseError("malformed rational '" + s + "'", 0);
    }
}

inline void require_keys(const std::map<std::string, std::string>& params, std::initializer_list<const char*> keys,
                         const std::string& model) {
    for (const auto& [k, _] : params) {
        bool known = false;
        for (const char* allowed : keys) known = known || k == allowed;
        if (!known) throw ParseError("unknown parameter '" + k + "' for model " + model, 0);
    }
    for (const char* k : keys)
        if (!params.count(k)) throw ParseError(std::string("missing parameter '") + k + "' for model " + model, 0);
}

}  // namespace detail

/// Builds a bundled model from its string id, e.g. "dnls", "boussinesq:c=3",
/// "power_wave:alpha=1/3", "gas:P=v^2/2", "nlw:F2=v^2/2,F3=exp(u)",
/// "hamiltonian:h=v^2/2+u^4/24", "h1:F1=v^4/12".
inline SystemDef model_from_id(std::string_view id) {
    const auto colon = id.find(':');
    const std::string name(id.substr(0, colon));
    const std::map<std::string, std::string> params =
        colon == std::string_view::npos ? std::map<std::string, std::string>{} : detail::parse_params(id.substr(colon + 1));

    if (name == "dnls") {
        detail::require_keys(params, {}, name);
        return dnls();
    }
    if (name == "boussinesq") {
        if (params.empty()) return boussinesq();
        detail::require_keys(params, {"c"}, name);
        return boussinesq_shifted(detail::parse_number(params.at("c")));
    }
    if (name == "power_wave") {
        detail::require_keys(params, {"alpha"}, name);
        return power_wave(detail::parse_rational(params.at("alpha")));
    }
    if (name == "gas") {
        detail::require_keys(params, {"P"}, name);
        return gas_dynamics(Expression::parse(params.at("P")));
    }
    if (name == "nlw") {
        detail::require_keys(params, {"F2", "F3"}, name);
        return nonlinear_wave(Expression::parse(params.at("F2")), Expression::parse(params.at("F3")));
    }
    if (name == "hamiltonian") {
        detail::require_keys(params, {"h"}, name);
        return from_hamiltonian(HamiltonianDensity::parse(params.at("h")), std::string(id));
    }
    if (name == "h1") {
        detail::require_keys(params, {"F1"}, name);
        return h1_family(Expression::parse(params.at("F1")));
    }
    throw ParseError("unknown model '" + name + "'", 0);
}

/// Ids of every bundled model configuration used by the tests and docs.
inline std::vector<std::string> bundled_model_ids() {
    return {"dnls",
            "boussinesq",
            "boussinesq:c=3",
            "power_wave:alpha=1",
            "power_wave:alpha=3",
            "power_wave:alpha=1/3",
            "gas:P=v^2/2",
            "gas:P=(v-1)^4",
            "gas:P=(v-1)^5/5",
            "nlw:F2=v^2/2,F3=u^3/6",
            "nlw:F2=v^2/2,F3=exp(u)",
            "hamiltonian:h=(u^2+v^2)/2",
            "hamiltonian:h=v^2/2+u^4/24",
            "hamiltonian:h=v^2/2+u^5/120",
            "hamiltonian:h=v^2/2+u^3/6+u^2*v",
            "h1:F1=v^4/12"};
}

}  // namespace mixotype
