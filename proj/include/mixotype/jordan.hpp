#pragma once

// Jordan structure of V on the transition line.
//
// On Omega = 0 the matrix is V0 = lambda I + N with lambda = (A + D) / 2 and N
// nilpotent. The two-parameter family
//
//     C != 0:          P = a [[-b, 1 + (s / C) b], [C, -s]],   s^2 = -B C
//     C == 0, B != 0:  P = a [[1, b], [0, B]]
//
// conjugates V0 to [[lambda, 1], [0, lambda]]. P only works when s is the
// actual (A - D) / 2 of V0, so the sign of s follows A - D.

#include "mixotype/error.hpp"
#include "mixotype/syscore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>

namespace mixotype {

struct Matrix2 {
    std::array<double, 4> m{};  // row-major

    double operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
    double& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }

    static Matrix2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }

    double det() const { return m[0] * m[3] - m[1] * m[2]; }
    double max_abs() const {
        return std::max({std::fabs(m[0]), std::fabs(m[1]), std::fabs(m[2]), std::fabs(m[3])});
    }
    double frobenius() const { return std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3]); }

    Matrix2 inverse() const {
        const double d = det();
        if (d == 0.0) throw DomainError("singular 2x2 matrix");
        return {{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
    }

    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
        return {{x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
                 x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]}};
    }
    friend Matrix2 operator-(const Matrix2& x, const Matrix2& y) {
        return {{x.m[0] - y.m[0], x.m[1] - y.m[1], x.m[2] - y.m[2], x.m[3] - y.m[3]}};
    }
    friend Point operator*(const Matrix2& x, Point p) {
        return {x.m[0] * p.u + x.m[1] * p.v, x.m[2] * p.u + x.m[3] * p.v};
    }
};

enum class JordanBranch { c_nonzero, c_zero_b_nonzero };

inline const char* to_string(JordanBranch b) {
    return b == JordanBranch::c_nonzero ? "Cnonzero" : "Czero-Bnonzero";
}

/// V at a TL point written as lambda I + N with N exactly nilpotent.
struct TransitionMatrix {
    Matrix2 v0;
    double lambda = 0.0;
    /// (A - D) / 2; equals sign * sqrt(-BC) on the TL.
    double s = 0.0;
    int sign = 1;
    JordanBranch branch = JordanBranch::c_nonzero;
};

struct JordanData {
    double lambda = 0.0;
    Matrix2 v0;
    Matrix2 p_matrix;
    JordanBranch branch = JordanBranch::c_nonzero;
    double a = 1.0;
    double b = 0.0;
    /// max |P V0 P^-1 - J| / max(1, max |V0|).
    double residual = 0.0;
};

inline Matrix2 jordan_block(double lambda) { return {{lambda, 1.0, 0.0, lambda}}; }

inline TransitionMatrix v0_on_transition(const SystemDef& sys, Point p, std::optional<double> tol = std::nullopt) {
    const Entries e = sys.entries(p);
    const double t = tol.value_or(scale_tolerance(e));
    const double omega = e.omega();
    if (std::fabs(omega) > t) throw DomainError("point is not on the transition line (|Omega| > tol)");
    if (std::fabs(e.b) <= t && std::fabs(e.c) <= t)
        throw DomainError("B and C both vanish: V is degenerate diagonal, not a Jordan block");

    TransitionMatrix out;
    out.lambda = 0.5 * (e.a + e.d);
    const double s = 0.5 * (e.a - e.d);
    // N^2 = (Omega / 4) I for N = V - lambda I.
    const double n_norm2 = 2.0 * s * s + e.b * e.b + e.c * e.c;
    if (std::fabs(omega) / 4.0 * std::sqrt(2.0) > 1.0e-6 * n_norm2)
        throw DomainError("V - lambda I is not close enough to nilpotent");

    if (std::fabs(e.c) > t) {
        out.branch = JordanBranch::c_nonzero;
        out.s = s;
        out.sign = s < 0.0 ? -1 : 1;
        out.v0 = {{out.lambda + s, -s * s / e.c, e.c, out.lambda - s}};
    } else {
        out.branch = JordanBranch::c_zero_b_nonzero;
        out.s = 0.0;
        out.sign = 1;
        out.v0 = {{out.lambda, e.b, 0.0, out.lambda}};
    }
    return out;
}

inline double conjugation_residual(const Matrix2& p, const Matrix2& v0, double lambda) {
    const Matrix2 r = p * v0 * p.inverse() - jordan_block(lambda);
    return r.max_abs() / std::max(1.0, v0.max_abs());
}

inline JordanData conjugating_matrix(const SystemDef& sys, Point p, double a, double b,
                                     std::optional<double> tol = std::nullopt) {
    if (a == 0.0) throw DomainError("conjugating family requires a != 0");
    const TransitionMatrix tm = v0_on_transition(sys, p, tol);
    JordanData out;
    out.lambda = tm.lambda;
    out.v0 = tm.v0;
    out.branch = tm.branch;
    out.a = a;
    out.b = b;
    if (tm.branch == JordanBranch::c_nonzero) {
        const double c = tm.v0(1, 0);
        out.p_matrix = {{-a * b, a * (1.0 + tm.s / c * b), a * c, -a * tm.s}};
    } else {
        out.p_matrix = {{a, a * b, 0.0, a * tm.v0(0, 1)}};
    }
    const double scale = out.p_matrix.frobenius();
    if (!(std::fabs(out.p_matrix.det()) > 1.0e-12 * scale * scale))
        throw DomainError("conjugating matrix is numerically singular");
    out.residual = conjugation_residual(out.p_matrix, out.v0, out.lambda);
    return out;
}

/// Residuals of the compatibility conditions for candidate integrating
/// factors a(u,v), b(u,v) of the Jordan variables (C != 0 branch):
///
///     r1 = (a b)_v - (a + a sqrt(-BC) b / C)_u,    r2 = a_v - (a sqrt(-BC))_u.
///
/// sqrt(-BC) is the principal root.
inline std::pair<double, double> integrating_factor_residual(const SystemDef& sys, const Expression& a,
                                                             const Expression& b, Point p) {
    const Entries e = sys.entries(p);
    if (std::fabs(e.c) <= scale_tolerance(e))
        throw DomainError("integrating-factor conditions are written for C != 0");
    const Expression s = sqrt(-(sys.B() * sys.C()));
    const Expression r1 = (a * b).dv() - (a + a * s * b / sys.C()).du();
    const Expression r2 = a.dv() - (a * s).du();
    return {r1.evaluate(p), r2.evaluate(p)};
}

}  // namespace mixotype
