#pragma once

// Pointwise algebra of a 2x2 quasi-linear system
//
//     (u, v)_t = V(u, v) (u, v)_x,    V = [[A, B], [C, D]].
//
// Omega = (A - D)^2 + 4 B C separates the hyperbolic (Omega > 0) and elliptic
// (Omega < 0) domains; Omega = 0 is the transition line (TL).

#include "mixotype/error.hpp"
#include "mixotype/expr.hpp"
#include "mixotype/hamiltonian.hpp"
#include "mixotype/types.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace mixotype {

/// Default relative tolerance factor: tol = factor * (1 + |A| + |B| + |C| + |D|)^2.
inline constexpr double kDefaultTolFactor = 1.0e-9;

enum class Provenance { raw_matrix, hamiltonian, named };

struct Entries {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    double magnitude() const { return 1.0 + std::fabs(a) + std::fabs(b) + std::fabs(c) + std::fabs(d); }
    double omega() const { return (a - d) * (a - d) + 4.0 * b * c; }
    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }
};

/// First partials of the four entries.
struct EntryGradients {
    double a_u = 0.0, a_v = 0.0, b_u = 0.0, b_v = 0.0, c_u = 0.0, c_v = 0.0, d_u = 0.0, d_v = 0.0;
};

/// The matrix V as four symbolic fields, with their first partials
/// differentiated at construction. Immutable.
class SystemDef {
public:
    SystemDef(Expression a, Expression b, Expression c, Expression d, std::string tag = "matrix",
              Provenance provenance = Provenance::raw_matrix)
        : entries_{std::move(a), std::move(b), std::move(c), std::move(d)},
          tag_(std::move(tag)),
          provenance_(provenance) {
        for (std::size_t i = 0; i < 4; ++i) {
            partials_[2 * i] = entries_[i].du();
            partials_[2 * i + 1] = entries_[i].dv();
        }
    }

    /// System u_t = (h_v)_x, v_t = (h_u)_x, i.e. A = D = h_uv, B = h_vv, C = h_uu.
    static SystemDef from_hamiltonian(HamiltonianDensity h, std::string tag = "hamiltonian") {
        SystemDef sys(h.partial(1, 1), h.partial(0, 2), h.partial(2, 0), h.partial(1, 1), std::move(tag),
                      Provenance::hamiltonian);
        sys.flux_ = std::array<Expression, 2>{h.partial(0, 1), h.partial(1, 0)};
        sys.hamiltonian_ = std::move(h);
        return sys;
    }

    static SystemDef parse(std::string_view a, std::string_view b, std::string_view c, std::string_view d) {
        return SystemDef(Expression::parse(a), Expression::parse(b), Expression::parse(c), Expression::parse(d));
    }

    const Expression& A() const { return entries_[0]; }
    const Expression& B() const { return entries_[1]; }
    const Expression& C() const { return entries_[2]; }
    const Expression& D() const { return entries_[3]; }

    /// Cached first partial of entry `i` (0..3 for A..D).
    const Expression& partial(std::size_t i, Var x) const { return partials_.at(2 * i + (x == Var::v ? 1 : 0)); }

    Entries entries(Point p) const {
        return {entries_[0].evaluate(p), entries_[1].evaluate(p), entries_[2].evaluate(p), entries_[3].evaluate(p)};
    }

    EntryGradients gradients(Point p) const {
        return {partials_[0].evaluate(p), partials_[1].evaluate(p), partials_[2].evaluate(p), partials_[3].evaluate(p),
                partials_[4].evaluate(p), partials_[5].evaluate(p), partials_[6].evaluate(p), partials_[7].evaluate(p)};
    }

    const std::string& tag() const { return tag_; }
    Provenance provenance() const { return provenance_; }
    const std::optional<HamiltonianDensity>& hamiltonian() const { return hamiltonian_; }

    /// Conservative flux F with (u, v)_t = F_x, when the system has one.
    const std::optional<std::array<Expression, 2>>& flux() const { return flux_; }

    /// Scalar field whose sign change marks a TL crossing; defaults to Omega.
    const std::optional<Expression>& indicator() const { return indicator_; }

    SystemDef with_tag(std::string tag, Provenance provenance = Provenance::named) const {
        SystemDef s = *this;
        s.tag_ = std::move(tag);
        if (provenance_ != Provenance::hamiltonian) s.provenance_ = provenance;
        return s;
    }

    SystemDef with_indicator(Expression indicator) const {
        SystemDef s = *this;
        s.indicator_ = std::move(indicator);
        return s;
    }

    SystemDef with_flux(Expression fu, Expression fv) const {
        SystemDef s = *this;
        s.flux_ = std::array<Expression, 2>{std::move(fu), std::move(fv)};
        return s;
    }

private:
    std::array<Expression, 4> entries_;
    std::array<Expression, 8> partials_;
    std::string tag_;
    Provenance provenance_;
    std::optional<HamiltonianDensity> hamiltonian_;
    std::optional<std::array<Expression, 2>> flux_;
    std::optional<Expression> indicator_;
};

/// Exchange u <-> v: (v, u)_t = [[D, C], [B, A]](v, u)_x with every entry
/// rewritten in the swapped variables.
inline SystemDef swap_variables(const SystemDef& sys) {
    SystemDef s(sys.D().swapped(), sys.C().swapped(), sys.B().swapped(), sys.A().swapped(), sys.tag() + "[u<->v]",
                sys.provenance() == Provenance::hamiltonian ? Provenance::named : sys.provenance());
    if (sys.flux()) s = s.with_flux((*sys.flux())[1].swapped(), (*sys.flux())[0].swapped());
    return s;
}

inline double scale_tolerance(const Entries& e, double factor = kDefaultTolFactor) {
    const double m = e.magnitude();
    return factor * m * m;
}

inline double default_tolerance(const SystemDef& sys, Point p, double factor = kDefaultTolFactor) {
    return scale_tolerance(sys.entries(p), factor);
}

inline double discriminant(const SystemDef& sys, Point p) { return sys.entries(p).omega(); }

/// (Omega_u, Omega_v) from the cached first partials.
inline Point discriminant_gradient(const SystemDef& sys, Point p) {
    const Entries e = sys.entries(p);
    const EntryGradients g = sys.gradients(p);
    const double amd = e.a - e.d;
    return {2.0 * amd * (g.a_u - g.d_u) + 4.0 * (g.b_u * e.c + e.b * g.c_u),
            2.0 * amd * (g.a_v - g.d_v) + 4.0 * (g.b_v * e.c + e.b * g.c_v)};
}

enum class PointType { hyperbolic, elliptic, parabolic, degenerate_diagonal };

inline const char* to_string(PointType k) {
    switch (k) {
        case PointType::hyperbolic: return "Hyperbolic";
        case PointType::elliptic: return "Elliptic";
        case PointType::parabolic: return "Parabolic (on transition line)";
        case PointType::degenerate_diagonal: return "DegenerateDiagonal";
    }
    return "?";
}

struct Classification {
    PointType kind = PointType::hyperbolic;
    double omega = 0.0;
    double tolerance = 0.0;
};

inline Classification classify_entries(const Entries& e, double tol) {
    if (!(tol > 0.0)) throw DomainError("classification tolerance must be positive");
    const double omega = e.omega();
    Classification c{PointType::hyperbolic, omega, tol};
    if (omega > tol) c.kind = PointType::hyperbolic;
    else if (omega < -tol) c.kind = PointType::elliptic;
    else if (std::fabs(e.b) <= tol && std::fabs(e.c) <= tol) c.kind = PointType::degenerate_diagonal;
    else c.kind = PointType::parabolic;
    return c;
}

inline Classification classify(const SystemDef& sys, Point p, std::optional<double> tol = std::nullopt) {
    const Entries e = sys.entries(p);
    return classify_entries(e, tol.value_or(scale_tolerance(e)));
}

/// Square root of Omega with |Omega| <= tol snapped to zero.
inline Complex snapped_sqrt(double omega, double tol) {
    if (std::fabs(omega) <= tol) return {0.0, 0.0};
    return std::sqrt(Complex(omega, 0.0));
}

struct Eigenstructure {
    Complex lambda_plus;
    Complex lambda_minus;
    std::optional<Complex> mu_plus;   ///< absent when B vanishes at the point
    std::optional<Complex> mu_minus;
    std::optional<Point> eigenvector_on_tl;  ///< unit vector, only on the TL
    Classification classification;
};

/// Kernel of the nilpotent part N = V - (A+D)/2 I, normalised with its first
/// non-zero component positive.
inline Point nilpotent_kernel(const Entries& e) {
    const double s = 0.5 * (e.a - e.d);
    const Point r1{e.b, -s};   // orthogonal to the first row (s, B)
    const Point r2{s, e.c};    // orthogonal to the second row (C, -s)
    Point y = norm(r1) >= norm(r2) ? r1 : r2;
    const double n = norm(y);
    if (n == 0.0) return {1.0, 0.0};
    y = (1.0 / n) * y;
    if (y.u < 0.0 || (y.u == 0.0 && y.v < 0.0)) y = -1.0 * y;
    return y;
}

inline Eigenstructure char_speeds(const SystemDef& sys, Point p, std::optional<double> tol = std::nullopt) {
    const Entries e = sys.entries(p);
    const double t = tol.value_or(scale_tolerance(e));
    Eigenstructure out;
    out.classification = classify_entries(e, t);
    const Complex root = snapped_sqrt(e.omega(), t);
    out.lambda_plus = 0.5 * (e.trace() + root);
    out.lambda_minus = 0.5 * (e.trace() - root);
    if (std::fabs(e.b) > t) {
        out.mu_plus = (e.a - e.d + root) / (2.0 * e.b);
        out.mu_minus = (e.a - e.d - root) / (2.0 * e.b);
    }
    if (std::fabs(e.omega()) <= t) out.eigenvector_on_tl = nilpotent_kernel(e);
    return out;
}

/// mu_+- = (A - D +- sqrt(Omega)) / (2B), the eigenvalues of the hodograph
/// matrix. Requires B != 0; otherwise work with swap_variables(sys).
inline std::pair<Complex, Complex> hodograph_speeds(const SystemDef& sys, Point p,
                                                    std::optional<double> tol = std::nullopt) {
    const Entries e = sys.entries(p);
    const double t = tol.value_or(scale_tolerance(e));
    if (std::fabs(e.b) <= t)
        throw DomainError("B vanishes at the point; use swap_variables() for the u<->v exchanged system");
    const Complex root = snapped_sqrt(e.omega(), t);
    return {(e.a - e.d + root) / (2.0 * e.b), (e.a - e.d - root) / (2.0 * e.b)};
}

/// c_vv f_vv + c_uv f_uv + c_uu f_uu + c_u f_u + c_v f_v = 0.
struct SecondOrderCoefficients {
    double c_vv = 0.0, c_uv = 0.0, c_uu = 0.0, c_u = 0.0, c_v = 0.0;

    double symbol_discriminant() const { return c_uv * c_uv - 4.0 * c_vv * c_uu; }
};

struct HodographCoefficients {
    SecondOrderCoefficients t_equation;
    SecondOrderCoefficients q_equation;  ///< for a conserved density Q
    double symbol_discriminant = 0.0;    ///< of the t-equation; equals Omega
};

inline HodographCoefficients hodograph_pde_coefficients(const SystemDef& sys, Point p) {
    const Entries e = sys.entries(p);
    const EntryGradients g = sys.gradients(p);
    HodographCoefficients h;
    h.t_equation = {e.c, e.a - e.d, -e.b, -(g.b_u + g.d_v), g.a_u + g.c_v};
    h.q_equation = {e.c, e.a - e.d, -e.b, -(g.b_u - g.a_v), -g.d_u + g.c_v};
    h.symbol_discriminant = h.t_equation.symbol_discriminant();
    return h;
}

struct BeltramiDilation {
    Complex mu;
    double modulus = 0.0;
};

/// Complex dilation mu = (1 + i lambda) / (1 - i lambda), lambda = (A + D + sqrt(Omega)) / 2.
/// Only meaningful where the point is elliptic or on the TL.
inline BeltramiDilation beltrami_dilation(const SystemDef& sys, Point p, std::optional<double> tol = std::nullopt) {
    const Entries e = sys.entries(p);
    const double t = tol.value_or(scale_tolerance(e));
    if (e.omega() > t) throw DomainError("Beltrami dilation is undefined at a strictly hyperbolic point");
    const Complex lambda = 0.5 * (e.trace() + snapped_sqrt(e.omega(), t));
    const Complex i(0.0, 1.0);
    const Complex mu = (1.0 + i * lambda) / (1.0 - i * lambda);
    return {mu, std::abs(mu)};
}

}  // namespace mixotype
