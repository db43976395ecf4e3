#pragma once

// Hodograph-plane geometry: simple waves (dv/du = -mu_+-), the transition
// line Omega = 0, the slope mismatch dT between them at a contact point, and
// the resulting crossing verdicts.

#include "mixotype/error.hpp"
#include "mixotype/expr.hpp"
#include "mixotype/syscore.hpp"
#include "mixotype/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mixotype {

enum class Branch { plus, minus, transition };

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::plus: return "plus";
        case Branch::minus: return "minus";
        case Branch::transition: return "transition";
    }
    return "?";
}

enum class Termination { reached_bound, hit_transition_line, domain_error, step_underflow, max_steps, closed_loop };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::reached_bound: return "reached-bound";
        case Termination::hit_transition_line: return "hit-transition-line";
        case Termination::domain_error: return "domain-error";
        case Termination::step_underflow: return "step-underflow";
        case Termination::max_steps: return "max-steps";
        case Termination::closed_loop: return "closed-loop";
    }
    return "?";
}

struct CurvePoint {
    double s = 0.0;  ///< arc length from the first sample
    Point p;
    double omega = 0.0;
};

struct HodographCurve {
    std::vector<CurvePoint> points;
    Branch branch = Branch::plus;
    double step = 0.0;
    Termination termination = Termination::reached_bound;
    std::string message;
    std::size_t seed_index = 0;  ///< index of the start / seed sample

    bool empty() const { return points.empty(); }
    const CurvePoint& front() const { return points.front(); }
    const CurvePoint& back() const { return points.back(); }
};

/// CSV with columns s,u,v,omega; shortest round-trip decimals.
inline void write_curve_csv(std::ostream& os, const HodographCurve& curve) {
    os << "s,u,v,omega\n";
    for (const auto& cp : curve.points) {
        os << expr::format_double(cp.s) << ',' << expr::format_double(cp.p.u) << ',' << expr::format_double(cp.p.v)
           << ',' << expr::format_double(cp.omega) << '\n';
    }
}

enum class Heading { toward_transition, away_from_transition, increasing_u, decreasing_u };

struct TraceOptions {
    Heading heading = Heading::toward_transition;
    std::size_t max_steps = 400000;
    /// Near the TL a step covers at most this fraction of the linearised
    /// distance |Omega| / |grad Omega . T| still to go.
    double approach_fraction = 0.05;
    /// When positive, a step is at most this fraction of the distance from
    /// the start (log-spaced samples leaving a contact point).
    double relative_step = 0.0;
    double tol_factor = kDefaultTolFactor;
};

namespace detail {

inline int branch_sign(Branch b) { return b == Branch::minus ? -1 : 1; }

// Unnormalised characteristic direction for the branch, or nullopt when the
// point is elliptic beyond tolerance.
inline std::optional<Point> raw_tangent(const Entries& e, Branch b, double tol) {
    const double omega = e.omega();
    if (omega < -tol) return std::nullopt;
    // Only negative round-off is snapped; small positive Omega keeps its root.
    const double root = omega > 0.0 ? std::sqrt(omega) : 0.0;
    const double sr = branch_sign(b) * root;
    // Two rows of the eigen-relation; they are parallel where both are non-zero.
    const Point t1{2.0 * e.b, e.d - e.a - sr};
    const Point t2{e.d - e.a + sr, -2.0 * e.c};
    const Point t = norm(t1) >= norm(t2) ? t1 : t2;
    if (norm(t) == 0.0) throw DomainError("B and C both vanish: characteristic direction undefined");
    return t;
}

inline std::optional<double> safe_omega(const SystemDef& sys, Point p) {
    try {
        return discriminant(sys, p);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

struct StageFailure {};

}  // namespace detail

/// Unit tangent of the branch's simple wave at p with an arbitrary sign;
/// nullopt in the elliptic domain.
inline std::optional<Point> characteristic_tangent(const SystemDef& sys, Point p, Branch b,
                                                   std::optional<double> tol = std::nullopt) {
    const Entries e = sys.entries(p);
    auto t = detail::raw_tangent(e, b, tol.value_or(scale_tolerance(e)));
    if (!t) return std::nullopt;
    return (1.0 / norm(*t)) * *t;
}

/// Integrates dv/du = -mu_branch by classical RK4 in arc length until the
/// bounds, the transition line, or step underflow. The start may lie on the
/// TL (tracing away from it); it may not be elliptic.
inline HodographCurve trace_simple_wave(const SystemDef& sys, Point start, Branch branch, const Rect& bounds,
                                        double step, const TraceOptions& opts = {}) {
    if (branch == Branch::transition) throw DomainError("use trace_transition_line for the transition branch");
    if (!(step > 0.0)) throw DomainError("trace step must be positive");
    if (!bounds.contains(start)) throw DomainError("start point lies outside the bounds");
    {
        const Classification c = classify(sys, start, default_tolerance(sys, start, opts.tol_factor));
        if (c.kind == PointType::elliptic) throw DomainError("simple-wave start lies in the elliptic domain");
    }

    HodographCurve curve;
    curve.branch = branch;
    curve.step = step;
    curve.points.push_back({0.0, start, discriminant(sys, start)});

    auto tol_at = [&](const Entries& e) { return scale_tolerance(e, opts.tol_factor); };

    // Oriented unit tangent at q, aligned with `ref`.
    auto tangent = [&](Point q, Point ref) -> Point {
        const Entries e = sys.entries(q);
        auto t = detail::raw_tangent(e, branch, tol_at(e));
        if (!t) throw detail::StageFailure{};
        Point u = (1.0 / norm(*t)) * *t;
        if (dot(u, ref) < 0.0) u = -1.0 * u;
        return u;
    };

    // Initial orientation.
    Point dir;
    {
        const Entries e = sys.entries(start);
        auto t = detail::raw_tangent(e, branch, tol_at(e));
        dir = (1.0 / norm(*t)) * *t;
        const double delta = 1.0e-6 * (1.0 + norm(start));
        const double lo = -std::numeric_limits<double>::infinity();
        const double om_fwd = detail::safe_omega(sys, start + delta * dir).value_or(lo);
        const double om_bwd = detail::safe_omega(sys, start - delta * dir).value_or(lo);
        bool flip = false;
        switch (opts.heading) {
            case Heading::toward_transition:
                // An undefined side counts as lowest Omega.
                flip = om_bwd < om_fwd;
                break;
            case Heading::away_from_transition: flip = om_bwd > om_fwd; break;
            case Heading::increasing_u: flip = dir.u < 0.0 || (dir.u == 0.0 && dir.v < 0.0); break;
            case Heading::decreasing_u: flip = dir.u > 0.0 || (dir.u == 0.0 && dir.v > 0.0); break;
        }
        if (flip) dir = -1.0 * dir;
    }

    Point p = start;
    double s = 0.0;
    double h_cap = step;
    std::size_t on_tl_steps = 0;

    auto rk4 = [&](Point q, double h, Point ref) {
        const Point k1 = tangent(q, ref);
        const Point k2 = tangent(q + (0.5 * h) * k1, k1);
        const Point k3 = tangent(q + (0.5 * h) * k2, k2);
        const Point k4 = tangent(q + h * k3, k3);
        const Point next = q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const Entries e = sys.entries(next);
        if (e.omega() < -tol_at(e)) throw detail::StageFailure{};
        return next;
    };

    try {
        for (std::size_t n = 0; n < opts.max_steps; ++n) {
            const Entries e = sys.entries(p);
            const double omega = e.omega();
            const Point t = tangent(p, dir);
            dir = t;
            const double h_min = 1.0e-12 * (1.0 + norm(p));

            double h = std::min(step, h_cap);
            if (opts.relative_step > 0.0) h = std::min(h, std::max(h_min, opts.relative_step * norm(p - start)));
            {
                // Square-root singularity of the slope at the TL: shrink steps
                // geometrically with the remaining distance.
                const Point g = discriminant_gradient(sys, p);
                const double rate = std::fabs(dot(g, t));
                const double remaining = rate > 0.0 ? std::fabs(omega) / rate : std::numeric_limits<double>::infinity();
                h = std::min(h, std::max(h_min, opts.approach_fraction * remaining));
            }

            Point q;
            try {
                q = rk4(p, h, t);
            } catch (const detail::StageFailure&) {
                if (h <= h_min * 1.000001) {
                    // Land on the TL along the current tangent.
                    double lo = 0.0, hi = h;
                    const auto om_hi = detail::safe_omega(sys, p + hi * t);
                    if (!om_hi || *om_hi >= 0.0) {
                        curve.termination = Termination::step_underflow;
                        curve.message = "step underflow near the transition line";
                        return curve;
                    }
                    for (int it = 0; it < 80; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const auto om = detail::safe_omega(sys, p + mid * t);
                        if (om && *om >= 0.0) lo = mid;
                        else hi = mid;
                    }
                    const Point landed = p + lo * t;
                    curve.points.push_back({s + lo, landed, discriminant(sys, landed)});
                    curve.termination = Termination::hit_transition_line;
                    return curve;
                }
                h_cap = std::max(h_min, 0.5 * h);
                continue;
            }
            h_cap = step;

            if (!bounds.contains(q)) {
                // Shorten the final step so that it ends on the boundary.
                double lo = 0.0, hi = h;
                Point best = p;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    Point trial;
                    try {
                        trial = rk4(p, mid, t);
                    } catch (const detail::StageFailure&) {
                        hi = mid;
                        continue;
                    }
                    if (bounds.contains(trial)) {
                        lo = mid;
                        best = trial;
                    } else {
                        hi = mid;
                    }
                }
                if (lo > 0.0) curve.points.push_back({s + lo, best, discriminant(sys, best)});
                curve.termination = Termination::reached_bound;
                return curve;
            }

            s += h;
            const double omega_q = discriminant(sys, q);
            curve.points.push_back({s, q, omega_q});
            const double tol_q = tol_at(sys.entries(q));
            if (std::fabs(omega_q) <= tol_q) {
                if (omega_q < omega) {
                    curve.termination = Termination::hit_transition_line;
                    return curve;
                }
                on_tl_steps = omega_q <= omega ? on_tl_steps + 1 : 0;
                if (on_tl_steps > 64) {
                    curve.termination = Termination::hit_transition_line;
                    curve.message = "characteristic runs along the transition line";
                    return curve;
                }
            } else {
                on_tl_steps = 0;
            }
            p = q;
        }
    } catch (const DomainError& err) {
        curve.termination = Termination::domain_error;
        curve.message = err.what();
        return curve;
    } catch (const detail::StageFailure&) {
        curve.termination = Termination::domain_error;
        curve.message = "entered the elliptic domain";
        return curve;
    }
    curve.termination = Termination::max_steps;
    return curve;
}

namespace detail {

// Newton projection onto Omega = 0 along the gradient.
inline std::optional<Point> project_to_tl(const SystemDef& sys, Point p, double tol_factor, int max_iter = 40) {
    for (int it = 0; it < max_iter; ++it) {
        const Entries e = sys.entries(p);
        const double scale = e.magnitude() * e.magnitude();
        const double omega = e.omega();
        const Point g = discriminant_gradient(sys, p);
        const double g2 = dot(g, g);
        if (std::fabs(omega) <= 1.0e-14 * scale) return p;
        if (!(g2 > 0.0)) return std::nullopt;
        const Point dp = (omega / g2) * g;
        p = p - dp;
        if (norm(dp) <= 1.0e-15 * (1.0 + norm(p))) break;
    }
    const Entries e = sys.entries(p);
    if (std::fabs(e.omega()) <= scale_tolerance(e, tol_factor)) return p;
    return std::nullopt;
}

}  // namespace detail

/// Pseudo-arclength tracing of Omega = 0 through the point the seed converges
/// to, in both directions, with Newton correction and curvature step control.
inline HodographCurve trace_transition_line(const SystemDef& sys, Point seed, const Rect& bounds, double step,
                                            const TraceOptions& opts = {}) {
    if (!(step > 0.0)) throw DomainError("trace step must be positive");
    std::optional<Point> start;
    try {
        start = detail::project_to_tl(sys, seed, opts.tol_factor, 60);
    } catch (const DomainError& err) {
        throw SolverError(std::string("transition-line seed does not converge: ") + err.what(),
                          std::numeric_limits<double>::quiet_NaN());
    }
    if (!start) throw SolverError("transition-line seed does not converge", discriminant(sys, seed));
    if (!bounds.contains(*start))
        throw SolverError("transition-line seed converges outside the bounds", discriminant(sys, seed));
    const Point g0 = discriminant_gradient(sys, *start);
    if (norm(g0) == 0.0) throw DomainError("gradient of Omega vanishes: transition line is not a smooth curve here");

    struct Half {
        std::vector<Point> pts;
        Termination termination = Termination::reached_bound;
        std::string message;
    };

    auto march = [&](double sense) {
        Half half;
        Point p = *start;
        Point g = discriminant_gradient(sys, p);
        Point tau = (sense / norm(g)) * perp(g);
        double h = step;
        for (std::size_t n = 0; n < opts.max_steps; ++n) {
            const Point pred = p + h * tau;
            std::optional<Point> q;
            try {
                q = detail::project_to_tl(sys, pred, opts.tol_factor, 8);
            } catch (const DomainError&) {
                q.reset();
            }
            bool ok = q.has_value() && norm(*q - p) <= 2.0 * h && norm(*q - p) > 0.0;
            Point tau_q;
            if (ok) {
                try {
                    const Point gq = discriminant_gradient(sys, *q);
                    if (norm(gq) == 0.0) {
                        ok = false;
                    } else {
                        tau_q = (1.0 / norm(gq)) * perp(gq);
                        if (dot(tau_q, tau) < 0.0) tau_q = -1.0 * tau_q;
                        ok = dot(tau_q, tau) > std::cos(0.2);
                    }
                } catch (const DomainError&) {
                    ok = false;
                }
            }
            if (!ok) {
                h *= 0.5;
                if (h < 1.0e-12 * (1.0 + norm(p))) {
                    half.termination = Termination::step_underflow;
                    half.message = "step underflow while tracing the transition line";
                    return half;
                }
                continue;
            }
            if (!bounds.contains(*q)) {
                // Clip the last segment to the boundary.
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (bounds.contains(p + mid * (*q - p))) lo = mid;
                    else hi = mid;
                }
                Point c = p + lo * (*q - p);
                // Slide along the crossed edge back onto Omega = 0.
                const bool fixed_u = std::min(std::fabs(c.u - bounds.u_min), std::fabs(c.u - bounds.u_max)) <=
                                     std::min(std::fabs(c.v - bounds.v_min), std::fabs(c.v - bounds.v_max));
                for (int it = 0; it < 20; ++it) {
                    try {
                        const double om = discriminant(sys, c);
                        const Point gc = discriminant_gradient(sys, c);
                        const double slope = fixed_u ? gc.v : gc.u;
                        if (std::fabs(om) <= 1.0e-14 * (1.0 + std::fabs(om)) || slope == 0.0) break;
                        Point next = c;
                        (fixed_u ? next.v : next.u) -= om / slope;
                        if (!bounds.contains(next) || norm(next - c) > h) break;
                        c = next;
                    } catch (const DomainError&) {
                        break;
                    }
                }
                if (norm(c - p) > 1e-14 * (1.0 + norm(p))) half.pts.push_back(c);
                half.termination = Termination::reached_bound;
                return half;
            }
            half.pts.push_back(*q);
            if (half.pts.size() > 8 && norm(*q - *start) < 0.75 * h) {
                half.termination = Termination::closed_loop;
                return half;
            }
            p = *q;
            tau = tau_q;
            h = std::min(step, 1.5 * h);
        }
        half.termination = Termination::max_steps;
        return half;
    };

    const Half fwd = march(1.0);
    Half bwd;
    if (fwd.termination != Termination::closed_loop) bwd = march(-1.0);

    HodographCurve curve;
    curve.branch = Branch::transition;
    curve.step = step;
    std::vector<Point> pts(bwd.pts.rbegin(), bwd.pts.rend());
    curve.seed_index = pts.size();
    pts.push_back(*start);
    pts.insert(pts.end(), fwd.pts.begin(), fwd.pts.end());
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) s += norm(pts[i] - pts[i - 1]);
        curve.points.push_back({s, pts[i], discriminant(sys, pts[i])});
    }
    curve.termination = fwd.termination;
    curve.message = fwd.message.empty() ? bwd.message : fwd.message;
    for (auto t : {fwd.termination, bwd.termination})
        if (t == Termination::step_underflow || t == Termination::domain_error) curve.termination = t;
    return curve;
}

/// dT = (dv/du)_ChL - (dv/du)_TL = (D - A) / (2B) + Omega_u / Omega_v at a TL point.
struct DeltaT {
    double value = 0.0;
    bool at_infinity = false;  ///< Omega_v = 0: TL tangent vertical, crossing orthogonal
};

inline DeltaT delta_t(const SystemDef& sys, Point p, double tol_factor = kDefaultTolFactor) {
    const Entries e = sys.entries(p);
    const double scale = e.magnitude() * e.magnitude();
    if (std::fabs(e.omega()) > 1.0e-6 * scale) throw DomainError("delta_t requires a point on the transition line");
    const Point g = discriminant_gradient(sys, p);
    const double gtol = tol_factor * scale;
    if (std::fabs(g.u) <= gtol && std::fabs(g.v) <= gtol)
        throw DomainError("degenerate transition-line point: grad Omega vanishes");
    if (std::fabs(e.b) <= scale_tolerance(e, tol_factor))
        throw DomainError("B vanishes at the contact; use swap_variables()");
    if (std::fabs(g.v) <= gtol) return {std::numeric_limits<double>::infinity(), true};
    return {(e.d - e.a) / (2.0 * e.b) + g.u / g.v, false};
}

/// d^2 v / du^2 along the branch's characteristic through a hyperbolic point:
/// dv/du = -mu  =>  v'' = -mu_u + mu mu_v.
inline double characteristic_acceleration(const SystemDef& sys, Point p, Branch b) {
    const Entries e = sys.entries(p);
    const EntryGradients g = sys.gradients(p);
    const double omega = e.omega();
    if (!(omega > 0.0)) throw DomainError("characteristic acceleration needs a hyperbolic point");
    if (e.b == 0.0) throw DomainError("characteristic acceleration needs B != 0");
    const Point go = discriminant_gradient(sys, p);
    const double sg = detail::branch_sign(b);
    const double r = std::sqrt(omega);
    const double num = e.a - e.d + sg * r;
    const double num_u = g.a_u - g.d_u + sg * go.u / (2.0 * r);
    const double num_v = g.a_v - g.d_v + sg * go.v / (2.0 * r);
    const double mu = num / (2.0 * e.b);
    const double mu_u = (num_u * e.b - num * g.b_u) / (2.0 * e.b * e.b);
    const double mu_v = (num_v * e.b - num * g.b_v) / (2.0 * e.b * e.b);
    return -mu_u + mu * mu_v;
}

struct PowerFit {
    double exponent = 0.0;
    double r_squared = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log y against log x.
inline PowerFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(xs[i]) && std::isfinite(ys[i])) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    }
    const std::size_t n = lx.size();
    if (n < 5) throw DomainError("too few points for a power-law fit");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("degenerate power-law fit");
    PowerFit fit;
    fit.exponent = sxy / sxx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.samples = n;
    return fit;
}

/// Unit normal of the TL at `contact`, pointing into the hyperbolic side.
/// Falls back to a direction search when grad Omega is zero or undefined there.
inline std::optional<Point> hyperbolic_normal(const SystemDef& sys, Point contact, double probe) {
    try {
        const Point g = discriminant_gradient(sys, contact);
        if (std::isfinite(g.u) && std::isfinite(g.v) && norm(g) > 1.0e-12) return (1.0 / norm(g)) * g;
    } catch (const DomainError&) {
    }
    std::optional<Point> best;
    double best_omega = 0.0;
    constexpr int kDirections = 32;
    for (int k = 0; k < kDirections; ++k) {
        const double th = 2.0 * 3.14159265358979323846 * k / kDirections;
        const Point d{std::cos(th), std::sin(th)};
        const auto om = detail::safe_omega(sys, contact + probe * d);
        if (om && *om > best_omega) {
            best_omega = *om;
            best = d;
        }
    }
    return best;
}

/// Exponent of |d^2v/du^2| against the normal distance to the TL, sampled
/// along the hyperbolic normal at `contact`. Negative means the approach
/// acceleration diverges.
inline PowerFit acceleration_exponent(const SystemDef& sys, Point contact, double probe) {
    auto n = hyperbolic_normal(sys, contact, probe);
    if (!n) throw DomainError("no hyperbolic side found next to the contact point");
    std::vector<double> xs, ys;
    for (int k = 0; k <= 16; ++k) {
        const double eps = probe * std::pow(2.0, -k);
        const Point q = contact + eps * *n;
        try {
            const double acc = std::max(std::fabs(characteristic_acceleration(sys, q, Branch::plus)),
                                        std::fabs(characteristic_acceleration(sys, q, Branch::minus)));
            xs.push_back(eps);
            ys.push_back(acc);
        } catch (const DomainError&) {
        }
    }
    // Constant acceleration (all samples equal) is exponent 0.
    if (xs.size() >= 5) {
        const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
        if (*mx - *mn <= 1.0e-12 * std::max(1.0, std::fabs(*mx))) return {0.0, 1.0, xs.size()};
    }
    return fit_power_law(xs, ys);
}

/// Exponent beta of (normal slope / tangential slope) of the characteristic
/// as it approaches the TL, d(eta)/d(xi) ~ eta^beta. beta >= 1 means the
/// characteristic reaches the TL only at infinity.
inline PowerFit approach_exponent(const SystemDef& sys, Point contact, double probe) {
    auto n = hyperbolic_normal(sys, contact, probe);
    if (!n) throw DomainError("no hyperbolic side found next to the contact point");
    const Point tau = perp(*n);
    std::vector<double> xs, ys;
    for (int k = 0; k <= 16; ++k) {
        const double eps = probe * std::pow(2.0, -k);
        const Point q = contact + eps * *n;
        try {
            auto t = characteristic_tangent(sys, q, Branch::plus);
            if (!t) continue;
            const double tang = std::fabs(dot(*t, tau));
            if (tang == 0.0) continue;
            xs.push_back(eps);
            ys.push_back(std::fabs(dot(*t, *n)) / tang);
        } catch (const DomainError&) {
        }
    }
    return fit_power_law(xs, ys);
}

enum class VerdictKind {
    transversal_allowed,
    tangent_forbidden,
    tangent_allowed,
    coincident_forbidden,
    singular_velocity_allowed,
    undetermined
};

inline const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::transversal_allowed: return "TransversalAllowed";
        case VerdictKind::tangent_forbidden: return "TangentForbidden";
        case VerdictKind::tangent_allowed: return "TangentAllowed";
        case VerdictKind::coincident_forbidden: return "CoincidentForbidden";
        case VerdictKind::singular_velocity_allowed: return "SingularVelocityAllowed";
        case VerdictKind::undetermined: return "Undetermined";
    }
    return "?";
}

inline bool transition_forbidden(VerdictKind k) {
    return k == VerdictKind::tangent_forbidden || k == VerdictKind::coincident_forbidden;
}

struct CrossingVerdict {
    VerdictKind kind = VerdictKind::undetermined;
    double delta_t_contact = std::numeric_limits<double>::quiet_NaN();
    double delta_t_left = std::numeric_limits<double>::quiet_NaN();
    double delta_t_right = std::numeric_limits<double>::quiet_NaN();
    bool orthogonal = false;
    Point contact;
    std::optional<double> acceleration_exponent;
    std::optional<double> approach_exponent;
    std::string diagnostics;
};

namespace detail {

inline double safe_delta_t_value(const SystemDef& sys, Point p) {
    try {
        const DeltaT d = delta_t(sys, p);
        return d.at_infinity ? std::numeric_limits<double>::infinity() : d.value;
    } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

inline std::optional<double> try_acceleration_exponent(const SystemDef& sys, Point c, double probe) {
    try {
        return acceleration_exponent(sys, c, probe).exponent;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

}  // namespace detail

/// Decision table at a TL contact point:
///   |dT| > tol (or infinite)                  -> TransversalAllowed
///   dT ~ 0, approach acceleration diverges     -> SingularVelocityAllowed
///   dT ~ 0 along the probed TL interval        -> CoincidentForbidden
///   dT ~ 0, sign change across the contact     -> TangentForbidden
///   dT ~ 0, no sign change                     -> TangentAllowed
/// When dT cannot be evaluated at the contact the characteristic's approach is
/// fitted instead: contact only at infinity -> Undetermined, diverging
/// acceleration -> SingularVelocityAllowed.
inline CrossingVerdict crossing_verdict(const SystemDef& sys, Point contact, double probe_arc = 1.0e-2) {
    constexpr double kExponentTol = 0.05;
    CrossingVerdict out;
    out.contact = contact;

    std::optional<DeltaT> dt0;
    std::string why_not;
    try {
        dt0 = delta_t(sys, contact);
    } catch (const DomainError& err) {
        why_not = err.what();
    }

    if (!dt0) {
        out.diagnostics = "dT undefined at contact (" + why_not + ")";
        try {
            out.approach_exponent = approach_exponent(sys, contact, probe_arc).exponent;
        } catch (const DomainError& err) {
            out.diagnostics += "; approach fit failed: " + std::string(err.what());
        }
        out.acceleration_exponent = detail::try_acceleration_exponent(sys, contact, probe_arc);
        if (out.approach_exponent && *out.approach_exponent >= 1.0 - kExponentTol) {
            out.kind = VerdictKind::undetermined;
            out.diagnostics += "; contact only at infinity (approach exponent " +
                               expr::format_double(*out.approach_exponent) + ")";
            return out;
        }
        if (out.acceleration_exponent && *out.acceleration_exponent < -kExponentTol) {
            out.kind = VerdictKind::singular_velocity_allowed;
            out.diagnostics += "; approach acceleration diverges with exponent " +
                               expr::format_double(*out.acceleration_exponent);
            return out;
        }
        out.kind = VerdictKind::undetermined;
        return out;
    }

    const Entries e = sys.entries(contact);
    const double tol = 1.0e-6 * e.magnitude();
    out.delta_t_contact = dt0->at_infinity ? std::numeric_limits<double>::infinity() : dt0->value;

    // dT sampled along the TL within +-probe_arc of the contact.
    std::vector<std::pair<double, double>> samples;  // (signed arc offset, dT)
    try {
        const HodographCurve tl =
            trace_transition_line(sys, contact, Rect::around(contact, 2.0 * probe_arc), probe_arc / 8.0);
        const double s0 = tl.points[tl.seed_index].s;
        for (const auto& cp : tl.points) {
            const double off = cp.s - s0;
            if (std::fabs(off) <= probe_arc * (1.0 + 1e-9))
                samples.emplace_back(off, detail::safe_delta_t_value(sys, cp.p));
        }
    } catch (const Error& err) {
        out.diagnostics += "TL sampling failed: " + std::string(err.what()) + "; ";
    }
    if (!samples.empty()) {
        const auto left = std::min_element(samples.begin(), samples.end());
        const auto right = std::max_element(samples.begin(), samples.end());
        if (left->first < 0.0) out.delta_t_left = left->second;
        if (right->first > 0.0) out.delta_t_right = right->second;
    }

    if (dt0->at_infinity || std::fabs(dt0->value) > tol) {
        out.kind = VerdictKind::transversal_allowed;
        out.orthogonal = dt0->at_infinity;
        out.diagnostics += dt0->at_infinity ? "characteristic crosses the TL orthogonally (dT at infinity)"
                                            : "transversal crossing, dT = " + expr::format_double(dt0->value);
        return out;
    }

    out.acceleration_exponent = detail::try_acceleration_exponent(sys, contact, probe_arc);
    if (out.acceleration_exponent && *out.acceleration_exponent < -kExponentTol) {
        out.kind = VerdictKind::singular_velocity_allowed;
        out.diagnostics += "dT vanishes but the approach acceleration diverges with exponent " +
                           expr::format_double(*out.acceleration_exponent);
        return out;
    }

    const bool whole_interval_zero =
        samples.size() >= 3 && std::all_of(samples.begin(), samples.end(), [&](const auto& s) {
            return std::isfinite(s.second) && std::fabs(s.second) <= tol;
        });
    if (whole_interval_zero) {
        out.kind = VerdictKind::coincident_forbidden;
        out.diagnostics += "TL is a characteristic on the probed interval (dT = 0)";
        return out;
    }
    if (std::isnan(out.delta_t_left) || std::isnan(out.delta_t_right)) {
        out.kind = VerdictKind::undetermined;
        out.diagnostics += "dT vanishes at the contact but could not be sampled on both sides";
        return out;
    }
    const bool left_pos = out.delta_t_left > 0.0;
    const bool right_pos = out.delta_t_right > 0.0;
    if (left_pos != right_pos) {
        out.kind = VerdictKind::tangent_forbidden;
        out.diagnostics += "tangential contact with dT changing sign";
    } else {
        out.kind = VerdictKind::tangent_allowed;
        out.diagnostics += "tangential contact without sign change of dT";
    }
    return out;
}

/// Local exponent of a simple wave leaving `contact`: |eta| ~ |xi|^exponent
/// in the frame of the characteristic tangent at the contact, fitted over
/// xi in [fit_window / 100, fit_window].
inline PowerFit contact_exponent(const SystemDef& sys, Point contact, double fit_window) {
    if (!(fit_window > 0.0)) throw DomainError("fit window must be positive");
    std::optional<PowerFit> best;
    std::string last_error = "no characteristic leaves the contact point";
    for (Branch b : {Branch::plus, Branch::minus}) {
        TraceOptions opts;
        opts.heading = Heading::away_from_transition;
        opts.max_steps = 20000;
        opts.relative_step = 0.05;
        HodographCurve curve;
        try {
            curve = trace_simple_wave(sys, contact, b, Rect::around(contact, 2.0 * fit_window), fit_window / 64.0, opts);
        } catch (const DomainError& err) {
            last_error = err.what();
            continue;
        }
        if (curve.points.size() < 2) continue;
        auto t0 = characteristic_tangent(sys, contact, b);
        if (!t0) continue;
        Point e1 = *t0;
        if (dot(e1, curve.points[1].p - contact) < 0.0) e1 = -1.0 * e1;
        const Point e2 = perp(e1);
        std::vector<double> xs, ys;
        for (const auto& cp : curve.points) {
            const Point d = cp.p - contact;
            const double xi = dot(d, e1);
            const double eta = std::fabs(dot(d, e2));
            if (xi >= 1.0e-2 * fit_window && xi <= fit_window && eta > 0.0) {
                xs.push_back(xi);
                ys.push_back(eta);
            }
        }
        try {
            PowerFit fit = fit_power_law(xs, ys);
            if (!best || fit.r_squared > best->r_squared) best = fit;
        } catch (const DomainError& err) {
            last_error = err.what();
        }
    }
    if (!best) throw DomainError(last_error);
    return *best;
}

}  // namespace mixotype
