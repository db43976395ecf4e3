#pragma once

// Periodic time evolution of (u, v)_t = V (u, v)_x and the Boussinesq circle
// experiment: initial data on (u - c)^2 + v^2 = 1, its two tangent simple
// waves, and the critical c at which they meet on u = 0.
//
// Semi-discrete central scheme (Kurganov-Tadmor) with minmod slopes and SSP
// RK3 in time. Written as U_t + G_x = 0 with G = -F when a flux F is known;
// otherwise the quasi-linear form V(U_j) (U*_{j+1/2} - U*_{j-1/2}) / dx with
// the same interface dissipation.

#include "mixotype/error.hpp"
#include "mixotype/syscore.hpp"
#include "mixotype/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mixotype {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct GridState {
    std::vector<double> x, u, v;
    double time = 0.0;

    std::size_t size() const { return u.size(); }
    double dx() const { return kTwoPi / static_cast<double>(u.size()); }
};

inline void validate(const GridState& s) {
    const std::size_t n = s.u.size();
    if (n < 64 || n % 2 != 0) throw DomainError("grid size must be even and at least 64");
    if (s.v.size() != n || s.x.size() != n) throw DomainError("grid arrays differ in length");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(s.u[i]) || !std::isfinite(s.v[i])) throw DomainError("non-finite initial data");
}

/// N equispaced samples of (fu(x), fv(x)) on [0, 2 pi).
inline GridState make_grid_state(std::size_t n, const std::function<double(double)>& fu,
                                 const std::function<double(double)>& fv) {
    GridState s;
    s.x.resize(n);
    s.u.resize(n);
    s.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.x[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        s.u[i] = fu(s.x[i]);
        s.v[i] = fv(s.x[i]);
    }
    validate(s);
    return s;
}

/// u = c + sin x, v = sign * cos x.
inline GridState circle_init(double c, std::size_t n, int sign = 1) {
    const double sg = sign < 0 ? -1.0 : 1.0;
    return make_grid_state(n, [c](double x) { return c + std::sin(x); }, [sg](double x) { return sg * std::cos(x); });
}

struct CrossingRecord {
    double t = 0.0;
    double x = 0.0;
};

struct BlowupRecord {
    double t = 0.0;
    double max_gradient = 0.0;
    std::string reason;
};

struct Trajectory {
    std::vector<GridState> states;
    std::optional<CrossingRecord> crossing;
    std::optional<BlowupRecord> blowup;
    std::size_t steps = 0;
};

struct EvolveOptions {
    /// Output times in (0, t_end]; empty means `n_outputs` equispaced times.
    std::vector<double> output_times;
    std::size_t n_outputs = 20;
    double blowup_gradient = 1.0e6;
    std::size_t max_steps = 2000000;
    /// Crossing indicator; defaults to the system's indicator, else Omega.
    std::optional<Expression> indicator;
};

namespace detail {

struct Field {
    std::vector<double> u, v;
};

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::fabs(a) < std::fabs(b) ? a : b;
}

// Bound on |lambda|; |Re| + |Im| in the elliptic domain.
inline double spectral_bound(const Entries& e) {
    const double omega = e.omega();
    const double half_trace = 0.5 * std::fabs(e.trace());
    if (omega >= 0.0) return half_trace + 0.5 * std::sqrt(omega);
    return half_trace + 0.5 * std::sqrt(-omega);
}

class Integrator {
public:
    Integrator(const SystemDef& sys, std::size_t n) : sys_(sys), n_(n), dx_(kTwoPi / static_cast<double>(n)) {}

    double max_speed(const Field& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s = std::max(s, spectral_bound(sys_.entries({f.u[i], f.v[i]})));
        return s;
    }

    // dU/dt for the periodic field.
    Field rhs(const Field& f) const {
        const auto& flux = sys_.flux();
        std::vector<double> su(n_), sv(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t jm = (j + n_ - 1) % n_, jp = (j + 1) % n_;
            su[j] = minmod(f.u[j] - f.u[jm], f.u[jp] - f.u[j]);
            sv[j] = minmod(f.v[j] - f.v[jm], f.v[jp] - f.v[j]);
        }
        // Interface j+1/2 quantities.
        std::vector<double> hu(n_), hv(n_), mu(n_), mv(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t jp = (j + 1) % n_;
            const Point lm{f.u[j] + 0.5 * su[j], f.v[j] + 0.5 * sv[j]};
            const Point lp{f.u[jp] - 0.5 * su[jp], f.v[jp] - 0.5 * sv[jp]};
            const double a = std::max(spectral_bound(sys_.entries(lm)), spectral_bound(sys_.entries(lp)));
            const double du = lp.u - lm.u, dv = lp.v - lm.v;
            if (flux) {
                const double gu = -0.5 * ((*flux)[0].evaluate(lm) + (*flux)[0].evaluate(lp));
                const double gv = -0.5 * ((*flux)[1].evaluate(lm) + (*flux)[1].evaluate(lp));
                hu[j] = gu - 0.5 * a * du;
                hv[j] = gv - 0.5 * a * dv;
            } else {
                mu[j] = 0.5 * (lm.u + lp.u);
                mv[j] = 0.5 * (lm.v + lp.v);
                hu[j] = -0.5 * a * du;
                hv[j] = -0.5 * a * dv;
            }
        }
        Field out{std::vector<double>(n_), std::vector<double>(n_)};
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t jm = (j + n_ - 1) % n_;
            out.u[j] = -(hu[j] - hu[jm]) / dx_;
            out.v[j] = -(hv[j] - hv[jm]) / dx_;
            if (!flux) {
                const Entries e = sys_.entries({f.u[j], f.v[j]});
                const double gu = (mu[j] - mu[jm]) / dx_, gv = (mv[j] - mv[jm]) / dx_;
                out.u[j] += e.a * gu + e.b * gv;
                out.v[j] += e.c * gu + e.d * gv;
            }
        }
        return out;
    }

    // One SSP-RK3 step.
    Field step(const Field& f, double dt) const {
        auto axpy = [&](double a, const Field& x, double b, const Field& y, double c, const Field& r) {
            Field o{std::vector<double>(n_), std::vector<double>(n_)};
            for (std::size_t i = 0; i < n_; ++i) {
                o.u[i] = a * x.u[i] + b * y.u[i] + c * r.u[i];
                o.v[i] = a * x.v[i] + b * y.v[i] + c * r.v[i];
            }
            return o;
        };
        const Field s1 = axpy(1.0, f, 0.0, f, dt, rhs(f));
        const Field s2 = axpy(0.75, f, 0.25, s1, 0.25 * dt, rhs(s1));
        return axpy(1.0 / 3.0, f, 2.0 / 3.0, s2, 2.0 / 3.0 * dt, rhs(s2));
    }

    double max_gradient(const Field& f) const {
        double g = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t jp = (j + 1) % n_;
            g = std::max({g, std::fabs(f.u[jp] - f.u[j]) / dx_, std::fabs(f.v[jp] - f.v[j]) / dx_});
        }
        return g;
    }

private:
    const SystemDef& sys_;
    std::size_t n_;
    double dx_;
};

inline bool all_finite(const Field& f) {
    for (std::size_t i = 0; i < f.u.size(); ++i)
        if (!std::isfinite(f.u[i]) || !std::isfinite(f.v[i])) return false;
    return true;
}

inline std::vector<double> indicator_values(const SystemDef& sys, const std::optional<Expression>& ind,
                                            const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point p{u[i], v[i]};
        out[i] = ind ? ind->evaluate(p) : discriminant(sys, p);
    }
    return out;
}

// Earliest sign change of the indicator between two sample sets, linearly
// interpolated in time.
inline std::optional<CrossingRecord> first_sign_change(const std::vector<double>& x, const std::vector<double>& a,
                                                       double ta, const std::vector<double>& b, double tb) {
    std::optional<CrossingRecord> best;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool changed = (a[i] > 0.0 && b[i] <= 0.0) || (a[i] < 0.0 && b[i] >= 0.0);
        if (!changed) continue;
        const double frac = a[i] / (a[i] - b[i]);
        const double t = ta + (tb - ta) * frac;
        if (!best || t < best->t) best = CrossingRecord{t, x[i]};
    }
    return best;
}

}  // namespace detail

/// Evolves `init` to t_end with adaptive dt = cfl dx / max speed. States are
/// stored at t = 0 and every output time. Stops early on blow-up
/// (max |d/dx| above the threshold or non-finite values).
inline Trajectory evolve(const SystemDef& sys, const GridState& init, double t_end, double cfl,
                         const EvolveOptions& opts = {}) {
    validate(init);
    if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");
    if (!(t_end >= init.time)) throw DomainError("t_end precedes the initial time");
    const std::size_t n = init.size();
    const double dx = init.dx();

    std::vector<double> outputs = opts.output_times;
    if (outputs.empty()) {
        const std::size_t k = std::max<std::size_t>(1, opts.n_outputs);
        for (std::size_t i = 1; i <= k; ++i)
            outputs.push_back(init.time + (t_end - init.time) * static_cast<double>(i) / static_cast<double>(k));
    }
    std::sort(outputs.begin(), outputs.end());
    outputs.erase(std::remove_if(outputs.begin(), outputs.end(),
                                 [&](double t) { return t <= init.time || t > t_end; }),
                  outputs.end());

    const std::optional<Expression> indicator = opts.indicator ? opts.indicator : sys.indicator();
    detail::Integrator integ(sys, n);
    detail::Field f{init.u, init.v};

    Trajectory traj;
    traj.states.push_back(init);
    double t = init.time;
    std::vector<double> ind_prev = detail::indicator_values(sys, indicator, f.u, f.v);

    auto store = [&](double time) {
        GridState s;
        s.x = init.x;
        s.u = f.u;
        s.v = f.v;
        s.time = time;
        traj.states.push_back(std::move(s));
    };

    const bool constant_data = std::all_of(f.u.begin(), f.u.end(), [&](double x) { return x == f.u[0]; }) &&
                               std::all_of(f.v.begin(), f.v.end(), [&](double x) { return x == f.v[0]; });

    if (!constant_data && integ.max_speed(f) == 0.0)
        throw DomainError("zero characteristic speed with non-constant data");

    std::size_t next_out = 0;
    try {
        while (next_out < outputs.size()) {
            if (traj.steps >= opts.max_steps) throw SolverError("evolve exceeded the step limit", t);
            const double speed = integ.max_speed(f);
            double dt;
            if (speed > 0.0) dt = cfl * dx / speed;
            else dt = outputs[next_out] - t;
            const double target = outputs[next_out];
            const bool hits_output = t + dt >= target * (1.0 - 1e-14);
            if (hits_output) dt = target - t;

            detail::Field g = integ.step(f, dt);
            const double t_new = hits_output ? target : t + dt;
            ++traj.steps;

            if (!detail::all_finite(g)) {
                traj.blowup = BlowupRecord{t_new, std::numeric_limits<double>::infinity(), "non-finite values"};
                break;
            }
            std::vector<double> ind_new = detail::indicator_values(sys, indicator, g.u, g.v);
            if (!traj.crossing) traj.crossing = detail::first_sign_change(init.x, ind_prev, t, ind_new, t_new);
            f = std::move(g);
            t = t_new;
            ind_prev = std::move(ind_new);

            const double grad = integ.max_gradient(f);
            if (grad > opts.blowup_gradient) {
                traj.blowup = BlowupRecord{t, grad, "gradient catastrophe"};
                store(t);
                break;
            }
            if (hits_output) {
                store(t);
                ++next_out;
            }
        }
    } catch (const DomainError& err) {
        traj.blowup = BlowupRecord{t, std::numeric_limits<double>::infinity(), err.what()};
    }
    return traj;
}

/// CSV with columns x,u,v.
inline void write_state_csv(std::ostream& os, const GridState& s) {
    os << "x,u,v\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        os << expr::format_double(s.x[i]) << ',' << expr::format_double(s.u[i]) << ',' << expr::format_double(s.v[i])
           << '\n';
}

/// First (t, x) at which the indicator changes sign between consecutive
/// stored states.
inline std::optional<CrossingRecord> detect_crossing(const SystemDef& sys, const Trajectory& traj,
                                                     const std::optional<Expression>& indicator = std::nullopt) {
    const std::optional<Expression> ind = indicator ? indicator : sys.indicator();
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const GridState& a = traj.states[k - 1];
        const GridState& b = traj.states[k];
        auto hit = detail::first_sign_change(a.x, detail::indicator_values(sys, ind, a.u, a.v), a.time,
                                             detail::indicator_values(sys, ind, b.u, b.v), b.time);
        if (hit) return hit;
    }
    return std::nullopt;
}

// Boussinesq simple waves through the circle: the r_+ and r_- level sets
//     W+: v + (2/3) u^{3/2} = k,    W-: v - (2/3) u^{3/2} = -k,
// tangent to (u - c)^2 + v^2 = 1 at (u_c, -+w). Tangency of W+ at v_c = -w:
//     ((3/2)(k + w))^{2/3} = c - sqrt(1 - w^2),
//     ((3/2)(k + w))^{-1/3} = w / sqrt(1 - w^2).

struct TangentWave {
    double k = 0.0;
    double v_c = 0.0;
    double residual = 0.0;
};

namespace detail {

inline std::array<double, 2> tangency_residual(double c, double k, double w) {
    const double a = 1.5 * (k + w);
    const double root = std::sqrt(1.0 - w * w);
    return {std::cbrt(a * a) - c + root, 1.0 / std::cbrt(a) - w / root};
}

}  // namespace detail

/// Solves the tangency system by damped Newton from w = 0.5 with k taken from
/// the first equation; returns W+ (touching at v_c = -w) then W- (v_c = +w).
inline std::vector<TangentWave> tangent_simple_waves(double c) {
    if (!(c > 1.0)) throw DomainError("tangent simple waves need c > 1 (circle must start hyperbolic)");
    double w = 0.5;
    double k = (2.0 / 3.0) * std::pow(c - std::sqrt(1.0 - w * w), 1.5) - w;
    auto res = detail::tangency_residual(c, k, w);
    auto rnorm = [](const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); };
    for (int it = 0; it < 100 && rnorm(res) > 1e-14; ++it) {
        const double a = 1.5 * (k + w);
        const double root = std::sqrt(1.0 - w * w);
        const double a13 = std::cbrt(a), a43 = a * a13;
        const double j11 = 1.0 / a13, j12 = 1.0 / a13 - w / root;
        const double j21 = -0.5 / a43, j22 = -0.5 / a43 - 1.0 / (root * root * root);
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        const double dk = (res[0] * j22 - res[1] * j12) / det;
        const double dw = (j11 * res[1] - j21 * res[0]) / det;
        double lam = 1.0;
        for (int ls = 0; ls < 40; ++ls, lam *= 0.5) {
            const double kk = k - lam * dk, ww = w - lam * dw;
            if (ww <= 0.0 || ww >= 1.0 || kk + ww <= 0.0) continue;
            const auto r = detail::tangency_residual(c, kk, ww);
            if (rnorm(r) < rnorm(res) || lam < 1e-6) {
                k = kk;
                w = ww;
                res = r;
                break;
            }
        }
    }
    const double r = rnorm(res);
    if (!(r <= 1e-10)) throw SolverError("tangent simple-wave Newton did not converge", r);
    return {{k, -w, r}, {k, w, r}};
}

/// c at which the two tangent waves meet on u = 0 (k = 0).
inline double critical_c() {
    // ((3/2) w)^{-1/3} = w / sqrt(1 - w^2) has a single root in (0, 1).
    auto g = [](double w) { return 1.0 / std::cbrt(1.5 * w) - w / std::sqrt(1.0 - w * w); };
    double lo = 1e-12, hi = 1.0 - 1e-15;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double w = 0.5 * (lo + hi);
    if (std::fabs(g(w)) > 1e-8) throw SolverError("critical c root did not converge", g(w));
    return std::cbrt(2.25 * w * w) + std::sqrt(1.0 - w * w);
}

/// W+ as u(v) = ((3/2)(k - v))^{2/3}; nullopt where v > k.
inline std::optional<double> tangent_wave_plus_u(double k, double v) {
    const double a = 1.5 * (k - v);
    if (a < 0.0) return std::nullopt;
    return std::cbrt(a * a);
}

/// W- as u(v) = ((3/2)(k + v))^{2/3}.
inline std::optional<double> tangent_wave_minus_u(double k, double v) { return tangent_wave_plus_u(k, -v); }

/// Intersection of W+ and W- (on v = 0), present only for k >= 0.
inline std::optional<Point> tangent_wave_intersection(double k) {
    if (k < 0.0) return std::nullopt;
    return Point{std::cbrt(2.25 * k * k), 0.0};
}

/// True when (u, v) lies strictly below both tangent waves, i.e. in the
/// region the circle data must avoid for c > c_crit.
inline bool below_both_tangent_waves(double k, Point p, double tol = 0.0) {
    if (p.u < 0.0) return true;
    const double r = (2.0 / 3.0) * std::pow(p.u, 1.5);
    return p.v + r < k - tol && p.v - r > -k + tol;
}

}  // namespace mixotype
