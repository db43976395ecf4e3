#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace mixotype;
using Catch::Approx;

namespace {

double max_invariant_drift(const HodographCurve& c, double (*r)(Point)) {
    const double r0 = r(c.front().p);
    double drift = 0.0;
    for (const auto& cp : c.points) drift = std::max(drift, std::fabs(r(cp.p) - r0));
    return drift;
}

double db_r_plus(Point p) { return p.v + (2.0 / 3.0) * std::pow(std::max(p.u, 0.0), 1.5); }
double db_r_minus(Point p) { return p.v - (2.0 / 3.0) * std::pow(std::max(p.u, 0.0), 1.5); }
double dnls_r_plus(Point p) { return p.u + 2.0 * std::sqrt(std::max(p.v, 0.0)); }
double dnls_r_minus(Point p) { return p.u - 2.0 * std::sqrt(std::max(p.v, 0.0)); }

}  // namespace

TEST_CASE("Boussinesq simple wave reaches the TL on its level set", "[charflow]") {
    const HodographCurve c = trace_simple_wave(boussinesq(), {1.0, 0.0}, Branch::plus, Rect{-1, 3, -3, 3}, 1e-2);
    CHECK(c.termination == Termination::hit_transition_line);
    CHECK(c.back().p.u == Approx(0.0).margin(1e-6));
    CHECK(c.back().p.v == Approx(2.0 / 3.0).margin(1e-6));
    CHECK(max_invariant_drift(c, db_r_plus) < 1e-6);
}

TEST_CASE("dNLS simple wave touches the TL at (2, 0)", "[charflow]") {
    const HodographCurve c = trace_simple_wave(dnls(), {0.0, 1.0}, Branch::plus, Rect{-3, 3, -1, 3}, 1e-2);
    CHECK(c.termination == Termination::hit_transition_line);
    CHECK(c.back().p.u == Approx(2.0).margin(1e-3));
    CHECK(c.back().p.v == Approx(0.0).margin(1e-6));
    CHECK(max_invariant_drift(c, dnls_r_plus) < 1e-6);
}

TEST_CASE("Riemann invariants are conserved along traced simple waves", "[charflow][property]") {
    for (int i = 0; i < 10; ++i) {
        const Point s{testing_support::uniform(0.2, 2.0), testing_support::uniform(-1.0, 1.0)};
        for (Heading h : {Heading::toward_transition, Heading::away_from_transition}) {
            TraceOptions o;
            o.heading = h;
            const Rect box{-1, 4, -4, 4};
            INFO("start " << s.u << "," << s.v << " heading " << static_cast<int>(h));
            CHECK(max_invariant_drift(trace_simple_wave(boussinesq(), s, Branch::plus, box, 1e-2, o), db_r_plus) < 1e-6);
            CHECK(max_invariant_drift(trace_simple_wave(boussinesq(), s, Branch::minus, box, 1e-2, o), db_r_minus) < 1e-6);
            const Point q{s.v, s.u};  // v > 0 for dNLS
            CHECK(max_invariant_drift(trace_simple_wave(dnls(), q, Branch::plus, box, 1e-2, o), dnls_r_plus) < 1e-6);
            CHECK(max_invariant_drift(trace_simple_wave(dnls(), q, Branch::minus, box, 1e-2, o), dnls_r_minus) < 1e-6);
        }
    }
}

TEST_CASE("power model simple waves follow the closed form", "[charflow]") {
    // alpha = 3: u - 2 v^{-1/2} is constant on the plus branch.
    const HodographCurve c3 =
        trace_simple_wave(power_wave(Rational(3)), {0.0, 1.0}, Branch::plus, Rect{-5, 5, 0.05, 5}, 1e-2);
    for (const auto& cp : c3.points) CHECK(cp.p.u - 2.0 / std::sqrt(cp.p.v) == Approx(-2.0).margin(1e-6));
    // alpha = 1/3: u + (6/5) v^{5/6} is constant on the plus branch.
    const HodographCurve c13 =
        trace_simple_wave(power_wave(Rational(1, 3)), {0.0, 1.0}, Branch::plus, Rect{-5, 5, -1, 5}, 1e-2);
    CHECK(c13.termination == Termination::hit_transition_line);
    for (const auto& cp : c13.points)
        CHECK(cp.p.u + 1.2 * std::pow(std::max(cp.p.v, 0.0), 5.0 / 6.0) == Approx(1.2).margin(1e-6));
}

TEST_CASE("simple-wave curve invariants", "[charflow][property]") {
    const SystemDef sys = boussinesq();
    const double step = 1e-3;
    const HodographCurve c = trace_simple_wave(sys, {2.0, 0.5}, Branch::minus, Rect{-1, 3, -3, 3}, step);
    REQUIRE(c.points.size() > 10);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const Point a = c.points[i - 1].p, b = c.points[i].p;
        CHECK(norm(b - a) <= 2.0 * step);
        const Point mid = 0.5 * (a + b);
        // The chord lags the midpoint tangent by O(h^2 v'''), which grows like u^(-3/2).
        if (discriminant(sys, mid) < 0.2) continue;
        const auto [mp, mm] = hodograph_speeds(sys, mid);
        // |dv/du + mu| in a form that stays finite for vertical chords.
        const Point d = b - a;
        CHECK(std::fabs(d.v + mm.real() * d.u) / norm(d) <= 1e-6);
    }
}

TEST_CASE("halving the step converges at fourth order", "[charflow][property]") {
    TraceOptions o;
    o.heading = Heading::increasing_u;
    o.approach_fraction = 1e3;  // keep the nominal step away from the TL
    auto end_v = [&](double h) {
        return trace_simple_wave(boussinesq(), {1.0, 0.0}, Branch::plus, Rect{0.5, 2.0, -3, 3}, h, o).back().p.v;
    };
    const double e1 = std::fabs(end_v(0.2) - end_v(0.1));
    const double e2 = std::fabs(end_v(0.1) - end_v(0.05));
    CHECK(e1 / e2 > 8.0);
}

TEST_CASE("trace errors and auto-swap", "[charflow]") {
    CHECK_THROWS_AS(trace_simple_wave(dnls(), {0.0, -1.0}, Branch::plus, Rect{}, 1e-2), DomainError);
    CHECK_THROWS_AS(trace_simple_wave(dnls(), {0.0, 1.0}, Branch::plus, Rect{-1, 1, -1, 0.5}, 1e-2), DomainError);
    // B = 0 everywhere: the tracer uses the swapped eigen-row.
    const SystemDef no_b = SystemDef::parse("1", "0", "1", "-1");
    const HodographCurve c = trace_simple_wave(no_b, {0.0, 0.0}, Branch::plus, Rect{-1, 1, -1, 1}, 0.1);
    CHECK(c.termination == Termination::reached_bound);
    CHECK(c.points.size() > 5);
    const SystemDef diag = SystemDef::parse("u", "0", "0", "u");
    CHECK_THROWS_AS(trace_simple_wave(diag, {0.0, 0.0}, Branch::plus, Rect{}, 0.1), DomainError);
}

TEST_CASE("transition line tracing", "[charflow]") {
    const HodographCurve db = trace_transition_line(boussinesq(), {0.1, 3.0}, Rect{-1, 1, -5, 5}, 0.1);
    CHECK(db.points.size() > 20);
    for (const auto& cp : db.points) {
        CHECK(cp.p.u == Approx(0.0).margin(1e-9));
        CHECK(std::fabs(cp.omega) <= default_tolerance(boussinesq(), cp.p));
    }
    const HodographCurve dn = trace_transition_line(dnls(), {5.0, 0.05}, Rect{0, 10, -1, 1}, 0.1);
    for (const auto& cp : dn.points) CHECK(cp.p.v == Approx(0.0).margin(1e-9));
    CHECK(dn.front().p.u == Approx(10.0).margin(1e-9));
    CHECK(dn.back().p.u == Approx(0.0).margin(1e-9));
    // Omega = 4 (rho - 1)^3: TL at rho = 1.
    const HodographCurve gas =
        trace_transition_line(gas_dynamics(Expression::parse("(v-1)^4/4")), {0.3, 1.1}, Rect{-1, 1, 0.5, 1.5}, 0.1);
    for (const auto& cp : gas.points) CHECK(cp.p.v == Approx(1.0).margin(1e-3));
    // Closed TL: Omega = u^2 + v^2 - 1 (A = D = 0, B = 1, C = (u^2 + v^2 - 1) / 4).
    const SystemDef circle = SystemDef::parse("0", "1", "(u^2+v^2-1)/4", "0");
    const HodographCurve ring = trace_transition_line(circle, {1.2, 0.0}, Rect{-2, 2, -2, 2}, 0.1);
    CHECK(ring.termination == Termination::closed_loop);
    for (const auto& cp : ring.points) CHECK(norm(cp.p) == Approx(1.0).margin(1e-9));
}

TEST_CASE("transition line errors", "[charflow]") {
    const SystemDef hyper = SystemDef::parse("0", "1", "1", "0");
    CHECK_THROWS_AS(trace_transition_line(hyper, {0.0, 0.0}, Rect{}, 0.1), SolverError);
    const SystemDef cross = SystemDef::parse("u", "v", "-v", "-u");  // Omega = 4u^2 - 4v^2
    CHECK_THROWS_AS(trace_transition_line(cross, {0.0, 0.0}, Rect{}, 0.1), DomainError);
}

TEST_CASE("delta_t examples", "[charflow]") {
    const DeltaT db = delta_t(boussinesq(), {0.0, 0.7});
    CHECK(db.at_infinity);
    CHECK(delta_t(dnls(), {1.3, 0.0}).value == 0.0);
    CHECK_FALSE(delta_t(dnls(), {1.3, 0.0}).at_infinity);
    CHECK_THROWS_AS(delta_t(dnls(), {1.3, 1.0}), DomainError);
    const SystemDef cross = SystemDef::parse("u", "1", "-v^2", "-u");  // grad Omega = 0 at the origin
    CHECK_THROWS_AS(delta_t(cross, {0.0, 0.0}), DomainError);
}

TEST_CASE("delta_t agrees with h_uuu / h_uuv", "[charflow][property]") {
    for (int i = 0; i < 20; ++i) {
        const double a = testing_support::uniform(0.2, 2), b = testing_support::uniform(0.5, 2),
                     c = testing_support::uniform(-2, 2);
        // h_uu = a u + 2 c v vanishes on v = -a u / (2c).
        const std::string h = expr::format_double(b) + "*v^2/2 + " + expr::format_double(a) + "*u^3/6 + " +
                              expr::format_double(c) + "*u^2*v";
        const HamiltonianDensity hd = HamiltonianDensity::parse(h);
        const SystemDef sys = from_hamiltonian(hd);
        const double u0 = testing_support::uniform(-1, 1);
        const Point p{u0, -a * u0 / (2.0 * c)};
        const HamiltonianDeltaT hdt = hamiltonian_delta_t(hd, p, 1e-8);
        const DeltaT dt = delta_t(sys, p);
        INFO(h);
        REQUIRE_FALSE(dt.at_infinity);
        CHECK(testing_support::rel_close(dt.value, hdt.value, 1e-8));
    }
    const Point p{0.0, 0.0};
    const HamiltonianDensity hd = HamiltonianDensity::parse("v^2/2 + u^3/6 + u^2*v");
    CHECK(delta_t(from_hamiltonian(hd), p).value == Approx(0.5));
    CHECK(hamiltonian_delta_t(hd, p).value == Approx(0.5));
}

TEST_CASE("crossing verdicts", "[charflow]") {
    for (double u0 : {-1.0, 0.0, 0.5, 2.0}) {
        const CrossingVerdict v = crossing_verdict(dnls(), {u0, 0.0});
        CHECK(v.kind == VerdictKind::coincident_forbidden);
        CHECK(transition_forbidden(v.kind));
    }
    const CrossingVerdict db = crossing_verdict(boussinesq(), {0.0, 0.0});
    CHECK(db.kind == VerdictKind::transversal_allowed);
    CHECK(db.orthogonal);
    const CrossingVerdict s = crossing_verdict(power_wave(Rational(1, 3)), {0.5, 0.0});
    CHECK(s.kind == VerdictKind::singular_velocity_allowed);
    REQUIRE(s.acceleration_exponent.has_value());
    CHECK(*s.acceleration_exponent == Approx(-2.0 / 3.0).margin(0.02));
    const CrossingVerdict inf = crossing_verdict(power_wave(Rational(3)), {10.0, 0.0});
    CHECK(inf.kind == VerdictKind::undetermined);
    CHECK(inf.diagnostics.find("contact only at infinity") != std::string::npos);

    const CrossingVerdict tf = crossing_verdict(SystemDef::parse("0", "1", "v - u^2", "0"), {0.0, 0.0});
    CHECK(tf.kind == VerdictKind::tangent_forbidden);
    CHECK((tf.delta_t_left > 0.0) != (tf.delta_t_right > 0.0));
    const CrossingVerdict ta = crossing_verdict(SystemDef::parse("0", "1", "v - u^3", "0"), {0.0, 0.0});
    CHECK(ta.kind == VerdictKind::tangent_allowed);
    const CrossingVerdict tr = crossing_verdict(SystemDef::parse("0", "1", "v - u", "0"), {0.0, 0.0});
    CHECK(tr.kind == VerdictKind::transversal_allowed);
    CHECK_FALSE(tr.orthogonal);
}

TEST_CASE("dT = 0 iff the TL eigenvector is tangent to the TL", "[charflow][property]") {
    struct Case {
        SystemDef sys;
        Point p;
    };
    for (const Case& c : {Case{dnls(), {0.7, 0.0}}, Case{boussinesq(), {0.0, 0.3}},
                          Case{SystemDef::parse("0", "1", "v - u^2", "0"), {0.0, 0.0}},
                          Case{SystemDef::parse("0", "1", "v - u", "0"), {0.0, 0.0}}}) {
        const DeltaT dt = delta_t(c.sys, c.p);
        const Point y = *char_speeds(c.sys, c.p).eigenvector_on_tl;
        const Point g = discriminant_gradient(c.sys, c.p);
        const bool tangent = std::fabs(dot(y, (1.0 / norm(g)) * g)) < 1e-6;
        CHECK(tangent == (!dt.at_infinity && std::fabs(dt.value) < 1e-6));
    }
}

TEST_CASE("contact exponents follow the k/2 law", "[charflow]") {
    CHECK(contact_exponent(boussinesq(), {0.0, 0.0}, 1e-2).exponent == Approx(1.5).margin(0.05));
    CHECK(contact_exponent(boussinesq(), {0.0, 1.3}, 1e-2).exponent == Approx(1.5).margin(0.05));
    const SystemDef quartic = model_from_id("hamiltonian:h=v^2/2+u^4/24");
    CHECK(contact_exponent(quartic, {0.0, 0.0}, 1e-2).exponent == Approx(2.0).margin(0.05));
    const SystemDef quintic = model_from_id("hamiltonian:h=v^2/2+u^5/120");
    CHECK(contact_exponent(quintic, {0.0, 0.0}, 1e-2).exponent == Approx(2.5).margin(0.05));
    CHECK_THROWS_AS(contact_exponent(boussinesq(), {0.0, 0.0}, 0.0), DomainError);
}

TEST_CASE("curve CSV output", "[charflow]") {
    const HodographCurve c = trace_transition_line(dnls(), {0.0, 0.0}, Rect{-1, 1, -1, 1}, 0.5);
    std::ostringstream os;
    write_curve_csv(os, c);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "s,u,v,omega");
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == c.points.size());
}
