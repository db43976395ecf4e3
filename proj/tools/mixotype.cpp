// mixotype: command-line front end.
//
// Exit codes: 0 ok, 2 numeric/domain failure, 3 usage/parse failure,
// 4 solver non-convergence.

#include "mixotype/mixotype.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mixotype;
using expr::format_double;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitUsage = 3;
constexpr int kExitSolver = 4;

struct ModelArgs {
    std::string id;
    std::string file;
};

struct Loaded {
    SystemDef sys;
    ModelFile defaults;
};

Loaded load_model(const ModelArgs& m) {
    if (m.id.empty() == m.file.empty()) throw ParseError("give exactly one of --model and --model-file", 0);
    if (!m.file.empty()) {
        ModelFile mf = load_model_file(m.file);
        return {mf.system, mf};
    }
    SystemDef sys = model_from_id(m.id);
    return {sys, ModelFile{sys, {}, {}, {}, {}, {}}};
}

double tol_factor(const ModelFile& mf) {
    if (const char* env = std::getenv("MIXOTYPE_TOL")) {
        char* end = nullptr;
        const double f = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(f > 0.0)) throw ParseError("MIXOTYPE_TOL must be a positive number", 0);
        return f;
    }
    return mf.tol.value_or(kDefaultTolFactor);
}

std::string complex_str(Complex z) {
    if (z.imag() == 0.0) return format_double(z.real());
    return format_double(z.real()) + (z.imag() < 0.0 ? "-" : "+") + format_double(std::fabs(z.imag())) + "i";
}

std::string capitalized(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

void add_model_options(CLI::App* cmd, ModelArgs& m) {
    cmd->add_option("--model", m.id, "model id (dnls, boussinesq, boussinesq:c=3, power_wave:alpha=1/3, gas:P=..., "
                                     "nlw:F2=...,F3=..., hamiltonian:h=..., h1:F1=...)");
    cmd->add_option("--model-file", m.file, "key=value model file");
}

void print_matrix(std::ostream& os, const char* name, const Matrix2& m) {
    os << name << ": [[" << format_double(m(0, 0)) << ", " << format_double(m(0, 1)) << "], [" << format_double(m(1, 0))
       << ", " << format_double(m(1, 1)) << "]]\n";
}

Rect bounds_or(const std::string& text, const ModelFile& mf, Rect fallback) {
    if (!text.empty()) return parse_bounds(text);
    return mf.bounds.value_or(fallback);
}

int cmd_classify(const ModelArgs& m, const std::string& point_text) {
    const Loaded l = load_model(m);
    const Point p = parse_point(point_text);
    const double tol = default_tolerance(l.sys, p, tol_factor(l.defaults));
    const Eigenstructure es = char_speeds(l.sys, p, tol);
    const Classification& c = es.classification;
    auto& os = std::cout;
    if (c.kind == PointType::parabolic) {
        os << "Parabolic (on transition line), lambda=" << format_double(es.lambda_plus.real()) << '\n';
    } else {
        os << capitalized(to_string(c.kind)) << ", Omega=" << format_double(c.omega) << ", lambda=("
           << complex_str(es.lambda_plus) << ", " << complex_str(es.lambda_minus) << ")\n";
    }
    os << "model: " << l.sys.tag() << '\n';
    os << "point: " << format_double(p.u) << ',' << format_double(p.v) << '\n';
    os << "type: " << to_string(c.kind) << '\n';
    os << "omega: " << format_double(c.omega) << '\n';
    os << "tolerance: " << format_double(c.tolerance) << '\n';
    os << "lambda_plus: " << complex_str(es.lambda_plus) << '\n';
    os << "lambda_minus: " << complex_str(es.lambda_minus) << '\n';
    if (es.mu_plus) os << "mu_plus: " << complex_str(*es.mu_plus) << '\n';
    if (es.mu_minus) os << "mu_minus: " << complex_str(*es.mu_minus) << '\n';
    if (es.eigenvector_on_tl)
        os << "eigenvector: " << format_double(es.eigenvector_on_tl->u) << ',' << format_double(es.eigenvector_on_tl->v)
           << '\n';
    return 0;
}

int cmd_jordan(const ModelArgs& m, const std::string& point_text, double a, double b) {
    const Loaded l = load_model(m);
    const Point p = parse_point(point_text);
    const double tol = default_tolerance(l.sys, p, tol_factor(l.defaults));
    const TransitionMatrix tm = v0_on_transition(l.sys, p, tol);
    const JordanData jd = conjugating_matrix(l.sys, p, a, b, tol);
    auto& os = std::cout;
    os << "branch: " << to_string(jd.branch) << '\n';
    os << "lambda: " << format_double(jd.lambda) << '\n';
    os << "s: " << format_double(tm.s) << " (sign " << tm.sign << ")\n";
    print_matrix(os, "V0", jd.v0);
    print_matrix(os, "P", jd.p_matrix);
    print_matrix(os, "P*V0*P^-1", jd.p_matrix * jd.v0 * jd.p_matrix.inverse());
    os << "residual: " << format_double(jd.residual) << '\n';
    return 0;
}

std::optional<Heading> parse_heading(const std::string& s) {
    if (s == "toward") return Heading::toward_transition;
    if (s == "away") return Heading::away_from_transition;
    if (s == "increasing-u") return Heading::increasing_u;
    if (s == "decreasing-u") return Heading::decreasing_u;
    return std::nullopt;
}

void plot_curve_svg(const SystemDef& sys, const HodographCurve& curve, const Rect& bounds, const std::string& path) {
    SvgPlot plot(bounds, "u", "v");
    // Transition line, best effort.
    for (const auto& cp : curve.points) {
        if (std::fabs(cp.omega) > 1e-6) continue;
        try {
            const HodographCurve tl = trace_transition_line(sys, cp.p, bounds, 1e-2 * (bounds.u_max - bounds.u_min));
            std::vector<Point> pts;
            for (const auto& q : tl.points) pts.push_back(q.p);
            plot.polyline(pts, "gray", 1.0, true);
        } catch (const Error&) {
        }
        break;
    }
    std::vector<Point> pts;
    for (const auto& cp : curve.points) pts.push_back(cp.p);
    plot.polyline(pts, curve.branch == Branch::transition ? "gray" : "steelblue");
    if (!pts.empty()) plot.marker(pts.front(), "black");
    if (!plot.save(path)) std::cerr << "warning: could not write " << path << '\n';
}

int cmd_trace(const ModelArgs& m, const std::string& start_text, const std::string& branch_text,
              const std::string& bounds_text, std::optional<double> step_opt, const std::string& heading_text,
              const std::string& out_path, const std::string& svg_path) {
    const Loaded l = load_model(m);
    const Point start = parse_point(start_text);
    const Rect bounds = bounds_or(bounds_text, l.defaults, Rect::around(start, 2.0));
    const double step = step_opt.value_or(l.defaults.step.value_or(1e-2));
    const auto heading = parse_heading(heading_text);
    if (!heading) throw ParseError("heading must be toward, away, increasing-u or decreasing-u", 0);
    TraceOptions opts;
    opts.heading = *heading;
    opts.tol_factor = tol_factor(l.defaults);

    HodographCurve curve;
    if (branch_text == "plus" || branch_text == "minus") {
        curve = trace_simple_wave(l.sys, start, branch_text == "plus" ? Branch::plus : Branch::minus, bounds, step, opts);
    } else if (branch_text == "transition") {
        curve = trace_transition_line(l.sys, start, bounds, step, opts);
    } else {
        throw ParseError("branch must be plus, minus or transition", 0);
    }

    std::ostringstream csv;
    write_curve_csv(csv, curve);
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw DomainError("cannot write " + out_path);
        out << csv.str();
    }
    std::cerr << "termination: " << to_string(curve.termination);
    if (!curve.message.empty()) std::cerr << " (" << curve.message << ')';
    std::cerr << ", points: " << curve.points.size() << '\n';
    if (!svg_path.empty()) plot_curve_svg(l.sys, curve, bounds, svg_path);
    return 0;
}

int cmd_crossing(const ModelArgs& m, const std::string& contact_text, std::optional<double> probe_opt,
                 std::optional<double> window_opt) {
    const Loaded l = load_model(m);
    const Point c = parse_point(contact_text);
    const double probe = probe_opt.value_or(l.defaults.probe.value_or(1e-2));
    const CrossingVerdict v = crossing_verdict(l.sys, c, probe);
    auto& os = std::cout;
    auto num = [](double x) { return std::isnan(x) ? std::string("undefined") : format_double(x); };
    os << "verdict: " << to_string(v.kind) << (transition_forbidden(v.kind) ? " (transition forbidden)" : "") << '\n';
    os << "contact: " << format_double(c.u) << ',' << format_double(c.v) << '\n';
    os << "delta_t: " << num(v.delta_t_contact) << '\n';
    os << "delta_t_left: " << num(v.delta_t_left) << '\n';
    os << "delta_t_right: " << num(v.delta_t_right) << '\n';
    os << "orthogonal: " << (v.orthogonal ? "yes" : "no") << '\n';
    if (v.acceleration_exponent) os << "acceleration_exponent: " << format_double(*v.acceleration_exponent) << '\n';
    if (v.approach_exponent) os << "approach_exponent: " << format_double(*v.approach_exponent) << '\n';
    try {
        const PowerFit fit = contact_exponent(l.sys, c, window_opt.value_or(probe));
        os << "contact_exponent: " << format_double(fit.exponent) << " (r^2 " << format_double(fit.r_squared) << ", "
           << fit.samples << " samples)\n";
    } catch (const DomainError& err) {
        os << "contact_exponent: undefined (" << err.what() << ")\n";
    }
    if (const auto& h = l.sys.hamiltonian()) {
        try {
            const auto pred = exponent_prediction(*h, c);
            os << "exponent_prediction: " << (pred ? pred->str() : std::string("undetermined")) << '\n';
        } catch (const DomainError&) {
        }
    }
    os << "diagnostics: " << v.diagnostics << '\n';
    return 0;
}

GridState parse_init(const std::string& spec, std::size_t n) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const auto params =
        colon == std::string::npos ? std::map<std::string, std::string>{} : detail::parse_params(spec.substr(colon + 1));
    auto get = [&](const char* key, std::optional<double> fallback = std::nullopt) {
        auto it = params.find(key);
        if (it == params.end()) {
            if (fallback) return *fallback;
            throw ParseError(std::string("init spec needs '") + key + "'", 0);
        }
        return detail::parse_number(it->second);
    };
    if (kind == "circle") return circle_init(get("c"), n, get("sign", 1.0) < 0.0 ? -1 : 1);
    if (kind == "constant") {
        const double u = get("u"), v = get("v");
        return make_grid_state(n, [u](double) { return u; }, [v](double) { return v; });
    }
    if (kind == "simple-wave") {
        // Boussinesq r_+ level set v + (2/3) u^{3/2} = k, u = u0 + amp sin x.
        const double k = get("k"), u0 = get("u0"), amp = get("amp");
        return make_grid_state(
            n, [=](double x) { return u0 + amp * std::sin(x); },
            [=](double x) { return k - (2.0 / 3.0) * std::pow(u0 + amp * std::sin(x), 1.5); });
    }
    throw ParseError("unknown init kind '" + kind + "' (circle, constant, simple-wave)", 0);
}

nlohmann::json trajectory_manifest(const Trajectory& traj, const std::vector<std::string>& files) {
    nlohmann::json j;
    j["times"] = nlohmann::json::array();
    for (const auto& s : traj.states) j["times"].push_back(s.time);
    j["files"] = files;
    j["steps"] = traj.steps;
    j["crossing"] = traj.crossing ? nlohmann::json{{"t", traj.crossing->t}, {"x", traj.crossing->x}} : nlohmann::json();
    j["blowup"] = traj.blowup ? nlohmann::json{{"t", traj.blowup->t},
                                               {"max_gradient", std::isfinite(traj.blowup->max_gradient)
                                                                    ? nlohmann::json(traj.blowup->max_gradient)
                                                                    : nlohmann::json("inf")},
                                               {"reason", traj.blowup->reason}}
                              : nlohmann::json();
    return j;
}

std::vector<std::string> write_states(const Trajectory& traj, const fs::path& outdir) {
    fs::create_directories(outdir);
    std::vector<std::string> files;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "state_%04zu.csv", i);
        std::ofstream out(outdir / name);
        if (!out) throw DomainError("cannot write " + (outdir / name).string());
        write_state_csv(out, traj.states[i]);
        files.emplace_back(name);
    }
    return files;
}

// (u, v)-locus snapshots plus optional extra curves.
void plot_loci(const Trajectory& traj, const Rect& view, const std::string& path,
               const std::vector<std::pair<std::vector<Point>, std::string>>& extra = {}) {
    SvgPlot plot(view, "u", "v");
    for (const auto& [pts, color] : extra) plot.polyline(pts, color, 1.5, color == "gray");
    const std::size_t n = traj.states.size();
    for (std::size_t k = 0; k < n; k += std::max<std::size_t>(1, n / 6)) {
        const GridState& s = traj.states[k];
        std::vector<Point> pts;
        for (std::size_t i = 0; i <= s.size(); ++i) pts.push_back({s.u[i % s.size()], s.v[i % s.size()]});
        plot.polyline(pts, k == 0 ? "black" : "steelblue", 1.0);
    }
    if (!plot.save(path)) std::cerr << "warning: could not write " << path << '\n';
}

Rect locus_view(const Trajectory& traj) {
    Rect r{1e300, -1e300, 1e300, -1e300};
    for (const auto& s : traj.states)
        for (std::size_t i = 0; i < s.size(); ++i) {
            r.u_min = std::min(r.u_min, s.u[i]);
            r.u_max = std::max(r.u_max, s.u[i]);
            r.v_min = std::min(r.v_min, s.v[i]);
            r.v_max = std::max(r.v_max, s.v[i]);
        }
    const double pad = 0.1 * std::max(r.u_max - r.u_min, r.v_max - r.v_min) + 1e-3;
    return {std::min(r.u_min, 0.0) - pad, r.u_max + pad, r.v_min - pad, r.v_max + pad};
}

int cmd_evolve(const ModelArgs& m, const std::string& init_spec, double t_end, std::optional<std::size_t> n_opt,
               double cfl, std::size_t outputs, const std::string& outdir, bool svg) {
    const Loaded l = load_model(m);
    const std::size_t n = n_opt.value_or(l.defaults.grid.value_or(256));
    const GridState init = parse_init(init_spec, n);
    EvolveOptions opts;
    opts.n_outputs = outputs;
    const Trajectory traj = evolve(l.sys, init, t_end, cfl, opts);
    const std::vector<std::string> files = write_states(traj, outdir);
    nlohmann::json manifest = trajectory_manifest(traj, files);
    manifest["model"] = l.sys.tag();
    manifest["init"] = init_spec;
    manifest["N"] = n;
    manifest["cfl"] = cfl;
    manifest["t_end"] = t_end;
    std::ofstream(fs::path(outdir) / "manifest.json") << manifest.dump(2) << '\n';
    if (svg) plot_loci(traj, locus_view(traj), (fs::path(outdir) / "locus.svg").string());

    std::cout << "states: " << traj.states.size() << ", steps: " << traj.steps << '\n';
    if (traj.crossing)
        std::cout << "crossing: t=" << format_double(traj.crossing->t) << " x=" << format_double(traj.crossing->x) << '\n';
    else
        std::cout << "crossing: none\n";
    if (traj.blowup) std::cout << "blowup: t=" << format_double(traj.blowup->t) << " (" << traj.blowup->reason << ")\n";
    return 0;
}

int cmd_experiment(double c, double t_end, std::size_t n, double cfl, std::size_t outputs, const std::string& outdir,
                   int sign) {
    constexpr double kBoundaryTol = 5e-4;
    const double cc = critical_c();
    auto& os = std::cout;
    os << "c: " << format_double(c) << '\n';
    os << "c_crit: " << format_double(cc) << '\n';
    std::string verdict;
    if (std::fabs(c - cc) <= kBoundaryTol) verdict = "boundary (|c - c_crit| <= 5e-4)";
    else if (c > cc) verdict = "forbidden (c > c_crit=" + format_double(cc) + ")";
    else verdict = "allowed (c < c_crit=" + format_double(cc) + ")";
    os << "verdict: " << verdict << '\n';

    std::optional<double> k;
    if (c > 1.0) {
        const auto waves = tangent_simple_waves(c);
        k = waves[0].k;
        os << "tangent_waves: k=" << format_double(waves[0].k) << " v_c=+-" << format_double(std::fabs(waves[0].v_c))
           << " residual=" << format_double(waves[0].residual) << '\n';
        if (auto ip = tangent_wave_intersection(*k))
            os << "waves_intersect: u=" << format_double(ip->u) << " v=0\n";
        else
            os << "waves_intersect: none in u >= 0\n";
    } else {
        os << "tangent_waves: none (circle does not start hyperbolic for c <= 1)\n";
    }

    const SystemDef sys = boussinesq();
    EvolveOptions opts;
    opts.n_outputs = outputs;
    const Trajectory traj = evolve(sys, circle_init(c, n, sign), t_end, cfl, opts);
    os << "evolution: N=" << n << " t_end=" << format_double(t_end) << " steps=" << traj.steps << '\n';
    if (traj.crossing)
        os << "crossing: t=" << format_double(traj.crossing->t) << " x=" << format_double(traj.crossing->x) << '\n';
    else
        os << "crossing: none\n";
    if (traj.blowup) os << "blowup: t=" << format_double(traj.blowup->t) << " (" << traj.blowup->reason << ")\n";

    if (!outdir.empty()) {
        const std::vector<std::string> files = write_states(traj, outdir);
        nlohmann::json manifest = trajectory_manifest(traj, files);
        manifest["model"] = "boussinesq";
        manifest["c"] = c;
        manifest["c_crit"] = cc;
        manifest["verdict"] = verdict;
        manifest["N"] = n;
        manifest["cfl"] = cfl;
        manifest["t_end"] = t_end;
        if (k) manifest["k"] = *k;
        std::ofstream(fs::path(outdir) / "manifest.json") << manifest.dump(2) << '\n';

        std::vector<std::pair<std::vector<Point>, std::string>> extra;
        const Rect view = locus_view(traj);
        extra.push_back({{{0.0, view.v_min}, {0.0, view.v_max}}, "gray"});
        if (k) {
            std::vector<Point> wp, wm;
            for (int i = 0; i <= 400; ++i) {
                const double v = view.v_min + (view.v_max - view.v_min) * i / 400.0;
                if (auto u = tangent_wave_plus_u(*k, v)) wp.push_back({*u, v});
                if (auto u = tangent_wave_minus_u(*k, v)) wm.push_back({*u, v});
            }
            extra.push_back({wp, "firebrick"});
            extra.push_back({wm, "firebrick"});
        }
        plot_loci(traj, view, (fs::path(outdir) / "hodograph.svg").string(), extra);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed-type 2x2 hydrodynamic systems: classification, characteristics, transition crossing"};
    app.require_subcommand(1);

    ModelArgs model;
    std::string point, start, branch = "plus", bounds, heading = "toward", out, svg, contact, init = "circle:c=3",
                           outdir = "out";
    double a = 1.0, b = 0.0, t_end = 2.0, cfl = 0.4, c = 3.0;
    std::optional<double> step, probe, window;
    std::optional<std::size_t> grid;
    std::size_t exp_grid = 512, outputs = 20;
    bool want_svg = false;
    int sign = 1;

    auto* classify_cmd = app.add_subcommand("classify", "classify a point and print the eigenstructure");
    add_model_options(classify_cmd, model);
    classify_cmd->add_option("--point", point, "u,v")->required();

    auto* jordan_cmd = app.add_subcommand("jordan", "Jordan conjugation on the transition line");
    add_model_options(jordan_cmd, model);
    jordan_cmd->add_option("--point", point, "u,v on the transition line")->required();
    jordan_cmd->add_option("--a", a, "family parameter a (non-zero)");
    jordan_cmd->add_option("--b", b, "family parameter b");

    auto* trace_cmd = app.add_subcommand("trace", "trace a simple wave or the transition line (CSV s,u,v,omega)");
    add_model_options(trace_cmd, model);
    trace_cmd->add_option("--start", start, "u,v")->required();
    trace_cmd->add_option("--branch", branch, "plus, minus or transition");
    trace_cmd->add_option("--bounds", bounds, "u_min,u_max,v_min,v_max");
    trace_cmd->add_option("--step", step, "maximum arc-length step");
    trace_cmd->add_option("--heading", heading, "toward, away, increasing-u or decreasing-u");
    trace_cmd->add_option("--out", out, "CSV file (default stdout)");
    trace_cmd->add_option("--svg", svg, "SVG plot file");

    auto* crossing_cmd = app.add_subcommand("crossing", "crossing verdict at a transition-line contact point");
    add_model_options(crossing_cmd, model);
    crossing_cmd->add_option("--contact", contact, "u,v on the transition line")->required();
    crossing_cmd->add_option("--probe", probe, "probe arc length (default 1e-2)");
    crossing_cmd->add_option("--window", window, "contact-exponent fit window (default probe)");

    auto* evolve_cmd = app.add_subcommand("evolve", "periodic time evolution on [0, 2 pi)");
    add_model_options(evolve_cmd, model);
    evolve_cmd->add_option("--init", init, "circle:c=<c>[,sign=-1] | constant:u=<u>,v=<v> | simple-wave:k=,u0=,amp=");
    evolve_cmd->add_option("--t-end", t_end, "final time");
    evolve_cmd->add_option("--n", grid, "grid size (even, >= 64)");
    evolve_cmd->add_option("--cfl", cfl, "CFL number in (0, 1]");
    evolve_cmd->add_option("--outputs", outputs, "number of stored output times");
    evolve_cmd->add_option("--outdir", outdir, "output directory");
    evolve_cmd->add_flag("--svg", want_svg, "write locus.svg");

    auto* exp_cmd = app.add_subcommand("experiment", "Boussinesq circle experiment");
    exp_cmd->add_option("--c", c, "circle centre u = c");
    exp_cmd->add_option("--t-end", t_end, "final time");
    exp_cmd->add_option("--n", exp_grid, "grid size (even, >= 64)");
    exp_cmd->add_option("--cfl", cfl, "CFL number in (0, 1]");
    exp_cmd->add_option("--outputs", outputs, "number of stored output times");
    exp_cmd->add_option("--outdir", outdir, "output directory (empty: no files)");
    exp_cmd->add_option("--sign", sign, "v(x,0) = sign * cos x");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*classify_cmd) return cmd_classify(model, point);
        if (*jordan_cmd) return cmd_jordan(model, point, a, b);
        if (*trace_cmd) return cmd_trace(model, start, branch, bounds, step, heading, out, svg);
        if (*crossing_cmd) return cmd_crossing(model, contact, probe, window);
        if (*evolve_cmd) return cmd_evolve(model, init, t_end, grid, cfl, outputs, outdir, want_svg);
        if (*exp_cmd) return cmd_experiment(c, t_end, exp_grid, cfl, outputs, outdir, sign);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}
