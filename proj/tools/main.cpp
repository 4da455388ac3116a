// pwsmooth: build, sample and check single-expression analytic approximants
// to piecewise-continuous functions with jump discontinuities.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pwsmooth/approximant.hpp"
#include "pwsmooth/errors.hpp"
#include "pwsmooth/io.hpp"
#include "pwsmooth/showcase.hpp"

namespace {

using namespace pwsmooth;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

template <class F>
int run_guarded(F&& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
    } catch (const DocumentError& e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
    } catch (const SyntaxError& e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
    } catch (const UnknownIdentifier& e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainViolation& e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
    } catch (const SchemaVersionMismatch& e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
    } catch (const CorruptMatrix& e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kExitNumeric;
    }
}

Approximant build_from_input(const std::string& path) {
    nlohmann::json doc = read_json_file(path);
    if (doc.is_object() && doc.contains("s_matrix")) return load(doc);
    return assemble(validate(read_spec(doc)));
}

std::vector<double> equispaced(double from, double to, long points) {
    if (points < 1)
        throw ValidationError({{ValidationCode::InvalidParameter, "points must be >= 1"}},
                              "points must be >= 1");
    if (from > to)
        throw ValidationError(
            {{ValidationCode::InvalidParameter, "--from must not exceed --to"}},
            "--from must not exceed --to");
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        xs.push_back(from);
        return xs;
    }
    if (from == to)
        throw ValidationError(
            {{ValidationCode::InvalidParameter, "need --from < --to for points > 1"}},
            "need --from < --to for points > 1");
    const double step = (to - from) / static_cast<double>(points - 1);
    for (long i = 0; i < points; ++i)
        xs.push_back(i + 1 == points ? to : from + static_cast<double>(i) * step);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i] < xs[i + 1]))
            throw ValidationError(
                {{ValidationCode::InvalidParameter, "grid spacing underflows"}},
                "grid spacing underflows");
    return xs;
}

// --- subcommands --------------------------------------------------------------

int cmd_build(const std::string& in, const std::string& out) {
    Approximant a = assemble(validate(read_spec_file(in)));
    save_file(a, out);
    return 0;
}

int cmd_sample(const std::string& in, double from, double to, long points,
               const std::string& out) {
    Approximant a = build_from_input(in);
    const std::vector<double> xs = equispaced(from, to, points);
    std::string csv = "x,omega\n";
    for (double x : xs) {
        csv += format_number(x);
        csv += ',';
        csv += format_number(eval(a, x));
        csv += '\n';
    }
    write_text_file(out, csv);
    return 0;
}

int cmd_error(const std::string& in, long grid_n, const std::string& grid_file,
              double exclude_radius, const std::vector<double>& exclude_centers,
              const std::string& out) {
    Approximant a = build_from_input(in);
    std::vector<double> xs;
    if (!grid_file.empty()) {
        std::ifstream gf(grid_file);
        if (!gf) throw IoError("cannot open '" + grid_file + "' for reading");
        double v;
        while (gf >> v) xs.push_back(v);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        if (xs.empty())
            throw ValidationError({{ValidationCode::InvalidParameter, "empty grid file"}},
                                  "empty grid file");
    } else {
        xs = equispaced(a.spec.spec.domain.x0, a.spec.spec.domain.xf, grid_n);
    }

    const ErrorProfile profile = error_profile(a, xs);
    std::string csv = "x,omega,psi,abs_err,rel_err\n";
    for (const auto& s : profile.samples) {
        csv += format_number(s.x);
        csv += ',';
        csv += format_number(s.omega);
        csv += ',';
        csv += format_number(s.psi);
        csv += ',';
        csv += format_number(s.abs_err);
        csv += ',';
        csv += format_number(s.rel_valid ? s.rel_err
                                         : std::numeric_limits<double>::quiet_NaN());
        csv += '\n';
    }
    write_text_file(out, csv);

    std::vector<double> centers = a.spec.spec.cuts;
    centers.insert(centers.end(), exclude_centers.begin(), exclude_centers.end());
    auto excluded = [&](double x) {
        for (double c : centers)
            if (std::fabs(x - c) <= exclude_radius) return true;
        return false;
    };
    double max_abs = 0.0, max_abs_x = 0.0, max_rel = 0.0, max_rel_x = 0.0;
    for (const auto& s : profile.samples) {
        if (s.at_cut || !std::isfinite(s.abs_err)) continue;
        if (s.abs_err >= max_abs) {
            max_abs = s.abs_err;
            max_abs_x = s.x;
        }
        if (s.rel_valid && !excluded(s.x) && s.rel_err >= max_rel) {
            max_rel = s.rel_err;
            max_rel_x = s.x;
        }
    }
    std::cout << "max_abs = " << format_number(max_abs) << " at x = "
              << format_number(max_abs_x) << "; max_rel = " << format_number(max_rel)
              << " at x = " << format_number(max_rel_x) << '\n';
    return 0;
}

int cmd_delta(double b, double h, double x0, double xf, const std::string& f_text) {
    DeltaSpec d;
    d.center = b;
    d.half_width = h;
    d.domain = {x0, xf};
    Approximant a = delta_approximant(d);
    MassCheck mass = check_unit_mass(d, a);
    std::cout << "I1 = " << format_number(mass.integral) << '\n'
              << "e_I = " << format_number(mass.error) << '\n';
    if (!f_text.empty()) {
        SiftResult s = sift(d, a, Expression::parse(f_text));
        std::cout << "I2 = " << format_number(s.integral) << '\n';
        if (s.absolute_only)
            std::cout << "e2 = " << format_number(s.error) << " (absolute; f(b) = 0)\n";
        else
            std::cout << "e2 = " << format_number(s.error) << '\n';
    }
    return 0;
}

int cmd_oscillator(const OscillatorSpec& o, double dt, const std::string& method,
                   const std::string& out) {
    std::string csv;
    if (method == "rk4") {
        Trajectory traj = solve_rk4(o, dt, o.time.xf);
        csv = "t,x,v\n";
        for (const auto& s : traj.samples)
            csv += format_number(s.t) + "," + format_number(s.x) + "," +
                   format_number(s.v) + "\n";
    } else if (method == "analytic") {
        std::vector<double> ts;
        for (double t = o.time.x0; t < o.time.xf;
             t = o.time.x0 + dt * static_cast<double>(ts.size()))
            ts.push_back(t);
        if (ts.back() < o.time.xf) ts.push_back(o.time.xf);
        Trajectory traj = solve_analytic(o, ts);
        csv = "t,x,v\n";
        for (const auto& s : traj.samples)
            csv += format_number(s.t) + "," + format_number(s.x) + "," +
                   format_number(s.v) + "\n";
    } else { // both
        Trajectory rk4 = solve_rk4(o, dt, o.time.xf);
        std::vector<double> ts;
        ts.reserve(rk4.samples.size());
        for (const auto& s : rk4.samples) ts.push_back(s.t);
        Trajectory ana = solve_analytic(o, ts);
        double max_dx = 0.0;
        csv = "t,x,v,x_analytic,v_analytic\n";
        for (std::size_t i = 0; i < rk4.samples.size(); ++i) {
            const auto& r = rk4.samples[i];
            const auto& g = ana.samples[i];
            max_dx = std::max(max_dx, std::fabs(r.x - g.x));
            csv += format_number(r.t) + "," + format_number(r.x) + "," +
                   format_number(r.v) + "," + format_number(g.x) + "," +
                   format_number(g.v) + "\n";
        }
        std::cout << "max_dx = " << format_number(max_dx) << '\n';
    }
    write_text_file(out, csv);
    return 0;
}

// --- demos: the five published configurations with their pass gates ------------

struct CheckList {
    bool all_pass = true;
    void check(const std::string& name, bool pass, const std::string& detail) {
        std::cout << (pass ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
        all_pass = all_pass && pass;
    }
};

PiecewiseSpec sign_spec() {
    PiecewiseSpec spec;
    spec.domain = {-1000.0, 1000.0};
    spec.cuts = {375.0};
    spec.partitions = {Expression::parse("-1"), Expression::parse("1")};
    return spec;
}

PiecewiseSpec sawtooth_spec() {
    PiecewiseSpec spec;
    spec.domain = {0.0, 3.0};
    spec.cuts = {1.0, 2.0};
    spec.partitions = {Expression::parse("x"), Expression::parse("x-1"),
                       Expression::parse("x-2")};
    return spec;
}

PiecewiseSpec example3_spec() {
    PiecewiseSpec spec;
    spec.domain = {-1.0, 1.0};
    spec.cuts = {-0.3, 0.6};
    spec.partitions = {
        Expression::parse("ln(1+x^2)"),
        Expression::parse("0.086177*(20 + 20*x + 5*exp(-4*x)*sin(6*pi*x/0.6))"),
        Expression::parse("2.770315 + 0.2/(x-0.5) - 0.5")};
    return spec;
}

int demo_sign() {
    CheckList checks;
    Approximant a = assemble(validate(sign_spec()));
    Eigen::MatrixXd want(2, 2);
    want << 1, -1, 1, 1;
    checks.check("switch matrix", a.switches.snapped == want, "[[1,-1],[1,1]]");

    std::vector<double> grid = equispaced(-1000.0, 1000.0, 10000);
    grid.push_back(375.0 - 1e-9);
    grid.push_back(375.0 + 1e-9);
    std::sort(grid.begin(), grid.end());
    ErrorProfile p = error_profile(a, grid);
    checks.check("max rel err", p.max_rel < 1e-12,
                 "max rel = " + format_number(p.max_rel) + " < 1e-12");
    return checks.all_pass ? 0 : 1;
}

int demo_sawtooth() {
    CheckList checks;
    Approximant a = assemble(validate(sawtooth_spec()));

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> pick(0.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = pick(rng);
        Eigen::VectorXd f = auxiliary_at(a, x);
        worst = std::max({worst, std::fabs(f(0) - (x - 1.0)), std::fabs(f(1) + 0.5),
                          std::fabs(f(2) + 0.5)});
    }
    checks.check("auxiliary functions", worst <= 1e-13,
                 "max |F - (x-1, -1/2, -1/2)| = " + format_number(worst));

    ErrorProfile p = error_profile(a, equispaced(0.0, 3.0, 10001));
    checks.check("max abs err", p.max_abs < 1e-12,
                 "max abs = " + format_number(p.max_abs) + " < 1e-12");
    const double w1 = std::fabs(eval(a, 1.0) - 0.5), w2 = std::fabs(eval(a, 2.0) - 0.5);
    checks.check("jump midpoints", w1 <= 1e-12 && w2 <= 1e-12,
                 "|omega(cut) - 1/2| = " + format_number(std::max(w1, w2)));
    return checks.all_pass ? 0 : 1;
}

int demo_example3() {
    CheckList checks;
    Approximant a = assemble(validate(example3_spec()));
    std::vector<double> grid = equispaced(-1.0, 1.0, 10000);

    ErrorProfile p = error_profile(a, grid);
    double max_rel = 0.0;
    double nearest = grid.front();
    for (const auto& s : p.samples) {
        if (std::fabs(s.x - 0.5) < std::fabs(nearest - 0.5)) nearest = s.x;
        if (!s.rel_valid || std::fabs(s.x - 0.5) <= 1e-3) continue;
        max_rel = std::max(max_rel, s.rel_err);
    }
    checks.check("max rel err away from the pole", max_rel <= 1e-12,
                 "max rel = " + format_number(max_rel) + " < 1e-12");

    const double at_pole = eval(a, 0.5);
    checks.check("finite at the pole", std::isfinite(at_pole),
                 "omega(0.5) = " + format_number(at_pole));
    double rel_near = 0.0;
    for (const auto& s : p.samples)
        if (s.x == nearest && s.rel_valid) rel_near = s.rel_err;
    checks.check("rel err next to the pole", rel_near <= 1e-2,
                 "rel err at x = " + format_number(nearest) + " is " +
                     format_number(rel_near));
    return checks.all_pass ? 0 : 1;
}

int demo_delta() {
    CheckList checks;
    DeltaSpec d;
    Approximant a = delta_approximant(d);

    Eigen::VectorXd f = auxiliary_at(a, d.center);
    const double expect = 1.0 / (4.0 * d.half_width);
    checks.check("auxiliary values",
                 f(0) == 0.0 && std::fabs(f(1) - expect) <= 1e-12 * expect &&
                     std::fabs(f(2) + expect) <= 1e-12 * expect,
                 "(0, 1/(4h), -1/(4h))");

    MassCheck mass = check_unit_mass(d, a);
    checks.check("unit mass", std::fabs(mass.error) <= 1e-9,
                 "e_I = " + format_number(mass.error));
    SiftResult s = sift(d, a, Expression::parse("sin(x)"));
    checks.check("sifting integral", std::fabs(s.integral - 0.3271946968) <= 5e-9,
                 "I2 = " + format_number(s.integral));
    checks.check("sifting error", !s.absolute_only && std::fabs(s.error) <= 1e-8,
                 "e2 = " + format_number(s.error));
    return checks.all_pass ? 0 : 1;
}

int demo_oscillator() {
    CheckList checks;
    OscillatorSpec o;
    Trajectory rk4 = solve_rk4(o, 1e-3, o.time.xf);
    std::vector<double> ts;
    ts.reserve(rk4.samples.size());
    for (const auto& s : rk4.samples) ts.push_back(s.t);
    Trajectory ana = solve_analytic(o, ts);

    double max_dx = 0.0;
    for (std::size_t i = 0; i < rk4.samples.size(); ++i)
        max_dx = std::max(max_dx, std::fabs(rk4.samples[i].x - ana.samples[i].x));
    checks.check("integrators agree", max_dx <= 1e-5,
                 "max |dx| = " + format_number(max_dx));

    const double pi = 3.14159265358979323846;
    const double c_on = window_center(rk4, 2.5, 2.5 + 4.0 * pi);
    const double c_off = window_center(rk4, 18.0, 18.0 + 3.0 * pi);
    checks.check("center during forcing", std::fabs(c_on - 1.0) <= 1e-3,
                 "center = " + format_number(c_on));
    checks.check("center after forcing", std::fabs(c_off) <= 1e-3,
                 "center = " + format_number(c_off));
    const double amp = elastic_amplitude(rk4, o, o.t_off + 1e-3);
    checks.check("post-force amplitude", std::fabs(amp - 1.744) <= 0.01,
                 "amplitude = " + format_number(amp));
    return checks.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"analytic approximants to piecewise-continuous functions"};
    app.require_subcommand(1);

    auto* build = app.add_subcommand("build", "assemble an approximant from a spec file");
    std::string in, out;
    build->add_option("--in", in, "spec JSON file")->required();
    build->add_option("--out", out, "artifact JSON file")->required();

    auto* sample = app.add_subcommand("sample", "evaluate on an equispaced grid");
    std::string s_in, s_out;
    double s_from = 0.0, s_to = 1.0;
    long s_points = 1001;
    sample->add_option("--in", s_in, "spec or artifact JSON file")->required();
    sample->add_option("--from", s_from, "grid start")->required();
    sample->add_option("--to", s_to, "grid end")->required();
    sample->add_option("--points", s_points, "number of points, endpoints included")
        ->required();
    sample->add_option("--out", s_out, "output CSV")->required();

    auto* err = app.add_subcommand("error", "error profile against the piecewise input");
    std::string e_in, e_out, e_grid_file;
    long e_grid = 10000;
    double e_radius = 0.0;
    std::vector<double> e_centers;
    err->add_option("--in", e_in, "spec or artifact JSON file")->required();
    err->add_option("--grid", e_grid, "equispaced grid size over the domain");
    err->add_option("--grid-file", e_grid_file, "file with one abscissa per line");
    err->add_option("--exclude-radius", e_radius,
                    "radius around cuts (and --exclude-center points) excluded "
                    "from the relative summary");
    err->add_option("--exclude-center", e_centers,
                    "extra abscissae to exclude alongside the cuts");
    err->add_option("--out", e_out, "output CSV")->required();

    auto* delta = app.add_subcommand("delta", "thin-rect delta surrogate checks");
    DeltaSpec d_defaults;
    double d_b = d_defaults.center, d_h = d_defaults.half_width;
    double d_x0 = -1.0, d_xf = 1.0;
    std::string d_f;
    delta->add_option("--b", d_b, "rect center");
    delta->add_option("--h", d_h, "rect half-width");
    delta->add_option("--x0", d_x0, "domain start");
    delta->add_option("--xf", d_xf, "domain end");
    delta->add_option("--f", d_f, "expression for the sifting integrand");

    auto* osc = app.add_subcommand("oscillator", "forced mass-spring trajectories");
    OscillatorSpec o_spec;
    double o_dt = 1e-3;
    std::string o_method = "both", o_out;
    osc->add_option("--m", o_spec.mass, "mass");
    osc->add_option("--k", o_spec.stiffness, "spring constant");
    osc->add_option("--f0", o_spec.force, "force magnitude");
    osc->add_option("--t1", o_spec.t_on, "force on");
    osc->add_option("--t2", o_spec.t_off, "force off");
    osc->add_option("--t0", o_spec.time.x0, "time domain start");
    osc->add_option("--tf", o_spec.time.xf, "time domain end");
    osc->add_option("--x0", o_spec.x0, "initial position");
    osc->add_option("--v0", o_spec.v0, "initial velocity");
    osc->add_option("--dt", o_dt, "time step");
    osc->add_option("--method", o_method, "rk4 | analytic | both")
        ->check(CLI::IsMember({"rk4", "analytic", "both"}));
    osc->add_option("--out", o_out, "output CSV")->required();

    auto* demo = app.add_subcommand("demo", "run a published configuration end to end");
    std::string demo_name;
    demo->add_option("name", demo_name, "sign | sawtooth | example3 | delta | oscillator")
        ->required()
        ->check(CLI::IsMember({"sign", "sawtooth", "example3", "delta", "oscillator"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (*build) return run_guarded([&] { return cmd_build(in, out); });
    if (*sample)
        return run_guarded([&] { return cmd_sample(s_in, s_from, s_to, s_points, s_out); });
    if (*err)
        return run_guarded(
            [&] { return cmd_error(e_in, e_grid, e_grid_file, e_radius, e_centers, e_out); });
    if (*delta) return run_guarded([&] { return cmd_delta(d_b, d_h, d_x0, d_xf, d_f); });
    if (*osc) return run_guarded([&] { return cmd_oscillator(o_spec, o_dt, o_method, o_out); });
    if (*demo)
        return run_guarded([&] {
            if (demo_name == "sign") return demo_sign();
            if (demo_name == "sawtooth") return demo_sawtooth();
            if (demo_name == "example3") return demo_example3();
            if (demo_name == "delta") return demo_delta();
            return demo_oscillator();
        });
    return 0;
}
