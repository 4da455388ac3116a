#include "pwsmooth/showcase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pwsmooth/errors.hpp"

namespace pwsmooth {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok)
        throw ValidationError({{ValidationCode::InvalidParameter, message}},
                              "InvalidParameter: " + message);
}

QuadratureConfig with_connector_breakpoints(const Approximant& a,
                                            const QuadratureConfig& cfg) {
    QuadratureConfig out = cfg;
    auto extra = quadrature_breakpoints(a.connectors);
    out.forced_breakpoints.insert(out.forced_breakpoints.end(), extra.begin(),
                                  extra.end());
    return out;
}

} // namespace

double OscillatorSpec::natural_frequency() const { return std::sqrt(stiffness / mass); }

Approximant delta_approximant(const DeltaSpec& d) {
    require(std::isfinite(d.half_width) && d.half_width > 0.0,
            "delta half_width must be positive");
    PiecewiseSpec spec;
    spec.domain = d.domain;
    spec.cuts = {d.center - d.half_width, d.center + d.half_width};
    spec.partitions = {Expression::constant(0.0),
                       Expression::constant(1.0 / (2.0 * d.half_width)),
                       Expression::constant(0.0)};
    spec.connector = d.connector;
    return assemble(validate(std::move(spec)));
}

MassCheck check_unit_mass(const DeltaSpec& d, const Approximant& a,
                          const QuadratureConfig& cfg) {
    const QuadratureConfig local = with_connector_breakpoints(a, cfg);
    double total = 0.0;
    const auto& edges = a.spec.edges;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto piece =
            integrate([&](double x) { return eval(a, x); }, edges[i], edges[i + 1], local);
        total += piece.value;
    }
    (void)d;
    return {total, total - 1.0};
}

SiftResult sift(const DeltaSpec& d, const Approximant& a, const Expression& f,
                const QuadratureConfig& cfg) {
    const QuadratureConfig local = with_connector_breakpoints(a, cfg);
    double total = 0.0;
    const auto& edges = a.spec.edges;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto piece = integrate([&](double x) { return eval(a, x) * f(x); }, edges[i],
                               edges[i + 1], local);
        total += piece.value;
    }
    const double reference = f(d.center);
    if (reference == 0.0) return {total, total, 0.0, true};
    return {total, (total - reference) / reference, reference, false};
}

Approximant force_approximant(const OscillatorSpec& o) {
    require(std::isfinite(o.mass) && o.mass > 0.0, "mass must be positive");
    require(std::isfinite(o.stiffness) && o.stiffness > 0.0,
            "spring constant must be positive");
    require(std::isfinite(o.force), "force magnitude must be finite");
    PiecewiseSpec spec;
    spec.domain = o.time;
    spec.cuts = {o.t_on, o.t_off};
    spec.partitions = {Expression::constant(0.0), Expression::constant(o.force),
                       Expression::constant(0.0)};
    spec.connector = o.connector;
    return assemble(validate(std::move(spec)));
}

Trajectory solve_analytic(const OscillatorSpec& o, std::span<const double> ts,
                          const QuadratureConfig& cfg) {
    const Approximant force = force_approximant(o);
    const QuadratureConfig local = with_connector_breakpoints(force, cfg);
    const double q = o.natural_frequency();
    const double c1 = o.x0;
    const double c2 = o.v0 / q;

    Trajectory traj;
    traj.integrator = "variation-of-parameters";
    traj.samples.reserve(ts.size());

    // Running integrals of force(t') cos(q t') and force(t') sin(q t') from t0.
    double ic = 0.0, is = 0.0;
    double prev = o.time.x0;
    for (double t : ts) {
        require(t >= o.time.x0 && t <= o.time.xf, "grid time outside the time domain");
        require(t >= prev || traj.samples.empty(), "grid times must be increasing");
        if (t > prev) {
            ic += integrate([&](double u) { return eval(force, u) * std::cos(q * u); },
                            prev, t, local)
                      .value;
            is += integrate([&](double u) { return eval(force, u) * std::sin(q * u); },
                            prev, t, local)
                      .value;
            prev = t;
        }
        const double cq = std::cos(q * t), sq = std::sin(q * t);
        const double x = c1 * cq + c2 * sq + (sq * ic - cq * is) / (o.mass * q);
        const double v = -c1 * q * sq + c2 * q * cq + (cq * ic + sq * is) / o.mass;
        traj.samples.push_back({t, x, v});
    }
    return traj;
}

Trajectory solve_rk4(const OscillatorSpec& o, double dt, double t_end) {
    require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
    require(t_end > o.time.x0 && t_end <= o.time.xf,
            "t_end must lie inside the time domain");
    const Approximant force = force_approximant(o);
    const double t0 = o.time.x0, tf = o.time.xf;
    auto accel = [&](double t, double x) {
        const double tt = std::clamp(t, t0, tf); // rounding may step 1 ulp outside
        return (eval(force, tt) - o.stiffness * x) / o.mass;
    };

    Trajectory traj;
    traj.integrator = "rk4";
    traj.dt = dt;
    double x = o.x0, v = o.v0;
    traj.samples.push_back({t0, x, v});

    const double span = t_end - t0;
    const long full_steps = static_cast<long>(span / dt);
    long n = 0;
    double t = t0;
    while (t < t_end) {
        const double h = n < full_steps ? dt : t_end - t;
        if (h <= 0.0) break;
        const double k1x = v, k1v = accel(t, x);
        const double k2x = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x);
        const double k3x = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x);
        const double k4x = v + h * k3v, k4v = accel(t + h, x + h * k3x);
        x += h / 6.0 * (k1x + 2.0 * (k2x + k3x) + k4x);
        v += h / 6.0 * (k1v + 2.0 * (k2v + k3v) + k4v);
        ++n;
        t = n <= full_steps ? t0 + static_cast<double>(n) * dt : t_end;
        if (t > t_end) t = t_end;
        if (!std::isfinite(x) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "state became non-finite at t = " << t;
            throw NonFiniteState(t, os.str());
        }
        traj.samples.push_back({t, x, v});
    }
    return traj;
}

double window_center(const Trajectory& traj, double t_lo, double t_hi) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : traj.samples) {
        if (s.t < t_lo || s.t > t_hi) continue;
        lo = std::min(lo, s.x);
        hi = std::max(hi, s.x);
    }
    return 0.5 * (lo + hi);
}

double elastic_amplitude(const Trajectory& traj, const OscillatorSpec& o, double t) {
    const double q = o.natural_frequency();
    for (const auto& s : traj.samples) {
        if (s.t < t) continue;
        return std::sqrt(s.x * s.x + (s.v / q) * (s.v / q));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace pwsmooth
