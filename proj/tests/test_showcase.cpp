#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pwsmooth/errors.hpp"
#include "pwsmooth/showcase.hpp"

using namespace pwsmooth;

namespace {

std::vector<double> sample_times(const Trajectory& traj) {
    std::vector<double> ts;
    ts.reserve(traj.samples.size());
    for (const auto& s : traj.samples) ts.push_back(s.t);
    return ts;
}

double max_dx(const Trajectory& a, const Trajectory& b, std::size_t stride_a = 1) {
    double m = 0.0;
    for (std::size_t i = 0; i * stride_a < a.samples.size() && i < b.samples.size(); ++i)
        m = std::max(m, std::fabs(a.samples[i * stride_a].x - b.samples[i].x));
    return m;
}

} // namespace

TEST_CASE("delta approximant: auxiliary values") {
    DeltaSpec d; // published defaults: center 1/3, half-width 1e-5
    Approximant a = delta_approximant(d);

    Eigen::VectorXd f = auxiliary_at(a, d.center);
    const double expect = 1.0 / (4.0 * d.half_width); // 25000 for h = 1e-5
    CHECK(f(0) == 0.0);
    CHECK(std::fabs(f(1) - expect) <= 1e-12 * expect);
    CHECK(std::fabs(f(2) + expect) <= 1e-12 * expect);
    CHECK(f(1) == -f(2)); // symmetric rect

    // the first auxiliary coefficient vanishes for any half-width
    for (double h : {1e-6, 1e-4, 0.05}) {
        DeltaSpec dd;
        dd.half_width = h;
        Eigen::VectorXd ff = auxiliary_at(delta_approximant(dd), dd.center);
        CHECK(ff(0) == 0.0);
        CHECK(ff(1) == -ff(2));
    }
}

TEST_CASE("delta approximant: unit mass") {
    {
        DeltaSpec d;
        MassCheck m = check_unit_mass(d, delta_approximant(d));
        CHECK(std::fabs(m.error) <= 1e-9);
    }
    {
        DeltaSpec d;
        d.half_width = 2e-5; // doubled: the mass is h-independent
        MassCheck m = check_unit_mass(d, delta_approximant(d));
        CHECK(std::fabs(m.error) <= 1e-9);
    }
    {
        DeltaSpec d;
        d.half_width = 0.1; // degenerate wide rect
        MassCheck m = check_unit_mass(d, delta_approximant(d));
        CHECK(std::fabs(m.error) <= 1e-9);
    }
}

TEST_CASE("delta approximant: sifting") {
    DeltaSpec d;
    Approximant a = delta_approximant(d);
    {
        SiftResult s = sift(d, a, Expression::parse("sin(x)"));
        CHECK(!s.absolute_only);
        CHECK(std::fabs(s.integral - 0.3271946968) <= 5e-11); // published 10 digits
        CHECK(std::fabs(s.error) <= 1e-8);
    }
    {
        SiftResult s = sift(d, a, Expression::parse("1"));
        CHECK(std::fabs(s.integral - 1.0) <= 1e-9); // reduces to the unit mass
    }
    {
        // reference exactly zero: absolute error is reported instead
        SiftResult s = sift(d, a, Expression::parse("x - 1/3"));
        CHECK(s.absolute_only);
        CHECK(std::fabs(s.error) <= 1e-9);
    }
}

TEST_CASE("delta approximant: randomized geometry") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> center(0.1, 0.9);
    std::uniform_real_distribution<double> log_h(-6.0, -4.0);
    Expression sine = Expression::parse("sin(x)");
    for (int i = 0; i < 10; ++i) {
        DeltaSpec d;
        d.center = center(rng);
        d.half_width = std::pow(10.0, log_h(rng));
        Approximant a = delta_approximant(d);
        MassCheck m = check_unit_mass(d, a);
        CHECK(std::fabs(m.error) <= 1e-8);
        SiftResult s = sift(d, a, sine);
        CHECK(std::fabs(s.error) <= 1e-8);
    }
}

TEST_CASE("force approximant") {
    OscillatorSpec o; // published parameters
    Approximant a = force_approximant(o);

    Eigen::VectorXd f = auxiliary_at(a, 10.0);
    CHECK(f(0) == 0.0);
    CHECK(std::fabs(f(1) - 2.0) <= 1e-12);
    CHECK(std::fabs(f(2) + 2.0) <= 1e-12);

    CHECK(std::fabs(eval(a, 10.0) - 4.0) <= 1e-12); // plateau
    CHECK(std::fabs(eval(a, -5.0)) <= 1e-12);       // outside the window

    OscillatorSpec bad = o;
    bad.t_on = bad.t_off; // empty force window
    CHECK_THROWS_AS(force_approximant(bad), ValidationError);
    OscillatorSpec bad2 = o;
    bad2.mass = 0.0;
    CHECK_THROWS_AS(force_approximant(bad2), ValidationError);
}

TEST_CASE("analytic solution: step response during the force window") {
    OscillatorSpec o;
    std::vector<double> ts;
    for (int i = 0; i <= 500; ++i) ts.push_back(2.2 + (16.4 - 2.2) * i / 500.0);
    Trajectory traj = solve_analytic(o, ts);
    const double q = o.natural_frequency();
    for (const auto& s : traj.samples) {
        const double want = 1.0 - std::cos(q * (s.t - o.t_on)); // f0/k = 1
        CHECK(std::fabs(s.x - want) <= 1e-8);
    }
}

TEST_CASE("analytic solution: centers and post-force amplitude") {
    OscillatorSpec o;
    std::vector<double> ts;
    const double dt = 1e-3;
    for (int i = 0; i <= 40000; ++i) ts.push_back(-10.0 + dt * i);
    Trajectory traj = solve_analytic(o, ts);

    const double pi = M_PI;
    CHECK(std::fabs(window_center(traj, 2.5, 2.5 + 4.0 * pi) - 1.0) <= 1e-6);
    CHECK(std::fabs(window_center(traj, 18.0, 18.0 + 3.0 * pi)) <= 1e-3);

    // closed-form oracle at the force cutoff
    const double q = o.natural_frequency();
    const double x2 = 1.0 - std::cos(q * (o.t_off - o.t_on));
    const double v2 = q * std::sin(q * (o.t_off - o.t_on));
    const double oracle = std::sqrt(x2 * x2 + (v2 / q) * (v2 / q));
    const double amp = elastic_amplitude(traj, o, o.t_off + 1e-3);
    CHECK(std::fabs(amp - oracle) <= 1e-4);
    CHECK(std::fabs(amp - 1.744) <= 0.01);
}

TEST_CASE("rk4 agrees with the analytic solution on a shared grid") {
    OscillatorSpec o;
    Trajectory rk4 = solve_rk4(o, 1e-3, o.time.xf);
    Trajectory ana = solve_analytic(o, sample_times(rk4));
    CHECK(max_dx(rk4, ana) <= 1e-5);
}

TEST_CASE("rk4: free oscillator closed form") {
    OscillatorSpec o;
    o.force = 0.0;
    o.x0 = 0.7;
    o.v0 = -0.4;
    Trajectory traj = solve_rk4(o, 1e-3, o.time.xf);
    const double q = o.natural_frequency();
    for (const auto& s : traj.samples) {
        const double want =
            o.x0 * std::cos(q * (s.t - o.time.x0)) + o.v0 / q * std::sin(q * (s.t - o.time.x0));
        CHECK(std::fabs(s.x - want) <= 1e-6);
    }
}

TEST_CASE("rk4: energy is conserved once the force is gone") {
    OscillatorSpec o;
    Trajectory traj = solve_rk4(o, 1e-3, o.time.xf);
    double e0 = -1.0;
    for (const auto& s : traj.samples) {
        if (s.t < o.t_off + 1.0) continue;
        const double e = 0.5 * o.mass * s.v * s.v + 0.5 * o.stiffness * s.x * s.x;
        if (e0 < 0.0)
            e0 = e;
        else
            CHECK(std::fabs(e - e0) <= 1e-6 * e0);
    }
}

TEST_CASE("rk4: halving the step divides the error by about 16") {
    // binary-exact force window edges and binary steps keep every node either
    // exactly on a cut (where the sampled value is the jump midpoint and the
    // local quadrature cancels) or saturated, so the smooth fourth-order term
    // dominates the comparison
    OscillatorSpec o;
    o.t_off = 16.640625;
    const double dt = 0.0009765625; // 2^-10

    Trajectory fine_rk4 = solve_rk4(o, dt / 2.0, o.time.xf);
    Trajectory ana = solve_analytic(o, sample_times(fine_rk4));
    Trajectory coarse_rk4 = solve_rk4(o, dt, o.time.xf);

    const double err_fine = max_dx(fine_rk4, ana);
    double err_coarse = 0.0;
    for (std::size_t i = 0; i < coarse_rk4.samples.size(); ++i)
        err_coarse = std::max(
            err_coarse, std::fabs(coarse_rk4.samples[i].x - ana.samples[2 * i].x));

    const double ratio = err_coarse / err_fine;
    CAPTURE(err_coarse);
    CAPTURE(err_fine);
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("oscillation centers from the rk4 trajectory") {
    OscillatorSpec o;
    Trajectory traj = solve_rk4(o, 1e-3, o.time.xf);
    const double pi = M_PI;
    CHECK(std::fabs(window_center(traj, 2.5, 2.5 + 4.0 * pi) - o.force / o.stiffness) <=
          1e-3);
    CHECK(std::fabs(window_center(traj, 18.0, 18.0 + 3.0 * pi)) <= 1e-3);
}

TEST_CASE("rk4 rejects bad configurations") {
    OscillatorSpec o;
    CHECK_THROWS_AS(solve_rk4(o, -1e-3, o.time.xf), ValidationError);
    CHECK_THROWS_AS(solve_rk4(o, 1e-3, o.time.xf + 1.0), ValidationError);
}
