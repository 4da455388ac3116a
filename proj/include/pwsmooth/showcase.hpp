#pragma once

#include <span>
#include <string>
#include <vector>

#include "pwsmooth/approximant.hpp"

namespace pwsmooth {

// A thin rect of height 1/(2 half_width): the discontinuous stand-in for a
// Dirac delta. Defaults reproduce the published demonstration; the centre
// 1/3 is the value consistent with the published sifting integral.
struct DeltaSpec {
    double center = 1.0 / 3.0;
    double half_width = 1e-5;
    DomainInterval domain{-1.0, 1.0};
    ConnectorParams connector{ConnectorKind::regularized, 1e-6, 2};
};

// Mass-spring oscillator driven by a constant force over a finite window.
// Defaults are the published configuration. The connector sigma is wider
// than the generic default so that a time node landing within rounding
// distance of a force edge still samples a value indistinguishable from the
// jump midpoint; see force_approximant.
struct OscillatorSpec {
    double mass = 1.0;
    double stiffness = 4.0;
    double force = 4.0;
    double t_on = 2.0;
    double t_off = 16.65;
    DomainInterval time{-10.0, 30.0};
    double x0 = 0.0;
    double v0 = 0.0;
    ConnectorParams connector{ConnectorKind::regularized, 1e-5, 2};

    double natural_frequency() const; // sqrt(stiffness / mass)
};

struct Trajectory {
    struct State {
        double t;
        double x;
        double v;
    };
    std::vector<State> samples; // strictly increasing t
    std::string integrator;
    double dt = 0.0;
};

// Three-partition approximant (0, 1/(2h), 0) with cuts at center -+ h.
Approximant delta_approximant(const DeltaSpec& d);

struct MassCheck {
    double integral; // sum of the three sub-interval integrals of the approximant
    double error;    // integral - 1
};

MassCheck check_unit_mass(const DeltaSpec& d, const Approximant& a,
                          const QuadratureConfig& cfg = {});

struct SiftResult {
    double integral;      // integral of approximant * f, split at the cuts
    double error;         // relative to f(center), absolute when absolute_only
    double reference;     // f(center)
    bool absolute_only;   // f(center) was zero
};

SiftResult sift(const DeltaSpec& d, const Approximant& a, const Expression& f,
                const QuadratureConfig& cfg = {});

// Three-partition approximant (0, force, 0) of the driving force.
Approximant force_approximant(const OscillatorSpec& o);

// Closed-form solution by variation of parameters, with the force integrals
// done by quadrature between consecutive grid times.
Trajectory solve_analytic(const OscillatorSpec& o, std::span<const double> ts,
                          const QuadratureConfig& cfg = {});

// Classical fixed-step 4th-order Runge-Kutta on (x' = v, v' = (force - k x)/m).
Trajectory solve_rk4(const OscillatorSpec& o, double dt, double t_end);

// (max + min)/2 of x over samples with t in [t_lo, t_hi]; use whole periods.
double window_center(const Trajectory& traj, double t_lo, double t_hi);

// sqrt(x^2 + (v/q)^2) at the first sample at or after t.
double elastic_amplitude(const Trajectory& traj, const OscillatorSpec& o, double t);

} // namespace pwsmooth
