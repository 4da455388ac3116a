#pragma once

#include "pwsmooth/piecewise.hpp"

namespace pwsmooth {

// A tanh-based switching function centred on one cut abscissa: close to -1
// left of the cut and +1 right of it. All arithmetic happens in the
// normalized coordinate u = (x - x0)/L so that rescaling the whole geometry
// by a positive factor reproduces identical values.
struct Connector {
    DomainInterval domain;
    double cut = 0.0; // must lie strictly inside the domain
    ConnectorParams params;
};

// Raw switch: tanh(1/p(u)) with p(u) = u^e (u - u_cut) (1 - u)^e.
// Saturates to exactly +/-1 once the argument magnitude reaches 20 (tanh(20)
// already rounds to 1 in double precision), returns the limit value +/-1 at
// the domain endpoints where p vanishes, and 0 at the cut itself.
double hard_switch(const Connector& c, double x);

// Sigma-regularized switch:
//   tanh( L^5 (x - cut) / ([(x-x0)(x-cut)(x-xf)]^2 + L^4 sigma^2) )
// finite and continuous everywhere in the closed domain. Same saturation
// convention as the raw switch.
double smooth_switch(const Connector& c, double x);

// Half-width sigma^2 / L of the zone around the cut where the regularized
// switch visibly departs from +/-1. Throws WrongKind for raw connectors.
double transition_half_width(const Connector& c);

// Dispatch on params.kind.
double switch_value(const Connector& c, double x);

} // namespace pwsmooth
