#include "pwsmooth/connector.hpp"

#include <cmath>
#include <sstream>

#include "pwsmooth/errors.hpp"

namespace pwsmooth {

namespace {

// Arguments at least this large make tanh indistinguishable from +/-1 in
// double precision; returning the exact limit keeps downstream cancellations
// exact and avoids overflow in the reciprocal.
constexpr double kSaturationArg = 20.0;

void check_domain(const Connector& c, double x) {
    if (!(x >= c.domain.x0 && x <= c.domain.xf)) {
        std::ostringstream os;
        os << "x = " << x << " outside [" << c.domain.x0 << ", " << c.domain.xf << "]";
        throw DomainViolation(x, os.str());
    }
}

double int_pow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace

double hard_switch(const Connector& c, double x) {
    check_domain(c, x);
    if (x == c.cut) return 0.0;
    const double side = x > c.cut ? 1.0 : -1.0;

    const double length = c.domain.length();
    const double u = (x - c.domain.x0) / length;
    // the cut offset is differenced directly so its sign is always exact
    const double off = (x - c.cut) / length;
    const int e = c.params.endpoint_exponent;
    const double p = int_pow(u, e) * off * int_pow(1.0 - u, e);
    if (p == 0.0) return side; // domain endpoint (or rounding collapse): limit value
    const double arg = 1.0 / p;
    if (std::fabs(arg) >= kSaturationArg) return side;
    return std::tanh(arg);
}

double smooth_switch(const Connector& c, double x) {
    if (c.params.kind != ConnectorKind::regularized)
        throw WrongKind("smooth_switch requires a regularized connector");
    check_domain(c, x);

    const double length = c.domain.length();
    const double u = (x - c.domain.x0) / length;
    const double s = c.params.sigma / length;
    const double num = (x - c.cut) / length; // exact sign, exactly 0 at the cut
    const double prod = u * num * (u - 1.0);
    const double arg = num / (prod * prod + s * s); // denominator >= s^2 > 0
    if (arg >= kSaturationArg) return 1.0;
    if (arg <= -kSaturationArg) return -1.0;
    return std::tanh(arg);
}

double transition_half_width(const Connector& c) {
    if (c.params.kind != ConnectorKind::regularized)
        throw WrongKind("transition width is defined for regularized connectors only");
    return c.params.sigma * c.params.sigma / c.domain.length();
}

double switch_value(const Connector& c, double x) {
    return c.params.kind == ConnectorKind::raw ? hard_switch(c, x) : smooth_switch(c, x);
}

} // namespace pwsmooth
