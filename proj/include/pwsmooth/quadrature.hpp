#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "pwsmooth/errors.hpp"

namespace pwsmooth {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_depth = 60;
    // Abscissae where the integrand is allowed to be nasty (cuts, edges of
    // switch transition zones). Initial panels are split at each of them.
    std::vector<double> forced_breakpoints;
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true; // false once refinement ran out of depth
};

namespace quad_detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kAbscissae[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
};
constexpr double kKronrodWeights[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278,
};
constexpr double kGaussWeights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694,
};

struct Panel {
    double a, b;
    double value;
    double err;
    int depth;
    bool saturated; // accepted via the all-probes-equal +/-1 short circuit
};

template <class F>
double checked_eval(F& f, double x) {
    double v = f(x);
    if (std::isnan(v) || std::isinf(v)) {
        std::ostringstream os;
        os << "integrand is not finite at x = " << x;
        throw NonFiniteSample(x, os.str());
    }
    return v;
}

template <class F>
void gauss_kronrod(F& f, double a, double b, double& value, double& err) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = checked_eval(f, center);
    double resk = kKronrodWeights[7] * fc;
    double resg = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kAbscissae[i];
        const double fsum = checked_eval(f, center - dx) + checked_eval(f, center + dx);
        resk += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) resg += kGaussWeights[i / 2] * fsum;
    }
    value = resk * half;
    err = std::fabs(resk - resg) * half;
}

// Panels whose end and mid probes all sit at the same exactly saturated
// switch value are constant to working precision; skipping the rule keeps
// the integral of a saturated switch bit-exact and stops pointless splits.
template <class F>
bool saturated_probe(F& f, double a, double b, double& value) {
    const double fa = f(a);
    if (fa != 1.0 && fa != -1.0) return false;
    const double fm = f(0.5 * (a + b));
    if (fm != fa) return false;
    const double fb = f(b);
    if (fb != fa) return false;
    value = (b - a) * fa;
    return true;
}

template <class F>
Panel make_panel(F& f, double a, double b, int depth) {
    Panel p{a, b, 0.0, 0.0, depth, false};
    if (saturated_probe(f, a, b, p.value)) {
        p.saturated = true;
        return p;
    }
    gauss_kronrod(f, a, b, p.value, p.err);
    return p;
}

} // namespace quad_detail

// Adaptive panel integration of f over [a, b]. The worst panel (largest
// embedded error estimate) is bisected until the summed estimate meets
// max(abs_tol, rel_tol * |value|) or max_depth is exhausted, in which case
// the best available estimate is returned flagged non-converged.
template <class F>
IntegrationResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    using quad_detail::Panel;
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0, true};
        throw Error("integrate: lower bound must be below upper bound");
    }

    std::vector<double> edges;
    edges.push_back(a);
    for (double bp : cfg.forced_breakpoints)
        if (bp > a && bp < b) edges.push_back(bp);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<Panel> leaves;
    leaves.reserve(64);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        leaves.push_back(quad_detail::make_panel(f, edges[i], edges[i + 1], 0));

    constexpr std::size_t kMaxLeaves = 100000;
    for (;;) {
        double total = 0.0, total_err = 0.0;
        for (const Panel& p : leaves) {
            total += p.value;
            total_err += p.err;
        }
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
        if (total_err <= tol) return {total, total_err, true};

        // deterministic choice: largest error, leftmost on ties
        int worst = -1;
        for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
            const Panel& p = leaves[i];
            if (p.depth >= cfg.max_depth || p.err == 0.0) continue;
            if (worst < 0 || p.err > leaves[worst].err ||
                (p.err == leaves[worst].err && p.a < leaves[worst].a))
                worst = i;
        }
        if (worst < 0 || leaves.size() >= kMaxLeaves)
            return {total, total_err, false};

        Panel old = leaves[worst];
        const double mid = 0.5 * (old.a + old.b);
        if (!(old.a < mid && mid < old.b)) { // interval no longer splittable
            leaves[worst].depth = cfg.max_depth;
            continue;
        }
        leaves[worst] = quad_detail::make_panel(f, old.a, mid, old.depth + 1);
        leaves.push_back(quad_detail::make_panel(f, mid, old.b, old.depth + 1));
    }
}

} // namespace pwsmooth
