#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pwsmooth/connector.hpp"
#include "pwsmooth/piecewise.hpp"
#include "pwsmooth/quadrature.hpp"

namespace pwsmooth {

// Average of one switching function over one sub-interval, together with the
// value the saturation analysis predicts for it. The two must agree; a
// mismatch means the quadrature or the connector is defective.
struct SwitchAverage {
    double measured;
    double predicted; // sign(interval midpoint - cut)
};

// Matrix of switch averages: rows are sub-intervals, columns are switches
// (column 0 is the constant term and is identically one). After snapping,
// entry (n, j>=1) is +1 iff interval n lies at or to the right of cut j.
struct SwitchMatrix {
    Eigen::MatrixXd snapped;  // exact +/-1 entries used everywhere downstream
    Eigen::MatrixXd measured; // pre-snap quadrature values, kept for diagnostics
};

// The evaluable result: everything needed to compute the single analytic
// approximant of the piecewise input. Immutable once built.
struct Approximant {
    ValidatedSpec spec;
    std::vector<Connector> connectors; // one per cut
    SwitchMatrix switches;
    Eigen::MatrixXd inverse; // switches.snapped^-1, applied pointwise to the partitions
};

// Breakpoints the adaptive quadrature must honor for these connectors: every
// cut plus a few transition-width multiples around it for regularized kinds.
std::vector<double> quadrature_breakpoints(std::span<const Connector> connectors);

// Column j of the switch matrix for sub-interval n. j = 0 returns 1 exactly
// without integration.
SwitchAverage switch_average(const ValidatedSpec& spec,
                             std::span<const Connector> connectors, int interval,
                             int j, const QuadratureConfig& cfg);

// Assembles all (N+1)^2 averages and snaps them to integers. Throws
// ExactificationFailure when an entry is farther than 1e-6 from +/-1 and
// AssemblyError when a snapped entry contradicts the predicted sign.
SwitchMatrix build_switch_matrix(const ValidatedSpec& spec,
                                 std::span<const Connector> connectors,
                                 const QuadratureConfig& cfg);

// Gaussian elimination with partial pivoting; verifies the residual
// ||S * S^-1 - I||_max <= 1e-13 and throws SingularMatrix otherwise.
Eigen::MatrixXd invert_switch_matrix(const SwitchMatrix& switches);

Approximant assemble(ValidatedSpec spec, const QuadratureConfig& cfg = {});

} // namespace pwsmooth
