#include "pwsmooth/assembly.hpp"

#include <cmath>
#include <sstream>

#include "pwsmooth/errors.hpp"

namespace pwsmooth {

namespace {

constexpr double kSnapTolerance = 1e-6;
constexpr double kResidualLimit = 1e-13;

} // namespace

std::vector<double> quadrature_breakpoints(std::span<const Connector> connectors) {
    std::vector<double> points;
    for (const Connector& c : connectors) {
        points.push_back(c.cut);
        if (c.params.kind != ConnectorKind::regularized) continue;
        const double w = transition_half_width(c);
        for (double m : {1.0, 10.0, 100.0, 1000.0}) {
            points.push_back(c.cut - m * w);
            points.push_back(c.cut + m * w);
        }
    }
    return points;
}

SwitchAverage switch_average(const ValidatedSpec& spec,
                             std::span<const Connector> connectors, int interval,
                             int j, const QuadratureConfig& cfg) {
    if (j == 0) return {1.0, 1.0};

    const Connector& conn = connectors[static_cast<std::size_t>(j - 1)];
    const double left = spec.edges[static_cast<std::size_t>(interval)];
    const double right = spec.edges[static_cast<std::size_t>(interval) + 1];
    const double predicted = spec.midpoints[static_cast<std::size_t>(interval)] > conn.cut
                                 ? 1.0
                                 : -1.0;

    QuadratureConfig local = cfg;
    auto extra = quadrature_breakpoints(connectors);
    local.forced_breakpoints.insert(local.forced_breakpoints.end(), extra.begin(),
                                    extra.end());
    auto result =
        integrate([&](double x) { return switch_value(conn, x); }, left, right, local);
    if (!result.converged) {
        std::ostringstream os;
        os << "switch average (" << interval << ", " << j
           << ") did not converge; error estimate " << result.error_estimate;
        throw AssemblyError(os.str());
    }
    return {result.value / (right - left), predicted};
}

SwitchMatrix build_switch_matrix(const ValidatedSpec& spec,
                                 std::span<const Connector> connectors,
                                 const QuadratureConfig& cfg) {
    const int size = spec.interval_count();
    SwitchMatrix out;
    out.snapped = Eigen::MatrixXd::Zero(size, size);
    out.measured = Eigen::MatrixXd::Zero(size, size);

    for (int n = 0; n < size; ++n) {
        for (int j = 0; j < size; ++j) {
            const SwitchAverage avg = switch_average(spec, connectors, n, j, cfg);
            out.measured(n, j) = avg.measured;
            const double snapped = std::round(avg.measured);
            if (std::fabs(avg.measured - snapped) > kSnapTolerance ||
                (j > 0 && std::fabs(snapped) != 1.0)) {
                std::ostringstream os;
                os << "switch average (" << n << ", " << j << ") = " << avg.measured
                   << " is not within " << kSnapTolerance << " of +/-1";
                throw ExactificationFailure(os.str());
            }
            if (snapped != avg.predicted) {
                std::ostringstream os;
                os << "switch average (" << n << ", " << j << ") snapped to " << snapped
                   << " but the midpoint analysis predicts " << avg.predicted;
                throw AssemblyError(os.str());
            }
            out.snapped(n, j) = snapped;
        }
    }
    return out;
}

Eigen::MatrixXd invert_switch_matrix(const SwitchMatrix& switches) {
    const auto& s = switches.snapped;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(s);
    Eigen::MatrixXd inverse = lu.inverse();
    const double residual =
        (s * inverse - Eigen::MatrixXd::Identity(s.rows(), s.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (!(residual <= kResidualLimit)) {
        std::ostringstream os;
        os << "inverse residual " << residual << " exceeds " << kResidualLimit;
        throw SingularMatrix(os.str());
    }
    return inverse;
}

Approximant assemble(ValidatedSpec spec, const QuadratureConfig& cfg) {
    Approximant out;
    out.connectors.reserve(spec.spec.cuts.size());
    for (double cut : spec.spec.cuts)
        out.connectors.push_back(Connector{spec.spec.domain, cut, spec.spec.connector});

    out.switches = build_switch_matrix(spec, out.connectors, cfg);
    out.inverse = invert_switch_matrix(out.switches);
    out.spec = std::move(spec);
    return out;
}

} // namespace pwsmooth
