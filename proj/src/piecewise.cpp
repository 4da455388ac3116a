#include "pwsmooth/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwsmooth/errors.hpp"

namespace pwsmooth {

const char* to_string(ValidationCode code) {
    switch (code) {
        case ValidationCode::InvalidDomain: return "InvalidDomain";
        case ValidationCode::UnorderedCuts: return "UnorderedCuts";
        case ValidationCode::CutOutsideDomain: return "CutOutsideDomain";
        case ValidationCode::PartitionCountMismatch: return "PartitionCountMismatch";
        case ValidationCode::NonFiniteAtMidpoint: return "NonFiniteAtMidpoint";
        case ValidationCode::NonPositiveSigma: return "NonPositiveSigma";
        case ValidationCode::InvalidExponent: return "InvalidExponent";
        case ValidationCode::InvalidParameter: return "InvalidParameter";
    }
    return "Unknown";
}

int ValidatedSpec::interval_of(double x) const {
    const auto& cuts = spec.cuts;
    auto it = std::upper_bound(cuts.begin(), cuts.end(), x);
    return static_cast<int>(it - cuts.begin());
}

ValidatedSpec validate(PiecewiseSpec spec) {
    std::vector<ValidationIssue> issues;
    auto report = [&](ValidationCode code, const std::string& detail) {
        issues.push_back({code, std::string(to_string(code)) + ": " + detail});
    };

    const double x0 = spec.domain.x0, xf = spec.domain.xf;
    bool domain_ok = std::isfinite(x0) && std::isfinite(xf) && x0 < xf;
    if (!domain_ok) {
        std::ostringstream os;
        os << "domain (" << x0 << ", " << xf << ") must be finite with x0 < xf";
        report(ValidationCode::InvalidDomain, os.str());
    }

    for (std::size_t j = 0; j + 1 < spec.cuts.size(); ++j) {
        if (!(spec.cuts[j] < spec.cuts[j + 1])) {
            std::ostringstream os;
            os << "cut[" << j << "] = " << spec.cuts[j] << " is not below cut[" << j + 1
               << "] = " << spec.cuts[j + 1];
            report(ValidationCode::UnorderedCuts, os.str());
        }
    }
    if (domain_ok) {
        for (std::size_t j = 0; j < spec.cuts.size(); ++j) {
            if (!(x0 < spec.cuts[j] && spec.cuts[j] < xf)) {
                std::ostringstream os;
                os << "cut[" << j << "] = " << spec.cuts[j] << " outside (" << x0 << ", "
                   << xf << ")";
                report(ValidationCode::CutOutsideDomain, os.str());
            }
        }
    }

    if (spec.partitions.size() != spec.cuts.size() + 1) {
        std::ostringstream os;
        os << spec.cuts.size() << " cut(s) require " << spec.cuts.size() + 1
           << " partition(s), got " << spec.partitions.size();
        report(ValidationCode::PartitionCountMismatch, os.str());
    }

    if (spec.connector.kind == ConnectorKind::regularized &&
        !(std::isfinite(spec.connector.sigma) && spec.connector.sigma > 0.0)) {
        std::ostringstream os;
        os << "sigma = " << spec.connector.sigma;
        report(ValidationCode::NonPositiveSigma, os.str());
    }
    if (spec.connector.endpoint_exponent < 1) {
        std::ostringstream os;
        os << "endpoint_exponent = " << spec.connector.endpoint_exponent;
        report(ValidationCode::InvalidExponent, os.str());
    }

    ValidatedSpec out;
    if (issues.empty()) {
        out.edges.push_back(x0);
        out.edges.insert(out.edges.end(), spec.cuts.begin(), spec.cuts.end());
        out.edges.push_back(xf);
        for (std::size_t n = 0; n + 1 < out.edges.size(); ++n)
            out.midpoints.push_back(0.5 * (out.edges[n] + out.edges[n + 1]));

        // Each partition must at least be finite at its own midpoint; poles
        // elsewhere are legal and handled by the evaluator.
        for (std::size_t n = 0; n < spec.partitions.size(); ++n) {
            double v = spec.partitions[n](out.midpoints[n]);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "partition " << n << " evaluates to " << v << " at midpoint "
                   << out.midpoints[n];
                report(ValidationCode::NonFiniteAtMidpoint, os.str());
            }
        }
    }

    if (!issues.empty()) {
        std::string what = "spec validation failed:";
        for (const auto& issue : issues) what += "\n  " + issue.message;
        throw ValidationError(std::move(issues), what);
    }

    out.spec = std::move(spec);
    out.length = xf - x0;
    return out;
}

} // namespace pwsmooth
