#pragma once

#include <vector>

#include "pwsmooth/expr.hpp"

namespace pwsmooth {

struct DomainInterval {
    double x0 = 0.0;
    double xf = 1.0;
    double length() const { return xf - x0; }
};

enum class ConnectorKind { raw, regularized };

struct ConnectorParams {
    ConnectorKind kind = ConnectorKind::regularized;
    double sigma = 1e-6;       // width parameter, in the units of x; regularized only
    int endpoint_exponent = 2; // exponent of the endpoint factors in the raw switch
};

// The problem statement: a piecewise-continuous function given as one
// expression per sub-interval between consecutive cut abscissae.
struct PiecewiseSpec {
    DomainInterval domain;
    std::vector<double> cuts;          // strictly increasing, strictly inside the domain
    std::vector<Expression> partitions; // cuts.size() + 1 entries
    ConnectorParams connector;
};

// A spec that passed validation, annotated with the quantities every later
// stage needs. Immutable by convention; safe to share across threads.
struct ValidatedSpec {
    PiecewiseSpec spec;
    double length = 0.0;
    std::vector<double> edges;     // x0, cuts..., xf
    std::vector<double> midpoints; // one per sub-interval

    int interval_count() const { return static_cast<int>(spec.partitions.size()); }

    // Index of the sub-interval containing x; a cut belongs to the interval on
    // its right, matching the convention used by the error profile.
    int interval_of(double x) const;
};

// Checks every invariant and returns the annotated spec, or throws a
// ValidationError carrying all violations at once.
ValidatedSpec validate(PiecewiseSpec spec);

} // namespace pwsmooth
