#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pwsmooth/assembly.hpp"

namespace pwsmooth {

// Interval weights c(x) = S^-T * (1, switch_1(x), ..., switch_N(x)).
// They form a partition of unity; wherever every switch is saturated the
// vector is exactly the basis vector of the interval containing x.
Eigen::VectorXd interval_weights(const Approximant& a, double x);

// Pointwise values of all partition expressions at x.
Eigen::VectorXd partition_values(const Approximant& a, double x);

// Pointwise auxiliary coefficients F(x) = S^-1 * psi(x).
Eigen::VectorXd auxiliary_at(const Approximant& a, double x);

// Evaluates the approximant as sum_n c_n(x) psi_n(x), skipping every
// partition whose weight is exactly zero. The skip is what keeps poles of
// inactive partitions out of the arithmetic entirely. Throws NonFiniteResult
// when a partition with nonzero weight evaluates to inf or NaN.
double eval(const Approximant& a, double x);

struct BatchIssue {
    std::size_t index;
    double x;
    std::string message;
};

struct BatchResult {
    std::vector<double> values; // NaN where the point failed
    std::vector<BatchIssue> issues;
};

// Elementwise eval; failures are recorded per point, never aborting the batch.
BatchResult eval_batch(const Approximant& a, std::span<const double> xs);

// The same approximant transported to the domain scaled by k > 0: cuts and
// endpoints multiply by k, partition expressions become psi(x/k), sigma
// scales with k (it carries length units). The switch matrix is untouched.
Approximant scale(const Approximant& a, double k);

struct ErrorSample {
    double x;
    double omega;
    double psi;     // reference partition value (left-sided at a cut)
    double abs_err;
    double rel_err;   // valid only when rel_valid
    bool rel_valid;   // |psi| above rel_floor and reference usable
    bool at_cut;      // x equals a cut; reference is double-valued
    double psi_other; // right-sided reference at a cut
};

struct ErrorProfile {
    std::vector<ErrorSample> samples;
    double max_abs = 0.0;
    double max_abs_x = 0.0;
    double max_rel = 0.0;
    double max_rel_x = 0.0;
};

// Per-point errors against the piecewise reference (partition selected by
// interval membership). Points exactly at a cut are flagged and excluded
// from the summaries; points with |psi| <= rel_floor contribute absolute
// error only.
ErrorProfile error_profile(const Approximant& a, std::span<const double> grid,
                           double rel_floor = 1e-12);

// Artifact document round trip. Loading re-validates everything as if the
// approximant had just been assembled and never yields a partial object.
nlohmann::json save(const Approximant& a);
Approximant load(const nlohmann::json& doc);

void save_file(const Approximant& a, const std::string& path);
Approximant load_file(const std::string& path);

} // namespace pwsmooth
