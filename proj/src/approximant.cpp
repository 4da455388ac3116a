#include "pwsmooth/approximant.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pwsmooth/errors.hpp"

namespace pwsmooth {

Eigen::VectorXd interval_weights(const Approximant& a, double x) {
    const int size = a.spec.interval_count();
    Eigen::VectorXd chi(size);
    chi(0) = 1.0;
    for (int j = 1; j < size; ++j)
        chi(j) = switch_value(a.connectors[static_cast<std::size_t>(j - 1)], x);
    return a.inverse.transpose() * chi;
}

Eigen::VectorXd partition_values(const Approximant& a, double x) {
    const int size = a.spec.interval_count();
    Eigen::VectorXd psi(size);
    for (int n = 0; n < size; ++n)
        psi(n) = a.spec.spec.partitions[static_cast<std::size_t>(n)](x);
    return psi;
}

Eigen::VectorXd auxiliary_at(const Approximant& a, double x) {
    return a.inverse * partition_values(a, x);
}

double eval(const Approximant& a, double x) {
    const Eigen::VectorXd c = interval_weights(a, x);
    double sum = 0.0;
    for (int n = 0; n < c.size(); ++n) {
        if (c(n) == 0.0) continue; // inactive partition: never evaluated
        const double psi = a.spec.spec.partitions[static_cast<std::size_t>(n)](x);
        if (!std::isfinite(psi)) {
            std::ostringstream os;
            os << "partition " << n << " is " << psi << " at x = " << x
               << " with weight " << c(n);
            throw NonFiniteResult(x, n, c(n), os.str());
        }
        sum += c(n) * psi;
    }
    return sum;
}

BatchResult eval_batch(const Approximant& a, std::span<const double> xs) {
    BatchResult out;
    out.values.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        try {
            out.values.push_back(eval(a, xs[i]));
        } catch (const Error& e) {
            out.values.push_back(std::numeric_limits<double>::quiet_NaN());
            out.issues.push_back({i, xs[i], e.what()});
        }
    }
    return out;
}

Approximant scale(const Approximant& a, double k) {
    if (!(std::isfinite(k) && k > 0.0))
        throw NonPositiveScale("scale factor must be finite and positive");
    if (k == 1.0) return a;

    PiecewiseSpec spec;
    spec.domain = {a.spec.spec.domain.x0 * k, a.spec.spec.domain.xf * k};
    for (double cut : a.spec.spec.cuts) spec.cuts.push_back(cut * k);
    for (const Expression& psi : a.spec.spec.partitions)
        spec.partitions.push_back(psi.with_scaled_variable(k));
    spec.connector = a.spec.spec.connector;
    spec.connector.sigma *= k; // sigma carries the units of x

    Approximant out;
    out.spec = validate(std::move(spec));
    for (double cut : out.spec.spec.cuts)
        out.connectors.push_back(Connector{out.spec.spec.domain, cut, out.spec.spec.connector});
    out.switches = a.switches; // the pattern depends only on interval ordering
    out.inverse = a.inverse;
    return out;
}

ErrorProfile error_profile(const Approximant& a, std::span<const double> grid,
                           double rel_floor) {
    ErrorProfile out;
    out.samples.reserve(grid.size());
    const auto& cuts = a.spec.spec.cuts;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (double x : grid) {
        ErrorSample s{x, nan, nan, nan, nan, false, false, nan};
        s.at_cut = std::binary_search(cuts.begin(), cuts.end(), x);

        bool omega_ok = true;
        try {
            s.omega = eval(a, x);
        } catch (const Error&) {
            omega_ok = false;
        }

        const int n = a.spec.interval_of(x);
        if (s.at_cut) {
            // n is the interval right of the cut; report both lateral values
            s.psi = a.spec.spec.partitions[static_cast<std::size_t>(n - 1)](x);
            s.psi_other = a.spec.spec.partitions[static_cast<std::size_t>(n)](x);
        } else {
            s.psi = a.spec.spec.partitions[static_cast<std::size_t>(n)](x);
        }

        if (omega_ok && !s.at_cut && std::isfinite(s.psi)) {
            s.abs_err = std::fabs(s.omega - s.psi);
            if (std::fabs(s.psi) > rel_floor) {
                s.rel_err = s.abs_err / std::fabs(s.psi);
                s.rel_valid = true;
            }
            if (s.abs_err >= out.max_abs) {
                out.max_abs = s.abs_err;
                out.max_abs_x = x;
            }
            if (s.rel_valid && s.rel_err >= out.max_rel) {
                out.max_rel = s.rel_err;
                out.max_rel_x = x;
            }
        }
        out.samples.push_back(s);
    }
    return out;
}

namespace {

constexpr int kSchemaVersion = 1;

void check_keys(const nlohmann::json& obj, const char* context,
                std::initializer_list<const char*> keys) {
    if (!obj.is_object())
        throw DocumentError(std::string(context) + " must be a JSON object");
    for (const char* key : keys)
        if (!obj.contains(key))
            throw DocumentError(std::string(context) + " is missing key '" + key + "'");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(keys.begin(), keys.end(),
                         [&](const char* k) { return key == k; }) == keys.end())
            throw DocumentError(std::string(context) + " has unknown key '" + key + "'");
    }
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, int size,
                                 const char* name) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != size)
        throw CorruptMatrix(std::string(name) + " must have " + std::to_string(size) +
                            " rows");
    Eigen::MatrixXd m(size, size);
    for (int i = 0; i < size; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != size)
            throw CorruptMatrix(std::string(name) + " row " + std::to_string(i) +
                                " must have " + std::to_string(size) + " entries");
        for (int j = 0; j < size; ++j)
            m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
    return m;
}

} // namespace

nlohmann::json save(const Approximant& a) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["domain"] = {{"x0", a.spec.spec.domain.x0}, {"xf", a.spec.spec.domain.xf}};
    doc["cuts"] = a.spec.spec.cuts;
    nlohmann::json partitions = nlohmann::json::array();
    for (const Expression& psi : a.spec.spec.partitions) partitions.push_back(psi.str());
    doc["partitions"] = std::move(partitions);
    doc["connector"] = {
        {"kind", a.spec.spec.connector.kind == ConnectorKind::raw ? "raw" : "regularized"},
        {"sigma", a.spec.spec.connector.sigma},
        {"endpoint_exponent", a.spec.spec.connector.endpoint_exponent},
    };
    doc["s_matrix"] = matrix_to_json(a.switches.snapped);
    doc["s_inverse"] = matrix_to_json(a.inverse);
    return doc;
}

Approximant load(const nlohmann::json& doc) {
    check_keys(doc, "artifact",
               {"schema_version", "domain", "cuts", "partitions", "connector",
                "s_matrix", "s_inverse"});
    if (!doc["schema_version"].is_number_integer() ||
        doc["schema_version"].get<int>() != kSchemaVersion)
        throw SchemaVersionMismatch("artifact schema_version must be " +
                                    std::to_string(kSchemaVersion));

    check_keys(doc["domain"], "domain", {"x0", "xf"});
    check_keys(doc["connector"], "connector", {"kind", "sigma", "endpoint_exponent"});

    PiecewiseSpec spec;
    spec.domain.x0 = doc["domain"]["x0"].get<double>();
    spec.domain.xf = doc["domain"]["xf"].get<double>();
    spec.cuts = doc["cuts"].get<std::vector<double>>();
    for (const auto& text : doc["partitions"])
        spec.partitions.push_back(Expression::parse(text.get<std::string>()));
    const std::string kind = doc["connector"]["kind"].get<std::string>();
    if (kind == "raw")
        spec.connector.kind = ConnectorKind::raw;
    else if (kind == "regularized")
        spec.connector.kind = ConnectorKind::regularized;
    else
        throw DocumentError("connector kind must be 'raw' or 'regularized'");
    spec.connector.sigma = doc["connector"]["sigma"].get<double>();
    spec.connector.endpoint_exponent = doc["connector"]["endpoint_exponent"].get<int>();

    Approximant out;
    out.spec = validate(std::move(spec));
    for (double cut : out.spec.spec.cuts)
        out.connectors.push_back(Connector{out.spec.spec.domain, cut, out.spec.spec.connector});

    const int size = out.spec.interval_count();
    out.switches.snapped = matrix_from_json(doc["s_matrix"], size, "s_matrix");
    out.switches.measured = out.switches.snapped;
    out.inverse = matrix_from_json(doc["s_inverse"], size, "s_inverse");

    // Re-validate as if freshly assembled: sign pattern and inverse residual.
    for (int n = 0; n < size; ++n) {
        for (int j = 0; j < size; ++j) {
            const double expected =
                j == 0 ? 1.0
                       : (out.spec.midpoints[static_cast<std::size_t>(n)] >
                                  out.spec.spec.cuts[static_cast<std::size_t>(j - 1)]
                              ? 1.0
                              : -1.0);
            if (out.switches.snapped(n, j) != expected)
                throw CorruptMatrix("s_matrix entry (" + std::to_string(n) + ", " +
                                    std::to_string(j) + ") does not match the cut layout");
        }
    }
    const double residual = (out.switches.snapped * out.inverse -
                             Eigen::MatrixXd::Identity(size, size))
                                .cwiseAbs()
                                .maxCoeff();
    if (!(residual <= 1e-13))
        throw CorruptMatrix("s_inverse residual " + std::to_string(residual) +
                            " exceeds 1e-13");
    return out;
}

void save_file(const Approximant& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << save(a).dump(2) << '\n';
    if (!out) throw IoError("failed while writing '" + path + "'");
}

Approximant load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DocumentError("cannot parse '" + path + "': " + e.what());
    }
    return load(doc);
}

} // namespace pwsmooth
