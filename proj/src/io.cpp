#include "pwsmooth/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>

#include <nlohmann/json.hpp>

#include "pwsmooth/errors.hpp"

namespace pwsmooth {

std::string format_number(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

void check_keys(const nlohmann::json& obj, const char* context,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
    if (!obj.is_object())
        throw DocumentError(std::string(context) + " must be a JSON object");
    for (const char* key : required)
        if (!obj.contains(key))
            throw DocumentError(std::string(context) + " is missing key '" + key + "'");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        auto match = [&](const char* k) { return key == k; };
        if (std::find_if(required.begin(), required.end(), match) == required.end() &&
            std::find_if(optional.begin(), optional.end(), match) == optional.end())
            throw DocumentError(std::string(context) + " has unknown key '" + key + "'");
    }
}

} // namespace

PiecewiseSpec read_spec(const nlohmann::json& doc) {
    check_keys(doc, "spec", {"domain", "cuts", "partitions"}, {"connector"});
    check_keys(doc["domain"], "domain", {"x0", "xf"});

    PiecewiseSpec spec;
    spec.domain.x0 = doc["domain"]["x0"].get<double>();
    spec.domain.xf = doc["domain"]["xf"].get<double>();
    if (!doc["cuts"].is_array()) throw DocumentError("cuts must be an array");
    spec.cuts = doc["cuts"].get<std::vector<double>>();
    if (!doc["partitions"].is_array())
        throw DocumentError("partitions must be an array of expression strings");
    for (const auto& text : doc["partitions"]) {
        if (!text.is_string())
            throw DocumentError("partitions must be an array of expression strings");
        spec.partitions.push_back(Expression::parse(text.get<std::string>()));
    }

    if (doc.contains("connector")) {
        const auto& conn = doc["connector"];
        check_keys(conn, "connector", {"kind"}, {"sigma", "endpoint_exponent"});
        const std::string kind = conn["kind"].get<std::string>();
        if (kind == "raw")
            spec.connector.kind = ConnectorKind::raw;
        else if (kind == "regularized")
            spec.connector.kind = ConnectorKind::regularized;
        else
            throw DocumentError("connector kind must be 'raw' or 'regularized'");
        if (conn.contains("sigma")) spec.connector.sigma = conn["sigma"].get<double>();
        if (conn.contains("endpoint_exponent"))
            spec.connector.endpoint_exponent = conn["endpoint_exponent"].get<int>();
    }
    return spec;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DocumentError("cannot parse '" + path + "': " + e.what());
    }
    return doc;
}

PiecewiseSpec read_spec_file(const std::string& path) {
    return read_spec(read_json_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace pwsmooth
