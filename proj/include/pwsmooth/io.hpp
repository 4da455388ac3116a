#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pwsmooth/piecewise.hpp"

namespace pwsmooth {

// Shortest decimal form that round-trips the double exactly, capped at 17
// significant digits; locale-independent.
std::string format_number(double v);

// Problem document: {domain:{x0,xf}, cuts:[...], partitions:["expr",...],
// connector:{kind,sigma,endpoint_exponent}}. The connector block and its
// sigma / endpoint_exponent entries may be omitted; unknown keys are
// rejected at every level.
PiecewiseSpec read_spec(const nlohmann::json& doc);
PiecewiseSpec read_spec_file(const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace pwsmooth
