#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "tperm/approximator.hpp"
#include "tperm/coeff_series.hpp"
#include "tperm/permanent.hpp"
#include "tperm/symmetric.hpp"
#include "tperm/tensor.hpp"
#include "tperm/verify.hpp"

namespace tperm {

using Json = nlohmann::ordered_json;

/// {"order": d, "dim": n, "entries": [[re, im], ...]} in canonical layout.
Json tensor_to_json(const Tensor& t);
/// Throws kParse on a malformed document, plus the Tensor::make errors.
Tensor tensor_from_json(const Json& j);

Tensor read_tensor(std::istream& in);
Tensor read_tensor_file(const std::string& path);

Json complex_to_json(Complex z);  // [re, im]
/// Accepts [re, im] or a bare number.
Complex complex_from_json(const Json& j);

/// {"value": [re, im], "log_magnitude": x or null for zero, "argument": a}
Json permanent_to_json(const PermanentValue& p);
Json series_to_json(const CoefficientSeries& s);
Json approx_to_json(const ApproxResult& r);
/// Omits "seconds" when the report carries no timing.
Json report_to_json(const ExperimentReport& r);

/// Serialized text as written by the CLI: two-space indent, trailing newline.
std::string dump(const Json& j);

/// Writes `text` to `path`, throwing kIo on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tperm
