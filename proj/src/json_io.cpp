#include "tperm/json_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace tperm {

namespace {

Json real_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex{j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorCode::kParse, "expected a complex value [re, im], got " + j.dump());
}

Json tensor_to_json(const Tensor& t) {
  Json entries = Json::array();
  for (const Complex& z : t.entries()) entries.push_back(complex_to_json(z));
  Json j;
  j["order"] = t.order();
  j["dim"] = t.dim();
  j["entries"] = std::move(entries);
  return j;
}

Tensor tensor_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "tensor document must be an object");
  for (const char* key : {"order", "dim", "entries"}) {
    if (!j.contains(key)) {
      throw Error(ErrorCode::kParse, std::string("tensor document lacks \"") + key + "\"");
    }
  }
  if (!j["order"].is_number_integer() || !j["dim"].is_number_integer()) {
    throw Error(ErrorCode::kParse, "\"order\" and \"dim\" must be integers");
  }
  if (!j["entries"].is_array()) throw Error(ErrorCode::kParse, "\"entries\" must be an array");
  std::vector<Complex> values;
  values.reserve(j["entries"].size());
  for (const Json& e : j["entries"]) values.push_back(complex_from_json(e));
  return Tensor::make(j["order"].get<int>(), j["dim"].get<int>(), std::move(values));
}

Tensor read_tensor(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
  return tensor_from_json(j);
}

Tensor read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_tensor(in);
}

Json permanent_to_json(const PermanentValue& p) {
  Json j;
  j["value"] = complex_to_json(p.value);
  j["log_magnitude"] = real_or_null(p.log_magnitude);
  j["argument"] = p.argument;
  return j;
}

Json series_to_json(const CoefficientSeries& s) {
  Json j;
  j["kind"] = series_kind_name(s.kind);
  j["t"] = s.t;
  if (s.order > 0) {
    j["order"] = s.order;
    j["dim"] = s.dim;
  }
  Json c = Json::array();
  for (const Complex& z : s.coefficients) c.push_back(complex_to_json(z));
  j["coefficients"] = std::move(c);
  return j;
}

Json approx_to_json(const ApproxResult& r) {
  Json j;
  j["method"] = approx_method_name(r.method);
  j["estimate"] = permanent_to_json(r.value);
  j["normalized_series"] = complex_to_json(r.normalized_series);
  Json p;
  p["epsilon"] = real_or_null(r.params.epsilon);
  p["t"] = r.params.t;
  p["mu"] = complex_to_json(r.params.mu);
  p["z"] = complex_to_json(r.params.z);
  j["params"] = std::move(p);
  const Admissibility& a = r.params.admissibility;
  Json adm;
  adm["admissible"] = a.admissible;
  adm["log_ratio"] = real_or_null(a.log_ratio);
  adm["mu_bound"] = real_or_null(a.mu_bound);
  adm["z_bound"] = real_or_null(a.z_bound);
  adm["diagnostic"] = a.diagnostic;
  j["admissibility"] = std::move(adm);
  return j;
}

Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["experiment"] = r.experiment;
  Json p;
  p["d"] = r.order;
  p["n"] = r.dims;
  p["kind"] = entry_kind_name(r.kind);
  p["mu"] = complex_to_json(r.mu);
  p["trials"] = r.trials;
  p["seed"] = r.seed;
  j["parameters"] = std::move(p);
  Json rows = Json::array();
  for (const StatRow& row : r.rows) {
    Json x;
    x["name"] = row.name;
    x["empirical"] = real_or_null(row.empirical);
    x["target"] = real_or_null(row.target);
    x["se"] = row.se;
    x["tolerance"] = row.tolerance;
    x["floor"] = row.floor;
    x["check"] = row_check_name(row.check);
    x["pass"] = row.pass;
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  j["all_pass"] = r.all_pass();
  if (r.seconds) j["seconds"] = *r.seconds;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace tperm
