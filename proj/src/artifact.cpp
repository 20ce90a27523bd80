#include <cpkit/artifact.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cpkit {

using nlohmann::json;

namespace {

json encode_real(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

json encode_optional(const std::optional<double>& v) {
  return v ? encode_real(*v) : json(nullptr);
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::ArtifactParseError, what);
}

const json& field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) parse_fail(std::string("missing field '") + name + "'");
  return *it;
}

double decode_real(const json& v, const char* name) {
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    parse_fail(std::string("field '") + name + "' has unrecognised string '" + s + "'");
  }
  if (!v.is_number()) parse_fail(std::string("field '") + name + "' is not a number");
  return v.get<double>();
}

std::optional<double> decode_optional(const json& v, const char* name) {
  if (v.is_null()) return std::nullopt;
  return decode_real(v, name);
}

std::int64_t decode_int(const json& v, const char* name) {
  if (!v.is_number_integer()) parse_fail(std::string("field '") + name + "' is not an integer");
  return v.get<std::int64_t>();
}

bool decode_bool(const json& v, const char* name) {
  if (!v.is_boolean()) parse_fail(std::string("field '") + name + "' is not a boolean");
  return v.get<bool>();
}

json base_document(std::string_view method, double alpha, std::int64_t n_cal, bool insufficient,
                   const std::string& created_at) {
  json doc;
  doc["schema_version"] = kArtifactSchemaVersion;
  doc["method"] = std::string(method);
  doc["alpha"] = alpha;
  doc["n_cal"] = n_cal;
  doc["insufficient"] = insufficient;
  doc["created_at"] = created_at;
  return doc;
}

json encode(const CalibratedClassifier& m) {
  json doc = base_document(to_string(m.method), m.alpha, m.n_cal, m.insufficient, m.created_at);
  doc["q_hat"] = encode_optional(m.q_hat);
  doc["p_threshold"] = encode_optional(m.p_threshold);
  doc["class_names"] = m.class_names;
  doc["quantile_lo_level"] = nullptr;
  doc["quantile_hi_level"] = nullptr;
  if (m.method == ClassifierMethod::mondrian) {
    json per_class = json::object();
    for (std::size_t c = 0; c < m.per_class.size(); ++c) {
      const auto& e = m.per_class[c];
      per_class[m.class_names.at(c)] = {{"n", e.n},
                                        {"q_hat", encode_real(e.q_hat)},
                                        {"p_threshold", encode_real(e.p_threshold)},
                                        {"insufficient", e.insufficient}};
    }
    doc["per_class"] = std::move(per_class);
  } else {
    doc["per_class"] = nullptr;
  }
  return doc;
}

json encode(const CalibratedRegressor& m) {
  json doc = base_document(to_string(m.method), m.alpha, m.n_cal, m.insufficient, m.created_at);
  doc["q_hat"] = encode_real(m.q_hat);
  doc["p_threshold"] = nullptr;
  doc["class_names"] = json::array();
  doc["quantile_lo_level"] = encode_optional(m.quantile_lo_level);
  doc["quantile_hi_level"] = encode_optional(m.quantile_hi_level);
  doc["per_class"] = nullptr;
  return doc;
}

CalibratedClassifier decode_classifier(const json& doc, ClassifierMethod method) {
  CalibratedClassifier m;
  m.method = method;
  m.alpha = decode_real(field(doc, "alpha"), "alpha");
  m.n_cal = decode_int(field(doc, "n_cal"), "n_cal");
  m.q_hat = decode_optional(field(doc, "q_hat"), "q_hat");
  m.p_threshold = decode_optional(field(doc, "p_threshold"), "p_threshold");
  m.insufficient = decode_bool(field(doc, "insufficient"), "insufficient");
  m.created_at = field(doc, "created_at").get<std::string>();
  const auto& names = field(doc, "class_names");
  if (!names.is_array() || names.empty()) parse_fail("class_names must be a non-empty array");
  for (const auto& n : names) m.class_names.push_back(n.get<std::string>());
  if (std::set<std::string>(m.class_names.begin(), m.class_names.end()).size() !=
      m.class_names.size()) {
    parse_fail("class_names contains duplicates");
  }

  const auto& per_class = field(doc, "per_class");
  if (method == ClassifierMethod::mondrian) {
    if (!per_class.is_object()) parse_fail("mondrian artifact requires a per_class object");
    for (const auto& name : m.class_names) {
      auto it = per_class.find(name);
      if (it == per_class.end()) parse_fail("per_class has no entry for class '" + name + "'");
      ClassCalibration e;
      e.n = decode_int(field(*it, "n"), "per_class.n");
      e.q_hat = decode_real(field(*it, "q_hat"), "per_class.q_hat");
      e.p_threshold = decode_real(field(*it, "p_threshold"), "per_class.p_threshold");
      e.insufficient = decode_bool(field(*it, "insufficient"), "per_class.insufficient");
      m.per_class.push_back(e);
    }
  } else {
    if (!per_class.is_null()) parse_fail("per_class must be null for lac artifacts");
    if (!m.q_hat || !m.p_threshold) parse_fail("lac artifact requires q_hat and p_threshold");
  }
  return m;
}

CalibratedRegressor decode_regressor(const json& doc, RegressorMethod method) {
  CalibratedRegressor m;
  m.method = method;
  m.alpha = decode_real(field(doc, "alpha"), "alpha");
  m.n_cal = decode_int(field(doc, "n_cal"), "n_cal");
  m.q_hat = decode_real(field(doc, "q_hat"), "q_hat");
  m.insufficient = decode_bool(field(doc, "insufficient"), "insufficient");
  m.created_at = field(doc, "created_at").get<std::string>();
  m.quantile_lo_level = decode_optional(field(doc, "quantile_lo_level"), "quantile_lo_level");
  m.quantile_hi_level = decode_optional(field(doc, "quantile_hi_level"), "quantile_hi_level");
  if (method == RegressorMethod::cqr && (!m.quantile_lo_level || !m.quantile_hi_level)) {
    parse_fail("cqr artifact requires quantile levels");
  }
  return m;
}

}  // namespace

std::string encode_artifact(const ModelArtifact& model) {
  const json doc = std::visit([](const auto& m) { return encode(m); }, model);
  return doc.dump(2) + "\n";
}

ModelArtifact decode_artifact(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("artifact must be a JSON object");
  try {
    const auto version = decode_int(field(doc, "schema_version"), "schema_version");
    if (version != kArtifactSchemaVersion) {
      parse_fail("unsupported schema_version " + std::to_string(version));
    }
    const auto method = field(doc, "method").get<std::string>();
    if (method == "lac") return decode_classifier(doc, ClassifierMethod::lac);
    if (method == "mondrian") return decode_classifier(doc, ClassifierMethod::mondrian);
    if (method == "abs_residual") return decode_regressor(doc, RegressorMethod::abs_residual);
    if (method == "cqr") return decode_regressor(doc, RegressorMethod::cqr);
    parse_fail("unknown method '" + method + "'");
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed artifact: ") + e.what());
  }
}

void save_artifact(const ModelArtifact& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << encode_artifact(model);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

ModelArtifact load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return decode_artifact(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

}  // namespace cpkit
