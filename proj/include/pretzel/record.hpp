#pragma once

// Serialized analysis results: JSON objects (schema in
// docs/analysis_record.schema.json), JSON lines and CSV rows.

#include <pretzel/classifier.hpp>

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pretzel {

struct AnalysisRecord {
  std::string input;
  std::vector<int> normalized;
  std::string kind;
  std::string fibered;  // FiberStatus name
  std::string subcase;
  std::string determinant;  // decimal; arbitrary size
  bool det_square = false;
  std::optional<long> signature;
  std::string donaldson;  // Embeddable | NotEmbeddable | Inconclusive | Skipped | NotApplicable
  std::optional<std::vector<std::vector<int>>> witness;
  std::optional<std::string> family;         // tag, e.g. "F3"
  std::optional<std::string> family_detail;  // e.g. "F3(t=1)"
  std::optional<std::vector<int>> family_params;
  std::vector<std::string> families;  // every match, described
  bool exceptional = false;
  bool detectably_ribbon = false;
  std::string status;  // e.g. "NotSlice(determinant)"
  std::uint64_t nodes = 0;
  std::optional<double> ms;
  // Enumeration only.
  std::optional<std::string> class_key;
  std::optional<bool> fiberable;
  std::optional<std::vector<int>> fibered_order;

  friend bool operator==(const AnalysisRecord&, const AnalysisRecord&) = default;
};

inline std::string donaldson_label(const Verdict& v) {
  if (!v.obstructions) return "NotApplicable";
  if (!v.obstructions->donaldson) return "Skipped";
  return to_string(v.obstructions->donaldson->outcome);
}

inline AnalysisRecord make_record(const std::string& input, const Verdict& v, std::optional<double> ms = {}) {
  AnalysisRecord r;
  r.input = input;
  r.normalized = v.normalized.values();
  r.kind = to_string(v.kind);
  r.fibered = to_string(v.fibered.status);
  r.subcase = to_string(v.fibered.subcase);
  r.donaldson = donaldson_label(v);
  if (v.obstructions) {
    r.determinant = v.obstructions->det_value.str();
    r.det_square = v.obstructions->det_is_square;
    r.signature = v.obstructions->signature;
    if (v.obstructions->donaldson) {
      r.nodes = v.obstructions->donaldson->nodes;
      if (v.obstructions->donaldson->witness) r.witness = v.obstructions->donaldson->witness->rows;
    }
  }
  if (auto f = v.family()) {
    r.family = to_string(f->tag);
    r.family_detail = f->describe();
    r.family_params = f->instantiate().values();
  }
  for (const auto& f : v.families) r.families.push_back(f.describe());
  r.exceptional = v.exceptional;
  r.detectably_ribbon = v.detectably_ribbon;
  r.status = v.status_string();
  r.ms = ms;
  return r;
}

inline AnalysisRecord make_record(const ClassReport& c, std::optional<double> ms = {}) {
  AnalysisRecord r = make_record(ParamList(c.cls.multiset).to_string(), c.verdict, ms);
  r.fibered = to_string(c.fiber.status);
  r.subcase = to_string(c.fiber.subcase);
  r.class_key = c.cls.key();
  r.fiberable = c.fiberable;
  if (c.fibered_order) r.fibered_order = c.fibered_order->values();
  return r;
}

template <typename T>
inline void put_optional(nlohmann::ordered_json& j, const char* key, const std::optional<T>& v) {
  if (v)
    j[key] = *v;
  else
    j[key] = nullptr;
}

inline nlohmann::ordered_json to_json(const AnalysisRecord& r) {
  nlohmann::ordered_json j;
  j["input"] = r.input;
  j["normalized"] = r.normalized;
  j["kind"] = r.kind;
  j["fibered"] = r.fibered;
  j["subcase"] = r.subcase;
  j["determinant"] = r.determinant;
  j["det_square"] = r.det_square;
  put_optional(j, "signature", r.signature);
  j["donaldson"] = r.donaldson;
  put_optional(j, "witness", r.witness);
  put_optional(j, "family", r.family);
  put_optional(j, "family_detail", r.family_detail);
  put_optional(j, "family_params", r.family_params);
  j["families"] = r.families;
  j["exceptional"] = r.exceptional;
  j["detectably_ribbon"] = r.detectably_ribbon;
  j["status"] = r.status;
  j["nodes"] = r.nodes;
  put_optional(j, "ms", r.ms);
  if (r.class_key) {
    j["class_key"] = *r.class_key;
    put_optional(j, "fiberable", r.fiberable);
    put_optional(j, "fibered_order", r.fibered_order);
  }
  return j;
}

template <typename T, typename J>
inline std::optional<T> get_optional(const J& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).template get<T>();
}

// Throws nlohmann::json::exception on a malformed object.
template <typename J>
inline AnalysisRecord record_from_json(const J& j) {
  AnalysisRecord r;
  r.input = j.at("input").template get<std::string>();
  r.normalized = j.at("normalized").template get<std::vector<int>>();
  r.kind = j.at("kind").template get<std::string>();
  r.fibered = j.at("fibered").template get<std::string>();
  r.subcase = j.at("subcase").template get<std::string>();
  r.determinant = j.at("determinant").template get<std::string>();
  r.det_square = j.at("det_square").template get<bool>();
  r.signature = get_optional<long>(j, "signature");
  r.donaldson = j.at("donaldson").template get<std::string>();
  r.witness = get_optional<std::vector<std::vector<int>>>(j, "witness");
  r.family = get_optional<std::string>(j, "family");
  r.family_detail = get_optional<std::string>(j, "family_detail");
  r.family_params = get_optional<std::vector<int>>(j, "family_params");
  r.families = j.at("families").template get<std::vector<std::string>>();
  r.exceptional = j.at("exceptional").template get<bool>();
  r.detectably_ribbon = j.at("detectably_ribbon").template get<bool>();
  r.status = j.at("status").template get<std::string>();
  r.nodes = j.at("nodes").template get<std::uint64_t>();
  r.ms = get_optional<double>(j, "ms");
  r.class_key = get_optional<std::string>(j, "class_key");
  r.fiberable = get_optional<bool>(j, "fiberable");
  r.fibered_order = get_optional<std::vector<int>>(j, "fibered_order");
  return r;
}

inline const char* csv_header() {
  return "class_key,kind,subcase,fibered,det,det_square,sigma,donaldson,family,exceptional,status,nodes,ms";
}

// Fields never contain commas except class_key, which is quoted.
inline std::string to_csv(const AnalysisRecord& r) {
  std::ostringstream os;
  const std::string key = r.class_key ? *r.class_key : r.input;
  os << '"' << key << '"' << ',' << r.kind << ',' << r.subcase << ','
     << ((r.fiberable ? *r.fiberable : r.fibered == "Fibered") ? "true" : "false") << ',' << r.determinant << ','
     << (r.det_square ? "true" : "false") << ',';
  if (r.signature) os << *r.signature;
  os << ',' << r.donaldson << ',' << (r.family ? *r.family : "") << ',' << (r.exceptional ? "true" : "false")
     << ',' << r.status << ',' << r.nodes << ',';
  if (r.ms) os << *r.ms;
  return os.str();
}

inline std::string to_jsonl(const AnalysisRecord& r) { return to_json(r).dump(); }

}  // namespace pretzel
