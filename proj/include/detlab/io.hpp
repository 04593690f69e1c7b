#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "contour.hpp"
#include "json.hpp"
#include "symbol.hpp"

#ifndef DETLAB_FIXTURE_DIR
#define DETLAB_FIXTURE_DIR "fixtures"
#endif

namespace detlab {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorCode::InvalidSpec, "complex entries must be [re, im] or a number");
}

inline Poly poly_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::InvalidSpec, std::string(field) + " must be a nonempty array");
  Poly p;
  for (auto& e : j) p.push_back(complex_from_json(e));
  return p;
}

inline SymbolSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) fail(ErrorCode::InvalidSpec, "spec needs a \"kind\" field");
  std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  SymbolSpec s;
  if (kind == "rational") {
    if (!j.contains("numer") || !j.contains("denom")) fail(ErrorCode::InvalidSpec, "rational spec needs numer and denom");
    s = SymbolSpec::rational(poly_from_json(j["numer"], "numer"), poly_from_json(j["denom"], "denom"));
  } else if (kind == "laurent_phase") {
    if (!j.contains("log_coeffs") || !j["log_coeffs"].is_object())
      fail(ErrorCode::InvalidSpec, "laurent_phase spec needs a log_coeffs object");
    std::map<int, cplx> t;
    for (auto& [key, val] : j["log_coeffs"].items()) {
      std::size_t used = 0;
      int k = 0;
      try {
        k = std::stoi(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != key.size()) fail(ErrorCode::InvalidSpec, "log_coeffs keys must be integers");
      t[k] = complex_from_json(val);
    }
    s = SymbolSpec::laurent_phase(std::move(t));
  } else {
    fail(ErrorCode::InvalidSpec, "kind must be rational or laurent_phase");
  }
  validate(s);
  return s;
}

inline SymbolSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("parse error: ") + e.what());
  }
  return spec_from_json(j);
}

inline SymbolSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidSpec, "cannot open spec file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

inline json spec_to_json(const SymbolSpec& s) {
  json j;
  if (s.kind == SymbolKind::laurent_phase) {
    j["kind"] = "laurent_phase";
    json t = json::object();
    for (auto& [k, v] : s.log_coeffs) t[std::to_string(k)] = to_json(v);
    j["log_coeffs"] = t;
    return j;
  }
  if (s.kind == SymbolKind::product) fail(ErrorCode::InvalidSpec, "product symbols have no file format");
  j["kind"] = "rational";
  j["numer"] = json::array();
  j["denom"] = json::array();
  for (auto& c : s.numer) j["numer"].push_back(to_json(c));
  for (auto& c : s.denom) j["denom"].push_back(to_json(c));
  return j;
}

inline json to_json(const Contour& c) {
  json j;
  j["m"] = c.m;
  j["components"] = json::array();
  for (auto& k : c.components)
    j["components"].push_back({{"center", to_json(k.center)}, {"radius", k.radius}, {"orientation", k.orientation}});
  return j;
}

inline std::filesystem::path fixture_dir() {
  if (const char* env = std::getenv("DETLAB_FIXTURES"); env && *env) return env;
  return DETLAB_FIXTURE_DIR;
}

inline SymbolSpec load_fixture(const std::string& name) { return load_spec(fixture_dir() / (name + ".json")); }

// every *.json in the fixture directory, sorted by file name
inline std::vector<std::pair<std::string, std::filesystem::path>> fixture_files() {
  std::vector<std::pair<std::string, std::filesystem::path>> out;
  std::error_code ec;
  for (auto& e : std::filesystem::directory_iterator(fixture_dir(), ec))
    if (e.path().extension() == ".json") out.emplace_back(e.path().stem().string(), e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detlab
