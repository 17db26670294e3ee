#include "ordopt/json_util.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ordopt/error.hpp"

namespace ordopt::json_util {

using nlohmann::json;

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(path + "." + key, "unknown field");
    }
  }
}

const json& required(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ValidationError(path + "." + key, "missing required field");
  return j.at(key);
}

std::string get_string(const json& j, const std::string& path, const std::string& key) {
  const auto& v = required(j, path, key);
  if (!v.is_string()) throw ValidationError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::int64_t get_int(const json& j, const std::string& path, const std::string& key) {
  const auto& v = required(j, path, key);
  if (!v.is_number_integer()) throw ValidationError(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

double get_number(const json& j, const std::string& path, const std::string& key) {
  const auto& v = required(j, path, key);
  if (!v.is_number()) throw ValidationError(path + "." + key, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key) {
  const auto& v = required(j, path, key);
  if (!v.is_boolean()) throw ValidationError(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::vector<std::string> get_strings(const json& j, const std::string& path, const std::string& key) {
  const auto& v = required(j, path, key);
  if (!v.is_array()) throw ValidationError(path + "." + key, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string() || v[i].get<std::string>().empty()) {
      throw ValidationError(path + "." + key + "[" + std::to_string(i) + "]", "expected a non-empty string");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

AttrSet get_attr_set(const json& j, const std::string& path, const std::string& key) {
  auto names = get_strings(j, path, key);
  AttrSet s;
  for (auto& n : names) {
    if (!s.insert(n)) throw ValidationError(path + "." + key, "duplicate attribute '" + n + "'");
  }
  return s;
}

SortOrder get_order(const json& j, const std::string& path, const std::string& key) {
  try {
    return SortOrder(get_strings(j, path, key));
  } catch (const DuplicateAttribute& e) {
    throw ValidationError(path + "." + key, e.what());
  }
}

}  // namespace ordopt::json_util
