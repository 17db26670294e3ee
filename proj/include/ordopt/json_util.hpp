#pragma once

// Strict JSON field readers shared by the catalog, query and config loaders.
// Every failure is a ValidationError carrying the JSON path.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ordopt/order.hpp"

namespace ordopt::json_util {

/// Throws ParseError on I/O failure or malformed JSON.
nlohmann::json read_file(const std::filesystem::path& path);
/// Throws ParseError on malformed JSON.
nlohmann::json parse_text(std::string_view text);

void require_object(const nlohmann::json& j, const std::string& path);
void reject_unknown(const nlohmann::json& j, const std::string& path, std::initializer_list<std::string_view> allowed);

const nlohmann::json& required(const nlohmann::json& j, const std::string& path, const std::string& key);
std::string get_string(const nlohmann::json& j, const std::string& path, const std::string& key);
std::int64_t get_int(const nlohmann::json& j, const std::string& path, const std::string& key);
double get_number(const nlohmann::json& j, const std::string& path, const std::string& key);
bool get_bool(const nlohmann::json& j, const std::string& path, const std::string& key);
std::vector<std::string> get_strings(const nlohmann::json& j, const std::string& path, const std::string& key);
AttrSet get_attr_set(const nlohmann::json& j, const std::string& path, const std::string& key);
SortOrder get_order(const nlohmann::json& j, const std::string& path, const std::string& key);

}  // namespace ordopt::json_util
