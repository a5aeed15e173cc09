/* Copyright 2026 The bipv-assess Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "json_util.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace bipv::detail {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingInputError(fmt::format("cannot open '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw MissingInputError(fmt::format("cannot write '{}'", path.string()));
  }
  out << text;
  out.flush();
  if (!out) {
    throw MissingInputError(fmt::format("write failed for '{}'", path.string()));
  }
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(fmt::format("{}: malformed JSON: {}", path.string(), e.what()));
  }
}

const json& require(const json& obj, std::string_view key, std::string_view where) {
  if (!obj.is_object()) {
    throw SchemaError(fmt::format("{}: expected an object", where));
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(fmt::format("{}: missing key '{}'", where, key));
  }
  return *it;
}

double require_number(const json& obj, std::string_view key, std::string_view where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) {
    throw SchemaError(fmt::format("{}: '{}' must be a number", where, key));
  }
  return v.get<double>();
}

std::int64_t require_integer(const json& obj, std::string_view key,
                             std::string_view where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw SchemaError(fmt::format("{}: '{}' must be an integer", where, key));
  }
  return v.get<std::int64_t>();
}

std::string require_string(const json& obj, std::string_view key,
                           std::string_view where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) {
    throw SchemaError(fmt::format("{}: '{}' must be a string", where, key));
  }
  return v.get<std::string>();
}

bool require_bool(const json& obj, std::string_view key, std::string_view where) {
  const json& v = require(obj, key, where);
  if (!v.is_boolean()) {
    throw SchemaError(fmt::format("{}: '{}' must be a boolean", where, key));
  }
  return v.get<bool>();
}

std::optional<double> optional_number(const json& obj, std::string_view key,
                                      std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw SchemaError(fmt::format("{}: '{}' must be a number", where, key));
  }
  return it->get<double>();
}

std::vector<std::string> unknown_keys(const json& obj,
                                      std::initializer_list<std::string_view> known,
                                      std::string_view where) {
  std::vector<std::string> out;
  if (!obj.is_object()) return out;
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (std::string_view k : known) {
      if (k == key) {
        found = true;
        break;
      }
    }
    if (!found) out.push_back(fmt::format("{}: unknown key '{}'", where, key));
  }
  return out;
}

void report_unknown_keys(const json& obj,
                         std::initializer_list<std::string_view> known,
                         std::string_view where, bool strict,
                         std::vector<std::string>& warnings) {
  auto unknown = unknown_keys(obj, known, where);
  if (unknown.empty()) return;
  if (strict) throw SchemaError(unknown.front());
  warnings.insert(warnings.end(), unknown.begin(), unknown.end());
}

}  // namespace bipv::detail
