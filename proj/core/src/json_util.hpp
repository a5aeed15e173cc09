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

#pragma once

// Internal helpers for reading JSON documents with schema-error reporting.

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bipv/error.hpp"

namespace bipv::detail {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path);

// Writes `text` to `path`, throwing MissingInputError with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

const json& require(const json& obj, std::string_view key, std::string_view where);

double require_number(const json& obj, std::string_view key, std::string_view where);
std::int64_t require_integer(const json& obj, std::string_view key,
                             std::string_view where);
std::string require_string(const json& obj, std::string_view key,
                           std::string_view where);
bool require_bool(const json& obj, std::string_view key, std::string_view where);

std::optional<double> optional_number(const json& obj, std::string_view key,
                                      std::string_view where);

// Keys of `obj` not in `known`, formatted as "<where>: unknown key 'k'".
std::vector<std::string> unknown_keys(const json& obj,
                                      std::initializer_list<std::string_view> known,
                                      std::string_view where);

// Either throws SchemaError (strict) or appends to `warnings`.
void report_unknown_keys(const json& obj,
                         std::initializer_list<std::string_view> known,
                         std::string_view where, bool strict,
                         std::vector<std::string>& warnings);

}  // namespace bipv::detail
