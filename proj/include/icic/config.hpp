/*
   Copyright 2026 The ICIC Lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace icic {

/// Ordered `key = value` entries. Blank lines and lines starting with '#'
/// are ignored; whitespace around keys and values is trimmed. Duplicate keys
/// are an error.
class KeyValueMap {
public:
    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    const std::string& require(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

KeyValueMap parse_key_values(const std::string& text);
KeyValueMap load_key_values(const std::string& path);

/// Strict numeric parsing: the whole string must be consumed.
double parse_double(const std::string& text);
int parse_int(const std::string& text);
std::uint64_t parse_u64(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);  // "a,b,c"

/// 64-bit FNV-1a; stable across platforms, used to tag output with the
/// configuration that produced it.
std::uint64_t fnv1a64(const std::string& text);

} // namespace icic
