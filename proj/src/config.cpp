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

#include "icic/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace icic {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& raw, const char* what)
{
    const std::string text = trim(raw);
    T value{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && text.front() == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw std::invalid_argument(std::string("expected ") + what + ", got '" + raw + "'");
    }
    return value;
}

} // namespace

void KeyValueMap::set(const std::string& key, const std::string& value)
{
    entries_[key] = value;
}

std::optional<std::string> KeyValueMap::get(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const std::string& KeyValueMap::require(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw std::invalid_argument("missing required key '" + key + "'");
    }
    return it->second;
}

KeyValueMap parse_key_values(const std::string& text)
{
    KeyValueMap kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
        }
        if (kv.get(key)) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": duplicate key '" +
                                        key + "'");
        }
        kv.set(key, trim(t.substr(eq + 1)));
    }
    return kv;
}

KeyValueMap load_key_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values(buffer.str());
}

double parse_double(const std::string& text)
{
    return parse_number<double>(text, "a number");
}

int parse_int(const std::string& text)
{
    return parse_number<int>(text, "an integer");
}

std::uint64_t parse_u64(const std::string& text)
{
    return parse_number<std::uint64_t>(text, "an unsigned integer");
}

std::vector<double> parse_double_list(const std::string& text)
{
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        out.push_back(parse_double(item));
    }
    if (out.empty()) {
        throw std::invalid_argument("expected a comma-separated list of numbers");
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace icic
