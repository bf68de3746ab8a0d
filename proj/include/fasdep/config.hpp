// SPDX-License-Identifier: Apache-2.0
//
// fasdep: dependability analysis for fluid antenna receivers
// Copyright (C) 2026 The fasdep authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

///
/// \file config.hpp
///
/// Flat configuration: one `dotted.key = value` per line, `#` starts a
/// comment. Later assignments override earlier ones.
///
#ifndef FASDEP_CONFIG_HPP
#define FASDEP_CONFIG_HPP

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fasdep/errors.hpp"

namespace fasdep::config {

namespace detail {

inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline bool valid_key(const std::string &k)
{
    if (k.empty() || k.front() == '.' || k.back() == '.')
        return false;
    for (char c : k)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.'))
            return false;
    return true;
}

} // namespace detail

class Config
{
public:
    static Config parse(std::istream &in, const std::string &source = "<config>")
    {
        Config c;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = detail::trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            const std::string where = source + ":" + std::to_string(lineno);
            if (eq == std::string::npos)
                throw DomainError(where + ": expected 'key = value'");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (!detail::valid_key(key))
                throw DomainError(where + ": invalid key '" + key + "'");
            if (value.empty())
                throw DomainError(where + ": empty value for '" + key + "'");
            c.values_[key] = value;
        }
        return c;
    }

    static Config load(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw DomainError("cannot open config file '" + path + "'");
        return parse(f, path);
    }

    void set(const std::string &key, const std::string &value)
    {
        if (!detail::valid_key(key))
            throw DomainError("invalid key '" + key + "'");
        values_[key] = value;
    }

    bool has(const std::string &key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string &key, const std::string &fallback) const
    {
        used_.insert(key);
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string &key, double fallback) const
    {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end())
            return fallback;
        return to_double(key, it->second);
    }

    long long get_int(const std::string &key, long long fallback) const
    {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end())
            return fallback;
        long long v = 0;
        const auto &s = it->second;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size())
            throw DomainError(key + ": expected an integer, got '" + s + "'");
        return v;
    }

    bool get_bool(const std::string &key, bool fallback) const
    {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end())
            return fallback;
        if (it->second == "true" || it->second == "1")
            return true;
        if (it->second == "false" || it->second == "0")
            return false;
        throw DomainError(key + ": expected true or false, got '" + it->second + "'");
    }

    /// Comma-separated list of numbers.
    std::vector<double> get_list(const std::string &key, std::vector<double> fallback) const
    {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end())
            return fallback;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(to_double(key, detail::trim(item)));
        if (out.empty())
            throw DomainError(key + ": empty list");
        return out;
    }

    /// Keys that were set but never read; typos surface here.
    std::vector<std::string> unused_keys() const
    {
        std::vector<std::string> out;
        for (const auto &[k, v] : values_)
            if (!used_.count(k))
                out.push_back(k);
        return out;
    }

    const std::map<std::string, std::string> &values() const noexcept { return values_; }

private:
    static double to_double(const std::string &key, const std::string &s)
    {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos == s.size())
                return v;
        } catch (const std::exception &) {
        }
        throw DomainError(key + ": expected a number, got '" + s + "'");
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

} // namespace fasdep::config

#endif // FASDEP_CONFIG_HPP
