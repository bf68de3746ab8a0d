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
/// \file csv.hpp
///
/// Result tables: `# key = value` metadata lines, one header row, then data
/// with 17 significant digits so every double round-trips.
///
#ifndef FASDEP_CSV_HPP
#define FASDEP_CSV_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fasdep/errors.hpp"

namespace fasdep::csv {

inline std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Compact form for labels and messages.
inline std::string format_short(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Table
{
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_meta(const std::string &key, const std::string &value) { meta.emplace_back(key, value); }
    void add_meta(const std::string &key, double value) { meta.emplace_back(key, format_double(value)); }

    void add_row(std::vector<double> row)
    {
        if (row.size() != columns.size())
            throw DomainError("csv: row has " + std::to_string(row.size()) + " values for " +
                              std::to_string(columns.size()) + " columns");
        rows.push_back(std::move(row));
    }

    std::size_t column(const std::string &name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name)
                return i;
        throw DomainError("csv: no column '" + name + "'");
    }

    std::vector<double> column_values(const std::string &name) const
    {
        const auto c = column(name);
        std::vector<double> out;
        for (const auto &r : rows)
            out.push_back(r[c]);
        return out;
    }

    std::string meta_value(const std::string &key) const
    {
        for (const auto &[k, v] : meta)
            if (k == key)
                return v;
        throw DomainError("csv: no metadata '" + key + "'");
    }
};

inline void write(std::ostream &os, const Table &t)
{
    for (const auto &[k, v] : t.meta)
        os << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto &r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << format_double(r[i]);
        os << '\n';
    }
}

inline std::string to_string(const Table &t)
{
    std::ostringstream os;
    write(os, t);
    return os.str();
}

inline Table read(std::istream &is)
{
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (!header && line.rfind("# ", 0) == 0) {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos)
                throw DomainError("csv: malformed metadata line '" + line + "'");
            t.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (!header) {
            t.columns = cells;
            header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto &c : cells) {
            // strtod, unlike stod, accepts subnormals
            char *end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size())
                throw DomainError("csv: non-numeric cell '" + c + "'");
            row.push_back(v);
        }
        t.add_row(std::move(row));
    }
    return t;
}

} // namespace fasdep::csv

#endif // FASDEP_CSV_HPP
