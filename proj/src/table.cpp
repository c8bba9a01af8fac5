// SPDX-License-Identifier: Apache-2.0
//
// holobeam: holographic beamforming models and optimizers for ISAC
// Copyright (C) 2026 The holobeam authors
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

#include "table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "holobeam/error.hpp"

namespace holobeam::detail {

using nlohmann::ordered_json;

void Table::add(std::vector<Cell> row) {
    require(row.size() == columns.size(), "table row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (!std::isfinite(v)) fail(ErrorKind::numeric, "non-finite value in output table");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_field(table.columns[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (const auto* d = std::get_if<double>(&row[c]))
                out += format_number(*d);
            else
                out += csv_field(std::get<std::string>(row[c]));
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& table) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (const auto* d = std::get_if<double>(&row[c])) {
                format_number(*d);
                obj[table.columns[c]] = *d;
            } else {
                obj[table.columns[c]] = std::get<std::string>(row[c]);
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

Table from_json(const std::string& text, const std::vector<std::string>& columns) {
    ordered_json arr;
    try {
        arr = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        fail(ErrorKind::parse, e.what());
    }
    if (!arr.is_array()) fail(ErrorKind::parse, "table JSON must be an array of objects");
    Table t;
    t.columns = columns;
    for (const auto& obj : arr) {
        if (!obj.is_object()) fail(ErrorKind::parse, "table JSON must be an array of objects");
        if (t.columns.empty())
            for (const auto& item : obj.items()) t.columns.push_back(item.key());
        if (obj.size() != t.columns.size()) fail(ErrorKind::parse, "table row width does not match the header");
        std::vector<Cell> row;
        for (const auto& name : t.columns) {
            if (!obj.contains(name)) fail(ErrorKind::parse, "table row is missing column " + name);
            const auto& v = obj.at(name);
            if (v.is_number())
                row.emplace_back(v.get<double>());
            else if (v.is_string())
                row.emplace_back(v.get<std::string>());
            else
                fail(ErrorKind::parse, "table cells must be numbers or strings");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << body;
    out.flush();
    if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

void export_table(const Table& table, Format format, const std::filesystem::path& path) {
    write_text(path, format == Format::csv ? to_csv(table) : to_json(table));
}

}  // namespace holobeam::detail
