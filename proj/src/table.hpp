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

#ifndef HOLOBEAM_SRC_TABLE_HPP
#define HOLOBEAM_SRC_TABLE_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace holobeam::detail {

using Cell = std::variant<double, std::string>;

/// Column-named rows; every row has one cell per column.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

std::string format_number(double v);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);
/// Inverse of to_json; the column order comes from the first object.
Table from_json(const std::string& text, const std::vector<std::string>& columns = {});

enum class Format { csv, json };

/// Throws Error(io) when the file cannot be written.
void export_table(const Table& table, Format format, const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& body);

}  // namespace holobeam::detail

#endif
