// Copyright 2026 The icl-enroll Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ICLENROLL_IO_HPP_
#define ICLENROLL_IO_HPP_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace iclenroll {

// Reads a UTF-8 text file line by line, invoking fn(line_number, json) for
// every non-blank line. Line numbers are 1-based. Throws Error(kIo) when the
// file cannot be opened and Error(kSchema) on malformed JSON.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(size_t, const nlohmann::json&)>& fn);

std::vector<std::string> read_lines(const std::filesystem::path& path);

// Writes content to path via a temp file + rename so readers never observe a
// partial file and failures leave no output behind.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

}  // namespace iclenroll

#endif  // ICLENROLL_IO_HPP_
