//
// Copyright 2026 The Imageability Authors
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
//

#ifndef IMAGEABILITY_IO_H_
#define IMAGEABILITY_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imageability {

std::string ReadFile(const std::filesystem::path& path);

// Lines without terminators; a trailing "\r" is dropped.
std::vector<std::string> ReadLines(const std::filesystem::path& path);
std::vector<std::string> SplitLines(std::string_view content);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void AtomicWriteFile(const std::filesystem::path& path,
                     std::string_view content);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);
std::string FormatOptional(const std::optional<double>& value);

std::optional<double> ParseDouble(std::string_view text);
std::optional<int64_t> ParseInt(std::string_view text);

}  // namespace imageability

#endif  // IMAGEABILITY_IO_H_
