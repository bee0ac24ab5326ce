// Copyright 2026 The oqbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oqb/csvio.hpp"

#include <charconv>
#include <cmath>

namespace oqb {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const std::to_chars_result r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()), path_(path) {
    if (!out_) throw ConfigError("cannot open output file " + path);
    write_row(header);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw ConfigError("CSV row width mismatch in " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_.put(',');
        out_ << cells[i];
    }
    out_.put('\n');
    if (!out_) throw ConfigError("write failed on " + path_);
}

void CsvWriter::close() {
    if (out_.is_open()) {
        out_.flush();
        out_.close();
    }
}

}  // namespace oqb
