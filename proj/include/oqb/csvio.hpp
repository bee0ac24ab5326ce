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

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "oqb/errors.hpp"

namespace oqb {

/// Locale-independent shortest round-trip formatting; the reason CSV output
/// is byte-reproducible across machines and worker counts.
std::string format_double(double v);

/// Minimal CSV emitter: fixed header, '\n' line endings, binary stream so
/// the bytes are identical on every platform.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void write_row(const std::vector<std::string>& cells);
    void close();

  private:
    std::ofstream out_;
    std::size_t columns_ = 0;
    std::string path_;
};

}  // namespace oqb
