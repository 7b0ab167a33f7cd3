// Copyright 2026 The kvpoison Authors
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

#ifndef KVPOISON_SRC_CSV_H_
#define KVPOISON_SRC_CSV_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace kvpoison::internal {

// Splits one CSV record. Fields may be double-quoted; a doubled quote inside
// a quoted field is a literal quote. Embedded newlines are not supported.
absl::StatusOr<std::vector<std::string>> SplitCsvLine(absl::string_view line);

// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string QuoteCsvField(absl::string_view field);

}  // namespace kvpoison::internal

#endif  // KVPOISON_SRC_CSV_H_
