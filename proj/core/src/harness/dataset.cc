// Copyright 2026 The Anomaly Score Authors
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

#include "anomaly/harness/dataset.h"

#include <algorithm>
#include <cctype>

#include "anomaly/errors.h"

namespace anomaly::harness {

namespace fs = std::filesystem;

std::vector<DatasetEntry> list_images(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw InputError("image directory " + root.string() + " does not exist");
  }
  std::vector<DatasetEntry> out;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (!it->is_regular_file()) continue;
    std::string ext = it->path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
    out.push_back({fs::relative(it->path(), root).generic_string(), it->path()});
  }
  if (ec) throw InputError("cannot list " + root.string() + ": " + ec.message());
  if (out.empty()) throw InputError("no images in " + root.string());
  std::sort(out.begin(), out.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
  return out;
}

}  // namespace anomaly::harness
