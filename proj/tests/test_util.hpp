// Copyright 2026 The floquetforge Authors
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

#ifndef FLOQUETFORGE_TESTS_TEST_UTIL_HPP
#define FLOQUETFORGE_TESTS_TEST_UTIL_HPP

#include <map>
#include <string>

#include "floquetforge/harness.hpp"

namespace floquetforge::testing {

/// Shipped codes are rebuilt once per test binary.
inline const Code &cached_code(const std::string &id, bool with_distance = false) {
    static std::map<std::pair<std::string, bool>, Code> cache;
    auto key = std::make_pair(id, with_distance);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, load_code(id, with_distance)).first;
    }
    return it->second;
}

}  // namespace floquetforge::testing

#endif
