// Copyright 2026 The rvg Authors
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

#pragma once

#include <string>

#include "rvg/instance_io.hpp"

namespace testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(RVG_FIXTURE_DIR) + "/" + name;
}

inline rvg::Instance fixture(const std::string& name) {
    return rvg::load_instance(fixture_path(name));
}

}  // namespace testing
