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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvg {

using numvec = std::vector<double>;
using indvec = std::vector<int>;

/// Tolerance for probability rows to be accepted as stochastic.
inline constexpr double kRowSumTol = 1e-12;

inline double dot(const numvec& a, const numvec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double linf_norm(const numvec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

inline double linf_diff(const numvec& a, const numvec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

/// Deviation of a row from being a probability vector: max of
/// |sum - 1| and the magnitude of the most negative entry.
inline double stochastic_deviation(const numvec& row) {
    double sum = 0.0, neg = 0.0;
    for (double v : row) {
        sum += v;
        neg = std::min(neg, v);
    }
    return std::max(std::fabs(sum - 1.0), -neg);
}

inline bool is_stochastic(const numvec& row, double tol = kRowSumTol) {
    return stochastic_deviation(row) <= tol;
}

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace rvg
