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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rvg/common.hpp"

namespace rvg {

/**
 * Solves the dense square system A x = b by LU factorization with partial
 * pivoting. A and b are taken by value and destroyed. Intended for the small
 * systems that appear here (a handful of states); the matrices are strictly
 * diagonally dominant, so the factorization is well behaved.
 */
inline numvec solve_dense(std::vector<numvec> a, numvec b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        const double inv = 1.0 / a[col][col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    numvec x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

/// Residual ||A x - b||_inf.
inline double residual_linf(const std::vector<numvec>& a, const numvec& x, const numvec& b) {
    double m = 0.0;
    for (std::size_t r = 0; r < b.size(); ++r)
        m = std::max(m, std::fabs(dot(a[r], x) - b[r]));
    return m;
}

}  // namespace rvg
