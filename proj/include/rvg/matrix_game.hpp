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
#include <limits>
#include <utility>
#include <vector>

#include "rvg/common.hpp"

namespace rvg {

/**
 * Dense two-phase simplex for  max c'x  s.t.  A x <= b, x >= 0.
 * Classic tableau formulation with lexicographic-style tie breaking
 * (value, then index), which keeps pivoting deterministic and cycle-free
 * for the tiny, well-scaled programs used here.
 */
class SimplexSolver {
public:
    static constexpr double kEps = 1e-11;

    SimplexSolver(const std::vector<numvec>& a, const numvec& b, const numvec& c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
          nonbasic_(n_ + 1), basic_(m_), tab_(m_ + 2, numvec(n_ + 2, 0.0)) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) tab_[i][j] = a[i][j];
        for (int i = 0; i < m_; ++i) {
            basic_[i] = n_ + i;
            tab_[i][n_] = -1.0;
            tab_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            tab_[m_][j] = -c[j];
        }
        nonbasic_[n_] = -1;
        tab_[m_ + 1][n_] = 1.0;
    }

    /// Returns false if infeasible or unbounded; otherwise fills x and value.
    bool solve(numvec& x, double& value) {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (tab_[i][n_ + 1] < tab_[r][n_ + 1]) r = i;
        if (tab_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!iterate(2) || tab_[m_ + 1][n_ + 1] < -kEps) return false;
            for (int i = 0; i < m_; ++i)
                if (basic_[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n_; ++j)
                        if (lex_less(tab_[i][j], nonbasic_[j], tab_[i][s], nonbasic_[s])) s = j;
                    pivot(i, s);
                }
        }
        if (!iterate(1)) return false;
        x.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basic_[i] < n_) x[basic_[i]] = tab_[i][n_ + 1];
        value = tab_[m_][n_ + 1];
        return true;
    }

private:
    static bool lex_less(double v1, int i1, double v2, int i2) {
        return v1 < v2 || (v1 == v2 && i1 < i2);
    }

    void pivot(int r, int s) {
        numvec& row = tab_[r];
        const double inv = 1.0 / row[s];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r || std::fabs(tab_[i][s]) <= kEps) continue;
            numvec& other = tab_[i];
            const double f = other[s] * inv;
            for (int j = 0; j < n_ + 2; ++j) other[j] -= row[j] * f;
            other[s] = row[s] * f;
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) row[j] *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) tab_[i][s] *= -inv;
        row[s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    bool iterate(int phase) {
        const int obj = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (nonbasic_[j] == -phase) continue;
                if (s == -1 || lex_less(tab_[obj][j], nonbasic_[j], tab_[obj][s], nonbasic_[s]))
                    s = j;
            }
            if (tab_[obj][s] >= -kEps) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (tab_[i][s] <= kEps) continue;
                if (r == -1 || lex_less(tab_[i][n_ + 1] / tab_[i][s], basic_[i],
                                        tab_[r][n_ + 1] / tab_[r][s], basic_[r]))
                    r = i;
            }
            if (r == -1) return false;  // unbounded
            pivot(r, s);
        }
    }

    int m_, n_;
    indvec nonbasic_, basic_;
    std::vector<numvec> tab_;
};

/// Result of a maximin matrix game: the optimal row mix and game value.
struct MaximinResult {
    numvec mix;
    double value = 0.0;
};

/**
 * Solves the row player's side of the one-shot zero-sum game given by an
 * A x K payoff matrix: the probability row over the A pure strategies that
 * maximizes the worst column payoff, together with the attained value
 *
 *     max_{mix in simplex} min_k sum_a mix[a] * payoff[a][k].
 *
 * Solved as a small LP: maximize v subject to payoff' mix >= v and mix in
 * the simplex, with v split into a difference of nonnegatives.
 */
inline MaximinResult maximin_row_mix(const std::vector<numvec>& payoff) {
    const int num_rows = static_cast<int>(payoff.size());
    require(num_rows >= 1, "maximin_row_mix: empty payoff matrix");
    const int num_cols = static_cast<int>(payoff[0].size());
    require(num_cols >= 1, "maximin_row_mix: payoff matrix has no columns");
    for (const auto& row : payoff) {
        require(static_cast<int>(row.size()) == num_cols, "maximin_row_mix: ragged payoff matrix");
        for (double v : row) require(std::isfinite(v), "maximin_row_mix: non-finite payoff");
    }

    if (num_rows == 1) {
        double v = payoff[0][0];
        for (double q : payoff[0]) v = std::min(v, q);
        return {numvec{1.0}, v};
    }
    if (num_cols == 1) {
        int best = 0;
        for (int a = 1; a < num_rows; ++a)
            if (payoff[a][0] > payoff[best][0]) best = a;
        numvec mix(num_rows, 0.0);
        mix[best] = 1.0;
        return {mix, payoff[best][0]};
    }
    if (num_rows == 2) {
        // Two rows: g(t) = min_k (t p0k + (1-t) p1k) is piecewise-linear
        // concave on [0,1], so the maximum sits at an endpoint or where two
        // column lines cross. Enumerate those points directly.
        const numvec& p0 = payoff[0];
        const numvec& p1 = payoff[1];
        const auto eval = [&](double t) {
            double worst = t * p0[0] + (1.0 - t) * p1[0];
            for (int k = 1; k < num_cols; ++k)
                worst = std::min(worst, t * p0[k] + (1.0 - t) * p1[k]);
            return worst;
        };
        double best_t = 0.0, best_v = eval(0.0);
        const double v1 = eval(1.0);
        if (v1 > best_v) {
            best_v = v1;
            best_t = 1.0;
        }
        for (int k1 = 0; k1 < num_cols; ++k1)
            for (int k2 = k1 + 1; k2 < num_cols; ++k2) {
                const double denom = (p0[k1] - p1[k1]) - (p0[k2] - p1[k2]);
                if (denom == 0.0) continue;
                const double t = (p1[k2] - p1[k1]) / denom;
                if (t <= 0.0 || t >= 1.0) continue;
                const double v = eval(t);
                if (v > best_v) {
                    best_v = v;
                    best_t = t;
                }
            }
        return {numvec{best_t, 1.0 - best_t}, best_v};
    }

    // Variables: mix[0..A-1], vplus, vminus. Constraints:
    //   vplus - vminus - sum_a payoff[a][k] mix[a] <= 0   for each column k
    //   sum mix <= 1 and -sum mix <= -1
    const int n = num_rows + 2;
    std::vector<numvec> a(num_cols + 2, numvec(n, 0.0));
    numvec b(num_cols + 2, 0.0), c(n, 0.0);
    for (int k = 0; k < num_cols; ++k) {
        for (int r = 0; r < num_rows; ++r) a[k][r] = -payoff[r][k];
        a[k][num_rows] = 1.0;
        a[k][num_rows + 1] = -1.0;
    }
    for (int r = 0; r < num_rows; ++r) {
        a[num_cols][r] = 1.0;
        a[num_cols + 1][r] = -1.0;
    }
    b[num_cols] = 1.0;
    b[num_cols + 1] = -1.0;
    c[num_rows] = 1.0;
    c[num_rows + 1] = -1.0;

    numvec x;
    double value = 0.0;
    SimplexSolver lp(a, b, c);
    if (!lp.solve(x, value))
        throw std::runtime_error("maximin_row_mix: LP did not solve (should be impossible)");

    numvec mix(x.begin(), x.begin() + num_rows);
    double sum = 0.0;
    for (double& w : mix) {
        w = std::max(w, 0.0);
        sum += w;
    }
    for (double& w : mix) w /= sum;
    return {std::move(mix), value};
}

}  // namespace rvg
