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
#include <utility>
#include <vector>

#include "rvg/common.hpp"
#include "rvg/matrix_game.hpp"
#include "rvg/uncertainty.hpp"

namespace rvg {

namespace detail {

/**
 * Best convex reconstruction of `target` from `points`: minimizes the
 * sup-norm error t over weights lambda >= 0 with sum lambda = 1, via the
 * LP  max -t  s.t.  +-(sum_j lambda_j points[j] - target) <= t. Returns
 * the achieved error and the weights.
 */
inline std::pair<double, numvec> convex_fit(const std::vector<const numvec*>& points,
                                            const numvec& target) {
    const int n = static_cast<int>(points.size());
    const int dim = static_cast<int>(target.size());
    // Variables: lambda[0..n-1], t. Rows: 2*dim error bounds + simplex equality.
    std::vector<numvec> a(2 * dim + 2, numvec(n + 1, 0.0));
    numvec b(2 * dim + 2, 0.0), c(n + 1, 0.0);
    for (int d = 0; d < dim; ++d) {
        for (int j = 0; j < n; ++j) {
            a[2 * d][j] = (*points[j])[d];
            a[2 * d + 1][j] = -(*points[j])[d];
        }
        a[2 * d][n] = -1.0;
        a[2 * d + 1][n] = -1.0;
        b[2 * d] = target[d];
        b[2 * d + 1] = -target[d];
    }
    for (int j = 0; j < n; ++j) {
        a[2 * dim][j] = 1.0;
        a[2 * dim + 1][j] = -1.0;
    }
    b[2 * dim] = 1.0;
    b[2 * dim + 1] = -1.0;
    c[n] = -1.0;

    numvec x;
    double value = 0.0;
    SimplexSolver lp(a, b, c);
    if (!lp.solve(x, value))
        throw std::runtime_error("convex_fit: LP did not solve (should be impossible)");
    numvec weights(x.begin(), x.begin() + n);
    double sum = 0.0;
    for (double& w : weights) {
        w = std::max(w, 0.0);
        sum += w;
    }
    for (double& w : weights) w /= sum;
    return {-value, std::move(weights)};
}

}  // namespace detail

/**
 * Indices of the extreme points of the convex hull of a finite point set.
 * A point is dropped when it can be reconstructed as a convex combination
 * of the remaining points within `tol` (sup norm); exact duplicates keep
 * only the lowest index. Near-degenerate points (on a facet within tol)
 * are dropped as non-extreme. The kept set is the minimal subset whose
 * hull contains every input point.
 */
inline indvec extreme_points(const std::vector<numvec>& points, double tol = 1e-9) {
    require(!points.empty(), "extreme_points: empty point list");
    const int n = static_cast<int>(points.size());
    std::vector<char> duplicate(n, 0);
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (!duplicate[j] && linf_diff(points[i], points[j]) <= kRowSumTol) {
                duplicate[i] = 1;
                break;
            }
    indvec kept;
    for (int i = 0; i < n; ++i) {
        if (duplicate[i]) continue;
        std::vector<const numvec*> others;
        others.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i && !duplicate[j]) others.push_back(&points[j]);
        if (others.empty()) {
            kept.push_back(i);
            continue;
        }
        if (detail::convex_fit(others, points[i]).first > tol) kept.push_back(i);
    }
    return kept;
}

/// One removed candidate with its convex-combination certificate.
struct RemovalCertificate {
    int index = 0;       // index in the original candidate list
    numvec weights;      // over the kept candidates, in kept order
    double error = 0.0;  // sup-norm reconstruction error of the certificate
};

/// Per-state outcome of an uncertainty-set reduction.
struct StateReduction {
    indvec kept;
    std::vector<RemovalCertificate> removed;
};

struct ReductionReport {
    std::vector<StateReduction> per_state;

    int total_removed() const {
        int n = 0;
        for (const auto& sr : per_state) n += static_cast<int>(sr.removed.size());
        return n;
    }
};

/**
 * Shrinks an s-rectangular set to its active subset: per state, keeps only
 * the candidate kernels that are extreme points of the candidate list's
 * convex hull (kernels compared as row-major flattened vectors, successor
 * states innermost). The reduced set induces the same robust values and
 * the same robust value space. Every removal carries a certificate of
 * weights over the kept kernels reconstructing it within 1e-9.
 */
inline std::pair<SRectangularSet, ReductionReport> reduce_uncertainty(const SRectangularSet& u,
                                                                      double tol = 1e-9) {
    SRectangularSet reduced;
    ReductionReport report;
    reduced.per_state.resize(u.num_states());
    report.per_state.resize(u.num_states());
    for (int s = 0; s < u.num_states(); ++s) {
        std::vector<numvec> flat;
        flat.reserve(u.candidates(s));
        for (const StateKernel& kern : u.per_state[s]) {
            numvec v;
            for (const numvec& row : kern) v.insert(v.end(), row.begin(), row.end());
            flat.push_back(std::move(v));
        }
        StateReduction& sr = report.per_state[s];
        sr.kept = extreme_points(flat, tol);
        std::vector<char> is_kept(flat.size(), 0);
        for (int k : sr.kept) {
            is_kept[k] = 1;
            reduced.per_state[s].push_back(u.per_state[s][k]);
        }
        std::vector<const numvec*> kept_pts;
        kept_pts.reserve(sr.kept.size());
        for (int k : sr.kept) kept_pts.push_back(&flat[k]);
        for (int k = 0; k < static_cast<int>(flat.size()); ++k) {
            if (is_kept[k]) continue;
            auto [err, weights] = detail::convex_fit(kept_pts, flat[k]);
            if (err > tol)
                throw std::logic_error("reduce_uncertainty: removal certificate error above tol");
            sr.removed.push_back({k, std::move(weights), err});
        }
    }
    return {std::move(reduced), std::move(report)};
}

/// Per-(state,action) reduction outcome for (s,a)-rectangular sets.
struct SaReductionReport {
    std::vector<std::vector<StateReduction>> per_state_action;

    int total_removed() const {
        int n = 0;
        for (const auto& acts : per_state_action)
            for (const auto& sr : acts) n += static_cast<int>(sr.removed.size());
        return n;
    }
};

/**
 * Active-subset reduction for an (s,a)-rectangular set: each per-(s,a)
 * candidate row list is cut down to the extreme points of its hull. The
 * factors reduce independently, so the product set keeps the same hull
 * and the robust value space is unchanged.
 */
inline std::pair<SARectangularSet, SaReductionReport> reduce_uncertainty(
    const SARectangularSet& u, double tol = 1e-9) {
    SARectangularSet reduced;
    SaReductionReport report;
    const int num_states = static_cast<int>(u.per_state_action.size());
    reduced.per_state_action.resize(num_states);
    report.per_state_action.resize(num_states);
    for (int s = 0; s < num_states; ++s) {
        const int num_actions = static_cast<int>(u.per_state_action[s].size());
        reduced.per_state_action[s].resize(num_actions);
        report.per_state_action[s].resize(num_actions);
        for (int a = 0; a < num_actions; ++a) {
            const auto& rows = u.per_state_action[s][a];
            StateReduction& sr = report.per_state_action[s][a];
            sr.kept = extreme_points(rows, tol);
            std::vector<char> is_kept(rows.size(), 0);
            for (int k : sr.kept) {
                is_kept[k] = 1;
                reduced.per_state_action[s][a].push_back(rows[k]);
            }
            std::vector<const numvec*> kept_pts;
            for (int k : sr.kept) kept_pts.push_back(&rows[k]);
            for (int k = 0; k < static_cast<int>(rows.size()); ++k) {
                if (is_kept[k]) continue;
                auto [err, weights] = detail::convex_fit(kept_pts, rows[k]);
                if (err > tol)
                    throw std::logic_error("reduce_uncertainty: removal certificate error above tol");
                sr.removed.push_back({k, std::move(weights), err});
            }
        }
    }
    return {std::move(reduced), std::move(report)};
}

}  // namespace rvg
