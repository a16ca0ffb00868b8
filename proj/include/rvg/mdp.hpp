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
#include <string>
#include <utility>
#include <vector>

#include "rvg/common.hpp"
#include "rvg/linalg.hpp"

namespace rvg {

/// A value function: one entry per state.
using ValueVector = numvec;

/**
 * Finite MDP with a dense transition tensor. kernel[s][a] is the
 * probability row over successor states for taking action a in state s;
 * rewards[s][a] is the immediate reward. All types in this library are
 * treated as immutable after construction and all operations are pure, so
 * concurrent use is safe.
 */
struct Mdp {
    int num_states = 0;
    int num_actions = 0;
    double gamma = 0.0;
    std::vector<numvec> rewards;               // [s][a]
    std::vector<std::vector<numvec>> kernel;   // [s][a] -> row over next states
};

/// Stationary stochastic policy: one probability row over actions per state.
struct Policy {
    std::vector<numvec> rows;  // [s][a]
};

/// Deterministic policy row: all mass on the given action.
inline numvec deterministic_row(int num_actions, int action) {
    numvec row(num_actions, 0.0);
    row[action] = 1.0;
    return row;
}

/**
 * Checks all structural invariants of an MDP and returns one message per
 * violation (empty means valid). Rows are never silently renormalized;
 * a bad row is reported instead.
 */
inline std::vector<std::string> validate_mdp(const Mdp& m) {
    std::vector<std::string> out;
    if (m.num_states <= 0) out.push_back("num_states must be positive");
    if (m.num_actions <= 0) out.push_back("num_actions must be positive");
    if (!(m.gamma >= 0.0 && m.gamma < 1.0))
        out.push_back("gamma " + std::to_string(m.gamma) + " not in [0,1)");
    if (static_cast<int>(m.rewards.size()) != m.num_states)
        out.push_back("rewards has " + std::to_string(m.rewards.size()) + " state rows, expected " +
                      std::to_string(m.num_states));
    if (static_cast<int>(m.kernel.size()) != m.num_states)
        out.push_back("kernel has " + std::to_string(m.kernel.size()) + " state slabs, expected " +
                      std::to_string(m.num_states));
    for (int s = 0; s < static_cast<int>(m.rewards.size()); ++s) {
        if (static_cast<int>(m.rewards[s].size()) != m.num_actions) {
            out.push_back("rewards[" + std::to_string(s) + "] has wrong length");
            continue;
        }
        for (int a = 0; a < m.num_actions; ++a)
            if (!std::isfinite(m.rewards[s][a]))
                out.push_back("reward not finite at (s" + std::to_string(s + 1) + ",a" +
                              std::to_string(a + 1) + ")");
    }
    for (int s = 0; s < static_cast<int>(m.kernel.size()); ++s) {
        if (static_cast<int>(m.kernel[s].size()) != m.num_actions) {
            out.push_back("kernel[" + std::to_string(s) + "] has wrong action count");
            continue;
        }
        for (int a = 0; a < m.num_actions; ++a) {
            const numvec& row = m.kernel[s][a];
            if (static_cast<int>(row.size()) != m.num_states) {
                out.push_back("kernel row at (s" + std::to_string(s + 1) + ",a" +
                              std::to_string(a + 1) + ") has wrong length");
                continue;
            }
            double sum = 0.0;
            bool neg = false;
            for (double v : row) {
                sum += v;
                if (v < -kRowSumTol) neg = true;
            }
            if (std::fabs(sum - 1.0) > kRowSumTol)
                out.push_back("row sum " + std::to_string(sum) + " != 1 at (s" +
                              std::to_string(s + 1) + ",a" + std::to_string(a + 1) + ")");
            if (neg)
                out.push_back("negative transition probability at (s" + std::to_string(s + 1) +
                              ",a" + std::to_string(a + 1) + ")");
        }
    }
    return out;
}

/// Violations of the policy invariants against an MDP's shape.
inline std::vector<std::string> validate_policy(const Mdp& m, const Policy& pi) {
    std::vector<std::string> out;
    if (static_cast<int>(pi.rows.size()) != m.num_states) {
        out.push_back("policy has " + std::to_string(pi.rows.size()) + " rows, expected " +
                      std::to_string(m.num_states));
        return out;
    }
    for (int s = 0; s < m.num_states; ++s) {
        if (static_cast<int>(pi.rows[s].size()) != m.num_actions) {
            out.push_back("policy row " + std::to_string(s) + " has wrong length");
            continue;
        }
        if (!is_stochastic(pi.rows[s]))
            out.push_back("policy row " + std::to_string(s) + " is not a probability vector");
    }
    return out;
}

inline void check_policy(const Mdp& m, const Policy& pi) {
    auto v = validate_policy(m, pi);
    if (!v.empty()) throw std::invalid_argument("invalid policy: " + v.front());
}

/**
 * State-to-state transition matrix under a policy: row s is the
 * policy-weighted mixture of the action rows at s. Rows stay stochastic.
 */
inline std::vector<numvec> policy_transition(const Mdp& m, const Policy& pi) {
    check_policy(m, pi);
    std::vector<numvec> p(m.num_states, numvec(m.num_states, 0.0));
    for (int s = 0; s < m.num_states; ++s)
        for (int a = 0; a < m.num_actions; ++a) {
            const double w = pi.rows[s][a];
            if (w == 0.0) continue;
            for (int t = 0; t < m.num_states; ++t) p[s][t] += w * m.kernel[s][a][t];
        }
    return p;
}

/// Expected one-step reward per state under a policy.
inline ValueVector policy_reward(const Mdp& m, const Policy& pi) {
    check_policy(m, pi);
    ValueVector r(m.num_states, 0.0);
    for (int s = 0; s < m.num_states; ++s) r[s] = dot(pi.rows[s], m.rewards[s]);
    return r;
}

/**
 * Exact policy evaluation: solves (I - gamma P^pi) v = r^pi by a dense
 * direct solve. The matrix is strictly diagonally dominant for gamma < 1,
 * so the system always has a unique solution. The result is checked to be
 * a Bellman fixed point with residual at most 1e-10.
 */
inline ValueVector evaluate_policy(const Mdp& m, const Policy& pi) {
    const auto p = policy_transition(m, pi);
    const auto r = policy_reward(m, pi);
    std::vector<numvec> a(m.num_states, numvec(m.num_states, 0.0));
    for (int s = 0; s < m.num_states; ++s) {
        for (int t = 0; t < m.num_states; ++t) a[s][t] = -m.gamma * p[s][t];
        a[s][s] += 1.0;
    }
    ValueVector v = solve_dense(a, r);
    if (residual_linf(a, v, r) > 1e-10)
        throw std::runtime_error("evaluate_policy: solve residual above 1e-10");
    return v;
}

/// Bellman residual ||v - (r^pi + gamma P^pi v)||_inf; zero at the value.
inline double bellman_residual(const Mdp& m, const Policy& pi, const ValueVector& v) {
    const auto p = policy_transition(m, pi);
    const auto r = policy_reward(m, pi);
    double worst = 0.0;
    for (int s = 0; s < m.num_states; ++s)
        worst = std::max(worst, std::fabs(v[s] - (r[s] + m.gamma * dot(p[s], v))));
    return worst;
}

/**
 * A priori range of any value function: every attainable value lies in
 * [min r / (1-gamma), max r / (1-gamma)] in every coordinate.
 */
inline std::pair<double, double> value_bounding_box(const Mdp& m) {
    double lo = m.rewards[0][0], hi = m.rewards[0][0];
    for (const auto& row : m.rewards)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double f = 1.0 / (1.0 - m.gamma);
    return {lo * f, hi * f};
}

}  // namespace rvg
