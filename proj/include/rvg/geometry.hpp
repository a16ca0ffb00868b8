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
#include <map>
#include <utility>
#include <vector>

#include "rvg/common.hpp"
#include "rvg/linalg.hpp"
#include "rvg/mdp.hpp"
#include "rvg/random.hpp"

namespace rvg {

/**
 * Normal data of the state-s hyperplane for a policy row pi_s under one
 * transition kernel: normal = e_s - gamma * (pi_s-mixture of the action
 * rows at s), offset = expected one-step reward at s. Every value function
 * of a policy agreeing with pi_s at s satisfies <v, normal> = offset.
 *
 * The normal always satisfies <1, normal> = 1 - gamma: its entry at s is
 * 1 - gamma * P(s|s) and every other entry is -gamma * P(s'|s) <= 0.
 */
struct LVector {
    numvec normal;
    int state = 0;
    double offset = 0.0;
};

/// The hyperplane { x : <x, normal> = offset }, with signed residual
/// exposing on which side a point lies.
struct Hyperplane {
    LVector lvec;

    double residual(const ValueVector& x) const { return dot(x, lvec.normal) - lvec.offset; }
};

/// Per-state certificate produced by a membership test.
struct StateCertificate {
    int state = 0;
    double value = 0.0;        // the tested coordinate x_s
    double lower = 0.0;        // smallest attainable one-step backup at s
    double upper = 0.0;        // largest attainable one-step backup at s
    bool lower_ok = false;     // x_s >= lower - tol
    bool upper_ok = false;     // x_s <= upper + tol
    int lower_action = -1;     // action attaining `lower`
    int lower_kernel = -1;     // candidate kernel attaining `lower` (-1 for plain MDPs)
    int upper_action = -1;     // action attaining `upper` (plain MDPs)
    numvec upper_mix;          // maximin mix attaining `upper` (robust case)

    bool ok() const { return lower_ok && upper_ok; }
};

/// Verdict plus the per-state certificates that justify it.
struct MembershipReport {
    bool verdict = false;
    double tol = 0.0;
    std::vector<StateCertificate> per_state;
};

/**
 * Builds the L-vector for state s, policy row pi_s and the given MDP's
 * kernel row stack at s.
 */
inline LVector l_vector(const Mdp& m, int s, const numvec& pi_s) {
    require(s >= 0 && s < m.num_states, "l_vector: state out of range");
    require(static_cast<int>(pi_s.size()) == m.num_actions, "l_vector: policy row length");
    require(is_stochastic(pi_s), "l_vector: policy row is not a probability vector");
    LVector lv;
    lv.state = s;
    lv.normal.assign(m.num_states, 0.0);
    for (int a = 0; a < m.num_actions; ++a) {
        const double w = pi_s[a];
        if (w == 0.0) continue;
        for (int t = 0; t < m.num_states; ++t) lv.normal[t] -= m.gamma * w * m.kernel[s][a][t];
        lv.offset += w * m.rewards[s][a];
    }
    lv.normal[s] += 1.0;
    return lv;
}

/**
 * Recovers the value function of a policy as the unique intersection point
 * of its S per-state hyperplanes: stacks the L-vectors into a linear system
 * with the per-state expected rewards on the right side and solves it.
 * Agrees with evaluate_policy, which assembles the same system from the
 * transition-matrix side.
 */
inline ValueVector intersect_policy_hyperplanes(const Mdp& m, const Policy& pi) {
    check_policy(m, pi);
    std::vector<numvec> rows(m.num_states);
    numvec rhs(m.num_states);
    for (int s = 0; s < m.num_states; ++s) {
        LVector lv = l_vector(m, s, pi.rows[s]);
        rows[s] = std::move(lv.normal);
        rhs[s] = lv.offset;
    }
    return solve_dense(rows, rhs);
}

/**
 * Tests whether a point lies in the value space. Per state s, the one-step
 * backups q_a = r_{s,a} + gamma <x, P_{s,a}> span the interval of
 * coordinates attainable by mixing actions at s, so x belongs to the value
 * space iff  min_a q_a - tol <= x_s <= max_a q_a + tol  for every state.
 * The certificate records the interval and the argmin/argmax actions.
 */
inline MembershipReport value_space_membership(const Mdp& m, const ValueVector& x, double tol) {
    require(tol > 0.0, "value_space_membership: tol must be positive");
    require(static_cast<int>(x.size()) == m.num_states, "value_space_membership: point length");
    MembershipReport rep;
    rep.tol = tol;
    rep.verdict = true;
    rep.per_state.resize(m.num_states);
    for (int s = 0; s < m.num_states; ++s) {
        StateCertificate& cert = rep.per_state[s];
        cert.state = s;
        cert.value = x[s];
        for (int a = 0; a < m.num_actions; ++a) {
            const double q = m.rewards[s][a] + m.gamma * dot(x, m.kernel[s][a]);
            if (a == 0 || q < cert.lower) {
                cert.lower = q;
                cert.lower_action = a;
            }
            if (a == 0 || q > cert.upper) {
                cert.upper = q;
                cert.upper_action = a;
            }
        }
        cert.lower_ok = x[s] >= cert.lower - tol;
        cert.upper_ok = x[s] <= cert.upper + tol;
        rep.verdict = rep.verdict && cert.ok();
    }
    return rep;
}

/**
 * Samples value functions of policies that agree with `fixed` on the given
 * states and are uniform-simplex random elsewhere. Every returned point
 * lies on the fixed states' hyperplanes. Deterministic given the seed.
 */
inline std::vector<ValueVector> agreement_slice_sample(const Mdp& m,
                                                       const std::map<int, numvec>& fixed, int n,
                                                       std::uint64_t seed) {
    require(n > 0, "agreement_slice_sample: n must be positive");
    for (const auto& [s, row] : fixed) {
        require(s >= 0 && s < m.num_states, "agreement_slice_sample: fixed state out of range");
        require(static_cast<int>(row.size()) == m.num_actions,
                "agreement_slice_sample: fixed row length");
        require(is_stochastic(row), "agreement_slice_sample: fixed row not stochastic");
    }
    Rng rng(seed);
    std::vector<ValueVector> out;
    out.reserve(n);
    Policy pi;
    pi.rows.resize(m.num_states);
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < m.num_states; ++s) {
            auto it = fixed.find(s);
            pi.rows[s] = (it != fixed.end()) ? it->second : rng.simplex(m.num_actions);
        }
        out.push_back(evaluate_policy(m, pi));
    }
    return out;
}

}  // namespace rvg
