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
#include <string>
#include <utility>
#include <vector>

#include "rvg/common.hpp"
#include "rvg/matrix_game.hpp"
#include "rvg/mdp.hpp"
#include "rvg/uncertainty.hpp"

namespace rvg {

/// Robust policy evaluation outcome: the robust value, the adversary's
/// choice of candidate kernel per state, and convergence data.
struct RobustEvalResult {
    ValueVector value;
    indvec worst_kernel;   // per-state candidate index realizing the value
    long iterations = 0;
    double residual = 0.0;  // gap to the exact evaluation of the worst kernel
};

namespace detail {

inline void check_robust_shapes(const Mdp& m, const SRectangularSet& u) {
    auto v = validate_uncertainty(u, m.num_states, m.num_actions);
    if (!v.empty()) throw std::invalid_argument("invalid uncertainty set: " + v.front());
}

/// One-step backup at state s for candidate kernel k under policy row pi_s.
inline double mixed_backup(const Mdp& m, const StateKernel& kern, const numvec& pi_s, int s,
                           const ValueVector& v) {
    double total = 0.0;
    for (int a = 0; a < m.num_actions; ++a) {
        const double w = pi_s[a];
        if (w == 0.0) continue;
        total += w * (m.rewards[s][a] + m.gamma * dot(kern[a], v));
    }
    return total;
}

/// Assembles the plain MDP whose kernel picks candidate `choice[s]` per state.
inline Mdp select_kernel(const Mdp& m, const SRectangularSet& u, const indvec& choice) {
    Mdp out = m;
    out.kernel.resize(m.num_states);
    for (int s = 0; s < m.num_states; ++s) out.kernel[s] = u.per_state[s][choice[s]];
    return out;
}

}  // namespace detail

/**
 * One application of the robust Bellman evaluation operator: per state the
 * adversary picks the candidate kernel minimizing the policy-mixed backup,
 *
 *     out(s) = min_k sum_a pi_{s,a} (r_{s,a} + gamma <P^(k)_{s,a}, v>).
 *
 * A gamma-contraction in the sup norm.
 */
inline ValueVector robust_bellman_apply(const Mdp& m, const SRectangularSet& u, const Policy& pi,
                                        const ValueVector& v) {
    detail::check_robust_shapes(m, u);
    check_policy(m, pi);
    require(static_cast<int>(v.size()) == m.num_states, "robust_bellman_apply: value length");
    ValueVector out(m.num_states, 0.0);
    for (int s = 0; s < m.num_states; ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (const StateKernel& kern : u.per_state[s])
            best = std::min(best, detail::mixed_backup(m, kern, pi.rows[s], s, v));
        out[s] = best;
    }
    return out;
}

/**
 * Robust policy evaluation by fixed-point iteration from zero. The stop
 * rule ties the sup-norm step to the contraction constant so the returned
 * value has certified sup-norm error at most tol. Afterwards the per-state
 * argmin kernels are extracted (lowest index on ties) and cross-checked by
 * exact evaluation of the assembled worst-case model.
 */
inline RobustEvalResult robust_evaluate_policy(const Mdp& m, const SRectangularSet& u,
                                               const Policy& pi, double tol = 1e-10) {
    detail::check_robust_shapes(m, u);
    check_policy(m, pi);
    require(tol > 0.0, "robust_evaluate_policy: tol must be positive");
    const double stop = m.gamma > 0.0 ? tol * (1.0 - m.gamma) / m.gamma
                                      : std::numeric_limits<double>::infinity();
    RobustEvalResult res;
    res.value.assign(m.num_states, 0.0);
    for (;;) {
        ValueVector next = robust_bellman_apply(m, u, pi, res.value);
        const double step = linf_diff(next, res.value);
        res.value = std::move(next);
        ++res.iterations;
        if (step <= stop) break;
    }

    res.worst_kernel.assign(m.num_states, 0);
    for (int s = 0; s < m.num_states; ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < u.candidates(s); ++k) {
            const double q = detail::mixed_backup(m, u.per_state[s][k], pi.rows[s], s, res.value);
            if (q < best) {
                best = q;
                res.worst_kernel[s] = k;
            }
        }
    }
    const ValueVector exact = evaluate_policy(detail::select_kernel(m, u, res.worst_kernel), pi);
    res.residual = linf_diff(res.value, exact);
    if (res.residual > 10.0 * tol)
        throw std::runtime_error("robust_evaluate_policy: worst-kernel check residual " +
                                 std::to_string(res.residual) + " above 10*tol");
    return res;
}

/**
 * Exhaustive robust policy evaluation: enumerates every combination of
 * candidate kernels (lexicographic order, capped), evaluates each exactly,
 * and returns the combination whose value is elementwise minimal. Under
 * s-rectangularity such a combination must exist; if none does within
 * `assert_tol`, the input violated the precondition (or there is a bug)
 * and a logic_error is thrown.
 */
inline RobustEvalResult brute_force_robust_value(const Mdp& m, const SRectangularSet& u,
                                                 const Policy& pi, long cap = 4096,
                                                 double assert_tol = 1e-9) {
    detail::check_robust_shapes(m, u);
    check_policy(m, pi);
    long total = 1;
    for (int s = 0; s < m.num_states; ++s) {
        total *= static_cast<long>(u.candidates(s));
        if (total > cap)
            throw std::invalid_argument("brute_force_robust_value: " + std::to_string(total) +
                                        "+ kernel combinations exceed cap " + std::to_string(cap));
    }

    std::vector<ValueVector> values;
    values.reserve(total);
    std::vector<indvec> choices;
    choices.reserve(total);
    indvec pick(m.num_states, 0);
    for (long i = 0; i < total; ++i) {
        values.push_back(evaluate_policy(detail::select_kernel(m, u, pick), pi));
        choices.push_back(pick);
        for (int s = m.num_states - 1; s >= 0; --s) {
            if (++pick[s] < u.candidates(s)) break;
            pick[s] = 0;
        }
    }

    ValueVector floor(m.num_states, std::numeric_limits<double>::infinity());
    for (const ValueVector& v : values)
        for (int s = 0; s < m.num_states; ++s) floor[s] = std::min(floor[s], v[s]);
    long best = -1;
    for (long i = 0; i < total; ++i)
        if (linf_diff(values[i], floor) <= assert_tol) {
            best = i;
            break;
        }
    if (best < 0)
        throw std::logic_error("brute_force_robust_value: no elementwise-minimal combination");

    RobustEvalResult res;
    res.value = values[best];
    res.worst_kernel = choices[best];
    res.iterations = total;
    res.residual = linf_diff(values[best], floor);
    return res;
}

/// Optimal robust value and greedy policy pair.
struct RobustOptimalResult {
    ValueVector value;
    Policy policy;
    long iterations = 0;
};

/**
 * Optimal robust value for an s-rectangular set by value iteration with a
 * per-state maximin update: the payoff matrix at state s has one row per
 * action and one column per candidate kernel,
 * q[a][k] = r_{s,a} + gamma <P^(k)_{s,a}, v>, and the update takes the
 * maximin value over action mixes. The greedy policy may be stochastic.
 */
inline RobustOptimalResult robust_optimal_value(const Mdp& m, const SRectangularSet& u,
                                                double tol = 1e-9) {
    detail::check_robust_shapes(m, u);
    require(tol > 0.0, "robust_optimal_value: tol must be positive");
    const double stop = m.gamma > 0.0 ? tol * (1.0 - m.gamma) / m.gamma
                                      : std::numeric_limits<double>::infinity();
    RobustOptimalResult res;
    res.value.assign(m.num_states, 0.0);
    res.policy.rows.assign(m.num_states, numvec(m.num_actions, 0.0));
    for (;;) {
        ValueVector next(m.num_states, 0.0);
        for (int s = 0; s < m.num_states; ++s) {
            const int num_k = u.candidates(s);
            std::vector<numvec> q(m.num_actions, numvec(num_k, 0.0));
            for (int a = 0; a < m.num_actions; ++a)
                for (int k = 0; k < num_k; ++k)
                    q[a][k] = m.rewards[s][a] + m.gamma * dot(u.per_state[s][k][a], res.value);
            MaximinResult mr = maximin_row_mix(q);
            next[s] = mr.value;
            res.policy.rows[s] = std::move(mr.mix);
        }
        const double step = linf_diff(next, res.value);
        res.value = std::move(next);
        ++res.iterations;
        if (step <= stop) break;
    }
    return res;
}

/**
 * Optimal robust value for an (s,a)-rectangular set. The inner minimum
 * decomposes per action, so the update is max_a min_k q[a][k] and the
 * greedy policy is deterministic (lowest action index on ties).
 */
inline RobustOptimalResult robust_optimal_value(const Mdp& m, const SARectangularSet& u,
                                                double tol = 1e-9) {
    auto v = validate_uncertainty(u, m.num_states, m.num_actions);
    if (!v.empty()) throw std::invalid_argument("invalid uncertainty set: " + v.front());
    require(tol > 0.0, "robust_optimal_value: tol must be positive");
    const double stop = m.gamma > 0.0 ? tol * (1.0 - m.gamma) / m.gamma
                                      : std::numeric_limits<double>::infinity();
    RobustOptimalResult res;
    res.value.assign(m.num_states, 0.0);
    res.policy.rows.assign(m.num_states, numvec(m.num_actions, 0.0));
    for (;;) {
        ValueVector next(m.num_states, 0.0);
        for (int s = 0; s < m.num_states; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            int best_a = 0;
            for (int a = 0; a < m.num_actions; ++a) {
                double worst = std::numeric_limits<double>::infinity();
                for (const numvec& row : u.per_state_action[s][a])
                    worst = std::min(worst, m.rewards[s][a] + m.gamma * dot(row, res.value));
                if (worst > best) {
                    best = worst;
                    best_a = a;
                }
            }
            next[s] = best;
            res.policy.rows[s] = deterministic_row(m.num_actions, best_a);
        }
        const double step = linf_diff(next, res.value);
        res.value = std::move(next);
        ++res.iterations;
        if (step <= stop) break;
    }
    return res;
}

}  // namespace rvg
