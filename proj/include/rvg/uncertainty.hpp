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
#include <vector>

#include "rvg/common.hpp"

namespace rvg {

/// One candidate transition model for a single state: A probability rows.
using StateKernel = std::vector<numvec>;  // [a] -> row over next states

/**
 * s-rectangular uncertainty set given by finite per-state candidate lists:
 * the adversary picks one candidate kernel per state, independently. A
 * convex (polyhedral) set is represented by the list of its vertices.
 */
struct SRectangularSet {
    std::vector<std::vector<StateKernel>> per_state;  // [s][k] -> candidate kernel

    int num_states() const { return static_cast<int>(per_state.size()); }
    int candidates(int s) const { return static_cast<int>(per_state[s].size()); }
};

/**
 * (s,a)-rectangular uncertainty set: finite candidate rows per state-action
 * pair, picked independently by the adversary.
 */
struct SARectangularSet {
    std::vector<std::vector<std::vector<numvec>>> per_state_action;  // [s][a][k] -> row
};

inline std::vector<std::string> validate_uncertainty(const SRectangularSet& u, int num_states,
                                                     int num_actions) {
    std::vector<std::string> out;
    if (u.num_states() != num_states) {
        out.push_back("uncertainty set covers " + std::to_string(u.num_states()) +
                      " states, expected " + std::to_string(num_states));
        return out;
    }
    for (int s = 0; s < num_states; ++s) {
        if (u.per_state[s].empty())
            out.push_back("state " + std::to_string(s) + " has no candidate kernels");
        for (int k = 0; k < u.candidates(s); ++k) {
            const StateKernel& kern = u.per_state[s][k];
            if (static_cast<int>(kern.size()) != num_actions) {
                out.push_back("candidate " + std::to_string(k) + " at state " + std::to_string(s) +
                              " has wrong action count");
                continue;
            }
            for (int a = 0; a < num_actions; ++a) {
                if (static_cast<int>(kern[a].size()) != num_states)
                    out.push_back("candidate row length mismatch at (s" + std::to_string(s + 1) +
                                  ",a" + std::to_string(a + 1) + ",k" + std::to_string(k) + ")");
                else if (!is_stochastic(kern[a]))
                    out.push_back("candidate row not stochastic at (s" + std::to_string(s + 1) +
                                  ",a" + std::to_string(a + 1) + ",k" + std::to_string(k) + ")");
            }
        }
    }
    return out;
}

inline std::vector<std::string> validate_uncertainty(const SARectangularSet& u, int num_states,
                                                     int num_actions) {
    std::vector<std::string> out;
    if (static_cast<int>(u.per_state_action.size()) != num_states) {
        out.push_back("uncertainty set covers " + std::to_string(u.per_state_action.size()) +
                      " states, expected " + std::to_string(num_states));
        return out;
    }
    for (int s = 0; s < num_states; ++s) {
        if (static_cast<int>(u.per_state_action[s].size()) != num_actions) {
            out.push_back("state " + std::to_string(s) + " has wrong action count");
            continue;
        }
        for (int a = 0; a < num_actions; ++a) {
            if (u.per_state_action[s][a].empty())
                out.push_back("no candidate rows at (s" + std::to_string(s + 1) + ",a" +
                              std::to_string(a + 1) + ")");
            for (std::size_t k = 0; k < u.per_state_action[s][a].size(); ++k) {
                const numvec& row = u.per_state_action[s][a][k];
                if (static_cast<int>(row.size()) != num_states)
                    out.push_back("candidate row length mismatch at (s" + std::to_string(s + 1) +
                                  ",a" + std::to_string(a + 1) + ",k" + std::to_string(k) + ")");
                else if (!is_stochastic(row))
                    out.push_back("candidate row not stochastic at (s" + std::to_string(s + 1) +
                                  ",a" + std::to_string(a + 1) + ",k" + std::to_string(k) + ")");
            }
        }
    }
    return out;
}

/// Wraps a single transition model as the degenerate s-rectangular set.
inline SRectangularSet singleton_uncertainty(const std::vector<std::vector<numvec>>& kernel) {
    SRectangularSet u;
    u.per_state.reserve(kernel.size());
    for (const auto& slab : kernel) u.per_state.push_back({slab});
    return u;
}

/**
 * Rewrites an (s,a)-rectangular set as an s-rectangular one: the per-state
 * candidate list is the Cartesian product of the per-action row lists,
 * enumerated with the last action's index moving fastest. `cap` guards the
 * product size per state.
 */
inline SRectangularSet sa_to_s_rectangular(const SARectangularSet& u, long cap = 4096) {
    SRectangularSet out;
    const int num_states = static_cast<int>(u.per_state_action.size());
    out.per_state.resize(num_states);
    for (int s = 0; s < num_states; ++s) {
        const auto& lists = u.per_state_action[s];
        const int num_actions = static_cast<int>(lists.size());
        long total = 1;
        for (const auto& rows : lists) {
            require(!rows.empty(), "sa_to_s_rectangular: empty candidate list");
            total *= static_cast<long>(rows.size());
            if (total > cap)
                throw std::invalid_argument("sa_to_s_rectangular: product of candidate lists at state " +
                                            std::to_string(s) + " exceeds cap " + std::to_string(cap));
        }
        out.per_state[s].reserve(total);
        indvec pick(num_actions, 0);
        for (long i = 0; i < total; ++i) {
            StateKernel kern(num_actions);
            for (int a = 0; a < num_actions; ++a) kern[a] = lists[a][pick[a]];
            out.per_state[s].push_back(std::move(kern));
            for (int a = num_actions - 1; a >= 0; --a) {
                if (++pick[a] < static_cast<int>(lists[a].size())) break;
                pick[a] = 0;
            }
        }
    }
    return out;
}

}  // namespace rvg
