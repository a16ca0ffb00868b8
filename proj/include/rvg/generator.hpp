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

#include "rvg/instance_io.hpp"
#include "rvg/random.hpp"

namespace rvg {

/// Size ranges for random instances. Kept small so that the exhaustive
/// oracles stay within their caps.
struct GenConfig {
    int min_states = 2, max_states = 3;
    int min_actions = 2, max_actions = 3;
    int min_candidates = 1, max_candidates = 3;
    double gamma = 0.9;
};

/**
 * Draws a random instance: rewards uniform on [0,1], every probability row
 * uniform on the simplex. Deterministic given the seed.
 */
inline Instance generate_instance(const GenConfig& cfg, InstanceKind kind, std::uint64_t seed) {
    Rng rng(seed);
    Instance inst;
    inst.kind = kind;
    inst.states = cfg.min_states + rng.uniform_int(cfg.max_states - cfg.min_states + 1);
    inst.actions = cfg.min_actions + rng.uniform_int(cfg.max_actions - cfg.min_actions + 1);
    inst.gamma = cfg.gamma;
    inst.rewards.resize(inst.states);
    for (auto& row : inst.rewards) {
        row.resize(inst.actions);
        for (double& r : row) r = rng.uniform();
    }
    const auto draw_candidates = [&] {
        return cfg.min_candidates + rng.uniform_int(cfg.max_candidates - cfg.min_candidates + 1);
    };
    switch (kind) {
        case InstanceKind::plain:
            inst.kernel.resize(inst.states);
            for (auto& slab : inst.kernel) {
                slab.resize(inst.actions);
                for (auto& row : slab) row = rng.simplex(inst.states);
            }
            break;
        case InstanceKind::s_rect:
            inst.s_rect.per_state.resize(inst.states);
            for (auto& cands : inst.s_rect.per_state) {
                cands.resize(draw_candidates());
                for (auto& kern : cands) {
                    kern.resize(inst.actions);
                    for (auto& row : kern) row = rng.simplex(inst.states);
                }
            }
            break;
        case InstanceKind::sa_rect:
            inst.sa_rect.per_state_action.resize(inst.states);
            for (auto& acts : inst.sa_rect.per_state_action) {
                acts.resize(inst.actions);
                for (auto& rows : acts) {
                    rows.resize(draw_candidates());
                    for (auto& row : rows) row = rng.simplex(inst.states);
                }
            }
            break;
    }
    return inst;
}

/// Uniform random policy for an instance.
inline Policy random_policy(const Instance& inst, Rng& rng) {
    Policy pi;
    pi.rows.reserve(inst.states);
    for (int s = 0; s < inst.states; ++s) pi.rows.push_back(rng.simplex(inst.actions));
    return pi;
}

/// Uniform random point in the instance's a-priori value box.
inline ValueVector random_box_point(const Mdp& m, Rng& rng) {
    const auto [lo, hi] = value_bounding_box(m);
    ValueVector x(m.num_states);
    for (double& v : x) v = rng.uniform(lo, hi);
    return x;
}

}  // namespace rvg
