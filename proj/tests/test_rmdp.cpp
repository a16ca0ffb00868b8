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

#include <doctest.h>

#include "rvg/generator.hpp"
#include "rvg/rmdp.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace rvg;

namespace {

/// 2 states, 1 action, r = (1, 0); the adversary may route state 1 either
/// to itself or into the zero-reward absorbing state 2.
struct Routing {
    Mdp m;
    SRectangularSet u;
    Policy pi;

    Routing() {
        m.num_states = 2;
        m.num_actions = 1;
        m.gamma = 0.9;
        m.rewards = {{1.0}, {0.0}};
        m.kernel = {{{1.0, 0.0}}, {{0.0, 1.0}}};
        u.per_state = {{{{1.0, 0.0}}, {{0.0, 1.0}}}, {{{0.0, 1.0}}}};
        pi.rows = {{1.0}, {1.0}};
    }
};

}  // namespace

TEST_CASE("sa_to_s_rectangular: singleton lists give the nominal model") {
    GenConfig gen;
    gen.min_candidates = gen.max_candidates = 1;
    const Instance inst = generate_instance(gen, InstanceKind::sa_rect, 42);
    const SRectangularSet u = sa_to_s_rectangular(inst.sa_rect);
    for (int s = 0; s < inst.states; ++s) {
        REQUIRE(u.candidates(s) == 1);
        for (int a = 0; a < inst.actions; ++a)
            CHECK(u.per_state[s][0][a] == inst.sa_rect.per_state_action[s][a][0]);
    }
}

TEST_CASE("sa_to_s_rectangular expands two rows per pair into four kernels") {
    const Instance inst = testing::fixture("rmdp_sarect_2s2a.json");
    const SRectangularSet u = sa_to_s_rectangular(inst.sa_rect);
    CHECK(u.candidates(0) == 4);
    CHECK(u.candidates(1) == 4);
    // first kernel pairs the first row of each action list
    CHECK(u.per_state[0][0][0] == numvec{0.95, 0.05});
    CHECK(u.per_state[0][0][1] == numvec{0.17, 0.83});
    // last kernel pairs the second rows
    CHECK(u.per_state[0][3][0] == numvec{0.24, 0.76});
    CHECK(u.per_state[0][3][1] == numvec{0.05, 0.95});
}

TEST_CASE("sa_to_s_rectangular honors the combination cap") {
    const Instance inst = testing::fixture("rmdp_sarect_2s2a.json");
    CHECK_THROWS_AS(sa_to_s_rectangular(inst.sa_rect, 2), std::invalid_argument);
}

TEST_CASE("robust Bellman step with singleton sets is the plain step") {
    const Instance inst = testing::fixture("mdp_2s3a.json");
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = singleton_uncertainty(m.kernel);
    Rng rng(7);
    const Policy pi = random_policy(inst, rng);
    const ValueVector v = random_box_point(m, rng);
    const ValueVector out = robust_bellman_apply(m, u, pi, v);
    const auto p = policy_transition(m, pi);
    const auto r = policy_reward(m, pi);
    for (int s = 0; s < m.num_states; ++s)
        CHECK(out[s] == doctest::Approx(r[s] + m.gamma * dot(p[s], v)).epsilon(1e-13));
}

TEST_CASE("robust Bellman step at v = 0 returns the policy reward") {
    const Instance inst = testing::fixture("rmdp_srect_2s2a.json");
    const Mdp m = inst.nominal_mdp();
    const ValueVector out =
        robust_bellman_apply(m, inst.s_rect, *inst.policy, ValueVector(2, 0.0));
    const ValueVector r = policy_reward(m, *inst.policy);
    CHECK(linf_diff(out, r) <= 1e-13);
}

TEST_CASE("robust Bellman step picks the value-dominated candidate") {
    Mdp m;
    m.num_states = 2;
    m.num_actions = 2;
    m.gamma = 0.9;
    m.rewards = {{0.3, 0.4}, {0.1, 0.2}};
    m.kernel = {{{1.0, 0.0}, {1.0, 0.0}}, {{0.0, 1.0}, {0.0, 1.0}}};
    SRectangularSet u;
    // candidate 0 routes everything to state 1 (low target value below),
    // candidate 1 to state 2
    u.per_state = {{{{1.0, 0.0}, {1.0, 0.0}}, {{0.0, 1.0}, {0.0, 1.0}}},
                   {{{0.0, 1.0}, {0.0, 1.0}}}};
    Policy pi;
    pi.rows = {{0.5, 0.5}, {1.0, 0.0}};
    const ValueVector v{1.0, 2.0};
    const ValueVector out = robust_bellman_apply(m, u, pi, v);
    // mixed reward at s1 is 0.35; dominated backup is <(1,0), v> = 1
    CHECK(out[0] == doctest::Approx(0.35 + 0.9 * 1.0).epsilon(1e-13));
}

TEST_CASE("robust evaluation of the routing model sends state 1 to the sink") {
    const Routing r;
    const RobustEvalResult res = robust_evaluate_policy(r.m, r.u, r.pi, 1e-10);
    CHECK(res.value[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.value[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.worst_kernel[0] == 1);
    CHECK(res.worst_kernel[1] == 0);
}

TEST_CASE("robust evaluation with singleton sets equals exact evaluation") {
    GenConfig gen;
    for (int i = 0; i < 30; ++i) {
        const Instance inst = generate_instance(gen, InstanceKind::plain, 2100 + i);
        const Mdp m = inst.nominal_mdp();
        Rng rng(derive_seed(21, i));
        const Policy pi = random_policy(inst, rng);
        const RobustEvalResult res =
            robust_evaluate_policy(m, singleton_uncertainty(m.kernel), pi, 1e-10);
        CHECK(linf_diff(res.value, evaluate_policy(m, pi)) <= 1e-9);
    }
}

TEST_CASE("fixed-point and exhaustive robust evaluation agree on the showcase instance") {
    const Instance inst = testing::fixture("rmdp_srect_2s2a.json");
    const Mdp m = inst.nominal_mdp();
    const RobustEvalResult fixpt = robust_evaluate_policy(m, inst.s_rect, *inst.policy, 1e-10);
    const RobustEvalResult brute = brute_force_robust_value(m, inst.s_rect, *inst.policy);
    CHECK(linf_diff(fixpt.value, brute.value) <= 1e-8);
    CHECK(fixpt.worst_kernel == brute.worst_kernel);
}

TEST_CASE("exhaustive search handles singleton sets and the routing model") {
    const Routing r;
    const RobustEvalResult res = brute_force_robust_value(r.m, r.u, r.pi);
    CHECK(res.value[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.worst_kernel[0] == 1);
    const Instance inst = testing::fixture("mdp_2s3a.json");
    const Mdp m = inst.nominal_mdp();
    const RobustEvalResult single =
        brute_force_robust_value(m, singleton_uncertainty(m.kernel), *inst.policy);
    CHECK(linf_diff(single.value, evaluate_policy(m, *inst.policy)) <= 1e-12);
}

TEST_CASE("exhaustive search finds an elementwise-minimal combination on random sets") {
    GenConfig gen;
    for (int i = 0; i < 100; ++i) {
        const Instance inst = generate_instance(gen, InstanceKind::s_rect, 2300 + i);
        Rng rng(derive_seed(23, i));
        const Policy pi = random_policy(inst, rng);
        // throws if no elementwise-minimal combination exists
        const RobustEvalResult res =
            brute_force_robust_value(inst.nominal_mdp(), inst.s_rect, pi);
        CHECK(res.residual <= 1e-9);
    }
}

TEST_CASE("exhaustive search rejects oversized candidate products") {
    GenConfig gen;
    gen.min_states = gen.max_states = 3;
    gen.min_candidates = gen.max_candidates = 3;
    const Instance inst = generate_instance(gen, InstanceKind::s_rect, 9);
    Rng rng(9);
    CHECK_THROWS_AS(
        brute_force_robust_value(inst.nominal_mdp(), inst.s_rect, random_policy(inst, rng), 8),
        std::invalid_argument);
}

TEST_CASE("the robust operator contracts and the robust value is dominated") {
    GenConfig gen;
    for (int i = 0; i < 50; ++i) {
        const Instance inst = generate_instance(gen, InstanceKind::s_rect, 2500 + i);
        const Mdp m = inst.nominal_mdp();
        Rng rng(derive_seed(25, i));
        const Policy pi = random_policy(inst, rng);
        const ValueVector v = random_box_point(m, rng), w = random_box_point(m, rng);
        CHECK(linf_diff(robust_bellman_apply(m, inst.s_rect, pi, v),
                        robust_bellman_apply(m, inst.s_rect, pi, w)) <=
              m.gamma * linf_diff(v, w) + 1e-12);
        const ValueVector robust = robust_evaluate_policy(m, inst.s_rect, pi, 1e-10).value;
        indvec pick(m.num_states, 0);
        for (;;) {
            const ValueVector exact = evaluate_policy(detail::select_kernel(m, inst.s_rect, pick), pi);
            for (int s = 0; s < m.num_states; ++s) CHECK(robust[s] <= exact[s] + 1e-9);
            int s = m.num_states - 1;
            for (; s >= 0; --s) {
                if (++pick[s] < inst.s_rect.candidates(s)) break;
                pick[s] = 0;
            }
            if (s < 0) break;
        }
    }
}

TEST_CASE("optimal robust value of a single-policy model is its evaluation") {
    GenConfig gen;
    gen.min_actions = gen.max_actions = 1;
    const Instance inst = generate_instance(gen, InstanceKind::plain, 77);
    const Mdp m = inst.nominal_mdp();
    Policy only;
    only.rows.assign(m.num_states, {1.0});
    const RobustOptimalResult res = robust_optimal_value(m, singleton_uncertainty(m.kernel), 1e-10);
    CHECK(linf_diff(res.value, evaluate_policy(m, only)) <= 1e-9);
}

TEST_CASE("per-(state,action) optimal control with singleton rows is plain value iteration") {
    GenConfig gen;
    gen.min_candidates = gen.max_candidates = 1;
    for (int i = 0; i < 20; ++i) {
        const Instance inst = generate_instance(gen, InstanceKind::sa_rect, 2700 + i);
        const Mdp m = inst.nominal_mdp();
        const RobustOptimalResult res = robust_optimal_value(m, inst.sa_rect, 1e-10);
        CHECK(linf_diff(res.value, oracles::optimal_value_iteration(m, 1e-10)) <= 1e-8);
    }
}

TEST_CASE("no sampled policy beats the optimal robust value on the showcase instance") {
    const Instance inst = testing::fixture("rmdp_srect_2s2a.json");
    const Mdp m = inst.nominal_mdp();
    const RobustOptimalResult best = robust_optimal_value(m, inst.s_rect, 1e-9);
    Rng rng(31);
    for (int i = 0; i < 10000; ++i) {
        const ValueVector v =
            robust_evaluate_policy(m, inst.s_rect, random_policy(inst, rng), 1e-9).value;
        for (int s = 0; s < m.num_states; ++s) CHECK(best.value[s] >= v[s] - 1e-6);
    }
    // the greedy policy attains the optimum
    const ValueVector attained =
        robust_evaluate_policy(m, inst.s_rect, best.policy, 1e-10).value;
    CHECK(linf_diff(attained, best.value) <= 1e-6);
}

TEST_CASE("adding a candidate kernel never raises the robust value") {
    GenConfig gen;
    for (int i = 0; i < 50; ++i) {
        const Instance inst = generate_instance(gen, InstanceKind::s_rect, 2900 + i);
        const Mdp m = inst.nominal_mdp();
        Rng rng(derive_seed(29, i));
        const Policy pi = random_policy(inst, rng);
        const ValueVector before = robust_evaluate_policy(m, inst.s_rect, pi, 1e-10).value;
        SRectangularSet wider = inst.s_rect;
        StateKernel extra(m.num_actions);
        for (auto& row : extra) row = rng.simplex(m.num_states);
        wider.per_state[rng.uniform_int(m.num_states)].push_back(extra);
        const ValueVector after = robust_evaluate_policy(m, wider, pi, 1e-10).value;
        for (int s = 0; s < m.num_states; ++s) CHECK(after[s] <= before[s] + 1e-9);
    }
}
