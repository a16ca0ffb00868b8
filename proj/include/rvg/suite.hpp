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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rvg/generator.hpp"
#include "rvg/geometry.hpp"
#include "rvg/instance_io.hpp"
#include "rvg/parallel.hpp"
#include "rvg/reduction.hpp"
#include "rvg/rmdp.hpp"
#include "rvg/robust_geometry.hpp"

namespace rvg {

/**
 * Configuration of the randomized verification suite. Sizes default to
 * desk scale so every exhaustive oracle stays within its cap and the full
 * run finishes in seconds.
 */
struct SuiteConfig {
    std::uint64_t seed = 0;
    int num_instances = 200;
    GenConfig gen;
    double tol_membership = 1e-9;
    double tol_robust = 1e-8;
    double tol_apex = 1e-10;
    int policies_per_instance = 20;
    int points_per_instance = 40;
    int axis_lines_per_instance = 4;
    int axis_scan_steps = 2001;
    std::vector<std::string> enabled;  // empty = every check
};

/// Aggregate outcome of one check over all instances.
struct CheckReport {
    std::string id;
    std::string claim;
    int instances = 0;
    int failures = 0;
    double worst_residual = 0.0;
    std::vector<json> failing;  // replayable failing instances (capped)
};

struct SuiteReport {
    std::uint64_t seed = 0;
    int num_instances = 0;
    bool all_pass = true;
    std::vector<CheckReport> checks;
};

namespace suite_detail {

/// Result of one check on one instance: the measured residual and the
/// bound it was compared against.
struct Outcome {
    bool pass = true;
    double residual = 0.0;

    void fold(bool ok, double r) {
        pass = pass && ok;
        residual = std::max(residual, r);
    }
};

struct CheckDef {
    std::string id;
    std::string claim;
    InstanceKind kind = InstanceKind::plain;
    std::function<Outcome(const SuiteConfig&, const Instance&, std::uint64_t)> run;
};

inline ValueVector box_point(const Mdp& m, Rng& rng) { return random_box_point(m, rng); }

inline Policy draw_policy(const Instance& inst, Rng& rng) { return random_policy(inst, rng); }

// ---------------------------------------------------------------------------
// Plain value-space checks
// ---------------------------------------------------------------------------

inline Outcome check_bellman_fixed_point(const SuiteConfig& cfg, const Instance& inst,
                                         std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const Policy pi = draw_policy(inst, rng);
        const double r = bellman_residual(m, pi, evaluate_policy(m, pi));
        out.fold(r <= 1e-10, r);
    }
    return out;
}

inline Outcome check_reward_monotonicity(const SuiteConfig& cfg, const Instance& inst,
                                         std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const Policy pi = draw_policy(inst, rng);
        const ValueVector v = evaluate_policy(m, pi);
        const int s = rng.uniform_int(m.num_states);
        int a = rng.uniform_int(m.num_actions);
        for (int t = 0; t < m.num_actions && pi.rows[s][a] <= 1e-6; ++t)
            a = (a + 1) % m.num_actions;
        Mdp bumped = m;
        bumped.rewards[s][a] += 0.5;
        const ValueVector w = evaluate_policy(bumped, pi);
        double drop = 0.0;
        for (int t = 0; t < m.num_states; ++t) drop = std::max(drop, v[t] - w[t]);
        out.fold(drop <= 1e-12, drop);
    }
    return out;
}

inline Outcome check_transition_rows_stochastic(const SuiteConfig& cfg, const Instance& inst,
                                                std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const auto p = policy_transition(m, draw_policy(inst, rng));
        for (const numvec& row : p) {
            const double dev = stochastic_deviation(row);
            out.fold(dev <= 1e-12, dev);
        }
    }
    return out;
}

inline Outcome check_hyperplane_intersection(const SuiteConfig& cfg, const Instance& inst,
                                             std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const Policy pi = draw_policy(inst, rng);
        const double d = linf_diff(intersect_policy_hyperplanes(m, pi), evaluate_policy(m, pi));
        out.fold(d <= 1e-9, d);
    }
    return out;
}

inline Outcome check_lvector_row_sum(const SuiteConfig& cfg, const Instance& inst,
                                     std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const LVector lv = l_vector(m, s, rng.simplex(m.num_actions));
        double sum = 0.0;
        for (double v : lv.normal) sum += v;
        const double err = std::fabs(sum - (1.0 - m.gamma));
        out.fold(err <= 1e-12, err);
    }
    return out;
}

inline Outcome check_value_membership(const SuiteConfig& cfg, const Instance& inst,
                                      std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const ValueVector v = evaluate_policy(m, draw_policy(inst, rng));
        const MembershipReport rep = value_space_membership(m, v, cfg.tol_membership);
        double worst = 0.0;
        for (const auto& c : rep.per_state)
            worst = std::max(worst, std::max(c.lower - c.value, c.value - c.upper));
        out.fold(rep.verdict, worst);
    }
    return out;
}

inline Outcome check_nonmember_separation(const SuiteConfig& cfg, const Instance& inst,
                                          std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    std::vector<ValueVector> samples;
    samples.reserve(cfg.policies_per_instance * 5);
    for (int i = 0; i < cfg.policies_per_instance * 5; ++i)
        samples.push_back(evaluate_policy(m, draw_policy(inst, rng)));
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const ValueVector x = box_point(m, rng);
        if (value_space_membership(m, x, cfg.tol_membership).verdict) continue;
        double nearest = std::numeric_limits<double>::infinity();
        for (const ValueVector& v : samples) nearest = std::min(nearest, linf_diff(x, v));
        out.fold(nearest >= 1e-6, nearest >= 1e-6 ? 0.0 : 1e-6 - nearest);
    }
    return out;
}

inline Outcome check_halfspace_mixing(const SuiteConfig& cfg, const Instance& inst,
                                      std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const numvec rowp = rng.simplex(m.num_actions);
        const numvec rowq = rng.simplex(m.num_actions);
        const Hyperplane hp{l_vector(m, s, rowp)};
        const Hyperplane hq{l_vector(m, s, rowq)};
        const ValueVector x = box_point(m, rng);
        const double alpha = hp.residual(x);
        const double beta = -hq.residual(x);
        if (alpha < 0.0 || beta < 0.0) continue;  // x not in the plus/minus half-spaces
        numvec mix(m.num_actions, 0.0);
        if (alpha + beta == 0.0) {
            mix = rowp;
        } else {
            for (int a = 0; a < m.num_actions; ++a)
                mix[a] = (beta * rowp[a] + alpha * rowq[a]) / (alpha + beta);
        }
        const double r = std::fabs(Hyperplane{l_vector(m, s, mix)}.residual(x));
        out.fold(r <= 1e-9, r);
    }
    return out;
}

inline Outcome check_halfspace_det_union(const SuiteConfig& cfg, const Instance& inst,
                                         std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const numvec row = rng.simplex(m.num_actions);
        const ValueVector x = box_point(m, rng);
        const double rmix = Hyperplane{l_vector(m, s, row)}.residual(x);
        double rmin = std::numeric_limits<double>::infinity();
        double rmax = -rmin;
        for (int a = 0; a < m.num_actions; ++a) {
            const double r = Hyperplane{l_vector(m, s, deterministic_row(m.num_actions, a))}.residual(x);
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
        const double err = std::max(rmix - rmax, rmin - rmix);
        out.fold(err <= 1e-12, std::max(err, 0.0));
    }
    return out;
}

inline Outcome check_agreement_slice(const SuiteConfig& cfg, const Instance& inst,
                                     std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    std::map<int, numvec> fixed;
    for (int s = 0; s < m.num_states; ++s)
        if (rng.uniform() < 0.5) fixed[s] = rng.simplex(m.num_actions);
    const auto points =
        agreement_slice_sample(m, fixed, cfg.policies_per_instance, rng.next_u64());
    Outcome out;
    for (const ValueVector& v : points) {
        for (const auto& [s, row] : fixed) {
            const double r = std::fabs(Hyperplane{l_vector(m, s, row)}.residual(v));
            out.fold(r <= 1e-9, r);
        }
        out.fold(value_space_membership(m, v, cfg.tol_membership).verdict, 0.0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Robust evaluation checks
// ---------------------------------------------------------------------------

inline Outcome check_contraction(const SuiteConfig& cfg, const Instance& inst,
                                 std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const Policy pi = draw_policy(inst, rng);
        const ValueVector v = box_point(m, rng), w = box_point(m, rng);
        const double lhs = linf_diff(robust_bellman_apply(m, u, pi, v),
                                     robust_bellman_apply(m, u, pi, w));
        const double excess = lhs - m.gamma * linf_diff(v, w);
        out.fold(excess <= 1e-12, std::max(excess, 0.0));
    }
    return out;
}

inline Outcome check_oracle_equivalence(const SuiteConfig& cfg, const Instance& inst,
                                        std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < std::max(1, cfg.policies_per_instance / 4); ++i) {
        const Policy pi = draw_policy(inst, rng);
        const RobustEvalResult fixpt = robust_evaluate_policy(m, u, pi, 1e-10);
        const RobustEvalResult brute = brute_force_robust_value(m, u, pi);
        const double d = linf_diff(fixpt.value, brute.value);
        out.fold(d <= cfg.tol_robust, d);
    }
    return out;
}

inline Outcome check_value_dominance(const SuiteConfig& cfg, const Instance& inst,
                                     std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    const Policy pi = draw_policy(inst, rng);
    const ValueVector robust = robust_evaluate_policy(m, u, pi, 1e-10).value;
    indvec pick(m.num_states, 0);
    for (;;) {
        const ValueVector v = evaluate_policy(detail::select_kernel(m, u, pick), pi);
        double excess = 0.0;
        for (int s = 0; s < m.num_states; ++s) excess = std::max(excess, robust[s] - v[s]);
        out.fold(excess <= 1e-9, excess);
        int s = m.num_states - 1;
        for (; s >= 0; --s) {
            if (++pick[s] < u.candidates(s)) break;
            pick[s] = 0;
        }
        if (s < 0) break;
    }
    return out;
}

inline Outcome check_uncertainty_monotonicity(const SuiteConfig& cfg, const Instance& inst,
                                              std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    const Policy pi = draw_policy(inst, rng);
    const ValueVector before = robust_evaluate_policy(m, u, pi, 1e-10).value;
    SRectangularSet wider = u;
    const int s = rng.uniform_int(m.num_states);
    StateKernel extra(m.num_actions);
    for (auto& row : extra) row = rng.simplex(m.num_states);
    wider.per_state[s].push_back(std::move(extra));
    const ValueVector after = robust_evaluate_policy(m, wider, pi, 1e-10).value;
    double rise = 0.0;
    for (int t = 0; t < m.num_states; ++t) rise = std::max(rise, after[t] - before[t]);
    Outcome out;
    out.fold(rise <= 1e-9, rise);
    return out;
}

inline Outcome check_maximin_beats_pure(const SuiteConfig& cfg, const Instance& inst,
                                        std::uint64_t seed) {
    Rng rng(seed);
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int rows = 2 + rng.uniform_int(3), cols = 1 + rng.uniform_int(4);
        std::vector<numvec> payoff(rows, numvec(cols, 0.0));
        for (auto& row : payoff)
            for (double& v : row) v = rng.uniform(-1.0, 1.0);
        double pure = -std::numeric_limits<double>::infinity();
        for (const auto& row : payoff) {
            double worst = row[0];
            for (double v : row) worst = std::min(worst, v);
            pure = std::max(pure, worst);
        }
        const double gap = pure - maximin_row_mix(payoff).value;
        out.fold(gap <= 1e-12, std::max(gap, 0.0));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conic-surface checks
// ---------------------------------------------------------------------------

inline Outcome check_surface_containment(const SuiteConfig& cfg, const Instance& inst,
                                         std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const Policy pi = draw_policy(inst, rng);
        const ValueVector v = robust_evaluate_policy(m, u, pi, cfg.tol_robust * 1e-3).value;
        for (int s = 0; s < m.num_states; ++s) {
            const double r = conic_region(m, u, s, pi.rows[s]).max_residual(v);
            out.fold(std::fabs(r) <= cfg.tol_robust, std::fabs(r));
        }
    }
    return out;
}

inline Outcome check_apex_incidence(const SuiteConfig& cfg, const Instance& inst,
                                    std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const ConicRegion region = conic_region(m, u, s, rng.simplex(m.num_actions));
        double worst = 0.0;
        for (const Hyperplane& h : region.hyperplanes)
            worst = std::max(worst, std::fabs(h.residual(region.apex)));
        out.fold(worst <= cfg.tol_apex, worst);
    }
    return out;
}

inline Outcome check_cone_intersection(const SuiteConfig& cfg, const Instance& inst,
                                       std::uint64_t seed) {
    Rng rng(seed);
    Outcome out;
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    for (int i = 0; i < std::max(1, cfg.policies_per_instance / 4); ++i) {
        const Policy pi = draw_policy(inst, rng);
        const ConeIntersectionReport rep = robust_value_at_cone_intersection(m, u, pi, cfg.tol_robust);
        out.fold(rep.ok(), rep.worst_surface_residual);
    }
    return out;
}

inline Outcome check_robust_membership(const SuiteConfig& cfg, const Instance& inst,
                                       std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const Policy pi = draw_policy(inst, rng);
        const ValueVector v = robust_evaluate_policy(m, u, pi, cfg.tol_robust * 1e-3).value;
        const MembershipReport rep = robust_space_membership(m, u, v, cfg.tol_robust);
        double worst = 0.0;
        for (const auto& c : rep.per_state)
            worst = std::max(worst, std::max(c.lower - c.value, c.value - c.upper));
        out.fold(rep.verdict, worst);
    }
    return out;
}

inline Outcome check_plus_side_union(const SuiteConfig& cfg, const Instance& inst,
                                     std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const numvec row = rng.simplex(m.num_actions);
        const ValueVector x = box_point(m, rng);
        const ConicRegion mixed = conic_region(m, u, s, row);
        double det_max = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < m.num_actions; ++a)
            det_max = std::max(det_max,
                               conic_region(m, u, s, deterministic_row(m.num_actions, a)).max_residual(x));
        // Mixing actions cannot push the largest residual above the best
        // deterministic action's.
        const double excess = mixed.max_residual(x) - det_max;
        out.fold(excess <= 1e-12, std::max(excess, 0.0));
        // A point in the mixed upper region must be in some deterministic one.
        if (mixed.max_residual(x) >= 0.0) out.fold(det_max >= -1e-12, -det_max);
    }
    return out;
}

inline Outcome check_minus_side_inner_bound(const SuiteConfig& cfg, const Instance& inst,
                                            std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const ValueVector x = box_point(m, rng);
        const RegionBoundsReport rb = region_bounds(m, u, x, s, cfg.tol_membership);
        const double gap = rb.margin_mix - rb.margin_det;  // mix union contains det union
        out.fold(gap <= 1e-9, std::max(gap, 0.0));
    }
    return out;
}

inline Outcome check_minus_side_equality_sa(const SuiteConfig& cfg, const Instance& inst,
                                            std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const ValueVector x = box_point(m, rng);
        const RegionBoundsReport rb = region_bounds(m, u, x, s, cfg.tol_membership);
        if (std::fabs(rb.margin_det) <= 1e-6 || std::fabs(rb.margin_mix) <= 1e-6) continue;
        const bool agree = (rb.margin_det <= 0.0) == (rb.margin_mix <= 0.0);
        out.fold(agree, agree ? 0.0 : std::fabs(rb.margin_det - rb.margin_mix));
    }
    return out;
}

inline Outcome check_region_bounds_chain(const SuiteConfig& cfg, const Instance& inst,
                                         std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const RegionBoundsReport rb = region_bounds(m, u, box_point(m, rng), s, cfg.tol_membership);
        const double break1 = rb.margin_mix - rb.margin_det;
        const double break2 = rb.margin_hull - rb.margin_mix;
        out.fold(break1 <= 1e-9 && break2 <= 1e-9, std::max({break1, break2, 0.0}));
        out.fold(!rb.in_lower_bound || rb.in_exact, 0.0);
        out.fold(!rb.in_exact || rb.in_upper_bound, 0.0);
    }
    return out;
}

inline Outcome check_surface_mixing(const SuiteConfig& cfg, const Instance& inst,
                                    std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const numvec rowp = rng.simplex(m.num_actions);
        const numvec rowq = rng.simplex(m.num_actions);
        const ConicRegion up = conic_region(m, u, s, rowp);
        const ConicRegion dn = conic_region(m, u, s, rowq);
        const ValueVector x = box_point(m, rng);
        if (up.max_residual(x) < 0.0 || dn.max_residual(x) > 0.0) continue;
        // Blend the two rows so that x lands on the blended conic surface:
        // the blend weight is the largest alpha/(alpha+beta) over candidate
        // kernels with alpha >= 0 (alpha the plus-side residual, beta the
        // minus-side slack), which zeroes the tightest kernel's residual
        // and keeps every other one nonpositive.
        const int num_k = static_cast<int>(up.hyperplanes.size());
        double lambda = 0.0;
        bool on_dn_surface = false;
        for (int k = 0; k < num_k; ++k) {
            const double alpha = up.hyperplanes[k].residual(x);
            const double beta = -dn.hyperplanes[k].residual(x);
            if (beta <= 0.0) {
                on_dn_surface = true;
                break;
            }
            if (alpha >= 0.0) lambda = std::max(lambda, alpha / (alpha + beta));
        }
        numvec blend(m.num_actions, 0.0);
        for (int a = 0; a < m.num_actions; ++a)
            blend[a] = on_dn_surface ? rowq[a] : (1.0 - lambda) * rowp[a] + lambda * rowq[a];
        const double r = conic_region(m, u, s, blend).max_residual(x);
        out.fold(std::fabs(r) <= cfg.tol_robust, std::fabs(r));
    }
    return out;
}

inline Outcome check_axis_segments(const SuiteConfig& cfg, const Instance& inst,
                                   std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    const auto [lo, hi] = value_bounding_box(m);
    Outcome out;
    for (int i = 0; i < cfg.axis_lines_per_instance; ++i) {
        ValueVector base = i % 2 == 0
                               ? robust_evaluate_policy(m, u, draw_policy(inst, rng), 1e-10).value
                               : box_point(m, rng);
        const int axis = rng.uniform_int(m.num_states);
        const AxisInterval ai = axis_line_interval(m, u, base, axis, lo - base[axis],
                                                   hi - base[axis], cfg.axis_scan_steps,
                                                   cfg.tol_membership);
        out.fold(!ai.found || ai.contiguous, ai.contiguous ? 0.0 : ai.blocks);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Active-subset checks
// ---------------------------------------------------------------------------

/// Appends convex combinations of existing candidates; returns the number
/// of injected kernels per state.
inline indvec inject_combinations(SRectangularSet& u, Rng& rng) {
    indvec injected(u.num_states(), 0);
    for (int s = 0; s < u.num_states(); ++s) {
        const int n = u.candidates(s);
        if (n < 2) continue;
        const int extra = 1 + rng.uniform_int(2);
        for (int e = 0; e < extra; ++e) {
            int i = rng.uniform_int(n);
            int j = rng.uniform_int(n);
            while (j == i) j = rng.uniform_int(n);
            const double w = rng.uniform(0.2, 0.8);
            StateKernel mix = u.per_state[s][i];
            for (std::size_t a = 0; a < mix.size(); ++a)
                for (std::size_t t = 0; t < mix[a].size(); ++t)
                    mix[a][t] = w * mix[a][t] + (1.0 - w) * u.per_state[s][j][a][t];
            u.per_state[s].push_back(std::move(mix));
            ++injected[s];
        }
    }
    return injected;
}

inline Outcome check_extreme_point_reduction(const SuiteConfig& cfg, const Instance& inst,
                                             std::uint64_t seed) {
    (void)cfg;
    Rng rng(seed);
    SRectangularSet u = inst.uncertainty();
    std::vector<int> original_count(u.num_states());
    for (int s = 0; s < u.num_states(); ++s) original_count[s] = u.candidates(s);
    const indvec injected = inject_combinations(u, rng);
    const auto [reduced, report] = reduce_uncertainty(u);
    Outcome out;
    for (int s = 0; s < u.num_states(); ++s) {
        // every injected kernel must be removed, every original kept
        for (const auto& cert : report.per_state[s].removed) {
            out.fold(cert.index >= original_count[s], 1.0 * (cert.index < original_count[s]));
            out.fold(cert.error <= 1e-9, cert.error);
        }
        out.fold(static_cast<int>(report.per_state[s].kept.size()) == original_count[s],
                 std::fabs(static_cast<int>(report.per_state[s].kept.size()) - original_count[s]));
    }
    return out;
}

inline Outcome check_reduction_value_preserved(const SuiteConfig& cfg, const Instance& inst,
                                               std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    SRectangularSet u = inst.uncertainty();
    inject_combinations(u, rng);
    const SRectangularSet reduced = reduce_uncertainty(u).first;
    Outcome out;
    for (int i = 0; i < cfg.policies_per_instance; ++i) {
        const Policy pi = draw_policy(inst, rng);
        const double d = linf_diff(robust_evaluate_policy(m, u, pi, 1e-10).value,
                                   robust_evaluate_policy(m, reduced, pi, 1e-10).value);
        out.fold(d <= cfg.tol_robust, d);
    }
    return out;
}

inline Outcome check_reduction_membership_preserved(const SuiteConfig& cfg, const Instance& inst,
                                                    std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    SRectangularSet u = inst.uncertainty();
    inject_combinations(u, rng);
    const SRectangularSet reduced = reduce_uncertainty(u).first;
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const ValueVector x = box_point(m, rng);
        const MembershipReport full = robust_space_membership(m, u, x, cfg.tol_membership);
        const MembershipReport slim = robust_space_membership(m, reduced, x, cfg.tol_membership);
        bool boundary = false;
        for (int s = 0; s < m.num_states; ++s) {
            const auto& cf = full.per_state[s];
            if (std::fabs(cf.value - cf.lower) <= 1e-6 || std::fabs(cf.value - cf.upper) <= 1e-6)
                boundary = true;
        }
        if (boundary) continue;
        out.fold(full.verdict == slim.verdict, full.verdict == slim.verdict ? 0.0 : 1.0);
    }
    return out;
}

inline Outcome check_polar_cone_reduction(const SuiteConfig& cfg, const Instance& inst,
                                          std::uint64_t seed) {
    Rng rng(seed);
    const Mdp m = inst.nominal_mdp();
    SRectangularSet u = inst.uncertainty();
    inject_combinations(u, rng);
    const SRectangularSet reduced = reduce_uncertainty(u).first;
    Outcome out;
    for (int i = 0; i < cfg.points_per_instance; ++i) {
        const int s = rng.uniform_int(m.num_states);
        const numvec row = rng.simplex(m.num_actions);
        const ValueVector x = box_point(m, rng);
        const double full = conic_region(m, u, s, row).max_residual(x);
        const double slim = conic_region(m, reduced, s, row).max_residual(x);
        // dropping non-extreme kernels must not change the supporting residual
        const double err = std::max(slim - full, full - slim - 1e-9);
        out.fold(err <= 1e-9, std::max(err, 0.0));
    }
    return out;
}

inline Outcome check_reduction_idempotent(const SuiteConfig& cfg, const Instance& inst,
                                          std::uint64_t seed) {
    (void)cfg;
    Rng rng(seed);
    SRectangularSet u = inst.uncertainty();
    inject_combinations(u, rng);
    const SRectangularSet once = reduce_uncertainty(u).first;
    const auto [twice, report] = reduce_uncertainty(once);
    Outcome out;
    out.fold(report.total_removed() == 0, report.total_removed());
    for (int s = 0; s < once.num_states(); ++s)
        out.fold(twice.candidates(s) == once.candidates(s), 0.0);
    return out;
}

inline Outcome check_always_fails(const SuiteConfig&, const Instance&, std::uint64_t) {
    Outcome out;
    out.fold(false, 1.0);
    return out;
}

inline std::vector<CheckDef> all_checks() {
    using K = InstanceKind;
    return {
        {"mdp.bellman-fixed-point", "policy evaluation returns the Bellman fixed point", K::plain,
         check_bellman_fixed_point},
        {"mdp.reward-monotonicity", "raising a used reward never lowers any value", K::plain,
         check_reward_monotonicity},
        {"mdp.transition-rows-stochastic", "policy-mixed transition rows stay stochastic",
         K::plain, check_transition_rows_stochastic},
        {"geometry.hyperplane-intersection", "stacked state hyperplanes intersect at the value",
         K::plain, check_hyperplane_intersection},
        {"geometry.lvector-row-sum", "every hyperplane normal sums to 1 - gamma", K::plain,
         check_lvector_row_sum},
        {"geometry.value-membership", "sampled values satisfy the per-state backup interval test",
         K::plain, check_value_membership},
        {"geometry.nonmember-separation", "points rejected by the test are far from all samples",
         K::plain, check_nonmember_separation},
        {"geometry.halfspace-mixing", "a residual-weighted blend of two rows lands on its hyperplane",
         K::plain, check_halfspace_mixing},
        {"geometry.halfspace-det-union", "mixed-row half-spaces are unions of per-action ones",
         K::plain, check_halfspace_det_union},
        {"geometry.agreement-slice", "values of partially pinned policies stay on the pinned hyperplanes",
         K::plain, check_agreement_slice},
        {"rmdp.contraction", "the robust evaluation operator is a gamma-contraction", K::s_rect,
         check_contraction},
        {"rmdp.oracle-equivalence", "fixed-point and exhaustive robust evaluation agree", K::s_rect,
         check_oracle_equivalence},
        {"rmdp.value-dominance", "the robust value is below every candidate model's value",
         K::s_rect, check_value_dominance},
        {"rmdp.uncertainty-monotonicity", "adding a candidate kernel never raises the robust value",
         K::s_rect, check_uncertainty_monotonicity},
        {"rmdp.maximin-beats-pure", "the maximin mix is at least as good as every pure row",
         K::plain, check_maximin_beats_pure},
        {"cones.surface-containment", "robust values sit on the conic surface of every agreeing state",
         K::s_rect, check_surface_containment},
        {"cones.apex-incidence", "all candidate hyperplanes pass through the common apex",
         K::s_rect, check_apex_incidence},
        {"cones.intersection-unique", "the robust value is the unique point on all its conic surfaces",
         K::s_rect, check_cone_intersection},
        {"cones.robust-membership", "robust values satisfy the robust-space membership test",
         K::s_rect, check_robust_membership},
        {"cones.plus-side-union", "the mixed upper conic regions equal the per-action union",
         K::s_rect, check_plus_side_union},
        {"cones.minus-side-inner-bound", "per-action lower cones sit inside the mixed-lower union",
         K::s_rect, check_minus_side_inner_bound},
        {"cones.minus-side-equality-sa", "per-(state,action) sets close the lower-cone gap",
         K::sa_rect, check_minus_side_equality_sa},
        {"cones.region-bounds-chain", "the lower-bound / exact / upper-bound regions are nested",
         K::s_rect, check_region_bounds_chain},
        {"cones.surface-mixing", "the residual-ratio blend of two rows lands on its conic surface",
         K::s_rect, check_surface_mixing},
        {"cones.axis-segments", "axis-parallel lines meet the robust value space in one segment",
         K::s_rect, check_axis_segments},
        {"reduction.extreme-points", "injected convex combinations are removed with certificates",
         K::s_rect, check_extreme_point_reduction},
        {"reduction.value-preserved", "dropping non-extreme kernels preserves robust values",
         K::s_rect, check_reduction_value_preserved},
        {"reduction.membership-preserved", "dropping non-extreme kernels preserves membership verdicts",
         K::s_rect, check_reduction_membership_preserved},
        {"reduction.polar-cone", "lower-cone residuals agree between full and reduced sets",
         K::s_rect, check_polar_cone_reduction},
        {"reduction.idempotent", "reducing a reduced set keeps everything", K::s_rect,
         check_reduction_idempotent},
    };
}

}  // namespace suite_detail

/**
 * Runs the verification suite: every enabled check on cfg.num_instances
 * freshly generated instances. Instances are processed in parallel with
 * per-index derived seeds and reduced in index order, so the report is a
 * pure function of the configuration.
 */
inline SuiteReport run_suite(const SuiteConfig& cfg) {
    SuiteReport report;
    report.seed = cfg.seed;
    report.num_instances = cfg.num_instances;
    if (cfg.num_instances <= 0) return report;

    std::vector<suite_detail::CheckDef> checks;
    for (auto& def : suite_detail::all_checks()) {
        if (cfg.enabled.empty()) {
            checks.push_back(std::move(def));
            continue;
        }
        for (const auto& want : cfg.enabled)
            if (def.id == want || def.id.rfind(want + ".", 0) == 0) {
                checks.push_back(std::move(def));
                break;
            }
    }
    if (std::find(cfg.enabled.begin(), cfg.enabled.end(), "selftest-fail") != cfg.enabled.end())
        checks.push_back({"selftest.expected-failure",
                          "canary that always fails; exercises the failure path",
                          InstanceKind::plain, suite_detail::check_always_fails});

    for (std::size_t ci = 0; ci < checks.size(); ++ci) {
        const auto& def = checks[ci];
        CheckReport cr;
        cr.id = def.id;
        cr.claim = def.claim;
        cr.instances = cfg.num_instances;
        std::vector<suite_detail::Outcome> outcomes(cfg.num_instances);
        std::vector<Instance> instances(cfg.num_instances);
        parallel_for(cfg.num_instances, [&](int i) {
            const std::uint64_t inst_seed = derive_seed(cfg.seed, ci * 1000003ull + i);
            instances[i] = generate_instance(cfg.gen, def.kind, inst_seed);
            outcomes[i] = def.run(cfg, instances[i], derive_seed(inst_seed, 1));
        });
        for (int i = 0; i < cfg.num_instances; ++i) {
            cr.worst_residual = std::max(cr.worst_residual, outcomes[i].residual);
            if (!outcomes[i].pass) {
                ++cr.failures;
                if (cr.failing.size() < 3) {
                    json f;
                    f["index"] = i;
                    f["residual"] = outcomes[i].residual;
                    f["instance"] = to_json(instances[i]);
                    cr.failing.push_back(std::move(f));
                }
            }
        }
        report.all_pass = report.all_pass && cr.failures == 0;
        report.checks.push_back(std::move(cr));
    }
    return report;
}

inline json to_json(const SuiteReport& report) {
    json doc;
    doc["seed"] = report.seed;
    doc["num_instances"] = report.num_instances;
    doc["all_pass"] = report.all_pass;
    doc["checks"] = json::array();
    for (const auto& c : report.checks) {
        json jc;
        jc["id"] = c.id;
        jc["claim"] = c.claim;
        jc["instances"] = c.instances;
        jc["failures"] = c.failures;
        jc["worst_residual"] = c.worst_residual;
        jc["failing"] = c.failing;
        doc["checks"].push_back(std::move(jc));
    }
    return doc;
}

}  // namespace rvg
