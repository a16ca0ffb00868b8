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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rvg/geometry.hpp"
#include "rvg/matrix_game.hpp"
#include "rvg/mdp.hpp"
#include "rvg/rmdp.hpp"
#include "rvg/uncertainty.hpp"

namespace rvg {

/**
 * The cone geometry attached to one state and one policy row under a
 * finite per-state uncertainty set: one hyperplane per candidate kernel,
 * all passing through the common apex (r^{pi_s} / (1-gamma)) * 1.
 *
 * With residual_k(x) = <x, L_k> - r^{pi_s}, a point is inside the lower
 * cone iff every residual is <= 0, inside the upper region iff some
 * residual is >= 0, and on the conic surface iff both hold, i.e. the
 * maximum residual is zero.
 */
struct ConicRegion {
    int state = 0;
    numvec pi_s;
    std::vector<Hyperplane> hyperplanes;
    ValueVector apex;

    double max_residual(const ValueVector& x) const {
        double m = -std::numeric_limits<double>::infinity();
        for (const Hyperplane& h : hyperplanes) m = std::max(m, h.residual(x));
        return m;
    }
};

/// Sides of a conic region a point can be classified into.
struct ConicMembership {
    bool inside_minus = false;  // all residuals <= tol
    bool inside_plus = false;   // some residual >= -tol
    bool on_surface = false;    // |max residual| <= tol
    double max_residual = 0.0;
};

/**
 * Builds the conic region at state s for policy row pi_s: one hyperplane
 * per candidate kernel plus the shared apex. The apex is checked to lie on
 * every member hyperplane with residual at most 1e-10.
 */
inline ConicRegion conic_region(const Mdp& m, const SRectangularSet& u, int s, const numvec& pi_s) {
    detail::check_robust_shapes(m, u);
    require(u.candidates(s) >= 1, "conic_region: empty candidate list");
    ConicRegion region;
    region.state = s;
    region.pi_s = pi_s;
    region.hyperplanes.reserve(u.candidates(s));
    for (int k = 0; k < u.candidates(s); ++k) {
        Mdp pick = m;
        pick.kernel[s] = u.per_state[s][k];
        region.hyperplanes.push_back(Hyperplane{l_vector(pick, s, pi_s)});
    }
    const double offset = region.hyperplanes.front().lvec.offset;
    region.apex.assign(m.num_states, offset / (1.0 - m.gamma));
    for (const Hyperplane& h : region.hyperplanes)
        if (std::fabs(h.residual(region.apex)) > 1e-10)
            throw std::logic_error("conic_region: apex residual above 1e-10");
    return region;
}

/// Classifies a point against a conic region's sides at tolerance tol.
inline ConicMembership conic_membership(const ConicRegion& region, const ValueVector& x,
                                        double tol) {
    require(tol > 0.0, "conic_membership: tol must be positive");
    require(x.size() == region.apex.size(), "conic_membership: point length");
    ConicMembership cm;
    cm.max_residual = region.max_residual(x);
    cm.inside_minus = cm.max_residual <= tol;
    cm.inside_plus = cm.max_residual >= -tol;
    cm.on_surface = cm.inside_minus && cm.inside_plus;
    return cm;
}

/// Outcome of the single-value cone-intersection check.
struct ConeIntersectionReport {
    bool on_all_surfaces = false;
    bool perturbations_leave = false;
    ValueVector value;
    double worst_surface_residual = 0.0;

    bool ok() const { return on_all_surfaces && perturbations_leave; }
};

/**
 * Checks that the robust value of a policy is exactly the intersection of
 * its S conic surfaces: the value must lie on the surface of the region at
 * every state, and nudging it by +-10*tol along any axis must leave at
 * least one surface (the intersection point is unique).
 */
inline ConeIntersectionReport robust_value_at_cone_intersection(const Mdp& m,
                                                                const SRectangularSet& u,
                                                                const Policy& pi, double tol) {
    require(tol > 0.0, "robust_value_at_cone_intersection: tol must be positive");
    // Evaluate well below the check tolerance so the perturbation probe is
    // decided by geometry, not by evaluation error.
    RobustEvalResult eval = robust_evaluate_policy(m, u, pi, std::min(tol * 1e-4, 1e-10));
    ConeIntersectionReport rep;
    rep.value = eval.value;
    std::vector<ConicRegion> regions;
    regions.reserve(m.num_states);
    for (int s = 0; s < m.num_states; ++s) regions.push_back(conic_region(m, u, s, pi.rows[s]));

    rep.on_all_surfaces = true;
    for (const ConicRegion& region : regions) {
        const double r = region.max_residual(rep.value);
        rep.worst_surface_residual = std::max(rep.worst_surface_residual, std::fabs(r));
        if (std::fabs(r) > tol) rep.on_all_surfaces = false;
    }

    rep.perturbations_leave = true;
    for (int axis = 0; axis < m.num_states; ++axis)
        for (double dir : {1.0, -1.0}) {
            ValueVector probe = rep.value;
            probe[axis] += dir * 10.0 * tol;
            bool left = false;
            for (const ConicRegion& region : regions)
                if (std::fabs(region.max_residual(probe)) > tol) {
                    left = true;
                    break;
                }
            if (!left) rep.perturbations_leave = false;
        }
    return rep;
}

namespace detail {

/// Backup matrix at state s: q[a][k] = r_{s,a} + gamma <x, P^(k)_{s,a}>.
inline std::vector<numvec> backup_matrix(const Mdp& m, const SRectangularSet& u, int s,
                                         const ValueVector& x) {
    const int num_k = u.candidates(s);
    std::vector<numvec> q(m.num_actions, numvec(num_k, 0.0));
    for (int k = 0; k < num_k; ++k)
        for (int a = 0; a < m.num_actions; ++a)
            q[a][k] = m.rewards[s][a] + m.gamma * dot(u.per_state[s][k][a], x);
    return q;
}

}  // namespace detail

/**
 * Tests whether a point lies in the robust value space. Per state s the
 * attainable coordinate interval is
 *
 *   [ min_{a,k} q[a][k],  max over action mixes of min_k of the mixed backup ],
 *
 * where q is the per-state backup matrix. The lower end is the finite
 * union over deterministic actions; the upper end needs the maximin over
 * mixes because the deterministic union is only an inner bound there.
 */
inline MembershipReport robust_space_membership(const Mdp& m, const SRectangularSet& u,
                                                const ValueVector& x, double tol) {
    detail::check_robust_shapes(m, u);
    require(tol > 0.0, "robust_space_membership: tol must be positive");
    require(static_cast<int>(x.size()) == m.num_states, "robust_space_membership: point length");
    MembershipReport rep;
    rep.tol = tol;
    rep.verdict = true;
    rep.per_state.resize(m.num_states);
    for (int s = 0; s < m.num_states; ++s) {
        const auto q = detail::backup_matrix(m, u, s, x);
        StateCertificate& cert = rep.per_state[s];
        cert.state = s;
        cert.value = x[s];
        cert.lower = std::numeric_limits<double>::infinity();
        for (int a = 0; a < m.num_actions; ++a)
            for (int k = 0; k < u.candidates(s); ++k)
                if (q[a][k] < cert.lower) {
                    cert.lower = q[a][k];
                    cert.lower_action = a;
                    cert.lower_kernel = k;
                }
        MaximinResult mr = maximin_row_mix(q);
        cert.upper = mr.value;
        cert.upper_mix = std::move(mr.mix);
        cert.lower_ok = x[s] >= cert.lower - tol;
        cert.upper_ok = x[s] <= cert.upper + tol;
        rep.verdict = rep.verdict && cert.ok();
    }
    return rep;
}

/**
 * Per-state sandwich of the reachable-coordinate test at state s. Margins
 * are signed so that <= 0 means inside:
 *
 *   lower bound  margin_det  = min_a max_k (x_s - q[a][k])   (deterministic cones)
 *   exact        margin_mix  = x_s - maximin(q)              (mixes allowed)
 *   upper bound  margin_hull = max_k (x_s - max_a q[a][k])   (per-kernel action unions)
 *
 * margin_hull <= margin_mix <= margin_det always, so the three membership
 * flags form an inclusion chain.
 */
struct RegionBoundsReport {
    int state = 0;
    bool in_lower_bound = false;
    bool in_exact = false;
    bool in_upper_bound = false;
    double margin_det = 0.0;
    double margin_mix = 0.0;
    double margin_hull = 0.0;
    int det_action = -1;   // action attaining margin_det
    numvec mix;            // maximin mix attaining margin_mix
};

inline RegionBoundsReport region_bounds(const Mdp& m, const SRectangularSet& u,
                                        const ValueVector& x, int s, double tol) {
    detail::check_robust_shapes(m, u);
    require(tol > 0.0, "region_bounds: tol must be positive");
    require(static_cast<int>(x.size()) == m.num_states, "region_bounds: point length");
    require(s >= 0 && s < m.num_states, "region_bounds: state out of range");
    const auto q = detail::backup_matrix(m, u, s, x);
    const int num_k = u.candidates(s);

    RegionBoundsReport rep;
    rep.state = s;
    rep.margin_det = std::numeric_limits<double>::infinity();
    for (int a = 0; a < m.num_actions; ++a) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < num_k; ++k) worst = std::max(worst, x[s] - q[a][k]);
        if (worst < rep.margin_det) {
            rep.margin_det = worst;
            rep.det_action = a;
        }
    }
    MaximinResult mr = maximin_row_mix(q);
    rep.margin_mix = x[s] - mr.value;
    rep.mix = std::move(mr.mix);
    rep.margin_hull = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < num_k; ++k) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < m.num_actions; ++a) best = std::max(best, q[a][k]);
        rep.margin_hull = std::max(rep.margin_hull, x[s] - best);
    }

    if (rep.margin_mix > rep.margin_det + 1e-9 || rep.margin_hull > rep.margin_mix + 1e-9)
        throw std::logic_error("region_bounds: margin chain violated");
    rep.in_lower_bound = rep.margin_det <= tol;
    rep.in_exact = rep.margin_mix <= tol;
    rep.in_upper_bound = rep.margin_hull <= tol;
    return rep;
}

/// Intersection of an axis-parallel line with the robust value space.
struct AxisInterval {
    bool found = false;        // line meets the space at scan resolution
    bool contiguous = true;    // memberships along the scan form one block
    double t_lo = 0.0;         // refined segment endpoints (valid when found)
    double t_hi = 0.0;
    int blocks = 0;            // number of contiguous membership blocks seen
};

/**
 * Scans x(t) = base + t * e_axis over [t_min, t_max] with `steps` samples,
 * testing robust-space membership at each, and refines the endpoints of
 * the member block by bisection to width 1e-6. The intersection should be
 * a single segment (possibly one point); a non-contiguous pattern at scan
 * resolution is reported, not thrown.
 */
inline AxisInterval axis_line_interval(const Mdp& m, const SRectangularSet& u,
                                       const ValueVector& base, int axis, double t_min,
                                       double t_max, int steps, double tol = 1e-9) {
    require(steps >= 2, "axis_line_interval: need at least 2 scan steps");
    require(axis >= 0 && axis < m.num_states, "axis_line_interval: axis out of range");
    const auto member = [&](double t) {
        ValueVector x = base;
        x[axis] += t;
        return robust_space_membership(m, u, x, tol).verdict;
    };

    AxisInterval out;
    const double dt = (t_max - t_min) / (steps - 1);
    std::vector<char> in(steps);
    for (int i = 0; i < steps; ++i) in[i] = member(t_min + i * dt) ? 1 : 0;

    int first = -1, last = -1;
    for (int i = 0; i < steps; ++i) {
        if (!in[i]) continue;
        if (first < 0) first = i;
        last = i;
    }
    if (first < 0) return out;
    out.found = true;
    for (int i = 1; i < steps; ++i)
        if (in[i] && !in[i - 1]) ++out.blocks;
    if (in[0]) ++out.blocks;
    out.contiguous = out.blocks == 1;

    const auto bisect = [&](double t_out, double t_in) {
        // invariant: member(t_in) true, member(t_out) false
        while (std::fabs(t_in - t_out) > 1e-6) {
            const double mid = 0.5 * (t_in + t_out);
            if (member(mid)) t_in = mid;
            else t_out = mid;
        }
        return t_in;
    };
    out.t_lo = first == 0 ? t_min : bisect(t_min + (first - 1) * dt, t_min + first * dt);
    out.t_hi = last == steps - 1 ? t_max : bisect(t_min + (last + 1) * dt, t_min + last * dt);
    return out;
}

}  // namespace rvg
