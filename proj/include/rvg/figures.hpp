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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "rvg/generator.hpp"
#include "rvg/geometry.hpp"
#include "rvg/instance_io.hpp"
#include "rvg/robust_geometry.hpp"

namespace rvg {

/// Files written by one figure emission, paths relative to the output dir.
struct FigureFiles {
    std::vector<std::string> files;
    int num_points = 0;
};

namespace fig_detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// A drawable primitive: a segment, a point marker, or a ray clipped to
/// the plot box. `kind` names what the primitive depicts.
struct Primitive {
    std::string kind;
    int state = -1;
    int index = -1;
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
};

/// Clips the line <x, normal> = offset to the axis-aligned box; returns
/// false when the line misses the box.
inline bool clip_line_to_box(const numvec& normal, double offset, double lo, double hi,
                             double& x1, double& y1, double& x2, double& y2) {
    std::vector<std::pair<double, double>> pts;
    const auto push = [&](double x, double y) {
        for (const auto& p : pts)
            if (std::fabs(p.first - x) < 1e-12 && std::fabs(p.second - y) < 1e-12) return;
        if (x >= lo - 1e-9 && x <= hi + 1e-9 && y >= lo - 1e-9 && y <= hi + 1e-9)
            pts.emplace_back(x, y);
    };
    // intersect with the four box edges
    if (std::fabs(normal[1]) > 1e-15) {
        push(lo, (offset - normal[0] * lo) / normal[1]);
        push(hi, (offset - normal[0] * hi) / normal[1]);
    }
    if (std::fabs(normal[0]) > 1e-15) {
        push((offset - normal[1] * lo) / normal[0], lo);
        push((offset - normal[1] * hi) / normal[0], hi);
    }
    if (pts.size() < 2) return false;
    x1 = pts[0].first;
    y1 = pts[0].second;
    x2 = pts[1].first;
    y2 = pts[1].second;
    return true;
}

/// The two boundary rays of a planar lower cone: for each hyperplane, the
/// part of it where every other hyperplane's residual is <= 0, emitted as
/// a segment from the apex to the box boundary.
inline std::vector<Primitive> cone_boundary(const ConicRegion& region, double lo, double hi) {
    std::vector<Primitive> out;
    const double apex_x = region.apex[0], apex_y = region.apex[1];
    for (std::size_t k = 0; k < region.hyperplanes.size(); ++k) {
        const numvec& n = region.hyperplanes[k].lvec.normal;
        // direction along the hyperplane
        const double dx = -n[1], dy = n[0];
        for (double sign : {1.0, -1.0}) {
            // walk from the apex; keep the ray only if it stays inside every
            // other half-space
            const double px = apex_x + sign * dx, py = apex_y + sign * dy;
            bool inside = true;
            for (std::size_t j = 0; j < region.hyperplanes.size(); ++j) {
                if (j == k) continue;
                if (region.hyperplanes[j].residual({px, py}) > 1e-12) inside = false;
            }
            if (!inside) continue;
            // clip the ray to the box
            double t_max = std::numeric_limits<double>::infinity();
            const auto clip = [&](double p, double d) {
                if (d > 1e-15) t_max = std::min(t_max, (hi - p) / d);
                else if (d < -1e-15) t_max = std::min(t_max, (lo - p) / d);
            };
            clip(apex_x, sign * dx);
            clip(apex_y, sign * dy);
            if (!(t_max > 0.0) || !std::isfinite(t_max)) continue;
            Primitive pr;
            pr.kind = "cone_ray";
            pr.state = region.state;
            pr.index = static_cast<int>(k);
            pr.x1 = apex_x;
            pr.y1 = apex_y;
            pr.x2 = apex_x + sign * dx * t_max;
            pr.y2 = apex_y + sign * dy * t_max;
            out.push_back(pr);
        }
    }
    Primitive apex;
    apex.kind = "apex";
    apex.state = region.state;
    apex.x1 = apex.x2 = apex_x;
    apex.y1 = apex.y2 = apex_y;
    out.push_back(apex);
    return out;
}

inline void write_points_csv(const std::string& path,
                             const std::vector<ValueVector>& points,
                             const std::vector<long>& ids) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "V(s1),V(s2),policy_id\n";
    for (std::size_t i = 0; i < points.size(); ++i)
        out << fmt(points[i][0]) << "," << fmt(points[i][1]) << "," << ids[i] << "\n";
}

inline void write_lines_csv(const std::string& path, const std::vector<Primitive>& prims) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "kind,state,index,x1,y1,x2,y2\n";
    for (const Primitive& p : prims)
        out << p.kind << "," << p.state << "," << p.index << "," << fmt(p.x1) << "," << fmt(p.y1)
            << "," << fmt(p.x2) << "," << fmt(p.y2) << "\n";
}

inline void write_grid_csv(const std::string& path, const std::vector<ValueVector>& pts,
                           const std::vector<char>& inside) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "V(s1),V(s2),inside\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
        out << fmt(pts[i][0]) << "," << fmt(pts[i][1]) << "," << int(inside[i]) << "\n";
}

/// Minimal hand-rolled SVG scatter-and-lines plot. The viewBox is the
/// value bounding box; data y is flipped inside the same box so the
/// vertical axis points up when rendered.
class SvgPlot {
public:
    SvgPlot(double lo, double hi) : lo_(lo), hi_(hi) {
        const double w = hi - lo;
        body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"";
        body_ += fmt(lo) + " " + fmt(lo) + " " + fmt(w) + " " + fmt(w) + "\">\n";
        body_ += "<rect x=\"" + fmt(lo) + "\" y=\"" + fmt(lo) + "\" width=\"" + fmt(w) +
                 "\" height=\"" + fmt(w) + "\" fill=\"white\" stroke=\"black\" stroke-width=\"" +
                 fmt(w / 400.0) + "\"/>\n";
    }

    void circle(double x, double y, double r, const std::string& color) {
        body_ += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(flip(y)) + "\" r=\"" + fmt(r) +
                 "\" fill=\"" + color + "\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, double width,
              const std::string& color) {
        body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(flip(y1)) + "\" x2=\"" + fmt(x2) +
                 "\" y2=\"" + fmt(flip(y2)) + "\" stroke=\"" + color + "\" stroke-width=\"" +
                 fmt(width) + "\"/>\n";
    }

    void write(const std::string& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << body_ << "</svg>\n";
    }

    double unit() const { return (hi_ - lo_) / 400.0; }

private:
    double flip(double y) const { return lo_ + hi_ - y; }

    double lo_, hi_;
    std::string body_;
};

inline const char* state_color(int s) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    return colors[s % 5];
}

}  // namespace fig_detail

/// A pair of points of the robust value space whose connecting segment
/// leaves the space: evidence that the space is not star-shaped around
/// `center` (and in particular not convex).
struct NonStarWitness {
    bool found = false;
    ValueVector center;
    ValueVector target;
    ValueVector midpoint;
    double midpoint_margin = 0.0;  // how far outside the space the midpoint is
};

/// How far outside the robust value space a point is: the largest
/// per-state violation of the membership intervals (<= 0 means inside).
inline double robust_outside_margin(const Mdp& m, const SRectangularSet& u, const ValueVector& x,
                                    double tol = 1e-9) {
    const MembershipReport rep = robust_space_membership(m, u, x, tol);
    double margin = -std::numeric_limits<double>::infinity();
    for (const auto& c : rep.per_state)
        margin = std::max(margin, std::max(c.lower - c.value, c.value - c.upper));
    return margin;
}

/**
 * Deterministic search for a segment witnessing non-star-shapedness:
 * samples robust values of random policies, then scans all pairs for the
 * midpoint that lies deepest outside the space. `found` requires the
 * midpoint to be outside by more than 1e-6.
 */
inline NonStarWitness find_nonstar_witness(const Mdp& m, const SRectangularSet& u, int samples,
                                           std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ValueVector> values;
    values.reserve(samples);
    Policy pi;
    for (int i = 0; i < samples; ++i) {
        pi.rows.clear();
        for (int s = 0; s < m.num_states; ++s) pi.rows.push_back(rng.simplex(m.num_actions));
        values.push_back(robust_evaluate_policy(m, u, pi, 1e-10).value);
    }
    NonStarWitness w;
    double deepest = 1e-6;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            ValueVector mid(m.num_states);
            for (int s = 0; s < m.num_states; ++s) mid[s] = 0.5 * (values[i][s] + values[j][s]);
            const double margin = robust_outside_margin(m, u, mid);
            if (margin > deepest) {
                deepest = margin;
                w.found = true;
                w.center = values[i];
                w.target = values[j];
                w.midpoint = mid;
                w.midpoint_margin = margin;
            }
        }
    return w;
}

/**
 * Writes the figure data for a planar (2-state) instance into out_dir:
 * points.csv (sampled value points), lines.csv (hyperplane traces, cone
 * boundary rays, apex and witness markers), figure.svg, and for region
 * figures grid.csv (membership classification over the box). Byte-stable
 * for a fixed (instance, figure, seed, samples).
 *
 * Figures:
 *   values    scatter of sampled (robust) values; the bundled policy's
 *             hyperplanes or cone boundaries when the instance has one
 *   region    scatter plus per-action primitives and a membership grid
 *   agreement four scatters: policy free, pinned at s1, at s2, at both
 *   star      region data plus a non-star-shapedness witness segment
 */
inline FigureFiles emit_figure_data(const Instance& inst, const std::string& figure_id,
                                    const std::string& out_dir, std::uint64_t seed = 0,
                                    int samples = 2000) {
    require(inst.states == 2, "emit_figure_data: planar figures need a 2-state instance");
    require(samples > 0, "emit_figure_data: samples must be positive");
    const bool robust = inst.kind != InstanceKind::plain;
    const Mdp m = inst.nominal_mdp();
    const SRectangularSet u = inst.uncertainty();
    const auto [lo, hi] = value_bounding_box(m);
    std::filesystem::create_directories(out_dir);
    const auto path = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    Rng rng(seed);
    std::vector<ValueVector> points;
    std::vector<long> ids;
    std::vector<fig_detail::Primitive> prims;
    std::vector<ValueVector> grid_pts;
    std::vector<char> grid_in;
    long group_size = 0;  // agreement figures color the scatter by id group
    FigureFiles out;

    const auto sample_values = [&](const std::map<int, numvec>& fixed, int n, long id_base) {
        Policy pi;
        pi.rows.resize(m.num_states);
        for (int i = 0; i < n; ++i) {
            for (int s = 0; s < m.num_states; ++s) {
                auto it = fixed.find(s);
                pi.rows[s] = it != fixed.end() ? it->second : rng.simplex(m.num_actions);
            }
            points.push_back(robust ? robust_evaluate_policy(m, u, pi, 1e-10).value
                                    : evaluate_policy(m, pi));
            ids.push_back(id_base + i);
        }
    };

    const auto policy_primitives = [&](const Policy& pi) {
        for (int s = 0; s < m.num_states; ++s) {
            if (robust) {
                auto rays = fig_detail::cone_boundary(conic_region(m, u, s, pi.rows[s]), lo, hi);
                prims.insert(prims.end(), rays.begin(), rays.end());
            } else {
                const LVector lv = l_vector(m, s, pi.rows[s]);
                fig_detail::Primitive p;
                p.kind = "hyperplane";
                p.state = s;
                if (fig_detail::clip_line_to_box(lv.normal, lv.offset, lo, hi, p.x1, p.y1, p.x2, p.y2))
                    prims.push_back(p);
            }
        }
    };

    const auto action_primitives = [&] {
        for (int s = 0; s < m.num_states; ++s)
            for (int a = 0; a < m.num_actions; ++a) {
                const numvec row = deterministic_row(m.num_actions, a);
                if (robust) {
                    auto rays = fig_detail::cone_boundary(conic_region(m, u, s, row), lo, hi);
                    for (auto& r : rays)
                        r.index = r.kind == "apex" ? a : r.index * m.num_actions + a;
                    prims.insert(prims.end(), rays.begin(), rays.end());
                } else {
                    const LVector lv = l_vector(m, s, row);
                    fig_detail::Primitive p;
                    p.kind = "hyperplane";
                    p.state = s;
                    p.index = a;
                    if (fig_detail::clip_line_to_box(lv.normal, lv.offset, lo, hi, p.x1, p.y1, p.x2,
                                                     p.y2))
                        prims.push_back(p);
                }
            }
    };

    const auto classify_grid = [&](int res) {
        grid_pts.reserve(static_cast<std::size_t>(res) * res);
        for (int i = 0; i < res; ++i)
            for (int j = 0; j < res; ++j) {
                const double x = lo + (hi - lo) * i / (res - 1);
                const double y = lo + (hi - lo) * j / (res - 1);
                grid_pts.push_back({x, y});
                const bool in = robust ? robust_space_membership(m, u, {x, y}, 1e-9).verdict
                                       : value_space_membership(m, {x, y}, 1e-9).verdict;
                grid_in.push_back(in ? 1 : 0);
            }
    };

    if (figure_id == "values") {
        sample_values({}, samples, 0);
        if (inst.policy) {
            policy_primitives(*inst.policy);
            points.push_back(robust ? robust_evaluate_policy(m, u, *inst.policy, 1e-10).value
                                    : evaluate_policy(m, *inst.policy));
            ids.push_back(-1);  // the instance's own policy
        }
    } else if (figure_id == "region") {
        sample_values({}, samples, 0);
        action_primitives();
        classify_grid(200);
    } else if (figure_id == "agreement") {
        Policy pinned;
        if (inst.policy) pinned = *inst.policy;
        else
            for (int s = 0; s < m.num_states; ++s) pinned.rows.push_back(rng.simplex(m.num_actions));
        const int per_group = samples / 4 + 1;
        group_size = per_group;
        sample_values({}, per_group, 0);
        sample_values({{0, pinned.rows[0]}}, per_group, per_group);
        sample_values({{1, pinned.rows[1]}}, per_group, 2L * per_group);
        sample_values({{0, pinned.rows[0]}, {1, pinned.rows[1]}}, 1, 3L * per_group);
        policy_primitives(pinned);
    } else if (figure_id == "star") {
        sample_values({}, samples, 0);
        action_primitives();
        classify_grid(200);
        const NonStarWitness w = find_nonstar_witness(m, u, std::min(samples, 400), derive_seed(seed, 7));
        if (w.found) {
            fig_detail::Primitive seg;
            seg.kind = "witness_segment";
            seg.x1 = w.center[0];
            seg.y1 = w.center[1];
            seg.x2 = w.target[0];
            seg.y2 = w.target[1];
            prims.push_back(seg);
            fig_detail::Primitive mid;
            mid.kind = "witness_midpoint";
            mid.x1 = mid.x2 = w.midpoint[0];
            mid.y1 = mid.y2 = w.midpoint[1];
            prims.push_back(mid);
        }
    } else {
        throw std::invalid_argument("emit_figure_data: unknown figure id '" + figure_id + "'");
    }

    fig_detail::write_points_csv(path("points.csv"), points, ids);
    out.files.push_back("points.csv");
    fig_detail::write_lines_csv(path("lines.csv"), prims);
    out.files.push_back("lines.csv");
    if (!grid_pts.empty()) {
        fig_detail::write_grid_csv(path("grid.csv"), grid_pts, grid_in);
        out.files.push_back("grid.csv");
    }

    fig_detail::SvgPlot svg(lo, hi);
    for (std::size_t i = 0; i < grid_pts.size(); ++i)
        if (grid_in[i]) svg.circle(grid_pts[i][0], grid_pts[i][1], svg.unit() * 1.2, "#e8d5f0");
    for (const auto& p : prims) {
        if (p.kind == "apex" || p.kind == "witness_midpoint")
            svg.circle(p.x1, p.y1, svg.unit() * 3.0, p.kind == "apex" ? "black" : "#d62728");
        else
            svg.line(p.x1, p.y1, p.x2, p.y2, svg.unit() * (p.kind == "witness_segment" ? 2.0 : 0.8),
                     p.kind == "witness_segment" ? "#d62728"
                                                 : fig_detail::state_color(std::max(p.state, 0)));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const char* color = group_size > 0
                                ? fig_detail::state_color(static_cast<int>(ids[i] / group_size))
                                : "#1f77b4";
        svg.circle(points[i][0], points[i][1], svg.unit() * (ids[i] < 0 ? 3.0 : 1.0),
                   ids[i] < 0 ? "black" : color);
    }
    svg.write(path("figure.svg"));
    out.files.push_back("figure.svg");
    out.num_points = static_cast<int>(points.size());
    return out;
}

}  // namespace rvg
