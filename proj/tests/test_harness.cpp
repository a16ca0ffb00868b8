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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rvg/figures.hpp"
#include "rvg/suite.hpp"
#include "support/helpers.hpp"

using namespace rvg;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SuiteConfig small_cfg(std::uint64_t seed) {
    SuiteConfig cfg;
    cfg.seed = seed;
    cfg.num_instances = 10;
    cfg.policies_per_instance = 6;
    cfg.points_per_instance = 10;
    cfg.axis_lines_per_instance = 1;
    cfg.axis_scan_steps = 201;
    return cfg;
}

}  // namespace

TEST_CASE("instance generation is deterministic and valid") {
    GenConfig gen;
    for (InstanceKind kind : {InstanceKind::plain, InstanceKind::s_rect, InstanceKind::sa_rect}) {
        const Instance a = generate_instance(gen, kind, 515);
        const Instance b = generate_instance(gen, kind, 515);
        CHECK(to_json(a) == to_json(b));
        const Instance c = generate_instance(gen, kind, 516);
        CHECK(to_json(c) != to_json(a));
    }
    for (int i = 0; i < 300; ++i) {
        const Instance inst = generate_instance(gen, InstanceKind::s_rect, 5300 + i);
        CHECK(validate_mdp(inst.nominal_mdp()).empty());
        CHECK(validate_uncertainty(inst.s_rect, inst.states, inst.actions).empty());
    }
}

TEST_CASE("a plain instance is valid as a degenerate uncertain one") {
    GenConfig gen;
    const Instance inst = generate_instance(gen, InstanceKind::plain, 99);
    CHECK(validate_mdp(inst.nominal_mdp()).empty());
    CHECK(validate_uncertainty(inst.uncertainty(), inst.states, inst.actions).empty());
}

TEST_CASE("an empty suite run produces an empty report") {
    SuiteConfig cfg;
    cfg.num_instances = 0;
    const SuiteReport rep = run_suite(cfg);
    CHECK(rep.checks.empty());
    CHECK(rep.all_pass);
}

TEST_CASE("the suite passes at reduced size") {
    const SuiteReport rep = run_suite(small_cfg(3));
    CHECK(rep.all_pass);
    CHECK(rep.checks.size() >= 25);
    for (const auto& c : rep.checks) {
        CAPTURE(c.id);
        CHECK(c.failures == 0);
    }
}

TEST_CASE("suite reports are reproducible bit for bit") {
    const json a = to_json(run_suite(small_cfg(11)));
    const json b = to_json(run_suite(small_cfg(11)));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("the canary suite fails and serializes a replayable instance") {
    SuiteConfig cfg = small_cfg(5);
    cfg.enabled = {"selftest-fail"};
    const SuiteReport rep = run_suite(cfg);
    CHECK(!rep.all_pass);
    REQUIRE(rep.checks.size() == 1);
    CHECK(rep.checks[0].failures == cfg.num_instances);
    REQUIRE(!rep.checks[0].failing.empty());
    // the embedded instance replays through the normal parser
    const Instance replay = parse_instance(rep.checks[0].failing[0]["instance"]);
    CHECK(validate_mdp(replay.nominal_mdp()).empty());
    // determinism: replaying reproduces the recorded residual exactly
    const SuiteReport again = run_suite(cfg);
    CHECK(again.checks[0].failing[0]["residual"] == rep.checks[0].failing[0]["residual"]);
}

TEST_CASE("figure emission is byte-stable") {
    const Instance inst = testing::fixture("rmdp_srect_2s2a.json");
    const auto dir_a = std::filesystem::temp_directory_path() / "rvg_fig_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "rvg_fig_b";
    const FigureFiles fa = emit_figure_data(inst, "values", dir_a.string(), 12, 300);
    const FigureFiles fb = emit_figure_data(inst, "values", dir_b.string(), 12, 300);
    REQUIRE(fa.files == fb.files);
    for (const auto& f : fa.files) CHECK(slurp(dir_a / f) == slurp(dir_b / f));
    CHECK(fa.num_points > 300);  // samples plus the instance's own policy
}

TEST_CASE("figure emission rejects non-planar instances and bad ids") {
    const Instance tall = testing::fixture("mdp_3s2a.json");
    CHECK_THROWS_AS(emit_figure_data(tall, "values", "/tmp/rvg_fig_bad"), std::invalid_argument);
    const Instance flat = testing::fixture("mdp_2s3a.json");
    CHECK_THROWS_AS(emit_figure_data(flat, "nope", "/tmp/rvg_fig_bad"), std::invalid_argument);
}

TEST_CASE("the scatter and the membership grid outline the same region") {
    const Instance inst = testing::fixture("mdp_2s3a.json");
    const Mdp m = inst.nominal_mdp();
    const auto dir = std::filesystem::temp_directory_path() / "rvg_fig_region";
    emit_figure_data(inst, "region", dir.string(), 4, 10000);

    // read back the emitted scatter
    std::ifstream in(dir / "points.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);  // header
    std::vector<ValueVector> scatter;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        scatter.push_back({std::stod(line.substr(0, c1)), std::stod(line.substr(c1 + 1, c2 - c1 - 1))});
    }
    REQUIRE(scatter.size() >= 10000);
    for (const auto& p : scatter) CHECK(value_space_membership(m, p, 1e-6).verdict);

    // 400x400 membership grid vs. the scatter, compared at a coarser
    // visual resolution: no scatter may fall in a cell the grid calls
    // fully outside, and nearly every solidly-inside cell must contain
    // scatter (corners of the region carry little sampling mass)
    const auto [lo, hi] = value_bounding_box(m);
    const int res = 400, coarse = 40, sub = res / coarse;
    const double h = (hi - lo) / (res - 1);
    std::vector<char> truth(res * res, 0);
    for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j)
            truth[i * res + j] = value_space_membership(m, {lo + i * h, lo + j * h}, 1e-9).verdict;
    std::vector<int> cell_scatter(coarse * coarse, 0);
    const double cell_w = (hi - lo) / coarse;
    for (const auto& p : scatter) {
        const int ci = std::min(coarse - 1, static_cast<int>((p[0] - lo) / cell_w));
        const int cj = std::min(coarse - 1, static_cast<int>((p[1] - lo) / cell_w));
        ++cell_scatter[ci * coarse + cj];
    }
    int core_cells = 0, core_empty = 0, scatter_outside = 0;
    for (int ci = 0; ci < coarse; ++ci)
        for (int cj = 0; cj < coarse; ++cj) {
            int inside = 0;
            for (int di = 0; di < sub; ++di)
                for (int dj = 0; dj < sub; ++dj) inside += truth[(ci * sub + di) * res + cj * sub + dj];
            if (inside >= sub * sub / 2) {
                ++core_cells;
                if (cell_scatter[ci * coarse + cj] == 0) ++core_empty;
            }
            if (inside == 0 && cell_scatter[ci * coarse + cj] > 0) ++scatter_outside;
        }
    REQUIRE(core_cells > 50);
    CHECK(scatter_outside == 0);
    CHECK(core_empty * 20 <= core_cells);  // at least 95% of the core populated
}

TEST_CASE("robust scatter stays inside the robust membership region") {
    const Instance inst = testing::fixture("rmdp_srect_2s2a.json");
    const Mdp m = inst.nominal_mdp();
    const auto dir = std::filesystem::temp_directory_path() / "rvg_fig_robust";
    emit_figure_data(inst, "region", dir.string(), 5, 2000);
    std::ifstream in(dir / "points.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const ValueVector p{std::stod(line.substr(0, c1)),
                            std::stod(line.substr(c1 + 1, c2 - c1 - 1))};
        CHECK(robust_space_membership(m, inst.s_rect, p, 1e-6).verdict);
        ++rows;
    }
    CHECK(rows >= 2000);
}

TEST_CASE("the counterexample instance yields a non-star-shapedness witness") {
    const Instance inst = testing::fixture("rmdp_srect_2s2a_nonstar.json");
    const Mdp m = inst.nominal_mdp();
    const NonStarWitness w = find_nonstar_witness(m, inst.s_rect, 300, 20260808);
    REQUIRE(w.found);
    CHECK(w.midpoint_margin > 1e-3);
    // endpoints lie in the space, the midpoint does not
    CHECK(robust_space_membership(m, inst.s_rect, w.center, 1e-8).verdict);
    CHECK(robust_space_membership(m, inst.s_rect, w.target, 1e-8).verdict);
    CHECK(!robust_space_membership(m, inst.s_rect, w.midpoint, 1e-8).verdict);
    // deterministic: the same search returns the same witness
    const NonStarWitness again = find_nonstar_witness(m, inst.s_rect, 300, 20260808);
    CHECK(again.center == w.center);
    CHECK(again.target == w.target);
    CHECK(again.midpoint_margin == w.midpoint_margin);
}

TEST_CASE("the star figure embeds the witness segment") {
    const Instance inst = testing::fixture("rmdp_srect_2s2a_nonstar.json");
    const auto dir = std::filesystem::temp_directory_path() / "rvg_fig_star";
    emit_figure_data(inst, "star", dir.string(), 8, 400);
    const std::string lines = slurp(dir / "lines.csv");
    CHECK(lines.find("witness_segment") != std::string::npos);
    CHECK(lines.find("witness_midpoint") != std::string::npos);
}

TEST_CASE("agreement figures pin the sampled groups to their hyperplanes") {
    const Instance inst = testing::fixture("mdp_2s3a.json");
    const Mdp m = inst.nominal_mdp();
    const auto dir = std::filesystem::temp_directory_path() / "rvg_fig_agree";
    emit_figure_data(inst, "agreement", dir.string(), 6, 400);
    std::ifstream in(dir / "points.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    const int per_group = 400 / 4 + 1;
    const Hyperplane h0{l_vector(m, 0, inst.policy->rows[0])};
    int checked = 0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const ValueVector p{std::stod(line.substr(0, c1)),
                            std::stod(line.substr(c1 + 1, c2 - c1 - 1))};
        const long id = std::stol(line.substr(c2 + 1));
        if (id >= per_group && id < 2 * per_group) {  // group with state 1 pinned
            CHECK(std::fabs(h0.residual(p)) <= 1e-9);
            ++checked;
        }
    }
    CHECK(checked == per_group);
}
