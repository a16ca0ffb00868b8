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

#include "rvg/matrix_game.hpp"
#include "rvg/random.hpp"
#include "support/oracles.hpp"

using namespace rvg;

TEST_CASE("matching pennies mixes evenly") {
    const auto res = maximin_row_mix({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(res.value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(res.mix[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(res.mix[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("a dominating row takes all the mass") {
    const auto res = maximin_row_mix({{2.0, 2.0}, {0.0, 0.0}});
    CHECK(res.value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(res.mix[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single row and single column degenerate cases") {
    const auto row = maximin_row_mix({{3.0, -1.0, 2.0}});
    CHECK(row.value == doctest::Approx(-1.0));
    CHECK(row.mix == numvec{1.0});
    const auto col = maximin_row_mix({{1.0}, {4.0}, {2.0}});
    CHECK(col.value == doctest::Approx(4.0));
    CHECK(col.mix[1] == doctest::Approx(1.0));
}

TEST_CASE("empty payoff matrices are rejected") {
    CHECK_THROWS_AS(maximin_row_mix({}), std::invalid_argument);
    CHECK_THROWS_AS(maximin_row_mix({numvec{}}), std::invalid_argument);
}

TEST_CASE("maximin matches support enumeration and dominates the grid bound") {
    Rng rng(20240);
    for (int i = 0; i < 1000; ++i) {
        std::vector<numvec> payoff(3, numvec(3, 0.0));
        for (auto& row : payoff)
            for (double& v : row) v = rng.uniform(-2.0, 2.0);
        const double lp = maximin_row_mix(payoff).value;
        double exact = 0.0;
        REQUIRE(oracles::maximin_support_enumeration(payoff, exact));
        CHECK(std::fabs(lp - exact) <= 1e-9);
        // grid mixes are feasible, so their best is a slightly slack lower bound
        const double grid = oracles::maximin_grid_lower_bound(payoff, 60);
        CHECK(lp >= grid - 1e-9);
        CHECK(lp <= grid + 0.1);
    }
}

TEST_CASE("the two-row fast path matches the LP route") {
    Rng rng(20241);
    for (int i = 0; i < 500; ++i) {
        const int cols = 1 + rng.uniform_int(5);
        std::vector<numvec> payoff(2, numvec(cols, 0.0));
        for (auto& row : payoff)
            for (double& v : row) v = rng.uniform(-3.0, 3.0);
        const MaximinResult fast = maximin_row_mix(payoff);
        // force the LP route via a duplicated row (same game value)
        const MaximinResult lp = maximin_row_mix({payoff[0], payoff[1], payoff[1]});
        CHECK(std::fabs(fast.value - lp.value) <= 1e-9);
    }
}

TEST_CASE("the mix is at least as good as every pure row") {
    Rng rng(20242);
    for (int i = 0; i < 500; ++i) {
        const int rows = 2 + rng.uniform_int(4), cols = 1 + rng.uniform_int(4);
        std::vector<numvec> payoff(rows, numvec(cols, 0.0));
        for (auto& row : payoff)
            for (double& v : row) v = rng.uniform(-1.0, 1.0);
        double pure = -std::numeric_limits<double>::infinity();
        for (const auto& row : payoff) {
            double worst = row[0];
            for (double v : row) worst = std::min(worst, v);
            pure = std::max(pure, worst);
        }
        const MaximinResult res = maximin_row_mix(payoff);
        CHECK(res.value >= pure - 1e-12);
        // and the returned mix really attains the reported value
        double attained = std::numeric_limits<double>::infinity();
        for (int k = 0; k < cols; ++k) {
            double v = 0.0;
            for (int a = 0; a < rows; ++a) v += res.mix[a] * payoff[a][k];
            attained = std::min(attained, v);
        }
        CHECK(attained == doctest::Approx(res.value).epsilon(1e-9));
    }
}
