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

#include "rvg/instance_io.hpp"
#include "support/helpers.hpp"

using namespace rvg;

namespace {

const char* kFixtures[] = {
    "mdp_2s3a.json",          "mdp_3s2a.json",           "rmdp_srect_2s2a_pair.json",
    "rmdp_srect_2s2a_quad.json", "rmdp_srect_2s2a.json", "rmdp_sarect_2s2a.json",
    "rmdp_srect_2s2a_nonstar.json",
};

}  // namespace

TEST_CASE("every bundled instance parses, validates, and round-trips") {
    for (const char* name : kFixtures) {
        CAPTURE(name);
        const Instance inst = testing::fixture(name);
        CHECK(validate_mdp(inst.nominal_mdp()).empty());
        const json once = to_json(inst);
        const Instance again = parse_instance(once);
        CHECK(to_json(again) == once);
        CHECK(again.kind == inst.kind);
        CHECK(again.gamma == inst.gamma);
    }
}

TEST_CASE("unknown keys are rejected") {
    json doc = to_json(testing::fixture("mdp_2s3a.json"));
    doc["extra"] = 1;
    CHECK_THROWS_AS(parse_instance(doc), ParseError);
}

TEST_CASE("exactly one kernel representation must be present") {
    const Instance srect = testing::fixture("rmdp_srect_2s2a.json");
    json doc = to_json(srect);
    doc["kernel"] = testing::fixture("mdp_2s3a.json").kernel;
    CHECK_THROWS_AS(parse_instance(doc), ParseError);
    doc.erase("kernel");
    doc.erase("s_rect");
    CHECK_THROWS_AS(parse_instance(doc), ParseError);
}

TEST_CASE("a non-stochastic kernel row names the offending field") {
    json doc = to_json(testing::fixture("mdp_2s3a.json"));
    doc["kernel"][0][1] = json::array({0.5, 0.4});
    try {
        parse_instance(doc);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.where() == "kernel[0][1]");
    }
}

TEST_CASE("gamma outside [0,1) is rejected") {
    json doc = to_json(testing::fixture("mdp_2s3a.json"));
    doc["gamma"] = 1.0;
    CHECK_THROWS_AS(parse_instance(doc), ParseError);
    doc["gamma"] = -0.1;
    CHECK_THROWS_AS(parse_instance(doc), ParseError);
}

TEST_CASE("malformed JSON reports a byte position") {
    try {
        parse_instance_text("{\"states\": 2,");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("p0 is carried through but ignored") {
    const Instance inst = testing::fixture("mdp_2s3a.json");
    REQUIRE(inst.p0.has_value());
    CHECK(inst.p0->size() == 2);
    const json doc = to_json(inst);
    CHECK(doc.contains("p0"));
}

TEST_CASE("policies in instance files are validated") {
    json doc = to_json(testing::fixture("mdp_2s3a.json"));
    doc["policy"][0] = json::array({0.5, 0.5});  // wrong length
    CHECK_THROWS_AS(parse_instance(doc), ParseError);
}

TEST_CASE("the sa_rect fixture expands to the s_rect product set") {
    const Instance inst = testing::fixture("rmdp_sarect_2s2a.json");
    const SRectangularSet u = inst.uncertainty();
    CHECK(u.candidates(0) == 4);
    CHECK(u.candidates(1) == 4);
    CHECK(validate_uncertainty(u, inst.states, inst.actions).empty());
}
