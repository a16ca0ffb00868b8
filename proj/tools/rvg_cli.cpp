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

// Command-line front end. Machine-readable JSON goes to stdout, human
// diagnostics to stderr. Exit codes: 0 success, 1 verification failure,
// 2 instance parse error, 3 usage or shape error.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rvg/figures.hpp"
#include "rvg/instance_io.hpp"
#include "rvg/reduction.hpp"
#include "rvg/rmdp.hpp"
#include "rvg/robust_geometry.hpp"
#include "rvg/suite.hpp"

namespace {

using namespace rvg;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitParseError = 2;
constexpr int kExitUsageError = 3;

/// Shape/usage problems detected after parsing succeeded.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Policy load_policy_file(const std::string& path, int states, int actions) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path, e.what());
    }
    const json& rows = doc.is_object() && doc.contains("policy") ? doc["policy"] : doc;
    if (!rows.is_array() || static_cast<int>(rows.size()) != states)
        throw UsageError("policy in " + path + " must have " + std::to_string(states) + " rows");
    Policy pi;
    for (int s = 0; s < states; ++s)
        pi.rows.push_back(detail::parse_prob_row(rows[s], actions, "policy[" + std::to_string(s) + "]"));
    return pi;
}

numvec parse_point(const std::string& text, int states) {
    numvec x;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            x.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("--point: '" + item + "' is not a number");
        }
    }
    if (static_cast<int>(x.size()) != states)
        throw UsageError("--point has " + std::to_string(x.size()) + " coordinates, instance has " +
                         std::to_string(states) + " states");
    return x;
}

json membership_to_json(const MembershipReport& rep, bool robust) {
    json doc;
    doc["verdict"] = rep.verdict;
    doc["tol"] = rep.tol;
    doc["per_state"] = json::array();
    for (const auto& c : rep.per_state) {
        json jc;
        jc["state"] = c.state;
        jc["value"] = c.value;
        jc["lower"] = c.lower;
        jc["upper"] = c.upper;
        jc["lower_ok"] = c.lower_ok;
        jc["upper_ok"] = c.upper_ok;
        jc["lower_action"] = c.lower_action;
        if (robust) {
            jc["lower_kernel"] = c.lower_kernel;
            jc["upper_mix"] = c.upper_mix;
        } else {
            jc["upper_action"] = c.upper_action;
        }
        doc["per_state"].push_back(std::move(jc));
    }
    return doc;
}

json state_reduction_to_json(const StateReduction& sr) {
    json jc;
    jc["kept"] = sr.kept;
    jc["removed"] = json::array();
    for (const auto& cert : sr.removed) {
        json jr;
        jr["index"] = cert.index;
        jr["weights"] = cert.weights;
        jr["error"] = cert.error;
        jc["removed"].push_back(std::move(jr));
    }
    return jc;
}

int cmd_evaluate(const std::string& instance_path, const std::string& policy_path, double tol) {
    const Instance inst = load_instance(instance_path);
    Policy pi;
    if (!policy_path.empty())
        pi = load_policy_file(policy_path, inst.states, inst.actions);
    else if (inst.policy)
        pi = *inst.policy;
    else
        throw UsageError("no policy: the instance file has no 'policy' key and --policy was not given");

    json doc;
    doc["kind"] = kind_name(inst.kind);
    if (inst.kind == InstanceKind::plain) {
        doc["value"] = evaluate_policy(inst.nominal_mdp(), pi);
        doc["iterations"] = 0;
    } else {
        const RobustEvalResult res =
            robust_evaluate_policy(inst.nominal_mdp(), inst.uncertainty(), pi, tol);
        doc["value"] = res.value;
        doc["worst_kernel"] = res.worst_kernel;
        doc["iterations"] = res.iterations;
        doc["residual"] = res.residual;
    }
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_membership(const std::string& instance_path, const std::string& point_text, double tol) {
    const Instance inst = load_instance(instance_path);
    const numvec x = parse_point(point_text, inst.states);
    const Mdp m = inst.nominal_mdp();
    json doc;
    doc["kind"] = kind_name(inst.kind);
    if (inst.kind == InstanceKind::plain)
        doc.update(membership_to_json(value_space_membership(m, x, tol), false));
    else
        doc.update(membership_to_json(robust_space_membership(m, inst.uncertainty(), x, tol), true));
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_reduce(const std::string& instance_path, const std::string& out_path) {
    const Instance inst = load_instance(instance_path);
    if (inst.kind == InstanceKind::plain)
        throw UsageError("reduce needs an instance with an uncertainty set (s_rect or sa_rect)");
    Instance reduced = inst;
    json doc;
    doc["kind"] = kind_name(inst.kind);
    if (inst.kind == InstanceKind::s_rect) {
        auto [slim, report] = reduce_uncertainty(inst.s_rect);
        reduced.s_rect = std::move(slim);
        doc["per_state"] = json::array();
        for (const auto& sr : report.per_state)
            doc["per_state"].push_back(state_reduction_to_json(sr));
        doc["total_removed"] = report.total_removed();
    } else {
        auto [slim, report] = reduce_uncertainty(inst.sa_rect);
        reduced.sa_rect = std::move(slim);
        doc["per_state_action"] = json::array();
        for (const auto& acts : report.per_state_action) {
            json row = json::array();
            for (const auto& sr : acts) row.push_back(state_reduction_to_json(sr));
            doc["per_state_action"].push_back(std::move(row));
        }
        doc["total_removed"] = report.total_removed();
    }
    save_instance(reduced, out_path);
    doc["out"] = out_path;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int instances) {
    SuiteConfig cfg;
    cfg.seed = seed;
    cfg.num_instances = instances;
    if (suite != "default") cfg.enabled.push_back(suite);
    const SuiteReport report = run_suite(cfg);
    std::cout << to_json(report).dump(2) << "\n";
    return report.all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_render(const std::string& instance_path, const std::string& figure,
               const std::string& out_dir, std::uint64_t seed, int samples) {
    const Instance inst = load_instance(instance_path);
    const FigureFiles files = emit_figure_data(inst, figure, out_dir, seed, samples);
    json doc;
    doc["figure"] = figure;
    doc["out_dir"] = out_dir;
    doc["files"] = files.files;
    doc["points"] = files.num_points;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"value-space geometry toolkit for finite MDPs and robust MDPs"};
    app.require_subcommand(1);

    std::string instance_path, policy_path, point_text, out_path, suite_name = "default";
    std::string figure_id, out_dir;
    double tol_eval = 1e-10, tol_member = 1e-9;
    std::uint64_t seed = 0;
    int instances = 200, samples = 2000;

    CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a policy (exactly or robustly)");
    evaluate->add_option("--instance", instance_path, "instance file")->required();
    evaluate->add_option("--policy", policy_path, "policy file (JSON rows); default: instance's policy");
    evaluate->add_option("--tol", tol_eval, "sup-norm tolerance for robust evaluation");

    CLI::App* membership = app.add_subcommand("membership", "test a point against the value space");
    membership->add_option("--instance", instance_path, "instance file")->required();
    membership->add_option("--point", point_text, "comma-separated coordinates")->required();
    membership->add_option("--tol", tol_member, "membership tolerance");

    CLI::App* reduce = app.add_subcommand("reduce", "shrink an uncertainty set to its extreme points");
    reduce->add_option("--instance", instance_path, "instance file")->required();
    reduce->add_option("--out", out_path, "path for the reduced instance")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the randomized verification suite");
    verify->add_option("--suite", suite_name, "default, a check id/prefix, or selftest-fail");
    verify->add_option("--seed", seed, "suite seed");
    verify->add_option("--instances", instances, "instances per check");

    CLI::App* render = app.add_subcommand("render", "emit figure data (CSV + SVG) for a 2-state instance");
    render->add_option("--instance", instance_path, "instance file")->required();
    render->add_option("--figure", figure_id, "values | region | agreement | star")->required();
    render->add_option("--out", out_dir, "output directory")->required();
    render->add_option("--seed", seed, "sampling seed");
    render->add_option("--samples", samples, "number of sampled value points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    try {
        if (*evaluate) return cmd_evaluate(instance_path, policy_path, tol_eval);
        if (*membership) return cmd_membership(instance_path, point_text, tol_member);
        if (*reduce) return cmd_reduce(instance_path, out_path);
        if (*verify) return cmd_verify(suite_name, seed, instances);
        if (*render) return cmd_render(instance_path, figure_id, out_dir, seed, samples);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
    return kExitUsageError;
}
