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

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rvg/mdp.hpp"
#include "rvg/uncertainty.hpp"

namespace rvg {

using nlohmann::json;

/// Error raised for malformed instance files; `where` names the offending
/// field (or byte position for JSON syntax errors).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const { return where_; }

private:
    std::string where_;
};

enum class InstanceKind { plain, s_rect, sa_rect };

inline const char* kind_name(InstanceKind k) {
    switch (k) {
        case InstanceKind::plain: return "mdp";
        case InstanceKind::s_rect: return "s_rect";
        case InstanceKind::sa_rect: return "sa_rect";
    }
    return "?";
}

/**
 * In-memory form of an instance file. Exactly one of kernel / s_rect /
 * sa_rect is populated, matching `kind`. The initial distribution p0 is
 * accepted and carried through serialization but plays no role in any
 * computation.
 */
struct Instance {
    InstanceKind kind = InstanceKind::plain;
    int states = 0;
    int actions = 0;
    double gamma = 0.0;
    std::vector<numvec> rewards;
    std::vector<std::vector<numvec>> kernel;
    SRectangularSet s_rect;
    SARectangularSet sa_rect;
    std::optional<numvec> p0;
    std::optional<Policy> policy;

    /// The instance as a plain MDP. For uncertain kinds the kernel is the
    /// first candidate everywhere (only rewards and gamma matter to the
    /// callers that use this).
    Mdp nominal_mdp() const {
        Mdp m;
        m.num_states = states;
        m.num_actions = actions;
        m.gamma = gamma;
        m.rewards = rewards;
        if (kind == InstanceKind::plain) {
            m.kernel = kernel;
        } else if (kind == InstanceKind::s_rect) {
            m.kernel.reserve(states);
            for (const auto& cands : s_rect.per_state) m.kernel.push_back(cands.front());
        } else {
            m.kernel.resize(states);
            for (int s = 0; s < states; ++s) {
                m.kernel[s].resize(actions);
                for (int a = 0; a < actions; ++a)
                    m.kernel[s][a] = sa_rect.per_state_action[s][a].front();
            }
        }
        return m;
    }

    /// The instance's uncertainty as an s-rectangular set (plain instances
    /// become singletons; (s,a)-rectangular ones are product-expanded).
    SRectangularSet uncertainty(long cap = 4096) const {
        if (kind == InstanceKind::plain) return singleton_uncertainty(kernel);
        if (kind == InstanceKind::s_rect) return s_rect;
        return sa_to_s_rectangular(sa_rect, cap);
    }
};

namespace detail {

inline numvec parse_row(const json& j, int len, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != len)
        throw ParseError(path, "expected an array of " + std::to_string(len) + " numbers");
    numvec row;
    row.reserve(len);
    for (int i = 0; i < len; ++i) {
        const json& v = j[i];
        if (!v.is_number()) throw ParseError(path + "[" + std::to_string(i) + "]", "expected a number");
        row.push_back(v.get<double>());
    }
    return row;
}

inline numvec parse_prob_row(const json& j, int len, const std::string& path) {
    numvec row = parse_row(j, len, path);
    const double dev = stochastic_deviation(row);
    if (dev > kRowSumTol)
        throw ParseError(path, "not a probability row (deviation " + std::to_string(dev) + ")");
    return row;
}

}  // namespace detail

/**
 * Parses an instance document. Shapes, stochasticity and gamma range are
 * all enforced here: a document that parses is a valid instance. Unknown
 * keys are rejected.
 */
inline Instance parse_instance(const json& doc) {
    if (!doc.is_object()) throw ParseError("$", "instance must be a JSON object");
    static const std::vector<std::string> known = {"states", "actions", "gamma",  "rewards",
                                                   "kernel", "s_rect",  "sa_rect", "p0",
                                                   "policy"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        bool ok = false;
        for (const auto& k : known) ok = ok || k == key;
        if (!ok) throw ParseError(key, "unknown key");
    }
    for (const char* req : {"states", "actions", "gamma", "rewards"})
        if (!doc.contains(req)) throw ParseError(req, "missing required key");

    Instance inst;
    if (!doc["states"].is_number_integer() || doc["states"].get<int>() <= 0)
        throw ParseError("states", "expected a positive integer");
    if (!doc["actions"].is_number_integer() || doc["actions"].get<int>() <= 0)
        throw ParseError("actions", "expected a positive integer");
    inst.states = doc["states"].get<int>();
    inst.actions = doc["actions"].get<int>();
    if (!doc["gamma"].is_number()) throw ParseError("gamma", "expected a number");
    inst.gamma = doc["gamma"].get<double>();
    if (!(inst.gamma >= 0.0 && inst.gamma < 1.0)) throw ParseError("gamma", "not in [0,1)");

    const json& rew = doc["rewards"];
    if (!rew.is_array() || static_cast<int>(rew.size()) != inst.states)
        throw ParseError("rewards", "expected " + std::to_string(inst.states) + " rows");
    for (int s = 0; s < inst.states; ++s) {
        inst.rewards.push_back(detail::parse_row(rew[s], inst.actions, "rewards[" + std::to_string(s) + "]"));
        for (double v : inst.rewards.back())
            if (!std::isfinite(v)) throw ParseError("rewards[" + std::to_string(s) + "]", "non-finite reward");
    }

    const int kinds = doc.contains("kernel") + doc.contains("s_rect") + doc.contains("sa_rect");
    if (kinds != 1)
        throw ParseError("$", "exactly one of kernel, s_rect, sa_rect must be present");

    if (doc.contains("kernel")) {
        inst.kind = InstanceKind::plain;
        const json& ker = doc["kernel"];
        if (!ker.is_array() || static_cast<int>(ker.size()) != inst.states)
            throw ParseError("kernel", "expected " + std::to_string(inst.states) + " state slabs");
        for (int s = 0; s < inst.states; ++s) {
            const json& slab = ker[s];
            const std::string path = "kernel[" + std::to_string(s) + "]";
            if (!slab.is_array() || static_cast<int>(slab.size()) != inst.actions)
                throw ParseError(path, "expected " + std::to_string(inst.actions) + " action rows");
            std::vector<numvec> rows;
            for (int a = 0; a < inst.actions; ++a)
                rows.push_back(detail::parse_prob_row(slab[a], inst.states,
                                                      path + "[" + std::to_string(a) + "]"));
            inst.kernel.push_back(std::move(rows));
        }
    } else if (doc.contains("s_rect")) {
        inst.kind = InstanceKind::s_rect;
        const json& sr = doc["s_rect"];
        if (!sr.is_array() || static_cast<int>(sr.size()) != inst.states)
            throw ParseError("s_rect", "expected " + std::to_string(inst.states) + " candidate lists");
        inst.s_rect.per_state.resize(inst.states);
        for (int s = 0; s < inst.states; ++s) {
            const json& cands = sr[s];
            const std::string spath = "s_rect[" + std::to_string(s) + "]";
            if (!cands.is_array() || cands.empty())
                throw ParseError(spath, "expected a nonempty array of candidate kernels");
            for (std::size_t k = 0; k < cands.size(); ++k) {
                const json& kern = cands[k];
                const std::string kpath = spath + "[" + std::to_string(k) + "]";
                if (!kern.is_array() || static_cast<int>(kern.size()) != inst.actions)
                    throw ParseError(kpath, "expected " + std::to_string(inst.actions) + " action rows");
                StateKernel sk;
                for (int a = 0; a < inst.actions; ++a)
                    sk.push_back(detail::parse_prob_row(kern[a], inst.states,
                                                        kpath + "[" + std::to_string(a) + "]"));
                inst.s_rect.per_state[s].push_back(std::move(sk));
            }
        }
    } else {
        inst.kind = InstanceKind::sa_rect;
        const json& sar = doc["sa_rect"];
        if (!sar.is_array() || static_cast<int>(sar.size()) != inst.states)
            throw ParseError("sa_rect", "expected " + std::to_string(inst.states) + " state entries");
        inst.sa_rect.per_state_action.resize(inst.states);
        for (int s = 0; s < inst.states; ++s) {
            const json& acts = sar[s];
            const std::string spath = "sa_rect[" + std::to_string(s) + "]";
            if (!acts.is_array() || static_cast<int>(acts.size()) != inst.actions)
                throw ParseError(spath, "expected " + std::to_string(inst.actions) + " action entries");
            inst.sa_rect.per_state_action[s].resize(inst.actions);
            for (int a = 0; a < inst.actions; ++a) {
                const json& rows = acts[a];
                const std::string apath = spath + "[" + std::to_string(a) + "]";
                if (!rows.is_array() || rows.empty())
                    throw ParseError(apath, "expected a nonempty array of candidate rows");
                for (std::size_t k = 0; k < rows.size(); ++k)
                    inst.sa_rect.per_state_action[s][a].push_back(detail::parse_prob_row(
                        rows[k], inst.states, apath + "[" + std::to_string(k) + "]"));
            }
        }
    }

    if (doc.contains("p0"))
        inst.p0 = detail::parse_prob_row(doc["p0"], inst.states, "p0");

    if (doc.contains("policy")) {
        const json& pol = doc["policy"];
        if (!pol.is_array() || static_cast<int>(pol.size()) != inst.states)
            throw ParseError("policy", "expected " + std::to_string(inst.states) + " rows");
        Policy pi;
        for (int s = 0; s < inst.states; ++s)
            pi.rows.push_back(detail::parse_prob_row(pol[s], inst.actions,
                                                     "policy[" + std::to_string(s) + "]"));
        inst.policy = std::move(pi);
    }
    return inst;
}

inline Instance parse_instance_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    return parse_instance(doc);
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_text(buf.str());
}

inline json to_json(const Instance& inst) {
    json doc;
    doc["states"] = inst.states;
    doc["actions"] = inst.actions;
    doc["gamma"] = inst.gamma;
    doc["rewards"] = inst.rewards;
    switch (inst.kind) {
        case InstanceKind::plain: doc["kernel"] = inst.kernel; break;
        case InstanceKind::s_rect: doc["s_rect"] = inst.s_rect.per_state; break;
        case InstanceKind::sa_rect: doc["sa_rect"] = inst.sa_rect.per_state_action; break;
    }
    if (inst.p0) doc["p0"] = *inst.p0;
    if (inst.policy) doc["policy"] = inst.policy->rows;
    return doc;
}

inline void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(inst).dump(2) << "\n";
}

}  // namespace rvg
