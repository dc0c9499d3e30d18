// Copyright 2026 The usdkit Authors
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

#include "usdkit/serialize.hpp"

#include <set>
#include <sstream>

#include <json.hpp>

namespace usdkit {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void reject_unknown_keys(const json &obj, const std::set<std::string> &known, const char *where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw ValidationError(std::string(where) + ": unknown key '" + it.key() + "'");
    }
}

double number_at(const json &obj, const char *key, const char *where) {
    if (!obj.contains(key))
        throw ValidationError(std::string(where) + ": missing required key '" + key + "'");
    if (!obj.at(key).is_number())
        throw ValidationError(std::string(where) + ": key '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

// nlohmann reports byte offsets; recover a 1-based line/column for humans.
[[noreturn]] void rethrow_parse_error(const std::string &text, const json::parse_error &e) {
    size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    int line = 1, col = 1;
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << "malformed JSON at line " << line << ", column " << col << ": " << e.what();
    throw ParseError(os.str(), line, col);
}

json parse_strict(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        rethrow_parse_error(text, e);
    }
}

ordered_json params_to_node(const EnsembleParams &p) {
    ordered_json o;
    o["P1"] = p.p1;
    o["r1"] = p.r1;
    o["r2"] = p.r2;
    o["s"] = p.s;
    o["s_tilde"] = p.s_tilde;
    o["s_prime"] = p.s_prime;
    o["s_tilde_prime"] = p.s_tilde_prime;
    if (p.epsilon) o["epsilon"] = *p.epsilon;
    if (p.phi1) o["phi1"] = *p.phi1;
    if (p.phi2) o["phi2"] = *p.phi2;
    return o;
}

EnsembleParams params_from_node(const json &obj, const char *where) {
    if (!obj.is_object()) throw ValidationError(std::string(where) + ": expected an object");
    reject_unknown_keys(obj,
                        {"P1", "r1", "r2", "s", "s_tilde", "s_prime", "s_tilde_prime", "epsilon",
                         "phi1", "phi2"},
                        where);
    EnsembleParams p;
    p.p1 = number_at(obj, "P1", where);
    p.r1 = number_at(obj, "r1", where);
    p.r2 = number_at(obj, "r2", where);
    p.s = number_at(obj, "s", where);
    p.s_tilde = number_at(obj, "s_tilde", where);
    p.s_prime = number_at(obj, "s_prime", where);
    p.s_tilde_prime = number_at(obj, "s_tilde_prime", where);
    if (obj.contains("epsilon")) p.epsilon = number_at(obj, "epsilon", where);
    if (obj.contains("phi1")) p.phi1 = number_at(obj, "phi1", where);
    if (obj.contains("phi2")) p.phi2 = number_at(obj, "phi2", where);
    p.validate();
    return p;
}

ScheduleSpec schedule_from_node(const json &obj, const char *where) {
    if (!obj.is_object()) throw ValidationError(std::string(where) + ": expected an object");
    reject_unknown_keys(obj, {"q1", "q2", "q1_tilde", "q2_tilde", "t", "t_tilde"}, where);
    ScheduleSpec s;
    s.q1 = number_at(obj, "q1", where);
    s.q1_tilde = number_at(obj, "q1_tilde", where);
    if (obj.contains("q2")) s.q2 = number_at(obj, "q2", where);
    if (obj.contains("q2_tilde")) s.q2_tilde = number_at(obj, "q2_tilde", where);
    if (obj.contains("t")) s.t = number_at(obj, "t", where);
    if (obj.contains("t_tilde")) s.t_tilde = number_at(obj, "t_tilde", where);
    return s;
}

} // namespace

std::string to_json(const EnsembleParams &p, int indent) { return params_to_node(p).dump(indent); }

std::string to_json(const ProtocolReport &r, int indent) {
    ordered_json o;
    o["protocol"] = r.protocol;
    o["p_a_success"] = r.p_a_success;
    o["p_a_fail"] = r.p_a_fail;
    o["p_f1"] = r.p_f1;
    o["p_f2"] = r.p_f2;
    o["p_b_success"] = r.p_b_success;
    o["p_b_fail"] = r.p_b_fail;
    o["total_success"] = r.total_success;
    o["total_fail"] = r.total_fail;
    if (r.joint_success) o["joint_success"] = *r.joint_success;
    if (r.at_least_one) o["at_least_one"] = *r.at_least_one;
    if (r.global_total_fail) o["global_total_fail"] = *r.global_total_fail;
    if (r.delta_p) o["delta_p"] = *r.delta_p;
    if (r.phase_condition_violated) o["phase_condition_violated"] = *r.phase_condition_violated;
    return o.dump(indent);
}

std::string to_json(const OptimumReport &r, int indent) {
    ordered_json o;
    o["p_max"] = r.p_max;
    o["branch"] = branch_name(r.branch);
    o["region"] = r.region;
    ordered_json arg;
    for (const auto &[k, v] : r.argmax) arg[k] = v;
    o["argmax"] = arg;
    return o.dump(indent);
}

std::string to_json(const SampleReport &r, int indent) {
    ordered_json o;
    o["protocol"] = r.protocol;
    o["n_samples"] = r.n_samples;
    o["seed"] = r.seed;
    ordered_json counts;
    for (const auto &[k, v] : r.counts) counts[k] = v;
    o["counts"] = counts;
    ordered_json est, se;
    for (const auto &[k, v] : r.estimates) est[k] = v;
    for (const auto &[k, v] : r.standard_errors) se[k] = v;
    o["estimates"] = est;
    o["standard_errors"] = se;
    return o.dump(indent);
}

std::string to_json(const CaseIiiSampleReport &r, int indent) {
    ordered_json o;
    o["n_points"] = r.n_points;
    o["seed"] = r.seed;
    o["n_drawn"] = r.n_drawn;
    o["min_delta"] = r.min_delta;
    o["arg_s"] = r.arg_s;
    o["arg_s_prime"] = r.arg_s_prime;
    return o.dump(indent);
}

std::string to_json(const VerificationResult &r, int indent) {
    ordered_json o;
    o["claim"] = r.claim;
    o["sweep"] = r.sweep;
    o["pass"] = r.pass;
    o["worst_residual"] = r.worst_residual;
    if (r.witness) o["witness"] = *r.witness;
    return o.dump(indent);
}

std::string to_json(const std::vector<VerificationResult> &rs, int indent) {
    ordered_json arr = ordered_json::array();
    for (const auto &r : rs) arr.push_back(ordered_json::parse(to_json(r, -1)));
    return arr.dump(indent);
}

std::string to_json(const FigureSeries &f, int indent) {
    ordered_json o;
    o["figure_id"] = f.figure_id;
    o["x_name"] = f.x_name;
    o["note"] = f.note;
    ordered_json series = ordered_json::array();
    for (const auto &s : f.series) {
        ordered_json e;
        e["label"] = s.label;
        ordered_json pts = ordered_json::array();
        for (const auto &[x, y] : s.points) pts.push_back(ordered_json::array({x, y}));
        e["points"] = pts;
        series.push_back(e);
    }
    o["series"] = series;
    return o.dump(indent);
}

std::string to_csv(const FigureSeries &f) {
    std::ostringstream os;
    os.precision(17);
    os << "x,y,series\n";
    for (const auto &s : f.series)
        for (const auto &[x, y] : s.points) os << x << "," << y << "," << s.label << "\n";
    return os.str();
}

std::string counts_to_csv(const SampleReport &r) {
    std::ostringstream os;
    os << "pattern,count\n";
    for (const auto &[k, v] : r.counts) os << k << "," << v << "\n";
    return os.str();
}

EnsembleParams ensemble_params_from_json(const std::string &text) {
    return params_from_node(parse_strict(text), "ensemble");
}

MeasurementSchedule ScheduleSpec::resolve(double ov, double ov_tilde) const {
    MeasurementSchedule s = MeasurementSchedule::from_q1(ov, ov_tilde, q1, q1_tilde, t, t_tilde);
    if (q2) s.q2 = *q2;
    if (q2_tilde) s.q2_tilde = *q2_tilde;
    s.validate_for(ov, ov_tilde);
    return s;
}

RunConfig run_config_from_json(const std::string &text) {
    json root = parse_strict(text);
    if (!root.is_object()) throw ValidationError("config: expected a JSON object");
    reject_unknown_keys(root,
                        {"ensemble", "alice", "bob", "charlie", "global", "protocol", "target",
                         "optimizer", "output"},
                        "config");
    RunConfig cfg;
    if (root.contains("ensemble")) cfg.ensemble = params_from_node(root["ensemble"], "ensemble");
    if (root.contains("alice")) cfg.alice = schedule_from_node(root["alice"], "alice");
    if (root.contains("bob")) cfg.bob = schedule_from_node(root["bob"], "bob");
    if (root.contains("charlie")) cfg.charlie = schedule_from_node(root["charlie"], "charlie");
    if (root.contains("global")) cfg.global = schedule_from_node(root["global"], "global");
    if (root.contains("protocol")) {
        if (!root["protocol"].is_string()) throw ValidationError("config: 'protocol' must be a string");
        cfg.protocol = root["protocol"].get<std::string>();
    }
    if (root.contains("target")) {
        if (!root["target"].is_string()) throw ValidationError("config: 'target' must be a string");
        cfg.target = root["target"].get<std::string>();
    }
    if (root.contains("optimizer")) {
        const json &opt = root["optimizer"];
        if (!opt.is_object()) throw ValidationError("config: 'optimizer' must be an object");
        reject_unknown_keys(opt, {"resolution", "refine_rounds", "seed", "n_samples"}, "optimizer");
        if (opt.contains("resolution")) cfg.resolution = number_at(opt, "resolution", "optimizer");
        if (opt.contains("refine_rounds"))
            cfg.refine_rounds = static_cast<int>(number_at(opt, "refine_rounds", "optimizer"));
        if (opt.contains("seed")) cfg.seed = opt["seed"].get<uint64_t>();
        if (opt.contains("n_samples")) cfg.n_samples = opt["n_samples"].get<uint64_t>();
    }
    if (root.contains("output")) {
        const json &out = root["output"];
        if (!out.is_object()) throw ValidationError("config: 'output' must be an object");
        reject_unknown_keys(out, {"path", "format"}, "output");
        if (out.contains("path")) cfg.out_path = out["path"].get<std::string>();
        if (out.contains("format")) cfg.format = out["format"].get<std::string>();
    }
    return cfg;
}

} // namespace usdkit
