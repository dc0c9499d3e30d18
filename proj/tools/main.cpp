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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "usdkit/serialize.hpp"

namespace {

using namespace usdkit;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitValidation = 2;
constexpr int kExitParse = 3;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const std::string &text, const std::optional<std::string> &out_path) {
    if (out_path) {
        std::ofstream out(*out_path, std::ios::binary);
        if (!out) throw ValidationError("cannot write file: " + *out_path);
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    } else {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    }
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string format;
    uint64_t seed = 0;
    bool seed_set = false;
    uint64_t n = 0;
    bool n_set = false;
    double resolution = 0.0;
    bool resolution_set = false;
};

void add_common(CLI::App *cmd, CommonFlags &flags, bool config_required) {
    auto *cfg = cmd->add_option("--config", flags.config_path, "JSON configuration file");
    if (config_required) cfg->required();
    cmd->add_option("--out", flags.out_path, "output path (default: stdout)");
    cmd->add_option("--format", flags.format, "output format: json|csv");
    cmd->add_option("--seed", flags.seed, "64-bit seed")->each([&flags](const std::string &) {
        flags.seed_set = true;
    });
    cmd->add_option("--n", flags.n, "sample or grid count")->each([&flags](const std::string &) {
        flags.n_set = true;
    });
    cmd->add_option("--resolution", flags.resolution, "grid resolution")
        ->each([&flags](const std::string &) { flags.resolution_set = true; });
}

RunConfig load_config(const CommonFlags &flags) {
    RunConfig cfg;
    if (!flags.config_path.empty()) cfg = run_config_from_json(read_file(flags.config_path));
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.n_set) cfg.n_samples = flags.n;
    if (flags.resolution_set) cfg.resolution = flags.resolution;
    if (!flags.out_path.empty()) cfg.out_path = flags.out_path;
    if (!flags.format.empty()) cfg.format = flags.format;
    return cfg;
}

const EnsembleParams &need_ensemble(const RunConfig &cfg) {
    if (!cfg.ensemble) throw ValidationError("config: missing required key 'ensemble'");
    return *cfg.ensemble;
}

ProtocolConfig assemble_protocol(const RunConfig &cfg, const std::string &protocol) {
    ProtocolConfig pc;
    pc.protocol = protocol;
    pc.params = need_ensemble(cfg);
    const EnsembleParams &p = pc.params;
    if (protocol == "locc" || protocol == "pure_local") {
        if (!cfg.alice) throw ValidationError("config: missing schedule 'alice'");
        if (!cfg.bob) throw ValidationError("config: missing schedule 'bob'");
        pc.alice = cfg.alice->resolve(p.s, p.s_tilde);
        pc.bob = cfg.bob->resolve(p.s_prime, p.s_tilde_prime);
    } else if (protocol == "global") {
        if (!cfg.global) throw ValidationError("config: missing schedule 'global'");
        pc.global = cfg.global->resolve(p.s0(), p.s0_tilde());
    } else if (protocol == "ssd") {
        if (!cfg.alice) throw ValidationError("config: missing schedule 'alice'");
        if (!cfg.charlie) throw ValidationError("config: missing schedule 'charlie'");
        pc.alice = cfg.alice->resolve(p.s, p.s_tilde);
        pc.charlie = cfg.charlie->resolve(pc.alice->t, pc.alice->t_tilde);
    }
    return pc;
}

int cmd_discriminate(const CommonFlags &flags, const std::string &protocol_flag,
                     bool q_from_locc) {
    RunConfig cfg = load_config(flags);
    std::string protocol = !protocol_flag.empty() ? protocol_flag
                                                  : cfg.protocol.value_or("locc");
    if (protocol == "global" && q_from_locc) {
        if (!cfg.alice || !cfg.bob)
            throw ValidationError("--q-from-locc requires 'alice' and 'bob' schedules");
        const EnsembleParams &p = need_ensemble(cfg);
        MeasurementSchedule a = cfg.alice->resolve(p.s, p.s_tilde);
        MeasurementSchedule b = cfg.bob->resolve(p.s_prime, p.s_tilde_prime);
        ProtocolReport locc = run_locc(p, a, b);
        MeasurementSchedule g;
        g.q1 = a.q1 * b.q1;
        g.q2 = a.q2 * b.q2;
        g.q1_tilde = a.q1_tilde * b.q1_tilde;
        g.q2_tilde = a.q2_tilde * b.q2_tilde;
        ProtocolReport glob = run_global(p, g);
        std::ostringstream os;
        os.precision(17);
        os << "{\n  \"report\": " << to_json(glob, 2) << ",\n  \"delta_vs_locc\": "
           << (glob.total_success - locc.total_success) << "\n}";
        emit(os.str(), cfg.out_path);
        return kExitOk;
    }
    if (protocol != "locc" && protocol != "global" && protocol != "pure_local")
        throw ValidationError("discriminate: protocol must be locc, global or pure_local");
    ProtocolReport rep = run_protocol(assemble_protocol(cfg, protocol));
    emit(to_json(rep), cfg.out_path);
    return kExitOk;
}

int cmd_ssd(const CommonFlags &flags) {
    RunConfig cfg = load_config(flags);
    ProtocolReport rep = run_protocol(assemble_protocol(cfg, "ssd"));
    emit(to_json(rep), cfg.out_path);
    return kExitOk;
}

int cmd_hybrid(const CommonFlags &flags, const std::string &protocol_flag) {
    RunConfig cfg = load_config(flags);
    std::string protocol = !protocol_flag.empty() ? protocol_flag
                                                  : cfg.protocol.value_or("reproduce");
    if (protocol == "reproduce" || protocol == "broadcast") {
        ProtocolConfig pc;
        pc.protocol = protocol;
        pc.params = need_ensemble(cfg);
        emit(to_json(run_protocol(pc)), cfg.out_path);
        return kExitOk;
    }
    if (protocol == "ssd") {
        const EnsembleParams &p = need_ensemble(cfg);
        SsdDeltaResult d = ssd_delta(p.s, p.s_prime);
        std::ostringstream os;
        os.precision(17);
        os << "{\n  \"region\": \"" << d.region << "\",\n  \"delta_p\": " << d.delta_p
           << ",\n  \"local_fail\": " << d.local_fail << ",\n  \"global_fail\": " << d.global_fail
           << "\n}";
        emit(os.str(), cfg.out_path);
        return kExitOk;
    }
    throw ValidationError("hybrid: protocol must be reproduce, broadcast or ssd");
}

int cmd_optimize(const CommonFlags &flags, bool formula_only) {
    RunConfig cfg = load_config(flags);
    const EnsembleParams &p = need_ensemble(cfg);
    std::string target = cfg.target.value_or("global-mixed");

    OptimumReport closed;
    std::optional<OptimumReport> grid;
    if (target == "global-mixed") {
        closed = optimal_global_mixed(p);
        if (!formula_only) grid = grid_search_global_mixed(p, cfg.resolution, cfg.refine_rounds);
    } else if (target == "global-pure") {
        closed = optimal_global_pure(p);
        if (!formula_only) grid = grid_search_global_pure(p, cfg.resolution, cfg.refine_rounds);
    } else if (target == "ssd-stage") {
        closed = optimal_ssd_stage(p.p1, p.s);
        if (!formula_only) {
            SsdStageSearchResult s = search_ssd_stage(p.p1, p.p2(), p.s);
            OptimumReport g;
            g.p_max = s.value;
            g.region = "grid-search";
            g.argmax = {{"t", s.t}, {"q1_first", s.q1_first}, {"q1_second", s.q1_second}};
            grid = g;
        }
    } else {
        throw ValidationError("optimize: target must be global-mixed, global-pure or ssd-stage");
    }

    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"closed_form\": " << to_json(closed, 2);
    if (grid) {
        double diff = closed.p_max - grid->p_max;
        os << ",\n  \"grid_search\": " << to_json(*grid, 2) << ",\n  \"difference\": " << diff
           << ",\n  \"closed_minus_grid_within_1e-6\": "
           << (std::abs(diff) < 1e-6 ? "true" : "false");
    }
    os << "\n}";
    emit(os.str(), cfg.out_path);
    return kExitOk;
}

int cmd_verify(const CommonFlags &flags, const std::string &claim) {
    RunConfig cfg = load_config(flags);
    uint64_t seed = cfg.seed;
    std::vector<VerificationResult> results;
    if (claim == "all") {
        results = verify_all(seed);
        CaseIiiSampleReport rep = sample_case_iii_region(100000, derive_seed(seed, 4));
        VerificationResult case3;
        case3.claim = "case_iii_minimum";
        case3.sweep = "100000 uniform region samples";
        case3.pass = rep.min_delta > 0.0;
        case3.worst_residual = rep.min_delta;
        if (!case3.pass) {
            std::ostringstream os;
            os << "s=" << rep.arg_s << " s'=" << rep.arg_s_prime;
            case3.witness = os.str();
        }
        results.push_back(case3);
    } else if (claim == "locc-global") {
        results.push_back(verify_locc_global_equivalence(1000, seed));
    } else if (claim == "theorem2") {
        results.push_back(verify_theorem2(1000, seed));
    } else if (claim == "conjecture1") {
        std::vector<double> grid{0.3, 0.1, 0.03, 0.01, 0.003, 0.001, 3e-4, 1e-4, 3e-5, 1e-5,
                                 3e-6, 1e-6};
        EnsembleParams base;
        base.r1 = base.r2 = 0.6;
        results.push_back(verify_conjecture1(grid, base, 0.45));
    } else if (claim == "case-iii") {
        CaseIiiSampleReport rep =
            sample_case_iii_region(flags.n_set ? cfg.n_samples : 100000, seed);
        VerificationResult r;
        r.claim = "case_iii_minimum";
        r.sweep = "uniform region samples";
        r.pass = rep.min_delta > 0.0;
        r.worst_residual = rep.min_delta;
        results.push_back(r);
    } else {
        throw ValidationError("verify: unknown claim '" + claim + "'");
    }
    emit(to_json(results), cfg.out_path);
    for (const auto &r : results)
        if (!r.pass) return kExitVerifyFail;
    return kExitOk;
}

int cmd_figure(const CommonFlags &flags, const std::string &figure_id) {
    RunConfig cfg = load_config(flags);
    int grid = flags.n_set ? static_cast<int>(cfg.n_samples) : 400;
    FigureSeries fig = emit_figure(figure_id, grid);
    std::string format = cfg.format.value_or("csv");
    if (format == "csv") emit(to_csv(fig), cfg.out_path);
    else if (format == "json") emit(to_json(fig), cfg.out_path);
    else throw ValidationError("figure: format must be csv or json");
    return kExitOk;
}

int cmd_sample(const CommonFlags &flags) {
    RunConfig cfg = load_config(flags);
    std::string protocol = cfg.protocol.value_or("locc");
    SampleReport rep;
    if (protocol == "reproduce" || protocol == "broadcast") {
        ProtocolConfig pc;
        pc.protocol = protocol;
        pc.params = need_ensemble(cfg);
        rep = sample_protocol(pc, cfg.n_samples, cfg.seed);
    } else {
        rep = sample_protocol(assemble_protocol(cfg, protocol), cfg.n_samples, cfg.seed);
    }
    std::string format = cfg.format.value_or("json");
    if (format == "json") emit(to_json(rep), cfg.out_path);
    else if (format == "csv") emit(counts_to_csv(rep), cfg.out_path);
    else throw ValidationError("sample: format must be json or csv");
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Unambiguous discrimination of two-state bipartite ensembles: protocols, "
                 "optimizers and verification suites"};
    app.require_subcommand(1);

    CommonFlags f_disc, f_ssd, f_hyb, f_opt, f_ver, f_fig, f_smp;
    std::string protocol_flag, hybrid_protocol, claim = "all", figure_id;
    bool q_from_locc = false, formula_only = false;

    CLI::App *disc = app.add_subcommand("discriminate", "Evaluate one discrimination protocol");
    add_common(disc, f_disc, true);
    disc->add_option("--protocol", protocol_flag, "locc | global | pure_local");
    disc->add_flag("--q-from-locc", q_from_locc,
                   "derive the joint q parameters from the local schedules and report the gap");

    CLI::App *ssd = app.add_subcommand("ssd", "Evaluate the sequential protocol");
    add_common(ssd, f_ssd, true);

    CLI::App *hyb = app.add_subcommand("hybrid", "Evaluate a two-stage hybrid protocol");
    add_common(hyb, f_hyb, true);
    hyb->add_option("--protocol", hybrid_protocol, "reproduce | broadcast | ssd");

    CLI::App *opt = app.add_subcommand("optimize", "Closed-form optimum with a grid-search oracle");
    add_common(opt, f_opt, true);
    opt->add_flag("--formula-only", formula_only, "skip the grid-search oracle");

    CLI::App *ver = app.add_subcommand("verify", "Run identity/inequality verification suites");
    add_common(ver, f_ver, false);
    ver->add_option("claim", claim, "all | locc-global | theorem2 | conjecture1 | case-iii");

    CLI::App *fig = app.add_subcommand("figure", "Emit figure data series");
    add_common(fig, f_fig, false);
    fig->add_option("figure_id", figure_id, "fig3 | fig6 | fig7 | fig8")->required();

    CLI::App *smp = app.add_subcommand("sample", "Monte Carlo outcome sampling");
    add_common(smp, f_smp, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (disc->parsed()) return cmd_discriminate(f_disc, protocol_flag, q_from_locc);
        if (ssd->parsed()) return cmd_ssd(f_ssd);
        if (hyb->parsed()) return cmd_hybrid(f_hyb, hybrid_protocol);
        if (opt->parsed()) return cmd_optimize(f_opt, formula_only);
        if (ver->parsed()) return cmd_verify(f_ver, claim);
        if (fig->parsed()) return cmd_figure(f_fig, figure_id);
        if (smp->parsed()) return cmd_sample(f_smp);
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConstraintError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
