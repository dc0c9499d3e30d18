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

#include "usdkit/analysis.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace usdkit {

namespace {

std::string describe_point(const EnsembleParams &p) {
    std::ostringstream os;
    os << "P1=" << p.p1 << " r1=" << p.r1 << " r2=" << p.r2 << " s=" << p.s << " s~=" << p.s_tilde
       << " s'=" << p.s_prime << " s~'=" << p.s_tilde_prime;
    if (p.epsilon) os << " eps=" << *p.epsilon;
    return os.str();
}

} // namespace

VerificationResult verify_locc_global_equivalence(int n_draws, uint64_t seed) {
    VerificationResult res;
    res.claim = "locc_global_equivalence";
    std::ostringstream sweep;
    sweep << n_draws << " random ensembles and optimal-t schedules, seed " << seed;
    res.sweep = sweep.str();
    res.pass = true;

    for (int d = 0; d < n_draws; ++d) {
        SplitMix64 rng(derive_seed(seed, static_cast<uint64_t>(d)));
        EnsembleParams p = random_valid_params(rng);
        MeasurementSchedule a = random_schedule(rng, p.s, p.s_tilde);
        MeasurementSchedule b = random_schedule(rng, p.s_prime, p.s_tilde_prime);
        ProtocolReport locc = run_locc(p, a, b);

        MeasurementSchedule g;
        g.q1 = a.q1 * b.q1;
        g.q2 = a.q2 * b.q2;
        g.q1_tilde = a.q1_tilde * b.q1_tilde;
        g.q2_tilde = a.q2_tilde * b.q2_tilde;
        ProtocolReport glob = run_global(p, g);

        double resid = std::abs(locc.total_success - glob.total_success);
        if (resid > res.worst_residual) res.worst_residual = resid;
        if (resid >= 1e-12 && !res.witness) {
            res.pass = false;
            res.witness = describe_point(p);
        }
    }
    return res;
}

VerificationResult verify_theorem2(int n_draws, uint64_t seed) {
    VerificationResult res;
    res.claim = "theorem2";
    std::ostringstream sweep;
    sweep << n_draws << " random ensembles, first observer non-optimal, follow-up = stage-2 "
          << "schedule, seed " << seed;
    res.sweep = sweep.str();
    res.pass = true;

    for (int d = 0; d < n_draws; ++d) {
        SplitMix64 rng(derive_seed(seed, static_cast<uint64_t>(d)));
        EnsembleParams p = random_valid_params(rng);
        // t must exceed both the first-side overlap (non-empty q interval)
        // and the second-side overlap (so the copied schedule is valid).
        double t = rng.uniform(std::max(p.s, p.s_prime) + 1e-3, 1.0 - 1e-6);
        double tt = rng.uniform(std::max(p.s_tilde, p.s_tilde_prime) + 1e-3, 1.0 - 1e-6);
        MeasurementSchedule a = random_schedule(rng, p.s, p.s_tilde, t, tt);
        // Charlie optimal over the leftover overlaps (t, tt).
        MeasurementSchedule c = random_schedule(rng, t, tt);
        ProtocolReport ssd = run_ssd(p, a, c);

        // Same follow-up parameters as a Bob schedule: q1 q2 = t^2 >= s'^2.
        MeasurementSchedule b = c;
        b.t = p.s_prime / t;
        b.t_tilde = p.s_tilde_prime / tt;
        ProtocolReport locc = run_locc(p, a, b);

        double resid = std::abs(*ssd.at_least_one - locc.total_success);
        if (resid > res.worst_residual) res.worst_residual = resid;
        if (resid >= 1e-12 && !res.witness) {
            res.pass = false;
            std::ostringstream os;
            os << describe_point(p) << " t=" << t << " t~=" << tt;
            res.witness = os.str();
        }
    }
    return res;
}

VerificationResult verify_conjecture1(const std::vector<double> &eps_grid,
                                                const EnsembleParams &base, double c_value) {
    VerificationResult res;
    res.claim = "conjecture1";
    std::ostringstream sweep;
    sweep << eps_grid.size() << " eps points down to "
          << (eps_grid.empty() ? 0.0 : eps_grid.back()) << ", c'=" << c_value << ", "
          << describe_point(base);
    res.sweep = sweep.str();
    res.pass = true;

    // Alice stage fixed at the optimal symmetric schedule; the reference is
    // the orthogonal-case value with identical c parameters.
    EnsembleParams ortho = base;
    ortho.epsilon.reset();
    EnsemblePair ens0 = build_mixed_pair(ortho);
    MeasurementSchedule alice = MeasurementSchedule::symmetric(base.s, base.s_tilde);
    ObserverMeasurement am = alice_measurement(ens0, alice);
    PostMeasurePair post = apply_alice_failure(ens0, am);
    ProtocolReport stage = run_locc(ortho, alice, MeasurementSchedule::symmetric(base.s_prime,
                                                                                 base.s_tilde_prime));
    double pf1 = stage.p_f1, pf2 = stage.p_f2;
    double v1 = post.v1, v2 = post.v2;

    double sp = base.s_prime, stp = base.s_tilde_prime;
    double pb_reference = pf1 * (v1 * c_value * (1.0 - sp * sp) +
                                 (1.0 - v1) * c_value * (1.0 - stp * stp)) +
                          pf2 * (v2 * c_value * (1.0 - sp * sp) +
                                 (1.0 - v2) * c_value * (1.0 - stp * stp));

    double previous_gap = std::numeric_limits<double>::infinity();
    int used = 0;
    std::ostringstream notes;
    for (double eps : eps_grid) {
        EnsembleParams pe = base;
        pe.epsilon = eps;
        EnsemblePair ens = build_epsilon_pair(pe);
        std::array<double, 4> c{c_value, c_value, c_value, c_value};
        PovmSet povm;
        try {
            povm = bob_povm_general(gram_matrix(bob_vector_order(ens)), bob_vector_order(ens), c);
        } catch (const ConstraintError &e) {
            notes << " [skipped eps=" << eps << ": " << e.what() << "]";
            continue;
        }
        ++used;
        // Success formula of the second stage with the Gram-inverse elements.
        double t1 = v1 * ens.r1p.dot(povm.m1 * ens.r1p).real() +
                    (1.0 - v1) * ens.rt1p.dot(povm.m1 * ens.rt1p).real();
        double t2 = v2 * ens.r2p.dot(povm.m2 * ens.r2p).real() +
                    (1.0 - v2) * ens.rt2p.dot(povm.m2 * ens.rt2p).real();
        double pb = pf1 * t1 + pf2 * t2;

        double gap = pb_reference - pb;
        if (!(gap > 0.0)) {
            res.pass = false;
            if (!res.witness) {
                std::ostringstream os;
                os << "eps=" << eps << " gap=" << gap;
                res.witness = os.str();
            }
        }
        if (gap > previous_gap + 1e-15) {
            res.pass = false;
            if (!res.witness) {
                std::ostringstream os;
                os << "gap not monotone at eps=" << eps;
                res.witness = os.str();
            }
        }
        if (eps <= 1e-4 && gap >= 1e-6) {
            res.pass = false;
            if (!res.witness) {
                std::ostringstream os;
                os << "gap " << gap << " at eps=" << eps << " exceeds 1e-6";
                res.witness = os.str();
            }
        }
        previous_gap = gap;
    }
    if (used == 0) {
        res.pass = false;
        res.witness = "every eps point infeasible for the fixed c parameters";
    } else {
        res.worst_residual = previous_gap; // gap at the smallest feasible eps
    }
    res.sweep += notes.str();
    return res;
}

std::vector<VerificationResult> verify_all(uint64_t seed) {
    std::vector<VerificationResult> out;
    out.push_back(verify_locc_global_equivalence(1000, derive_seed(seed, 1)));
    out.push_back(verify_theorem2(1000, derive_seed(seed, 2)));
    std::vector<double> eps_grid{0.3, 0.1, 0.03, 0.01, 0.003, 0.001, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6};
    EnsembleParams base;
    base.p1 = 0.5;
    base.r1 = 0.6;
    base.r2 = 0.6;
    base.s = 0.5;
    base.s_tilde = 0.5;
    base.s_prime = 0.5;
    base.s_tilde_prime = 0.5;
    out.push_back(verify_conjecture1(eps_grid, base, 0.45));
    return out;
}

namespace {

FigureSeries figure3(int grid_points) {
    // Gap formulas of the three nontrivial cases at the reference parameters
    // P1 = 0.1, s0 = 0.7, s0~ = 0.2, with r1 = r2 = r swept over [0.05, 0.5]
    // so that the entanglement 2 sqrt(r(1-r)) increases along the series.
    FigureSeries fig;
    fig.figure_id = "fig3";
    fig.x_name = "E";
    fig.note = "P1=0.1 P2=0.9 s0=0.7 s0~=0.2, r1=r2=r in [0.05,0.5]";
    EnsembleParams base;
    base.p1 = 0.1;
    base.s = 0.875;       // s*s' = 0.7
    base.s_prime = 0.8;
    base.s_tilde = 0.25;  // s~*s~' = 0.2
    base.s_tilde_prime = 0.8;

    FigureSeries::Series ii{"case_ii", {}}, iii{"case_iii", {}}, iv{"case_iv", {}};
    for (int k = 0; k < grid_points; ++k) {
        double r = 0.05 + (0.5 - 0.05) * k / (grid_points - 1);
        EnsembleParams p = base;
        p.r1 = r;
        p.r2 = r;
        double e = 2.0 * std::sqrt(r * (1.0 - r));
        ii.points.emplace_back(e, pure_mixed_gap_case_ii(p));
        iii.points.emplace_back(e, pure_mixed_gap_case_iii(p));
        iv.points.emplace_back(e, pure_mixed_gap_case_iv(p));
    }
    fig.series = {ii, iii, iv};
    return fig;
}

FigureSeries figure6(int grid_points) {
    FigureSeries fig;
    fig.figure_id = "fig6";
    fig.x_name = "s_prime";
    fig.note = "sequential-hybrid optimum gap vs s'; series per s";
    for (double s : {0.2, 0.3, 0.4, 0.8}) {
        FigureSeries::Series ser{"s=" + std::to_string(s).substr(0, 3), {}};
        for (int k = 1; k < grid_points; ++k) {
            double sp = static_cast<double>(k) / grid_points;
            ser.points.emplace_back(sp, ssd_delta(s, sp).delta_p);
        }
        fig.series.push_back(std::move(ser));
    }
    return fig;
}

FigureSeries figure7(int grid_points) {
    FigureSeries fig;
    fig.figure_id = "fig7";
    fig.x_name = "s_prime";
    fig.note = "stage-2 joint optimum vs s'; series per s (priors from the stage-1 optimum)";
    for (double s : {0.2, 0.5, 0.9}) {
        double f = 0.5 * (1.0 - s) * (1.0 - s);
        double pf1 = (0.5 - f) / (1.0 - f);
        FigureSeries::Series ser{"s=" + std::to_string(s).substr(0, 3), {}};
        for (int k = 1; k < grid_points; ++k) {
            double sp = static_cast<double>(k) / grid_points;
            ser.points.emplace_back(sp, optimal_ssd_stage(pf1, sp).p_max);
        }
        fig.series.push_back(std::move(ser));
    }
    return fig;
}

FigureSeries figure8(int grid_points) {
    FigureSeries fig;
    fig.figure_id = "fig8";
    fig.x_name = "s";
    fig.note = "region boundaries over s in (3-2sqrt(2), 1)";
    double r = ssd_branch_threshold();

    FigureSeries::Series hyper{"ss_prime=3-2sqrt2", {}}, crit{"s_prime=s_c", {}}, diag{"s_prime=s", {}};
    for (int k = 1; k < grid_points; ++k) {
        double s = r + (1.0 - r) * k / grid_points;
        hyper.points.emplace_back(s, r / s);
        double f = 0.5 * (1.0 - s) * (1.0 - s);
        double pf1 = (0.5 - f) / (1.0 - f);
        crit.points.emplace_back(s, critical_sc(pf1, 1.0 - pf1));
        if (s <= std::sqrt(r)) diag.points.emplace_back(s, s);
    }
    fig.series = {hyper, crit, diag};
    return fig;
}

} // namespace

FigureSeries emit_figure(const std::string &figure_id, int grid_points) {
    if (grid_points < 8) throw ValidationError("emit_figure: grid too coarse");
    if (figure_id == "fig3") return figure3(grid_points);
    if (figure_id == "fig6") return figure6(grid_points);
    if (figure_id == "fig7") return figure7(grid_points);
    if (figure_id == "fig8") return figure8(grid_points);
    throw ValidationError("emit_figure: unknown figure id '" + figure_id + "'");
}

} // namespace usdkit
