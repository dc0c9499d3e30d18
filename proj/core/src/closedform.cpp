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

#include "usdkit/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "usdkit/rng.hpp"

namespace usdkit {

namespace {

constexpr double kTieTol = 1e-14;

struct PartOptimum {
    double contribution; // additive term of the success probability
    double q1;
    bool interior;
    bool boundary_tie;
};

// One decoupled block of the mixed one-shot optimum: minimize
// w1*q1 + w2*ov^2/q1 over q1 in [ov^2, 1], assuming w1 <= w2.
PartOptimum optimize_part(double w1, double w2, double ov) {
    PartOptimum out{0.0, 1.0, false, false};
    if (w2 <= 0.0) return out; // both weights vanish (w1 <= w2)
    double lhs = w2 * ov * ov;  // interior iff ov <= sqrt(w1/w2)
    out.boundary_tie = std::abs(lhs - w1) < kTieTol;
    if (lhs <= w1 + kTieTol) {
        out.interior = true;
        out.contribution = -2.0 * std::sqrt(w1 * w2) * ov;
        out.q1 = (w1 > 0.0) ? std::sqrt(w2 / w1) * ov : 1.0;
    } else {
        out.contribution = -(w1 + w2 * ov * ov);
        out.q1 = 1.0;
    }
    return out;
}

void require_table_ordering(const EnsembleParams &p, const char *who) {
    if (p.p1 * p.r1 > p.p2() * p.r2 + kTieTol ||
        p.p1 * p.r1_tilde() > p.p2() * p.r2_tilde() + kTieTol) {
        std::ostringstream os;
        os << who << ": requires P1 r1 <= P2 r2 and P1 (1-r1) <= P2 (1-r2); relabel the states "
           << "(relabel_states) and retry";
        throw ValidationError(os.str());
    }
}

double quartic_value(double pf1, double pf2, double sp, double q) {
    return pf1 * q * q * q * q - pf1 * q * q * q + pf2 * sp * q - pf2 * sp * sp;
}

double stage_objective(double pf1, double pf2, double sp, double q) {
    double a = 1.0 - q;
    double b = 1.0 - sp / q;
    return pf1 * a * a + pf2 * b * b;
}

void validate_stage_priors(double pf1, double pf2, const char *who) {
    if (!(pf1 > 0.0) || !(pf2 > 0.0) || std::abs(pf1 + pf2 - 1.0) > 1e-9)
        throw ValidationError(std::string(who) + ": priors must be positive and sum to 1");
    if (pf1 > 0.5 + 1e-12)
        throw ValidationError(std::string(who) +
                              ": requires p_f1 <= 1/2; relabel the hypotheses and retry");
}

} // namespace

double ssd_branch_threshold() { return 3.0 - 2.0 * std::sqrt(2.0); }

std::string branch_name(Branch b) {
    switch (b) {
        case Branch::BothIdentified: return "both-identified";
        case Branch::OneIdentified: return "one-identified";
        case Branch::PartiallyIdentified: return "partially-identified";
    }
    return "?";
}

EnsembleParams relabel_states(const EnsembleParams &p) {
    EnsembleParams out = p;
    out.p1 = p.p2();
    out.r1 = p.r2;
    out.r2 = p.r1;
    std::swap(out.phi1, out.phi2);
    return out;
}

OptimumReport optimal_global_mixed(const EnsembleParams &p) {
    p.validate();
    require_table_ordering(p, "optimal_global_mixed");

    PartOptimum main = optimize_part(p.p1 * p.r1, p.p2() * p.r2, p.s0());
    PartOptimum tilde = optimize_part(p.p1 * p.r1_tilde(), p.p2() * p.r2_tilde(), p.s0_tilde());

    OptimumReport rep;
    rep.p_max = 1.0 + main.contribution + tilde.contribution;
    rep.argmax = {{"q1", main.q1}, {"q1_tilde", tilde.q1}};
    if (main.interior && tilde.interior) rep.branch = Branch::BothIdentified;
    else if (!main.interior && !tilde.interior) rep.branch = Branch::OneIdentified;
    else rep.branch = Branch::PartiallyIdentified;
    std::ostringstream os;
    os << "r:" << (main.interior ? "interior" : "boundary")
       << ",tilde:" << (tilde.interior ? "interior" : "boundary");
    if (main.boundary_tie || tilde.boundary_tie) os << "(boundary)";
    rep.region = os.str();
    return rep;
}

OptimumReport optimal_global_pure(const EnsembleParams &p) {
    p.validate();
    if (p.phi1.value_or(0.0) != 0.0 || p.phi2.value_or(0.0) != 0.0)
        throw ValidationError("optimal_global_pure: phases must be zero");
    double s_star = p.s_star();
    double p1 = p.p1, p2 = p.p2();
    // The interior stationary point q1 = sqrt(P2/P1) s* must respect both box
    // bounds; it leaves through one of them once s* exceeds
    // sqrt(min(P)/max(P)), where the optimum ignores the less likely state.
    double pmin = std::min(p1, p2), pmax = std::max(p1, p2);

    OptimumReport rep;
    bool tie = std::abs(pmax * s_star * s_star - pmin) < kTieTol;
    if (pmax * s_star * s_star <= pmin + kTieTol) {
        rep.p_max = 1.0 - 2.0 * std::sqrt(p1 * p2) * s_star;
        rep.branch = Branch::BothIdentified;
        rep.argmax = {{"q1", std::sqrt(p2 / p1) * s_star}};
        rep.region = "s*<=sqrt(Pmin/Pmax)";
    } else {
        rep.p_max = pmax * (1.0 - s_star * s_star);
        rep.branch = Branch::OneIdentified;
        rep.argmax = {{"q1", p1 <= p2 ? 1.0 : s_star * s_star}};
        rep.region = "s*>sqrt(Pmin/Pmax)";
    }
    if (tie) rep.region += "(boundary)";
    return rep;
}

GapCaseResult pure_mixed_gap(const EnsembleParams &p) {
    p.validate();
    if (!(p.r1 > 0.0 && p.r1 < 1.0 && p.r2 > 0.0 && p.r2 < 1.0))
        throw ValidationError("pure_mixed_gap: r1, r2 must lie strictly in (0,1)");
    require_table_ordering(p, "pure_mixed_gap");

    double p1 = p.p1, p2 = p.p2();
    bool cond_r = p2 * p.r2 * p.s0() * p.s0() > p1 * p.r1 + kTieTol;
    bool cond_t = p2 * p.r2_tilde() * p.s0_tilde() * p.s0_tilde() > p1 * p.r1_tilde() + kTieTol;
    double s_star = p.s_star();
    bool star_above = p2 * s_star * s_star > p1 + kTieTol;
    bool star_tie = std::abs(p2 * s_star * s_star - p1) < kTieTol;

    GapCaseResult out;
    if (!cond_r && !cond_t) out.case_label = "i";
    else if (cond_r && cond_t) out.case_label = "ii";
    else out.case_label = star_above ? "iv" : "iii";
    if (star_tie) out.case_label += "(boundary)";
    out.delta_p = optimal_global_pure(p).p_max - optimal_global_mixed(p).p_max;
    return out;
}

double pure_mixed_gap_case_ii(const EnsembleParams &p) {
    double d = std::sqrt(p.r1 * p.r2_tilde()) * p.s0_tilde() -
               std::sqrt(p.r2 * p.r1_tilde()) * p.s0();
    return p.p2() * d * d;
}

double pure_mixed_gap_case_iii(const EnsembleParams &p) {
    double d = std::sqrt(p.p1 * p.r1) - std::sqrt(p.p2() * p.r2) * p.s0();
    return d * d;
}

double pure_mixed_gap_case_iv(const EnsembleParams &p) {
    double s_star = p.s_star();
    double pure = p.p2() * (1.0 - s_star * s_star);
    double mixed = 1.0 - p.p1 * p.r1 - p.p2() * p.r2 * p.s0() * p.s0() -
                   2.0 * std::sqrt(p.p1 * p.r1_tilde() * p.p2() * p.r2_tilde()) * p.s0_tilde();
    return pure - mixed;
}

QuarticResult quartic_qstar(double p_f1, double p_f2, double s_prime) {
    validate_stage_priors(p_f1, p_f2, "quartic_qstar");
    if (!(s_prime > 0.0 && s_prime < 1.0))
        throw ValidationError("quartic_qstar: overlap must lie strictly in (0,1)");

    auto g = [&](double q) { return quartic_value(p_f1, p_f2, s_prime, q); };

    // Mixed linear + log node scan of [s', 1]; roots can crowd near s'.
    std::vector<double> nodes;
    const int n = 800;
    nodes.reserve(2 * n + 2);
    double log_lo = std::log(s_prime);
    for (int k = 0; k <= n; ++k) {
        nodes.push_back(s_prime + (1.0 - s_prime) * k / n);
        nodes.push_back(std::exp(log_lo + (0.0 - log_lo) * k / n));
    }
    std::sort(nodes.begin(), nodes.end());

    QuarticResult out;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        double a = nodes[i], b = nodes[i + 1];
        double ga = g(a), gb = g(b);
        if (ga == 0.0) out.roots.push_back(a);
        if (ga * gb >= 0.0) continue;
        for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
            double m = 0.5 * (a + b);
            if (g(a) * g(m) <= 0.0) b = m;
            else a = m;
        }
        out.roots.push_back(0.5 * (a + b));
    }
    // Dedupe near-coincident brackets.
    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                    out.roots.end());
    if (out.roots.empty())
        throw ConstraintError("quartic_qstar: no admissible root in [s', 1] "
                              "(the ignore-one-state branch applies)");

    double best = -1.0;
    for (double q : out.roots) {
        double v = stage_objective(p_f1, p_f2, s_prime, q);
        if (v > best) {
            best = v;
            out.q_star = q;
        }
    }
    out.residual = std::abs(g(out.q_star));
    return out;
}

namespace {

double branch_i_value(double pf1, double pf2, double sp) {
    QuarticResult q = quartic_qstar(pf1, pf2, sp);
    return stage_objective(pf1, pf2, sp, q.q_star);
}

double branch_ii_value(double pf2, double sp) { return pf2 * (1.0 - sp) * (1.0 - sp); }

} // namespace

double critical_sc(double p_f1, double p_f2) {
    validate_stage_priors(p_f1, p_f2, "critical_sc");
    double r = ssd_branch_threshold();
    auto f = [&](double sp) { return branch_i_value(p_f1, p_f2, sp) - branch_ii_value(p_f2, sp); };

    double hi = r;
    double fhi = f(hi);
    if (fhi >= -1e-14) return r; // equal priors: both branches meet exactly at the threshold
    double lo = 1e-9;
    double flo = f(lo);
    if (flo <= 0.0) {
        std::ostringstream os;
        os << "critical_sc: bracketing failed; f(" << lo << ") = " << flo << ", f(" << hi
           << ") = " << fhi << " for p_f1 = " << p_f1;
        throw ConstraintError(os.str());
    }
    for (int it = 0; it < 90 && hi - lo > 1e-12; ++it) {
        double m = 0.5 * (lo + hi);
        if (f(m) > 0.0) lo = m;
        else hi = m;
    }
    return 0.5 * (lo + hi);
}

OptimumReport optimal_ssd_stage(double p_f1, double s) {
    if (p_f1 > 0.5 + 1e-12)
        throw ValidationError("optimal_ssd_stage: requires p_f1 <= 1/2; relabel the hypotheses");
    if (!(s > 0.0 && s < 1.0))
        throw ValidationError("optimal_ssd_stage: overlap must lie strictly in (0,1)");
    double p_f2 = 1.0 - p_f1;

    QuarticResult quartic = quartic_qstar(p_f1, p_f2, s);
    double vi = stage_objective(p_f1, p_f2, s, quartic.q_star);
    double vii = branch_ii_value(p_f2, s);

    OptimumReport rep;
    bool tie = std::abs(vi - vii) < kTieTol;
    if (vi >= vii - kTieTol) {
        rep.p_max = vi;
        rep.branch = Branch::BothIdentified;
        rep.region = "i";
        rep.argmax = {{"q1", quartic.q_star}, {"t", std::sqrt(s)}};
    } else {
        rep.p_max = vii;
        rep.branch = Branch::OneIdentified;
        rep.region = "ii";
        rep.argmax = {{"q1", 1.0}, {"t", std::sqrt(s)}};
    }
    if (tie) rep.region += "(boundary)";
    return rep;
}

UnequalPriorStageSolution unequal_prior_ssd_solution(double p_f1, double s_prime) {
    double p_f2 = 1.0 - p_f1;
    UnequalPriorStageSolution out;
    QuarticResult q = quartic_qstar(p_f1, p_f2, s_prime);
    out.q_star = q.q_star;
    out.s_c = critical_sc(p_f1, p_f2);
    out.p_bd_opt = optimal_ssd_stage(p_f1, s_prime).p_max;
    return out;
}

SsdDeltaResult ssd_delta(double s, double s_prime) {
    if (!(s > 0.0 && s < 1.0 && s_prime > 0.0 && s_prime < 1.0))
        throw ValidationError("ssd_delta: overlaps must lie strictly in (0,1)");
    double r = ssd_branch_threshold();

    double stage1, pf1;
    bool below_threshold = s <= r + kTieTol;
    if (below_threshold) {
        double rs = std::sqrt(s);
        stage1 = (1.0 - rs) * (1.0 - rs);
        pf1 = 0.5;
    } else {
        double f = 0.5 * (1.0 - s) * (1.0 - s);
        stage1 = f;
        pf1 = (0.5 - f) / (1.0 - f); // prior of the identified hypothesis; <= 1/2
    }

    OptimumReport stage2 = optimal_ssd_stage(pf1, s_prime);

    SsdDeltaResult out;
    out.local_fail = (1.0 - stage1) * (1.0 - stage2.p_max);
    double s0 = s * s_prime;
    if (s0 <= r + kTieTol) {
        double rs0 = std::sqrt(s0);
        out.global_fail = 1.0 - (1.0 - rs0) * (1.0 - rs0);
    } else {
        out.global_fail = 1.0 - 0.5 * (1.0 - s0) * (1.0 - s0);
    }
    out.delta_p = out.local_fail - out.global_fail;

    bool stage2_interior = stage2.branch == Branch::BothIdentified;
    if (below_threshold) out.region = stage2_interior ? "B-i" : "B-ii";
    else if (stage2_interior) out.region = "C-iii";
    else out.region = (s0 > r + kTieTol) ? "C-i" : "C-ii";
    return out;
}

double hybrid_reproduce_delta(double s, double s_prime) {
    return 2.0 * s * s_prime * (1.0 - s) * (1.0 - s_prime);
}

double hybrid_broadcast_delta(double s, double s_prime) {
    double s0 = s * s_prime;
    return 2.0 * (1.0 - s) * (1.0 - s_prime) * s0 * (3.0 + s0) /
           ((1.0 + s) * (1.0 + s_prime) * (1.0 + s0));
}

ScalarSearchResult maximize_scalar(const std::function<double(double)> &f, double lo, double hi,
                                   double resolution, int refine_rounds) {
    if (!(hi >= lo)) throw ValidationError("maximize_scalar: empty interval");
    ScalarSearchResult out;
    if (hi - lo < 1e-15) {
        out.arg = lo;
        out.value = f(lo);
        out.evaluations = 1;
        return out;
    }
    long steps = std::min<long>(2'000'000, std::max<long>(8, std::lround((hi - lo) / resolution)));
    double best_v = -std::numeric_limits<double>::infinity();
    double best_x = lo;
    for (long k = 0; k <= steps; ++k) {
        double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps);
        double v = f(x);
        ++out.evaluations;
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    // Golden-section refinement inside the winning bracket.
    double step = (hi - lo) / static_cast<double>(steps);
    double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    out.evaluations += 2;
    for (int it = 0; it < refine_rounds && b - a > 1e-14; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        ++out.evaluations;
    }
    double mid = 0.5 * (a + b);
    double fm = f(mid);
    ++out.evaluations;
    if (fm > best_v) {
        best_v = fm;
        best_x = mid;
    }
    out.value = best_v;
    out.arg = best_x;
    return out;
}

ScalarSearchResult maximize_scalar_random(const std::function<double(double)> &f, double lo,
                                          double hi, long n_samples, uint64_t seed) {
    if (!(hi >= lo)) throw ValidationError("maximize_scalar_random: empty interval");
    if (n_samples < 1) throw ValidationError("maximize_scalar_random: n_samples must be >= 1");
    SplitMix64 rng(seed);
    ScalarSearchResult out;
    out.value = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < n_samples; ++i) {
        double x = rng.uniform(lo, hi);
        double v = f(x);
        ++out.evaluations;
        if (v > out.value) {
            out.value = v;
            out.arg = x;
        }
    }
    return out;
}

OptimumReport grid_search_global_mixed(const EnsembleParams &p, double resolution,
                                       int refine_rounds) {
    p.validate();
    auto part = [&](double w1, double w2, double ov) {
        if (w1 <= 0.0 && w2 <= 0.0) return ScalarSearchResult{0.0, 1.0, 0};
        auto objective = [&](double q1) { return -(w1 * q1 + w2 * ov * ov / q1); };
        return maximize_scalar(objective, ov * ov, 1.0, resolution, refine_rounds);
    };
    ScalarSearchResult main = part(p.p1 * p.r1, p.p2() * p.r2, p.s0());
    ScalarSearchResult tilde = part(p.p1 * p.r1_tilde(), p.p2() * p.r2_tilde(), p.s0_tilde());

    OptimumReport rep;
    rep.p_max = 1.0 + main.value + tilde.value;
    rep.argmax = {{"q1", main.arg}, {"q1_tilde", tilde.arg}};
    rep.region = "grid-search";
    return rep;
}

OptimumReport grid_search_global_pure(const EnsembleParams &p, double resolution,
                                      int refine_rounds) {
    p.validate();
    double s_star = p.s_star();
    double p1 = p.p1, p2 = p.p2();
    auto objective = [&](double q1) { return 1.0 - (p1 * q1 + p2 * s_star * s_star / q1); };
    ScalarSearchResult best = maximize_scalar(objective, s_star * s_star, 1.0, resolution,
                                              refine_rounds);
    OptimumReport rep;
    rep.p_max = best.value;
    rep.argmax = {{"q1", best.arg}};
    rep.region = "grid-search";
    return rep;
}

SsdStageSearchResult search_ssd_stage(double p1, double p2, double overlap, int n_per_axis,
                                      int refine_rounds) {
    if (!(overlap > 0.0 && overlap < 1.0))
        throw ValidationError("search_ssd_stage: overlap must lie strictly in (0,1)");
    const int n = n_per_axis;
    auto value = [&](double t, double qa, double qc) {
        double qa2 = (overlap * overlap / (t * t)) / qa;
        double qc2 = (t * t) / qc;
        return p1 * (1.0 - qa) * (1.0 - qc) + p2 * (1.0 - qa2) * (1.0 - qc2);
    };

    struct Point {
        double v, t, qa, qc;
    };
    auto scan = [&](double tl, double th, double qal, double qah, double qcl, double qch,
                    long &evals) {
        Point best{-2.0, 0, 0, 0};
        for (int i = 0; i <= n; ++i) {
            double t = tl + (th - tl) * i / n;
            if (t <= 0.0) continue;
            double qmin = overlap * overlap / (t * t);
            if (qmin > 1.0) continue;
            double al = std::max(qal, qmin), ah = std::min(qah, 1.0);
            double cl = std::max(qcl, t * t), ch = std::min(qch, 1.0);
            if (al > ah || cl > ch) continue;
            for (int j = 0; j <= n; ++j) {
                double qa = al + (ah - al) * j / n;
                for (int k = 0; k <= n; ++k) {
                    double qc = cl + (ch - cl) * k / n;
                    double v = value(t, qa, qc);
                    ++evals;
                    if (v > best.v) best = {v, t, qa, qc};
                }
            }
        }
        return best;
    };

    SsdStageSearchResult out;
    long evals = 0;
    Point best = scan(overlap, 1.0, 0.0, 1.0, 0.0, 1.0, evals);

    // Shrinking-box refinement; a second pass seeded at the boundary catches
    // the ignore-one-state basin when the coarse winner is interior (and vice
    // versa).
    auto refine = [&](Point seed) {
        double wt = (1.0 - overlap) * 2.0 / n, wq = 2.0 / n;
        Point cur = seed;
        for (int round = 0; round < refine_rounds; ++round) {
            Point cand = scan(std::max(overlap, cur.t - wt), std::min(1.0, cur.t + wt),
                              cur.qa - wq, cur.qa + wq, cur.qc - wq, cur.qc + wq, evals);
            if (cand.v > cur.v) cur = cand;
            wt *= 0.2;
            wq *= 0.2;
        }
        return cur;
    };
    Point refined = refine(best);
    Point boundary_seed{value(std::sqrt(overlap), 1.0, 1.0), std::sqrt(overlap), 1.0, 1.0};
    Point refined_boundary = refine(boundary_seed);
    if (refined_boundary.v > refined.v) refined = refined_boundary;

    out.value = refined.v;
    out.t = refined.t;
    out.q1_first = refined.qa;
    out.q1_second = refined.qc;
    out.evaluations = evals;
    return out;
}

} // namespace usdkit
