#include "acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "analysis.hpp"
#include "errors.hpp"
#include "kdv.hpp"
#include "model.hpp"

namespace epsol {
namespace acceptance {
namespace {

const double kLadder[4] = {0.1, 0.05, 0.025, 0.0125};
const double kSigmas[2] = {0.0, 2.0};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

struct SolveData {
    double sigma = 0.0;
    double epsilon = 0.0;
    bool ok = false;
    std::string error;
    WaveProfile half;
    WaveProfile full;
    RemainderField rem;
    double drift = 0.0;
    double drift_bound = 0.0;      // 1e-8 * g(1)
    double tail_fitted = 0.0;
    double tail_expected = 0.0;
    double kdv_gap = 0.0;
};

SolveData run_solve(double sigma, double eps, SolveOptions options) {
    SolveData d;
    d.sigma = sigma;
    d.epsilon = eps;
    // The drift bound is criterion 4's explicit comparison; the in-solver
    // guard is lifted so an overshoot is reported, not thrown.
    options.drift_tol_rel = 1e30;
    try {
        const Params p = Params::physical(sigma, 1.0, eps);
        d.half = dynamics::integrate_half_profile(p, options);
        d.full = dynamics::mirror_to_full_line(d.half);
        d.rem = kdv::compute_remainders(d.full, -1.0);
        d.drift = d.half.first_integral_drift;
        d.drift_bound = 1e-8 * model::g_of_1(p);
        d.tail_fitted = dynamics::tail_rate(d.half, options.tail_cut);
        d.tail_expected = dynamics::saddle_rate(p);
        const KdvReference ref = KdvReference::for_params(p);
        for (std::size_t i = 0; i < d.full.size(); ++i)
            d.kdv_gap = std::max(d.kdv_gap,
                                 std::fabs(d.full.excess[i] / eps -
                                           kdv::soliton(ref, std::fabs(d.full.xi[i]))));
        d.ok = true;
    } catch (const Error& e) {
        d.error = std::string(status_name(e.status())) + ": " + e.what();
    }
    return d;
}

using SolveTable = std::map<std::pair<double, double>, SolveData>;

CriterionResult criterion_failed_solves(int index, const std::string& name,
                                        const std::vector<const SolveData*>& bad) {
    CriterionResult r{index, name, false, {}};
    std::ostringstream os;
    os << "solver failed: ";
    for (std::size_t i = 0; i < bad.size() && i < 2; ++i) {
        if (i) os << "; ";
        os << "sigma=" << bad[i]->sigma << " eps=" << bad[i]->epsilon << ": "
           << bad[i]->error;
    }
    r.summary = os.str();
    return r;
}

// Criterion 1: |n*-1-3γε/V|, |u*-3γε|, |φ*-3γε/V| each <= 5 eps^2, and each
// component's error/eps^2 varies by at most 2x across the ladder.
CriterionResult criterion_peak_asymptotics() {
    CriterionResult r{1, "peak asymptotics: component errors <= 5*eps^2, constants stable within 2x", true, {}};
    double worst_ratio = 0.0;     // err / (5 eps^2), > 1 is a failure
    std::string worst_where;
    double worst_stability = 0.0;
    std::string worst_stab_where;
    const char* comp_names[3] = {"n", "u", "phi"};
    for (double sigma : kSigmas) {
        double cmin[3] = {1e300, 1e300, 1e300};
        double cmax[3] = {0.0, 0.0, 0.0};
        for (double eps : kLadder) {
            const PeakCheck pc = analysis::peak_check(Params::physical(sigma, 1.0, eps));
            const double errs[3] = {pc.err_n, pc.err_u, pc.err_phi};
            for (int c = 0; c < 3; ++c) {
                const double constant = errs[c] / (eps * eps);
                cmin[c] = std::min(cmin[c], constant);
                cmax[c] = std::max(cmax[c], constant);
                const double ratio = constant / 5.0;
                if (ratio > worst_ratio) {
                    worst_ratio = ratio;
                    worst_where = fmt("sigma=%g eps=%g ", sigma, eps) + comp_names[c];
                }
            }
        }
        for (int c = 0; c < 3; ++c) {
            const double stability = cmax[c] / cmin[c];
            if (stability > worst_stability) {
                worst_stability = stability;
                worst_stab_where = fmt("sigma=%g ", sigma) + comp_names[c];
            }
        }
    }
    r.passed = worst_ratio <= 1.0 && worst_stability <= 2.0;
    r.summary = fmt("worst err/eps^2 = %.4f (bound 5, at ", 5.0 * worst_ratio) + worst_where +
                fmt("); worst constant ratio = %.4f (bound 2, at ", worst_stability) +
                worst_stab_where + ")";
    return r;
}

// Criterion 2: fitted log-log slopes of the remainder sup-norms in [1.8, 2.2].
CriterionResult criterion_remainder_order(const SolveTable& table) {
    CriterionResult r{2, "remainder order: sup-norm slopes vs eps in [1.8, 2.2]", true, {}};
    double worst_dev = 0.0;
    double worst_slope = 2.0;
    std::string worst_where;
    const char* field_names[3] = {"n_R", "u_R", "phi_R"};
    for (double sigma : kSigmas) {
        std::vector<double> eps, sup[3];
        for (double e : kLadder) {
            const SolveData& d = table.at({sigma, e});
            if (!d.ok) return criterion_failed_solves(2, r.name, {&d});
            eps.push_back(e);
            sup[0].push_back(d.rem.sup_n);
            sup[1].push_back(d.rem.sup_u);
            sup[2].push_back(d.rem.sup_phi);
        }
        for (int f = 0; f < 3; ++f) {
            const double slope = analysis::fit_loglog_slope(eps, sup[f]);
            const double dev = std::fabs(slope - 2.0);
            if (dev > worst_dev) {
                worst_dev = dev;
                worst_slope = slope;
                worst_where = fmt("sigma=%g ", sigma) + field_names[f];
            }
            if (slope < 1.8 || slope > 2.2) r.passed = false;
        }
    }
    r.summary = fmt("worst slope = %.4f (band [1.8, 2.2], at ", worst_slope) + worst_where + ")";
    return r;
}

// Criterion 3: the scaled-wave gap max|eps^{-1}(n-1) - n_KdV| shrinks by at
// least 5x from eps = 0.1 to eps = 0.01.
CriterionResult criterion_figure1(const SolveTable& table) {
    CriterionResult r{3, "scaled-wave convergence: gap(eps=0.01) at least 5x below gap(eps=0.1)", true, {}};
    std::ostringstream os;
    for (double sigma : kSigmas) {
        const SolveData& coarse = table.at({sigma, 0.1});
        const SolveData& fine = table.at({sigma, 0.01});
        if (!coarse.ok || !fine.ok)
            return criterion_failed_solves(3, r.name, {coarse.ok ? &fine : &coarse});
        const double factor = coarse.kdv_gap / fine.kdv_gap;
        if (!(factor >= 5.0)) r.passed = false;
        if (sigma != kSigmas[0]) os << "; ";
        os << fmt("sigma=%g: factor = %.2f (bound 5)", sigma, factor);
    }
    r.summary = os.str();
    return r;
}

// Criterion 4: drift <= 1e-8 g(1) on every solve, and halving dxi cuts the
// drift by a factor in [12, 20] where truncation dominates round-off.
CriterionResult criterion_conservation(const SolveTable& table,
                                       const SolveOptions& options) {
    CriterionResult r{4, "first-integral conservation and RK4 order", true, {}};
    double worst_rel = 0.0;
    std::string worst_where;
    for (const auto& [key, d] : table) {
        if (!d.ok) return criterion_failed_solves(4, r.name, {&d});
        const double rel = d.drift / d.drift_bound;
        if (rel > worst_rel) {
            worst_rel = rel;
            worst_where = fmt("sigma=%g eps=%g", d.sigma, d.epsilon);
        }
    }
    if (worst_rel > 1.0) r.passed = false;

    // Order check at the coarse end of the admissible step range: at the
    // default dxi = 1e-3 the drift sits at the double-precision floor
    // (~1e-16) where halving cannot show the 16x truncation scaling.
    SolveOptions coarse = options;
    std::ostringstream os;
    os << fmt("worst drift = %.3e of bound (at ", worst_rel) << worst_where << ")";
    for (double sigma : kSigmas) {
        coarse.dxi = 1e-2;
        const SolveData a = run_solve(sigma, 0.1, coarse);
        coarse.dxi = 5e-3;
        const SolveData b = run_solve(sigma, 0.1, coarse);
        if (!a.ok || !b.ok) return criterion_failed_solves(4, r.name, {a.ok ? &b : &a});
        const double factor = a.drift / b.drift;
        if (!(factor >= 12.0 && factor <= 20.0)) r.passed = false;
        os << fmt("; sigma=%g: drift(1e-2)/drift(5e-3) = %.2f (band [12, 20])", sigma, factor);
    }
    r.summary = os.str();
    return r;
}

// Criterion 5: fitted tail rate within 3% of the saddle eigenvalue.
CriterionResult criterion_tail_rate(const SolveTable& table) {
    CriterionResult r{5, "tail decay rate matches the saddle eigenvalue within 3%", true, {}};
    double worst = 0.0;
    std::string worst_where;
    for (double sigma : kSigmas) {
        for (double eps : kLadder) {
            const SolveData& d = table.at({sigma, eps});
            if (!d.ok) return criterion_failed_solves(5, r.name, {&d});
            const double rel = std::fabs(d.tail_fitted - d.tail_expected) / d.tail_expected;
            if (rel > worst) {
                worst = rel;
                worst_where = fmt("sigma=%g eps=%g", sigma, eps);
            }
        }
    }
    r.passed = worst <= 0.03;
    r.summary = fmt("worst relative rate error = %.3e (bound 3e-2, at ", worst) + worst_where + ")";
    return r;
}

// Criterion 6: zeta and critical-density residuals at 1e-10.
CriterionResult criterion_constants() {
    CriterionResult r{6, "critical constants: zeta and root residuals <= 1e-10", true, {}};
    double worst = 0.0;
    std::string worst_where;
    auto track = [&](double value, const std::string& where) {
        if (value > worst) {
            worst = value;
            worst_where = where;
        }
        if (value > 1e-10) r.passed = false;
    };
    {
        const double z = model::zeta_root(0.0);
        track(std::fabs(z * z + 1.0 - std::exp(0.5 * z * z)), "zeta_0 equation");
    }
    for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
        const double z = model::zeta_root(sigma);
        if (!(z > std::sqrt((1.0 + sigma) / sigma))) r.passed = false;
        const double f = sigma * std::log(z) + std::log(sigma) +
                         std::log((z - 1.0) * (z - 1.0) + 1.0 / sigma) -
                         0.5 * sigma * (z * z - 1.0);
        track(std::fabs(f), fmt("zeta residual sigma=%g", sigma));
    }
    for (double sigma : kSigmas) {
        for (double eps : kLadder) {
            const Params p = Params::physical(sigma, 1.0, eps);
            const CriticalDensities roots = model::solve_critical_densities(p);
            track(std::fabs(model::stationarity_defect(p, roots.n_ce)),
                  fmt("l(n_ce) sigma=%g eps=%g", sigma, eps));
            const double gap = model::first_integral_gap(p, roots.n_star - 1.0);
            track(std::fabs(gap) / model::g_of_1(p),
                  fmt("g(n_star)-g(1) sigma=%g eps=%g", sigma, eps));
        }
    }
    r.summary = fmt("worst residual = %.3e (bound 1e-10, at ", worst) + worst_where + ")";
    return r;
}

// Criterion 7: monotonicity, positivity, evenness, E(0) = 0 on every profile.
CriterionResult criterion_structure(const SolveTable& table) {
    CriterionResult r{7, "structural invariants: monotone, positive, even, E(0) = 0", true, {}};
    std::size_t checked = 0;
    for (const auto& [key, d] : table) {
        if (!d.ok) return criterion_failed_solves(7, r.name, {&d});
        const WaveProfile& h = d.half;
        for (std::size_t i = 1; i < h.size(); ++i) {
            if (!(h.excess[i] < h.excess[i - 1]) || !(h.u[i] < h.u[i - 1]) ||
                !(h.phi[i] < h.phi[i - 1])) {
                r.passed = false;
                r.summary = fmt("monotonicity violated at sigma=%g eps=%g", d.sigma, d.epsilon);
            }
            if (!(h.excess[i] > 0.0) || !(h.u[i] > 0.0) || !(h.phi[i] > 0.0)) {
                r.passed = false;
                r.summary = fmt("positivity violated at sigma=%g eps=%g", d.sigma, d.epsilon);
            }
        }
        const WaveProfile& f = d.full;
        const std::size_t peak = f.peak_index;
        if (f.efield[peak] != 0.0) {
            r.passed = false;
            r.summary = fmt("E(0) != 0 at sigma=%g eps=%g", d.sigma, d.epsilon);
        }
        for (std::size_t i = 1; i <= peak; ++i) {
            if (f.excess[peak - i] != f.excess[peak + i] ||
                f.u[peak - i] != f.u[peak + i] || f.phi[peak - i] != f.phi[peak + i] ||
                f.efield[peak - i] != -f.efield[peak + i]) {
                r.passed = false;
                r.summary = fmt("evenness violated at sigma=%g eps=%g", d.sigma, d.epsilon);
            }
        }
        ++checked;
    }
    if (r.passed) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "all invariants hold on %zu profiles (bitwise evenness)",
                      checked);
        r.summary = buf;
    }
    return r;
}

// Criterion 8: analytic KdV residual <= 1e-12 for three (gamma, V) pairs.
CriterionResult criterion_kdv_identity() {
    CriterionResult r{8, "KdV traveling identity: analytic residual <= 1e-12", true, {}};
    double worst = 0.0;
    const double pairs[3][2] = {{1.0, 1.0}, {1.0, std::sqrt(3.0)}, {2.0, 1.0}};
    for (const auto& pv : pairs) {
        const KdvReference ref = KdvReference::make(pv[0], pv[1]);
        worst = std::max(worst, kdv::traveling_residual_max(ref, -10.0, 10.0, 1e-2, false));
    }
    r.passed = worst <= 1e-12;
    r.summary = fmt("worst residual = %.3e (bound 1e-12)", worst);
    return r;
}

// Criterion 9: wrong sound speed keeps the peak away from 1, the correct one
// sends it to 1 linearly.
CriterionResult criterion_necessity() {
    CriterionResult r{9, "sound-speed necessity: wrong V stays >= 0.05, correct V falls below 3.5*eps", true, {}};
    const std::vector<double> eps = {0.1, 0.05, 0.025};
    const NecessityProbe wrong = analysis::necessity_probe(0.0, 1.0, 1.2, eps);
    double wrong_min = std::numeric_limits<double>::infinity();
    for (double x : wrong.peak_excess) wrong_min = std::min(wrong_min, x);
    if (wrong.vacuous || !wrong.confirmed || wrong.peak_excess.size() != eps.size() ||
        !(wrong_min > 0.05))
        r.passed = false;

    // "Falls below": the ratio sequence decreases along the ladder and ends
    // under the bound.
    double last_ratio = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (double e : eps) {
        const double ratio = model::peak_excess(Params::physical(0.0, 1.0, e)) / e;
        if (!(ratio < last_ratio)) decreasing = false;
        last_ratio = ratio;
    }
    if (!decreasing || !(last_ratio < 3.5)) r.passed = false;
    r.summary = fmt("wrong-V min peak excess = %.4f (bound 0.05); correct-V final (n*-1)/eps = %.4f (bound 3.5)",
                    wrong_min, last_ratio) +
                (decreasing ? "" : "; ratio sequence not decreasing");
    return r;
}

} // namespace

std::vector<CriterionResult> run(const SolveOptions& options) {
    // One solve per (sigma, epsilon) feeds criteria 2-5 and 7.
    std::vector<std::pair<double, double>> keys;
    for (double sigma : kSigmas) {
        for (double eps : kLadder) keys.emplace_back(sigma, eps);
        keys.emplace_back(sigma, 0.01);
    }
    std::vector<std::future<SolveData>> futures;
    futures.reserve(keys.size());
    for (const auto& [sigma, eps] : keys)
        futures.push_back(std::async(std::launch::async, run_solve, sigma, eps, options));
    SolveTable table;
    for (std::size_t i = 0; i < keys.size(); ++i) table[keys[i]] = futures[i].get();

    std::vector<CriterionResult> results;
    results.push_back(criterion_peak_asymptotics());
    results.push_back(criterion_remainder_order(table));
    results.push_back(criterion_figure1(table));
    results.push_back(criterion_conservation(table, options));
    results.push_back(criterion_tail_rate(table));
    results.push_back(criterion_constants());
    results.push_back(criterion_structure(table));
    results.push_back(criterion_kdv_identity());
    results.push_back(criterion_necessity());
    return results;
}

} // namespace acceptance
} // namespace epsol
