#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace epsol {
namespace analysis {
namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void require_decreasing(const std::vector<double>& epsilons, std::size_t minimum) {
    if (epsilons.size() < minimum) {
        char msg[64];
        std::snprintf(msg, sizeof msg, "need >= %zu epsilons", minimum);
        fail(EPSOL_ERR_INVALID_ARGUMENT, msg);
    }
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            fail(EPSOL_ERR_INVALID_ARGUMENT, "epsilon ladder must be strictly decreasing");
    for (double e : epsilons)
        if (!(e > 0.0) || !std::isfinite(e))
            fail(EPSOL_ERR_INVALID_ARGUMENT, "epsilons must be finite and > 0");
}

} // namespace

double fit_loglog_slope(const std::vector<double>& keys,
                        const std::vector<double>& values) {
    if (keys.size() != values.size() || keys.size() < 2)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "slope fit needs matched arrays of >= 2 points");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (!(keys[i] > 0.0) || !(values[i] > 0.0))
            fail(EPSOL_ERR_INVALID_ARGUMENT, "slope fit needs positive data");
        const double t = std::log(keys[i]);
        const double y = std::log(values[i]);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

PeakCheck peak_check(const Params& p) {
    const double x_star = model::peak_excess(p);
    PeakCheck out;
    out.epsilon = p.epsilon;
    out.n_star = 1.0 + x_star;
    out.u_star = p.frame_speed * x_star / (1.0 + x_star);
    out.phi_star = model::potential_excess(p, x_star);
    const double coeff = 3.0 * p.gamma * p.epsilon;
    out.pred_n = 1.0 + coeff / p.sound_speed;
    out.pred_u = coeff;
    out.pred_phi = coeff / p.sound_speed;
    out.err_n = std::fabs(x_star - coeff / p.sound_speed);
    out.err_u = std::fabs(out.u_star - out.pred_u);
    out.err_phi = std::fabs(out.phi_star - out.pred_phi);
    return out;
}

void derivative_remainder_norms(const WaveProfile& mirrored,
                                const RemainderField& rem, int max_order,
                                FieldNorms& n, FieldNorms& u, FieldNorms& phi) {
    if (!mirrored.mirrored)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "derivative norms need a mirrored profile");
    if (rem.size() != mirrored.size())
        fail(EPSOL_ERR_INVALID_ARGUMENT, "remainders do not match the profile grid");
    if (max_order < 0 || max_order > 2)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "derivative order must lie in [0, 2]");
    if (max_order >= 1 && mirrored.dxi > 1e-3 + 1e-15)
        fail(EPSOL_ERR_INSUFFICIENT_RESOLUTION,
             "dxi must be <= 1e-3 for remainder derivatives");

    const double h = mirrored.dxi;
    const std::size_t count = mirrored.size();
    FieldNorms* norms[3] = {&n, &u, &phi};
    const std::vector<double>* fields[3] = {&rem.n_r, &rem.u_r, &rem.phi_r};
    for (int f = 0; f < 3; ++f) {
        FieldNorms& out = *norms[f];
        const std::vector<double>& a = *fields[f];
        out = FieldNorms{};
        for (std::size_t i = 0; i < count; ++i) {
            const double w = std::exp(0.5 * rem.alpha * std::fabs(mirrored.xi[i]));
            const double v0 = std::fabs(a[i]);
            out.sup[0] = std::max(out.sup[0], v0);
            out.weighted[0] = std::max(out.weighted[0], w * v0);
            if (max_order >= 1 && i > 0 && i + 1 < count) {
                const double v1 = std::fabs((a[i + 1] - a[i - 1]) / (2.0 * h));
                out.sup[1] = std::max(out.sup[1], v1);
                out.weighted[1] = std::max(out.weighted[1], w * v1);
            }
            if (max_order >= 2 && i > 0 && i + 1 < count) {
                const double v2 = std::fabs((a[i + 1] - 2.0 * a[i] + a[i - 1]) / (h * h));
                out.sup[2] = std::max(out.sup[2], v2);
                out.weighted[2] = std::max(out.weighted[2], w * v2);
            }
        }
    }
}

namespace {

EpsilonCase run_case(double sigma, double gamma, double eps,
                     const SolveOptions& options, double alpha, int max_order) {
    EpsilonCase c;
    c.epsilon = eps;
    try {
        const Params p = Params::physical(sigma, gamma, eps);
        const WaveProfile half = dynamics::integrate_half_profile(p, options);
        const WaveProfile full = dynamics::mirror_to_full_line(half);
        const RemainderField rem = kdv::compute_remainders(full, alpha);
        derivative_remainder_norms(full, rem, max_order, c.n, c.u, c.phi);
        c.tail.fitted = dynamics::tail_rate(half, options.tail_cut);
        c.tail.expected = dynamics::saddle_rate(p);
        c.tail.rel_err = std::fabs(c.tail.fitted - c.tail.expected) / c.tail.expected;
        c.peak = peak_check(p);
        const KdvReference ref = KdvReference::for_params(p);
        double gap = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i)
            gap = std::max(gap, std::fabs(full.excess[i] / eps -
                                          kdv::soliton(ref, std::fabs(full.xi[i]))));
        c.kdv_gap = gap;
        c.forcing_xi1 = kdv::forcing_positive_from(full, rem);
        c.ok = true;
    } catch (const Error& e) {
        c.error = std::string(status_name(e.status())) + ": " + e.what();
    }
    return c;
}

} // namespace

ConvergenceReport convergence_campaign(double sigma, double gamma,
                                       const std::vector<double>& epsilons,
                                       const SolveOptions& options, double alpha,
                                       int max_deriv_order) {
    require_decreasing(epsilons, 3);
    if (max_deriv_order < 0 || max_deriv_order > 2)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "derivative order must lie in [0, 2]");
    ConvergenceReport report;
    report.sigma = sigma;
    report.gamma = gamma;
    report.options = options;
    report.alpha = alpha >= 0.0
                       ? alpha
                       : kdv::default_weight_rate(Params::physical(sigma, gamma, 1.0));
    report.max_deriv_order = max_deriv_order;

    std::vector<std::future<EpsilonCase>> futures;
    futures.reserve(epsilons.size());
    for (double eps : epsilons)
        futures.push_back(std::async(std::launch::async, run_case, sigma, gamma, eps,
                                     options, report.alpha, max_deriv_order));
    for (auto& f : futures) report.cases.push_back(f.get());

    std::vector<double> ok_eps;
    for (const EpsilonCase& c : report.cases) {
        if (c.ok) {
            ok_eps.push_back(c.epsilon);
        } else {
            char msg[96];
            std::snprintf(msg, sizeof msg, "epsilon=%.6g: ", c.epsilon);
            report.failures.push_back(msg + c.error);
        }
    }
    for (auto& row : report.fitted_order)
        row.fill(std::numeric_limits<double>::quiet_NaN());
    for (auto& row : report.fitted_order_weighted)
        row.fill(std::numeric_limits<double>::quiet_NaN());
    if (ok_eps.size() >= 3) {
        for (int f = 0; f < 3; ++f) {
            for (int k = 0; k <= max_deriv_order; ++k) {
                std::vector<double> sup, wsup;
                for (const EpsilonCase& c : report.cases) {
                    if (!c.ok) continue;
                    const FieldNorms& fn = (f == 0) ? c.n : (f == 1) ? c.u : c.phi;
                    sup.push_back(fn.sup[k]);
                    wsup.push_back(fn.weighted[k]);
                }
                report.fitted_order[f][k] = fit_loglog_slope(ok_eps, sup);
                report.fitted_order_weighted[f][k] = fit_loglog_slope(ok_eps, wsup);
            }
        }
        // Stability of the weighted constants C(eps) = weighted_sup / eps^2.
        double worst = 1.0;
        for (int f = 0; f < 3; ++f) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = 0.0;
            for (const EpsilonCase& c : report.cases) {
                if (!c.ok) continue;
                const FieldNorms& fn = (f == 0) ? c.n : (f == 1) ? c.u : c.phi;
                const double cval = fn.weighted[0] / (c.epsilon * c.epsilon);
                lo = std::min(lo, cval);
                hi = std::max(hi, cval);
            }
            worst = std::max(worst, hi / lo);
        }
        report.weight_constant_stable = worst <= 2.0;
    } else {
        report.failures.push_back("fewer than 3 successful cases; no order fit");
        report.weight_constant_stable = false;
    }
    return report;
}

namespace {

const char* kFieldKeys[3] = {"n_R", "u_R", "phi_R"};

void emit_norms(std::ostringstream& os, const ConvergenceReport& r, bool weighted) {
    os << "{";
    for (int f = 0; f < 3; ++f) {
        os << (f ? "," : "") << "\"" << kFieldKeys[f] << "\":{";
        for (int k = 0; k <= r.max_deriv_order; ++k) {
            os << (k ? "," : "") << "\"k" << k << "\":[";
            bool first = true;
            for (const EpsilonCase& c : r.cases) {
                const FieldNorms& fn = (f == 0) ? c.n : (f == 1) ? c.u : c.phi;
                const double v = weighted ? fn.weighted[k] : fn.sup[k];
                os << (first ? "" : ",") << (c.ok ? fmt17(v) : "null");
                first = false;
            }
            os << "]";
        }
        os << "}";
    }
    os << "}";
}

void emit_orders(std::ostringstream& os,
                 const std::array<std::array<double, 3>, 3>& orders, int kmax) {
    os << "{";
    for (int f = 0; f < 3; ++f) {
        os << (f ? "," : "") << "\"" << kFieldKeys[f] << "\":";
        if (kmax == 0) {
            os << (std::isnan(orders[f][0]) ? "null" : fmt17(orders[f][0]));
        } else {
            os << "{";
            for (int k = 0; k <= kmax; ++k)
                os << (k ? "," : "") << "\"k" << k << "\":"
                   << (std::isnan(orders[f][k]) ? "null" : fmt17(orders[f][k]));
            os << "}";
        }
    }
    os << "}";
}

} // namespace

std::string report_to_json(const ConvergenceReport& r) {
    std::ostringstream os;
    os << "{\"schema_version\":1,";
    os << "\"params\":{\"sigma\":" << fmt17(r.sigma) << ",\"gamma\":" << fmt17(r.gamma)
       << ",\"dxi\":" << fmt17(r.options.dxi) << ",\"xi_max\":" << fmt17(r.options.xi_max)
       << ",\"tail_cut\":" << fmt17(r.options.tail_cut)
       << ",\"drift_tol_rel\":" << fmt17(r.options.drift_tol_rel)
       << ",\"alpha\":" << fmt17(r.alpha)
       << ",\"max_deriv_order\":" << r.max_deriv_order << "},";
    os << "\"epsilons\":[";
    for (std::size_t i = 0; i < r.cases.size(); ++i)
        os << (i ? "," : "") << fmt17(r.cases[i].epsilon);
    os << "],";
    os << "\"sup_norms\":";
    emit_norms(os, r, false);
    os << ",\"weighted_sup_norms\":";
    emit_norms(os, r, true);
    // fitted_order carries the k = 0 slopes of the plain sup-norms; the per-k
    // table (including weighted) follows under its own keys.
    os << ",\"fitted_order\":";
    {
        std::array<std::array<double, 3>, 3> k0{};
        for (int f = 0; f < 3; ++f) k0[f][0] = r.fitted_order[f][0];
        emit_orders(os, k0, 0);
    }
    os << ",\"fitted_order_by_k\":";
    emit_orders(os, r.fitted_order, r.max_deriv_order);
    os << ",\"fitted_order_weighted_by_k\":";
    emit_orders(os, r.fitted_order_weighted, r.max_deriv_order);
    os << ",\"weight_constant_stable\":" << (r.weight_constant_stable ? "true" : "false");
    os << ",\"tail_rates\":[";
    for (std::size_t i = 0; i < r.cases.size(); ++i) {
        const EpsilonCase& c = r.cases[i];
        os << (i ? "," : "");
        if (!c.ok) {
            os << "null";
            continue;
        }
        os << "{\"epsilon\":" << fmt17(c.epsilon) << ",\"fitted\":" << fmt17(c.tail.fitted)
           << ",\"lambda\":" << fmt17(c.tail.expected)
           << ",\"rel_err\":" << fmt17(c.tail.rel_err) << "}";
    }
    os << "],\"peak_checks\":[";
    for (std::size_t i = 0; i < r.cases.size(); ++i) {
        const EpsilonCase& c = r.cases[i];
        os << (i ? "," : "");
        if (!c.ok) {
            os << "null";
            continue;
        }
        const PeakCheck& pc = c.peak;
        os << "{\"epsilon\":" << fmt17(pc.epsilon) << ",\"n_star\":" << fmt17(pc.n_star)
           << ",\"u_star\":" << fmt17(pc.u_star) << ",\"phi_star\":" << fmt17(pc.phi_star)
           << ",\"pred_n\":" << fmt17(pc.pred_n) << ",\"pred_u\":" << fmt17(pc.pred_u)
           << ",\"pred_phi\":" << fmt17(pc.pred_phi) << ",\"err_n\":" << fmt17(pc.err_n)
           << ",\"err_u\":" << fmt17(pc.err_u) << ",\"err_phi\":" << fmt17(pc.err_phi)
           << "}";
    }
    os << "],\"kdv_gaps\":[";
    for (std::size_t i = 0; i < r.cases.size(); ++i)
        os << (i ? "," : "") << (r.cases[i].ok ? fmt17(r.cases[i].kdv_gap) : "null");
    os << "],\"forcing_xi1\":[";
    for (std::size_t i = 0; i < r.cases.size(); ++i) {
        os << (i ? "," : "");
        if (!r.cases[i].ok || !std::isfinite(r.cases[i].forcing_xi1))
            os << "null";
        else
            os << fmt17(r.cases[i].forcing_xi1);
    }
    os << "],\"failures\":[";
    for (std::size_t i = 0; i < r.failures.size(); ++i) {
        os << (i ? "," : "") << "\"";
        for (char ch : r.failures[i]) {
            if (ch == '"' || ch == '\\') os << '\\';
            os << ch;
        }
        os << "\"";
    }
    os << "]}";
    return os.str();
}

NecessityProbe necessity_probe(double sigma, double gamma, double wrong_speed,
                               const std::vector<double>& epsilons) {
    require_decreasing(epsilons, 1);
    NecessityProbe probe;
    for (double eps : epsilons) {
        const Params p = Params::with_sound_speed(sigma, gamma, eps, wrong_speed);
        if (!model::check_admissible(p).admissible) continue;
        probe.epsilons.push_back(eps);
        probe.peak_excess.push_back(model::peak_excess(p));
    }
    if (probe.epsilons.empty()) {
        probe.vacuous = true;
        return probe;
    }
    // Non-convergence: the gap at the smallest probed epsilon stays at least
    // an order of magnitude above that epsilon.
    probe.confirmed = probe.peak_excess.back() >= 10.0 * probe.epsilons.back();
    return probe;
}

} // namespace analysis
} // namespace epsol
