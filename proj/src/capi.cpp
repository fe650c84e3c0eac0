#include "epsol/epsol.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "acceptance.hpp"
#include "analysis.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "kdv.hpp"
#include "model.hpp"

struct epsol_params {
    epsol::Params value;
};

struct epsol_profile {
    epsol::WaveProfile value;
};

struct epsol_remainders {
    epsol::RemainderField value;
};

struct epsol_report {
    epsol::ConvergenceReport value;
};

struct epsol_verify_result {
    std::vector<epsol::CriterionResult> criteria;
    std::vector<std::string> lines;
};

namespace {

thread_local std::string g_last_error;

epsol_status record_error(epsol_status status, const char* message) {
    g_last_error = message ? message : "";
    return status;
}

// Runs the body, translating exceptions into status codes.
template <typename F>
epsol_status guarded(F&& body) {
    try {
        body();
        return EPSOL_OK;
    } catch (const epsol::Error& e) {
        return record_error(e.status(), e.what());
    } catch (const std::bad_alloc&) {
        return record_error(EPSOL_ERR_ALLOC, "allocation failed");
    } catch (const std::exception& e) {
        return record_error(EPSOL_ERR_INTERNAL, e.what());
    } catch (...) {
        return record_error(EPSOL_ERR_INTERNAL, "unknown failure");
    }
}

epsol_status require(bool ok, const char* message) {
    return ok ? EPSOL_OK : record_error(EPSOL_ERR_INVALID_ARGUMENT, message);
}

epsol::SolveOptions to_core(const epsol_solve_options* options) {
    epsol::SolveOptions core;
    if (options) {
        core.dxi = options->dxi;
        core.xi_max = options->xi_max;
        core.tail_cut = options->tail_cut;
        core.drift_tol_rel = options->drift_tol_rel;
    }
    return core;
}

const epsol::FieldNorms* case_norms(const epsol::EpsilonCase& c, epsol_field field) {
    switch (field) {
        case EPSOL_FIELD_N: return &c.n;
        case EPSOL_FIELD_U: return &c.u;
        case EPSOL_FIELD_PHI: return &c.phi;
    }
    return nullptr;
}

} // namespace

extern "C" {

const char* epsol_last_error(void) { return g_last_error.c_str(); }

const char* epsol_status_name(epsol_status status) {
    return epsol::status_name(status);
}

epsol_status epsol_params_create(double sigma, double gamma, double epsilon,
                                 epsol_params** out) {
    if (epsol_status s = require(out != nullptr, "null output pointer")) return s;
    *out = nullptr;
    return guarded([&] {
        *out = new epsol_params{epsol::Params::physical(sigma, gamma, epsilon)};
    });
}

epsol_status epsol_params_create_custom_speed(double sigma, double gamma,
                                              double epsilon, double sound_speed,
                                              epsol_params** out) {
    if (epsol_status s = require(out != nullptr, "null output pointer")) return s;
    *out = nullptr;
    return guarded([&] {
        *out = new epsol_params{
            epsol::Params::with_sound_speed(sigma, gamma, epsilon, sound_speed)};
    });
}

void epsol_params_free(epsol_params* params) { delete params; }

double epsol_params_sigma(const epsol_params* p) { return p ? p->value.sigma : 0.0; }
double epsol_params_gamma(const epsol_params* p) { return p ? p->value.gamma : 0.0; }
double epsol_params_epsilon(const epsol_params* p) { return p ? p->value.epsilon : 0.0; }
double epsol_params_sound_speed(const epsol_params* p) {
    return p ? p->value.sound_speed : 0.0;
}
double epsol_params_frame_speed(const epsol_params* p) {
    return p ? p->value.frame_speed : 0.0;
}

epsol_status epsol_check_admissible(const epsol_params* params,
                                    epsol_admissibility* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] {
        const epsol::Admissibility a = epsol::model::check_admissible(params->value);
        out->admissible = a.admissible ? 1 : 0;
        switch (a.reason) {
            case epsol::AdmissReason::ok: out->reason = EPSOL_ADM_OK; break;
            case epsol::AdmissReason::speed_too_low:
                out->reason = EPSOL_ADM_SPEED_TOO_LOW;
                break;
            case epsol::AdmissReason::speed_too_high:
                out->reason = EPSOL_ADM_SPEED_TOO_HIGH;
                break;
            default: out->reason = EPSOL_ADM_PARAMETER_DOMAIN; break;
        }
        out->lower = a.lower;
        out->upper = a.upper;
        out->value = a.value;
    });
}

epsol_status epsol_bernoulli_potential(const epsol_params* params, double n,
                                       double* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] { *out = epsol::model::bernoulli_potential(params->value, n); });
}

epsol_status epsol_potential_derivative(const epsol_params* params, double n,
                                        double* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] { *out = epsol::model::potential_derivative(params->value, n); });
}

epsol_status epsol_first_integral_potential(const epsol_params* params, double n,
                                            double* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded(
        [&] { *out = epsol::model::first_integral_potential(params->value, n); });
}

epsol_status epsol_stationarity_defect(const epsol_params* params, double n,
                                       double* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] { *out = epsol::model::stationarity_defect(params->value, n); });
}

epsol_status epsol_zeta(double sigma, double* out) {
    if (epsol_status s = require(out != nullptr, "null output pointer")) return s;
    return guarded([&] { *out = epsol::model::zeta_root(sigma); });
}

epsol_status epsol_g_taylor(const epsol_params* params, double* g2, double* g3) {
    if (epsol_status s = require(params && g2 && g3, "null argument")) return s;
    return guarded([&] { epsol::model::g_taylor_leading(params->value, *g2, *g3); });
}

epsol_status epsol_critical_densities_solve(const epsol_params* params,
                                            epsol_critical_densities* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] {
        const epsol::CriticalDensities r =
            epsol::model::solve_critical_densities(params->value);
        out->zeta = r.zeta;
        out->n_c = r.n_c;
        out->n_ce = r.n_ce;
        out->n_star = r.n_star;
        out->n_s = r.n_s.value_or(0.0);
        out->has_sonic = r.n_s.has_value() ? 1 : 0;
    });
}

epsol_status epsol_phase_rhs(const epsol_params* params, double n, double efield,
                             double* dn, double* defield) {
    if (epsol_status s = require(params && dn && defield, "null argument")) return s;
    return guarded([&] {
        const auto d = epsol::dynamics::phase_rhs(params->value, {n, efield});
        *dn = d[0];
        *defield = d[1];
    });
}

epsol_status epsol_phase_jacobian(const epsol_params* params, double n,
                                  double efield, double jac[4]) {
    if (epsol_status s = require(params && jac, "null argument")) return s;
    return guarded([&] {
        const auto m = epsol::dynamics::phase_jacobian(params->value, {n, efield});
        for (int i = 0; i < 4; ++i) jac[i] = m[i];
    });
}

epsol_status epsol_saddle_rate(const epsol_params* params, double* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] { *out = epsol::dynamics::saddle_rate(params->value); });
}

epsol_status epsol_classify_stationary_points(const epsol_params* params,
                                              epsol_stationary_point out[2]) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] {
        const auto pts = epsol::dynamics::classify_stationary_points(params->value);
        for (int i = 0; i < 2; ++i) {
            out[i].n = pts[i].location.n;
            out[i].efield = pts[i].location.efield;
            out[i].is_saddle = pts[i].is_saddle ? 1 : 0;
            out[i].jacobian_det = pts[i].jacobian_det;
        }
    });
}

void epsol_solve_options_init(epsol_solve_options* options) {
    if (!options) return;
    const epsol::SolveOptions defaults;
    options->dxi = defaults.dxi;
    options->xi_max = defaults.xi_max;
    options->tail_cut = defaults.tail_cut;
    options->drift_tol_rel = defaults.drift_tol_rel;
}

epsol_status epsol_solve_half(const epsol_params* params,
                              const epsol_solve_options* options,
                              epsol_profile** out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        *out = new epsol_profile{
            epsol::dynamics::integrate_half_profile(params->value, to_core(options))};
    });
}

epsol_status epsol_profile_mirror(const epsol_profile* half, epsol_profile** out) {
    if (epsol_status s = require(half && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        *out = new epsol_profile{epsol::dynamics::mirror_to_full_line(half->value)};
    });
}

void epsol_profile_free(epsol_profile* profile) { delete profile; }

size_t epsol_profile_size(const epsol_profile* p) { return p ? p->value.size() : 0; }
int epsol_profile_is_mirrored(const epsol_profile* p) {
    return p && p->value.mirrored ? 1 : 0;
}
const double* epsol_profile_xi(const epsol_profile* p) {
    return p ? p->value.xi.data() : nullptr;
}
const double* epsol_profile_n_excess(const epsol_profile* p) {
    return p ? p->value.excess.data() : nullptr;
}
const double* epsol_profile_u(const epsol_profile* p) {
    return p ? p->value.u.data() : nullptr;
}
const double* epsol_profile_phi(const epsol_profile* p) {
    return p ? p->value.phi.data() : nullptr;
}
const double* epsol_profile_efield(const epsol_profile* p) {
    return p ? p->value.efield.data() : nullptr;
}
double epsol_profile_drift(const epsol_profile* p) {
    return p ? p->value.first_integral_drift : 0.0;
}

epsol_status epsol_profile_params(const epsol_profile* profile, epsol_params** out) {
    if (epsol_status s = require(profile && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] { *out = new epsol_params{profile->value.params}; });
}

epsol_status epsol_profile_tail_rate(const epsol_profile* profile, double tail_cut,
                                     double* out) {
    if (epsol_status s = require(profile && out, "null argument")) return s;
    return guarded([&] { *out = epsol::dynamics::tail_rate(profile->value, tail_cut); });
}

epsol_status epsol_kdv_value(double gamma, double sound_speed, double xi,
                             double* out) {
    if (epsol_status s = require(out != nullptr, "null output pointer")) return s;
    return guarded([&] {
        *out = epsol::kdv::soliton(epsol::KdvReference::make(gamma, sound_speed), xi);
    });
}

epsol_status epsol_kdv_residual_max(double gamma, double sound_speed, double xi_min,
                                    double xi_max, double dxi,
                                    int use_finite_differences, double* out) {
    if (epsol_status s = require(out != nullptr, "null output pointer")) return s;
    return guarded([&] {
        *out = epsol::kdv::traveling_residual_max(
            epsol::KdvReference::make(gamma, sound_speed), xi_min, xi_max, dxi,
            use_finite_differences != 0);
    });
}

epsol_status epsol_default_weight_rate(const epsol_params* params, double* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] { *out = epsol::kdv::default_weight_rate(params->value); });
}

epsol_status epsol_remainders_compute(const epsol_profile* profile, double alpha,
                                      epsol_remainders** out) {
    if (epsol_status s = require(profile && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        *out = new epsol_remainders{epsol::kdv::compute_remainders(profile->value, alpha)};
    });
}

void epsol_remainders_free(epsol_remainders* remainders) { delete remainders; }

size_t epsol_remainders_size(const epsol_remainders* r) {
    return r ? r->value.size() : 0;
}
const double* epsol_remainders_n(const epsol_remainders* r) {
    return r ? r->value.n_r.data() : nullptr;
}
const double* epsol_remainders_u(const epsol_remainders* r) {
    return r ? r->value.u_r.data() : nullptr;
}
const double* epsol_remainders_phi(const epsol_remainders* r) {
    return r ? r->value.phi_r.data() : nullptr;
}
const double* epsol_remainders_kdv(const epsol_remainders* r) {
    return r ? r->value.n_kdv.data() : nullptr;
}
double epsol_remainders_alpha(const epsol_remainders* r) {
    return r ? r->value.alpha : 0.0;
}
double epsol_remainders_weighted_sup(const epsol_remainders* r) {
    return r ? r->value.weighted_sup : 0.0;
}

epsol_status epsol_peak_check_run(const epsol_params* params, epsol_peak_check* out) {
    if (epsol_status s = require(params && out, "null argument")) return s;
    return guarded([&] {
        const epsol::PeakCheck pc = epsol::analysis::peak_check(params->value);
        out->epsilon = pc.epsilon;
        out->n_star = pc.n_star;
        out->u_star = pc.u_star;
        out->phi_star = pc.phi_star;
        out->pred_n = pc.pred_n;
        out->pred_u = pc.pred_u;
        out->pred_phi = pc.pred_phi;
        out->err_n = pc.err_n;
        out->err_u = pc.err_u;
        out->err_phi = pc.err_phi;
    });
}

epsol_status epsol_sweep(double sigma, double gamma, const double* epsilons,
                         size_t count, const epsol_solve_options* options,
                         double alpha, int max_deriv_order, epsol_report** out) {
    if (epsol_status s = require(epsilons && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        const std::vector<double> ladder(epsilons, epsilons + count);
        *out = new epsol_report{epsol::analysis::convergence_campaign(
            sigma, gamma, ladder, to_core(options), alpha, max_deriv_order)};
    });
}

void epsol_report_free(epsol_report* report) { delete report; }

epsol_status epsol_report_json(const epsol_report* report, char** out) {
    if (epsol_status s = require(report && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        const std::string text = epsol::analysis::report_to_json(report->value);
        char* buffer = static_cast<char*>(std::malloc(text.size() + 1));
        if (!buffer) throw std::bad_alloc();
        std::memcpy(buffer, text.c_str(), text.size() + 1);
        *out = buffer;
    });
}

void epsol_string_free(char* text) { std::free(text); }

epsol_status epsol_report_fitted_order(const epsol_report* report, epsol_field field,
                                       int k, int weighted, double* out) {
    if (epsol_status s = require(report && out, "null argument")) return s;
    if (epsol_status s = require(field >= EPSOL_FIELD_N && field <= EPSOL_FIELD_PHI &&
                                     k >= 0 && k <= report->value.max_deriv_order,
                                 "field/order out of range"))
        return s;
    *out = weighted ? report->value.fitted_order_weighted[field][k]
                    : report->value.fitted_order[field][k];
    return EPSOL_OK;
}

epsol_status epsol_report_sup_norm(const epsol_report* report, size_t eps_index,
                                   epsol_field field, int k, int weighted,
                                   double* out) {
    if (epsol_status s = require(report && out, "null argument")) return s;
    if (epsol_status s = require(eps_index < report->value.cases.size() &&
                                     k >= 0 && k <= report->value.max_deriv_order,
                                 "index out of range"))
        return s;
    const epsol::EpsilonCase& c = report->value.cases[eps_index];
    if (epsol_status s = require(c.ok, "ladder entry failed")) return s;
    const epsol::FieldNorms* norms = case_norms(c, field);
    if (epsol_status s = require(norms != nullptr, "bad field")) return s;
    *out = weighted ? norms->weighted[k] : norms->sup[k];
    return EPSOL_OK;
}

epsol_status epsol_report_tail_rate(const epsol_report* report, size_t eps_index,
                                    double* fitted, double* expected) {
    if (epsol_status s = require(report && fitted && expected, "null argument")) return s;
    if (epsol_status s = require(eps_index < report->value.cases.size(),
                                 "index out of range"))
        return s;
    const epsol::EpsilonCase& c = report->value.cases[eps_index];
    if (epsol_status s = require(c.ok, "ladder entry failed")) return s;
    *fitted = c.tail.fitted;
    *expected = c.tail.expected;
    return EPSOL_OK;
}

epsol_status epsol_report_peak_check(const epsol_report* report, size_t eps_index,
                                     epsol_peak_check* out) {
    if (epsol_status s = require(report && out, "null argument")) return s;
    if (epsol_status s = require(eps_index < report->value.cases.size(),
                                 "index out of range"))
        return s;
    const epsol::EpsilonCase& c = report->value.cases[eps_index];
    if (epsol_status s = require(c.ok, "ladder entry failed")) return s;
    const epsol::PeakCheck& pc = c.peak;
    out->epsilon = pc.epsilon;
    out->n_star = pc.n_star;
    out->u_star = pc.u_star;
    out->phi_star = pc.phi_star;
    out->pred_n = pc.pred_n;
    out->pred_u = pc.pred_u;
    out->pred_phi = pc.pred_phi;
    out->err_n = pc.err_n;
    out->err_u = pc.err_u;
    out->err_phi = pc.err_phi;
    return EPSOL_OK;
}

epsol_status epsol_report_kdv_gap(const epsol_report* report, size_t eps_index,
                                  double* out) {
    if (epsol_status s = require(report && out, "null argument")) return s;
    if (epsol_status s = require(eps_index < report->value.cases.size(),
                                 "index out of range"))
        return s;
    const epsol::EpsilonCase& c = report->value.cases[eps_index];
    if (epsol_status s = require(c.ok, "ladder entry failed")) return s;
    *out = c.kdv_gap;
    return EPSOL_OK;
}

size_t epsol_report_case_count(const epsol_report* report) {
    return report ? report->value.cases.size() : 0;
}

epsol_status epsol_necessity_probe(double sigma, double gamma, double wrong_speed,
                                   const double* epsilons, size_t count,
                                   int* confirmed, int* vacuous) {
    if (epsol_status s = require(epsilons && confirmed && vacuous, "null argument"))
        return s;
    return guarded([&] {
        const std::vector<double> ladder(epsilons, epsilons + count);
        const epsol::NecessityProbe probe =
            epsol::analysis::necessity_probe(sigma, gamma, wrong_speed, ladder);
        *confirmed = probe.confirmed ? 1 : 0;
        *vacuous = probe.vacuous ? 1 : 0;
    });
}

epsol_status epsol_verify_run(const epsol_solve_options* options,
                              epsol_verify_result** out) {
    if (epsol_status s = require(out != nullptr, "null output pointer")) return s;
    *out = nullptr;
    return guarded([&] {
        auto result = std::make_unique<epsol_verify_result>();
        result->criteria = epsol::acceptance::run(to_core(options));
        for (const epsol::CriterionResult& c : result->criteria) {
            char head[32];
            std::snprintf(head, sizeof head, "criterion %d ", c.index);
            result->lines.push_back(std::string(c.passed ? "PASS " : "FAIL ") + head +
                                    "[" + c.name + "]: " + c.summary);
        }
        *out = result.release();
    });
}

void epsol_verify_result_free(epsol_verify_result* result) { delete result; }

size_t epsol_verify_count(const epsol_verify_result* r) {
    return r ? r->criteria.size() : 0;
}

const char* epsol_verify_line(const epsol_verify_result* r, size_t index) {
    if (!r || index >= r->lines.size()) return nullptr;
    return r->lines[index].c_str();
}

int epsol_verify_passed(const epsol_verify_result* r, size_t index) {
    if (!r || index >= r->criteria.size()) return 0;
    return r->criteria[index].passed ? 1 : 0;
}

int epsol_verify_all_passed(const epsol_verify_result* r) {
    if (!r) return 0;
    for (const epsol::CriterionResult& c : r->criteria)
        if (!c.passed) return 0;
    return 1;
}

} // extern "C"
