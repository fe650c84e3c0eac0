/* epsol — solitary-wave solver and verification toolkit for the 1-D
 * Euler–Poisson system in the stretched traveling frame.
 *
 * C API: every object is an opaque handle created and destroyed here;
 * every fallible call returns an epsol_status and writes results through
 * out-parameters. epsol_last_error() describes the most recent failure
 * on the calling thread.
 */
#ifndef EPSOL_H
#define EPSOL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum epsol_status {
    EPSOL_OK = 0,
    EPSOL_ERR_INVALID_ARGUMENT = 1,   /* bad option, bad array, bad handle */
    EPSOL_ERR_DOMAIN = 2,             /* scalar function outside its domain (n <= 0) */
    EPSOL_ERR_INADMISSIBLE = 3,       /* parameters outside the admissible speed window */
    EPSOL_ERR_BRACKET_FAILURE = 4,    /* root bracket could not be established */
    EPSOL_ERR_SONIC_SINGULARITY = 5,  /* trajectory reached the sonic density (sigma > 0) */
    EPSOL_ERR_NON_MONOTONE = 6,       /* density increased along the half-line march */
    EPSOL_ERR_DRIFT_EXCEEDED = 7,     /* first-integral drift above tolerance */
    EPSOL_ERR_AMPLITUDE_TOO_SMALL = 8,/* peak excess below 1e-10, solve refused */
    EPSOL_ERR_INSUFFICIENT_RESOLUTION = 9, /* grid too coarse for the request */
    EPSOL_ERR_ALLOC = 10,
    EPSOL_ERR_INTERNAL = 11
} epsol_status;

/* Cause reported by the admissibility check. */
typedef enum epsol_adm_reason {
    EPSOL_ADM_OK = 0,
    EPSOL_ADM_SPEED_TOO_LOW = 1,
    EPSOL_ADM_SPEED_TOO_HIGH = 2,
    EPSOL_ADM_PARAMETER_DOMAIN = 3
} epsol_adm_reason;

typedef struct epsol_params epsol_params;
typedef struct epsol_profile epsol_profile;
typedef struct epsol_remainders epsol_remainders;
typedef struct epsol_report epsol_report;
typedef struct epsol_verify_result epsol_verify_result;

/* Thread-local message for the last failing call on this thread. */
const char* epsol_last_error(void);
const char* epsol_status_name(epsol_status status);

/* ---- parameters ------------------------------------------------------ */

/* Physical parameters: sound speed V = sqrt(1 + sigma), frame speed
 * J = V + gamma*epsilon. sigma >= 0, gamma >= 0, epsilon >= 0; zero gamma
 * or epsilon is constructible but inadmissible. */
epsol_status epsol_params_create(double sigma, double gamma, double epsilon,
                                 epsol_params** out);
/* Same bookkeeping with an explicit (possibly wrong) sound speed; used by
 * the necessity probe. */
epsol_status epsol_params_create_custom_speed(double sigma, double gamma,
                                              double epsilon, double sound_speed,
                                              epsol_params** out);
void epsol_params_free(epsol_params* params);

double epsol_params_sigma(const epsol_params* params);
double epsol_params_gamma(const epsol_params* params);
double epsol_params_epsilon(const epsol_params* params);
double epsol_params_sound_speed(const epsol_params* params); /* V */
double epsol_params_frame_speed(const epsol_params* params); /* J */

typedef struct epsol_admissibility {
    int admissible;            /* 1 iff the strict window condition holds */
    epsol_adm_reason reason;
    double lower;              /* active window: lower < value < upper */
    double upper;
    double value;              /* J for sigma = 0, J/sqrt(sigma) for sigma > 0 */
} epsol_admissibility;

epsol_status epsol_check_admissible(const epsol_params* params,
                                    epsol_admissibility* out);

/* ---- scalar functions of density ------------------------------------- */

/* H(n) = J^2/2 (1 - 1/n^2) - sigma ln n; the potential phi on the orbit. */
epsol_status epsol_bernoulli_potential(const epsol_params* params, double n,
                                       double* out);
/* h(n) = dH/dn = J^2/n^3 - sigma/n. */
epsol_status epsol_potential_derivative(const epsol_params* params, double n,
                                        double* out);
/* g(n) = J^2/n + sigma n + e^{H(n)}; conserved-level potential. */
epsol_status epsol_first_integral_potential(const epsol_params* params, double n,
                                            double* out);
/* l(n) = ln n - H(n); zero exactly at the stationary densities. */
epsol_status epsol_stationarity_defect(const epsol_params* params, double n,
                                       double* out);
/* zeta_sigma (sigma > 0) or zeta_0 (sigma = 0): upper root of the speed window. */
epsol_status epsol_zeta(double sigma, double* out);
/* Taylor coefficients g''(1), g'''(1) in closed form. */
epsol_status epsol_g_taylor(const epsol_params* params, double* g2, double* g3);

typedef struct epsol_critical_densities {
    double zeta;
    double n_c;       /* J / sqrt(1 + sigma) */
    double n_ce;      /* second root of l */
    double n_star;    /* peak density, root of g(n) = g(1) beyond n_ce */
    double n_s;       /* sonic density J/sqrt(sigma); meaningful iff has_sonic */
    int has_sonic;    /* 1 iff sigma > 0 */
} epsol_critical_densities;

epsol_status epsol_critical_densities_solve(const epsol_params* params,
                                            epsol_critical_densities* out);

/* ---- phase-plane dynamics -------------------------------------------- */

/* Right-hand side of the (n, E) system: n' = -E/h(n), E' = (n - e^H)/eps. */
epsol_status epsol_phase_rhs(const epsol_params* params, double n, double efield,
                             double* dn, double* defield);
/* Jacobian of the system at (n, E), row-major [a11 a12 a21 a22]. */
epsol_status epsol_phase_jacobian(const epsol_params* params, double n,
                                  double efield, double jac[4]);
/* Positive eigenvalue of the saddle linearization in the stretched variable. */
epsol_status epsol_saddle_rate(const epsol_params* params, double* out);

typedef struct epsol_stationary_point {
    double n;
    double efield;
    int is_saddle;          /* 1 saddle, 0 center */
    double jacobian_det;
} epsol_stationary_point;

/* Exactly two points: (1,0) saddle and (n_ce,0) center. */
epsol_status epsol_classify_stationary_points(const epsol_params* params,
                                              epsol_stationary_point out[2]);

typedef struct epsol_solve_options {
    double dxi;           /* fixed RK4 step, 0 < dxi <= 1e-2 (default 1e-3) */
    double xi_max;        /* march horizon (default 60) */
    double tail_cut;      /* stop once n - 1 < tail_cut (default 1e-12) */
    double drift_tol_rel; /* drift tolerance as a multiple of g(1) (default 1e-8) */
} epsol_solve_options;

void epsol_solve_options_init(epsol_solve_options* options);

/* March the half-line orbit from the exact peak (n_star, 0). */
epsol_status epsol_solve_half(const epsol_params* params,
                              const epsol_solve_options* options,
                              epsol_profile** out);
/* Even/odd reflection of a half-line profile onto [-xi_end, xi_end]. */
epsol_status epsol_profile_mirror(const epsol_profile* half, epsol_profile** out);
void epsol_profile_free(epsol_profile* profile);

size_t epsol_profile_size(const epsol_profile* profile);
int epsol_profile_is_mirrored(const epsol_profile* profile);
/* Borrowed pointers, valid until the profile is freed. */
const double* epsol_profile_xi(const epsol_profile* profile);
const double* epsol_profile_n_excess(const epsol_profile* profile);  /* n - 1 */
const double* epsol_profile_u(const epsol_profile* profile);
const double* epsol_profile_phi(const epsol_profile* profile);
const double* epsol_profile_efield(const epsol_profile* profile);
double epsol_profile_drift(const epsol_profile* profile);
/* Copy of the generating parameters; the caller frees the handle. */
epsol_status epsol_profile_params(const epsol_profile* profile, epsol_params** out);
/* Least-squares exponential decay rate of n-1 over its last sampled decade
 * above tail_cut. */
epsol_status epsol_profile_tail_rate(const epsol_profile* profile,
                                     double tail_cut, double* out);

/* ---- KdV reference and remainders ------------------------------------ */

/* n_KdV(xi) = (3 gamma / V) sech^2(sqrt(V gamma / 2) xi). */
epsol_status epsol_kdv_value(double gamma, double sound_speed, double xi,
                             double* out);
/* Max |−γ n' + V n n' + n'''/(2V)| on the grid; analytic derivatives by
 * default, second-order finite differences when use_finite_differences. */
epsol_status epsol_kdv_residual_max(double gamma, double sound_speed,
                                    double xi_min, double xi_max, double dxi,
                                    int use_finite_differences, double* out);

/* Default weight rate sqrt(2 V gamma) / 2. */
epsol_status epsol_default_weight_rate(const epsol_params* params, double* out);

/* Remainders n_R = n - 1 - eps n_KdV, u_R = u - eps V n_KdV,
 * phi_R = phi - eps n_KdV on the profile's own grid. alpha < 0 selects the
 * default weight rate. */
epsol_status epsol_remainders_compute(const epsol_profile* profile, double alpha,
                                      epsol_remainders** out);
void epsol_remainders_free(epsol_remainders* remainders);
size_t epsol_remainders_size(const epsol_remainders* remainders);
const double* epsol_remainders_n(const epsol_remainders* remainders);
const double* epsol_remainders_u(const epsol_remainders* remainders);
const double* epsol_remainders_phi(const epsol_remainders* remainders);
const double* epsol_remainders_kdv(const epsol_remainders* remainders);
double epsol_remainders_alpha(const epsol_remainders* remainders);
/* sup over grid of e^{alpha |xi| / 2} max(|n_R|, |u_R|, |phi_R|). */
double epsol_remainders_weighted_sup(const epsol_remainders* remainders);

/* ---- cross-epsilon analysis ------------------------------------------ */

typedef struct epsol_peak_check {
    double epsilon;
    double n_star, u_star, phi_star;          /* measured peaks */
    double pred_n, pred_u, pred_phi;          /* 1 + 3γε/V, 3γε, 3γε/V */
    double err_n, err_u, err_phi;             /* componentwise |measured - predicted| */
} epsol_peak_check;

epsol_status epsol_peak_check_run(const epsol_params* params,
                                  epsol_peak_check* out);

/* Convergence campaign over a strictly decreasing epsilon ladder (>= 3
 * entries). alpha < 0 selects the default weight rate; max_deriv_order in
 * [0, 2] adds finite-difference derivative sup-norms. */
epsol_status epsol_sweep(double sigma, double gamma, const double* epsilons,
                         size_t count, const epsol_solve_options* options,
                         double alpha, int max_deriv_order, epsol_report** out);
void epsol_report_free(epsol_report* report);
/* Canonical JSON document (17-significant-digit numbers); free with
 * epsol_string_free. */
epsol_status epsol_report_json(const epsol_report* report, char** out);
void epsol_string_free(char* text);

typedef enum epsol_field { EPSOL_FIELD_N = 0, EPSOL_FIELD_U = 1, EPSOL_FIELD_PHI = 2 } epsol_field;

/* Fitted log-log order of the k-th derivative sup-norm (weighted = 1 uses the
 * exponentially weighted norms). */
epsol_status epsol_report_fitted_order(const epsol_report* report,
                                       epsol_field field, int k, int weighted,
                                       double* out);
epsol_status epsol_report_sup_norm(const epsol_report* report, size_t eps_index,
                                   epsol_field field, int k, int weighted,
                                   double* out);
epsol_status epsol_report_tail_rate(const epsol_report* report, size_t eps_index,
                                    double* fitted, double* expected);
epsol_status epsol_report_peak_check(const epsol_report* report, size_t eps_index,
                                     epsol_peak_check* out);
/* max over grid of |eps^{-1}(n-1) - n_KdV| for one ladder entry. */
epsol_status epsol_report_kdv_gap(const epsol_report* report, size_t eps_index,
                                  double* out);
size_t epsol_report_case_count(const epsol_report* report);

/* Wrong-sound-speed probe: confirmed = 1 iff the measured peak excess stays
 * bounded away from zero along the ladder (no convergence to 1); vacuous = 1
 * iff no ladder entry is admissible. */
epsol_status epsol_necessity_probe(double sigma, double gamma, double wrong_speed,
                                   const double* epsilons, size_t count,
                                   int* confirmed, int* vacuous);

/* ---- acceptance suite ------------------------------------------------- */

/* Run the full acceptance suite (options NULL for defaults). Each criterion
 * yields one line with measured value, bound, and PASS/FAIL. */
epsol_status epsol_verify_run(const epsol_solve_options* options,
                              epsol_verify_result** out);
void epsol_verify_result_free(epsol_verify_result* result);
size_t epsol_verify_count(const epsol_verify_result* result);
const char* epsol_verify_line(const epsol_verify_result* result, size_t index);
int epsol_verify_passed(const epsol_verify_result* result, size_t index);
int epsol_verify_all_passed(const epsol_verify_result* result);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EPSOL_H */
