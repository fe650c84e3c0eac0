#pragma once

#include <optional>
#include <vector>

#include "epsol/epsol.h"

namespace epsol {

// Parameter tuple (sigma, gamma, epsilon) with the derived speeds. The
// single source of truth for every scalar formula in the toolkit.
struct Params {
    double sigma = 0.0;        // ion/electron temperature ratio, >= 0
    double gamma = 0.0;        // wave speed of the reference soliton, > 0
    double epsilon = 0.0;      // amplitude parameter, > 0
    double sound_speed = 0.0;  // V = sqrt(1 + sigma) unless overridden
    double frame_speed = 0.0;  // J = V + gamma * epsilon

    static Params physical(double sigma, double gamma, double epsilon);
    // Explicit sound speed for the necessity probe; V != sqrt(1+sigma) breaks
    // the KdV matching on purpose.
    static Params with_sound_speed(double sigma, double gamma, double epsilon,
                                   double sound_speed);
};

enum class AdmissReason { ok, speed_too_low, speed_too_high, parameter_domain };

struct Admissibility {
    bool admissible = false;
    AdmissReason reason = AdmissReason::parameter_domain;
    double lower = 0.0;   // active window in the checked variable
    double upper = 0.0;
    double value = 0.0;   // J for sigma = 0, J/sqrt(sigma) for sigma > 0
};

struct CriticalDensities {
    double zeta = 0.0;
    double n_c = 0.0;
    double n_ce = 0.0;
    double n_star = 0.0;
    std::optional<double> n_s;  // sonic density, sigma > 0 only
};

namespace model {

// Scalar functions of density n > 0 (throw Error(EPSOL_ERR_DOMAIN) otherwise).
double bernoulli_potential(const Params& p, double n);      // H(n)
double potential_derivative(const Params& p, double n);     // h(n) = dH/dn
double first_integral_potential(const Params& p, double n); // g(n)
double stationarity_defect(const Params& p, double n);      // l(n) = ln n - H(n)

// Cancellation-free forms in the excess x = n - 1; these carry the tail of
// the orbit where n-1 underflows the spacing of doubles near 1.
double potential_excess(const Params& p, double x);         // H(1+x)
double potential_derivative_excess(const Params& p, double x);
double density_defect_excess(const Params& p, double x);    // n - e^{H(n)}
double first_integral_gap(const Params& p, double x);       // g(1+x) - g(1)
double g_of_1(const Params& p);                             // J^2 + sigma + 1

// Precomputed evaluator of g(1+x) - g(1): the expm1/log1p three-term form
// for |x| > 1e-4, the Taylor form with exact g^{(2..6)}(1) below, where the
// three-term form loses all relative accuracy. Hot path of the tail march.
class FirstIntegralGap {
public:
    explicit FirstIntegralGap(const Params& p);
    double operator()(double x) const;

private:
    Params params_;
    double series_[5];  // g^{(k)}(1)/k!, k = 2..6
};

// Exact Taylor coefficients g^{(k)}(1), k = 2..kmax (kmax <= 8), via the
// Bell-polynomial recursion on the derivatives of h at n = 1.
std::vector<double> g_taylor_coefficients(const Params& p, int kmax);
// The two closed forms used in the peak analysis: g''(1) and g'''(1).
void g_taylor_leading(const Params& p, double& g2, double& g3);

// Upper root of the admissible speed window; depends on sigma only.
double zeta_root(double sigma);

Admissibility check_admissible(const Params& p);
// Throws Error(EPSOL_ERR_INADMISSIBLE) with the violated bound in the message.
void require_admissible(const Params& p);

CriticalDensities solve_critical_densities(const Params& p);
// n_star - 1 with full relative accuracy (bisection carried out in x).
double peak_excess(const Params& p);

// Bracketed bisection to absolute tolerance xtol on the argument. Requires a
// sign change on [lo, hi]; throws Error(EPSOL_ERR_BRACKET_FAILURE) otherwise.
double bisect(double (*f)(double, const void*), const void* ctx, double lo,
              double hi, double xtol, const char* what);

template <typename F>
double bisect(F&& f, double lo, double hi, double xtol, const char* what) {
    auto thunk = [](double x, const void* ctx) -> double {
        return (*static_cast<const std::remove_reference_t<F>*>(ctx))(x);
    };
    return bisect(+thunk, static_cast<const void*>(&f), lo, hi, xtol, what);
}

inline constexpr double kRootTol = 1e-12;

} // namespace model
} // namespace epsol
