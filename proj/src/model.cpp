#include "model.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "errors.hpp"

namespace epsol {
namespace {

bool finite(double v) { return std::isfinite(v); }

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

Params Params::physical(double sigma, double gamma, double epsilon) {
    return with_sound_speed(sigma, gamma, epsilon, std::sqrt(1.0 + sigma));
}

Params Params::with_sound_speed(double sigma, double gamma, double epsilon,
                                double sound_speed) {
    if (!finite(sigma) || !finite(gamma) || !finite(epsilon) || !finite(sound_speed))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "parameters must be finite");
    if (sigma < 0.0)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "sigma must be >= 0, got " + format_double(sigma));
    if (gamma < 0.0)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "gamma must be >= 0, got " + format_double(gamma));
    if (epsilon < 0.0)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "epsilon must be >= 0, got " + format_double(epsilon));
    if (sound_speed <= 0.0)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "sound speed must be > 0, got " + format_double(sound_speed));
    Params p;
    p.sigma = sigma;
    p.gamma = gamma;
    p.epsilon = epsilon;
    p.sound_speed = sound_speed;
    p.frame_speed = sound_speed + gamma * epsilon;
    return p;
}

namespace model {

double bisect(double (*f)(double, const void*), const void* ctx, double lo,
              double hi, double xtol, const char* what) {
    double flo = f(lo, ctx);
    double fhi = f(hi, ctx);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(lo < hi) || !std::isfinite(flo) || !std::isfinite(fhi) || flo * fhi > 0.0)
        fail(EPSOL_ERR_BRACKET_FAILURE,
             std::string("no sign change bracketing ") + what + " on [" +
                 format_double(lo) + ", " + format_double(hi) + "]");
    for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at floating resolution
        const double fm = f(mid, ctx);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

void require_positive_density(double n) {
    if (!(n > 0.0))
        fail(EPSOL_ERR_DOMAIN, "density must be > 0, got " + format_double(n));
}

} // namespace

double bernoulli_potential(const Params& p, double n) {
    require_positive_density(n);
    const double J = p.frame_speed;
    return 0.5 * J * J * (1.0 - 1.0 / (n * n)) - p.sigma * std::log(n);
}

double potential_derivative(const Params& p, double n) {
    require_positive_density(n);
    const double J = p.frame_speed;
    return J * J / (n * n * n) - p.sigma / n;
}

double first_integral_potential(const Params& p, double n) {
    require_positive_density(n);
    const double J = p.frame_speed;
    return J * J / n + p.sigma * n + std::exp(bernoulli_potential(p, n));
}

double stationarity_defect(const Params& p, double n) {
    require_positive_density(n);
    return std::log(n) - bernoulli_potential(p, n);
}

double potential_excess(const Params& p, double x) {
    // H(1+x) with 1 - 1/(1+x)^2 written as x(2+x)/(1+x)^2 so the value keeps
    // full relative accuracy down to the tail of the orbit.
    const double J = p.frame_speed;
    const double onepx = 1.0 + x;
    return 0.5 * J * J * (x * (2.0 + x)) / (onepx * onepx) - p.sigma * std::log1p(x);
}

double potential_derivative_excess(const Params& p, double x) {
    const double n = 1.0 + x;
    return p.frame_speed * p.frame_speed / (n * n * n) - p.sigma / n;
}

double density_defect_excess(const Params& p, double x) {
    return x - std::expm1(potential_excess(p, x));
}

double g_of_1(const Params& p) {
    return p.frame_speed * p.frame_speed + p.sigma + 1.0;
}

namespace {

// h^{(m)}(1) = (-1)^m [J^2 (m+2)!/2 - sigma m!].
double h_derivative_at_1(const Params& p, int m) {
    double fact_m = 1.0;
    for (int i = 2; i <= m; ++i) fact_m *= i;
    double fact_m2_half = fact_m * (m + 1) * (m + 2) / 2.0;
    const double value = p.frame_speed * p.frame_speed * fact_m2_half - p.sigma * fact_m;
    return (m % 2 == 0) ? value : -value;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

std::vector<double> g_taylor_coefficients(const Params& p, int kmax) {
    if (kmax < 2 || kmax > 8)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "g Taylor order must lie in [2, 8]");
    // d^k/dn^k e^{H} at n = 1 equals the complete Bell polynomial B_k in the
    // derivatives of H, with H^{(j)}(1) = h^{(j-1)}(1) and H(1) = 0.
    std::vector<double> bell(kmax + 1, 0.0);
    bell[0] = 1.0;
    for (int k = 0; k < kmax; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j)
            s += binomial(k, j) * bell[k - j] * h_derivative_at_1(p, j);
        bell[k + 1] = s;
    }
    const double J2 = p.frame_speed * p.frame_speed;
    std::vector<double> out(kmax + 1, 0.0);
    double fact = 1.0;
    for (int k = 2; k <= kmax; ++k) {
        fact *= k;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        out[k] = sign * fact * J2 + bell[k];
    }
    return out;
}

void g_taylor_leading(const Params& p, double& g2, double& g3) {
    const double V = p.sound_speed;
    const double ge = p.gamma * p.epsilon;
    g2 = ge * (2.0 * V + ge) * (1.0 + 2.0 * V * ge + ge * ge);
    const double J2 = p.frame_speed * p.frame_speed;
    const double A = J2 - p.sigma;
    g3 = 6.0 * J2 - 2.0 * p.sigma + A * A * A + 3.0 * A * (-3.0 * J2 + p.sigma);
}

FirstIntegralGap::FirstIntegralGap(const Params& p) : params_(p) {
    const auto g = g_taylor_coefficients(p, 6);
    double fact = 2.0;
    for (int k = 2; k <= 6; ++k) {
        series_[k - 2] = g[k] / fact;
        fact *= (k + 1);
    }
}

double FirstIntegralGap::operator()(double x) const {
    if (std::fabs(x) <= 1e-4) {
        double s = series_[4];
        for (int i = 3; i >= 0; --i) s = s * x + series_[i];
        return s * x * x;
    }
    const double J = params_.frame_speed;
    return -J * J * x / (1.0 + x) + params_.sigma * x +
           std::expm1(potential_excess(params_, x));
}

double first_integral_gap(const Params& p, double x) {
    return FirstIntegralGap(p)(x);
}

double zeta_root(double sigma) {
    if (!finite(sigma) || sigma < 0.0)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "sigma must be finite and >= 0");
    if (sigma == 0.0) {
        auto f = [](double z) { return z * z + 1.0 - std::exp(0.5 * z * z); };
        return bisect(f, 1.01, 3.0, kRootTol, "zeta_0");
    }
    // log form of the defining equation; strictly positive between 1 and the
    // root, strictly decreasing beyond sqrt((1+sigma)/sigma).
    auto f = [sigma](double z) {
        return sigma * std::log(z) + std::log(sigma) +
               std::log((z - 1.0) * (z - 1.0) + 1.0 / sigma) -
               0.5 * sigma * (z * z - 1.0);
    };
    const double lo = std::sqrt((1.0 + sigma) / sigma) * (1.0 + 1e-9);
    double hi = lo;
    for (int i = 0; i < 200 && f(hi) > 0.0; ++i) hi *= 2.0;
    return bisect(f, lo, hi, kRootTol, "zeta_sigma");
}

Admissibility check_admissible(const Params& p) {
    Admissibility a;
    if (!(p.sigma >= 0.0) || !(p.gamma >= 0.0) || !(p.epsilon >= 0.0) ||
        !(p.sound_speed > 0.0) || !finite(p.frame_speed)) {
        a.reason = AdmissReason::parameter_domain;
        return a;
    }
    const double zeta = zeta_root(p.sigma);
    if (p.sigma > 0.0) {
        a.lower = std::sqrt((1.0 + p.sigma) / p.sigma);
        a.upper = zeta;
        a.value = p.frame_speed / std::sqrt(p.sigma);
    } else {
        a.lower = 1.0;
        a.upper = zeta;
        a.value = p.frame_speed;
    }
    if (a.value <= a.lower) {
        a.reason = AdmissReason::speed_too_low;
    } else if (a.value >= a.upper) {
        a.reason = AdmissReason::speed_too_high;
    } else {
        a.reason = AdmissReason::ok;
        a.admissible = true;
    }
    return a;
}

void require_admissible(const Params& p) {
    const Admissibility a = check_admissible(p);
    if (a.admissible) return;
    std::string msg;
    const char* variable = (p.sigma > 0.0) ? "(V+gamma*eps)/sqrt(sigma)" : "V+gamma*eps";
    switch (a.reason) {
        case AdmissReason::speed_too_low:
            msg = std::string("speed-too-low: ") + variable + " = " + format_double(a.value) +
                  " must exceed " + format_double(a.lower);
            break;
        case AdmissReason::speed_too_high:
            msg = std::string("speed-too-high: ") + variable + " = " + format_double(a.value) +
                  " must stay below zeta = " + format_double(a.upper);
            break;
        default:
            msg = "parameter-domain-violation";
            break;
    }
    fail(EPSOL_ERR_INADMISSIBLE,
         "inadmissible parameters: " + msg + " (window " + format_double(a.lower) +
             " < " + format_double(a.value) + " < " + format_double(a.upper) + ")");
}

double peak_excess(const Params& p) {
    require_admissible(p);
    // n_ce: second zero of l, bracketed from n_c where l is negative.
    auto l = [&p](double x) { return std::log1p(x) - potential_excess(p, x); };
    const double x_c = p.gamma * p.epsilon / std::sqrt(1.0 + p.sigma);
    double hi = std::max(2.0 * x_c, 1e-3);
    for (int i = 0; i < 200 && l(hi) < 0.0; ++i) hi *= 2.0;
    const double x_ce = bisect(l, x_c, hi, kRootTol, "n_ce");

    // n_star: g returns to g(1); g - g(1) is positive just past n_ce and
    // negative at the far end of the bracket.
    auto gap = [&p](double x) { return first_integral_gap(p, x); };
    double upper;
    if (p.sigma > 0.0) {
        upper = p.frame_speed / std::sqrt(p.sigma) - 1.0;
    } else {
        upper = std::max(2.0 * x_ce, 1e-3);
        for (int i = 0; i < 200 && gap(upper) > 0.0; ++i) upper *= 2.0;
    }
    return bisect(gap, x_ce, upper, kRootTol, "n_star");
}

CriticalDensities solve_critical_densities(const Params& p) {
    require_admissible(p);
    CriticalDensities out;
    out.zeta = zeta_root(p.sigma);
    out.n_c = p.frame_speed / std::sqrt(1.0 + p.sigma);

    auto l = [&p](double x) { return std::log1p(x) - potential_excess(p, x); };
    const double x_c = out.n_c - 1.0;
    double hi = std::max(2.0 * x_c, 1e-3);
    for (int i = 0; i < 200 && l(hi) < 0.0; ++i) hi *= 2.0;
    out.n_ce = 1.0 + bisect(l, x_c, hi, kRootTol, "n_ce");

    out.n_star = 1.0 + peak_excess(p);
    if (p.sigma > 0.0) out.n_s = p.frame_speed / std::sqrt(p.sigma);
    return out;
}

} // namespace model
} // namespace epsol
