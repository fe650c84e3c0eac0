#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "errors.hpp"

namespace epsol {
namespace dynamics {
namespace {

constexpr double kSonicFloor = 1e-14;
constexpr double kAmplitudeFloor = 1e-10;
// Hand-off from the 2-D march to the manifold-reduced tail march, relative to
// the peak excess. Three decades below the peak the orbit is firmly in the
// linear regime while the 2-D state is still clean.
constexpr double kTailSwitchFraction = 1e-3;

double checked_h_excess(const Params& p, double x) {
    const double h = model::potential_derivative_excess(p, x);
    if (std::fabs(h) < kSonicFloor)
        fail(EPSOL_ERR_SONIC_SINGULARITY,
             "sonic singularity: h(n) vanished at n = " + std::to_string(1.0 + x));
    return h;
}

struct Derivative {
    double dx;
    double de;
};

Derivative rhs_excess(const Params& p, double x, double e) {
    return {-e / checked_h_excess(p, x), model::density_defect_excess(p, x) / p.epsilon};
}

// Slope of the excess along the homoclinic level set, where
// E = sqrt(2 (g(n) - g(1)) / eps) >= 0 on the decaying half-line.
double manifold_slope(const Params& p, const model::FirstIntegralGap& gap_of,
                      double x) {
    double gap = gap_of(x);
    if (gap < 0.0) gap = 0.0;
    return -std::sqrt(2.0 * gap / p.epsilon) / checked_h_excess(p, x);
}

void validate_options(const SolveOptions& o) {
    if (!(o.dxi > 0.0) || o.dxi > 1e-2)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "dxi must lie in (0, 1e-2]");
    if (!(o.xi_max > 0.0))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "xi_max must be > 0");
    if (!(o.tail_cut >= 1e-13))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "tail_cut must be >= 1e-13");
    if (!(o.drift_tol_rel > 0.0))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "drift tolerance must be > 0");
}

} // namespace

std::array<double, 2> phase_rhs(const Params& p, const PhaseState& s) {
    if (!(s.n > 0.0))
        fail(EPSOL_ERR_DOMAIN, "density must be > 0");
    if (!(p.epsilon > 0.0))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "epsilon must be > 0 for the phase flow");
    const Derivative d = rhs_excess(p, s.n - 1.0, s.efield);
    return {d.dx, d.de};
}

std::array<double, 4> phase_jacobian(const Params& p, const PhaseState& s) {
    if (!(s.n > 0.0))
        fail(EPSOL_ERR_DOMAIN, "density must be > 0");
    if (!(p.epsilon > 0.0))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "epsilon must be > 0 for the phase flow");
    const double x = s.n - 1.0;
    const double h = checked_h_excess(p, x);
    const double n = s.n;
    const double hprime = -3.0 * p.frame_speed * p.frame_speed / (n * n * n * n) +
                          p.sigma / (n * n);
    const double expH = 1.0 + std::expm1(model::potential_excess(p, x));
    return {s.efield * hprime / (h * h), -1.0 / h,
            (1.0 - h * expH) / p.epsilon, 0.0};
}

double saddle_rate(const Params& p) {
    model::require_admissible(p);
    const double V = p.sound_speed;
    const double ge = p.gamma * p.epsilon;
    return std::sqrt((2.0 * V * p.gamma + p.gamma * ge) / (1.0 + 2.0 * V * ge + ge * ge));
}

std::array<StationaryPoint, 2> classify_stationary_points(const Params& p) {
    const CriticalDensities roots = model::solve_critical_densities(p);
    std::array<StationaryPoint, 2> out;
    for (int i = 0; i < 2; ++i) {
        const double n = (i == 0) ? 1.0 : roots.n_ce;
        const auto jac = phase_jacobian(p, {n, 0.0});
        StationaryPoint sp;
        sp.location = {n, 0.0};
        sp.jacobian_det = jac[0] * jac[3] - jac[1] * jac[2];
        sp.is_saddle = sp.jacobian_det < 0.0;
        out[i] = sp;
    }
    return out;
}

WaveProfile integrate_half_profile(const Params& p, const SolveOptions& options) {
    validate_options(options);
    model::require_admissible(p);

    const double x_star = model::peak_excess(p);
    if (x_star < kAmplitudeFloor)
        fail(EPSOL_ERR_AMPLITUDE_TOO_SMALL,
             "peak excess " + std::to_string(x_star) + " below 1e-10; nothing to resolve");
    if (options.tail_cut >= x_star)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "tail_cut must be below the peak excess");

    const double x_sonic = (p.sigma > 0.0)
                               ? p.frame_speed / std::sqrt(p.sigma) - 1.0
                               : std::numeric_limits<double>::infinity();
    const double x_switch = std::max(options.tail_cut, x_star * kTailSwitchFraction);
    const double h = options.dxi;
    const double step_estimate = options.xi_max / h;
    if (!(step_estimate < 5e7))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "xi_max/dxi asks for more than 5e7 grid points");
    const auto nsteps = static_cast<std::size_t>(std::llround(step_estimate));

    WaveProfile out;
    out.params = p;
    out.dxi = h;
    out.xi.reserve(nsteps + 1);
    out.excess.reserve(nsteps + 1);
    out.efield.reserve(nsteps + 1);
    out.xi.push_back(0.0);
    out.excess.push_back(x_star);
    out.efield.push_back(0.0);

    double x = x_star;
    double e = 0.0;
    std::size_t step = 0;
    bool done = false;

    // Phase 1: classical RK4 on the 2-D system.
    while (step < nsteps && !done) {
        const Derivative k1 = rhs_excess(p, x, e);
        const Derivative k2 = rhs_excess(p, x + 0.5 * h * k1.dx, e + 0.5 * h * k1.de);
        const Derivative k3 = rhs_excess(p, x + 0.5 * h * k2.dx, e + 0.5 * h * k2.de);
        const Derivative k4 = rhs_excess(p, x + h * k3.dx, e + h * k3.de);
        const double x_next = x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
        const double e_next = e + h / 6.0 * (k1.de + 2.0 * k2.de + 2.0 * k3.de + k4.de);
        ++step;
        if (x_next >= x)
            fail(EPSOL_ERR_NON_MONOTONE,
                 "density increased at xi = " + std::to_string(step * h));
        if (x_next >= x_sonic)
            fail(EPSOL_ERR_SONIC_SINGULARITY,
                 "trajectory reached the sonic density at xi = " + std::to_string(step * h));
        x = x_next;
        e = e_next;
        out.xi.push_back(step * h);
        out.excess.push_back(x);
        out.efield.push_back(e);
        if (x < options.tail_cut) done = true;
        if (x < x_switch) break;
    }

    // Phase 2: RK4 on the first-integral-reduced tail equation. The 2-D
    // march cannot hold the saddle's stable manifold once the excess is many
    // decades below the peak; the reduced equation is exact on the manifold.
    const model::FirstIntegralGap gap_of(p);
    while (step < nsteps && !done) {
        const double k1 = manifold_slope(p, gap_of, x);
        const double k2 = manifold_slope(p, gap_of, x + 0.5 * h * k1);
        const double k3 = manifold_slope(p, gap_of, x + 0.5 * h * k2);
        const double k4 = manifold_slope(p, gap_of, x + h * k3);
        const double x_next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++step;
        if (x_next >= x)
            fail(EPSOL_ERR_NON_MONOTONE,
                 "density increased at xi = " + std::to_string(step * h));
        x = x_next;
        double gap = gap_of(x);
        if (gap < 0.0) gap = 0.0;
        e = std::sqrt(2.0 * gap / p.epsilon);
        out.xi.push_back(step * h);
        out.excess.push_back(x);
        out.efield.push_back(e);
        if (x < options.tail_cut) done = true;
    }

    // Pointwise reconstruction u = J(1 - 1/n), phi = H(n).
    const std::size_t count = out.excess.size();
    out.u.resize(count);
    out.phi.resize(count);
    double drift = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double xi_excess = out.excess[i];
        out.u[i] = p.frame_speed * xi_excess / (1.0 + xi_excess);
        out.phi[i] = model::potential_excess(p, xi_excess);
        const double defect = 0.5 * p.epsilon * out.efield[i] * out.efield[i] -
                              gap_of(xi_excess);
        drift = std::max(drift, std::fabs(defect));
    }
    out.first_integral_drift = drift;

    const double tolerance = options.drift_tol_rel * model::g_of_1(p);
    if (drift > tolerance) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "first-integral drift %.3e exceeds tolerance %.3e", drift, tolerance);
        fail(EPSOL_ERR_DRIFT_EXCEEDED, msg);
    }
    return out;
}

WaveProfile mirror_to_full_line(const WaveProfile& half) {
    if (half.mirrored)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "profile is already mirrored");
    if (half.size() < 2)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "half profile too short to mirror");
    const std::size_t n = half.size();
    WaveProfile out;
    out.params = half.params;
    out.dxi = half.dxi;
    out.mirrored = true;
    out.peak_index = n - 1;
    out.first_integral_drift = half.first_integral_drift;
    const std::size_t total = 2 * n - 1;
    out.xi.resize(total);
    out.excess.resize(total);
    out.u.resize(total);
    out.phi.resize(total);
    out.efield.resize(total);
    for (std::size_t i = 0; i < n - 1; ++i) {
        const std::size_t j = n - 1 - i;
        out.xi[i] = -half.xi[j];
        out.excess[i] = half.excess[j];
        out.u[i] = half.u[j];
        out.phi[i] = half.phi[j];
        out.efield[i] = -half.efield[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.xi[n - 1 + i] = half.xi[i];
        out.excess[n - 1 + i] = half.excess[i];
        out.u[n - 1 + i] = half.u[i];
        out.phi[n - 1 + i] = half.phi[i];
        out.efield[n - 1 + i] = half.efield[i];
    }
    return out;
}

double tail_rate(const WaveProfile& profile, double tail_cut) {
    if (!(tail_cut > 0.0))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "tail_cut must be > 0");
    if (profile.size() == 0)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "empty profile");
    // Work on the decaying half-line.
    const std::size_t begin = profile.mirrored ? profile.peak_index : 0;
    const std::size_t n = profile.size();
    const double x_min = profile.excess[n - 1];
    const double lo = std::max(tail_cut, x_min);
    const double hi = 10.0 * lo;
    double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
    std::size_t count = 0;
    for (std::size_t i = begin; i < n; ++i) {
        const double x = profile.excess[i];
        if (x < lo || x > hi) continue;
        const double t = profile.xi[i];
        const double y = std::log(x);
        sum_t += t;
        sum_y += y;
        sum_tt += t * t;
        sum_ty += t * y;
        ++count;
    }
    if (count < 10)
        fail(EPSOL_ERR_INSUFFICIENT_RESOLUTION,
             "fewer than 10 samples in the final decade of the tail");
    const double denom = count * sum_tt - sum_t * sum_t;
    const double slope = (count * sum_ty - sum_t * sum_y) / denom;
    return -slope;
}

} // namespace dynamics
} // namespace epsol
