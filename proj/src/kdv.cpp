#include "kdv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace epsol {

KdvReference KdvReference::make(double gamma, double sound_speed) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "gamma must be > 0");
    if (!(sound_speed > 0.0) || !std::isfinite(sound_speed))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "sound speed must be > 0");
    KdvReference ref;
    ref.gamma = gamma;
    ref.sound_speed = sound_speed;
    ref.amplitude = 3.0 * gamma / sound_speed;
    ref.width_rate = std::sqrt(sound_speed * gamma / 2.0);
    return ref;
}

KdvReference KdvReference::for_params(const Params& p) {
    return make(p.gamma, p.sound_speed);
}

namespace kdv {
namespace {

double sech(double z) { return 1.0 / std::cosh(z); }

} // namespace

double soliton(const KdvReference& ref, double xi) {
    const double s = sech(ref.width_rate * xi);
    return ref.amplitude * s * s;
}

double soliton_d1(const KdvReference& ref, double xi) {
    const double z = ref.width_rate * xi;
    const double s = sech(z);
    return -2.0 * ref.amplitude * ref.width_rate * s * s * std::tanh(z);
}

double soliton_d2(const KdvReference& ref, double xi) {
    const double z = ref.width_rate * xi;
    const double s2 = sech(z) * sech(z);
    const double t = std::tanh(z);
    const double k2 = ref.width_rate * ref.width_rate;
    return ref.amplitude * k2 * (4.0 * s2 * t * t - 2.0 * s2 * s2);
}

double soliton_d3(const KdvReference& ref, double xi) {
    const double z = ref.width_rate * xi;
    const double s2 = sech(z) * sech(z);
    const double t = std::tanh(z);
    const double k3 = ref.width_rate * ref.width_rate * ref.width_rate;
    return ref.amplitude * k3 * (16.0 * s2 * s2 * t - 8.0 * s2 * t * t * t);
}

double traveling_residual_max(const KdvReference& ref, double xi_min,
                              double xi_max, double dxi, bool finite_differences) {
    if (!(dxi > 0.0) || dxi > 1e-2)
        fail(EPSOL_ERR_INVALID_ARGUMENT, "grid spacing must lie in (0, 1e-2]");
    if (!(xi_min < xi_max))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "xi_min must be below xi_max");
    const auto count = static_cast<std::size_t>(std::floor((xi_max - xi_min) / dxi)) + 1;
    const double V = ref.sound_speed;
    double worst = 0.0;
    if (!finite_differences) {
        for (std::size_t i = 0; i < count; ++i) {
            const double xi = xi_min + static_cast<double>(i) * dxi;
            const double n = soliton(ref, xi);
            const double d1 = soliton_d1(ref, xi);
            const double d3 = soliton_d3(ref, xi);
            worst = std::max(worst, std::fabs(-ref.gamma * d1 + V * n * d1 + d3 / (2.0 * V)));
        }
        return worst;
    }
    // Centered second-order stencils; needs two guard points on each side.
    for (std::size_t i = 0; i < count; ++i) {
        const double xi = xi_min + static_cast<double>(i) * dxi;
        const double m2 = soliton(ref, xi - 2.0 * dxi);
        const double m1 = soliton(ref, xi - dxi);
        const double n0 = soliton(ref, xi);
        const double p1 = soliton(ref, xi + dxi);
        const double p2 = soliton(ref, xi + 2.0 * dxi);
        const double d1 = (p1 - m1) / (2.0 * dxi);
        const double d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * dxi * dxi * dxi);
        worst = std::max(worst, std::fabs(-ref.gamma * d1 + V * n0 * d1 + d3 / (2.0 * V)));
    }
    return worst;
}

double default_weight_rate(const Params& p) {
    return std::sqrt(2.0 * p.sound_speed * p.gamma) / 2.0;
}

RemainderField compute_remainders(const WaveProfile& profile, double alpha) {
    if (profile.size() == 0 ||
        profile.size() != profile.excess.size() ||
        profile.size() != profile.u.size() ||
        profile.size() != profile.phi.size() ||
        profile.size() != profile.efield.size())
        fail(EPSOL_ERR_INVALID_ARGUMENT, "profile arrays are inconsistent");
    if (alpha < 0.0) alpha = default_weight_rate(profile.params);
    const Params& p = profile.params;
    if (!(p.epsilon > 0.0))
        fail(EPSOL_ERR_INVALID_ARGUMENT, "profile parameters carry epsilon = 0");
    const KdvReference ref = KdvReference::for_params(p);

    RemainderField rem;
    rem.alpha = alpha;
    const std::size_t count = profile.size();
    rem.xi = profile.xi;
    rem.n_kdv.resize(count);
    rem.n_r.resize(count);
    rem.u_r.resize(count);
    rem.phi_r.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        // |xi| keeps the sampled soliton bitwise even on mirrored grids.
        const double nk = soliton(ref, std::fabs(profile.xi[i]));
        rem.n_kdv[i] = nk;
        rem.n_r[i] = profile.excess[i] - p.epsilon * nk;
        rem.u_r[i] = profile.u[i] - p.epsilon * p.sound_speed * nk;
        rem.phi_r[i] = profile.phi[i] - p.epsilon * nk;
        const double weight = std::exp(0.5 * alpha * std::fabs(profile.xi[i]));
        const double an = std::fabs(rem.n_r[i]);
        const double au = std::fabs(rem.u_r[i]);
        const double ap = std::fabs(rem.phi_r[i]);
        rem.sup_n = std::max(rem.sup_n, an);
        rem.sup_u = std::max(rem.sup_u, au);
        rem.sup_phi = std::max(rem.sup_phi, ap);
        rem.weighted_sup_n = std::max(rem.weighted_sup_n, weight * an);
        rem.weighted_sup_u = std::max(rem.weighted_sup_u, weight * au);
        rem.weighted_sup_phi = std::max(rem.weighted_sup_phi, weight * ap);
    }
    rem.weighted_sup = std::max({rem.weighted_sup_n, rem.weighted_sup_u, rem.weighted_sup_phi});
    return rem;
}

std::vector<double> forcing_coefficient(const WaveProfile& profile,
                                        const RemainderField& rem) {
    if (rem.size() != profile.size())
        fail(EPSOL_ERR_INVALID_ARGUMENT, "remainders do not match the profile grid");
    const double V = profile.params.sound_speed;
    const double eps = profile.params.epsilon;
    std::vector<double> out(profile.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 2.0 * V * profile.params.gamma - 2.0 * V * V * rem.n_kdv[i] -
                 V * V * rem.phi_r[i] / eps;
    return out;
}

double forcing_positive_from(const WaveProfile& profile, const RemainderField& rem) {
    const std::vector<double> f = forcing_coefficient(profile, rem);
    const double bound = profile.params.sound_speed * profile.params.gamma;
    // Scan the decaying half-line from the far end toward the peak.
    const std::size_t begin = profile.mirrored ? profile.peak_index : 0;
    double from = std::numeric_limits<double>::infinity();
    for (std::size_t i = profile.size(); i-- > begin;) {
        if (f[i] <= bound) return from;
        from = profile.xi[i];
    }
    return from;
}

} // namespace kdv
} // namespace epsol
