#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dynamics.hpp"
#include "errors.hpp"
#include "model.hpp"

using namespace epsol;

namespace {

Params p01() { return Params::physical(0.0, 1.0, 0.1); }
Params p21() { return Params::physical(2.0, 1.0, 0.1); }

// E'(0) = (n_star - e^{H(n_star)})/eps at sigma=0, gamma=1, eps=0.1,
// evaluated at 30-digit precision from the independently solved peak.
constexpr double kPeakEfieldSlope = 0.408406847209794784555886192373;

} // namespace

TEST_CASE("phase rhs vanishes at the stationary points") {
    const Params p = p01();
    const auto at_saddle = dynamics::phase_rhs(p, {1.0, 0.0});
    CHECK(at_saddle[0] == 0.0);
    CHECK(at_saddle[1] == 0.0);

    const CriticalDensities roots = model::solve_critical_densities(p);
    const auto at_center = dynamics::phase_rhs(p, {roots.n_ce, 0.0});
    CHECK(at_center[0] == 0.0);
    CHECK(std::fabs(at_center[1]) < 1e-9);

    // peak: n' = 0 and E' > 0 (density defect is positive past n_ce)
    const auto at_peak = dynamics::phase_rhs(p, {roots.n_star, 0.0});
    CHECK(at_peak[0] == 0.0);
    CHECK(at_peak[1] == doctest::Approx(kPeakEfieldSlope).epsilon(1e-9));
}

TEST_CASE("field slope at the peak approaches 3 gamma^2 eps") {
    // E'(0) = (n* - e^{H(n*)})/eps = 3 gamma^2 eps (1 + O(eps))
    for (double gamma : {1.0, 0.7}) {
        const Params p = Params::physical(0.0, gamma, 1e-4);
        const double x_star = model::peak_excess(p);
        const auto d = dynamics::phase_rhs(p, {1.0 + x_star, 0.0});
        CHECK(d[1] / p.epsilon ==
              doctest::Approx(3.0 * gamma * gamma).epsilon(2e-2));
    }
}

TEST_CASE("density defect changes sign exactly at the center density") {
    for (const Params& p : {p01(), p21()}) {
        const CriticalDensities roots = model::solve_critical_densities(p);
        const double x_ce = roots.n_ce - 1.0;
        const double x_star = roots.n_star - 1.0;
        // n < e^{H(n)} between the rest state and the center, n > e^{H(n)} beyond
        CHECK(model::density_defect_excess(p, 0.5 * x_ce) < 0.0);
        CHECK(model::density_defect_excess(p, 0.5 * (x_ce + x_star)) > 0.0);
        CHECK(model::density_defect_excess(p, x_star) > 0.0);
    }
    // h changes sign at the sonic density when sigma > 0
    const Params hot = p21();
    const double n_s = hot.frame_speed / std::sqrt(2.0);
    CHECK(model::potential_derivative(hot, n_s * 1.05) < 0.0);
    CHECK(model::potential_derivative(hot, n_s * 0.95) > 0.0);
}

TEST_CASE("phase rhs flags the sonic singularity") {
    const Params hot = p21();
    const double n_s = hot.frame_speed / std::sqrt(2.0);
    try {
        dynamics::phase_rhs(hot, {n_s, 0.1});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.status() == EPSOL_ERR_SONIC_SINGULARITY);
    }
}

TEST_CASE("jacobian at the saddle") {
    for (const Params& p : {p01(), p21(), Params::physical(0.0, 1.0, 1e-3)}) {
        const auto jac = dynamics::phase_jacobian(p, {1.0, 0.0});
        const double J2 = p.frame_speed * p.frame_speed;
        CHECK(jac[0] == 0.0);
        CHECK(jac[3] == 0.0);
        CHECK(jac[1] == doctest::Approx(-1.0 / (J2 - p.sigma)).epsilon(1e-13));
        CHECK(jac[2] ==
              doctest::Approx((1.0 + p.sigma - J2) / p.epsilon).epsilon(1e-11));
        const double det = jac[0] * jac[3] - jac[1] * jac[2];
        CHECK(det < 0.0);
        // eigenvalue-determinant identity for the trace-zero matrix
        const double lambda = dynamics::saddle_rate(p);
        CHECK(lambda * lambda == doctest::Approx(-det).epsilon(1e-10));
    }
}

TEST_CASE("saddle rate values and limits") {
    CHECK(dynamics::saddle_rate(p01()) ==
          doctest::Approx(std::sqrt(2.1 / 1.21)).epsilon(1e-15));
    // eps -> 0 limit sqrt(2 V gamma)
    CHECK(dynamics::saddle_rate(Params::physical(0.0, 1.0, 1e-10)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK_THROWS_AS(dynamics::saddle_rate(Params::physical(0.0, 6.0, 0.1)), Error);
}

TEST_CASE("stationary point classification") {
    for (const Params& p : {p01(), p21(), Params::physical(0.0, 1.0, 0.01)}) {
        const auto pts = dynamics::classify_stationary_points(p);
        CHECK(pts[0].location.n == 1.0);
        CHECK(pts[0].location.efield == 0.0);
        CHECK(pts[0].is_saddle);
        CHECK(pts[0].jacobian_det < 0.0);
        CHECK_FALSE(pts[1].is_saddle);
        CHECK(pts[1].jacobian_det > 0.0);
        CHECK(pts[1].location.n > 1.0);
        if (p.sigma > 0.0) {
            const double n_s = p.frame_speed / std::sqrt(p.sigma);
            CHECK(pts[1].location.n < n_s);
        }
    }
}

TEST_CASE("half-line integration: peak start, monotone decay, tail hit") {
    const Params p = p01();
    const SolveOptions options;  // dxi 1e-3, xi_max 60, tail_cut 1e-12
    const WaveProfile prof = dynamics::integrate_half_profile(p, options);

    const double x_star = model::peak_excess(p);
    CHECK(prof.xi.front() == 0.0);
    CHECK(prof.excess.front() == x_star);
    CHECK(prof.efield.front() == 0.0);
    CHECK(prof.excess.back() < options.tail_cut);
    CHECK(prof.excess.back() > 0.0);

    for (std::size_t i = 1; i < prof.size(); ++i) {
        CHECK(prof.excess[i] < prof.excess[i - 1]);
        CHECK(prof.u[i] < prof.u[i - 1]);
        CHECK(prof.phi[i] < prof.phi[i - 1]);
        CHECK(prof.excess[i] > 0.0);
    }
    // E >= 0 on the decaying half-line
    CHECK(*std::min_element(prof.efield.begin(), prof.efield.end()) >= 0.0);

    // endpoint: u and phi vanish with the excess
    CHECK(std::fabs(prof.u.back()) < 3.0 * options.tail_cut);
    CHECK(std::fabs(prof.phi.back()) < 3.0 * options.tail_cut);

    // reconstruction identities u = J(1 - 1/n), phi = H(n)
    for (std::size_t i = 0; i < prof.size(); i += 997) {
        const double n = 1.0 + prof.excess[i];
        CHECK(prof.u[i] == doctest::Approx(p.frame_speed * (1.0 - 1.0 / n)).epsilon(1e-12));
        CHECK(prof.phi[i] ==
              doctest::Approx(model::bernoulli_potential(p, n)).epsilon(1e-9));
    }

    // first integral: tiny drift, far below the configured tolerance
    CHECK(prof.first_integral_drift <= 1e-12);
}

TEST_CASE("tail decay follows the saddle eigenvalue") {
    for (const Params& p : {p01(), p21()}) {
        const WaveProfile prof = dynamics::integrate_half_profile(p, {});
        const double rate = dynamics::tail_rate(prof, 1e-12);
        const double lambda = dynamics::saddle_rate(p);
        CHECK(rate == doctest::Approx(lambda).epsilon(3e-2));
        CHECK(rate == doctest::Approx(lambda).epsilon(1e-6));  // far tighter in practice
    }
}

TEST_CASE("RK4 order: halving the step cuts the drift ~16x") {
    SolveOptions coarse;
    coarse.dxi = 1e-2;
    SolveOptions fine;
    fine.dxi = 5e-3;
    for (const Params& p : {p01(), p21()}) {
        const double drift_coarse =
            dynamics::integrate_half_profile(p, coarse).first_integral_drift;
        const double drift_fine =
            dynamics::integrate_half_profile(p, fine).first_integral_drift;
        const double factor = drift_coarse / drift_fine;
        CHECK(factor >= 12.0);
        CHECK(factor <= 20.0);
    }
}

TEST_CASE("numerically differentiated phi matches -E to O(dxi^2)") {
    const WaveProfile prof = dynamics::integrate_half_profile(p01(), {});
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < prof.size(); ++i) {
        const double fd = (prof.phi[i + 1] - prof.phi[i - 1]) / (2.0 * prof.dxi);
        worst = std::max(worst, std::fabs(fd + prof.efield[i]));
    }
    CHECK(worst <= prof.dxi * prof.dxi);
}

TEST_CASE("mirroring is bitwise even with odd field") {
    const WaveProfile half = dynamics::integrate_half_profile(p21(), {});
    const WaveProfile full = dynamics::mirror_to_full_line(half);
    const std::size_t peak = full.peak_index;
    REQUIRE(full.size() == 2 * half.size() - 1);
    CHECK(full.efield[peak] == 0.0);
    CHECK(full.excess[peak] == half.excess[0]);
    for (std::size_t i = 1; i <= peak; ++i) {
        CHECK(full.excess[peak - i] == full.excess[peak + i]);
        CHECK(full.u[peak - i] == full.u[peak + i]);
        CHECK(full.phi[peak - i] == full.phi[peak + i]);
        CHECK(full.efield[peak - i] == -full.efield[peak + i]);
        CHECK(full.xi[peak - i] == -full.xi[peak + i]);
    }
    // peak is the global maximum of the excess
    CHECK(*std::max_element(full.excess.begin(), full.excess.end()) ==
          full.excess[peak]);
    // symmetric derivative at the peak is exactly zero
    CHECK((full.excess[peak + 1] - full.excess[peak - 1]) / (2.0 * full.dxi) == 0.0);
    CHECK_THROWS_AS(dynamics::mirror_to_full_line(full), Error);
}

TEST_CASE("fixed-step march is deterministic") {
    const WaveProfile a = dynamics::integrate_half_profile(p01(), {});
    const WaveProfile b = dynamics::integrate_half_profile(p01(), {});
    CHECK(a.excess == b.excess);
    CHECK(a.efield == b.efield);
    CHECK(a.first_integral_drift == b.first_integral_drift);
}

TEST_CASE("solver rejects bad configurations") {
    auto expect_status = [](epsol_status want, auto&& fn) {
        try {
            fn();
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.status() == want);
        }
    };
    expect_status(EPSOL_ERR_INVALID_ARGUMENT, [] {
        SolveOptions o;
        o.dxi = 0.5;  // above the 1e-2 ceiling
        dynamics::integrate_half_profile(Params::physical(0.0, 1.0, 0.1), o);
    });
    expect_status(EPSOL_ERR_INVALID_ARGUMENT, [] {
        SolveOptions o;
        o.tail_cut = 0.5;  // above the peak excess
        dynamics::integrate_half_profile(Params::physical(0.0, 1.0, 0.1), o);
    });
    expect_status(EPSOL_ERR_INADMISSIBLE, [] {
        dynamics::integrate_half_profile(Params::physical(0.0, 6.0, 0.1), {});
    });
    expect_status(EPSOL_ERR_AMPLITUDE_TOO_SMALL, [] {
        dynamics::integrate_half_profile(Params::physical(0.0, 1.0, 1e-11), {});
    });
}

TEST_CASE("horizon stop leaves a valid truncated profile") {
    SolveOptions o;
    o.xi_max = 2.0;
    const WaveProfile prof = dynamics::integrate_half_profile(p01(), o);
    CHECK(prof.xi.back() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(prof.excess.back() > o.tail_cut);
    CHECK(prof.size() == 2001);
}
