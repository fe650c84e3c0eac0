#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynamics.hpp"
#include "errors.hpp"
#include "kdv.hpp"
#include "model.hpp"

using namespace epsol;

namespace {

Params p01() { return Params::physical(0.0, 1.0, 0.1); }

WaveProfile mirrored(const Params& p) {
    return dynamics::mirror_to_full_line(dynamics::integrate_half_profile(p, {}));
}

} // namespace

TEST_CASE("soliton reference values") {
    const KdvReference unit = KdvReference::make(1.0, 1.0);
    CHECK(unit.amplitude == 3.0);
    CHECK(unit.width_rate == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(kdv::soliton(unit, 0.0) == 3.0);
    // 3 sech^2(1/sqrt(2)), evaluated at 30-digit precision
    CHECK(kdv::soliton(unit, 1.0) ==
          doctest::Approx(1.88787082090456100246).epsilon(1e-14));
    CHECK(kdv::soliton(unit, 100.0) < 1e-15);
    CHECK(kdv::soliton(unit, -2.5) == kdv::soliton(unit, 2.5));

    const KdvReference hot = KdvReference::for_params(Params::physical(2.0, 1.0, 0.1));
    CHECK(hot.amplitude == doctest::Approx(3.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(hot.width_rate * hot.width_rate ==
          doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));

    CHECK_THROWS_AS(KdvReference::make(0.0, 1.0), Error);
    CHECK_THROWS_AS(KdvReference::make(1.0, -1.0), Error);
}

TEST_CASE("analytic derivatives agree with finite differences") {
    const KdvReference ref = KdvReference::make(1.3, 1.7);
    const double h = 1e-5;
    for (double xi : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
        const double fd1 = (kdv::soliton(ref, xi + h) - kdv::soliton(ref, xi - h)) / (2 * h);
        CHECK(kdv::soliton_d1(ref, xi) == doctest::Approx(fd1).epsilon(1e-8));
        const double fd2 = (kdv::soliton(ref, xi + h) - 2 * kdv::soliton(ref, xi) +
                            kdv::soliton(ref, xi - h)) /
                           (h * h);
        CHECK(kdv::soliton_d2(ref, xi) == doctest::Approx(fd2).epsilon(1e-5));
        const double fd3 = (kdv::soliton_d2(ref, xi + h) - kdv::soliton_d2(ref, xi - h)) /
                           (2 * h);
        CHECK(kdv::soliton_d3(ref, xi) == doctest::Approx(fd3).epsilon(1e-7));
    }
}

TEST_CASE("traveling KdV identity") {
    // analytic route: residual at round-off level for any (gamma, V)
    for (const auto& pair : {std::pair{1.0, 1.0}, {1.0, std::sqrt(3.0)}, {2.0, 1.0}}) {
        const KdvReference ref = KdvReference::make(pair.first, pair.second);
        CHECK(kdv::traveling_residual_max(ref, -10.0, 10.0, 1e-2, false) <= 1e-12);
    }
    // finite-difference route: bounded by the second-order truncation error
    const KdvReference unit = KdvReference::make(1.0, 1.0);
    const double fd = kdv::traveling_residual_max(unit, -10.0, 10.0, 1e-3, true);
    CHECK(fd <= 1e-5);
    CHECK(fd > 1e-12);  // genuinely the FD route, not the analytic one
    CHECK_THROWS_AS(kdv::traveling_residual_max(unit, -1.0, 1.0, 0.5, false), Error);
    CHECK_THROWS_AS(kdv::traveling_residual_max(unit, 1.0, -1.0, 1e-2, false), Error);
}

TEST_CASE("remainders against the computed wave") {
    const Params p = p01();
    const WaveProfile full = mirrored(p);
    const RemainderField rem = kdv::compute_remainders(full, -1.0);

    CHECK(rem.alpha == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
    REQUIRE(rem.size() == full.size());

    // peak remainder equals the peak-prediction error
    const std::size_t peak = full.peak_index;
    const double x_star = model::peak_excess(p);
    CHECK(rem.n_r[peak] == doctest::Approx(x_star - 0.3).epsilon(1e-13));

    // measured sup-norms at sigma=0, gamma=1, eps=0.1 (frozen from this
    // solver configuration; the peak error dominates n_R)
    CHECK(rem.sup_n == doctest::Approx(0.063267).epsilon(1e-3));
    CHECK(rem.sup_n < 0.07);
    CHECK(rem.sup_u < 0.05);
    CHECK(rem.sup_phi < 0.05);

    // remainders decay to zero in the tail
    CHECK(std::fabs(rem.n_r.front()) < 1e-11);
    CHECK(std::fabs(rem.n_r.back()) < 1e-11);

    // bitwise even on the mirrored grid
    for (std::size_t i = 1; i <= peak; i += 173) {
        CHECK(rem.n_r[peak - i] == rem.n_r[peak + i]);
        CHECK(rem.u_r[peak - i] == rem.u_r[peak + i]);
        CHECK(rem.phi_r[peak - i] == rem.phi_r[peak + i]);
    }

    // |u_R - V n_R| <= C eps^2 pointwise (measured C ~ 7)
    double worst = 0.0;
    for (std::size_t i = 0; i < rem.size(); ++i)
        worst = std::max(worst, std::fabs(rem.u_r[i] - p.sound_speed * rem.n_r[i]));
    CHECK(worst <= 10.0 * p.epsilon * p.epsilon);

    // weighted sup is finite and dominated by the near-peak region
    CHECK(rem.weighted_sup > 0.0);
    CHECK(rem.weighted_sup < 1.0);
    CHECK(rem.weighted_sup >= rem.sup_n);

    // explicit alpha is honored
    const RemainderField flat = kdv::compute_remainders(full, 0.0);
    CHECK(flat.alpha == 0.0);
    CHECK(flat.weighted_sup == doctest::Approx(std::max({flat.sup_n, flat.sup_u,
                                                         flat.sup_phi})));
}

TEST_CASE("remainders reject inconsistent grids") {
    WaveProfile broken = mirrored(p01());
    broken.u.pop_back();
    CHECK_THROWS_AS(kdv::compute_remainders(broken, -1.0), Error);
}

TEST_CASE("remainder-equation coefficient diagnostic") {
    const Params p = p01();
    const WaveProfile full = mirrored(p);
    const RemainderField rem = kdv::compute_remainders(full, -1.0);
    const std::vector<double> f = kdv::forcing_coefficient(full, rem);
    const double V = p.sound_speed;
    // far field: F -> 2 V gamma; at the peak F is negative (~ -4 V gamma)
    CHECK(f.back() == doctest::Approx(2.0 * V * p.gamma).epsilon(1e-6));
    CHECK(f[full.peak_index] < 0.0);
    // the empirical xi_1 exists inside the sampled window
    const double xi1 = kdv::forcing_positive_from(full, rem);
    CHECK(std::isfinite(xi1));
    CHECK(xi1 > 0.0);
    CHECK(xi1 < full.xi.back());
    // beyond xi_1 the coefficient clears V gamma on the grid
    for (std::size_t i = full.peak_index; i < full.size(); ++i)
        if (full.xi[i] >= xi1) CHECK(f[i] > V * p.gamma);
}
