#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"
#include "model.hpp"

using namespace epsol;

namespace {

// Reference roots computed independently at 30-digit precision.
constexpr double kZeta0 = 1.58520106524451318700876867459;
constexpr double kZetaHalf = 2.02315366156443755262773010917;
constexpr double kZeta1 = 1.56948384668434570724220573264;
constexpr double kZeta2 = 1.30519511705527635051616169189;
constexpr double kZeta5 = 1.12832714493096659629816371157;
constexpr double kNStar01 = 1.36326682015404869894004433639;  // sigma=0, gamma=1, eps=0.1
constexpr double kNCe01 = 1.21784852800671942222650139847;
constexpr double kNStar21 = 1.22420790136436589130868851852;  // sigma=2, gamma=1, eps=0.1
constexpr double kNCe21 = 1.12124712451732895686665369773;

Params p01() { return Params::physical(0.0, 1.0, 0.1); }
Params p21() { return Params::physical(2.0, 1.0, 0.1); }

} // namespace

TEST_CASE("parameter bookkeeping") {
    const Params p = p01();
    CHECK(p.sound_speed == 1.0);
    CHECK(p.frame_speed == doctest::Approx(1.1).epsilon(1e-15));
    const Params hot = p21();
    // V^2 = 1 + sigma up to round-off
    CHECK(hot.sound_speed * hot.sound_speed == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(hot.frame_speed > hot.sound_speed);

    CHECK_THROWS_AS(Params::physical(-1.0, 1.0, 0.1), Error);
    CHECK_THROWS_AS(Params::physical(0.0, -1.0, 0.1), Error);
    CHECK_THROWS_AS(Params::physical(0.0, 1.0, -0.1), Error);
    // Boundary values are constructible; admissibility classifies them.
    CHECK_NOTHROW(Params::physical(0.0, 1.0, 0.0));
}

TEST_CASE("bernoulli potential H") {
    const Params p = p01();
    CHECK(model::bernoulli_potential(p, 1.0) == 0.0);
    // J = 1.1, n = 2: (1.21/2)(1 - 1/4) = 0.45375 exactly
    CHECK(model::bernoulli_potential(p, 2.0) == doctest::Approx(0.45375).epsilon(1e-15));
    // sigma > 0: H -> -infinity monotonically past the sonic density
    const Params hot = p21();
    CHECK(model::bernoulli_potential(hot, 1e6) < model::bernoulli_potential(hot, 1e3));
    CHECK(model::bernoulli_potential(hot, 1e8) < -20.0);

    CHECK_THROWS_AS(model::bernoulli_potential(p, 0.0), Error);
    try {
        model::bernoulli_potential(p, -1.0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.status() == EPSOL_ERR_DOMAIN);
    }
}

TEST_CASE("potential derivative h") {
    const Params p = p01();
    CHECK(model::potential_derivative(p, 1.0) == doctest::Approx(1.21).epsilon(1e-15));
    CHECK(model::potential_derivative(p, 10.0) == doctest::Approx(1.21e-3).epsilon(1e-15));
    CHECK(model::potential_derivative(p, 10.0) > 0.0);
    // h(n_s) = 0 for sigma > 0
    const Params hot = p21();
    const double n_s = hot.frame_speed / std::sqrt(2.0);
    CHECK(std::fabs(model::potential_derivative(hot, n_s)) < 1e-14);
    CHECK_THROWS_AS(model::potential_derivative(p, 0.0), Error);
}

TEST_CASE("first-integral potential g") {
    const Params p = p01();
    CHECK(model::first_integral_potential(p, 1.0) == doctest::Approx(2.21).epsilon(1e-15));
    CHECK(model::g_of_1(p) == doctest::Approx(2.21).epsilon(1e-15));
    // g(n_star) = g(1) at the solved root
    const double n_star = model::solve_critical_densities(p).n_star;
    CHECK(model::first_integral_potential(p, n_star) ==
          doctest::Approx(model::g_of_1(p)).epsilon(1e-12));
    // limit for sigma = 0: exp(J^2/2) < g(1)
    const double limit = std::exp(0.5 * 1.21);
    CHECK(limit == doctest::Approx(1.83125220888577324).epsilon(1e-15));
    CHECK(model::first_integral_potential(p, 1e9) == doctest::Approx(limit).epsilon(1e-8));
    CHECK(limit < model::g_of_1(p));
}

TEST_CASE("stationarity defect l") {
    const Params p = p01();
    CHECK(model::stationarity_defect(p, 1.0) == 0.0);
    CHECK(model::stationarity_defect(p, 1.1) < 0.0);   // l decreases through n_c = 1.1
    CHECK(model::stationarity_defect(p, 1e6) > 10.0);  // l -> infinity
    const Params hot = p21();
    CHECK(model::stationarity_defect(hot, hot.frame_speed / std::sqrt(3.0)) < 0.0);
}

TEST_CASE("zeta roots") {
    CHECK(model::zeta_root(0.0) == doctest::Approx(kZeta0).epsilon(1e-11));
    CHECK(model::zeta_root(0.5) == doctest::Approx(kZetaHalf).epsilon(1e-11));
    CHECK(model::zeta_root(1.0) == doctest::Approx(kZeta1).epsilon(1e-11));
    CHECK(model::zeta_root(2.0) == doctest::Approx(kZeta2).epsilon(1e-11));
    CHECK(model::zeta_root(5.0) == doctest::Approx(kZeta5).epsilon(1e-11));
    // defining-equation residual
    const double z0 = model::zeta_root(0.0);
    CHECK(std::fabs(z0 * z0 + 1.0 - std::exp(0.5 * z0 * z0)) <= 1e-10);
    // ordering zeta_sigma > sqrt((1+sigma)/sigma)
    for (double sigma : {0.5, 1.0, 2.0, 5.0})
        CHECK(model::zeta_root(sigma) > std::sqrt((1.0 + sigma) / sigma));
    CHECK_THROWS_AS(model::zeta_root(-1.0), Error);
}

TEST_CASE("admissibility window") {
    CHECK(model::check_admissible(p01()).admissible);
    {
        const Admissibility a = model::check_admissible(Params::physical(0.0, 1.0, 0.0));
        CHECK_FALSE(a.admissible);
        CHECK(a.reason == AdmissReason::speed_too_low);
    }
    {
        // J = 1.6 > zeta_0 = 1.5852
        const Admissibility a = model::check_admissible(Params::physical(0.0, 6.0, 0.1));
        CHECK_FALSE(a.admissible);
        CHECK(a.reason == AdmissReason::speed_too_high);
    }
    {
        const Admissibility a = model::check_admissible(p21());
        CHECK(a.admissible);
        CHECK(a.value == doctest::Approx(p21().frame_speed / std::sqrt(2.0)));
        CHECK(a.lower == doctest::Approx(std::sqrt(1.5)));
    }
    try {
        model::require_admissible(Params::physical(0.0, 6.0, 0.1));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.status() == EPSOL_ERR_INADMISSIBLE);
        CHECK(std::string(e.what()).find("speed-too-high") != std::string::npos);
    }
}

TEST_CASE("critical densities") {
    const CriticalDensities cold = model::solve_critical_densities(p01());
    CHECK(cold.n_c == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(cold.n_ce == doctest::Approx(kNCe01).epsilon(1e-11));
    CHECK(cold.n_star == doctest::Approx(kNStar01).epsilon(1e-12));
    CHECK_FALSE(cold.n_s.has_value());
    CHECK(1.0 < cold.n_c);
    CHECK(cold.n_c < cold.n_ce);
    CHECK(cold.n_ce < cold.n_star);

    const CriticalDensities hot = model::solve_critical_densities(p21());
    CHECK(hot.n_ce == doctest::Approx(kNCe21).epsilon(1e-11));
    CHECK(hot.n_star == doctest::Approx(kNStar21).epsilon(1e-12));
    REQUIRE(hot.n_s.has_value());
    CHECK(hot.n_star < *hot.n_s);

    // root residuals
    CHECK(std::fabs(model::stationarity_defect(p01(), cold.n_ce)) <= 1e-10);
    CHECK(std::fabs(model::first_integral_potential(p01(), cold.n_star) -
                    model::g_of_1(p01())) <= 1e-10 * model::g_of_1(p01()));

    CHECK_THROWS_AS(model::solve_critical_densities(Params::physical(0.0, 6.0, 0.1)),
                    Error);
}

TEST_CASE("peak matches the first-order prediction up to an O(1) constant") {
    // |n_star - 1 - 3*gamma*eps/V| <= C eps^2; the measured constant is ~6.3
    // at eps = 0.1 and decays toward 5.25.
    const double x_star = model::peak_excess(p01());
    CHECK(std::fabs(x_star - 0.3) <= 7.0 * 0.01);
    CHECK(x_star == doctest::Approx(kNStar01 - 1.0).epsilon(1e-12));
}

TEST_CASE("g Taylor coefficients") {
    double g2 = 0.0, g3 = 0.0;
    model::g_taylor_leading(p01(), g2, g3);
    // gamma*eps*(2V+gamma*eps)*(1+2V*gamma*eps+(gamma*eps)^2) = 0.1*2.1*1.21
    CHECK(g2 == doctest::Approx(0.2541).epsilon(1e-14));
    // second closed form (J^2-sigma)(J^2-1-sigma)
    CHECK(g2 == doctest::Approx(1.21 * 0.21).epsilon(1e-14));

    // Bell recursion agrees with both closed forms (two algebraic routes).
    for (const Params& p : {p01(), p21(), Params::physical(0.5, 0.7, 0.03)}) {
        const auto coeffs = model::g_taylor_coefficients(p, 6);
        double c2 = 0.0, c3 = 0.0;
        model::g_taylor_leading(p, c2, c3);
        CHECK(coeffs[2] == doctest::Approx(c2).epsilon(1e-12));
        CHECK(coeffs[3] == doctest::Approx(c3).epsilon(1e-12));
    }

    // g'''(1) -> -2(1+sigma) as eps -> 0
    double h2 = 0.0, h3 = 0.0;
    model::g_taylor_leading(Params::physical(0.0, 1.0, 1e-8), h2, h3);
    CHECK(h3 == doctest::Approx(-2.0).epsilon(1e-6));
    model::g_taylor_leading(Params::physical(2.0, 1.0, 1e-8), h2, h3);
    CHECK(h3 == doctest::Approx(-6.0).epsilon(1e-6));

    // finite-difference oracle for g''(1), centered fourth order
    for (const Params& p : {p01(), p21()}) {
        auto g = [&](double n) { return model::first_integral_potential(p, n); };
        const double h = 5e-3;
        const double fd = (-g(1.0 + 2 * h) + 16 * g(1.0 + h) - 30 * g(1.0) +
                           16 * g(1.0 - h) - g(1.0 - 2 * h)) /
                          (12 * h * h);
        double c2 = 0.0, c3 = 0.0;
        model::g_taylor_leading(p, c2, c3);
        CHECK(fd == doctest::Approx(c2).epsilon(1e-6));
    }
}

TEST_CASE("gap evaluation stays accurate through the series crossover") {
    for (const Params& p : {p01(), p21()}) {
        // direct three-term form vs series around the 1e-4 hand-off
        for (double x : {5e-5, 9.9e-5, 1.01e-4, 2e-4}) {
            const double gap = model::first_integral_gap(p, x);
            const double direct =
                model::first_integral_potential(p, 1.0 + x) - model::g_of_1(p);
            CHECK(gap == doctest::Approx(direct).epsilon(1e-6));
            CHECK(gap > 0.0);
        }
        // far tail: positive and quadratic to leading order
        double c2 = 0.0, c3 = 0.0;
        model::g_taylor_leading(p, c2, c3);
        for (double x : {1e-8, 1e-10, 1e-12}) {
            const double gap = model::first_integral_gap(p, x);
            CHECK(gap == doctest::Approx(0.5 * c2 * x * x).epsilon(1e-6));
        }
    }
}

TEST_CASE("sampled admissible parameters satisfy the structural inequalities") {
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> sigma_draw(0.0, 5.0);
    std::uniform_real_distribution<double> gamma_draw(0.2, 2.0);
    std::uniform_real_distribution<double> eps_draw(1e-3, 0.2);
    int accepted = 0;
    while (accepted < 25) {
        const double sigma = (accepted % 4 == 0) ? 0.0 : sigma_draw(rng);
        const Params p = Params::physical(sigma, gamma_draw(rng), eps_draw(rng));
        if (!model::check_admissible(p).admissible) continue;
        ++accepted;
        const CriticalDensities roots = model::solve_critical_densities(p);
        CHECK(1.0 < roots.n_c);
        CHECK(roots.n_c < roots.n_ce);
        CHECK(roots.n_ce < roots.n_star);
        if (sigma > 0.0) {
            REQUIRE(roots.n_s.has_value());
            CHECK(roots.n_star < *roots.n_s);
            // g(1) > g(n_s)
            CHECK(model::g_of_1(p) > model::first_integral_potential(p, *roots.n_s));
        }
        CHECK(std::fabs(model::stationarity_defect(p, roots.n_ce)) <= 1e-10);
        CHECK(std::fabs(model::first_integral_potential(p, roots.n_star) -
                        model::g_of_1(p)) <= 1e-10 * model::g_of_1(p));

        // g >= g(1) on (1, n_star], equality only at the ends; h > 0 there.
        const double x_star = roots.n_star - 1.0;
        double interior_min = 1e300;
        for (int i = 1; i <= 200; ++i) {
            const double x = x_star * i / 200.0;
            const double gap = model::first_integral_gap(p, x);
            CHECK(gap >= -1e-10);
            if (i < 195) interior_min = std::min(interior_min, gap);
            CHECK(model::potential_derivative(p, 1.0 + x) > 0.0);
        }
        CHECK(interior_min > 0.0);

        // h equals the centered difference of H within 1e-6 relative.
        for (int i = 0; i <= 10; ++i) {
            const double n = 1.0 + x_star * i / 10.0;
            const double h = 1e-6 * std::max(1.0, n);
            const double fd = (model::bernoulli_potential(p, n + h) -
                               model::bernoulli_potential(p, n - h)) /
                              (2.0 * h);
            CHECK(model::potential_derivative(p, n) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("bisection diagnostics") {
    CHECK(model::bisect([](double x) { return x - 2.0; }, 0.0, 5.0, 1e-12, "line") ==
          doctest::Approx(2.0).epsilon(1e-11));
    try {
        model::bisect([](double) { return 1.0; }, 0.0, 1.0, 1e-12, "constant");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.status() == EPSOL_ERR_BRACKET_FAILURE);
    }
}
