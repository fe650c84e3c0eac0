#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "model.hpp"

namespace epsol {

struct PhaseState {
    double n = 1.0;       // ion density
    double efield = 0.0;  // E = -phi'
};

struct StationaryPoint {
    PhaseState location;
    bool is_saddle = false;  // saddle iff det < 0; center iff det > 0, zero trace
    double jacobian_det = 0.0;
};

struct SolveOptions {
    double dxi = 1e-3;
    double xi_max = 60.0;
    double tail_cut = 1e-12;
    double drift_tol_rel = 1e-8;  // tolerance = drift_tol_rel * g(1)
};

// Sampled solitary-wave orbit on a uniform xi grid. Half-line profiles start
// at the peak (xi = 0); mirrored profiles run over [-xi_end, xi_end] with the
// peak at peak_index. The excess n - 1 is the stored state; it keeps full
// relative accuracy in the tail where n itself cannot.
struct WaveProfile {
    Params params;
    double dxi = 0.0;
    bool mirrored = false;
    std::size_t peak_index = 0;
    std::vector<double> xi;
    std::vector<double> excess;  // n - 1
    std::vector<double> u;
    std::vector<double> phi;
    std::vector<double> efield;
    double first_integral_drift = 0.0;

    std::size_t size() const { return xi.size(); }
};

namespace dynamics {

// (n', E') = (-E/h(n), (n - e^{H(n)})/eps). Throws on the sonic singularity
// |h(n)| < 1e-14.
std::array<double, 2> phase_rhs(const Params& p, const PhaseState& s);

// Row-major Jacobian [[E h'/h^2, -1/h], [(1 - h e^H)/eps, 0]].
std::array<double, 4> phase_jacobian(const Params& p, const PhaseState& s);

// Positive saddle eigenvalue sqrt((2Vg + g^2 eps)/(1 + 2Vg eps + (g eps)^2));
// the epsilon-uniform form of the linearization rate at (1, 0).
double saddle_rate(const Params& p);

// Exactly two stationary points: (1,0) saddle, (n_ce,0) center.
std::array<StationaryPoint, 2> classify_stationary_points(const Params& p);

// March the half-line orbit from the exact peak (n_star, 0): classical
// fixed-step RK4 on (n-1, E) through the bulk, then RK4 on the
// first-integral-reduced scalar equation once the excess falls three decades
// below the peak, which keeps the march on the homoclinic manifold all the
// way down to tail_cut.
WaveProfile integrate_half_profile(const Params& p, const SolveOptions& options);

// Even reflection of n, u, phi and odd reflection of E about xi = 0.
WaveProfile mirror_to_full_line(const WaveProfile& half);

// Least-squares exponential decay rate of the excess over its last sampled
// decade above tail_cut.
double tail_rate(const WaveProfile& profile, double tail_cut);

} // namespace dynamics
} // namespace epsol
