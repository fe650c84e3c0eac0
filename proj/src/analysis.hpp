#pragma once

#include <array>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "kdv.hpp"
#include "model.hpp"

namespace epsol {

struct PeakCheck {
    double epsilon = 0.0;
    double n_star = 0.0, u_star = 0.0, phi_star = 0.0;
    double pred_n = 0.0, pred_u = 0.0, pred_phi = 0.0;
    double err_n = 0.0, err_u = 0.0, err_phi = 0.0;
};

struct TailRateCheck {
    double fitted = 0.0;
    double expected = 0.0;  // saddle rate lambda(eps)
    double rel_err = 0.0;
};

// Per-field sup-norms of the k-th remainder derivative, k = 0..2; index 0 is
// the remainder itself.
struct FieldNorms {
    std::array<double, 3> sup{};
    std::array<double, 3> weighted{};
};

struct EpsilonCase {
    double epsilon = 0.0;
    bool ok = false;
    std::string error;
    FieldNorms n, u, phi;
    TailRateCheck tail;
    PeakCheck peak;
    double kdv_gap = 0.0;      // max |eps^{-1}(n-1) - n_KdV| over the grid
    double forcing_xi1 = 0.0;  // empirical xi_1 of the remainder-equation coefficient
};

struct ConvergenceReport {
    double sigma = 0.0;
    double gamma = 0.0;
    SolveOptions options;
    double alpha = 0.0;
    int max_deriv_order = 0;
    std::vector<EpsilonCase> cases;  // one per epsilon, ladder order
    // Least-squares log-log slopes per field and derivative order, over the
    // successful ladder entries.
    std::array<std::array<double, 3>, 3> fitted_order{};          // [field][k]
    std::array<std::array<double, 3>, 3> fitted_order_weighted{};
    bool weight_constant_stable = true;  // weighted C varies <= 2x at k = 0
    std::vector<std::string> failures;
};

struct NecessityProbe {
    bool confirmed = false;
    bool vacuous = false;
    std::vector<double> epsilons;     // admissible entries actually probed
    std::vector<double> peak_excess;  // measured n_star - 1 along the family
};

namespace analysis {

// Least-squares slope of log(values) against log(keys); needs >= 2 points.
double fit_loglog_slope(const std::vector<double>& keys,
                        const std::vector<double>& values);

// Peaks from root-finding and the closed forms u* = J(1 - 1/n*), phi* = H(n*),
// against the first-order predictions (1 + 3γε/V, 3γε, 3γε/V).
PeakCheck peak_check(const Params& p);

// Finite-difference derivative sup-norms of the remainders up to max_order
// (<= 2) on a mirrored profile; requires dxi <= 1e-3 for max_order >= 1.
void derivative_remainder_norms(const WaveProfile& mirrored,
                                const RemainderField& rem, int max_order,
                                FieldNorms& n, FieldNorms& u, FieldNorms& phi);

// Full campaign: solve, mirror, remainders, derivative norms, tail rate and
// peak check per epsilon; cross-epsilon order fits. Ladder must be strictly
// decreasing with >= 3 entries. alpha < 0 selects the default weight rate.
// Independent epsilon cases run concurrently.
ConvergenceReport convergence_campaign(double sigma, double gamma,
                                       const std::vector<double>& epsilons,
                                       const SolveOptions& options, double alpha,
                                       int max_deriv_order);

// Canonical JSON document for a report; all numbers at 17 significant digits.
std::string report_to_json(const ConvergenceReport& report);

// Wrong-sound-speed family: confirmed iff the measured peak excess stays
// bounded away from zero (>= 10x the smallest epsilon) at the ladder's end.
NecessityProbe necessity_probe(double sigma, double gamma, double wrong_speed,
                               const std::vector<double>& epsilons);

} // namespace analysis
} // namespace epsol
