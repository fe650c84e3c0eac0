#pragma once

#include <vector>

#include "dynamics.hpp"
#include "model.hpp"

namespace epsol {

// Closed-form sech^2 soliton of the traveling KdV equation with speed gamma.
struct KdvReference {
    double gamma = 0.0;
    double sound_speed = 0.0;
    double amplitude = 0.0;   // 3 gamma / V
    double width_rate = 0.0;  // sqrt(V gamma / 2)

    static KdvReference make(double gamma, double sound_speed);
    static KdvReference for_params(const Params& p);
};

// Remainders against the first-order KdV approximation, on the profile's own
// grid (no re-interpolation).
struct RemainderField {
    double alpha = 0.0;  // weight rate; weight is e^{alpha |xi| / 2}
    std::vector<double> xi;
    std::vector<double> n_kdv;
    std::vector<double> n_r;
    std::vector<double> u_r;
    std::vector<double> phi_r;
    double sup_n = 0.0, sup_u = 0.0, sup_phi = 0.0;
    double weighted_sup_n = 0.0, weighted_sup_u = 0.0, weighted_sup_phi = 0.0;
    double weighted_sup = 0.0;  // sup of e^{alpha|xi|/2} max(|n_r|,|u_r|,|phi_r|)

    std::size_t size() const { return xi.size(); }
};

namespace kdv {

double soliton(const KdvReference& ref, double xi);
double soliton_d1(const KdvReference& ref, double xi);
double soliton_d2(const KdvReference& ref, double xi);
double soliton_d3(const KdvReference& ref, double xi);

// Max over the grid of |-gamma n' + V n n' + n'''/(2V)|; analytic derivatives
// of sech^2 by default, centered second-order differences as a cross-check.
double traveling_residual_max(const KdvReference& ref, double xi_min,
                              double xi_max, double dxi, bool finite_differences);

// Default weight rate sqrt(2 V gamma)/2: half the common tail rate of the
// wave and the soliton, so the weighted sup stays finite.
double default_weight_rate(const Params& p);

// alpha < 0 selects the default rate.
RemainderField compute_remainders(const WaveProfile& profile, double alpha);

// Coefficient F(xi) = 2 V gamma - 2 V^2 n_KdV - V^2 phi_R / eps of the
// remainder equation, sampled on the profile grid (diagnostic only).
std::vector<double> forcing_coefficient(const WaveProfile& profile,
                                        const RemainderField& rem);
// Smallest grid xi beyond which F stays above V*gamma (the empirical xi_1);
// returns +inf if F never clears the bound on the sampled grid.
double forcing_positive_from(const WaveProfile& profile, const RemainderField& rem);

} // namespace kdv
} // namespace epsol
