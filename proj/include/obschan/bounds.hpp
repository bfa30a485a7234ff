#pragma once

#include <optional>
#include <vector>

#include "obschan/code.hpp"

namespace obschan {

/// H(x) = -x log2 x - (1-x) log2 (1-x), with H(0) = H(1) = 0.
double binary_entropy(double x);

/// Inverse of H on [0, 1/2]; bisection to 1e-12.
double inverse_entropy(double h);

struct CapacitySummary {
    double shannon = 0;                 // 1 - H(p)
    double gv = 0;                      // Gilbert-Varshamov rate at distance 2p
    std::optional<double> langberg;     // 1 - H(p) - r, only when r < (1 - H(p)) / 3
    double mrrw1 = 0;                   // first linear-programming bound at distance 2p
    std::optional<double> stochastic;   // 1 - H(p'), p' = q(1-p) + p(1-q), when q given
};

/// Reference rates at error fraction p and observation rate r. The GV value is
/// 1 - H(2p) while 2p <= 1/2 and 0 beyond (positive rate with relative
/// distance over 1/2 is impossible, so the formula stops being a bound there).
CapacitySummary capacities(double p, double r, std::optional<double> q = std::nullopt);

/// First linear-programming upper bound H(1/2 - sqrt(d(1-d))) at relative distance d.
double lp_bound(double d);

/// Largest relative distance with lp_bound(d) >= rate; bisection to 1e-12.
double lp_inverse(double rate);

/// Slack assignment for a feasible (p, r) operating point: splits the margin
/// sigma = 1 - H(p) - r five ways and shrinks eps_R under its ceiling.
/// Returns nullopt when sigma <= 0.
std::optional<SystemParams> find_params(double p, double r, int n, int c, int s);

struct BoundCurvePoint {
    double p = 0;
    double shannon = 0;
    double gv = 0;
    std::optional<double> langberg;
    double mrrw1 = 0;
    bool theorem_regime = false;  // r < 1 - H(p)
};

struct BoundCurve {
    double r = 0;
    double p_star = 0;  // inverse_entropy(1 - r): regime boundary
    std::vector<BoundCurvePoint> points;
};

BoundCurve figure_curve(double r, const std::vector<double>& p_grid);

}  // namespace obschan
