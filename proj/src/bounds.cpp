#include "obschan/bounds.hpp"

#include <cmath>

namespace obschan {

double binary_entropy(double x) {
    if (x < 0 || x > 1) throw UsageError("binary_entropy: argument must be in [0, 1]");
    if (x == 0 || x == 1) return 0;
    return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

double inverse_entropy(double h) {
    if (h < 0 || h > 1) throw UsageError("inverse_entropy: argument must be in [0, 1]");
    double lo = 0, hi = 0.5;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (binary_entropy(mid) < h)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

CapacitySummary capacities(double p, double r, std::optional<double> q) {
    if (!(p > 0 && p < 0.5)) throw UsageError("capacities: need 0 < p < 1/2");
    if (!(r >= 0 && r <= 1)) throw UsageError("capacities: need 0 <= r <= 1");
    CapacitySummary out;
    out.shannon = 1 - binary_entropy(p);
    out.gv = (2 * p <= 0.5) ? std::max(0.0, 1 - binary_entropy(2 * p)) : 0.0;
    if (r < out.shannon / 3) out.langberg = out.shannon - r;
    out.mrrw1 = lp_bound(std::min(2 * p, 0.5));
    if (q) {
        if (!(*q >= 0 && *q <= 0.5)) throw UsageError("capacities: need 0 <= q <= 1/2");
        double pp = *q * (1 - p) + p * (1 - *q);
        out.stochastic = 1 - binary_entropy(pp);
    }
    return out;
}

double lp_bound(double d) {
    if (!(d >= 0 && d <= 0.5)) throw UsageError("lp_bound: distance must be in [0, 1/2]");
    return binary_entropy(0.5 - std::sqrt(d * (1 - d)));
}

double lp_inverse(double rate) {
    if (!(rate >= 0 && rate <= 1)) throw UsageError("lp_inverse: rate must be in [0, 1]");
    // lp_bound decreases from 1 at d=0 to 0 at d=1/2.
    double lo = 0, hi = 0.5;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (lp_bound(mid) >= rate)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::optional<SystemParams> find_params(double p, double r, int n, int c, int s) {
    if (!(p > 0 && p < 0.5)) throw UsageError("find_params: need 0 < p < 1/2");
    if (!(r >= 0 && r <= 1)) throw UsageError("find_params: need 0 <= r <= 1");
    double sigma = 1 - binary_entropy(p) - r;
    if (sigma <= 0) return std::nullopt;
    double delta0 = sigma / 5;
    double delta1 = sigma / 5;
    double eps_rho = sigma / 5;
    double eps_R = std::min(sigma / 5, 0.9 * (5.0 / 13 - 1.0 / 30) * delta0);
    double rho = 1 - binary_entropy(p) - eps_rho;
    double R = rho - eps_R;
    // Feasibility by construction: the slacks sum to under sigma, so
    // r < 1 - H(p) - delta0 - delta1 - eps_rho - eps_R, and eps_R sits inside
    // (0, (5/13 - 1/30) delta0).
    if (!(r < 1 - binary_entropy(p) - delta0 - delta1 - eps_rho - eps_R))
        throw VerificationError("find_params: margin condition failed");
    if (!(eps_R > 0 && eps_R < (5.0 / 13 - 1.0 / 30) * delta0))
        throw VerificationError("find_params: eps_R window condition failed");
    return SystemParams::create(n, p, r, c, s, R, rho, delta0, delta1, eps_rho, eps_R);
}

BoundCurve figure_curve(double r, const std::vector<double>& p_grid) {
    BoundCurve curve;
    curve.r = r;
    curve.p_star = inverse_entropy(1 - r);
    for (double p : p_grid) {
        CapacitySummary cs = capacities(p, r);
        BoundCurvePoint pt;
        pt.p = p;
        pt.shannon = cs.shannon;
        pt.gv = cs.gv;
        pt.langberg = cs.langberg;
        pt.mrrw1 = cs.mrrw1;
        pt.theorem_regime = r < cs.shannon;
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace obschan
