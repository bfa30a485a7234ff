#include <cmath>

#include "doctest.h"
#include "obschan/bounds.hpp"
#include "oracles.hpp"

using namespace obschan;

TEST_CASE("binary entropy endpoints, symmetry, and oracle agreement") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    for (double x = 0.01; x < 1.0; x += 0.017) {
        CHECK(binary_entropy(x) == doctest::Approx(binary_entropy(1 - x)).epsilon(1e-13));
        CHECK(std::abs(binary_entropy(x) - oracle::entropy(x)) < 1e-13);
    }
}

TEST_CASE("inverse entropy inverts on the half interval") {
    CHECK(inverse_entropy(0.0) == doctest::Approx(0.0).epsilon(1e-10));
    // The inverse is ill conditioned at the entropy maximum (H' -> 0), so x
    // can only be pinned to ~sqrt(ulp); the forward direction stays tight.
    double top = inverse_entropy(1.0);
    CHECK(top <= 0.5);
    CHECK(top > 0.5 - 2e-8);
    CHECK(binary_entropy(top) == doctest::Approx(1.0).epsilon(1e-12));
    for (double h = 0.05; h < 1.0; h += 0.05) {
        double x = inverse_entropy(h);
        CHECK(x <= 0.5);
        CHECK(binary_entropy(x) == doctest::Approx(h).epsilon(1e-9));
        CHECK(std::abs(x - oracle::inverse_entropy(h)) < 1e-9);
    }
}

TEST_CASE("capacity summary composes the reference formulas") {
    CapacitySummary cs = capacities(0.1, 0.1);
    CHECK(cs.shannon == doctest::Approx(1 - binary_entropy(0.1)).epsilon(1e-15));
    CHECK(cs.gv == doctest::Approx(1 - binary_entropy(0.2)).epsilon(1e-15));
    REQUIRE(cs.langberg.has_value());  // 0.1 < shannon / 3 ~= 0.177
    CHECK(*cs.langberg == doctest::Approx(cs.shannon - 0.1).epsilon(1e-15));
    CHECK(!cs.stochastic.has_value());

    // d(1-d) = 0.16 at d = 0.2, so mrrw1 collapses to H(0.1) exactly.
    CHECK(cs.mrrw1 == doctest::Approx(binary_entropy(0.1)).epsilon(1e-12));
}

TEST_CASE("langberg rate appears only below one third of shannon") {
    double shannon = 1 - binary_entropy(0.1);
    CHECK(capacities(0.1, shannon / 3 - 1e-6).langberg.has_value());
    CHECK(!capacities(0.1, shannon / 3 + 1e-6).langberg.has_value());
}

TEST_CASE("gv rate clamps to zero past relative distance one half") {
    CHECK(capacities(0.3, 0.1).gv == 0.0);
    CHECK(capacities(0.25, 0.1).gv == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(capacities(0.2, 0.1).gv > 0.0);
}

TEST_CASE("stochastic benchmark uses the composed flip rate") {
    CapacitySummary cs = capacities(0.1, 0.1, 0.05);
    REQUIRE(cs.stochastic.has_value());
    double p_comp = 0.05 * 0.9 + 0.1 * 0.95;
    CHECK(*cs.stochastic == doctest::Approx(1 - binary_entropy(p_comp)).epsilon(1e-12));
}

TEST_CASE("lp bound endpoints and inverse") {
    CHECK(lp_bound(0.5) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(lp_bound(0.0) == doctest::Approx(1.0).epsilon(1e-9));
    for (double rate = 0.1; rate < 1.0; rate += 0.1) {
        double d = lp_inverse(rate);
        CHECK(lp_bound(d) == doctest::Approx(rate).epsilon(1e-8));
    }
}

TEST_CASE("find_params returns slack-consistent parameters when feasible") {
    auto sp = find_params(0.1, 0.1, 64, 1, 2);
    REQUIRE(sp.has_value());
    double shannon = 1 - binary_entropy(0.1);
    double sigma = shannon - 0.1;
    CHECK(sp->p == 0.1);
    CHECK(sp->r == 0.1);
    CHECK(sp->R > 0.1);  // must beat the observation rate, not just be positive
    CHECK(sp->rho < 1);
    CHECK(sp->R <= sp->rho);
    CHECK(sp->rho == doctest::Approx(shannon - sp->eps_rho).epsilon(1e-15));
    CHECK(sp->R == doctest::Approx(sp->rho - sp->eps_R).epsilon(1e-15));
    // All four slacks must fit inside the margin with room to spare.
    CHECK(0.1 < shannon - sp->delta0 - sp->delta1 - sp->eps_rho - sp->eps_R);
    CHECK(sp->delta0 > 0);
    CHECK(sp->delta0 <= sigma / 5 + 1e-12);
    // eps_R must sit strictly inside its window.
    CHECK(sp->eps_R > 0);
    CHECK(sp->eps_R < (5.0 / 13 - 1.0 / 30) * sp->delta0);
}

TEST_CASE("find_params refuses an infeasible operating point") {
    CHECK(!find_params(0.3, 0.5, 64, 1, 2).has_value());  // r above shannon
    CHECK(!find_params(0.5 - 1e-9, 0.01, 64, 1, 2).has_value());
}

TEST_CASE("figure curve pins the regime boundary") {
    std::vector<double> grid;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.01 * i);
    BoundCurve bc = figure_curve(0.1, grid);
    CHECK(std::abs(bc.p_star - oracle::inverse_entropy(0.9)) < 1e-4);
    for (const BoundCurvePoint& pt : bc.points) {
        CHECK(pt.theorem_regime == (0.1 < 1 - binary_entropy(pt.p)));
        if (pt.theorem_regime)
            CHECK(std::abs(pt.shannon - (1 - oracle::entropy(pt.p))) < 1e-12);
    }
}
