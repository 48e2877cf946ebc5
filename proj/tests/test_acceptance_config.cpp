#include <doctest.h>

#include "bgrt/acceptance.hpp"

using namespace bgrt;

TEST_CASE("starved quadrature presets record a resolution rejection, not a failure") {
    AcceptanceConfig cfg;
    cfg.m_scale = 0.4; // below the M >= 64/feature preset for every sweep scale
    const auto res = criterion_ball_annulus_scaling(cfg);
    CHECK(res.status == CriterionStatus::skip);
    CHECK(res.detail.find("resolution rejection") != std::string::npos);

    // Criteria without resolution preconditions still run.
    CHECK(criterion_vertex_lists(cfg).status == CriterionStatus::pass);
    CHECK(criterion_quadrature_sanity(cfg).status == CriterionStatus::pass);
}

TEST_CASE("theta = pi skips the nondegenerate-only rectangle case with a reason") {
    AcceptanceConfig cfg;
    cfg.theta_override = M_PI;
    const auto res = criterion_rectangle_scaling(cfg);
    CHECK(res.status == CriterionStatus::pass); // degenerate half still runs
    CHECK(res.detail.find("skipped: theta is outside") != std::string::npos);
}

TEST_CASE("criterion results are deterministic given the seed") {
    AcceptanceConfig cfg;
    cfg.seed = 424242;
    const auto a = criterion_derivative_validation(cfg);
    const auto b = criterion_derivative_validation(cfg);
    CHECK(a.status == CriterionStatus::pass);
    CHECK(a.detail == b.detail);
}
