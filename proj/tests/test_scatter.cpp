#include <doctest.h>

#include <cmath>

#include "fiberforce/scatter.hpp"
#include "support.hpp"

using namespace fiberforce;
using testsup::Rng;

TEST_SUITE_BEGIN("scatter");

TEST_CASE("two-port: transparent bead is the identity") {
    const ScatterMatrix s = build_two_port(1.0, 0.0);
    CHECK(testsup::max_entry_distance(s.m, Mat4::identity()) == 0.0);
}

TEST_CASE("two-port: t = 0.95 gives cross coupling sqrt(1 - t^2)") {
    const ScatterMatrix s = build_two_port(0.95, 0.0);
    const double t12 = std::sqrt(1.0 - 0.95 * 0.95);
    CHECK(std::abs(t12 - 0.31) < 5e-3);  // headline rounded value
    CHECK(s.m(0, 0).real() == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(s.m(1, 1).real() == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(testsup::cdist(s.m(0, 1), cplx(-t12, 0.0)) < 1e-15);
    CHECK(testsup::cdist(s.m(1, 0), cplx(t12, 0.0)) < 1e-15);
    // backward block mirrors the forward one
    CHECK(testsup::cdist(s.m(2, 3), s.m(0, 1)) == 0.0);
    CHECK(testsup::cdist(s.m(3, 2), s.m(1, 0)) == 0.0);
}

TEST_CASE("two-port: cross entries carry magnitude sqrt(1-t^2) and phases phi, pi-phi") {
    const double phi = M_PI / 4.0;
    const ScatterMatrix s = build_two_port(0.6, phi);
    CHECK(std::abs(s.m(1, 0)) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(std::abs(s.m(0, 1)) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(std::arg(s.m(1, 0)) == doctest::Approx(phi).epsilon(1e-14));
    CHECK(std::arg(s.m(0, 1)) == doctest::Approx(M_PI - phi).epsilon(1e-14));
}

TEST_CASE("two-port: out-of-range transmission rejected") {
    CHECK_THROWS_AS(build_two_port(-0.01, 0.0), std::domain_error);
    CHECK_THROWS_AS(build_two_port(1.01, 0.0), std::domain_error);
}

TEST_CASE("four-port: no coupling is the identity") {
    const ScatterMatrix s = build_four_port({0.0, 0.0, 0.0});
    CHECK(testsup::max_entry_distance(s.m, Mat4::identity()) == 0.0);
}

TEST_CASE("four-port: t12=0.54, r12=0.12 fixes t") {
    const SimpleFourPortParams p{0.54, 0.12, 0.0};
    const double t = std::sqrt(1.0 - 0.54 * 0.54 - 0.12 * 0.12);
    CHECK(std::abs(t - 0.83307) < 5e-6);
    const ScatterMatrix s = build_four_port(p);
    CHECK(s.m(0, 0).real() == doctest::Approx(t).epsilon(1e-15));
    CHECK(testsup::cdist(s.m(0, 3), cplx(0.0, 0.12)) < 1e-15);
    CHECK(testsup::cdist(s.m(1, 2), cplx(0.0, 0.12)) < 1e-15);
    CHECK(s.m(0, 2) == cplx(0.0, 0.0));  // no same-mode reflection
    CHECK(s.m(1, 3) == cplx(0.0, 0.0));
}

TEST_CASE("four-port with r12=0 reduces to the two-port embedding") {
    for (double t12 : {0.0, 0.2, 0.31, 0.54, 0.8, 1.0})
        for (double phi : {0.0, 1.1, M_PI, 4.0}) {
            const ScatterMatrix four = build_four_port({t12, 0.0, phi});
            const ScatterMatrix two = build_two_port(std::sqrt(1.0 - t12 * t12), phi);
            CHECK(testsup::max_entry_distance(four.m, two.m) < 1e-14);
        }
}

TEST_CASE("four-port: infeasible amplitude pair rejected") {
    CHECK_THROWS_AS(build_four_port({0.9, 0.6, 0.0}), std::domain_error);
    CHECK_THROWS_AS(build_four_port({-0.1, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("check_unitarity: identity, scaled identity, built matrices") {
    ScatterMatrix id;
    id.m = Mat4::identity();
    CHECK(check_unitarity(id) == 0.0);

    ScatterMatrix half = id;
    for (auto& v : half.m.e) v *= 0.5;
    CHECK(check_unitarity(half) == doctest::Approx(0.75).epsilon(1e-15));

    Rng rng(2024001);
    for (int i = 0; i < 200; ++i) {
        CHECK(check_unitarity(build_two_port(rng.uniform(0.0, 1.0), rng.uniform(0.0, 6.3))) <
              kUnitarityTolBuilt);
        CHECK(check_unitarity(build_four_port(rng.four_port_params())) < kUnitarityTolBuilt);
    }
}

TEST_CASE("general four-port: identity coefficients assemble the identity") {
    const auto [s, dev] = build_general_four_port({});
    CHECK(testsup::max_entry_distance(s.m, Mat4::identity()) == 0.0);
    CHECK(dev == 0.0);
}

TEST_CASE("general four-port reproduces the simplified matrix") {
    Rng rng(2024002);
    for (int i = 0; i < 50; ++i) {
        const SimpleFourPortParams p = rng.four_port_params();
        GeneralFourPortParams g;
        g.t11 = g.t22 = p.t();
        g.t12 = g.t21 = p.t12;
        g.r12 = g.r21 = p.r12;
        g.phi12 = p.phi;
        g.phi21 = M_PI - p.phi;
        g.psi12 = p.phi + M_PI / 2.0;
        g.psi21 = -p.phi + M_PI / 2.0;
        const auto [s, dev] = build_general_four_port(g);
        CHECK(dev < 1e-12);
        CHECK(testsup::max_entry_distance(s.m, build_four_port(p).m) < 1e-14);
    }
}

TEST_CASE("general four-port reports sub-unitary input instead of throwing") {
    GeneralFourPortParams g;
    g.t11 = g.t22 = 0.9;
    const auto [s, dev] = build_general_four_port(g);
    (void)s;
    CHECK(dev == doctest::Approx(0.19).epsilon(1e-14));
}

TEST_CASE("propagation: zero distance, explicit phases, composition") {
    const ModePair modes(1.0, 0.9);
    CHECK(testsup::max_entry_distance(propagation_matrix(0.0, modes), Mat4::identity()) == 0.0);

    const double d = 2.0 * M_PI;  // one fundamental wavelength
    const Mat4 p = propagation_matrix(d, modes);
    CHECK(testsup::cdist(p(0, 0), cplx(1.0, 0.0)) < 1e-14);
    CHECK(testsup::cdist(p(1, 1), std::exp(iunit * (1.8 * M_PI))) < 1e-14);
    CHECK(testsup::cdist(p(2, 2), cplx(1.0, 0.0)) < 1e-14);
    CHECK(testsup::cdist(p(3, 3), std::exp(-iunit * (1.8 * M_PI))) < 1e-14);

    Rng rng(2024003);
    for (int i = 0; i < 50; ++i) {
        const double d1 = rng.uniform(0.0, 50.0);
        const double d2 = rng.uniform(0.0, 50.0);
        CHECK(testsup::max_entry_distance(
                  propagation_matrix(d1, modes) * propagation_matrix(d2, modes),
                  propagation_matrix(d1 + d2, modes)) < 1e-12);
    }

    CHECK_THROWS_AS(propagation_matrix(-1.0, modes), std::domain_error);
}

TEST_CASE("propagation: relative mode phase closes after one beat period") {
    const ModePair modes(1.0, 0.9);
    const Mat4 p = propagation_matrix(modes.beat_period(), modes);
    const cplx relative = p(0, 0) * std::conj(p(1, 1));
    CHECK(std::abs(std::arg(relative)) < 1e-12);
}

TEST_SUITE_END();
