#include <doctest.h>

#include <cmath>

#include "fiberforce/chain.hpp"
#include "support.hpp"

using namespace fiberforce;
using testsup::Rng;

namespace {

// Transfer matrix evaluated from its closed form for the symmetric bead,
// independent of the block-elimination code path. Rows (C1,D1,C2,D2),
// columns (A1,B1,A2,B2).
Mat4 expected_transfer(const SimpleFourPortParams& p) {
    const double t = p.t(), t12 = p.t12, r12 = p.r12;
    const double den = 1.0 - r12 * r12;
    const cplx ep = std::exp(iunit * p.phi);
    const cplx em = std::conj(ep);
    Mat4 m;
    m(0, 0) = t;
    m(0, 1) = -iunit * r12 * t12;
    m(0, 2) = -t12 * em;
    m(0, 3) = iunit * r12 * t * em;
    m(1, 0) = -iunit * r12 * t12;
    m(1, 1) = t;
    m(1, 2) = -iunit * r12 * t * em;
    m(1, 3) = t12 * em;
    m(2, 0) = t12 * ep;
    m(2, 1) = iunit * r12 * t * ep;
    m(2, 2) = t;
    m(2, 3) = iunit * r12 * t12;
    m(3, 0) = -iunit * r12 * t * ep;
    m(3, 1) = -t12 * ep;
    m(3, 2) = iunit * r12 * t12;
    m(3, 3) = t;
    for (auto& v : m.e) v /= den;
    return m;
}

ModePair default_modes() { return ModePair(1.0, 0.9); }

}  // namespace

TEST_SUITE_BEGIN("chain");

TEST_CASE("to_transfer: identity scattering gives identity transfer") {
    ScatterMatrix id;
    id.m = Mat4::identity();
    CHECK(testsup::max_entry_distance(to_transfer(id).m, Mat4::identity()) == 0.0);
}

TEST_CASE("to_transfer matches the closed form for symmetric beads") {
    const SimpleFourPortParams headline{0.54, 0.12, 0.0};
    const TransferMatrix t = to_transfer(build_four_port(headline));
    const double expected00 = headline.t() / (1.0 - 0.12 * 0.12);
    CHECK(std::abs(expected00 - 0.84524) < 5e-6);
    CHECK(t.m(0, 0).real() == doctest::Approx(expected00).epsilon(1e-14));
    CHECK(testsup::max_entry_distance(t.m, expected_transfer(headline)) < 1e-12);

    Rng rng(2024010);
    for (int i = 0; i < 100; ++i) {
        const SimpleFourPortParams p = rng.four_port_params();
        CHECK(testsup::max_entry_distance(to_transfer(build_four_port(p)).m,
                                          expected_transfer(p)) < 1e-12);
    }
}

TEST_CASE("to_transfer: r12=0 is block-diagonal with the forward scattering block") {
    const SimpleFourPortParams p{0.54, 0.0, 0.7};
    const ScatterMatrix s = build_four_port(p);
    const TransferMatrix t = to_transfer(s);
    // forward entries (C from A) equal the scattering forward block
    CHECK(testsup::cdist(t.m(0, 0), s.m(0, 0)) < 1e-15);
    CHECK(testsup::cdist(t.m(0, 2), s.m(0, 1)) < 1e-15);
    CHECK(testsup::cdist(t.m(2, 0), s.m(1, 0)) < 1e-15);
    CHECK(testsup::cdist(t.m(2, 2), s.m(1, 1)) < 1e-15);
    // no coupling between forward and backward channels
    for (std::size_t fwd : {0u, 2u})
        for (std::size_t bwd : {1u, 3u}) {
            CHECK(std::abs(t.m(fwd, bwd)) < 1e-15);
            CHECK(std::abs(t.m(bwd, fwd)) < 1e-15);
        }
}

TEST_CASE("to_transfer agrees with the scattering relation on random inputs") {
    Rng rng(2024011);
    for (int i = 0; i < 100; ++i) {
        const ScatterMatrix s = build_four_port(rng.four_port_params());
        const TransferMatrix t = to_transfer(s);
        const Vec4 in{rng.complex_in_disk(1.0), rng.complex_in_disk(1.0),
                      rng.complex_in_disk(1.0), rng.complex_in_disk(1.0)};  // (A1,A2,D1,D2)
        const Vec4 out = s.m * in;                                          // (C1,C2,B1,B2)
        const Vec4 left{in[0], out[2], in[1], out[3]};
        const Vec4 right = t.m * left;
        CHECK(testsup::cdist(right[0], out[0]) < 1e-12);  // C1
        CHECK(testsup::cdist(right[1], in[2]) < 1e-12);   // D1
        CHECK(testsup::cdist(right[2], out[1]) < 1e-12);  // C2
        CHECK(testsup::cdist(right[3], in[3]) < 1e-12);   // D2
    }
}

TEST_CASE("to_transfer: full cross-reflection has no transfer form") {
    CHECK_THROWS_AS(to_transfer(build_four_port({0.0, 1.0, 0.0})), solver_error);
}

TEST_CASE("solve_chain: single bead under higher-mode injection") {
    const ChainConfig cfg = uniform_chain({0.54, 0.12, 0.0}, 1, 0.0, default_modes());
    const FieldState fs = solve_chain(cfg, {0.0, 1.0, 0.0, 0.0});
    const double t = SimpleFourPortParams{0.54, 0.12, 0.0}.t();
    REQUIRE(fs.beads.size() == 1);
    CHECK(testsup::cdist(fs.beads[0].C1, cplx(-0.54, 0.0)) < 1e-12);
    CHECK(testsup::cdist(fs.beads[0].C2, cplx(t, 0.0)) < 1e-12);
    CHECK(testsup::cdist(fs.beads[0].B1, cplx(0.0, 0.12)) < 1e-12);
    CHECK(testsup::cdist(fs.beads[0].B2, cplx(0.0, 0.0)) < 1e-12);
    CHECK(fs.boundary_residual < 1e-12);
}

TEST_CASE("solve_chain: forward-only pair equals the 2x2 cascade") {
    Rng rng(2024012);
    for (int i = 0; i < 50; ++i) {
        const double t = rng.uniform(0.1, 1.0);
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const double d = rng.uniform(0.0, 80.0);
        const ModePair modes = default_modes();
        const Injection inj = rng.forward_injection();

        std::vector<ScatterMatrix> beads(2, build_two_port(t, phi));
        const FieldState fs = solve_chain(ChainConfig{beads, {d}, modes}, inj);

        // independent 2x2 route
        const double t12 = std::sqrt(1.0 - t * t);
        Mat2 m2;
        m2(0, 0) = t;
        m2(0, 1) = -std::exp(-iunit * phi) * t12;
        m2(1, 0) = std::exp(iunit * phi) * t12;
        m2(1, 1) = t;
        const Vec2 mid = m2 * Vec2{inj.A1, inj.A2};
        const Vec2 in2{std::exp(iunit * (modes.k1 * d)) * mid[0],
                       std::exp(iunit * (modes.k2 * d)) * mid[1]};
        const Vec2 out = m2 * in2;

        CHECK(testsup::cdist(fs.segments[1].fwd1, mid[0]) < 1e-12);
        CHECK(testsup::cdist(fs.segments[1].fwd2, mid[1]) < 1e-12);
        CHECK(testsup::cdist(fs.segments[2].fwd1, out[0]) < 1e-12);
        CHECK(testsup::cdist(fs.segments[2].fwd2, out[1]) < 1e-12);
        CHECK(std::abs(fs.segments[0].bwd1) < 1e-12);
        CHECK(std::abs(fs.segments[0].bwd2) < 1e-12);
    }
}

TEST_CASE("solve_chain: zero gap composes like a single product bead") {
    Rng rng(2024013);
    for (int i = 0; i < 30; ++i) {
        const ScatterMatrix bead = build_four_port(rng.four_port_params());
        const Injection inj = rng.forward_injection();
        const ModePair modes = default_modes();

        const FieldState pair =
            solve_chain(ChainConfig{{bead, bead}, {0.0}, modes}, inj);

        // composite scattering matrix: transfer composition converted back is
        // overkill; instead compare boundary amplitudes against a one-bead
        // chain built from the matrix product in transfer space.
        const TransferMatrix composite{to_transfer(bead).m * to_transfer(bead).m};
        const FieldState single = solve_transfer_chain({composite}, {}, modes, inj);

        CHECK(testsup::cdist(pair.segments.back().fwd1, single.segments.back().fwd1) < 1e-11);
        CHECK(testsup::cdist(pair.segments.back().fwd2, single.segments.back().fwd2) < 1e-11);
        CHECK(testsup::cdist(pair.segments.front().bwd1, single.segments.front().bwd1) < 1e-11);
        CHECK(testsup::cdist(pair.segments.front().bwd2, single.segments.front().bwd2) < 1e-11);
    }
}

TEST_CASE("fabry-perot oracle: converges immediately without backscattering") {
    const ChainConfig cfg = two_bead_chain({0.54, 0.0, 0.3}, 7.0, default_modes());
    const Injection inj{0.0, 1.0, 0.0, 0.0};
    const FieldState fp = fabry_perot_oracle(cfg, inj, 1);
    const FieldState tm = solve_chain(cfg, inj);
    CHECK(testsup::max_segment_distance(fp, tm) < 1e-12);
}

TEST_CASE("fabry-perot oracle: moderate reflection converges within 200 bounces") {
    const ChainConfig cfg = two_bead_chain({0.54, 0.12, 0.0}, 3.0, default_modes());
    const Injection inj{0.0, 1.0, 0.0, 0.0};
    const FieldState fp = fabry_perot_oracle(cfg, inj, 200);
    const FieldState tm = solve_chain(cfg, inj);
    CHECK(testsup::max_segment_distance(fp, tm) < 1e-8);
}

TEST_CASE("fabry-perot oracle: strong reflection still converges within 1e4 bounces") {
    const ChainConfig cfg = two_bead_chain({0.1, 0.9, 0.4}, 5.0, default_modes());
    const Injection inj{0.2, 1.0, 0.0, 0.0};
    const FieldState fp = fabry_perot_oracle(cfg, inj, 10000);
    const FieldState tm = solve_chain(cfg, inj);
    CHECK(testsup::max_segment_distance(fp, tm) < 1e-8);
}

TEST_CASE("fabry-perot oracle: diverging setup is reported") {
    const ChainConfig cfg = two_bead_chain({0.1, 0.9, 0.0}, 5.0, default_modes());
    CHECK_THROWS_AS(fabry_perot_oracle(cfg, {0.0, 1.0, 0.0, 0.0}, 3), convergence_error);
    const ChainConfig three = uniform_chain({0.3, 0.1, 0.0}, 3, 1.0, default_modes());
    CHECK_THROWS_AS(fabry_perot_oracle(three, {0.0, 1.0, 0.0, 0.0}, 100), std::domain_error);
}

TEST_CASE("global phase invariance of the solved fields") {
    Rng rng(2024014);
    const ChainConfig cfg = uniform_chain({0.4, 0.2, 1.1}, 3, 6.0, default_modes());
    for (int i = 0; i < 20; ++i) {
        const Injection inj = rng.forward_injection();
        const cplx rot = std::exp(iunit * rng.uniform(0.0, 2.0 * M_PI));
        const Injection rotated{inj.A1 * rot, inj.A2 * rot, inj.D1 * rot, inj.D2 * rot};
        const FieldState a = solve_chain(cfg, inj);
        const FieldState b = solve_chain(cfg, rotated);
        for (std::size_t s = 0; s < a.segments.size(); ++s) {
            CHECK(testsup::cdist(a.segments[s].fwd1 * rot, b.segments[s].fwd1) < 1e-12);
            CHECK(testsup::cdist(a.segments[s].fwd2 * rot, b.segments[s].fwd2) < 1e-12);
            CHECK(testsup::cdist(a.segments[s].bwd1 * rot, b.segments[s].bwd1) < 1e-12);
            CHECK(testsup::cdist(a.segments[s].bwd2 * rot, b.segments[s].bwd2) < 1e-12);
        }
    }
}

TEST_CASE("photon number is conserved at every unitary bead and globally") {
    Rng rng(2024015);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0.0, 5.0));
        std::vector<ScatterMatrix> beads;
        std::vector<double> gaps;
        for (std::size_t j = 0; j < n; ++j) {
            beads.push_back(build_four_port(rng.four_port_params(0.5)));
            if (j + 1 < n) gaps.push_back(rng.uniform(0.1, 40.0));
        }
        const ChainConfig cfg{beads, gaps, default_modes()};
        const Injection inj = rng.forward_injection();
        const FieldState fs = solve_chain(cfg, inj);

        for (const auto& bead : fs.beads) CHECK(conservation_residual(bead) < 1e-10);

        const auto& first = fs.segments.front();
        const auto& last = fs.segments.back();
        const double in_power = std::norm(first.fwd1) + std::norm(first.fwd2) +
                                std::norm(last.bwd1) + std::norm(last.bwd2);
        const double out_power = std::norm(first.bwd1) + std::norm(first.bwd2) +
                                 std::norm(last.fwd1) + std::norm(last.fwd2);
        CHECK(std::abs(out_power - in_power) / in_power < 1e-10);
    }
}

TEST_CASE("inserting distance before the chain only rotates the injected phases") {
    const ChainConfig cfg = two_bead_chain({0.3, 0.1, 0.5}, 11.0, default_modes());
    const ModePair modes = default_modes();
    const double delta = 2.37;

    // single-mode injection: pure global phase, magnitudes unchanged
    const FieldState base = solve_chain(cfg, {0.0, 1.0, 0.0, 0.0});
    const FieldState shifted =
        solve_chain(cfg, {0.0, std::exp(iunit * (modes.k2 * delta)), 0.0, 0.0});
    for (std::size_t s = 0; s < base.segments.size(); ++s) {
        CHECK(std::abs(std::abs(shifted.segments[s].fwd2) - std::abs(base.segments[s].fwd2)) <
              1e-12);
        CHECK(std::abs(std::abs(shifted.segments[s].bwd1) - std::abs(base.segments[s].bwd1)) <
              1e-12);
    }

    // two-mode injection: equivalent to rotating the relative phase by (k1-k2)*delta
    const cplx a1{0.8, 0.1}, a2{0.5, -0.4};
    const FieldState via_distance = solve_chain(
        cfg, {a1 * std::exp(iunit * (modes.k1 * delta)),
              a2 * std::exp(iunit * (modes.k2 * delta)), 0.0, 0.0});
    const FieldState via_relative = solve_chain(
        cfg, {a1 * std::exp(iunit * ((modes.k1 - modes.k2) * delta)), a2, 0.0, 0.0});
    for (std::size_t s = 0; s < via_distance.segments.size(); ++s) {
        CHECK(std::abs(std::abs(via_distance.segments[s].fwd1) -
                       std::abs(via_relative.segments[s].fwd1)) < 1e-12);
        CHECK(std::abs(std::abs(via_distance.segments[s].fwd2) -
                       std::abs(via_relative.segments[s].fwd2)) < 1e-12);
        CHECK(std::abs(std::abs(via_distance.segments[s].bwd1) -
                       std::abs(via_relative.segments[s].bwd1)) < 1e-12);
        CHECK(std::abs(std::abs(via_distance.segments[s].bwd2) -
                       std::abs(via_relative.segments[s].bwd2)) < 1e-12);
    }
}

TEST_CASE("forward-only fields repeat after one beat period") {
    const ModePair modes = default_modes();
    const double d = 17.3;
    const Injection inj{0.0, 1.0, 0.0, 0.0};
    const auto amps_at = [&](double gap) {
        std::vector<ScatterMatrix> beads(2, build_two_port(0.95, 0.0));
        return solve_chain(ChainConfig{beads, {gap}, modes}, inj);
    };
    const FieldState a = amps_at(d);
    const FieldState b = amps_at(d + modes.beat_period());
    for (std::size_t s = 0; s < a.segments.size(); ++s) {
        CHECK(std::abs(std::abs(a.segments[s].fwd1) - std::abs(b.segments[s].fwd1)) < 1e-10);
        CHECK(std::abs(std::abs(a.segments[s].fwd2) - std::abs(b.segments[s].fwd2)) < 1e-10);
    }
}

TEST_CASE("config validation") {
    const ModePair modes = default_modes();
    CHECK_THROWS_AS(ChainConfig({}, {}, modes), std::domain_error);
    CHECK_THROWS_AS(uniform_chain({0.3, 0.0, 0.0}, 2, -1.0, modes), std::domain_error);
    const ChainConfig cfg = uniform_chain({0.3, 0.0, 0.0}, 1, 0.0, modes);
    CHECK_THROWS_AS(solve_chain(cfg, Injection{}), std::domain_error);
    CHECK_THROWS_AS(ModePair(0.9, 1.0), std::domain_error);
    CHECK_THROWS_AS(ModePair(1.0, -0.1), std::domain_error);
}

TEST_SUITE_END();
