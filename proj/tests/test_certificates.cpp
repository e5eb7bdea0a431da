#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "discern/certificates.hpp"
#include "discern/errors.hpp"
#include "discern/measures.hpp"
#include "discern/rng.hpp"
#include "oracle.hpp"

using namespace discern;

namespace {

MomentVector box_moments(CertificateKind kind, int d, const Cuboid& box) {
    MomentVector m;
    for (const auto& f : family_densities(kind, d).densities)
        m.push_back(poly_box_moment(f, box));
    return m;
}

MomentVector orbit_moments(const SymmetricBody& body, const AxisTransform& t) {
    MomentVector m;
    for (const auto& f : family_densities(CertificateKind::SymmetricOrbit, body.dim).densities)
        m.push_back(orbit_moment(f, OrbitShape{body, t}));
    return m;
}

}  // namespace

TEST_CASE("certificate families list the advertised densities") {
    const MeasureFamily quad = family_densities(CertificateKind::CuboidQuadratic, 2);
    REQUIRE(quad.size() == 4);
    CHECK(quad.domain.kind == DomainKind::FullSpace);
    const std::vector<double> x{0.3, 0.7};
    CHECK(quad.densities[0].eval(x) == doctest::Approx(1.0));
    CHECK(quad.densities[1].eval(x) == doctest::Approx(0.3));
    CHECK(quad.densities[2].eval(x) == doctest::Approx(0.7));
    CHECK(quad.densities[3].eval(x) == doctest::Approx(0.09));

    const MeasureFamily cubic = family_densities(CertificateKind::CuboidCubic, 2);
    REQUIRE(cubic.size() == 4);
    CHECK(cubic.domain.kind == DomainKind::UnitCube);
    CHECK(cubic.densities[3].eval(x) == doctest::Approx(0.027));

    // d = 1 sequential family is [x, 1 - x]
    const MeasureFamily seq1 = family_densities(CertificateKind::CubeSequential, 1);
    REQUIRE(seq1.size() == 2);
    const std::vector<double> y{0.25};
    CHECK(seq1.densities[0].eval(y) == doctest::Approx(0.25));
    CHECK(seq1.densities[1].eval(y) == doctest::Approx(0.75));

    // telescoping structure in d = 3: phi_1 = x1 x2 x3, phi_2 = (1-x1) x2 x3, ...
    const MeasureFamily seq3 = family_densities(CertificateKind::CubeSequential, 3);
    REQUIRE(seq3.size() == 4);
    const std::vector<double> z{0.5, 0.25, 0.4};
    CHECK(seq3.densities[0].eval(z) == doctest::Approx(0.05));
    CHECK(seq3.densities[1].eval(z) == doctest::Approx(0.5 * 0.25 * 0.4));
    CHECK(seq3.densities[2].eval(z) == doctest::Approx(0.75 * 0.4));
    CHECK(seq3.densities[3].eval(z) == doctest::Approx(0.6));

    CHECK(family_densities(CertificateKind::IntervalPair, 1).size() == 2);
    CHECK_THROWS_AS(family_densities(CertificateKind::IntervalPair, 2), InvalidInput);
    CHECK_THROWS_AS(family_densities(CertificateKind::CuboidCubic, 0), InvalidInput);

    for (CertificateKind k :
         {CertificateKind::IntervalPair, CertificateKind::CubeSequential,
          CertificateKind::CuboidCubic, CertificateKind::CuboidQuadratic,
          CertificateKind::SymmetricOrbit})
        CHECK(certificate_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(certificate_from_string("nope"), InvalidInput);
}

TEST_CASE("quadratic-family reconstruction") {
    // m = (2, 1, 2, 2/3) -> [0,1] x [0,2]
    const auto r = reconstruct_cuboid_quadratic({2.0, 1.0, 2.0, 2.0 / 3.0}, 2);
    REQUIRE(r.shape.has_value());
    const Cuboid box = std::get<Cuboid>(*r.shape);
    CHECK(box.lo[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(box.hi[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(box.lo[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(box.hi[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.status == ReconStatus::Exact);
    CHECK(r.residual < 1e-12);

    // d = 1: only volume and mean are needed
    const auto r1 = reconstruct_cuboid_quadratic({1.0, 0.0}, 1);
    const Cuboid seg = std::get<Cuboid>(*r1.shape);
    CHECK(seg.lo[0] == doctest::Approx(-0.5));
    CHECK(seg.hi[0] == doctest::Approx(0.5));

    CHECK_THROWS_AS(reconstruct_cuboid_quadratic({1.0, 0.0, 0.0, 0.0}, 2),
                    InfeasibleMoments);
    CHECK_THROWS_AS(reconstruct_cuboid_quadratic({-1.0, 0.0}, 1), InfeasibleMoments);
    CHECK_THROWS_AS(reconstruct_cuboid_quadratic({1.0, 0.0}, 2), InvalidInput);
}

TEST_CASE("cubic-family reconstruction") {
    const Cuboid target{{0.2, 0.1}, {0.7, 0.9}};
    const MomentVector m = box_moments(CertificateKind::CuboidCubic, 2, target);
    const auto r = reconstruct_cuboid_cubic(m, 2);
    REQUIRE(r.shape.has_value());
    const Cuboid got = std::get<Cuboid>(*r.shape);
    for (int j = 0; j < 2; ++j) {
        CHECK(got.lo[j] == doctest::Approx(target.lo[j]).epsilon(1e-10));
        CHECK(got.hi[j] == doctest::Approx(target.hi[j]).epsilon(1e-10));
    }
    CHECK(r.residual < 1e-12);

    // a box symmetric about x1 = 0 defeats the cubic inversion
    const Cuboid sym{{-1.0, 0.0}, {1.0, 1.0}};
    const auto amb =
        reconstruct_cuboid_cubic(box_moments(CertificateKind::CuboidCubic, 2, sym), 2);
    CHECK(amb.status == ReconStatus::Ambiguous);
    CHECK(!amb.shape.has_value());

    // d = 1: m = (1, 1/2) -> [0, 1]
    const auto r1 = reconstruct_cuboid_cubic({1.0, 0.5}, 1);
    const Cuboid seg = std::get<Cuboid>(*r1.shape);
    CHECK(seg.lo[0] == doctest::Approx(0.0));
    CHECK(seg.hi[0] == doctest::Approx(1.0));
}

TEST_CASE("cube-sequential numeric reconstruction") {
    // cube at (1/4, 1/4) with edge 1/2
    const auto r = reconstruct_cube_numeric({1.0 / 16, 1.0 / 16, 1.0 / 8}, 2);
    REQUIRE(r.shape.has_value());
    const Cube cube = std::get<Cube>(*r.shape);
    CHECK(cube.anchor[0] == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(cube.anchor[1] == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(cube.edge == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r.status == ReconStatus::Numeric);
    CHECK(r.residual < 1e-10);

    // d = 1: moments of [0, 1] itself, which is not strictly inside (0, 1)
    CHECK_THROWS_AS(reconstruct_cube_numeric({0.5, 0.5}, 1), ReconstructionFailed);

    // seeded: same input, same answer bit for bit
    const auto r2 = reconstruct_cube_numeric({1.0 / 16, 1.0 / 16, 1.0 / 8}, 2);
    CHECK(std::get<Cube>(*r2.shape).anchor[0] == cube.anchor[0]);
    CHECK(std::get<Cube>(*r2.shape).edge == cube.edge);
}

TEST_CASE("orbit reconstruction across all bodies") {
    for (BodyKind kind : {BodyKind::Ball, BodyKind::Cube, BodyKind::CrossPolytope}) {
        for (int d : {1, 2, 3}) {
            const SymmetricBody body{kind, d};
            AxisTransform t;
            for (int j = 0; j < d; ++j) {
                t.scale.push_back(1.3 - 0.3 * j);
                t.shift.push_back(0.4 * (j + 1) - 1.0);
            }
            const auto r = reconstruct_orbit_quadratic(orbit_moments(body, t), body);
            REQUIRE(r.shape.has_value());
            const AxisTransform got = std::get<AxisTransform>(*r.shape);
            for (int j = 0; j < d; ++j) {
                CHECK(got.scale[j] == doctest::Approx(t.scale[j]).epsilon(1e-10));
                CHECK(got.shift[j] == doctest::Approx(t.shift[j]).epsilon(1e-10));
            }
            CHECK(r.residual < 1e-10);
        }
    }
    CHECK_THROWS_AS(
        reconstruct_orbit_quadratic({1.0, 0.0, 0.0, 0.0}, SymmetricBody{BodyKind::Ball, 2}),
        InfeasibleMoments);
}

TEST_CASE("sampled injectivity audits") {
    struct Case {
        CertificateKind kind;
        int d;
    };
    for (const Case c : {Case{CertificateKind::IntervalPair, 1},
                         Case{CertificateKind::CubeSequential, 2},
                         Case{CertificateKind::CuboidCubic, 2},
                         Case{CertificateKind::CuboidQuadratic, 2},
                         Case{CertificateKind::SymmetricOrbit, 2}}) {
        const DiscernibilityReport rep = verify_injectivity_sampling(c.kind, c.d, 50, 7);
        CHECK(rep.pairs_tested == 50);
        CHECK(rep.samples.size() == 50);
        CHECK(rep.min_gap > 0.0);
        CHECK(rep.min_gap_over_separation > 0.0);
        CHECK(separation(rep.worst_pair.first, rep.worst_pair.second) >= 1e-3);
    }
    const DiscernibilityReport lean =
        verify_injectivity_sampling(CertificateKind::CuboidQuadratic, 1, 10, 3, false);
    CHECK(lean.samples.empty());
    CHECK(lean.min_gap > 0.0);
    // same seed, same report
    const DiscernibilityReport again =
        verify_injectivity_sampling(CertificateKind::CuboidQuadratic, 1, 10, 3, false);
    CHECK(again.min_gap == lean.min_gap);
    CHECK_THROWS_AS(verify_injectivity_sampling(CertificateKind::CuboidQuadratic, 1, 0, 1),
                    InvalidInput);
}

TEST_CASE("moment-map Jacobian rank audits") {
    // quadratic family separates boxes locally: full rank at a generic box
    ShapeParams generic{Family::Cuboid, BodyKind::Ball,
                        {0.5, 1.0, 0.0, std::log(2.0)}};  // [0,1] x [0,2]
    const RankReport ok = jacobian_rank(CertificateKind::CuboidQuadratic, 2, generic);
    CHECK(ok.full_rank);
    CHECK(ok.singular_values.size() == 4);

    // cubic family on a box symmetric about x1 = 0 (full-space override):
    // the ambiguity shows up as a rank drop
    ShapeParams sym{Family::Cuboid, BodyKind::Ball, {0.0, 0.45, 0.0, std::log(0.5)}};
    const RankReport drop = jacobian_rank(CertificateKind::CuboidCubic, 2, sym,
                                          Domain{DomainKind::FullSpace});
    CHECK(!drop.full_rank);

    // d+1 sequential densities cannot pin down the 2d cuboid parameters
    ShapeParams cuboid{Family::Cuboid, BodyKind::Ball,
                       {0.5, 0.5, std::log(0.4), std::log(0.3)}};
    const RankReport under = jacobian_rank(CertificateKind::CubeSequential, 2, cuboid);
    CHECK(!under.full_rank);

    // full rank in cube coordinates, where the count matches
    ShapeParams cube{Family::Cube, BodyKind::Ball, {0.25, 0.25, std::log(0.5)}};
    CHECK(jacobian_rank(CertificateKind::CubeSequential, 2, cube).full_rank);

    // orbits under the quadratic family
    ShapeParams orbit{Family::Orbit, BodyKind::Ball, {0.3, -0.2, 0.1, 0.4}};
    CHECK(jacobian_rank(CertificateKind::SymmetricOrbit, 2, orbit).full_rank);

    // boundary shapes are rejected for unit-cube families
    ShapeParams boundary{Family::Cuboid, BodyKind::Ball, {0.5, 0.5, 0.0, 0.0}};
    CHECK_THROWS_AS(jacobian_rank(CertificateKind::CuboidCubic, 2, boundary),
                    InvalidInput);
}

TEST_CASE("slope/intercept recovery from weighted moments") {
    // alpha = 1 on [-1,1], u = 2x + 1: m1 = 2, m2 = 14/3
    const LemmaSolution s =
        solve_lemma_moment(constant_density(1, 1.0), -1.0, 1.0, 2.0, 14.0 / 3.0);
    CHECK(s.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.intercept == doctest::Approx(1.0).epsilon(1e-12));

    // randomized round trips with even nonnegative quartic weights
    auto rng = make_rng(97);
    for (int trial = 0; trial < 100; ++trial) {
        const double center = uniform(rng, -2.0, 2.0);
        const double half = uniform(rng, 0.3, 2.0);
        PolyDensity alpha{1, {}};
        // c0 + c2 (x-c)^2 + c4 (x-c)^4 with nonnegative coefficients
        const double c0 = uniform(rng, 0.1, 2.0);
        const double c2 = uniform(rng, 0.0, 2.0);
        const double c4 = uniform(rng, 0.0, 2.0);
        alpha.terms.push_back({c0, {0}});
        PolyDensity shift{1, {{-center, {0}}, {1.0, {1}}}};
        const PolyDensity sq = oracle::multiply(shift, shift);
        for (const auto& t : sq.terms) alpha.terms.push_back({c2 * t.coeff, t.exps});
        const PolyDensity quart = oracle::multiply(sq, sq);
        for (const auto& t : quart.terms) alpha.terms.push_back({c4 * t.coeff, t.exps});

        const double a = uniform(rng, 0.05, 3.0);
        const double b = uniform(rng, -3.0, 3.0);
        const PolyDensity u{1, {{b, {0}}, {a, {1}}}};
        const Cuboid support{{center - half}, {center + half}};
        const double m1 = poly_box_moment(oracle::multiply(u, alpha), support);
        const double m2 =
            poly_box_moment(oracle::multiply(u, oracle::multiply(u, alpha)), support);
        const LemmaSolution sol =
            solve_lemma_moment(alpha, center - half, center + half, m1, m2);
        CHECK(sol.slope == doctest::Approx(a).epsilon(1e-9));
        CHECK(std::abs(sol.intercept - b) <= 1e-9 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("weighted-moment solver rejects bad inputs") {
    const PolyDensity one = constant_density(1, 1.0);
    // not even about the center
    PolyDensity skew{1, {{1.0, {0}}, {0.5, {1}}}};
    CHECK_THROWS_AS(solve_lemma_moment(skew, -1.0, 1.0, 0.0, 1.0), InvalidInput);
    // negative inside the support
    PolyDensity dip{1, {{-1.0, {0}}, {1.0, {2}}}};
    CHECK_THROWS_AS(solve_lemma_moment(dip, -2.0, 2.0, 0.0, 1.0), InvalidInput);
    // feasibility: m2 equal to the degenerate bound forces slope 0
    CHECK_THROWS_AS(solve_lemma_moment(one, -1.0, 1.0, 0.0, 0.0), InfeasibleMoments);
    CHECK_THROWS_AS(solve_lemma_moment(one, 1.0, -1.0, 0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(solve_lemma_moment(constant_density(2, 1.0), -1.0, 1.0, 0.0, 1.0),
                    InvalidInput);
}
