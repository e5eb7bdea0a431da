#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "discern/errors.hpp"
#include "discern/measures.hpp"
#include "discern/rng.hpp"
#include "discern/search.hpp"

using namespace discern;

namespace {

MeasureFamily quadratic_prefix(int d, int k) {
    // [1, x_1, ..., x_d, x_1^2, ...] truncated to the first k densities
    MeasureFamily fam;
    fam.domain.kind = DomainKind::FullSpace;
    fam.densities.push_back(constant_density(d, 1.0));
    for (int j = 0; j < d; ++j) {
        std::vector<int> e(d, 0);
        e[j] = 1;
        fam.densities.push_back(monomial_density(d, e));
    }
    for (int j = 0; j < d; ++j) {
        std::vector<int> e(d, 0);
        e[j] = 2;
        fam.densities.push_back(monomial_density(d, e));
    }
    fam.densities.resize(k);
    return fam;
}

ShapeParams box_params(std::vector<double> lo, std::vector<double> hi) {
    Cuboid c;
    c.lo = std::move(lo);
    c.hi = std::move(hi);
    return to_params(c);
}

}  // namespace

TEST_CASE("guaranteed measure counts") {
    CHECK(guaranteed_measure_count(Family::Cube, 3) == 3);
    CHECK(guaranteed_measure_count(Family::Cuboid, 3) == 5);
    CHECK(guaranteed_measure_count(Family::Orbit, 2) == 3);

    SearchProblem p;
    p.family = Family::Cuboid;
    p.measures = quadratic_prefix(2, 3);
    CHECK(existence_guaranteed(p));
    p.measures = quadratic_prefix(2, 4);
    CHECK(!existence_guaranteed(p));
}

TEST_CASE("residual map stacks moment differences against the first shape") {
    SearchProblem p;
    p.family = Family::Cuboid;
    p.measures = quadratic_prefix(2, 3);

    // volumes 1 and 4, means 0: residuals (3, 0, 0)
    const auto r = residual_map(
        p, {box_params({-0.5, -0.5}, {0.5, 0.5}), box_params({-1.0, -1.0}, {1.0, 1.0})});
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(3.0));
    CHECK(r[1] == doctest::Approx(0.0));
    CHECK(r[2] == doctest::Approx(0.0));

    // an axis swap of a symmetric pair is exactly indiscernible for [1, x1, x2]
    const auto zero = residual_map(
        p, {box_params({-1.0, -0.5}, {1.0, 0.5}), box_params({-0.5, -1.0}, {0.5, 1.0})});
    for (double v : zero) CHECK(std::abs(v) < 1e-14);

    // three shapes stack 2k residuals
    SearchProblem triple = p;
    triple.n_shapes = 3;
    const auto r3 = residual_map(triple, {box_params({0.0, 0.0}, {1.0, 1.0}),
                                          box_params({0.0, 0.0}, {1.0, 2.0}),
                                          box_params({0.0, 0.0}, {2.0, 1.0})});
    CHECK(r3.size() == 6);

    CHECK_THROWS_AS(residual_map(p, {box_params({0.0, 0.0}, {1.0, 1.0})}), InvalidInput);
    SearchProblem unit = p;
    unit.measures.domain.kind = DomainKind::UnitCube;
    CHECK_THROWS_AS(residual_map(unit, {box_params({0.1, 0.1}, {0.4, 0.4}),
                                        box_params({0.5, 0.5}, {0.9, 0.9})}),
                    InvalidInput);
}

TEST_CASE("witness verification accepts the exact pair and rejects a corrupted one") {
    SearchProblem p;
    p.family = Family::Cuboid;
    p.measures = quadratic_prefix(2, 3);

    SearchResult r;
    r.status = SearchStatus::Found;
    r.shapes = {box_params({-1.0, -0.5}, {1.0, 0.5}), box_params({-0.5, -1.0}, {0.5, 1.0})};
    r.residual_inf = 0.0;
    r.min_pairwise_separation = separation(r.shapes[0], r.shapes[1]);

    const WitnessCheck ok = verify_witness(r, p);
    CHECK(ok.verified);
    CHECK(ok.oracle_residual < 1e-9);

    SearchResult bad = r;
    bad.shapes[1] = box_params({-0.5, -1.0}, {0.5, 1.1});
    CHECK(!verify_witness(bad, p).verified);

    // near-coincident shapes fail the separation requirement
    SearchResult close = r;
    close.shapes[1] = r.shapes[0];
    close.shapes[1].coords[0] += 1e-4;
    close.min_pairwise_separation = 1e-4;
    CHECK(!verify_witness(close, p).verified);
}

TEST_CASE("cuboid pair search under k = 2d - 1 measures") {
    SearchProblem p;
    p.family = Family::Cuboid;
    p.measures = quadratic_prefix(2, 3);
    SearchConfig c;
    c.seed = 42;

    const SearchResult r = find_indiscernible_tuple(p, c);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.residual_inf < c.tol_residual);
    CHECK(r.min_pairwise_separation > c.min_separation);
    CHECK(verify_witness(r, p).verified);

    // determinism: identical seed gives bit-identical shapes
    const SearchResult again = find_indiscernible_tuple(p, c);
    REQUIRE(again.shapes.size() == r.shapes.size());
    for (size_t i = 0; i < r.shapes.size(); ++i)
        CHECK(again.shapes[i].coords == r.shapes[i].coords);

    // the zero predicate is invariant under permuting the tuple
    SearchResult swapped = r;
    std::swap(swapped.shapes[0], swapped.shapes[1]);
    const auto res = residual_map(p, swapped.shapes);
    for (double v : res) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("cube pair search under k = d measures") {
    SearchProblem p;
    p.family = Family::Cube;
    p.measures = quadratic_prefix(2, 2);
    SearchConfig c;
    c.seed = 5;
    const SearchResult r = find_indiscernible_tuple(p, c);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.shapes[0].family == Family::Cube);
    CHECK(verify_witness(r, p).verified);
}

TEST_CASE("orbit pair search") {
    SearchProblem p;
    p.family = Family::Orbit;
    p.body = BodyKind::Ball;
    p.measures = quadratic_prefix(2, 3);
    SearchConfig c;
    c.seed = 11;
    const SearchResult r = find_indiscernible_tuple(p, c);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.shapes[0].family == Family::Orbit);
    CHECK(verify_witness(r, p).verified);
}

TEST_CASE("full quadratic family admits no pair") {
    SearchProblem p;
    p.family = Family::Cuboid;
    p.measures = quadratic_prefix(2, 4);
    SearchConfig c;
    c.seed = 3;
    c.max_restarts = 30;
    const SearchResult r = find_indiscernible_tuple(p, c);
    CHECK(r.status == SearchStatus::NotFound);
    CHECK(r.restarts_used == 30);
}

TEST_CASE("disjoint equal-size cube pairs") {
    SearchProblem p;
    p.family = Family::Cube;
    p.measures = quadratic_prefix(2, 1);  // d - 1 = 1 measure
    p.n_shapes = 2;
    p.require_disjoint = true;
    p.equal_size = true;
    SearchConfig c;
    c.seed = 17;
    const SearchResult r = find_disjoint_equal_cubes(p, c);
    REQUIRE(r.status == SearchStatus::Found);
    REQUIRE(r.min_disjoint_margin.has_value());
    CHECK(*r.min_disjoint_margin > 0.0);
    const int d = 2;
    const double edge0 = std::exp(r.shapes[0].coords[d]);
    const double edge1 = std::exp(r.shapes[1].coords[d]);
    CHECK(edge0 == doctest::Approx(edge1).epsilon(1e-14));
    CHECK(r.residual_inf < c.tol_residual);
    CHECK(verify_witness(r, p).verified);
}

TEST_CASE("search input validation") {
    SearchProblem p;
    p.family = Family::Cuboid;
    p.measures = quadratic_prefix(2, 3);
    SearchConfig c;

    p.n_shapes = 1;
    CHECK_THROWS_AS(find_indiscernible_tuple(p, c), InvalidInput);
    p.n_shapes = 2;

    p.measures.domain.kind = DomainKind::UnitCube;
    CHECK_THROWS_AS(find_indiscernible_tuple(p, c), InvalidInput);
    p.measures.domain.kind = DomainKind::FullSpace;

    p.measures.densities.clear();
    CHECK_THROWS_AS(find_indiscernible_tuple(p, c), InvalidInput);
}
