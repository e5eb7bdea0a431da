#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "discern/measures.hpp"

namespace discern {

// Find n distinct shapes of one family with equal moment vectors under the
// given measures.
struct SearchProblem {
    Family family = Family::Cuboid;
    BodyKind body = BodyKind::Ball;  // orbit family only
    MeasureFamily measures;
    int n_shapes = 2;
    bool require_disjoint = false;
    bool equal_size = false;
};

struct SearchConfig {
    std::uint64_t seed = 0;
    int max_restarts = 200;
    double tol_residual = 1e-10;
    double min_separation = 1e-2;
    double start_mid_lo = -2.0, start_mid_hi = 2.0;    // anchors / midpoints / shifts
    double start_logw_lo = -1.0, start_logw_hi = 1.0;  // log-widths / log-edges / log-scales
    int max_iterations = 500;
};

enum class SearchStatus { Found, NotFound };

struct SearchResult {
    std::vector<ShapeParams> shapes;
    double residual_inf = 0.0;
    double min_pairwise_separation = 0.0;
    std::optional<double> min_disjoint_margin;
    int restarts_used = 0;
    SearchStatus status = SearchStatus::NotFound;
};

// Largest measure count for which a witness tuple is guaranteed to exist:
// d for cubes, 2d-1 for cuboids and dilation/translation orbits.
int guaranteed_measure_count(Family family, int d);
bool existence_guaranteed(const SearchProblem& p);

// Stacked moment differences mu_i(C_{j+1}) - mu_i(C_1); zero iff the tuple is
// indiscernible.
std::vector<double> residual_map(const SearchProblem& p,
                                 const std::vector<ShapeParams>& shapes);

SearchResult find_indiscernible_tuple(const SearchProblem& p, const SearchConfig& c);

// n equal-size cubes sharing one log-edge coordinate; moment residuals plus a
// soft overlap penalty, accepted only when exact disjointness holds.
SearchResult find_disjoint_equal_cubes(const SearchProblem& p, const SearchConfig& c);

struct WitnessCheck {
    bool verified = false;
    double oracle_residual = 0.0;
};

// Independent re-check: all moments recomputed by adaptive quadrature.
WitnessCheck verify_witness(const SearchResult& r, const SearchProblem& p,
                            double tol_residual = 1e-10, double min_separation = 1e-2);

Shape shape_from_params(const ShapeParams& p);

}  // namespace discern
