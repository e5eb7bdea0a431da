#include "discern/search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "discern/errors.hpp"
#include "discern/levenberg.hpp"
#include "discern/quadrature.hpp"
#include "discern/rng.hpp"

namespace discern {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int params_per_shape(Family family, int d) {
    return family == Family::Cube ? d + 1 : 2 * d;
}

void validate_problem(const SearchProblem& p) {
    validate(p.measures);
    if (p.n_shapes < 2) throw InvalidInput("search needs at least two shapes");
    if (p.measures.domain.kind == DomainKind::UnitCube)
        throw InvalidInput(
            "search does not support the unit-cube domain; use full-space or pulled-back");
    if (p.family == Family::Orbit && p.measures.domain.kind != DomainKind::FullSpace)
        throw InvalidInput("orbit searches require the full-space domain");
}

double shape_moment(const MeasureFamily& fam, const PolyDensity& f, const ShapeParams& p) {
    if (p.family == Family::Orbit) return orbit_moment(f, to_orbit(p));
    const Cuboid box = to_cuboid(p);
    if (fam.domain.kind == DomainKind::PulledBack)
        return pulledback_box_measure(f, box, fam.domain.steepness);
    return poly_box_moment(f, box);
}

ShapeParams unpack_one(const SearchProblem& p, const Eigen::VectorXd& x, int shape_idx,
                       int per_shape) {
    ShapeParams sp;
    sp.family = p.family;
    sp.body = p.body;
    sp.coords.assign(x.data() + shape_idx * per_shape,
                     x.data() + (shape_idx + 1) * per_shape);
    return sp;
}

double min_pairwise_separation(const std::vector<ShapeParams>& shapes) {
    double m = kInf;
    for (size_t i = 0; i < shapes.size(); ++i)
        for (size_t j = i + 1; j < shapes.size(); ++j)
            m = std::min(m, separation(shapes[i], shapes[j]));
    return m;
}

double min_margin(const std::vector<ShapeParams>& shapes) {
    double m = kInf;
    for (size_t i = 0; i < shapes.size(); ++i)
        for (size_t j = i + 1; j < shapes.size(); ++j)
            m = std::min(m, disjoint_margin(to_cuboid(shapes[i]), to_cuboid(shapes[j])));
    return m;
}

double moment_residual_inf(const SearchProblem& p, const std::vector<ShapeParams>& shapes) {
    double m = 0.0;
    for (double v : residual_map(p, shapes)) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

int guaranteed_measure_count(Family family, int d) {
    return family == Family::Cube ? d : 2 * d - 1;
}

bool existence_guaranteed(const SearchProblem& p) {
    const int d = p.measures.dim();
    if (p.equal_size && p.require_disjoint)
        return p.family == Family::Cube && p.measures.size() <= d - 1;
    return p.measures.size() <= guaranteed_measure_count(p.family, d);
}

std::vector<double> residual_map(const SearchProblem& p,
                                 const std::vector<ShapeParams>& shapes) {
    validate_problem(p);
    if (static_cast<int>(shapes.size()) != p.n_shapes)
        throw InvalidInput("shape count does not match the problem");
    const int k = p.measures.size();
    std::vector<double> base(k);
    for (int i = 0; i < k; ++i)
        base[i] = shape_moment(p.measures, p.measures.densities[i], shapes[0]);
    std::vector<double> r;
    r.reserve(k * (p.n_shapes - 1));
    for (int j = 1; j < p.n_shapes; ++j)
        for (int i = 0; i < k; ++i)
            r.push_back(shape_moment(p.measures, p.measures.densities[i], shapes[j]) - base[i]);
    return r;
}

SearchResult find_indiscernible_tuple(const SearchProblem& p, const SearchConfig& c) {
    validate_problem(p);
    const int d = p.measures.dim();
    const int per_shape = params_per_shape(p.family, d);
    const int n = p.n_shapes;
    const int n_mid = d;  // anchors, midpoints, or shifts come first

    auto residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        std::vector<ShapeParams> shapes(n);
        for (int j = 0; j < n; ++j) shapes[j] = unpack_one(p, x, j, per_shape);
        const std::vector<double> rv = residual_map(p, shapes);
        return Eigen::Map<const Eigen::VectorXd>(rv.data(), rv.size());
    };

    LMOptions opts;
    opts.tol_residual = c.tol_residual;
    opts.max_iterations = c.max_iterations;

    SearchResult best;
    best.status = SearchStatus::NotFound;
    best.residual_inf = kInf;
    best.restarts_used = c.max_restarts;

    for (int restart = 0; restart < c.max_restarts; ++restart) {
        auto rng = make_rng(mix_seed(c.seed, restart));
        Eigen::VectorXd x(n * per_shape);
        for (int j = 0; j < n; ++j)
            for (int q = 0; q < per_shape; ++q)
                x[j * per_shape + q] = q < n_mid
                                           ? uniform(rng, c.start_mid_lo, c.start_mid_hi)
                                           : uniform(rng, c.start_logw_lo, c.start_logw_hi);
        const LMOutcome out = levenberg_least_squares(residual, nullptr, x, opts);
        std::vector<ShapeParams> shapes(n);
        for (int j = 0; j < n; ++j) shapes[j] = unpack_one(p, out.x, j, per_shape);
        const double sep = min_pairwise_separation(shapes);
        if (out.converged && sep >= c.min_separation) {
            SearchResult r;
            r.shapes = std::move(shapes);
            r.residual_inf = out.residual_inf;
            r.min_pairwise_separation = sep;
            r.restarts_used = restart + 1;
            r.status = SearchStatus::Found;
            if (p.require_disjoint) r.min_disjoint_margin = min_margin(r.shapes);
            return r;
        }
        // Near-diagonal zeros are discarded; keep the best off-diagonal attempt.
        if (sep >= c.min_separation && out.residual_inf < best.residual_inf) {
            best.shapes = std::move(shapes);
            best.residual_inf = out.residual_inf;
            best.min_pairwise_separation = sep;
        }
    }
    return best;
}

SearchResult find_disjoint_equal_cubes(const SearchProblem& p, const SearchConfig& c) {
    validate_problem(p);
    if (p.family != Family::Cube || !p.equal_size)
        throw InvalidInput("disjoint search runs on equal-size cubes");
    const int d = p.measures.dim();
    if (d < 2) throw InvalidInput("disjoint equal-size cubes require d >= 2");
    const int n = p.n_shapes;
    const int k = p.measures.size();
    const int n_pairs = n * (n - 1) / 2;

    auto shapes_from = [&](const Eigen::VectorXd& x) {
        std::vector<ShapeParams> shapes(n);
        const double log_edge = x[n * d];
        for (int j = 0; j < n; ++j) {
            shapes[j].family = Family::Cube;
            shapes[j].coords.assign(x.data() + j * d, x.data() + (j + 1) * d);
            shapes[j].coords.push_back(log_edge);
        }
        return shapes;
    };

    auto residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const auto shapes = shapes_from(x);
        const std::vector<double> rv = residual_map(p, shapes);
        const double edge = std::exp(x[n * d]);
        const double wanted_gap = 0.05 * edge;
        Eigen::VectorXd r(k * (n - 1) + n_pairs);
        for (size_t i = 0; i < rv.size(); ++i) r[i] = rv[i];
        int idx = static_cast<int>(rv.size());
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double margin =
                    disjoint_margin(to_cuboid(shapes[i]), to_cuboid(shapes[j]));
                r[idx++] = std::max(0.0, wanted_gap - margin);
            }
        return r;
    };

    LMOptions opts;
    opts.tol_residual = c.tol_residual;
    opts.max_iterations = c.max_iterations;

    SearchResult best;
    best.status = SearchStatus::NotFound;
    best.residual_inf = kInf;
    best.restarts_used = c.max_restarts;

    for (int restart = 0; restart < c.max_restarts; ++restart) {
        auto rng = make_rng(mix_seed(c.seed, restart));
        Eigen::VectorXd x(n * d + 1);
        for (int j = 0; j < n * d; ++j) x[j] = uniform(rng, c.start_mid_lo, c.start_mid_hi);
        x[n * d] = uniform(rng, c.start_logw_lo, c.start_logw_hi);
        const LMOutcome out = levenberg_least_squares(residual, nullptr, x, opts);
        if (!out.converged) continue;
        const auto shapes = shapes_from(out.x);
        const double margin = min_margin(shapes);
        const double sep = min_pairwise_separation(shapes);
        const double pure = moment_residual_inf(p, shapes);
        if (margin > 0.0 && sep >= c.min_separation && pure < c.tol_residual) {
            SearchResult r;
            r.shapes = shapes;
            r.residual_inf = pure;
            r.min_pairwise_separation = sep;
            r.min_disjoint_margin = margin;
            r.restarts_used = restart + 1;
            r.status = SearchStatus::Found;
            return r;
        }
        if (pure < best.residual_inf) {
            best.shapes = shapes;
            best.residual_inf = pure;
            best.min_pairwise_separation = sep;
            best.min_disjoint_margin = margin;
        }
    }
    return best;
}

Shape shape_from_params(const ShapeParams& p) {
    if (p.family == Family::Orbit) return to_orbit(p);
    if (p.family == Family::Cube) return to_cube(p);
    return to_cuboid(p);
}

WitnessCheck verify_witness(const SearchResult& r, const SearchProblem& p,
                            double tol_residual, double min_separation) {
    if (r.status != SearchStatus::Found)
        throw InvalidInput("verify_witness expects a found result");
    validate_problem(p);
    const int k = p.measures.size();
    const int n = static_cast<int>(r.shapes.size());
    std::vector<std::vector<double>> moments(n, std::vector<double>(k));
    for (int j = 0; j < n; ++j) {
        const Shape s = shape_from_params(r.shapes[j]);
        for (int i = 0; i < k; ++i)
            moments[j][i] = quadrature::shape_moment(p.measures.densities[i], s,
                                                     p.measures.domain, 1e-12);
    }
    WitnessCheck chk;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < k; ++i)
            chk.oracle_residual =
                std::max(chk.oracle_residual, std::abs(moments[j][i] - moments[0][i]));
    bool structural = min_pairwise_separation(r.shapes) >= min_separation;
    if (r.min_disjoint_margin.has_value())
        structural = structural && min_margin(r.shapes) > 0.0;
    chk.verified = structural && chk.oracle_residual < 10.0 * tol_residual;
    return chk;
}

}  // namespace discern
