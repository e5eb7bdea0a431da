#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "discern/measures.hpp"

namespace discern {

// The explicit distinguishing density families and their inversions.
enum class CertificateKind {
    IntervalPair,      // d = 1: [1-x, x] on (0,1)
    CubeSequential,    // d+1 densities on (0,1)^d, telescoping products
    CuboidCubic,       // [1, x_1..x_d, x_1^3..x_{d-1}^3], unit cube by default
    CuboidQuadratic,   // [1, x_1..x_d, x_1^2..x_{d-1}^2], full space
    SymmetricOrbit,    // quadratic family applied to dilation/translation orbits
};

std::string to_string(CertificateKind k);
CertificateKind certificate_from_string(const std::string& s);

MeasureFamily family_densities(CertificateKind kind, int d);

enum class ReconStatus { Exact, Numeric, Ambiguous };
std::string to_string(ReconStatus s);

struct ReconstructionResult {
    std::optional<std::variant<Cuboid, Cube, AxisTransform>> shape;
    double residual = 0.0;  // max moment mismatch after re-evaluation
    ReconStatus status = ReconStatus::Exact;
};

// Unique box with the given moments under the quadratic family.
ReconstructionResult reconstruct_cuboid_quadratic(const MomentVector& m, int d);

// Inversion of the cubic-family derivation; ambiguous when some a_j + b_j
// is numerically zero (the division the derivation needs is impossible).
ReconstructionResult reconstruct_cuboid_cubic(const MomentVector& m, int d);

struct CubeReconConfig {
    std::uint64_t seed = 2024;
    int multistarts = 32;
    double tol = 1e-10;
    int max_iterations = 200;
};

// Seeded multistart Gauss-Newton inversion of the cube-sequential moment map;
// the target cube must lie in the open unit cube.
ReconstructionResult reconstruct_cube_numeric(const MomentVector& m, int d,
                                              const CubeReconConfig& config = {});

// Quadratic-family inversion on a G_DT orbit; the box constant 1/12 is
// replaced by the body's normalized second moment.
ReconstructionResult reconstruct_orbit_quadratic(const MomentVector& m,
                                                 const SymmetricBody& body);

struct DiscernibilityReport {
    CertificateKind kind;
    int d = 1;
    int pairs_tested = 0;
    double min_gap = 0.0;
    double min_gap_over_separation = 0.0;
    std::pair<ShapeParams, ShapeParams> worst_pair;
    std::uint64_t seed = 0;
    // (separation, gap) per sampled pair, for plotting.
    std::vector<std::pair<double, double>> samples;
};

DiscernibilityReport verify_injectivity_sampling(CertificateKind kind, int d,
                                                 int n_pairs, std::uint64_t seed,
                                                 bool keep_samples = true);

struct RankReport {
    std::vector<double> singular_values;  // nonincreasing
    bool full_rank = false;
};

// Local injectivity audit: central-difference Jacobian of the moment map in
// ShapeParams coordinates. An explicit domain overrides the kind's default.
RankReport jacobian_rank(CertificateKind kind, int d, const ShapeParams& shape,
                         std::optional<Domain> domain_override = std::nullopt);

struct LemmaSolution {
    double slope = 0.0;      // a > 0
    double intercept = 0.0;  // b
};

// Unique increasing u(x) = a x + b with given first and second alpha-moments,
// for alpha even and nonnegative on the symmetric interval [support_lo, support_hi].
LemmaSolution solve_lemma_moment(const PolyDensity& alpha, double support_lo,
                                 double support_hi, double m1, double m2);

}  // namespace discern
