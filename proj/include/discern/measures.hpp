#pragma once

#include <span>
#include <variant>
#include <vector>

#include "discern/geometry.hpp"

namespace discern {

// Per-variable exponent cap; covers every certificate family with headroom.
inline constexpr int kMaxExponent = 8;

struct MonomialTerm {
    double coeff = 0.0;
    std::vector<int> exps;
};

// Signed polynomial density: sum of monomial terms in d variables.
struct PolyDensity {
    int dim = 1;
    std::vector<MonomialTerm> terms;

    double eval(std::span<const double> x) const;
};

PolyDensity constant_density(int d, double c);
PolyDensity monomial_density(int d, std::vector<int> exps, double coeff = 1.0);
void validate(const PolyDensity& f);

enum class DomainKind { FullSpace, UnitCube, PulledBack };

struct Domain {
    DomainKind kind = DomainKind::FullSpace;
    double steepness = 1.0;  // PulledBack only
};

struct MeasureFamily {
    std::vector<PolyDensity> densities;
    Domain domain;
    int dim() const { return densities.empty() ? 0 : densities.front().dim; }
    int size() const { return static_cast<int>(densities.size()); }
};

void validate(const MeasureFamily& fam);

using MomentVector = std::vector<double>;
using Shape = std::variant<Cuboid, Cube, OrbitShape>;

int shape_dim(const Shape& s);

// Exact integral of prod x_i^{k_i} over the box.
double monomial_box_moment(std::span<const int> exps, const Cuboid& c);
double poly_box_moment(const PolyDensity& f, const Cuboid& c);

// Gradient of poly_box_moment with respect to (lo, hi); dlo/dhi have length d.
void poly_box_moment_grad(const PolyDensity& f, const Cuboid& c,
                          std::span<double> dlo, std::span<double> dhi);

// Exact integral of prod x_i^{k_i} over the reference body (ball, [-1,1]^d
// cube, or cross-polytope). Zero whenever any exponent is odd.
double monomial_body_moment(BodyKind kind, std::span<const int> exps, int d);

// Exact integral of f over L(K): det(A) * integral of f(L(x)) over K,
// with f composed with L expanded binomially into body monomial moments.
double orbit_moment(const PolyDensity& f, const OrbitShape& s);

// Measure of the box under the pullback of (f dm on the unit cube) along the
// coordinatewise logistic map x -> 1/(1+exp(-s x)).
double pulledback_box_measure(const PolyDensity& f, const Cuboid& c, double steepness);

// Integrate out all variables except x_axis over the box; the result is a
// 1-d density on [lo_axis, hi_axis].
PolyDensity axis_marginal(const PolyDensity& f, const Cuboid& c, int axis);

MomentVector measure_vector(const MeasureFamily& fam, const Shape& shape);

// Normalized second moment of the reference body: int x_1^2 / int 1.
double body_second_moment_ratio(const SymmetricBody& body);

}  // namespace discern
