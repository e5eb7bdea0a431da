#pragma once

#include <functional>

#include "discern/measures.hpp"

namespace discern::quadrature {

// Adaptive Simpson on [a, b]; tolerance is absolute.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-12);

// Tensor-adaptive integral over a box.
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     const Cuboid& box, double tol = 1e-11);

// Quadrature route to the same quantities the closed-form engine computes.
// Box moments integrate the polynomial directly; orbit moments use a smooth
// per-body parametrization (polar/spherical for the ball, Duffy-mapped
// orthant simplices for the cross-polytope).
double box_moment(const PolyDensity& f, const Cuboid& c, double tol = 1e-11);
double orbit_moment(const PolyDensity& f, const OrbitShape& s, double tol = 1e-11);
double shape_moment(const PolyDensity& f, const Shape& shape, const Domain& domain,
                    double tol = 1e-11);

}  // namespace discern::quadrature
