#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace discern {

enum class Family { Cube, Cuboid, Orbit };
enum class BodyKind { Ball, Cube, CrossPolytope };

std::string to_string(Family f);
std::string to_string(BodyKind k);
Family family_from_string(const std::string& s);
BodyKind body_from_string(const std::string& s);

// Axis-aligned cube, stored by its lowest-coordinate vertex and edge length.
struct Cube {
    std::vector<double> anchor;
    double edge = 1.0;
    int dim() const { return static_cast<int>(anchor.size()); }
};

// Nondegenerate axis-aligned box [lo, hi], lo_i < hi_i.
struct Cuboid {
    std::vector<double> lo;
    std::vector<double> hi;
    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const;
};

// x -> diag(scale) * x + shift, scale_i > 0.
struct AxisTransform {
    std::vector<double> scale;
    std::vector<double> shift;
    int dim() const { return static_cast<int>(scale.size()); }
    double det() const;
    std::vector<double> apply(std::span<const double> x) const;
};

AxisTransform identity_transform(int d);
AxisTransform compose(const AxisTransform& t1, const AxisTransform& t2);
AxisTransform invert(const AxisTransform& t);

// Reference bodies are centered at the origin: ball = {|x| <= 1},
// cube = [-1,1]^d, cross-polytope = {sum |x_i| <= 1}.
struct SymmetricBody {
    BodyKind kind = BodyKind::Ball;
    int dim = 1;
};

struct OrbitShape {
    SymmetricBody body;
    AxisTransform transform;
    int dim() const { return body.dim; }
};

OrbitShape apply_transform(const AxisTransform& t, const SymmetricBody& body);

// Unconstrained search coordinates.
//   cube:   d anchor coordinates + log(edge)            (length d+1)
//   cuboid: d midpoints + d log-widths                  (length 2d)
//   orbit:  d shifts    + d log-scales                  (length 2d)
struct ShapeParams {
    Family family = Family::Cuboid;
    BodyKind body = BodyKind::Ball;  // only meaningful for Family::Orbit
    std::vector<double> coords;
    int dim() const;
};

void validate(const Cube& c);
void validate(const Cuboid& c);
void validate(const AxisTransform& t);
void validate(const ShapeParams& p);

Cuboid to_cuboid(const Cube& c);
Cuboid to_cuboid(const ShapeParams& p);  // cube or cuboid family only
Cube to_cube(const ShapeParams& p);
OrbitShape to_orbit(const ShapeParams& p);

ShapeParams to_params(const Cuboid& c);
ShapeParams to_params(const Cube& c);
ShapeParams to_params(const OrbitShape& s);

// Euclidean distance between parameter vectors; 0 iff identical shape.
double separation(const ShapeParams& a, const ShapeParams& b);

// Largest per-axis gap between two boxes: positive iff the closures are
// disjoint, negative iff the interiors overlap.
double disjoint_margin(const Cuboid& a, const Cuboid& b);

}  // namespace discern
