#include "discern/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "discern/errors.hpp"

namespace discern {

std::string to_string(Family f) {
    switch (f) {
        case Family::Cube: return "cube";
        case Family::Cuboid: return "cuboid";
        case Family::Orbit: return "orbit";
    }
    return "?";
}

std::string to_string(BodyKind k) {
    switch (k) {
        case BodyKind::Ball: return "ball";
        case BodyKind::Cube: return "cube";
        case BodyKind::CrossPolytope: return "cross-polytope";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "cube") return Family::Cube;
    if (s == "cuboid") return Family::Cuboid;
    if (s == "orbit") return Family::Orbit;
    throw InvalidInput("unknown shape family: " + s);
}

BodyKind body_from_string(const std::string& s) {
    if (s == "ball") return BodyKind::Ball;
    if (s == "cube") return BodyKind::Cube;
    if (s == "cross-polytope") return BodyKind::CrossPolytope;
    throw InvalidInput("unknown body kind: " + s);
}

double Cuboid::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
    return v;
}

double AxisTransform::det() const {
    double v = 1.0;
    for (double s : scale) v *= s;
    return v;
}

std::vector<double> AxisTransform::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim())
        throw InvalidInput("transform/point dimension mismatch");
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = scale[i] * x[i] + shift[i];
    return y;
}

AxisTransform identity_transform(int d) {
    return {std::vector<double>(d, 1.0), std::vector<double>(d, 0.0)};
}

AxisTransform compose(const AxisTransform& t1, const AxisTransform& t2) {
    if (t1.dim() != t2.dim()) throw InvalidInput("transform dimension mismatch in compose");
    AxisTransform r;
    r.scale.resize(t1.dim());
    r.shift.resize(t1.dim());
    // t1(t2(x)) = diag(s1 s2) x + (s1 b2 + b1)
    for (int i = 0; i < t1.dim(); ++i) {
        r.scale[i] = t1.scale[i] * t2.scale[i];
        r.shift[i] = t1.scale[i] * t2.shift[i] + t1.shift[i];
    }
    return r;
}

AxisTransform invert(const AxisTransform& t) {
    AxisTransform r;
    r.scale.resize(t.dim());
    r.shift.resize(t.dim());
    for (int i = 0; i < t.dim(); ++i) {
        r.scale[i] = 1.0 / t.scale[i];
        r.shift[i] = -t.shift[i] / t.scale[i];
    }
    return r;
}

OrbitShape apply_transform(const AxisTransform& t, const SymmetricBody& body) {
    if (t.dim() != body.dim) throw InvalidInput("transform/body dimension mismatch");
    return {body, t};
}

int ShapeParams::dim() const {
    const int n = static_cast<int>(coords.size());
    return family == Family::Cube ? n - 1 : n / 2;
}

void validate(const Cube& c) {
    if (c.anchor.empty()) throw InvalidInput("cube needs at least one dimension");
    if (!(c.edge > 0.0)) throw InvalidInput("cube edge must be positive");
}

void validate(const Cuboid& c) {
    if (c.lo.size() != c.hi.size() || c.lo.empty())
        throw InvalidInput("cuboid lo/hi must be nonempty and of equal length");
    for (size_t i = 0; i < c.lo.size(); ++i)
        if (!(c.lo[i] < c.hi[i])) throw InvalidInput("cuboid requires lo_i < hi_i");
}

void validate(const AxisTransform& t) {
    if (t.scale.size() != t.shift.size() || t.scale.empty())
        throw InvalidInput("transform scale/shift must be nonempty and of equal length");
    for (double s : t.scale)
        if (!(s > 0.0)) throw InvalidInput("transform scales must be positive");
}

void validate(const ShapeParams& p) {
    const int n = static_cast<int>(p.coords.size());
    if (p.family == Family::Cube) {
        if (n < 2) throw InvalidInput("cube params need d+1 coordinates");
    } else {
        if (n < 2 || n % 2 != 0)
            throw InvalidInput("cuboid/orbit params need 2d coordinates");
    }
}

Cuboid to_cuboid(const Cube& c) {
    validate(c);
    Cuboid r;
    r.lo = c.anchor;
    r.hi.resize(c.anchor.size());
    for (size_t i = 0; i < c.anchor.size(); ++i) r.hi[i] = c.anchor[i] + c.edge;
    return r;
}

Cuboid to_cuboid(const ShapeParams& p) {
    validate(p);
    const int d = p.dim();
    Cuboid r;
    r.lo.resize(d);
    r.hi.resize(d);
    if (p.family == Family::Cube) {
        const double edge = std::exp(p.coords[d]);
        for (int i = 0; i < d; ++i) {
            r.lo[i] = p.coords[i];
            r.hi[i] = p.coords[i] + edge;
        }
    } else if (p.family == Family::Cuboid) {
        for (int i = 0; i < d; ++i) {
            const double half = 0.5 * std::exp(p.coords[d + i]);
            r.lo[i] = p.coords[i] - half;
            r.hi[i] = p.coords[i] + half;
        }
    } else {
        throw InvalidInput("to_cuboid: orbit params do not describe a box");
    }
    return r;
}

Cube to_cube(const ShapeParams& p) {
    if (p.family != Family::Cube) throw InvalidInput("to_cube: params are not cube-family");
    validate(p);
    const int d = p.dim();
    Cube c;
    c.anchor.assign(p.coords.begin(), p.coords.begin() + d);
    c.edge = std::exp(p.coords[d]);
    return c;
}

OrbitShape to_orbit(const ShapeParams& p) {
    if (p.family != Family::Orbit) throw InvalidInput("to_orbit: params are not orbit-family");
    validate(p);
    const int d = p.dim();
    AxisTransform t;
    t.shift.assign(p.coords.begin(), p.coords.begin() + d);
    t.scale.resize(d);
    for (int i = 0; i < d; ++i) t.scale[i] = std::exp(p.coords[d + i]);
    return {{p.body, d}, t};
}

ShapeParams to_params(const Cuboid& c) {
    validate(c);
    ShapeParams p;
    p.family = Family::Cuboid;
    const int d = c.dim();
    p.coords.resize(2 * d);
    for (int i = 0; i < d; ++i) {
        p.coords[i] = 0.5 * (c.lo[i] + c.hi[i]);
        p.coords[d + i] = std::log(c.hi[i] - c.lo[i]);
    }
    return p;
}

ShapeParams to_params(const Cube& c) {
    validate(c);
    ShapeParams p;
    p.family = Family::Cube;
    p.coords = c.anchor;
    p.coords.push_back(std::log(c.edge));
    return p;
}

ShapeParams to_params(const OrbitShape& s) {
    validate(s.transform);
    ShapeParams p;
    p.family = Family::Orbit;
    p.body = s.body.kind;
    const int d = s.dim();
    p.coords.resize(2 * d);
    for (int i = 0; i < d; ++i) {
        p.coords[i] = s.transform.shift[i];
        p.coords[d + i] = std::log(s.transform.scale[i]);
    }
    return p;
}

double separation(const ShapeParams& a, const ShapeParams& b) {
    if (a.family != b.family || a.coords.size() != b.coords.size() ||
        (a.family == Family::Orbit && a.body != b.body))
        throw InvalidInput("separation: shapes must share family and dimension");
    double s = 0.0;
    for (size_t i = 0; i < a.coords.size(); ++i) {
        const double diff = a.coords[i] - b.coords[i];
        s += diff * diff;
    }
    return std::sqrt(s);
}

double disjoint_margin(const Cuboid& a, const Cuboid& b) {
    if (a.dim() != b.dim()) throw InvalidInput("disjoint_margin: dimension mismatch");
    double margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.dim(); ++i) {
        const double gap = std::max(b.lo[i] - a.hi[i], a.lo[i] - b.hi[i]);
        margin = std::max(margin, gap);
    }
    return margin;
}

}  // namespace discern
