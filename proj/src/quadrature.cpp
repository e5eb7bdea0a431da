#include "discern/quadrature.hpp"

#include <cmath>

#include "discern/errors.hpp"

namespace discern::quadrature {
namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double& fm) {
    const double m = 0.5 * (a + b);
    fm = f(m);
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b,
             double fb, double m, double fm, double whole, double eps, int depth) {
    double fl, fr;
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    fl = f(lm);
    fr = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, fl, left, 0.5 * eps, depth - 1) +
           adapt(f, m, fm, b, fb, rm, fr, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b);
    double fm;
    const double whole = simpson(f, a, fa, b, fb, fm);
    const double eps = tol * (1.0 + std::abs(whole));
    return adapt(f, a, fa, b, fb, 0.5 * (a + b), fm, whole, eps, 40);
}

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     const Cuboid& box, double tol) {
    const int d = box.dim();
    std::vector<double> x(d);
    // Innermost axis varies fastest; each level integrates one coordinate.
    std::function<double(int)> level = [&](int axis) -> double {
        if (axis == d) return f(x);
        return integrate_1d(
            [&](double xi) {
                x[axis] = xi;
                return level(axis + 1);
            },
            box.lo[axis], box.hi[axis], axis == 0 ? tol : 0.1 * tol);
    };
    return level(0);
}

double box_moment(const PolyDensity& f, const Cuboid& c, double tol) {
    if (f.dim != c.dim()) throw InvalidInput("density/box dimension mismatch");
    return integrate_box([&](std::span<const double> x) { return f.eval(x); }, c, tol);
}

namespace {

double ball_integral(const std::function<double(std::span<const double>)>& g, int d,
                     double tol) {
    constexpr double kPi = 3.14159265358979323846;
    if (d == 1) {
        Cuboid seg{{-1.0}, {1.0}};
        return integrate_box(g, seg, tol);
    }
    if (d == 2) {
        // Polar coordinates: smooth integrand, no boundary singularity.
        Cuboid dom{{0.0, 0.0}, {1.0, 2.0 * kPi}};
        return integrate_box(
            [&](std::span<const double> u) {
                const double r = u[0], phi = u[1];
                const double x[2] = {r * std::cos(phi), r * std::sin(phi)};
                return g(std::span<const double>(x, 2)) * r;
            },
            dom, tol);
    }
    if (d == 3) {
        Cuboid dom{{0.0, 0.0, 0.0}, {1.0, kPi, 2.0 * kPi}};
        return integrate_box(
            [&](std::span<const double> u) {
                const double r = u[0], th = u[1], phi = u[2];
                const double x[3] = {r * std::sin(th) * std::cos(phi),
                                     r * std::sin(th) * std::sin(phi),
                                     r * std::cos(th)};
                return g(std::span<const double>(x, 3)) * r * r * std::sin(th);
            },
            dom, tol);
    }
    throw InvalidInput("ball quadrature supports d <= 3");
}

double cross_polytope_integral(const std::function<double(std::span<const double>)>& g,
                               int d, double tol) {
    // Duffy map of the unit box onto the standard simplex, one per orthant.
    Cuboid unit{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
    std::vector<double> y(d);
    double total = 0.0;
    for (int signs = 0; signs < (1 << d); ++signs) {
        total += integrate_box(
            [&](std::span<const double> u) {
                double remaining = 1.0, jac = 1.0;
                for (int i = 0; i < d; ++i) {
                    jac *= remaining;  // dy_i/du_i = prod_{j<i} (1 - u_j)
                    y[i] = u[i] * remaining;
                    if ((signs >> i) & 1) y[i] = -y[i];
                    remaining *= 1.0 - u[i];
                }
                return g(y) * jac;
            },
            unit, tol);
    }
    return total;
}

}  // namespace

double orbit_moment(const PolyDensity& f, const OrbitShape& s, double tol) {
    const int d = s.dim();
    if (f.dim != d) throw InvalidInput("density/orbit dimension mismatch");
    validate(s.transform);
    std::vector<double> z(d);
    auto composed = [&](std::span<const double> x) {
        for (int i = 0; i < d; ++i)
            z[i] = s.transform.scale[i] * x[i] + s.transform.shift[i];
        return f.eval(z);
    };
    double body = 0.0;
    switch (s.body.kind) {
        case BodyKind::Ball:
            body = ball_integral(composed, d, tol);
            break;
        case BodyKind::Cube: {
            Cuboid ref{std::vector<double>(d, -1.0), std::vector<double>(d, 1.0)};
            body = integrate_box(composed, ref, tol);
            break;
        }
        case BodyKind::CrossPolytope:
            body = cross_polytope_integral(composed, d, tol);
            break;
    }
    return s.transform.det() * body;
}

double shape_moment(const PolyDensity& f, const Shape& shape, const Domain& domain,
                    double tol) {
    if (std::holds_alternative<OrbitShape>(shape)) {
        if (domain.kind != DomainKind::FullSpace)
            throw InvalidInput("orbit shapes are only supported on the full-space domain");
        return orbit_moment(f, std::get<OrbitShape>(shape), tol);
    }
    Cuboid box = std::holds_alternative<Cube>(shape) ? to_cuboid(std::get<Cube>(shape))
                                                     : std::get<Cuboid>(shape);
    if (domain.kind == DomainKind::UnitCube) {
        for (int i = 0; i < box.dim(); ++i)
            if (box.lo[i] < -1e-12 || box.hi[i] > 1.0 + 1e-12)
                throw InvalidInput("box must lie inside the unit cube for this family");
    }
    if (domain.kind == DomainKind::PulledBack) {
        auto sigma = [&](double x) { return 1.0 / (1.0 + std::exp(-domain.steepness * x)); };
        for (int i = 0; i < box.dim(); ++i) {
            box.lo[i] = sigma(box.lo[i]);
            box.hi[i] = sigma(box.hi[i]);
        }
    }
    return box_moment(f, box, tol);
}

}  // namespace discern::quadrature
