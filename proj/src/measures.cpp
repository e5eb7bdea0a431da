#include "discern/measures.hpp"

#include <cmath>

#include "discern/errors.hpp"

namespace discern {
namespace {

double pow_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// (hi^{k+1} - lo^{k+1}) / (k+1), i.e. the 1-d integral of x^k over [lo, hi].
// Thin boxes use the factored form (hi - lo) * sum hi^a lo^b to avoid
// catastrophic cancellation.
double power_diff(double lo, double hi, int k) {
    if (k > kMaxExponent) throw InvalidInput("monomial exponent exceeds cap 8");
    if (k < 0) throw InvalidInput("monomial exponents must be nonnegative");
    const double width = hi - lo;
    const double mag = std::max(std::abs(hi), std::abs(lo));
    if (std::abs(width) < 1e-6 * mag) {
        double s = 0.0;
        for (int a = 0; a <= k; ++a) s += pow_int(hi, a) * pow_int(lo, k - a);
        return width * s / (k + 1);
    }
    return (pow_int(hi, k + 1) - pow_int(lo, k + 1)) / (k + 1);
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

void check_exps(std::span<const int> exps, int d) {
    if (static_cast<int>(exps.size()) != d)
        throw InvalidInput("exponent vector length does not match dimension");
    for (int k : exps) {
        if (k < 0) throw InvalidInput("monomial exponents must be nonnegative");
        if (k > kMaxExponent) throw InvalidInput("monomial exponent exceeds cap 8");
    }
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

double PolyDensity::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim)
        throw InvalidInput("density/point dimension mismatch");
    double v = 0.0;
    for (const auto& t : terms) {
        double m = t.coeff;
        for (int i = 0; i < dim; ++i) m *= pow_int(x[i], t.exps[i]);
        v += m;
    }
    return v;
}

PolyDensity constant_density(int d, double c) {
    PolyDensity f;
    f.dim = d;
    if (c != 0.0) f.terms.push_back({c, std::vector<int>(d, 0)});
    return f;
}

PolyDensity monomial_density(int d, std::vector<int> exps, double coeff) {
    PolyDensity f;
    f.dim = d;
    f.terms.push_back({coeff, std::move(exps)});
    validate(f);
    return f;
}

void validate(const PolyDensity& f) {
    if (f.dim < 1) throw InvalidInput("density dimension must be positive");
    for (const auto& t : f.terms) check_exps(t.exps, f.dim);
}

void validate(const MeasureFamily& fam) {
    if (fam.densities.empty()) throw InvalidInput("measure family must be nonempty");
    for (const auto& f : fam.densities) {
        validate(f);
        if (f.dim != fam.dim())
            throw InvalidInput("all densities in a family must share a dimension");
    }
    if (fam.domain.kind == DomainKind::PulledBack && !(fam.domain.steepness > 0.0))
        throw InvalidInput("pullback steepness must be positive");
}

int shape_dim(const Shape& s) {
    return std::visit([](const auto& v) { return v.dim(); }, s);
}

double monomial_box_moment(std::span<const int> exps, const Cuboid& c) {
    check_exps(exps, c.dim());
    double m = 1.0;
    for (int i = 0; i < c.dim(); ++i) m *= power_diff(c.lo[i], c.hi[i], exps[i]);
    return m;
}

double poly_box_moment(const PolyDensity& f, const Cuboid& c) {
    if (f.dim != c.dim()) throw InvalidInput("density/box dimension mismatch");
    double m = 0.0;
    for (const auto& t : f.terms) m += t.coeff * monomial_box_moment(t.exps, c);
    return m;
}

void poly_box_moment_grad(const PolyDensity& f, const Cuboid& c,
                          std::span<double> dlo, std::span<double> dhi) {
    const int d = c.dim();
    if (f.dim != d) throw InvalidInput("density/box dimension mismatch");
    if (static_cast<int>(dlo.size()) != d || static_cast<int>(dhi.size()) != d)
        throw InvalidInput("gradient buffers must have length d");
    for (int i = 0; i < d; ++i) dlo[i] = dhi[i] = 0.0;
    std::vector<double> factors(d);
    for (const auto& t : f.terms) {
        for (int i = 0; i < d; ++i) factors[i] = power_diff(c.lo[i], c.hi[i], t.exps[i]);
        for (int i = 0; i < d; ++i) {
            double rest = t.coeff;
            for (int j = 0; j < d; ++j)
                if (j != i) rest *= factors[j];
            dhi[i] += rest * pow_int(c.hi[i], t.exps[i]);
            dlo[i] -= rest * pow_int(c.lo[i], t.exps[i]);
        }
    }
}

double monomial_body_moment(BodyKind kind, std::span<const int> exps, int d) {
    check_exps(exps, d);
    for (int k : exps)
        if (k % 2 == 1) return 0.0;  // central symmetry
    int total = 0;
    for (int k : exps) total += k;
    switch (kind) {
        case BodyKind::Cube: {
            double m = 1.0;
            for (int k : exps) m *= 2.0 / (k + 1);
            return m;
        }
        case BodyKind::Ball: {
            // Product-of-gammas formula for monomials over the unit ball.
            double num = 2.0;
            for (int k : exps) num *= std::tgamma(0.5 * (k + 1));
            return num / ((total + d) * std::tgamma(0.5 * (total + d)));
        }
        case BodyKind::CrossPolytope: {
            // Dirichlet integral over the standard simplex, one per orthant.
            double num = pow_int(2.0, d);
            for (int k : exps) num *= factorial(k);
            return num / factorial(d + total);
        }
    }
    throw InvalidInput("unsupported body kind");
}

double orbit_moment(const PolyDensity& f, const OrbitShape& s) {
    const int d = s.dim();
    if (f.dim != d) throw InvalidInput("density/orbit dimension mismatch");
    validate(s.transform);
    const auto& scale = s.transform.scale;
    const auto& shift = s.transform.shift;
    const double det = s.transform.det();
    double total = 0.0;
    std::vector<int> j(d);
    for (const auto& t : f.terms) {
        // Expand prod (C_i x_i + b_i)^{k_i} over the multi-index lattice.
        std::fill(j.begin(), j.end(), 0);
        while (true) {
            double coeff = t.coeff;
            for (int i = 0; i < d; ++i)
                coeff *= binom(t.exps[i], j[i]) * pow_int(scale[i], j[i]) *
                         pow_int(shift[i], t.exps[i] - j[i]);
            if (coeff != 0.0)
                total += coeff * monomial_body_moment(s.body.kind, j, d);
            int axis = 0;
            while (axis < d && j[axis] == t.exps[axis]) j[axis++] = 0;
            if (axis == d) break;
            ++j[axis];
        }
    }
    return det * total;
}

double pulledback_box_measure(const PolyDensity& f, const Cuboid& c, double steepness) {
    if (f.dim != c.dim()) throw InvalidInput("density/box dimension mismatch");
    if (!(steepness > 0.0)) throw InvalidInput("pullback steepness must be positive");
    Cuboid image;
    image.lo.resize(c.dim());
    image.hi.resize(c.dim());
    auto sigma = [steepness](double x) { return 1.0 / (1.0 + std::exp(-steepness * x)); };
    for (int i = 0; i < c.dim(); ++i) {
        image.lo[i] = sigma(c.lo[i]);
        image.hi[i] = sigma(c.hi[i]);
    }
    return poly_box_moment(f, image);
}

PolyDensity axis_marginal(const PolyDensity& f, const Cuboid& c, int axis) {
    const int d = c.dim();
    if (f.dim != d) throw InvalidInput("density/box dimension mismatch");
    if (axis < 0 || axis >= d) throw InvalidInput("marginal axis out of range");
    PolyDensity g;
    g.dim = 1;
    for (const auto& t : f.terms) {
        double coeff = t.coeff;
        for (int i = 0; i < d; ++i)
            if (i != axis) coeff *= power_diff(c.lo[i], c.hi[i], t.exps[i]);
        g.terms.push_back({coeff, {t.exps[axis]}});
    }
    return g;
}

MomentVector measure_vector(const MeasureFamily& fam, const Shape& shape) {
    validate(fam);
    if (shape_dim(shape) != fam.dim())
        throw InvalidInput("shape/family dimension mismatch");

    if (std::holds_alternative<OrbitShape>(shape)) {
        if (fam.domain.kind != DomainKind::FullSpace)
            throw InvalidInput("orbit shapes are only supported on the full-space domain");
        const auto& orbit = std::get<OrbitShape>(shape);
        MomentVector m;
        m.reserve(fam.size());
        for (const auto& f : fam.densities) m.push_back(orbit_moment(f, orbit));
        return m;
    }

    const Cuboid box = std::holds_alternative<Cube>(shape)
                           ? to_cuboid(std::get<Cube>(shape))
                           : std::get<Cuboid>(shape);
    validate(box);
    if (fam.domain.kind == DomainKind::UnitCube) {
        for (int i = 0; i < box.dim(); ++i)
            if (box.lo[i] < -1e-12 || box.hi[i] > 1.0 + 1e-12)
                throw InvalidInput("box must lie inside the unit cube for this family");
    }

    MomentVector m;
    m.reserve(fam.size());
    for (const auto& f : fam.densities) {
        if (fam.domain.kind == DomainKind::PulledBack)
            m.push_back(pulledback_box_measure(f, box, fam.domain.steepness));
        else
            m.push_back(poly_box_moment(f, box));
    }
    return m;
}

double body_second_moment_ratio(const SymmetricBody& body) {
    std::vector<int> exps(body.dim, 0);
    const double vol = monomial_body_moment(body.kind, exps, body.dim);
    exps[0] = 2;
    return monomial_body_moment(body.kind, exps, body.dim) / vol;
}

}  // namespace discern
