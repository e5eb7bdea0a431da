#include "discern/certificates.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "discern/errors.hpp"
#include "discern/levenberg.hpp"
#include "discern/rng.hpp"

namespace discern {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Moment vector of a box under the family's densities, ignoring the domain
// restriction (reconstruction targets may sit anywhere in R^d).
MomentVector raw_box_moments(const MeasureFamily& fam, const Cuboid& box) {
    MomentVector m;
    m.reserve(fam.size());
    for (const auto& f : fam.densities) m.push_back(poly_box_moment(f, box));
    return m;
}

double inf_norm_diff(const MomentVector& a, const MomentVector& b) {
    double r = 0.0;
    for (size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

void check_moment_length(const MomentVector& m, int expected) {
    if (static_cast<int>(m.size()) != expected)
        throw InvalidInput("moment vector has wrong length for this family");
}

}  // namespace

std::string to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::IntervalPair: return "interval-pair";
        case CertificateKind::CubeSequential: return "cube-sequential";
        case CertificateKind::CuboidCubic: return "cuboid-cubic";
        case CertificateKind::CuboidQuadratic: return "cuboid-quadratic";
        case CertificateKind::SymmetricOrbit: return "symmetric-orbit";
    }
    return "?";
}

CertificateKind certificate_from_string(const std::string& s) {
    if (s == "interval-pair") return CertificateKind::IntervalPair;
    if (s == "cube-sequential") return CertificateKind::CubeSequential;
    if (s == "cuboid-cubic") return CertificateKind::CuboidCubic;
    if (s == "cuboid-quadratic") return CertificateKind::CuboidQuadratic;
    if (s == "symmetric-orbit") return CertificateKind::SymmetricOrbit;
    throw InvalidInput("unknown certificate kind: " + s);
}

std::string to_string(ReconStatus s) {
    switch (s) {
        case ReconStatus::Exact: return "exact";
        case ReconStatus::Numeric: return "numeric";
        case ReconStatus::Ambiguous: return "ambiguous";
    }
    return "?";
}

MeasureFamily family_densities(CertificateKind kind, int d) {
    if (d < 1) throw InvalidInput("dimension must be positive");
    MeasureFamily fam;
    switch (kind) {
        case CertificateKind::IntervalPair: {
            if (d != 1) throw InvalidInput("interval-pair certificate requires d = 1");
            PolyDensity one_minus_x{1, {{1.0, {0}}, {-1.0, {1}}}};
            fam.densities = {one_minus_x, monomial_density(1, {1})};
            fam.domain.kind = DomainKind::UnitCube;
            break;
        }
        case CertificateKind::CubeSequential: {
            // phi_1 = x_1...x_d, phi_{j+1} = (1 - x_j) x_{j+1}...x_d.
            std::vector<int> all_ones(d, 1);
            fam.densities.push_back(monomial_density(d, all_ones));
            for (int j = 0; j < d; ++j) {
                std::vector<int> tail(d, 0);
                for (int i = j + 1; i < d; ++i) tail[i] = 1;
                std::vector<int> with_j = tail;
                with_j[j] = 1;
                fam.densities.push_back({d, {{1.0, tail}, {-1.0, with_j}}});
            }
            fam.domain.kind = DomainKind::UnitCube;
            break;
        }
        case CertificateKind::CuboidCubic:
        case CertificateKind::CuboidQuadratic:
        case CertificateKind::SymmetricOrbit: {
            const int power = kind == CertificateKind::CuboidCubic ? 3 : 2;
            fam.densities.push_back(constant_density(d, 1.0));
            for (int j = 0; j < d; ++j) {
                std::vector<int> e(d, 0);
                e[j] = 1;
                fam.densities.push_back(monomial_density(d, e));
            }
            for (int j = 0; j + 1 < d; ++j) {
                std::vector<int> e(d, 0);
                e[j] = power;
                fam.densities.push_back(monomial_density(d, e));
            }
            fam.domain.kind = kind == CertificateKind::CuboidCubic
                                  ? DomainKind::UnitCube
                                  : DomainKind::FullSpace;
            break;
        }
    }
    return fam;
}

ReconstructionResult reconstruct_cuboid_quadratic(const MomentVector& m, int d) {
    check_moment_length(m, 2 * d);
    const double vol = m[0];
    if (!(vol > 0.0)) throw InfeasibleMoments("invalid volume: m_0 must be positive");
    Cuboid box;
    box.lo.resize(d);
    box.hi.resize(d);
    std::vector<double> mid(d), width(d);
    for (int j = 0; j < d; ++j) mid[j] = m[1 + j] / vol;
    double prod = 1.0;
    for (int j = 0; j + 1 < d; ++j) {
        const double variance = m[d + 1 + j] / vol - mid[j] * mid[j];
        if (!(variance > 0.0))
            throw InfeasibleMoments("infeasible moments: nonpositive variance on axis " +
                                    std::to_string(j + 1));
        width[j] = std::sqrt(12.0 * variance);
        prod *= width[j];
    }
    width[d - 1] = vol / prod;
    for (int j = 0; j < d; ++j) {
        box.lo[j] = mid[j] - 0.5 * width[j];
        box.hi[j] = mid[j] + 0.5 * width[j];
    }
    ReconstructionResult r;
    r.status = ReconStatus::Exact;
    r.residual =
        inf_norm_diff(raw_box_moments(family_densities(CertificateKind::CuboidQuadratic, d), box), m);
    r.shape = box;
    return r;
}

ReconstructionResult reconstruct_cuboid_cubic(const MomentVector& m, int d) {
    check_moment_length(m, 2 * d);
    const double vol = m[0];
    if (!(vol > 0.0)) throw InfeasibleMoments("invalid volume: m_0 must be positive");
    std::vector<double> s(d);
    double s_scale = 1.0;
    for (int j = 0; j < d; ++j) {
        s[j] = 2.0 * m[1 + j] / vol;  // a_j + b_j
        s_scale = std::max(s_scale, std::abs(s[j]));
    }
    for (int j = 0; j + 1 < d; ++j) {
        if (std::abs(s[j]) < 1e-9 * s_scale) {
            // The derivation divides by a_j + b_j; at zero the cubic moment
            // carries no information about the width on this axis.
            ReconstructionResult r;
            r.status = ReconStatus::Ambiguous;
            r.residual = kInf;
            return r;
        }
    }
    std::vector<double> width(d);
    double prod = 1.0;
    for (int j = 0; j + 1 < d; ++j) {
        const double q = 4.0 * m[d + 1 + j] / (vol * s[j]);  // a_j^2 + b_j^2
        const double disc = 2.0 * q - s[j] * s[j];           // (b_j - a_j)^2
        if (!(disc > 0.0))
            throw InfeasibleMoments("infeasible moments: negative discriminant on axis " +
                                    std::to_string(j + 1));
        width[j] = std::sqrt(disc);
        prod *= width[j];
    }
    width[d - 1] = vol / prod;
    Cuboid box;
    box.lo.resize(d);
    box.hi.resize(d);
    for (int j = 0; j < d; ++j) {
        box.lo[j] = 0.5 * (s[j] - width[j]);
        box.hi[j] = 0.5 * (s[j] + width[j]);
    }
    ReconstructionResult r;
    r.status = ReconStatus::Exact;
    r.residual =
        inf_norm_diff(raw_box_moments(family_densities(CertificateKind::CuboidCubic, d), box), m);
    r.shape = box;
    return r;
}

ReconstructionResult reconstruct_cube_numeric(const MomentVector& m, int d,
                                              const CubeReconConfig& config) {
    check_moment_length(m, d + 1);
    const MeasureFamily fam = family_densities(CertificateKind::CubeSequential, d);
    const int k = fam.size();

    auto cube_from = [d](const Eigen::VectorXd& p) {
        Cube c;
        c.anchor.assign(p.data(), p.data() + d);
        c.edge = std::exp(p[d]);
        return c;
    };
    auto residual = [&](const Eigen::VectorXd& p) {
        const MomentVector mv = raw_box_moments(fam, to_cuboid(cube_from(p)));
        Eigen::VectorXd r(k);
        for (int i = 0; i < k; ++i) r[i] = mv[i] - m[i];
        return r;
    };
    auto jacobian = [&](const Eigen::VectorXd& p) {
        const Cube c = cube_from(p);
        const Cuboid box = to_cuboid(c);
        Eigen::MatrixXd J(k, d + 1);
        std::vector<double> dlo(d), dhi(d);
        for (int i = 0; i < k; ++i) {
            poly_box_moment_grad(fam.densities[i], box, dlo, dhi);
            double dedge = 0.0;
            for (int j = 0; j < d; ++j) {
                J(i, j) = dlo[j] + dhi[j];
                dedge += dhi[j];
            }
            J(i, d) = c.edge * dedge;  // chain rule through log-edge
        }
        return J;
    };

    LMOptions opts;
    opts.tol_residual = config.tol;
    opts.max_iterations = config.max_iterations;

    // The densities telescope to 1, so the total mass is the cube volume; with
    // the edge known the moments back out the centers axis by axis. This exact
    // inversion, clamped into the open unit cube, seeds the first start.
    auto informed_start = [&]() -> std::optional<Eigen::VectorXd> {
        double mass = 0.0;
        for (double v : m) mass += v;
        if (!(mass > 0.0)) return std::nullopt;
        const double edge =
            std::clamp(std::pow(mass, 1.0 / d), 1e-3, 0.999);
        Eigen::VectorXd p(d + 1);
        double tail = 1.0;  // prod of centers on axes after j
        for (int j = d - 1; j >= 0; --j) {
            const double denom = std::pow(edge, d) * tail;
            const double center =
                std::clamp(1.0 - m[j + 1] / std::max(denom, 1e-12), 0.01, 0.99);
            p[j] = std::clamp(center - 0.5 * edge, 1e-3, 1.0 - edge - 1e-3);
            tail *= center;
        }
        p[d] = std::log(edge);
        return p;
    };

    const std::optional<Eigen::VectorXd> seeded = informed_start();
    double best_residual = kInf;
    bool best_outside = false;
    for (int start = 0; start < config.multistarts; ++start) {
        Eigen::VectorXd p(d + 1);
        if (start == 0 && seeded) {
            p = *seeded;
        } else {
            auto rng = make_rng(mix_seed(config.seed, start));
            const double edge = uniform(rng, 0.05, 0.9);
            for (int j = 0; j < d; ++j) p[j] = uniform(rng, 0.01, 0.99 - edge);
            p[d] = std::log(edge);
        }
        const LMOutcome out = levenberg_least_squares(residual, jacobian, p, opts);
        best_residual = std::min(best_residual, out.residual_inf);
        if (!out.converged) continue;
        const Cube cube = cube_from(out.x);
        bool inside = true;
        for (int j = 0; j < d; ++j)
            inside = inside && cube.anchor[j] > 1e-6 && cube.anchor[j] + cube.edge < 1.0 - 1e-6;
        if (!inside) {
            best_outside = true;
            continue;
        }
        ReconstructionResult r;
        r.status = ReconStatus::Numeric;
        r.residual = out.residual_inf;
        r.shape = cube;
        return r;
    }
    throw ReconstructionFailed(best_outside && best_residual < config.tol
                                   ? "reconstructed cube lies outside the open unit cube"
                                   : "cube reconstruction failed: no start converged",
                               best_residual);
}

ReconstructionResult reconstruct_orbit_quadratic(const MomentVector& m,
                                                 const SymmetricBody& body) {
    const int d = body.dim;
    check_moment_length(m, 2 * d);
    const double vol = m[0];
    if (!(vol > 0.0)) throw InfeasibleMoments("invalid volume: m_0 must be positive");
    const double kappa = body_second_moment_ratio(body);
    const double ref_vol =
        monomial_body_moment(body.kind, std::vector<int>(d, 0), d);
    AxisTransform t;
    t.scale.resize(d);
    t.shift.resize(d);
    double prod = 1.0;
    for (int j = 0; j < d; ++j) t.shift[j] = m[1 + j] / vol;
    for (int j = 0; j + 1 < d; ++j) {
        const double variance = m[d + 1 + j] / vol - t.shift[j] * t.shift[j];
        if (!(variance > 0.0))
            throw InfeasibleMoments("infeasible moments: nonpositive variance on axis " +
                                    std::to_string(j + 1));
        t.scale[j] = std::sqrt(variance / kappa);
        prod *= t.scale[j];
    }
    t.scale[d - 1] = vol / (ref_vol * prod);
    ReconstructionResult r;
    r.status = ReconStatus::Exact;
    const MeasureFamily fam = family_densities(CertificateKind::SymmetricOrbit, d);
    MomentVector mv;
    for (const auto& f : fam.densities) mv.push_back(orbit_moment(f, {body, t}));
    r.residual = inf_norm_diff(mv, m);
    r.shape = t;
    return r;
}

namespace {

ShapeParams sample_certificate_shape(CertificateKind kind, int d, std::mt19937_64& rng) {
    ShapeParams p;
    switch (kind) {
        case CertificateKind::CubeSequential: {
            Cube c;
            c.edge = uniform(rng, 0.05, 0.7);
            c.anchor.resize(d);
            for (int j = 0; j < d; ++j) c.anchor[j] = uniform(rng, 0.01, 0.98 - c.edge);
            return to_params(c);
        }
        case CertificateKind::IntervalPair:
        case CertificateKind::CuboidCubic: {
            Cuboid box;
            box.lo.resize(d);
            box.hi.resize(d);
            for (int j = 0; j < d; ++j) {
                box.lo[j] = uniform(rng, 0.01, 0.9);
                box.hi[j] = box.lo[j] + uniform(rng, 0.02, 0.98 - box.lo[j]);
            }
            return to_params(box);
        }
        case CertificateKind::CuboidQuadratic: {
            p.family = Family::Cuboid;
            p.coords.resize(2 * d);
            for (int j = 0; j < d; ++j) {
                p.coords[j] = uniform(rng, -2.0, 2.0);
                p.coords[d + j] = uniform(rng, -1.0, 1.0);
            }
            return p;
        }
        case CertificateKind::SymmetricOrbit: {
            p.family = Family::Orbit;
            p.body = BodyKind::Ball;
            p.coords.resize(2 * d);
            for (int j = 0; j < d; ++j) {
                p.coords[j] = uniform(rng, -2.0, 2.0);
                p.coords[d + j] = uniform(rng, -1.0, 1.0);
            }
            return p;
        }
    }
    throw InvalidInput("unknown certificate kind");
}

Shape shape_of(const ShapeParams& p) {
    if (p.family == Family::Orbit) return to_orbit(p);
    if (p.family == Family::Cube) return to_cube(p);
    return to_cuboid(p);
}

}  // namespace

DiscernibilityReport verify_injectivity_sampling(CertificateKind kind, int d,
                                                 int n_pairs, std::uint64_t seed,
                                                 bool keep_samples) {
    if (n_pairs < 1) throw InvalidInput("n_pairs must be at least 1");
    const MeasureFamily fam = family_densities(kind, d);
    DiscernibilityReport rep;
    rep.kind = kind;
    rep.d = d;
    rep.pairs_tested = n_pairs;
    rep.seed = seed;
    rep.min_gap = kInf;
    rep.min_gap_over_separation = kInf;
    if (keep_samples) rep.samples.reserve(n_pairs);
    for (int i = 0; i < n_pairs; ++i) {
        auto rng = make_rng(mix_seed(seed, i));
        const ShapeParams a = sample_certificate_shape(kind, d, rng);
        ShapeParams b = sample_certificate_shape(kind, d, rng);
        while (separation(a, b) < 1e-3) b = sample_certificate_shape(kind, d, rng);
        const double sep = separation(a, b);
        const double gap =
            inf_norm_diff(measure_vector(fam, shape_of(a)), measure_vector(fam, shape_of(b)));
        if (gap < rep.min_gap) {
            rep.min_gap = gap;
            rep.worst_pair = {a, b};
        }
        rep.min_gap_over_separation = std::min(rep.min_gap_over_separation, gap / sep);
        if (keep_samples) rep.samples.emplace_back(sep, gap);
    }
    return rep;
}

RankReport jacobian_rank(CertificateKind kind, int d, const ShapeParams& shape,
                         std::optional<Domain> domain_override) {
    validate(shape);
    const MeasureFamily fam = family_densities(kind, d);
    const Domain domain = domain_override.value_or(fam.domain);
    if (shape.dim() != d) throw InvalidInput("shape/certificate dimension mismatch");
    const int n_params = static_cast<int>(shape.coords.size());
    const int k = fam.size();

    if (domain.kind == DomainKind::UnitCube) {
        if (shape.family == Family::Orbit)
            throw InvalidInput("orbit shapes are only supported on the full-space domain");
        const Cuboid box = to_cuboid(shape);
        for (int j = 0; j < d; ++j)
            if (box.lo[j] < 1e-5 || box.hi[j] > 1.0 - 1e-5)
                throw InvalidInput("shape lies on the domain boundary");
    }

    auto moments = [&](const std::vector<double>& coords) {
        ShapeParams p = shape;
        p.coords = coords;
        Eigen::VectorXd mv(k);
        for (int i = 0; i < k; ++i) {
            const auto& f = fam.densities[i];
            if (p.family == Family::Orbit)
                mv[i] = orbit_moment(f, to_orbit(p));
            else if (domain.kind == DomainKind::PulledBack)
                mv[i] = pulledback_box_measure(f, to_cuboid(p), domain.steepness);
            else
                mv[i] = poly_box_moment(f, to_cuboid(p));
        }
        return mv;
    };

    Eigen::MatrixXd J(k, n_params);
    std::vector<double> coords = shape.coords;
    for (int j = 0; j < n_params; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(shape.coords[j]));
        coords[j] = shape.coords[j] + h;
        const Eigen::VectorXd plus = moments(coords);
        coords[j] = shape.coords[j] - h;
        const Eigen::VectorXd minus = moments(coords);
        coords[j] = shape.coords[j];
        J.col(j) = (plus - minus) / (2.0 * h);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    RankReport rep;
    rep.singular_values.assign(svd.singularValues().data(),
                               svd.singularValues().data() + svd.singularValues().size());
    const double smax = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
    const double smin = rep.singular_values.empty() ? 0.0 : rep.singular_values.back();
    rep.full_rank = k >= n_params && smin > 1e-8 * std::max(1.0, smax);
    return rep;
}

LemmaSolution solve_lemma_moment(const PolyDensity& alpha, double support_lo,
                                 double support_hi, double m1, double m2) {
    validate(alpha);
    if (alpha.dim != 1) throw InvalidInput("lemma density must be one-dimensional");
    if (!(support_lo < support_hi)) throw InvalidInput("empty support interval");
    const double center = 0.5 * (support_lo + support_hi);
    const Cuboid support{{support_lo}, {support_hi}};

    // Evenness about the center: odd coefficients of alpha(x + center) vanish.
    int degree = 0;
    for (const auto& t : alpha.terms) degree = std::max(degree, t.exps[0]);
    std::vector<double> shifted(degree + 1, 0.0), shifted_abs(degree + 1, 0.0);
    for (const auto& t : alpha.terms) {
        const int n = t.exps[0];
        double b = 1.0;
        for (int i = 0; i <= n; ++i) {
            const double c = t.coeff * b * std::pow(center, n - i);
            shifted[i] += c;
            shifted_abs[i] += std::abs(c);
            b = b * (n - i) / (i + 1);
        }
    }
    for (int i = 1; i <= degree; i += 2)
        if (std::abs(shifted[i]) > 1e-12 * std::max(1.0, shifted_abs[i]))
            throw InvalidInput("density is not even about the support center");

    // Nonnegativity on the support, checked on a fine grid.
    double max_abs = 0.0, min_val = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = support_lo + (support_hi - support_lo) * i / 1000.0;
        const double v = alpha.eval(std::span<const double>(&x, 1));
        max_abs = std::max(max_abs, std::abs(v));
        min_val = std::min(min_val, v);
    }
    if (min_val < -1e-12 * std::max(1.0, max_abs))
        throw InvalidInput("density is negative somewhere on its support");

    const double mass = poly_box_moment(alpha, support);
    if (!(mass > 0.0)) throw InvalidInput("density must have positive total mass");

    // Second central moment.
    double second = 0.0;
    {
        PolyDensity g{1, {}};
        for (const auto& t : alpha.terms) {
            g.terms.push_back({t.coeff, {t.exps[0] + 2}});
            g.terms.push_back({-2.0 * center * t.coeff, {t.exps[0] + 1}});
            g.terms.push_back({center * center * t.coeff, {t.exps[0]}});
        }
        second = poly_box_moment(g, support);
    }
    if (!(second > 0.0)) throw InvalidInput("density has no spread about its center");

    const double value_at_center = m1 / mass;  // a*center + b
    const double disc = m2 - value_at_center * value_at_center * mass;
    if (!(disc > 0.0))
        throw InfeasibleMoments("no increasing solution: second moment forces a <= 0");
    LemmaSolution sol;
    sol.slope = std::sqrt(disc / second);
    sol.intercept = value_at_center - sol.slope * center;
    return sol;
}

}  // namespace discern
