#include "discern/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>

#include "discern/errors.hpp"
#include "discern/json_io.hpp"
#include "discern/rng.hpp"

namespace discern {
namespace {

using io::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNotFound = 3;
constexpr int kExitReconstruction = 4;

void write_output(const std::string& payload, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << payload;
        if (!payload.empty() && payload.back() != '\n') out << "\n";
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open output file: " + path);
    f << payload;
}

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidInput(std::string("malformed JSON in ") + what);
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open input file: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_json(text, path.c_str());
}

int cmd_certify(CertificateKind kind, int d, int pairs, std::uint64_t seed,
                const std::string& out_path, const std::string& format, std::ostream& out) {
    const bool csv = format == "csv";
    const DiscernibilityReport rep = verify_injectivity_sampling(kind, d, pairs, seed, csv);
    write_output(csv ? io::certify_report_to_csv(rep) : io::certify_report_to_json(rep).dump(2),
                 out_path, out);
    return kExitOk;
}

int cmd_reconstruct(CertificateKind kind, int d, const std::string& moments_text,
                    BodyKind body, std::uint64_t seed, double tol,
                    const std::string& out_path, std::ostream& out) {
    const json mj = parse_json(moments_text, "--moments");
    if (!mj.is_array()) throw InvalidInput("--moments must be a JSON array");
    MomentVector m = mj.get<MomentVector>();
    ReconstructionResult r;
    switch (kind) {
        case CertificateKind::CuboidQuadratic:
            r = reconstruct_cuboid_quadratic(m, d);
            break;
        case CertificateKind::CuboidCubic:
            r = reconstruct_cuboid_cubic(m, d);
            break;
        case CertificateKind::CubeSequential: {
            CubeReconConfig cfg;
            cfg.seed = seed;
            cfg.tol = tol;
            r = reconstruct_cube_numeric(m, d, cfg);
            break;
        }
        case CertificateKind::SymmetricOrbit:
            r = reconstruct_orbit_quadratic(m, SymmetricBody{body, d});
            break;
        case CertificateKind::IntervalPair:
            throw InvalidInput("the interval-pair family has no reconstruction; use certify");
    }
    write_output(io::reconstruction_to_json(r).dump(2), out_path, out);
    return r.status == ReconStatus::Ambiguous ? kExitReconstruction : kExitOk;
}

int cmd_search(const std::string& input_path, std::optional<std::uint64_t> seed,
               std::optional<int> restarts, std::optional<double> tol,
               const std::string& out_path, std::ostream& out) {
    const json j = load_json_file(input_path);
    if (!j.contains("problem")) throw InvalidInput("missing field: problem");
    const SearchProblem p = io::problem_from_json(j.at("problem"));
    SearchConfig c = io::search_config_from_json(j.value("config", json::object()));
    if (seed) c.seed = *seed;
    if (restarts) c.max_restarts = *restarts;
    if (tol) c.tol_residual = *tol;

    const SearchResult r = p.require_disjoint && p.equal_size
                               ? find_disjoint_equal_cubes(p, c)
                               : find_indiscernible_tuple(p, c);
    json rep = io::search_result_to_json(r, c.seed);
    rep["existence_guaranteed"] = existence_guaranteed(p);
    bool verified = false;
    if (r.status == SearchStatus::Found) {
        const WitnessCheck chk = verify_witness(r, p, c.tol_residual, c.min_separation);
        rep["verified"] = chk.verified;
        rep["oracle_residual"] = chk.oracle_residual;
        verified = chk.verified;
    }
    write_output(rep.dump(2), out_path, out);
    if (r.status != SearchStatus::Found) return kExitNotFound;
    return verified ? kExitOk : 1;
}

int cmd_lemma(const std::string& alpha_text, const std::string& support_text, double m1,
              double m2, const std::string& out_path, std::ostream& out) {
    const PolyDensity alpha = io::density_from_json(parse_json(alpha_text, "--alpha"));
    const json sj = parse_json(support_text, "--support");
    if (!sj.is_array() || sj.size() != 2) throw InvalidInput("--support must be [lo, hi]");
    const LemmaSolution sol =
        solve_lemma_moment(alpha, sj[0].get<double>(), sj[1].get<double>(), m1, m2);
    json rep{{"schema", io::kSchemaVersion}, {"a", sol.slope}, {"b", sol.intercept}};
    write_output(rep.dump(2), out_path, out);
    return kExitOk;
}

int cmd_report(int d, int n, std::uint64_t seed, int restarts, double tol,
               const std::string& out_path, const std::string& format, std::ostream& out) {
    const MeasureFamily full = family_densities(CertificateKind::CuboidQuadratic, d);
    std::vector<io::BatchRow> rows;
    for (int k = 1; k <= 2 * d; ++k) {
        SearchProblem p;
        p.family = Family::Cuboid;
        p.measures.densities.assign(full.densities.begin(), full.densities.begin() + k);
        p.measures.domain = full.domain;
        p.n_shapes = n;
        SearchConfig c;
        c.seed = mix_seed(seed, k);
        c.max_restarts = restarts;
        c.tol_residual = tol;
        const SearchResult r = find_indiscernible_tuple(p, c);
        rows.push_back({k, d, r.status == SearchStatus::Found ? "found" : "not-found",
                        r.restarts_used, r.residual_inf});
    }
    write_output(format == "json" ? io::batch_to_json(rows, seed).dump(2)
                                  : io::batch_to_csv(rows),
                 out_path, out);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"measure-discernibility toolkit: certificates, reconstructions, and "
                 "indiscernible-tuple searches for axis-aligned shape families"};
    app.require_subcommand(1);

    std::string kind_str, format = "json", out_path, moments_text, input_path;
    std::string alpha_text, support_text, body_str = "ball";
    int d = 1, pairs = 10000, n = 2, restarts = 200;
    std::uint64_t seed = 7;
    double tol = 1e-10, m1 = 0.0, m2 = 0.0;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> restarts_override;
    std::optional<double> tol_override;

    auto* certify = app.add_subcommand("certify", "sample distinct shape pairs, report moment gaps");
    certify->add_option("--kind", kind_str)->required();
    certify->add_option("--d", d)->required();
    certify->add_option("--pairs", pairs);
    certify->add_option("--seed", seed);
    certify->add_option("--out", out_path);
    certify->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* reconstruct = app.add_subcommand("reconstruct", "invert a moment vector to its shape");
    reconstruct->add_option("--kind", kind_str)->required();
    reconstruct->add_option("--d", d)->required();
    reconstruct->add_option("--moments", moments_text)->required();
    reconstruct->add_option("--body", body_str);
    reconstruct->add_option("--seed", seed);
    reconstruct->add_option("--tol", tol);
    reconstruct->add_option("--out", out_path);

    auto* search = app.add_subcommand("search", "find an indiscernible tuple of shapes");
    search->add_option("--input", input_path)->required();
    search->add_option("--seed", seed_override);
    search->add_option("--restarts", restarts_override);
    search->add_option("--tol", tol_override);
    search->add_option("--out", out_path);

    auto* lemma = app.add_subcommand("lemma", "recover the increasing linear function from two moments");
    lemma->add_option("--alpha", alpha_text)->required();
    lemma->add_option("--support", support_text)->required();
    lemma->add_option("--m1", m1)->required();
    lemma->add_option("--m2", m2)->required();
    lemma->add_option("--out", out_path);

    auto* report = app.add_subcommand("report", "sweep the measure count and chart found/not-found");
    report->add_option("--d", d);
    report->add_option("--n", n);
    report->add_option("--seed", seed);
    report->add_option("--restarts", restarts);
    report->add_option("--tol", tol);
    report->add_option("--out", out_path);
    report->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }

    try {
        if (certify->parsed())
            return cmd_certify(certificate_from_string(kind_str), d, pairs, seed, out_path,
                               format, out);
        if (reconstruct->parsed())
            return cmd_reconstruct(certificate_from_string(kind_str), d, moments_text,
                                   body_from_string(body_str), seed, tol, out_path, out);
        if (search->parsed())
            return cmd_search(input_path, seed_override, restarts_override, tol_override,
                              out_path, out);
        if (lemma->parsed()) return cmd_lemma(alpha_text, support_text, m1, m2, out_path, out);
        if (report->parsed())
            return cmd_report(d, n, seed, restarts, tol, out_path, format, out);
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const InfeasibleMoments& e) {
        err << "reconstruction error: " << e.what() << "\n";
        return kExitReconstruction;
    } catch (const ReconstructionFailed& e) {
        err << "reconstruction failed: " << e.what()
            << " (best residual " << io::format_double(e.best_residual) << ")\n";
        return kExitReconstruction;
    }
    err << "error: no subcommand given\n";
    return kExitInvalidInput;
}

}  // namespace discern
