#include "flatdbar/cli.hpp"

#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "flatdbar/cech.hpp"
#include "flatdbar/elliptic_kernel.hpp"
#include "flatdbar/io.hpp"
#include "flatdbar/torus_spectral.hpp"
#include "flatdbar/verify.hpp"

namespace flatdbar {

namespace {

void write_header(CsvWriter& csv, const RunConfig& cfg) {
    for (const auto& [k, v] : describe(cfg)) csv.comment(k, v);
}

std::optional<CVector> config_c(const RunConfig& cfg, const Lattice& lat) {
    if (cfg.c.empty()) return std::nullopt;
    if (static_cast<int>(cfg.c.size()) != lat.dim()) throw DimensionMismatch("--c has the wrong dimension for the lattice");
    VectorXcd v(lat.dim());
    for (int j = 0; j < lat.dim(); ++j) v(j) = cfg.c[static_cast<std::size_t>(j)];
    return reduce(v, lat);
}

std::pair<double, double> required_pq(const RunConfig& cfg) {
    if (!cfg.pq) throw ValidationError("this command needs --pq p,q");
    return *cfg.pq;
}

void metric_row(CsvWriter& csv, const std::string& name, double value) {
    csv.cell(name).cell(value);
    csv.end_row();
}

int lattice_check(const RunConfig& cfg, CsvWriter& csv) {
    const Lattice lat = parse_lattice_spec(cfg.lattice);
    write_header(csv, cfg);
    csv.header({"metric", "value"});
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    double key = 0.0, dual = 0.0;
    for (int t = 0; t < 100; ++t) {
        VectorXcd s(lat.rank());
        for (int k = 0; k < lat.rank(); ++k) s(k) = Complex(0.0, u(rng));
        key = std::max(key, key_identity_residual(lat, s));
        dual = std::max(dual, (c_map(lat, s) - c_map_dual(lat, s)).norm());
    }
    metric_row(csv, "d", lat.dim());
    metric_row(csv, "volume", lat.volume());
    metric_row(csv, "key_identity_residual", key);
    metric_row(csv, "dual_formula_residual", dual);
    metric_row(csv, "lambda_c_residual", (lambda_c_generators(lat) - Complex(0.0, kPi) * lat.dual()).norm());
    metric_row(csv, "first_nonzero_eigenvalue", smallest_nonzero_eigenvalue(lat, cfg.cutoff));
    if (lat.dim() == 1) metric_row(csv, "covering_radius", covering_radius(lat));
    if (const auto c = config_c(cfg, lat)) {
        for (int j = 0; j < lat.dim(); ++j) {
            metric_row(csv, "c_reduced_re_" + std::to_string(j + 1), c->c(j).real());
            metric_row(csv, "c_reduced_im_" + std::to_string(j + 1), c->c(j).imag());
        }
        const SpectralReport s = min_eigenvalue(*c, lat, cfg.cutoff);
        metric_row(csv, "dist", c->norm());
        metric_row(csv, "lambda_min", s.lambda_min);
        metric_row(csv, "k_rho", s.k_rho);
        metric_row(csv, "product", s.k_rho * c->norm());
    }
    return kExitOk;
}

int sweep(const RunConfig& cfg, CsvWriter& csv) {
    const Lattice lat = parse_lattice_spec(cfg.lattice);
    const std::vector<SweepRow> rows = sweep_pic0(lat, GridSpec{cfg.grid}, cfg.cutoff);
    write_header(csv, cfg);
    std::vector<std::string> cols;
    for (int j = 1; j <= lat.dim(); ++j) {
        cols.push_back("c_re_" + std::to_string(j));
        cols.push_back("c_im_" + std::to_string(j));
    }
    for (const char* c : {"dist", "lambda_min", "k_rho", "product"}) cols.emplace_back(c);
    csv.header(cols);
    for (const SweepRow& r : rows) {
        for (int j = 0; j < lat.dim(); ++j) csv.cell(r.c.c(j).real()).cell(r.c.c(j).imag());
        csv.cell(r.dist).cell(r.lambda_min).cell(r.k_rho).cell(r.product);
        csv.end_row();
    }
    return kExitOk;
}

int solve(const RunConfig& cfg, CsvWriter& csv, std::ostream& err) {
    const auto [p, q] = required_pq(cfg);
    const WeierstrassContext ctx(cfg.tau);
    const TwistData tw = make_twist(ctx, p, q);
    const int n = cfg.resolution();
    const CVector c = twist_c(ctx, tw);
    const VectorXcd frame = section_frame(ctx, c, n);
    const VectorXcd v = frame.cwiseProduct(random_smooth_periodic(n, 4, cfg.seed));
    VectorXcd u;
    if (cfg.solver == "kernel") {
        u = solve_dbar_kernel(ctx, tw, v, n);
    } else {
        const VectorXcd vt = v.cwiseQuotient(frame);
        u = frame.cwiseProduct(solve_dbar_fourier(vt, c, ctx.curve().lattice(), n));
    }
    const double residual = dbar_residual(ctx, tw, u, v, n);
    write_header(csv, cfg);
    csv.comment("residual", format_double(residual));
    write_grid_csv(csv, u, n);
    err << "residual " << format_double(residual) << '\n';
    return kExitOk;
}

int weierstrass(const RunConfig& cfg, CsvWriter& csv) {
    const WeierstrassContext ctx(cfg.tau);
    write_header(csv, cfg);
    csv.header({"quantity", "re", "im"});
    const auto row = [&](const std::string& name, Complex z) {
        csv.cell(name).cell(z.real()).cell(z.imag());
        csv.end_row();
    };
    for (int j = 1; j <= 3; ++j) row("omega_" + std::to_string(j), ctx.omega(j));
    for (int j = 1; j <= 3; ++j) row("eta_" + std::to_string(j), ctx.eta(j));
    row("eta_sum", ctx.eta(1) + ctx.eta(2) + ctx.eta(3));
    for (auto [a, b] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{3, 1}})
        row("legendre_" + std::to_string(a) + std::to_string(b),
            ctx.eta(a) * ctx.omega(b) - ctx.eta(b) * ctx.omega(a));
    for (Complex z : cfg.c) {
        row("sigma(" + format_double(z.real()) + "," + format_double(z.imag()) + ")", ctx.sigma(z));
        row("zeta(" + format_double(z.real()) + "," + format_double(z.imag()) + ")", ctx.zeta(z));
    }
    return kExitOk;
}

OpenCover config_cover(const RunConfig& cfg) {
    if (cfg.cover.empty()) return OpenCover::grid();
    if (cfg.cover.front() == '{') return cover_from_json(Json::parse(cfg.cover));
    std::ifstream in(cfg.cover);
    if (!in) throw ValidationError("cannot read cover file '" + cfg.cover + "'");
    return cover_from_json(Json::parse(in));
}

int cech(const RunConfig& cfg, CsvWriter& csv) {
    const auto [p, q] = required_pq(cfg);
    const WeierstrassContext ctx(cfg.tau);
    const TwistData tw = make_twist(ctx, p, q);
    OpenCover cover;
    try {
        cover = config_cover(cfg);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("cover JSON: ") + e.what());
    }
    const CechComplex cx(cover, ctx, tw, cfg.resolution());
    const PrimitiveSolver solver = cfg.solver == "kernel" ? PrimitiveSolver::Kernel : PrimitiveSolver::Fourier;
    const Cochain c0 = random_holomorphic_cochain(cx, cfg.seed);
    const Cochain c1 = delta0(c0, cx);
    const PatchedForm form = cocycle_to_form(c1, cx);
    const Cochain f = solve_primitive(c1, cx, solver);
    const UedaReport r = ueda_ratio(c1, cx, solver);
    double pou = 0.0;
    for (Eigen::Index L = 0; L < cx.pou(0).size(); ++L) {
        double s = 0.0;
        for (int j = 0; j < cx.pieces(); ++j) s += cx.pou(j)(L);
        pou = std::max(pou, std::abs(s - 1.0));
    }
    write_header(csv, cfg);
    csv.header({"metric", "value"});
    metric_row(csv, "pieces", cx.pieces());
    metric_row(csv, "pou_sum_error", pou);
    metric_row(csv, "transition_cocycle_defect", cx.transition_cocycle_defect());
    metric_row(csv, "cocycle_defect", cocycle_defect(c1, cx));
    metric_row(csv, "overlap_mismatch", form.overlap_mismatch);
    metric_row(csv, "delta_primitive_residual", sup_distance(delta0(f, cx), c1, cx));
    metric_row(csv, "recovery_error", sup_distance(f, c0, cx));
    metric_row(csv, "distance", r.distance);
    metric_row(csv, "ueda_ratio", r.ratio);
    metric_row(csv, "k_times_d", r.k_times_d);
    metric_row(csv, "c1", r.c1);
    metric_row(csv, "c2", r.c2);
    metric_row(csv, "bound", r.bound);
    return kExitOk;
}

int verify(const RunConfig& cfg, CsvWriter& csv, std::ostream& err) {
    const std::vector<SuiteResult> results = run_verify_suites(cfg.seed);
    write_header(csv, cfg);
    csv.header({"suite", "metric", "value", "tolerance", "relation", "pass"});
    bool all = true;
    for (const SuiteResult& r : results) {
        csv.cell(r.suite).cell(r.metric).cell(r.value).cell(r.tolerance);
        csv.cell(std::string(r.upper ? "<" : ">")).cell(std::string(r.pass ? "PASS" : "FAIL"));
        csv.end_row();
        all = all && r.pass;
        if (!r.pass) err << "FAIL " << r.suite << "/" << r.metric << " = " << format_double(r.value) << '\n';
    }
    return all ? kExitOk : kExitNumerical;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    std::ostringstream buffer;
    CsvWriter csv(buffer);
    int code = kExitOk;
    switch (cfg.command) {
        case Command::LatticeCheck: code = lattice_check(cfg, csv); break;
        case Command::Sweep: code = sweep(cfg, csv); break;
        case Command::Solve: code = solve(cfg, csv, err); break;
        case Command::Weierstrass: code = weierstrass(cfg, csv); break;
        case Command::Cech: code = cech(cfg, csv); break;
        case Command::Verify: code = verify(cfg, csv, err); break;
    }
    if (cfg.out.empty()) {
        out << buffer.str();
    } else {
        file.open(cfg.out, std::ios::binary);
        if (!file) throw ValidationError("cannot write output file '" + cfg.out + "'");
        file << buffer.str();
    }
    return code;
}

namespace {

std::string command_help(Command c) {
    switch (c) {
        case Command::LatticeCheck: return "lattice identities, first eigenvalue and K_rho at --c";
        case Command::Sweep: return "K_rho * dist over a grid of c in the fundamental domain";
        case Command::Solve: return "solve dbar u = v on an elliptic curve for a random smooth v";
        case Command::Weierstrass: return "half periods, eta constants, sigma and zeta at --c";
        case Command::Cech: return "Cech primitive round trip and Ueda ratio for one twist";
        case Command::Verify: return "run the built-in check suites and print PASS/FAIL rows";
    }
    return {};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flat line bundles on complex tori: spectra, dbar solvers and Cech primitives."};
    app.require_subcommand(0, 1);

    Settings flags;
    std::string config_path;
    const auto add_flag = [&](CLI::App* sub, const std::string& key, const std::string& help) {
        sub->add_option_function<std::string>("--" + key, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    for (Command c : {Command::LatticeCheck, Command::Sweep, Command::Solve, Command::Weierstrass, Command::Cech,
                      Command::Verify}) {
        CLI::App* sub = app.add_subcommand(command_name(c), command_help(c));
        sub->callback([&flags, c] { flags["command"] = command_name(c); });
        add_flag(sub, "lattice", "lattice preset, inline JSON or JSON file");
        add_flag(sub, "tau", "curve parameter re,im");
        add_flag(sub, "pq", "twist p,q in [0,1)^2");
        add_flag(sub, "c", "c-vector re1,im1,...");
        add_flag(sub, "n", "grid resolution N");
        add_flag(sub, "cutoff", "character cutoff");
        add_flag(sub, "grid", "sweep points per axis");
        add_flag(sub, "out", "output file (default stdout)");
        add_flag(sub, "seed", "seed for randomized data");
        add_flag(sub, "cover", "cover JSON (inline or file)");
        add_flag(sub, "solver", "kernel or fourier");
        sub->add_option("--config", config_path, "TOML or JSON config file");
    }
    app.add_option("--config", config_path, "TOML or JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        std::vector<Settings> layers;
        if (!config_path.empty()) layers.push_back(load_config_file(config_path));
        layers.push_back(flags);
        const bool have_command = flags.count("command") || (!layers.empty() && layers.front().count("command"));
        if (!have_command) {
            err << "error: a subcommand is required\n" << app.help();
            return kExitValidation;
        }
        const RunConfig cfg = build_config(layers);
        return execute(cfg, out, err);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace flatdbar
