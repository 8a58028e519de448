// Full-size acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <path to flatdbar binary>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "flatdbar/cech.hpp"
#include "flatdbar/elliptic_kernel.hpp"
#include "flatdbar/io.hpp"
#include "flatdbar/torus_spectral.hpp"

using namespace flatdbar;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// Uniform complex generators; draws above max_condition are counted and skipped.
Lattice random_lattice(std::mt19937_64& rng, int d, double max_condition = Lattice::kMaxCondition,
                       int* skipped = nullptr) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        MatrixXcd g(d, 2 * d);
        for (int r = 0; r < d; ++r)
            for (int k = 0; k < 2 * d; ++k) g(r, k) = Complex(u(rng), u(rng));
        try {
            Lattice lat(g);
            if (lat.condition_number() <= max_condition) return lat;
            if (skipped) ++*skipped;
        } catch (const SingularLattice&) {
        }
    }
}

CVector random_c(std::mt19937_64& rng, const Lattice& lat) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    VectorXcd v(lat.dim());
    for (int j = 0; j < lat.dim(); ++j) v(j) = Complex(u(rng), u(rng));
    return reduce(v, lat);
}

Outcome lattice_core() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> s(-2.0 * kPi, 2.0 * kPi);
    double key = 0.0, dual = 0.0, lc = 0.0;
    int skipped = 0;
    for (int t = 0; t < 1000; ++t) {
        // The residual floor is about eps * cond * |s|, so 1e-12 needs cond <= 1e3.
        const Lattice lat = random_lattice(rng, 1 + t % 3, 1e3, &skipped);
        VectorXcd v(lat.rank());
        for (int k = 0; k < lat.rank(); ++k) v(k) = Complex(0.0, s(rng));
        key = std::max(key, key_identity_residual(lat, v));
        dual = std::max(dual, (c_map(lat, v) - c_map_dual(lat, v)).norm());
        lc = std::max(lc, (lambda_c_generators(lat) - Complex(0.0, kPi) * lat.dual()).norm());
    }
    return {key < 1e-12 && dual < 1e-12 && lc < 1e-12,
            "key " + fmt(key) + ", dual " + fmt(dual) + ", lambda_c " + fmt(lc) + " (tol 1e-12), " +
                std::to_string(skipped) + " draws with cond > 1e3 skipped"};
}

Outcome weierstrass() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.5, 2.0), z(-2.0, 2.0);
    double sum = 0.0, leg = 0.0, quasi = 0.0;
    const Complex target(0.0, kPi / 2.0);
    for (int t = 0; t < 20; ++t) {
        const WeierstrassContext ctx(Complex(re(rng), im(rng)));
        sum = std::max(sum, std::abs(ctx.eta(1) + ctx.eta(2) + ctx.eta(3)));
        leg = std::max(leg, std::abs(ctx.eta(1) * ctx.omega(3) - ctx.eta(3) * ctx.omega(1) - target));
        leg = std::max(leg, std::abs(ctx.eta(3) * ctx.omega(2) - ctx.eta(2) * ctx.omega(3) - target));
        leg = std::max(leg, std::abs(ctx.eta(2) * ctx.omega(1) - ctx.eta(1) * ctx.omega(2) - target));
        for (int s = 0; s < 50; ++s) {
            const Complex p(z(rng), z(rng));
            for (int j = 1; j <= 3; ++j) {
                const Complex w = ctx.omega(j);
                const Complex expect = -std::exp(2.0 * ctx.eta(j) * (p + w)) * ctx.sigma(p);
                quasi = std::max(quasi, std::abs(ctx.sigma(p + 2.0 * w) / expect - 1.0));
            }
        }
    }
    return {sum < 1e-10 && leg < 1e-10 && quasi < 1e-8,
            "eta sum " + fmt(sum) + ", Legendre " + fmt(leg) + " (tol 1e-10), quasi-period " + fmt(quasi) +
                " (tol 1e-8)"};
}

Outcome torus_exactness() {
    const Lattice lat = lattice_preset("square");
    double worst = 0.0;
    int rows = 0;
    for (const SweepRow& r : sweep_pic0(lat, GridSpec{50})) {
        if (r.trivial) continue;
        worst = std::max(worst, std::abs(r.product - 1.0));
        ++rows;
    }
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    double slope_err = 0.0;
    std::vector<double> radii;
    for (int k = 0; k < 20; ++k) radii.push_back(0.005 * std::pow(1.25, k));
    for (int ray = 0; ray < 3; ++ray) {
        VectorXcd dir(1);
        dir(0) = std::polar(1.0, ang(rng));
        slope_err = std::max(slope_err, std::abs(loglog_slope(sweep_ray(lat, dir, radii)) + 1.0));
    }
    return {rows == 2500 && worst < 1e-12 && slope_err < 0.01,
            std::to_string(rows) + " rows, max |K d - 1| " + fmt(worst) + ", slope error " + fmt(slope_err)};
}

Outcome oracle() {
    const Lattice lat = lattice_preset("square");
    Eigen::Matrix2d basis = lat.lambda_c_real();
    const auto poly = voronoi_polygon<double>(basis);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const auto& v = poly[static_cast<std::size_t>(k) % poly.size()];
        const double s = 0.08 + 0.09 * k;
        VectorXcd c(1);
        c(0) = s * Complex(v(0), v(1)) + Complex(0.01 * k, -0.02 * k);
        const CVector cv = reduce(c, lat);
        const double exact = min_eigenvalue(cv, lat).lambda_min;
        worst = std::max(worst, std::abs(fd_laplacian_lambda_min(cv, lat, 64) / exact - 1.0));
    }
    return {worst < 0.02, "max relative FD error " + fmt(worst) + " at N = 64 (tol 2e-2)"};
}

Outcome operator_algebra() {
    MatrixXcd g(2, 4);
    g << 1.0, Complex(0.2, 0.1), Complex(0.3, 1.1), Complex(0.0, 0.2), Complex(0.1, 0.0), 1.0,
        Complex(-0.1, 0.3), Complex(0.2, 0.9);
    const Lattice lat(g);
    std::mt19937_64 rng(505);
    double dd = 0.0, adj = 0.0;
    for (int t = 0; t < 100; ++t) {
        const CVector c = random_c(rng, lat);
        const int p = t % 3;
        const int q = (t / 3) % 2;
        const FormGrid u = random_band_limited(2, p, q, 8, 2, false, rng());
        const FormGrid du = apply_dbar_rho(u, c, lat);
        if (q + 2 <= 2) dd = std::max(dd, norm(apply_dbar_rho(du, c, lat), lat) / norm(u, lat));
        const FormGrid v = random_band_limited(2, p, q + 1, 8, 2, false, rng());
        const Complex lhs = inner(du, v, lat);
        adj = std::max(adj, std::abs(lhs - inner(u, apply_dbar_rho_star(v, c, lat), lat)) / std::max(1.0, std::abs(lhs)));
    }
    return {dd < 1e-10 && adj < 1e-10, "dbar^2 " + fmt(dd) + ", adjointness " + fmt(adj) + " (tol 1e-10)"};
}

// Random direction with C_X = sqrt(lambda_1 / (4 d)) / 2: the q = 0 right-hand
// side is then 3 lambda_1 / 8 > 0, so the inequality is not vacuous.
CVector gap_test_c(std::mt19937_64& rng, const Lattice& lat) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorXcd v(lat.dim());
    for (int j = 0; j < lat.dim(); ++j) v(j) = Complex(u(rng), u(rng));
    const double target = 0.5 * std::sqrt(smallest_nonzero_eigenvalue(lat) / (4.0 * lat.dim()));
    return reduce(v * (target / v.cwiseAbs().sum()), lat);
}

Outcome gap_inequality() {
    std::mt19937_64 rng(606);
    double slack = 1e300, cross = 0.0, rhs = 1e300;
    bool vacuous = false;
    for (int d = 1; d <= 2; ++d) {
        const Lattice lat = random_lattice(rng, d, 1e3);
        const CVector c = gap_test_c(rng, lat);
        for (auto [p, q] : {std::pair{0, 0}, std::pair{1, 0}}) {
            const GapReport r = verify_gap_inequality(c, lat, p, q, 100, rng());
            slack = std::min({slack, r.worst_slack, r.worst_slack_strong});
            rhs = std::min(rhs, 0.5 * (r.lambda_pq - 4.0 * r.r2 * r.c_x * r.c_x));
            vacuous = vacuous || r.vacuous;
        }
        const CrossTermReport ct = verify_cross_term(c, lat, 20, rng());
        cross = std::max({cross, ct.function_residual, ct.form_residual});
    }
    return {!vacuous && slack >= -1e-10 && cross < 1e-9,
            "min slack " + fmt(slack) + " (tol -1e-10), min right-hand side " + fmt(rhs) + ", cross terms " +
                fmt(cross) + " (tol 1e-9)"};
}

Outcome holomorphic_forms() {
    std::mt19937_64 rng(707);
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) {
        const Lattice lat = random_lattice(rng, d);
        const CVector c = random_c(rng, lat);
        const double root = std::sqrt(min_eigenvalue(c, lat).lambda_min);
        for (int p = 1; p <= d; ++p) worst = std::max(worst, std::abs(p0_kernel_gap(c, lat, p) / root - 1.0));
    }
    return {worst < 0.02, "max |gap / sqrt(lambda_min) - 1| " + fmt(worst) + " (tol 2e-2)"};
}

Outcome kernel_solver() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const Complex taus[] = {Complex(0, 1), Complex(0.3, 0.8)};
    const int n = 128;
    double res = 0.0, uniq = 0.0, young_slack = 1e300, thm_slack = 1e300;
    for (Complex tau : taus) {
        const WeierstrassContext ctx(tau);
        const TheoremConstant k = theorem_constant(ctx);
        for (int t = 0; t < 5; ++t) {
            const TwistData tw = make_twist(ctx, u(rng), u(rng));
            const CVector c = twist_c(ctx, tw);
            const VectorXcd frame = section_frame(ctx, c, n);
            const VectorXcd v = frame.cwiseProduct(random_smooth_periodic(n, 4, rng()));
            const VectorXcd sol = solve_dbar_kernel(ctx, tw, v, n);
            res = std::max(res, dbar_residual(ctx, tw, sol, v, n));
            const VectorXcd uf =
                frame.cwiseProduct(solve_dbar_fourier(v.cwiseQuotient(frame), c, ctx.curve().lattice(), n));
            uniq = std::max(uniq, (sol - uf).norm() / uf.norm());
            const double ratio = grid_l2(ctx, sol, n) / grid_l2(ctx, v, n);
            young_slack = std::min(young_slack, young_l1_bound(ctx, tw, n) - ratio);
            thm_slack = std::min(thm_slack, k.k / ctx.curve().distance_to_lattice(tw.b) - ratio);
        }
    }
    return {res < 1e-3 && uniq < 1e-3 && young_slack >= 0.0 && thm_slack >= 0.0,
            "residual " + fmt(res) + ", kernel vs Fourier " + fmt(uniq) + " (tol 1e-3), Young slack " +
                fmt(young_slack) + ", K/d slack " + fmt(thm_slack)};
}

Outcome counterexample() {
    const Lattice lat = lattice_preset("square2");
    const double zero = counterexample_11(lat, 0.01);
    const double nonzero = counterexample_11(lat, 0.01, true);
    return {zero < 1e-12 && nonzero > 1e-3, "c = (0, eps): " + fmt(zero) + ", c = (eps, 0): " + fmt(nonzero)};
}

Outcome ueda() {
    const WeierstrassContext ctx(Complex(0, 1));
    double delta_res = 0.0, pou = 0.0, drift = 0.0, ceiling = 0.0, bound_slack = 1e300;
    bool finite = true;
    int rows = 0;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            if (i == 0 && j == 0) continue;
            const TwistData tw = make_twist(ctx, i / 20.0, j / 20.0);
            if (twist_c(ctx, tw).norm() < 1e-3) continue;
            double ratio[2] = {0.0, 0.0};
            for (int level = 0; level < 2; ++level) {
                const CechComplex cx(OpenCover::grid(), ctx, tw, level == 0 ? 64 : 128);
                const Cochain c1 = delta0(random_holomorphic_cochain(cx, 4242, 3, 1.0), cx);
                const UedaReport r = ueda_ratio(c1, cx, PrimitiveSolver::Fourier);
                ratio[level] = r.ratio;
                finite = finite && std::isfinite(r.ratio) && r.ratio > 0.0;
                bound_slack = std::min(bound_slack, r.bound - r.ratio);
                if (level == 1) {
                    const Cochain f = solve_primitive(c1, cx);
                    delta_res = std::max(delta_res, sup_distance(delta0(f, cx), c1, cx));
                    for (Eigen::Index L = 0; L < cx.pou(0).size(); ++L) {
                        double s = 0.0;
                        for (int k = 0; k < cx.pieces(); ++k) s += cx.pou(k)(L);
                        pou = std::max(pou, std::abs(s - 1.0));
                    }
                }
            }
            drift = std::max(drift, std::abs(ratio[1] / ratio[0] - 1.0));
            ceiling = std::max(ceiling, ratio[1]);
            ++rows;
        }
    }
    // Recovery of the 0-cochain itself, which is limited by the taper smoothness.
    const TwistData tw = make_twist(ctx, 0.3, 0.7);
    const CechComplex smooth(OpenCover::grid(2, 0.25, Taper::Smooth), ctx, tw, 256);
    const Cochain c0 = random_holomorphic_cochain(smooth, 7);
    const double recovery = sup_distance(solve_primitive(delta0(c0, smooth), smooth), c0, smooth);
    const CechComplex cosine(OpenCover::grid(), ctx, tw, 256);
    const Cochain c0c = random_holomorphic_cochain(cosine, 7);
    const double recovery_cos = sup_distance(solve_primitive(delta0(c0c, cosine), cosine), c0c, cosine);
    const bool pass = delta_res < 1e-6 && finite && drift <= 0.10 && pou < 1e-12 && bound_slack >= 0.0 &&
                      recovery < 1e-6;
    return {pass, std::to_string(rows) + " twists, delta residual " + fmt(delta_res) + ", c0 recovery " +
                      fmt(recovery) + " (smooth taper, N 256; cosine taper " + fmt(recovery_cos) +
                      "), N 64->128 drift " + fmt(drift) + ", ceiling " + fmt(ceiling) + ", bound slack " +
                      fmt(bound_slack) + ", PoU " + fmt(pou)};
}

Outcome determinism(const std::string& bin) {
    const auto dir = std::filesystem::temp_directory_path();
    std::string text[2];
    int codes[2] = {0, 0};
    for (int k = 0; k < 2; ++k) {
        const auto path = dir / ("flatdbar_acceptance_verify_" + std::to_string(k) + ".csv");
        const std::string cmd = "\"" + bin + "\" verify --seed 42 --out \"" + path.string() + "\"";
        codes[k] = std::system(cmd.c_str());
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        text[k] = ss.str();
    }
    const bool same = !text[0].empty() && text[0] == text[1];
    return {same && codes[0] == 0 && codes[1] == 0,
            std::string(same ? "byte-identical" : "outputs differ") + " (" + std::to_string(text[0].size()) +
                " bytes), exit codes " + std::to_string(codes[0]) + "," + std::to_string(codes[1])};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <flatdbar binary>\n");
        return 2;
    }
    const std::string bin = argv[1];
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"lattice core", lattice_core},
        {"weierstrass constants", weierstrass},
        {"torus exactness", torus_exactness},
        {"finite-difference oracle", oracle},
        {"perturbed-operator algebra", operator_algebra},
        {"gap inequality and cross terms", gap_inequality},
        {"no holomorphic (p,0)-forms", holomorphic_forms},
        {"elliptic kernel solver", kernel_solver},
        {"(1,1)-form counterexample", counterexample},
        {"cech primitive and ueda ratio", ueda},
        {"determinism", [&] { return determinism(bin); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
