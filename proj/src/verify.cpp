#include "flatdbar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "flatdbar/cech.hpp"
#include "flatdbar/elliptic_kernel.hpp"
#include "flatdbar/io.hpp"
#include "flatdbar/torus_spectral.hpp"

namespace flatdbar {

namespace {

class Suites {
public:
    explicit Suites(std::uint64_t seed) : rng_(seed) {}

    std::vector<SuiteResult> run() {
        lattice();
        weierstrass();
        exactness();
        operators();
        estimates();
        oracle();
        solver();
        cech();
        return std::move(results_);
    }

private:
    void record(const std::string& suite, const std::string& metric, double value, double tol, bool upper = true) {
        const bool pass = std::isfinite(value) && (upper ? value < tol : value > tol);
        results_.push_back({suite, metric, value, tol, upper, pass});
    }

    std::uint64_t next_seed() { return rng_(); }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    CVector random_c(const Lattice& lat) {
        VectorXcd v(lat.dim());
        for (int j = 0; j < lat.dim(); ++j) v(j) = Complex(uniform(-1.5, 1.5), uniform(-1.5, 1.5));
        return reduce(v, lat);
    }

    Lattice random_lattice(int d, double max_condition = Lattice::kMaxCondition) {
        for (;;) {
            MatrixXcd g(d, 2 * d);
            for (int r = 0; r < d; ++r)
                for (int k = 0; k < 2 * d; ++k) g(r, k) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
            try {
                Lattice lat(g);
                if (lat.condition_number() <= max_condition) return lat;
            } catch (const SingularLattice&) {
            }
        }
    }

    void lattice() {
        double key = 0.0, dual = 0.0, lc = 0.0;
        for (int t = 0; t < 60; ++t) {
            // Residuals scale like eps * cond * |s|; 1e-12 needs cond <= 1e3 at |s_k| <= 2 pi.
            const Lattice lat = random_lattice(1 + t % 3, 1e3);
            VectorXcd s(lat.rank());
            for (int k = 0; k < lat.rank(); ++k) s(k) = Complex(0.0, uniform(-2.0 * kPi, 2.0 * kPi));
            key = std::max(key, key_identity_residual(lat, s));
            dual = std::max(dual, (c_map(lat, s) - c_map_dual(lat, s)).norm());
            lc = std::max(lc, (lambda_c_generators(lat) - Complex(0.0, kPi) * lat.dual()).norm());
        }
        record("lattice", "key_identity_residual", key, 1e-12);
        record("lattice", "dual_formula_residual", dual, 1e-12);
        record("lattice", "lambda_c_residual", lc, 1e-12);
    }

    void weierstrass() {
        double sum = 0.0, legendre = 0.0;
        for (int t = 0; t < 6; ++t) {
            const WeierstrassContext ctx(Complex(uniform(-0.5, 0.5), uniform(0.5, 2.0)));
            sum = std::max(sum, std::abs(ctx.eta(1) + ctx.eta(2) + ctx.eta(3)));
            const Complex target(0.0, kPi / 2.0);
            for (auto [a, b] : {std::pair{1, 3}, std::pair{3, 2}, std::pair{2, 1}})
                legendre = std::max(legendre, std::abs(ctx.eta(a) * ctx.omega(b) - ctx.eta(b) * ctx.omega(a) - target));
        }
        record("weierstrass", "eta_sum", sum, 1e-10);
        record("weierstrass", "legendre_residual", legendre, 1e-10);
    }

    void exactness() {
        const Lattice lat = lattice_preset("square");
        double worst = 0.0;
        for (const SweepRow& r : sweep_pic0(lat, GridSpec{12}))
            if (!r.trivial) worst = std::max(worst, std::abs(r.product - 1.0));
        record("exactness", "max_product_error", worst, 1e-12);
        VectorXcd dir(1);
        dir(0) = std::polar(1.0, uniform(0.0, 2.0 * kPi));
        const std::vector<double> radii = {0.01, 0.02, 0.05, 0.1, 0.2, 0.4};
        record("exactness", "loglog_slope_error", std::abs(loglog_slope(sweep_ray(lat, dir, radii)) + 1.0), 0.01);
    }

    void operators() {
        const Lattice lat = lattice_preset("hex2");
        double dd = 0.0, adj = 0.0;
        for (int t = 0; t < 5; ++t) {
            const CVector c = random_c(lat);
            const FormGrid u = random_band_limited(2, 1, 0, 8, 2, false, next_seed());
            const FormGrid w = random_band_limited(2, 1, 1, 8, 2, false, next_seed());
            const FormGrid du = apply_dbar_rho(u, c, lat);
            dd = std::max(dd, norm(apply_dbar_rho(du, c, lat), lat) / std::max(1.0, norm(u, lat)));
            adj = std::max(adj, std::abs(inner(du, w, lat) - inner(u, apply_dbar_rho_star(w, c, lat), lat)));
        }
        record("operators", "dbar_squared", dd, 1e-10);
        record("operators", "adjointness", adj, 1e-10);
    }

    // Random direction with C_X = sqrt(lambda_1 / (4 d)) / 2, so the q = 0 bound is not vacuous.
    CVector gap_test_c(const Lattice& lat) {
        VectorXcd v(lat.dim());
        for (int j = 0; j < lat.dim(); ++j) v(j) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
        const double target = 0.5 * std::sqrt(smallest_nonzero_eigenvalue(lat) / (4.0 * lat.dim()));
        return reduce(v * (target / v.cwiseAbs().sum()), lat);
    }

    void estimates() {
        const Lattice lat = lattice_preset("square2");
        const CVector c = random_c(lat);
        const CVector small = gap_test_c(lat);
        const GapReport g00 = verify_gap_inequality(small, lat, 0, 0, 10, next_seed());
        const GapReport g10 = verify_gap_inequality(small, lat, 1, 0, 10, next_seed());
        const auto slack = [](const GapReport& g) {
            return g.vacuous ? -std::numeric_limits<double>::infinity() : std::min(g.worst_slack, g.worst_slack_strong);
        };
        record("estimates", "gap_slack_00", slack(g00), -1e-10, false);
        record("estimates", "gap_slack_10", slack(g10), -1e-10, false);
        const CrossTermReport ct = verify_cross_term(c, lat, 5, next_seed());
        record("estimates", "cross_term_residual", std::max(ct.function_residual, ct.form_residual), 1e-9);
        record("estimates", "counterexample_zero", counterexample_11(lat, 0.01), 1e-12);
        record("estimates", "counterexample_nonzero", counterexample_11(lat, 0.01, true), 1e-3, false);
        const double gap = p0_kernel_gap(c, lat, 1);
        record("estimates", "p0_gap_rel_error", std::abs(gap / std::sqrt(min_eigenvalue(c, lat).lambda_min) - 1.0), 0.02);
    }

    void oracle() {
        const Lattice lat = lattice_preset("square");
        double worst = 0.0;
        for (int t = 0; t < 3; ++t) {
            const CVector c = random_c(lat);
            const double exact = min_eigenvalue(c, lat).lambda_min;
            worst = std::max(worst, std::abs(fd_laplacian_lambda_min(c, lat, 32) / exact - 1.0));
        }
        record("oracle", "fd_rel_error_n32", worst, 0.02);
    }

    void solver() {
        const WeierstrassContext ctx(Complex(0.0, 1.0));
        const TwistData tw = make_twist(ctx, 0.3, 0.2);
        const int n = 64;
        const VectorXcd frame = section_frame(ctx, twist_c(ctx, tw), n);
        const VectorXcd v = frame.cwiseProduct(random_smooth_periodic(n, 4, next_seed()));
        const VectorXcd u = solve_dbar_kernel(ctx, tw, v, n);
        record("solver", "residual_n64", dbar_residual(ctx, tw, u, v, n), 1e-3);
    }

    void cech() {
        const WeierstrassContext ctx(Complex(0.0, 1.0));
        const TwistData tw = make_twist(ctx, 0.3, 0.7);
        const CechComplex cx(OpenCover::grid(), ctx, tw, 32);
        double pou = 0.0;
        for (Eigen::Index L = 0; L < cx.pou(0).size(); ++L) {
            double s = 0.0;
            for (int j = 0; j < cx.pieces(); ++j) s += cx.pou(j)(L);
            pou = std::max(pou, std::abs(s - 1.0));
        }
        record("cech", "pou_sum_error", pou, 1e-12);
        const Cochain c1 = delta0(random_holomorphic_cochain(cx, next_seed()), cx);
        record("cech", "cocycle_defect", cocycle_defect(c1, cx), 1e-10);
        const Cochain f = solve_primitive(c1, cx, PrimitiveSolver::Fourier);
        record("cech", "delta_primitive_residual", sup_distance(delta0(f, cx), c1, cx), 1e-6);
        const UedaReport r = ueda_ratio(c1, cx);
        record("cech", "ueda_bound_slack", r.bound - r.ratio, 0.0, false);
    }

    std::mt19937_64 rng_;
    std::vector<SuiteResult> results_;
};

}  // namespace

std::vector<SuiteResult> run_verify_suites(std::uint64_t seed) { return Suites(seed).run(); }

}  // namespace flatdbar
