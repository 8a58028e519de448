#include <doctest.h>

#include <random>

#include "flatdbar/torus_spectral.hpp"

using namespace flatdbar;

namespace {

Lattice product(std::vector<Complex> taus) {
    const int d = static_cast<int>(taus.size());
    MatrixXcd g = MatrixXcd::Zero(d, 2 * d);
    for (int j = 0; j < d; ++j) {
        g(j, j) = 1.0;
        g(j, d + j) = taus[j];
    }
    return Lattice(g);
}

Lattice skew2() {
    MatrixXcd g(2, 4);
    g << 1.0, Complex(0.2, 0.1), Complex(0.3, 1.1), Complex(0.0, 0.2),
        Complex(0.1, 0.0), 1.0, Complex(-0.1, 0.3), Complex(0.2, 0.9);
    return Lattice(g);
}

CVector random_c(std::mt19937_64& rng, const Lattice& lat) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    VectorXcd v(lat.dim());
    for (int j = 0; j < lat.dim(); ++j) v(j) = Complex(u(rng), u(rng));
    return reduce(v, lat);
}

}  // namespace

TEST_CASE("subset bookkeeping") {
    CHECK(subsets(3, 2).size() == 3);
    CHECK(subsets(3, 2)[0] == 0b011);
    CHECK(subsets(3, 2)[2] == 0b110);
    CHECK(binomial(5, 2) == 10);
    CHECK(count_below(0b1011, 3) == 2);
    CHECK(frequency(3, 8) == 3);
    CHECK(frequency(4, 8) == -4);
}

TEST_CASE("FFT round trip in two and four dimensions") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int dims : {2, 4}) {
        const int n = 6;
        VectorXcd a(static_cast<Eigen::Index>(std::pow(n, dims)));
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(g(rng), g(rng));
        VectorXcd b = a;
        fft_forward(b, n, dims);
        fft_inverse(b, n, dims);
        CHECK((a - b).norm() < 1e-12 * a.norm());
    }
}

TEST_CASE("symbols act on characters like dbar") {
    // dbar exp(2 pi i w.t) = eta_w exp(2 pi i w.t): check the symbol against a
    // centred finite difference in physical coordinates.
    const Lattice lat = product({Complex(0.3, 0.8)});
    VectorXi w(2);
    w << 2, -1;
    const VectorXcd eta = character_form(w, lat);
    const auto chi = [&](Complex z) {
        const VectorXd t = lat.coordinates(VectorXcd::Constant(1, z));
        return std::exp(Complex(0.0, 2.0 * kPi * (w(0) * t(0) + w(1) * t(1))));
    };
    const Complex z(0.17, 0.29);
    const double h = 1e-5;
    const Complex dx = (chi(z + h) - chi(z - h)) / (2.0 * h);
    const Complex dy = (chi(z + Complex(0, h)) - chi(z - Complex(0, h))) / (2.0 * h);
    const Complex dbar = 0.5 * (dx + Complex(0, 1) * dy);
    CHECK(std::abs(dbar / chi(z) - eta(0)) < 1e-6);
}

TEST_CASE("dbar_rho squares to zero and is adjoint to dbar_rho^*") {
    std::mt19937_64 rng(31);
    const Lattice lats[] = {product({Complex(0.2, 1.3)}), skew2()};
    for (const Lattice& lat : lats) {
        const int d = lat.dim();
        for (int t = 0; t < 4; ++t) {
            const CVector c = random_c(rng, lat);
            const int p = t % (d + 1);
            const FormGrid u = random_band_limited(d, p, 0, 8, 2, false, rng());
            const FormGrid du = apply_dbar_rho(u, c, lat);
            if (d > 1) CHECK(norm(apply_dbar_rho(du, c, lat), lat) < 1e-10 * norm(u, lat));
            const FormGrid v = random_band_limited(d, p, 1, 8, 2, false, rng());
            const Complex lhs = inner(du, v, lat);
            const Complex rhs = inner(u, apply_dbar_rho_star(v, c, lat), lat);
            CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("bidegree errors") {
    const Lattice lat = product({Complex(0, 1)});
    const CVector c = reduce(VectorXcd::Constant(1, Complex(0.3, 0.1)), lat);
    CHECK_THROWS_AS(apply_dbar_rho(FormGrid(1, 0, 1, 8), c, lat), BidegreeOverflow);
    CHECK_THROWS_AS(apply_dbar_rho_star(FormGrid(1, 0, 0, 8), c, lat), BidegreeUnderflow);
}

TEST_CASE("characters are Laplacian eigenfunctions") {
    const Lattice lat = skew2();
    std::mt19937_64 rng(2);
    const CVector c = random_c(rng, lat);
    VectorXi w(4);
    w << 1, 0, -2, 1;
    FormGrid u(2, 0, 0, 8);
    u.data().col(0) = character_samples(w, 2, 8);
    const FormGrid lu = apply_laplacian_rho(u, c, lat);
    const double ev = (character_form(w, lat) + c.c).squaredNorm();
    CHECK((lu.data() - ev * u.data()).norm() < 1e-10 * u.data().norm() * ev);
}

TEST_CASE("min eigenvalue and K_rho exactness on tori") {
    const Lattice lat = product({Complex(0, 1)});
    for (const SweepRow& r : sweep_pic0(lat, GridSpec{20})) {
        if (r.trivial) continue;
        CHECK(std::abs(r.product - 1.0) < 1e-12);
        CHECK(r.lambda_min == doctest::Approx(r.dist * r.dist).epsilon(1e-12));
    }
    CHECK_THROWS_AS(k_rho(CVector{VectorXcd::Zero(1), true}, lat), TrivialBundle);
}

TEST_CASE("cutoff search is certified beyond the box") {
    // tau = 1/17 + 1e-4 i: the shortest dual vector has coefficients (17, 1).
    const Lattice lat = product({Complex(1.0 / 17.0, 1e-4)});
    CHECK_THROWS_AS(smallest_nonzero_eigenvalue(lat, 1), CutoffTooSmall);
    CHECK(smallest_nonzero_eigenvalue(lat, 16) == doctest::Approx(289.0 * kPi * kPi).epsilon(1e-9));
    const Lattice sq = product({Complex(0, 1)});
    CHECK(smallest_nonzero_eigenvalue(sq, 1) == doctest::Approx(kPi * kPi).epsilon(1e-12));
}

TEST_CASE("log-log slope along rays") {
    const Lattice lat = product({Complex(0.4, 0.9)});
    VectorXcd dir(1);
    dir(0) = std::polar(1.0, 0.7);
    const double slope = loglog_slope(sweep_ray(lat, dir, {0.01, 0.03, 0.1, 0.3}));
    CHECK(slope == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("finite-difference oracle tracks the character formula") {
    const Lattice lat = product({Complex(0.25, 1.1)});
    std::mt19937_64 rng(77);
    for (int t = 0; t < 3; ++t) {
        const CVector c = random_c(rng, lat);
        const double exact = min_eigenvalue(c, lat).lambda_min;
        const double fd = fd_laplacian_lambda_min(c, lat, 32);
        CHECK(std::abs(fd / exact - 1.0) < 0.02);
    }
}

TEST_CASE("sparse and dense FD eigensolvers agree") {
    const Lattice lat = product({Complex(0, 1)});
    const CVector c = reduce(VectorXcd::Constant(1, Complex(0.7, -0.4)), lat);
    const double dense = fd_laplacian_lambda_min_dense(c, lat, 40);
    const double sparse = fd_laplacian_lambda_min(c, lat, 40);
    CHECK(sparse == doctest::Approx(dense).epsilon(1e-8));
    CHECK_THROWS_AS(fd_laplacian_lambda_min(c, lat, 128), ResourceLimit);
}

TEST_CASE("gap inequality and cross terms") {
    std::mt19937_64 rng(5);
    const Lattice lats[] = {product({Complex(0.1, 1.2)}), skew2()};
    for (const Lattice& lat : lats) {
        const CVector c = random_c(rng, lat);
        // Small enough that the bound's right-hand side is positive.
        const double scale = 0.5 * std::sqrt(smallest_nonzero_eigenvalue(lat) / (4.0 * lat.dim()));
        const CVector small = reduce(c.c * (scale / c.c.cwiseAbs().sum()), lat);
        for (auto [p, q] : {std::pair{0, 0}, std::pair{1, 0}}) {
            const GapReport g = verify_gap_inequality(small, lat, p, q, 10, rng());
            CHECK_FALSE(g.vacuous);
            CHECK(g.worst_slack >= -1e-10);
            if (q == 0) CHECK(g.worst_slack_strong >= -1e-10);
        }
        const CrossTermReport ct = verify_cross_term(c, lat, 5, rng());
        CHECK(ct.function_residual < 1e-9);
        CHECK(ct.form_residual < 1e-9);
    }
}

TEST_CASE("(1,1)-form counterexample") {
    const Lattice lat = product({Complex(0, 1), Complex(0.2, 1.1)});
    CHECK(counterexample_11(lat, 0.01) < 1e-12);
    const double nonzero = counterexample_11(lat, 0.01, true);
    CHECK(nonzero == doctest::Approx(0.01 * std::sqrt(lat.volume())).epsilon(1e-10));
}

TEST_CASE("no holomorphic (p,0)-forms: kernel gap equals the square root of lambda_min") {
    const Lattice lat = skew2();
    std::mt19937_64 rng(17);
    const CVector c = random_c(rng, lat);
    const double root = std::sqrt(min_eigenvalue(c, lat).lambda_min);
    for (int p = 1; p <= 2; ++p) CHECK(std::abs(p0_kernel_gap(c, lat, p) / root - 1.0) < 0.02);
}

TEST_CASE("Fourier dbar solve inverts dbar_rho on functions") {
    const Lattice lat = product({Complex(0.3, 0.9)});
    const CVector c = reduce(VectorXcd::Constant(1, Complex(0.4, 0.2)), lat);
    const FormGrid v = random_band_limited(1, 0, 1, 16, 3, false, 9);
    FormGrid u(1, 0, 0, 16);
    u.data().col(0) = solve_dbar_fourier(v.data().col(0), c, lat, 16);
    CHECK((apply_dbar_rho(u, c, lat).data() - v.data()).norm() < 1e-12 * v.data().norm());
}
