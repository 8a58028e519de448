#include <doctest.h>

#include <random>

#include "flatdbar/weierstrass.hpp"

using namespace flatdbar;

namespace {

// Symmetric truncated lattice sums over |m|, |n| <= r:
//   log sigma(z) = log z + sum' [log(1 - z/w) + z/w + z^2/(2 w^2)]
//   zeta(z)      = 1/z + sum' [1/(z - w) + 1/w + z/w^2]
// Both summands are O(|w|^-3), so the truncation error is O(r^-2).
struct DirectSums {
    Complex log_sigma;
    Complex zeta;
};

DirectSums direct_sums(Complex tau, Complex z, int r) {
    Complex ls = std::log(z);
    Complex ze = 1.0 / z;
    for (int m = -r; m <= r; ++m)
        for (int n = -r; n <= r; ++n) {
            if (m == 0 && n == 0) continue;
            const Complex w = static_cast<double>(m) + static_cast<double>(n) * tau;
            const Complex x = z / w;
            ls += std::log(1.0 - x) + x + 0.5 * x * x;
            ze += 1.0 / (z - w) + 1.0 / w + z / (w * w);
        }
    return {ls, ze};
}

Complex random_tau(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-0.5, 0.5);
    std::uniform_real_distribution<double> im(0.5, 2.0);
    return {re(rng), im(rng)};
}

}  // namespace

TEST_CASE("half-period constants: sum, Legendre relation, square lattice value") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
        const WeierstrassContext ctx(random_tau(rng));
        CHECK(std::abs(ctx.eta(1) + ctx.eta(2) + ctx.eta(3)) < 1e-10);
        const Complex half_pi_i(0.0, kPi / 2.0);
        CHECK(std::abs(ctx.eta(1) * ctx.omega(3) - ctx.eta(3) * ctx.omega(1) - half_pi_i) < 1e-10);
        CHECK(std::abs(ctx.eta(2) * ctx.omega(3) - ctx.eta(3) * ctx.omega(2) + half_pi_i) < 1e-10);
        CHECK(std::abs(ctx.eta(1) * ctx.omega(2) - ctx.eta(2) * ctx.omega(1) + half_pi_i) < 1e-10);
    }
    // tau = i: zeta(i z) = -i zeta(z) gives eta3 = -i eta1, and Legendre then forces eta1 = pi/2.
    const WeierstrassContext sq(Complex(0, 1));
    CHECK(std::abs(sq.eta(1) - kPi / 2.0) < 1e-12);
    CHECK(std::abs(sq.eta(3) + Complex(0, 1) * sq.eta(1)) < 1e-12);
}

TEST_CASE("sigma and zeta against direct lattice sums") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int t = 0; t < 4; ++t) {
        const Complex tau = random_tau(rng);
        const WeierstrassContext ctx(tau);
        const Complex z(u(rng), u(rng) * tau.imag());
        const DirectSums a = direct_sums(tau, z, 150);
        const DirectSums b = direct_sums(tau, z, 300);
        // Richardson step on the r^-2 tail.
        const Complex ls = (4.0 * b.log_sigma - a.log_sigma) / 3.0;
        const Complex ze = (4.0 * b.zeta - a.zeta) / 3.0;
        CHECK(std::abs(std::exp(ls) / ctx.sigma(z) - 1.0) < 1e-7);
        CHECK(std::abs(ze - ctx.zeta(z)) < 1e-7 * std::max(1.0, std::abs(ze)));
    }
}

TEST_CASE("zeta is the logarithmic derivative of sigma; both are odd") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 10; ++t) {
        const WeierstrassContext ctx(random_tau(rng));
        const Complex z(u(rng), u(rng));
        const double h = 1e-5;
        const Complex fd = (ctx.sigma(z + h) - ctx.sigma(z - h)) / (2.0 * h * ctx.sigma(z));
        CHECK(std::abs(fd - ctx.zeta(z)) < 1e-6 * std::max(1.0, std::abs(ctx.zeta(z))));
        CHECK(std::abs(ctx.sigma(-z) + ctx.sigma(z)) < 1e-12 * std::abs(ctx.sigma(z)));
        CHECK(std::abs(ctx.zeta(-z) + ctx.zeta(z)) < 1e-10 * std::max(1.0, std::abs(ctx.zeta(z))));
    }
}

TEST_CASE("quasi-periodicity of sigma and zeta") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 10; ++t) {
        const WeierstrassContext ctx(random_tau(rng));
        for (int s = 0; s < 50; ++s) {
            const Complex z(u(rng), u(rng));
            for (int j : {1, 3}) {
                const Complex w = ctx.omega(j);
                const Complex expect = -std::exp(2.0 * ctx.eta(j) * (z + w)) * ctx.sigma(z);
                CHECK(std::abs(ctx.sigma(z + 2.0 * w) / expect - 1.0) < 1e-8);
                CHECK(std::abs(ctx.zeta(z + 2.0 * w) - ctx.zeta(z) - 2.0 * ctx.eta(j)) <
                      1e-9 * std::max(1.0, std::abs(ctx.zeta(z))));
            }
        }
    }
}

TEST_CASE("reduced evaluation matches the raw series inside the cell") {
    const WeierstrassContext ctx(Complex(0.2, 1.3));
    const Complex z(0.31, -0.22);
    CHECK(std::abs(ctx.sigma(z) - ctx.sigma_series(z)) < 1e-14);
    CHECK(std::abs(ctx.zeta(z) - ctx.zeta_series(z)) < 1e-12);
    CHECK(std::abs(weierstrass_sigma(ctx, z) - ctx.sigma(z)) == 0.0);
    CHECK(std::abs(weierstrass_zeta(ctx, z) - ctx.zeta(z)) == 0.0);
}

TEST_CASE("zeros, poles and validation") {
    const WeierstrassContext ctx(Complex(0.1, 0.9));
    CHECK(std::abs(ctx.sigma(0.0)) < 1e-15);
    CHECK(std::abs(ctx.sigma(1.0 + ctx.tau())) < 1e-12);
    CHECK_THROWS_AS(ctx.zeta(0.0), PoleAtLattice);
    CHECK_THROWS_AS(ctx.zeta(ctx.tau() - 2.0), PoleAtLattice);
    CHECK_THROWS_AS(WeierstrassContext(Complex(0.0, 0.05)), ValidationError);
    CHECK_THROWS_AS(ctx.omega(4), ValidationError);
}

TEST_CASE("elliptic curve reduction and lattice distance") {
    const EllipticCurve e(Complex(0.4, 0.8));
    long long m = 0, n = 0;
    const Complex z = 3.0 + 2.0 * e.tau() + Complex(0.1, 0.05);
    const Complex z0 = e.reduce(z, m, n);
    CHECK(m == 3);
    CHECK(n == 2);
    CHECK(std::abs(z0 - Complex(0.1, 0.05)) < 1e-12);
    CHECK(e.distance_to_lattice(z) == doctest::Approx(std::abs(Complex(0.1, 0.05))));
}
