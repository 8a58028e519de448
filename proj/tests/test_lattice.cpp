#include <doctest.h>

#include <random>

#include "flatdbar/lattice.hpp"

using namespace flatdbar;

namespace {

Lattice random_lattice(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        MatrixXcd g(d, 2 * d);
        for (int r = 0; r < d; ++r)
            for (int k = 0; k < 2 * d; ++k) g(r, k) = Complex(u(rng), u(rng));
        try {
            Lattice lat(g);
            if (lat.condition_number() <= 1e3) return lat;
        } catch (const SingularLattice&) {
        }
    }
}

VectorXcd random_imaginary(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-2.0 * kPi, 2.0 * kPi);
    VectorXcd s(n);
    for (int k = 0; k < n; ++k) s(k) = Complex(0.0, u(rng));
    return s;
}

Lattice curve(Complex tau) {
    MatrixXcd g(1, 2);
    g << 1.0, tau;
    return Lattice(g);
}

}  // namespace

TEST_CASE("realify and complexify are inverse") {
    VectorXcd v(3);
    v << Complex(1, 2), Complex(-3, 0.5), Complex(0, -1);
    const VectorXd x = realify(v);
    CHECK(x.size() == 6);
    CHECK(x(0) == 1.0);
    CHECK(x(3) == 2.0);
    CHECK((complexify(x) - v).norm() == 0.0);
}

TEST_CASE("construction validates the generators") {
    CHECK_THROWS_AS(Lattice(MatrixXcd::Zero(1, 3)), ValidationError);
    MatrixXcd g(1, 2);
    g << 1.0, 2.0;
    CHECK_THROWS_AS(Lattice{g}, SingularLattice);
    g << 1.0, Complex(1.0, 1e-10);
    CHECK_THROWS_AS(Lattice{g}, SingularLattice);
    g << 1.0, Complex(0.0, 1.0);
    const Lattice sq(g);
    CHECK(sq.volume() == doctest::Approx(1.0));
    CHECK(sq.rank() == 2);
}

TEST_CASE("c-map against an explicit solve of the defining equations") {
    // For <1, tau>: c - conj(c) = s1 and conj(tau) c - tau conj(c) = s2.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const Complex tau(u(rng), 0.2 + std::abs(u(rng)) * 2.0);
        const Lattice lat = curve(tau);
        const VectorXcd s = random_imaginary(rng, 2);
        const double y = s(0).imag() / 2.0;
        const double x = (tau.real() * y - s(1).imag() / 2.0) / tau.imag();
        const VectorXcd c = c_map(lat, s);
        CHECK(std::abs(c(0) - Complex(x, y)) < 1e-12);
    }
}

TEST_CASE("c-map identities on random lattices") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const int d = 1 + t % 3;
        const Lattice lat = random_lattice(rng, d);
        const VectorXcd s = random_imaginary(rng, 2 * d);
        CHECK(key_identity_residual(lat, s) < 1e-12);
        CHECK((c_map(lat, s) - c_map_dual(lat, s)).norm() < 1e-12);
        CHECK((lambda_c_generators(lat) - Complex(0.0, kPi) * lat.dual()).norm() < 1e-12);
    }
}

TEST_CASE("dual basis pairs with the generators") {
    std::mt19937_64 rng(9);
    const Lattice lat = random_lattice(rng, 2);
    for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 4; ++k) {
            const double pairing = (lat.dual().col(l).adjoint() * lat.generator(k))(0).real();
            CHECK(pairing == doctest::Approx(l == k ? 1.0 : 0.0).epsilon(1e-12));
        }
}

TEST_CASE("c-map rejects non-imaginary input") {
    const Lattice lat = curve(Complex(0, 1));
    VectorXcd s(2);
    s << Complex(0.1, 1.0), Complex(0.0, 1.0);
    CHECK_THROWS_AS(c_map(lat, s), NonImaginaryInput);
    VectorXcd wrong(3);
    wrong.setZero();
    CHECK_THROWS_AS(c_map(lat, wrong), DimensionMismatch);
}

TEST_CASE("reduce is idempotent, Lambda_c periodic and lands in the Voronoi cell") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    std::uniform_int_distribution<int> k(-4, 4);
    for (int t = 0; t < 200; ++t) {
        const int d = 1 + t % 2;
        const Lattice lat = random_lattice(rng, d);
        VectorXcd v(d);
        for (int j = 0; j < d; ++j) v(j) = Complex(u(rng), u(rng));
        const CVector r = reduce(v, lat);
        CHECK(r.reduced);
        CHECK((reduce(r.c, lat).c - r.c).norm() < 1e-9);
        VectorXcd g = VectorXcd::Zero(d);
        for (int l = 0; l < 2 * d; ++l) g += static_cast<double>(k(rng)) * lat.lambda_c().col(l);
        CHECK((reduce(VectorXcd(v + g), lat).c - r.c).norm() < 1e-9);
        // Voronoi: no single generator step shortens the representative.
        for (int l = 0; l < 2 * d; ++l) {
            CHECK(r.norm() <= (r.c + lat.lambda_c().col(l)).norm() + 1e-12);
            CHECK(r.norm() <= (r.c - lat.lambda_c().col(l)).norm() + 1e-12);
        }
    }
}

TEST_CASE("generators of Lambda_c reduce to zero") {
    std::mt19937_64 rng(2);
    const Lattice lat = random_lattice(rng, 2);
    const MatrixXcd g = lambda_c_generators(lat);
    for (int l = 0; l < 4; ++l) CHECK(distance_to_lambda_c(VectorXcd(g.col(l)), lat) < 1e-12);
}

TEST_CASE("ties go to the lexicographically smallest coefficients") {
    // Square lattice: Lambda_c = pi Z[i]; pi/2 is equidistant from 0 and pi.
    const Lattice lat = curve(Complex(0, 1));
    VectorXcd v(1);
    v(0) = Complex(kPi / 2.0, 0.0);
    const CVector a = reduce(v, lat);
    CHECK(a.norm() == doctest::Approx(kPi / 2.0));
    const CVector b = reduce(v, lat);
    CHECK(a.c(0) == b.c(0));
}

TEST_CASE("covering radius of the square and hexagonal Lambda_c") {
    const Lattice sq = curve(Complex(0, 1));
    CHECK(covering_radius(sq) == doctest::Approx(kPi / std::sqrt(2.0)).epsilon(1e-12));
    const Lattice hex = curve(std::polar(1.0, kPi / 3.0));
    double shortest = 1e300;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            if (a == 0 && b == 0) continue;
            shortest = std::min(shortest, std::abs(double(a) * hex.lambda_c()(0, 0) + double(b) * hex.lambda_c()(0, 1)));
        }
    CHECK(covering_radius(hex) == doctest::Approx(shortest / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("Voronoi vertex sits at the covering radius") {
    const Lattice lat = curve(Complex(0.3, 0.9));
    Eigen::Matrix2d basis;
    basis.col(0) = realify(VectorXcd(lat.lambda_c().col(0)));
    basis.col(1) = realify(VectorXcd(lat.lambda_c().col(1)));
    const auto poly = voronoi_polygon<double>(basis);
    CHECK(poly.size() >= 4);
    for (const auto& p : poly) {
        VectorXcd v(1);
        v(0) = Complex(p(0), p(1));
        CHECK(distance_to_lambda_c(v, lat) == doctest::Approx(covering_radius(lat)).epsilon(1e-9));
    }
}

TEST_CASE("header-only core instantiates for long double") {
    MatrixX<std::complex<long double>> g(1, 2);
    g << 1.0L, std::complex<long double>(0.2L, 1.1L);
    const BasicLattice<long double> lat(g);
    VectorX<std::complex<long double>> s(2);
    s << std::complex<long double>(0, 1.5L), std::complex<long double>(0, -0.7L);
    CHECK(static_cast<double>(key_identity_residual(lat, s)) < 1e-15);
}
