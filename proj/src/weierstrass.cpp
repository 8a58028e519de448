#include "flatdbar/weierstrass.hpp"

#include <cmath>

namespace flatdbar {

namespace {

Lattice curve_lattice(Complex tau) {
    MatrixXcd g(1, 2);
    g << Complex(1.0, 0.0), tau;
    return Lattice(g);
}

Complex validated_tau(Complex tau) {
    if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
        throw ValidationError("tau must be finite");
    if (tau.imag() < EllipticCurve::kMinImagTau)
        throw ValidationError("Im tau must be at least 0.1");
    return tau;
}

}  // namespace

EllipticCurve::EllipticCurve(Complex tau) : tau_(validated_tau(tau)), lattice_(curve_lattice(tau)) {}

Complex EllipticCurve::reduce(Complex z, long long& m, long long& n) const {
    n = std::llround(z.imag() / tau_.imag());
    const Complex y = z - static_cast<double>(n) * tau_;
    m = std::llround(y.real());
    return y - static_cast<double>(m);
}

Complex EllipticCurve::nearest_offset(Complex z) const {
    long long m = 0;
    long long n = 0;
    const Complex z0 = reduce(z, m, n);
    Complex best = z0;
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
            const Complex cand = z0 - static_cast<double>(a) - static_cast<double>(b) * tau_;
            if (std::abs(cand) < std::abs(best)) best = cand;
        }
    }
    return best;
}

WeierstrassContext::WeierstrassContext(Complex tau)
    : curve_(tau), q_(std::exp(Complex(0.0, kPi) * tau)) {
    terms_ = terms_for(Complex(0.5, 0.5 * curve_.tau().imag()));
    const Complex q2 = q_ * q_;
    Complex x = q2;
    Complex sum = 0.0;
    for (int k = 1; k <= terms_; ++k) {
        const Complex one_minus = 1.0 - x;
        sum += x / (one_minus * one_minus);
        x *= q2;
    }
    eta1_ = kPi * kPi / 6.0 - 4.0 * kPi * kPi * sum;
    eta3_ = zeta_series(omega(3));
    eta2_ = zeta_series(omega(2));
}

int WeierstrassContext::terms_for(Complex z) const {
    // |q|^{2n} e^{2 pi |Im z|} < e^{-40}.
    const double it = curve_.tau().imag();
    const double n = (2.0 * kPi * std::abs(z.imag()) + 40.0) / (2.0 * kPi * it);
    return static_cast<int>(std::ceil(n)) + 1;
}

Complex WeierstrassContext::omega(int j) const {
    switch (j) {
        case 1: return {0.5, 0.0};
        case 2: return (-1.0 - tau()) / 2.0;
        case 3: return tau() / 2.0;
        default: throw ValidationError("half-period index must be 1, 2 or 3");
    }
}

Complex WeierstrassContext::eta(int j) const {
    switch (j) {
        case 1: return eta1_;
        case 2: return eta2_;
        case 3: return eta3_;
        default: throw ValidationError("half-period index must be 1, 2 or 3");
    }
}

Complex WeierstrassContext::sigma_series(Complex z) const {
    const int terms = terms_for(z);
    const Complex e = std::exp(Complex(0.0, 2.0 * kPi) * z);
    const Complex einv = 1.0 / e;
    const Complex q2 = q_ * q_;
    Complex x = q2;
    Complex prod = 1.0;
    for (int k = 1; k <= terms; ++k) {
        const Complex den = 1.0 - x;
        prod *= (1.0 - x * e) * (1.0 - x * einv) / (den * den);
        x *= q2;
    }
    return std::exp(eta1_ * z * z) * std::sin(kPi * z) * prod / kPi;
}

Complex WeierstrassContext::zeta_series(Complex z) const {
    const int terms = terms_for(z);
    const Complex e = std::exp(Complex(0.0, 2.0 * kPi) * z);
    const Complex einv = 1.0 / e;
    const Complex s2 = std::sin(2.0 * kPi * z);
    const Complex q2 = q_ * q_;
    Complex x = q2;
    Complex sum = 0.0;
    for (int k = 1; k <= terms; ++k) {
        sum += x * s2 / ((1.0 - x * e) * (1.0 - x * einv));
        x *= q2;
    }
    const Complex cot = std::cos(kPi * z) / std::sin(kPi * z);
    return 2.0 * eta1_ * z + kPi * cot + 4.0 * kPi * sum;
}

Complex WeierstrassContext::quasi_period(long long m, long long n) const {
    return 2.0 * static_cast<double>(m) * eta1_ + 2.0 * static_cast<double>(n) * eta3_;
}

Complex WeierstrassContext::sigma(Complex z) const {
    long long m = 0;
    long long n = 0;
    const Complex z0 = curve_.reduce(z, m, n);
    const Complex lam = static_cast<double>(m) + static_cast<double>(n) * tau();
    const long long parity = (m + n + m * n) & 1LL;
    const Complex factor = std::exp(quasi_period(m, n) * (z0 + lam / 2.0));
    return (parity ? -1.0 : 1.0) * factor * sigma_series(z0);
}

Complex WeierstrassContext::zeta(Complex z) const {
    long long m = 0;
    long long n = 0;
    const Complex z0 = curve_.reduce(z, m, n);
    if (std::abs(z0) < 1e-14) throw PoleAtLattice("zeta has a pole at lattice points");
    return zeta_series(z0) + quasi_period(m, n);
}

Complex weierstrass_sigma(const WeierstrassContext& ctx, Complex z) { return ctx.sigma(z); }
Complex weierstrass_zeta(const WeierstrassContext& ctx, Complex z) { return ctx.zeta(z); }

}  // namespace flatdbar
