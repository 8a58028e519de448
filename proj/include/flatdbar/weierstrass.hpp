#pragma once

// Weierstrass sigma and zeta for the lattice <1, tau>, half-periods
// w1 = 1/2, w2 = (-1 - tau)/2, w3 = tau/2 and eta_j = zeta(w_j).
//
// Evaluation uses the q-expansions (q = exp(i pi tau)):
//   sigma(z) = (1/pi) e^{eta1 z^2} sin(pi z) prod_n (1 - q^{2n} e^{2 pi i z})(1 - q^{2n} e^{-2 pi i z}) / (1 - q^{2n})^2
//   zeta(z)  = 2 eta1 z + pi cot(pi z) + 4 pi sum_n q^{2n} sin(2 pi z) / (1 - 2 q^{2n} cos(2 pi z) + q^{4n})
// The `_series` entry points apply these directly; `sigma`/`zeta` first move z
// into the centred period cell with the quasi-periodicity law.

#include "flatdbar/lattice.hpp"
#include "flatdbar/types.hpp"

namespace flatdbar {

/// C / <1, tau>. Requires Im tau >= 0.1; tau is not modular-normalized.
class EllipticCurve {
public:
    static constexpr double kMinImagTau = 0.1;

    explicit EllipticCurve(Complex tau);

    Complex tau() const { return tau_; }
    const Lattice& lattice() const { return lattice_; }

    /// z = t1 + t2 tau.
    Complex point(double t1, double t2) const { return t1 + t2 * tau_; }

    /// z - lambda for the lattice point lambda nearest to z.
    Complex nearest_offset(Complex z) const;

    /// Euclidean distance from z to the nearest lattice point.
    double distance_to_lattice(Complex z) const { return std::abs(nearest_offset(z)); }

    /// z - (m + n tau) in the centred cell, with (m, n).
    Complex reduce(Complex z, long long& m, long long& n) const;

private:
    Complex tau_;
    Lattice lattice_;
};

class WeierstrassContext {
public:
    explicit WeierstrassContext(Complex tau);

    const EllipticCurve& curve() const { return curve_; }
    Complex tau() const { return curve_.tau(); }
    Complex nome() const { return q_; }

    /// Number of q-terms used for arguments in the centred cell.
    int truncation() const { return terms_; }

    /// omega_j, j in {1, 2, 3}.
    Complex omega(int j) const;
    /// eta_j = zeta(omega_j), j in {1, 2, 3}.
    Complex eta(int j) const;

    Complex sigma(Complex z) const;
    Complex zeta(Complex z) const;

    /// The raw q-expansions without argument reduction.
    Complex sigma_series(Complex z) const;
    Complex zeta_series(Complex z) const;

    /// eta(lambda) = 2 m eta1 + 2 n eta3 for lambda = m + n tau.
    Complex quasi_period(long long m, long long n) const;

private:
    int terms_for(Complex z) const;

    EllipticCurve curve_;
    Complex q_;
    Complex eta1_;
    Complex eta2_;
    Complex eta3_;
    int terms_ = 0;
};

Complex weierstrass_sigma(const WeierstrassContext& ctx, Complex z);
Complex weierstrass_zeta(const WeierstrassContext& ctx, Complex z);

}  // namespace flatdbar
