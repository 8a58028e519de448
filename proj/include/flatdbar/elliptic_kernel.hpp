#pragma once

// Integral solver for dbar u = v on sections of the flat bundle with
// rho(1) = e^{2 pi i p}, rho(tau) = e^{2 pi i q} over C / <1, tau>, using the
// kernel k(w) = e^{A w} sigma(w + B) / sigma(w), A = -2(p eta3 - q eta1),
// B = p tau - q:
//   u(z) = 1 / (pi sigma(B)) * int k(z - xi) v(xi) dA(xi).
//
// Grids are N x N samples at z = t1 + t2 tau, t = (i1, i2) / N, point index
// i1 + N i2, values in the section frame unless named `_trivialized`.

#include <cstdint>
#include <vector>

#include "flatdbar/lattice.hpp"
#include "flatdbar/weierstrass.hpp"

namespace flatdbar {

struct TwistData {
    double p = 0.0;
    double q = 0.0;
    Complex a;
    Complex b;
};

/// (p, q) in [0,1)^2 \ {(0,0)}.
TwistData make_twist(const WeierstrassContext& ctx, double p, double q);

/// c-coordinate of the twist, reduced into the Voronoi cell of Lambda_c.
CVector twist_c(const WeierstrassContext& ctx, const TwistData& twist);

/// e^{A(z - xi)} sigma(z - xi + B) / sigma(z - xi).
Complex kernel_eval(const WeierstrassContext& ctx, const TwistData& twist, Complex z, Complex xi);

/// k(w) / sigma_rho(w), doubly periodic in w.
Complex kernel_trivialized(const WeierstrassContext& ctx, const TwistData& twist, const CVector& c,
                           Complex w);

/// sigma_rho at the N x N grid points.
VectorXcd section_frame(const WeierstrassContext& ctx, const CVector& c, int n);

/// Fourier multiplier of the discretized integral operator (including the
/// 1 / (pi sigma(B)) prefactor): trapezoid rule off a disc of radius 2/N around
/// the pole, Taylor-moment polar quadrature inside it.
VectorXcd kernel_multiplier(const WeierstrassContext& ctx, const TwistData& twist, int n);

/// u from samples f of a section, both in the section frame.
VectorXcd solve_dbar_kernel(const WeierstrassContext& ctx, const TwistData& twist,
                            const VectorXcd& f, int n);

/// Same map on trivialized (periodic) data.
VectorXcd solve_dbar_kernel_trivialized(const WeierstrassContext& ctx, const TwistData& twist,
                                        const VectorXcd& v_triv, int n);

/// ||dbar u - v|| / ||v|| for section-frame samples, via spectral dbar_rho.
double dbar_residual(const WeierstrassContext& ctx, const TwistData& twist, const VectorXcd& u,
                     const VectorXcd& f, int n);

/// L^2 norm over the period cell of N x N samples.
double grid_l2(const WeierstrassContext& ctx, const VectorXcd& u, int n);

/// int over the cell of 1 / d(w), d the distance to the lattice (exact).
double inverse_distance_l1(const EllipticCurve& curve);

/// || k / (pi sigma(B)) ||_{L^1} over the period cell on an N x N grid.
double young_l1_bound(const WeierstrassContext& ctx, const TwistData& twist, int n);

struct TheoremConstant {
    double m = 0.0;            // sup of d(z) d(B) |k(z) / sigma(B)|
    double inv_dist_l1 = 0.0;  // ||1/d||_{L^1}
    double k = 0.0;            // m * inv_dist_l1
};

/// M sampled on node grids of `twist_points`^2 twists and `z_points`^2 points,
/// skipping the trivial twist and z = 0.
TheoremConstant theorem_constant(const WeierstrassContext& ctx, int twist_points = 16,
                                 int z_points = 16);

/// Random smooth periodic data: Fourier modes |w|_inf <= band with amplitudes
/// decaying like 1 / (1 + |w|^2). Deterministic given `seed`.
VectorXcd random_smooth_periodic(int n, int band, std::uint64_t seed);

}  // namespace flatdbar
