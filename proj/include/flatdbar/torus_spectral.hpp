#pragma once

// The perturbed operator dbar_rho = dbar + sum c_j dzbar_j ^ on flat tori,
// its adjoint and Laplacian, the character spectrum and the estimates built
// on it.

#include <cstdint>
#include <vector>

#include "flatdbar/form_grid.hpp"
#include "flatdbar/lattice.hpp"

namespace flatdbar {

/// dbar_rho : (p,q) -> (p,q+1), spectral in lattice coordinates.
FormGrid apply_dbar_rho(const FormGrid& u, const CVector& c, const Lattice& lat);

/// dbar_rho^* : (p,q) -> (p,q-1), the L^2 adjoint of apply_dbar_rho.
FormGrid apply_dbar_rho_star(const FormGrid& v, const CVector& c, const Lattice& lat);

/// Delta_rho = dbar_rho^* dbar_rho + dbar_rho dbar_rho^*.
FormGrid apply_laplacian_rho(const FormGrid& u, const CVector& c, const Lattice& lat);

/// eta_w = i pi sum_l w_l dual_l, so that dbar exp(2 pi i w.t) = exp(2 pi i w.t) eta_w.
VectorXcd character_form(const VectorXi& w, const Lattice& lat);

struct SpectralReport {
    CVector c;
    double lambda_min = 0.0;
    VectorXi w;
    double k_rho = 0.0;  // infinity when lambda_min = 0
    int cutoff = 0;
};

/// min over |w|_inf <= cutoff of ||eta_w + c||^2. The cutoff doubles (at most
/// three times) while the minimizer sits on the cutoff boundary.
SpectralReport min_eigenvalue(const CVector& c, const Lattice& lat, int cutoff = 2);

/// min over nonzero w of ||eta_w||^2, the first nonzero eigenvalue of Delta on
/// (p,q)-forms of the flat torus (independent of p, q).
double smallest_nonzero_eigenvalue(const Lattice& lat, int cutoff = 2);

/// K_rho = 1 / sqrt(lambda_min).
double k_rho(const CVector& c, const Lattice& lat, int cutoff = 2);

/// Smallest eigenvalue of the second-order centred finite-difference
/// discretization of Delta_rho on functions. d <= 2, N <= 64.
double fd_laplacian_lambda_min(const CVector& c, const Lattice& lat, int n);

/// Dense-eigensolver variant of fd_laplacian_lambda_min; matrix dimension <= 4096.
double fd_laplacian_lambda_min_dense(const CVector& c, const Lattice& lat, int n);

struct GapReport {
    double worst_slack = 0.0;         // min over trials of lhs - rhs, unit-norm alpha
    double worst_slack_strong = 0.0;  // q = 0 form with 4 C_X^2
    double lambda_pq = 0.0;
    double c_x = 0.0;
    double r2 = 0.0;
    bool vacuous = false;  // the bound's bracket is <= 0
    int trials = 0;
};

/// Checks (alpha, Delta_rho alpha) >= (1/2)(lambda_pq - 4 n C(n,q) C_X^2)||alpha||^2
/// on random band-limited alpha with zero harmonic part.
GapReport verify_gap_inequality(const CVector& c, const Lattice& lat, int p, int q, int trials,
                                std::uint64_t seed, int n = 8, int band = 2);

struct CrossTermReport {
    double function_residual = 0.0;  // |<dbar_rho a, dbar_rho b> - conj(b)|c|^2 int a|
    double form_residual = 0.0;      // max over p >= 1 of |<dbar_rho a, dbar_rho b>| on (p,0)
    int trials = 0;
};

CrossTermReport verify_cross_term(const CVector& c, const Lattice& lat, int trials,
                                  std::uint64_t seed, int n = 8, int band = 2);

/// || dbar_rho (dz_1 ^ dzbar_2) || on a d = 2 torus with c = (0, eps), or
/// c = (eps, 0) when `first_coordinate` is set.
double counterexample_11(const Lattice& lat, double eps, bool first_coordinate = false);

/// Smallest singular value of dbar_rho on (p,0) characters with |w|_inf <= cutoff.
double p0_kernel_gap(const CVector& c, const Lattice& lat, int p, int cutoff = 2);

struct SweepRow {
    CVector c;
    double dist = 0.0;
    double lambda_min = 0.0;
    double k_rho = 0.0;
    double product = 0.0;
    bool trivial = false;
};

/// Cell-centred sampling of the fundamental domain: Lambda_c coefficients
/// a_k = -1/2 + (i + 1/2) / points, reduced into the Voronoi cell.
struct GridSpec {
    int points = 10;
};

std::vector<SweepRow> sweep_pic0(const Lattice& lat, const GridSpec& grid, int cutoff = 2);

/// Rows along c = s * direction for the given radii.
std::vector<SweepRow> sweep_ray(const Lattice& lat, const VectorXcd& direction,
                                const std::vector<double>& radii, int cutoff = 2);

/// Least-squares slope of log k_rho against log dist over non-trivial rows.
double loglog_slope(const std::vector<SweepRow>& rows);

/// Solves dbar u + c u = v for periodic u on a d = 1 torus by Fourier division.
VectorXcd solve_dbar_fourier(const VectorXcd& v, const CVector& c, const Lattice& lat, int n);

}  // namespace flatdbar
