#pragma once

// Constructive Cech-Dolbeault correspondence on C / <1, tau> for the flat
// bundle of a twist (p, q).
//
// Conventions: a section over U_j is the restriction of a function S on C with
// S(z + lambda) = rho(lambda) S(z), sampled at the lift z_j(x) of x inside the
// rectangle of U_j. Then f_j = t_jk f_k with t_jk(x) = rho(z_j(x) - z_k(x)),
// and delta f has components f_jk = f_j - t_jk f_k.

#include <cstdint>
#include <vector>

#include "flatdbar/elliptic_kernel.hpp"
#include "flatdbar/form_grid.hpp"

namespace flatdbar {

/// Open axis-aligned rectangle (lo1, hi1) x (lo2, hi2) in lattice coordinates.
/// Side lengths must be below 1 so each torus point has at most one lift.
struct Rect {
    double lo1 = 0.0;
    double hi1 = 0.0;
    double lo2 = 0.0;
    double hi2 = 0.0;
};

/// Cosine: r(x) = x - sin(2 pi x) / (2 pi), C^2.
/// Smooth: e(x) / (e(x) + e(1 - x)) with e(x) = exp(-1/x), C^infinity.
enum class Taper { Cosine, Smooth };

struct OpenCover {
    std::vector<Rect> rects;
    double overlap_min = 0.25;
    Taper taper = Taper::Cosine;

    /// split x split rectangles [k/split - ov/2, (k+1)/split + ov/2].
    static OpenCover grid(int split = 2, double overlap = 0.25, Taper taper = Taper::Cosine);

    void validate() const;
};

/// rho_j on the N x N grid: tensor tapers of width overlap_min normalized to sum 1.
std::vector<VectorXd> partition_of_unity(const OpenCover& cover, int n);

enum class PrimitiveSolver { Fourier, Kernel };

/// Everything the cochain operations need for one (cover, curve, twist, N).
class CechComplex {
public:
    CechComplex(OpenCover cover, const WeierstrassContext& ctx, const TwistData& twist, int n);

    int pieces() const { return static_cast<int>(cover_.rects.size()); }
    int resolution() const { return n_; }
    const OpenCover& cover() const { return cover_; }
    const WeierstrassContext& context() const { return *ctx_; }
    const TwistData& twist() const { return twist_; }
    const CVector& c() const { return c_; }

    bool contains(int j, Eigen::Index point) const { return mask_[j][point] != 0; }
    bool overlaps(int j, int k, Eigen::Index point) const { return contains(j, point) && contains(k, point); }

    /// Lift z_j(x) of grid point x into rectangle j (only meaningful on U_j).
    Complex lift(int j, Eigen::Index point) const { return lift_[j](point); }

    /// t_jk at grid point x.
    Complex transition(int j, int k, Eigen::Index point) const;

    const VectorXd& pou(int j) const { return pou_[j]; }
    const VectorXcd& dbar_pou(int j) const { return dbar_pou_[j]; }

    /// sigma_rho(z_j(x)).
    const VectorXcd& frame(int j) const { return frame_[j]; }

    /// max over triple overlaps of |t_jk t_kl - t_jl|.
    double transition_cocycle_defect() const;

private:
    OpenCover cover_;
    const WeierstrassContext* ctx_;
    TwistData twist_;
    CVector c_;
    int n_;
    std::vector<std::vector<char>> mask_;
    std::vector<MatrixXi> lift_index_;  // points x 2
    std::vector<VectorXcd> lift_;
    std::vector<VectorXd> pou_;
    std::vector<VectorXcd> dbar_pou_;
    std::vector<VectorXcd> frame_;
};

/// Degree 0: one grid per piece (values on U_j). Degree 1: pieces()^2 grids,
/// entry j * pieces() + k holding f_jk on U_j cap U_k.
struct Cochain {
    int degree = 0;
    int pieces = 0;
    std::vector<VectorXcd> data;

    VectorXcd& at(int j) { return data[j]; }
    const VectorXcd& at(int j) const { return data[j]; }
    VectorXcd& at(int j, int k) { return data[j * pieces + k]; }
    const VectorXcd& at(int j, int k) const { return data[j * pieces + k]; }
};

Cochain zero_cochain(const CechComplex& cx, int degree);

/// f_j = polynomials of degree <= `degree` in (z_j - centre_j), coefficients
/// uniform in the unit box scaled by 1/k!, plus `offset`.
Cochain random_holomorphic_cochain(const CechComplex& cx, std::uint64_t seed, int degree = 3,
                                   Complex offset = 0.0);

/// f_j = value on every piece.
Cochain constant_cochain(const CechComplex& cx, Complex value);

Cochain delta0(const Cochain& c0, const CechComplex& cx);

/// max over triple overlaps of |f_jl - f_jk - t_jk f_kl|, and over double
/// overlaps of |f_jk + t_jk f_kj|.
double cocycle_defect(const Cochain& c1, const CechComplex& cx);

struct PatchedForm {
    FormGrid v;                  // trivialized global (0,1)-form, v_j / sigma_rho(z_j)
    std::vector<VectorXcd> g;    // g_j = sum_l rho_l f_jl
    double overlap_mismatch = 0; // max |v_j / frame_j - v_k / frame_k| on overlaps
};

/// g_j = sum_l rho_l f_jl, v = dbar g_j patched into one trivialized form.
PatchedForm cocycle_to_form(const Cochain& c1, const CechComplex& cx);

/// f_j = g_j - u_j with dbar u = v solved globally.
Cochain solve_primitive(const Cochain& c1, const CechComplex& cx,
                        PrimitiveSolver solver = PrimitiveSolver::Fourier);

/// max over pieces of sup |a_j - b_j| (degree 0) or sup |a_jk - b_jk| (degree 1).
double sup_distance(const Cochain& a, const Cochain& b, const CechComplex& cx);

/// max over pieces of sup |f|.
double sup_norm(const Cochain& f, const CechComplex& cx);

struct UedaReport {
    double ratio = 0.0;      // d * max_j sup |f_j| / max_jk sup |f_jk|
    double distance = 0.0;   // d(I, F)
    double sup_primitive = 0.0;
    double sup_cocycle = 0.0;
    double k_times_d = 0.0;
    double c1 = 0.0;         // C3' S sqrt(Vol X)
    double c2 = 0.0;         // C3' sqrt(max Vol U_j) + 1
    double bound = 0.0;      // c1 * K d + c2 * d
};

UedaReport ueda_ratio(const Cochain& c1, const CechComplex& cx,
                      PrimitiveSolver solver = PrimitiveSolver::Fourier);

}  // namespace flatdbar
