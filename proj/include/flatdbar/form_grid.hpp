#pragma once

// Sampled (p,q)-forms on the flat torus C^d / Lambda in lattice coordinates,
// plus the FFT and Fourier-symbol plumbing shared by the spectral operators.

#include <cstdint>
#include <vector>

#include "flatdbar/lattice.hpp"
#include "flatdbar/types.hpp"

namespace flatdbar {

/// Strictly increasing index set, stored as a bitmask over {0..d-1}.
using Subset = std::uint32_t;

/// All k-element subsets of {0..d-1}, lexicographic in their sorted elements.
std::vector<Subset> subsets(int d, int k);

int subset_size(Subset s);

/// #{j in s : j < m}.
int count_below(Subset s, int m);

long long binomial(int n, int k);

/// Integer frequency of FFT bin i on an N-point axis: i if i < N/2, else i - N.
inline int frequency(int i, int n) { return i < n / 2 ? i : i - n; }

/// A (p,q)-form sampled on the N^{2d} grid t in [0,1)^{2d}, t_k = i_k / N.
/// Point index L = sum_k i_k N^k. Column c of `data` holds the coefficient of
/// dz_I ^ dzbar_J in the pointwise-orthonormal frame, c = iI * |J-list| + iJ.
class FormGrid {
public:
    FormGrid() = default;
    FormGrid(int d, int p, int q, int n);

    int dim() const { return d_; }
    int p() const { return p_; }
    int q() const { return q_; }
    int resolution() const { return n_; }
    Eigen::Index points() const { return data_.rows(); }
    Eigen::Index components() const { return data_.cols(); }

    const std::vector<Subset>& holomorphic_indices() const { return ilist_; }
    const std::vector<Subset>& antiholomorphic_indices() const { return jlist_; }

    /// Column index of dz_I ^ dzbar_J, or -1 if absent.
    int component(Subset i, Subset j) const;

    MatrixXcd& data() { return data_; }
    const MatrixXcd& data() const { return data_; }
    auto column(Subset i, Subset j) { return data_.col(component(i, j)); }
    auto column(Subset i, Subset j) const { return data_.col(component(i, j)); }

    /// Lattice coordinates of grid point L.
    VectorXd coordinates(Eigen::Index point) const;

    FormGrid& operator+=(const FormGrid& other);
    FormGrid& operator-=(const FormGrid& other);
    FormGrid& operator*=(Complex s);

private:
    int d_ = 0;
    int p_ = 0;
    int q_ = 0;
    int n_ = 0;
    std::vector<Subset> ilist_;
    std::vector<Subset> jlist_;
    MatrixXcd data_;
};

FormGrid operator+(FormGrid a, const FormGrid& b);
FormGrid operator-(FormGrid a, const FormGrid& b);
FormGrid operator*(Complex s, FormGrid a);

/// L^2 inner product Vol / #points * sum u conj(v).
Complex inner(const FormGrid& u, const FormGrid& v, const Lattice& lat);
double norm(const FormGrid& u, const Lattice& lat);

/// In-place multidimensional FFT of an N^{dims} array; the inverse is scaled by N^{-dims}.
void fft_forward(VectorXcd& a, int n, int dims);
void fft_inverse(VectorXcd& a, int n, int dims);

/// Fourier symbols on an N-point grid of the torus of `lat`.
/// dbar(m, L) is the symbol of d/dzbar_m at bin L (eta_w,m = i pi sum_l w_l dual_{l,m}),
/// del(m, L) the symbol of d/dz_m.
struct FourierSymbols {
    MatrixXcd dbar;  // points x d
    MatrixXcd del;   // points x d
    MatrixXi freq;   // points x 2d
};

FourierSymbols fourier_symbols(const Lattice& lat, int n);

/// Samples of the character exp(2 pi i w.t) on the grid.
VectorXcd character_samples(const VectorXi& w, int d, int n);

/// Random form whose Fourier coefficients are supported on |w|_inf <= band,
/// optionally with the w = 0 mode removed. Deterministic given `seed`.
FormGrid random_band_limited(int d, int p, int q, int n, int band, bool zero_mean,
                             std::uint64_t seed);

}  // namespace flatdbar
