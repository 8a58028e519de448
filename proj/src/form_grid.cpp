#include "flatdbar/form_grid.hpp"

#include <bit>
#include <random>

#include <unsupported/Eigen/FFT>

namespace flatdbar {

std::vector<Subset> subsets(int d, int k) {
    std::vector<Subset> out;
    if (k < 0 || k > d) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        Subset s = 0;
        for (int i : idx) s |= Subset{1} << i;
        out.push_back(s);
        int i = k - 1;
        while (i >= 0 && idx[i] == d - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

int subset_size(Subset s) { return std::popcount(s); }

int count_below(Subset s, int m) { return std::popcount(s & ((Subset{1} << m) - 1)); }

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

namespace {

Eigen::Index power(int n, int e) {
    Eigen::Index r = 1;
    for (int i = 0; i < e; ++i) r *= n;
    return r;
}

}  // namespace

FormGrid::FormGrid(int d, int p, int q, int n) : d_(d), p_(p), q_(q), n_(n) {
    if (d < 1) throw ValidationError("form dimension must be positive");
    if (p < 0 || p > d || q < 0 || q > d) throw BidegreeError("bidegree out of range");
    if (n < 2) throw ValidationError("grid resolution must be at least 2");
    ilist_ = subsets(d, p);
    jlist_ = subsets(d, q);
    data_ = MatrixXcd::Zero(power(n, 2 * d), static_cast<Eigen::Index>(ilist_.size() * jlist_.size()));
}

int FormGrid::component(Subset i, Subset j) const {
    int a = -1;
    int b = -1;
    for (std::size_t k = 0; k < ilist_.size(); ++k)
        if (ilist_[k] == i) a = static_cast<int>(k);
    for (std::size_t k = 0; k < jlist_.size(); ++k)
        if (jlist_[k] == j) b = static_cast<int>(k);
    if (a < 0 || b < 0) return -1;
    return a * static_cast<int>(jlist_.size()) + b;
}

VectorXd FormGrid::coordinates(Eigen::Index point) const {
    VectorXd t(2 * d_);
    for (int k = 0; k < 2 * d_; ++k) {
        t(k) = static_cast<double>(point % n_) / n_;
        point /= n_;
    }
    return t;
}

namespace {

void require_same_shape(const FormGrid& a, const FormGrid& b) {
    if (a.dim() != b.dim() || a.p() != b.p() || a.q() != b.q() || a.resolution() != b.resolution())
        throw DimensionMismatch("form grids have different shapes");
}

}  // namespace

FormGrid& FormGrid::operator+=(const FormGrid& other) {
    require_same_shape(*this, other);
    data_ += other.data_;
    return *this;
}

FormGrid& FormGrid::operator-=(const FormGrid& other) {
    require_same_shape(*this, other);
    data_ -= other.data_;
    return *this;
}

FormGrid& FormGrid::operator*=(Complex s) {
    data_ *= s;
    return *this;
}

FormGrid operator+(FormGrid a, const FormGrid& b) { return a += b; }
FormGrid operator-(FormGrid a, const FormGrid& b) { return a -= b; }
FormGrid operator*(Complex s, FormGrid a) { return a *= s; }

Complex inner(const FormGrid& u, const FormGrid& v, const Lattice& lat) {
    require_same_shape(u, v);
    if (u.dim() != lat.dim()) throw DimensionMismatch("form and lattice dimensions differ");
    const Complex s = (u.data().array() * v.data().array().conjugate()).sum();
    return s * (lat.volume() / static_cast<double>(u.points()));
}

double norm(const FormGrid& u, const Lattice& lat) { return std::sqrt(inner(u, u, lat).real()); }

namespace {

void fft_axes(VectorXcd& a, int n, int dims, bool inverse) {
    Eigen::FFT<double> fft;
    std::vector<Complex> in(n);
    std::vector<Complex> out(n);
    const Eigen::Index total = a.size();
    Eigen::Index stride = 1;
    for (int axis = 0; axis < dims; ++axis) {
        const Eigen::Index block = stride * n;
        for (Eigen::Index outer = 0; outer < total; outer += block) {
            for (Eigen::Index inner_i = 0; inner_i < stride; ++inner_i) {
                const Eigen::Index base = outer + inner_i;
                for (int i = 0; i < n; ++i) in[i] = a(base + i * stride);
                if (inverse)
                    fft.inv(out, in);
                else
                    fft.fwd(out, in);
                for (int i = 0; i < n; ++i) a(base + i * stride) = out[i];
            }
        }
        stride = block;
    }
}

}  // namespace

void fft_forward(VectorXcd& a, int n, int dims) { fft_axes(a, n, dims, false); }
void fft_inverse(VectorXcd& a, int n, int dims) { fft_axes(a, n, dims, true); }

FourierSymbols fourier_symbols(const Lattice& lat, int n) {
    const int d = lat.dim();
    const int r = lat.rank();
    const Eigen::Index pts = power(n, r);
    FourierSymbols s{MatrixXcd(pts, d), MatrixXcd(pts, d), MatrixXi(pts, r)};
    VectorXd w(r);
    for (Eigen::Index L = 0; L < pts; ++L) {
        Eigen::Index rem = L;
        for (int k = 0; k < r; ++k) {
            const int i = static_cast<int>(rem % n);
            rem /= n;
            s.freq(L, k) = frequency(i, n);
            w(k) = s.freq(L, k);
        }
        const VectorXcd wc = w.cast<Complex>();
        s.dbar.row(L) = (Complex(0, kPi) * (lat.dual() * wc)).transpose();
        s.del.row(L) = (Complex(0, kPi) * (lat.dual().conjugate() * wc)).transpose();
    }
    return s;
}

VectorXcd character_samples(const VectorXi& w, int d, int n) {
    const int r = 2 * d;
    if (w.size() != r) throw DimensionMismatch("frequency has wrong rank");
    const Eigen::Index pts = power(n, r);
    VectorXcd out(pts);
    for (Eigen::Index L = 0; L < pts; ++L) {
        Eigen::Index rem = L;
        long long phase = 0;
        for (int k = 0; k < r; ++k) {
            phase += static_cast<long long>(w(k)) * (rem % n);
            rem /= n;
        }
        phase %= n;
        out(L) = std::polar(1.0, 2.0 * kPi * static_cast<double>(phase) / n);
    }
    return out;
}

FormGrid random_band_limited(int d, int p, int q, int n, int band, bool zero_mean,
                             std::uint64_t seed) {
    if (2 * band >= n) throw ValidationError("band limit must be below the Nyquist frequency");
    FormGrid u(d, p, q, n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int r = 2 * d;
    const Eigen::Index pts = u.points();
    for (Eigen::Index col = 0; col < u.components(); ++col) {
        VectorXcd hat = VectorXcd::Zero(pts);
        for (Eigen::Index L = 0; L < pts; ++L) {
            Eigen::Index rem = L;
            bool inside = true;
            bool zero = true;
            for (int k = 0; k < r; ++k) {
                const int w = frequency(static_cast<int>(rem % n), n);
                rem /= n;
                if (std::abs(w) > band) inside = false;
                if (w != 0) zero = false;
            }
            if (!inside || (zero && zero_mean)) continue;
            const double re = unif(rng);
            const double im = unif(rng);
            hat(L) = Complex(re, im);
        }
        fft_inverse(hat, n, r);
        u.data().col(col) = hat;
    }
    return u;
}

}  // namespace flatdbar
