#include "flatdbar/torus_spectral.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace flatdbar {

namespace {

constexpr int kMaxDoublings = 3;

std::vector<VectorXcd> transform_columns(const FormGrid& u) {
    const int r = 2 * u.dim();
    std::vector<VectorXcd> hats;
    hats.reserve(u.components());
    for (Eigen::Index col = 0; col < u.components(); ++col) {
        VectorXcd h = u.data().col(col);
        fft_forward(h, u.resolution(), r);
        hats.push_back(std::move(h));
    }
    return hats;
}

void inverse_columns(std::vector<VectorXcd>& hats, FormGrid& out) {
    const int r = 2 * out.dim();
    for (Eigen::Index col = 0; col < out.components(); ++col) {
        fft_inverse(hats[col], out.resolution(), r);
        out.data().col(col) = hats[col];
    }
}

void require_compatible(const FormGrid& u, const CVector& c, const Lattice& lat) {
    if (u.dim() != lat.dim() || c.dim() != lat.dim())
        throw DimensionMismatch("form, twist and lattice dimensions differ");
    if (u.resolution() < 4) throw ValidationError("grid resolution must be at least 4");
}

// +-1 for dzbar_m ^ (dz_I ^ dzbar_J) = sign * dz_I ^ dzbar_{J+m}.
double wedge_sign(int p, Subset j, int m) {
    const int e = p + count_below(j, m);
    return (e % 2 == 0) ? 1.0 : -1.0;
}

// Iterates w over the box [-cutoff, cutoff]^r.
template <typename F>
void for_each_frequency(int r, int cutoff, F&& f) {
    VectorXi w = VectorXi::Constant(r, -cutoff);
    for (;;) {
        f(w);
        int k = 0;
        while (k < r && w(k) == cutoff) w(k++) = -cutoff;
        if (k == r) break;
        ++w(k);
    }
}

bool on_boundary(const VectorXi& w, int cutoff) { return w.cwiseAbs().maxCoeff() == cutoff; }

// Fincke-Pohst enumeration of all w in Z^r with ||eta_w + c||^2 <= radius2.
// Returns the true minimum over that ellipsoid (w = 0 skipped when
// exclude_zero), or +inf if it is empty.
double ellipsoid_minimum(const Lattice& lat, const VectorXcd& c, double radius2, bool exclude_zero) {
    const int r = lat.rank();
    Eigen::MatrixXd b(r, r);
    for (int k = 0; k < r; ++k) {
        VectorXi e = VectorXi::Zero(r);
        e(k) = 1;
        const VectorXcd col = character_form(e, lat);
        b.col(k) << col.real(), col.imag();
    }
    Eigen::VectorXd t(r);
    t << -c.real(), -c.imag();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    const Eigen::MatrixXd rr = qr.matrixQR().triangularView<Eigen::Upper>();
    const Eigen::VectorXd y = qr.householderQ().transpose() * t;

    constexpr long long kMaxNodes = 50'000'000;
    long long nodes = 0;
    double best = std::numeric_limits<double>::infinity();
    VectorXi w = VectorXi::Zero(r);
    const double bound = radius2 * (1.0 + 1e-12) + 1e-300;
    // partial = sum over rows > k of (R w - y)_row^2
    const std::function<void(int, double)> descend = [&](int k, double partial) {
        if (++nodes > kMaxNodes) throw ResourceLimit("lattice enumeration exceeded its node budget");
        double shift = y(k);
        for (int j = k + 1; j < r; ++j) shift -= rr(k, j) * w(j);
        const double centre = shift / rr(k, k);
        const double width = std::sqrt(std::max(0.0, bound - partial)) / std::abs(rr(k, k));
        const auto lo = static_cast<int>(std::ceil(centre - width));
        const auto hi = static_cast<int>(std::floor(centre + width));
        for (int v = lo; v <= hi; ++v) {
            const double diff = rr(k, k) * v - shift;
            const double next = partial + diff * diff;
            if (next > bound) continue;
            w(k) = v;
            if (k > 0) {
                descend(k - 1, next);
            } else if (!(exclude_zero && w.isZero())) {
                best = std::min(best, next);
            }
        }
        w(k) = 0;
    };
    descend(r - 1, 0.0);
    return best;
}

// True when some frequency outside the box beats the box minimum.
bool beaten_outside(const Lattice& lat, const VectorXcd& c, double box_best, bool exclude_zero) {
    return ellipsoid_minimum(lat, c, box_best, exclude_zero) < box_best * (1.0 - 1e-12);
}

}  // namespace

FormGrid apply_dbar_rho(const FormGrid& u, const CVector& c, const Lattice& lat) {
    require_compatible(u, c, lat);
    const int d = u.dim();
    if (u.q() >= d) throw BidegreeOverflow("dbar_rho of a (p,d)-form");
    FormGrid out(d, u.p(), u.q() + 1, u.resolution());
    const FourierSymbols s = fourier_symbols(lat, u.resolution());
    const auto hats = transform_columns(u);
    std::vector<VectorXcd> res(out.components(), VectorXcd::Zero(out.points()));
    for (Subset i : u.holomorphic_indices()) {
        for (Subset j : u.antiholomorphic_indices()) {
            const VectorXcd& h = hats[u.component(i, j)];
            for (int m = 0; m < d; ++m) {
                if (j & (Subset{1} << m)) continue;
                const int target = out.component(i, j | (Subset{1} << m));
                const double sign = wedge_sign(u.p(), j, m);
                res[target].array() +=
                    sign * (s.dbar.col(m).array() + c.c(m)) * h.array();
            }
        }
    }
    inverse_columns(res, out);
    return out;
}

FormGrid apply_dbar_rho_star(const FormGrid& v, const CVector& c, const Lattice& lat) {
    require_compatible(v, c, lat);
    const int d = v.dim();
    if (v.q() < 1) throw BidegreeUnderflow("dbar_rho^* of a (p,0)-form");
    FormGrid out(d, v.p(), v.q() - 1, v.resolution());
    const FourierSymbols s = fourier_symbols(lat, v.resolution());
    const auto hats = transform_columns(v);
    std::vector<VectorXcd> res(out.components(), VectorXcd::Zero(out.points()));
    for (Subset i : out.holomorphic_indices()) {
        for (Subset j : out.antiholomorphic_indices()) {
            const int target = out.component(i, j);
            for (int m = 0; m < d; ++m) {
                if (j & (Subset{1} << m)) continue;
                const VectorXcd& h = hats[v.component(i, j | (Subset{1} << m))];
                const double sign = wedge_sign(v.p(), j, m);
                res[target].array() +=
                    sign * (s.dbar.col(m).array() + c.c(m)).conjugate() * h.array();
            }
        }
    }
    inverse_columns(res, out);
    return out;
}

FormGrid apply_laplacian_rho(const FormGrid& u, const CVector& c, const Lattice& lat) {
    FormGrid out(u.dim(), u.p(), u.q(), u.resolution());
    if (u.q() < u.dim()) out += apply_dbar_rho_star(apply_dbar_rho(u, c, lat), c, lat);
    if (u.q() > 0) out += apply_dbar_rho(apply_dbar_rho_star(u, c, lat), c, lat);
    return out;
}

VectorXcd character_form(const VectorXi& w, const Lattice& lat) {
    if (w.size() != lat.rank()) throw DimensionMismatch("frequency has wrong rank");
    return Complex(0, kPi) * (lat.dual() * w.cast<Complex>());
}

SpectralReport min_eigenvalue(const CVector& c, const Lattice& lat, int cutoff) {
    if (c.dim() != lat.dim()) throw DimensionMismatch("twist and lattice dimensions differ");
    if (cutoff < 1) throw ValidationError("frequency cutoff must be positive");
    for (int attempt = 0; attempt <= kMaxDoublings; ++attempt, cutoff *= 2) {
        double best = std::numeric_limits<double>::infinity();
        VectorXi arg;
        for_each_frequency(lat.rank(), cutoff, [&](const VectorXi& w) {
            const double val = (character_form(w, lat) + c.c).squaredNorm();
            if (val < best) {
                best = val;
                arg = w;
            }
        });
        if (on_boundary(arg, cutoff) || beaten_outside(lat, c.c, best, false)) continue;
        const double k = best > 0.0 ? 1.0 / std::sqrt(best) : std::numeric_limits<double>::infinity();
        return {c, best, arg, k, cutoff};
    }
    throw CutoffTooSmall("eigenvalue minimizer outside the frequency cutoff after 3 doublings");
}

double smallest_nonzero_eigenvalue(const Lattice& lat, int cutoff) {
    if (cutoff < 1) throw ValidationError("frequency cutoff must be positive");
    for (int attempt = 0; attempt <= kMaxDoublings; ++attempt, cutoff *= 2) {
        double best = std::numeric_limits<double>::infinity();
        VectorXi arg;
        for_each_frequency(lat.rank(), cutoff, [&](const VectorXi& w) {
            if (w.isZero()) return;
            const double val = character_form(w, lat).squaredNorm();
            if (val < best) {
                best = val;
                arg = w;
            }
        });
        if (!on_boundary(arg, cutoff) && !beaten_outside(lat, VectorXcd::Zero(lat.dim()), best, true)) return best;
    }
    throw CutoffTooSmall("first nonzero eigenvalue outside the frequency cutoff after 3 doublings");
}

double k_rho(const CVector& c, const Lattice& lat, int cutoff) {
    if (c.norm() < 1e-14) throw TrivialBundle("K_rho is undefined for the trivial bundle");
    const SpectralReport rep = min_eigenvalue(c, lat, cutoff);
    if (!(rep.lambda_min > 0.0)) throw TrivialBundle("c lies on Lambda_c: the bundle is trivial");
    return rep.k_rho;
}

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;

SparseC fd_laplacian_matrix(const CVector& c, const Lattice& lat, int n) {
    const int d = lat.dim();
    const int r = lat.rank();
    if (c.dim() != d) throw DimensionMismatch("twist and lattice dimensions differ");
    if (d > 2) throw ResourceLimit("finite-difference oracle supports d <= 2");
    if (n > 64) throw ResourceLimit("finite-difference oracle supports N <= 64");
    if (n < 4) throw ValidationError("finite-difference grid needs N >= 4");
    Eigen::Index pts = 1;
    for (int k = 0; k < r; ++k) pts *= n;
    if (pts > 65536) throw ResourceLimit("finite-difference grid exceeds 65536 points");

    std::vector<Eigen::Index> stride(r);
    stride[0] = 1;
    for (int k = 1; k < r; ++k) stride[k] = stride[k - 1] * n;

    SparseC lap(pts, pts);
    for (int m = 0; m < d; ++m) {
        // B_m = sum_k (dual_{k,m} / 2) delta_k + c_m, delta_k = (N/2)(shift_+ - shift_-).
        std::vector<Eigen::Triplet<Complex>> trip;
        trip.reserve(pts * (2 * r + 1));
        for (Eigen::Index L = 0; L < pts; ++L) {
            trip.emplace_back(L, L, c.c(m));
            for (int k = 0; k < r; ++k) {
                const Complex coef = 0.5 * lat.dual()(m, k) * (0.5 * n);
                const Eigen::Index ik = (L / stride[k]) % n;
                const Eigen::Index up = L + (((ik + 1) % n) - ik) * stride[k];
                const Eigen::Index dn = L + (((ik + n - 1) % n) - ik) * stride[k];
                trip.emplace_back(L, up, coef);
                trip.emplace_back(L, dn, -coef);
            }
        }
        SparseC b(pts, pts);
        b.setFromTriplets(trip.begin(), trip.end());
        lap += SparseC(b.adjoint()) * b;
    }
    lap.makeCompressed();
    return lap;
}

}  // namespace

double fd_laplacian_lambda_min_dense(const CVector& c, const Lattice& lat, int n) {
    const SparseC lap = fd_laplacian_matrix(c, lat, n);
    if (lap.rows() > 4096) throw ResourceLimit("dense finite-difference eigensolve exceeds 4096 unknowns");
    const MatrixXcd dense(lap);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(dense, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolve failed");
    return std::max(0.0, es.eigenvalues()(0));
}

double fd_laplacian_lambda_min(const CVector& c, const Lattice& lat, int n) {
    const SparseC lap = fd_laplacian_matrix(c, lat, n);
    const Eigen::Index dim = lap.rows();
    if (dim <= 1024) return fd_laplacian_lambda_min_dense(c, lat, n);

    // Shift-invert block subspace iteration with Rayleigh-Ritz. The shift starts
    // below zero and moves to 0.9 of the Ritz value after 8 sweeps; Ritz values
    // are upper bounds, so this stays below the minimum once they are within 10%.
    const auto factor = [&](double shift) {
        SparseC shifted = lap;
        for (Eigen::Index i = 0; i < dim; ++i) shifted.coeffRef(i, i) -= shift;
        auto ldlt = std::make_unique<Eigen::SimplicialLDLT<SparseC>>(shifted);
        if (ldlt->info() != Eigen::Success) throw NumericalError("finite-difference factorization failed");
        return ldlt;
    };
    double shift = -1e-2;
    auto ldlt = factor(shift);

    constexpr int kBlock = 8;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    MatrixXcd x(dim, kBlock);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (int j = 0; j < kBlock; ++j) x(i, j) = Complex(unif(rng), unif(rng));

    for (int iter = 0; iter < 500; ++iter) {
        const MatrixXcd y = ldlt->solve(x);
        Eigen::HouseholderQR<MatrixXcd> qr(y);
        const MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(dim, kBlock);
        const MatrixXcd h = q.adjoint() * (lap * q);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
        x = q * es.eigenvectors();
        const double lam = es.eigenvalues()(0);
        // Hermitian: |lam - lambda_true| <= residual norm.
        const double resid = (lap * x.col(0) - lam * x.col(0)).norm();
        if (resid <= 1e-10 * std::max(1.0, std::abs(lam))) return std::max(0.0, lam);
        const double target = 0.9 * lam;
        if (iter >= 8 && target > 0.05 && std::abs(target - shift) > 0.2 * std::abs(shift)) {
            shift = target;
            ldlt = factor(shift);
        }
    }
    throw NumericalError("finite-difference eigensolve did not converge");
}

GapReport verify_gap_inequality(const CVector& c, const Lattice& lat, int p, int q, int trials,
                                std::uint64_t seed, int n, int band) {
    const int d = lat.dim();
    GapReport rep;
    rep.lambda_pq = smallest_nonzero_eigenvalue(lat);
    rep.c_x = c.c.cwiseAbs().sum();
    rep.r2 = static_cast<double>(d * binomial(d, q));
    const double rhs_coeff = 0.5 * (rep.lambda_pq - 4.0 * rep.r2 * rep.c_x * rep.c_x);
    const double rhs_strong = 0.5 * (rep.lambda_pq - 4.0 * rep.c_x * rep.c_x);
    rep.vacuous = rhs_coeff <= 0.0;
    rep.trials = trials;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    rep.worst_slack_strong = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        FormGrid a = random_band_limited(d, p, q, n, band, true, seed + static_cast<std::uint64_t>(t));
        a *= Complex(1.0 / norm(a, lat), 0.0);
        const double lhs = inner(a, apply_laplacian_rho(a, c, lat), lat).real();
        rep.worst_slack = std::min(rep.worst_slack, lhs - rhs_coeff);
        if (q == 0) rep.worst_slack_strong = std::min(rep.worst_slack_strong, lhs - rhs_strong);
    }
    if (q != 0) rep.worst_slack_strong = rep.worst_slack;
    return rep;
}

CrossTermReport verify_cross_term(const CVector& c, const Lattice& lat, int trials,
                                  std::uint64_t seed, int n, int band) {
    const int d = lat.dim();
    CrossTermReport rep;
    rep.trials = trials;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = seed + 1000003ULL * static_cast<std::uint64_t>(t + 1);
        FormGrid a = random_band_limited(d, 0, 0, n, band, true, s);
        a *= Complex(1.0 / norm(a, lat), 0.0);
        const Complex beta(unif(rng), unif(rng));
        FormGrid b(d, 0, 0, n);
        b.data().setConstant(beta);
        const Complex lhs = inner(apply_dbar_rho(a, c, lat), apply_dbar_rho(b, c, lat), lat);
        const Complex integral = a.data().col(0).mean() * lat.volume();
        const Complex rhs = std::conj(beta) * c.c.squaredNorm() * integral;
        rep.function_residual = std::max(rep.function_residual, std::abs(lhs - rhs));

        for (int p = 1; p <= d; ++p) {
            FormGrid ap = random_band_limited(d, p, 0, n, band, true, s + static_cast<std::uint64_t>(p));
            ap *= Complex(1.0 / norm(ap, lat), 0.0);
            FormGrid bp(d, p, 0, n);
            for (Eigen::Index col = 0; col < bp.components(); ++col)
                bp.data().col(col).setConstant(Complex(unif(rng), unif(rng)));
            const Complex cross = inner(apply_dbar_rho(ap, c, lat), apply_dbar_rho(bp, c, lat), lat);
            rep.form_residual = std::max(rep.form_residual, std::abs(cross));
        }
    }
    return rep;
}

double counterexample_11(const Lattice& lat, double eps, bool first_coordinate) {
    if (lat.dim() != 2) throw DimensionMismatch("the (1,1)-form counterexample needs d = 2");
    FormGrid u(2, 1, 1, 4);
    u.column(0b01, 0b10).setOnes();
    CVector c{VectorXcd::Zero(2), false};
    c.c(first_coordinate ? 0 : 1) = eps;
    return norm(apply_dbar_rho(u, c, lat), lat);
}

double p0_kernel_gap(const CVector& c, const Lattice& lat, int p, int cutoff) {
    const int d = lat.dim();
    if (c.dim() != d) throw DimensionMismatch("twist and lattice dimensions differ");
    if (p < 0 || p > d) throw BidegreeError("p out of range");
    if (c.norm() < 1e-14) throw TrivialBundle("holomorphic (p,0)-forms exist on the trivial bundle");
    if (cutoff < 1) throw ValidationError("frequency cutoff must be positive");

    const auto ilist = subsets(d, p);
    const auto jlist = subsets(d, 1);
    const Eigen::Index cols = static_cast<Eigen::Index>(ilist.size());
    const Eigen::Index rows = cols * static_cast<Eigen::Index>(jlist.size());
    for (int attempt = 0; attempt <= kMaxDoublings; ++attempt, cutoff *= 2) {
        double best = std::numeric_limits<double>::infinity();
        VectorXi arg;
        for_each_frequency(lat.rank(), cutoff, [&](const VectorXi& w) {
            const VectorXcd sym = character_form(w, lat) + c.c;
            MatrixXcd mat = MatrixXcd::Zero(rows, cols);
            for (Eigen::Index a = 0; a < cols; ++a)
                for (int m = 0; m < d; ++m)
                    mat(a * static_cast<Eigen::Index>(jlist.size()) + m, a) = wedge_sign(p, 0, m) * sym(m);
            Eigen::JacobiSVD<MatrixXcd> svd(mat);
            const double smin = svd.singularValues()(cols - 1);
            if (smin < best) {
                best = smin;
                arg = w;
            }
        });
        // Per character the gap is ||eta_w + c||, so the outside check is the function one.
        if (!on_boundary(arg, cutoff) && !beaten_outside(lat, c.c, best * best, false)) return best;
    }
    throw CutoffTooSmall("kernel gap minimizer outside the frequency cutoff after 3 doublings");
}

namespace {

SweepRow make_row(const CVector& c, const Lattice& lat, int cutoff) {
    SweepRow row;
    row.c = c;
    row.dist = c.norm();
    if (row.dist < 1e-14) {
        row.trivial = true;
        return row;
    }
    const SpectralReport rep = min_eigenvalue(c, lat, cutoff);
    row.lambda_min = rep.lambda_min;
    row.k_rho = rep.k_rho;
    row.product = row.k_rho * row.dist;
    return row;
}

}  // namespace

std::vector<SweepRow> sweep_pic0(const Lattice& lat, const GridSpec& grid, int cutoff) {
    if (grid.points < 1) throw ValidationError("sweep grid needs at least one point per axis");
    const int r = lat.rank();
    std::vector<SweepRow> rows;
    VectorXi idx = VectorXi::Zero(r);
    for (;;) {
        VectorXd x = VectorXd::Zero(r);
        for (int k = 0; k < r; ++k) {
            const double a = -0.5 + (idx(k) + 0.5) / grid.points;
            x += a * lat.lambda_c_real().col(k);
        }
        rows.push_back(make_row(reduce(complexify(x), lat), lat, cutoff));
        int k = 0;
        while (k < r && idx(k) == grid.points - 1) idx(k++) = 0;
        if (k == r) break;
        ++idx(k);
    }
    return rows;
}

std::vector<SweepRow> sweep_ray(const Lattice& lat, const VectorXcd& direction,
                                const std::vector<double>& radii, int cutoff) {
    if (direction.size() != lat.dim()) throw DimensionMismatch("ray direction has wrong dimension");
    std::vector<SweepRow> rows;
    rows.reserve(radii.size());
    for (double s : radii) rows.push_back(make_row(reduce(VectorXcd(s * direction), lat), lat, cutoff));
    return rows;
}

double loglog_slope(const std::vector<SweepRow>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& row : rows) {
        if (row.trivial) continue;
        const double x = std::log(row.dist);
        const double y = std::log(row.k_rho);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw ValidationError("slope needs at least two non-trivial rows");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

VectorXcd solve_dbar_fourier(const VectorXcd& v, const CVector& c, const Lattice& lat, int n) {
    if (lat.dim() != 1) throw DimensionMismatch("Fourier dbar solve is for d = 1");
    if (v.size() != static_cast<Eigen::Index>(n) * n) throw DimensionMismatch("grid size mismatch");
    const FourierSymbols s = fourier_symbols(lat, n);
    VectorXcd h = v;
    fft_forward(h, n, 2);
    for (Eigen::Index L = 0; L < h.size(); ++L) {
        const Complex sym = s.dbar(L, 0) + c.c(0);
        if (std::abs(sym) < 1e-14) throw TrivialBundle("dbar_rho has a kernel: the twist is trivial");
        h(L) /= sym;
    }
    fft_inverse(h, n, 2);
    return h;
}

}  // namespace flatdbar
