#include "flatdbar/elliptic_kernel.hpp"

#include <array>
#include <cmath>
#include <random>

#include "flatdbar/flat_bundle.hpp"
#include "flatdbar/form_grid.hpp"

namespace flatdbar {

namespace {

constexpr int kTaylorOrder = 4;
constexpr int kAngularOrder = 16;

constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

void require_grid(const VectorXcd& a, int n) {
    if (n < 4) throw ValidationError("solver grid needs N >= 4");
    if (a.size() != static_cast<Eigen::Index>(n) * n) throw DimensionMismatch("grid size mismatch");
}

Complex grid_point(const EllipticCurve& curve, Eigen::Index L, int n) {
    return curve.point(static_cast<double>(L % n) / n, static_cast<double>(L / n) / n);
}

// C-infinity, 1 on [0, 1/2], 0 on [1, inf).
double radial_bump(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double x = 2.0 * (s - 0.5);
    const double a = std::exp(-1.0 / (1.0 - x));
    const double b = std::exp(-1.0 / x);
    return a / (a + b);
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

TwistData make_twist(const WeierstrassContext& ctx, double p, double q) {
    if (!(p >= 0.0 && p < 1.0 && q >= 0.0 && q < 1.0))
        throw ValidationError("twist (p, q) must lie in [0,1)^2");
    if (p == 0.0 && q == 0.0)
        throw TrivialTwist("(p, q) = (0, 0) is the trivial bundle, excluded: the solution is not unique");
    TwistData t;
    t.p = p;
    t.q = q;
    t.a = -2.0 * (p * ctx.eta(3) - q * ctx.eta(1));
    t.b = p * ctx.tau() - q;
    return t;
}

CVector twist_c(const WeierstrassContext& ctx, const TwistData& twist) {
    VectorXd angles(2);
    angles << 2.0 * kPi * twist.p, 2.0 * kPi * twist.q;
    return c_of_representation(Representation(angles), ctx.curve().lattice());
}

Complex kernel_eval(const WeierstrassContext& ctx, const TwistData& twist, Complex z, Complex xi) {
    const Complex w = z - xi;
    if (ctx.curve().distance_to_lattice(w) < 1e-14)
        throw DiagonalPole("kernel evaluated on its diagonal pole");
    return std::exp(twist.a * w) * ctx.sigma(w + twist.b) / ctx.sigma(w);
}

Complex kernel_trivialized(const WeierstrassContext& ctx, const TwistData& twist, const CVector& c,
                           Complex w) {
    long long m = 0;
    long long n = 0;
    const Complex w0 = ctx.curve().reduce(w, m, n);
    if (std::abs(w0) < 1e-14) throw DiagonalPole("kernel evaluated on its diagonal pole");
    const Complex k = std::exp(twist.a * w0) * ctx.sigma(w0 + twist.b) / ctx.sigma(w0);
    VectorXcd z(1);
    z(0) = w0;
    return k / sigma_eval(c, z);
}

VectorXcd section_frame(const WeierstrassContext& ctx, const CVector& c, int n) {
    VectorXcd s(static_cast<Eigen::Index>(n) * n);
    VectorXcd z(1);
    for (Eigen::Index L = 0; L < s.size(); ++L) {
        z(0) = grid_point(ctx.curve(), L, n);
        s(L) = sigma_eval(c, z);
    }
    return s;
}

VectorXcd kernel_multiplier(const WeierstrassContext& ctx, const TwistData& twist, int n) {
    if (n < 4) throw ValidationError("solver grid needs N >= 4");
    const EllipticCurve& curve = ctx.curve();
    const CVector c = twist_c(ctx, twist);
    const double cell = curve.tau().imag() / (static_cast<double>(n) * n);
    const double radius = 2.0 / n;

    // Trapezoid weights off the excised disc. `excised` is the weighted count of
    // grid points standing in for the disc; `skew` the trapezoid sum of
    // conj(x)/x * bump(|x|) off the disc, whose exact integral is 0.
    const double bump_outer = 0.4 * std::min(1.0, std::abs(curve.tau()));
    VectorXcd w(static_cast<Eigen::Index>(n) * n);
    double excised = 0.0;
    Complex skew = 0.0;
    for (Eigen::Index L = 0; L < w.size(); ++L) {
        const Complex z = grid_point(curve, L, n);
        const Complex x = curve.nearest_offset(z);
        const double dist = std::abs(x);
        double weight = 1.0;
        if (std::abs(dist - radius) <= 1e-9 * radius)
            weight = 0.5;
        else if (dist < radius)
            weight = 0.0;
        excised += 1.0 - weight;
        if (weight == 0.0) {
            w(L) = 0.0;
            continue;
        }
        w(L) = weight * cell * kernel_trivialized(ctx, twist, c, z);
        skew += weight * cell * (std::conj(x) / x) * radial_bump(dist / bump_outer);
    }
    fft_forward(w, n, 2);

    // Degree-0 terms of K(x) v(z - x) at x = 0 are (k0 v - sigma(B) dv) and
    // conj(x)/x (kappa v - sigma(B) dbar v); the excised trapezoid misses
    // their integrals by area_gap resp. skew, to O(N^-4).
    const Complex sb = ctx.sigma(twist.b);
    const Complex k0 = sb * (ctx.zeta(twist.b) + twist.a) + sb * std::conj(c.c(0));
    const Complex kappa = -sb * c.c(0);
    const double area_gap = kPi * radius * radius - cell * excised;

    // Disc moments M_ab = int_{|x| < r} K(x) (-x)^a (-conj x)^b / (a! b!) dA.
    MatrixXcd moments = MatrixXcd::Zero(kTaylorOrder + 1, kTaylorOrder + 1);
    for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
        const double rho = 0.5 * radius * (kGaussNodes[g] + 1.0);
        const double wr = 0.5 * radius * kGaussWeights[g] * rho * (2.0 * kPi / kAngularOrder);
        for (int k = 0; k < kAngularOrder; ++k) {
            const double phi = 2.0 * kPi * (k + 0.5) / kAngularOrder;
            const Complex x = std::polar(rho, phi);
            const Complex kx = kernel_trivialized(ctx, twist, c, x);
            for (int a = 0; a <= kTaylorOrder; ++a)
                for (int b = 0; a + b <= kTaylorOrder; ++b)
                    moments(a, b) += wr * kx * std::pow(-x, a) * std::pow(-std::conj(x), b) /
                                     (factorial(a) * factorial(b));
        }
    }

    const FourierSymbols sym = fourier_symbols(curve.lattice(), n);
    const Complex pref = 1.0 / (kPi * sb);
    VectorXcd mult(w.size());
    for (Eigen::Index L = 0; L < w.size(); ++L) {
        const Complex del = sym.del(L, 0);
        const Complex dbar = sym.dbar(L, 0);
        Complex disc = 0.0;
        for (int a = 0; a <= kTaylorOrder; ++a)
            for (int b = 0; a + b <= kTaylorOrder; ++b)
                disc += moments(a, b) * std::pow(del, a) * std::pow(dbar, b);
        const Complex gap = area_gap * (k0 - sb * del) + skew * (kappa - sb * dbar);
        mult(L) = pref * (w(L) + disc - gap);
    }
    return mult;
}

VectorXcd solve_dbar_kernel_trivialized(const WeierstrassContext& ctx, const TwistData& twist,
                                        const VectorXcd& v_triv, int n) {
    require_grid(v_triv, n);
    VectorXcd h = v_triv;
    fft_forward(h, n, 2);
    h.array() *= kernel_multiplier(ctx, twist, n).array();
    fft_inverse(h, n, 2);
    return h;
}

VectorXcd solve_dbar_kernel(const WeierstrassContext& ctx, const TwistData& twist,
                            const VectorXcd& f, int n) {
    require_grid(f, n);
    const VectorXcd frame = section_frame(ctx, twist_c(ctx, twist), n);
    const VectorXcd v = f.array() / frame.array();
    return frame.array() * solve_dbar_kernel_trivialized(ctx, twist, v, n).array();
}

double dbar_residual(const WeierstrassContext& ctx, const TwistData& twist, const VectorXcd& u,
                     const VectorXcd& f, int n) {
    require_grid(u, n);
    require_grid(f, n);
    const CVector c = twist_c(ctx, twist);
    const VectorXcd frame = section_frame(ctx, c, n);
    VectorXcd ut = u.array() / frame.array();
    const VectorXcd vt = f.array() / frame.array();
    const FourierSymbols sym = fourier_symbols(ctx.curve().lattice(), n);
    fft_forward(ut, n, 2);
    ut.array() *= sym.dbar.col(0).array() + c.c(0);
    fft_inverse(ut, n, 2);
    return (ut - vt).norm() / vt.norm();
}

double grid_l2(const WeierstrassContext& ctx, const VectorXcd& u, int n) {
    require_grid(u, n);
    return std::sqrt(ctx.tau().imag() / (static_cast<double>(n) * n)) * u.norm();
}

double inverse_distance_l1(const EllipticCurve& curve) {
    Eigen::Matrix2d basis;
    basis << 1.0, curve.tau().real(), 0.0, curve.tau().imag();
    const auto poly = voronoi_polygon<double>(basis);
    double total = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const Eigen::Vector2d a = poly[k];
        const Eigen::Vector2d b = poly[(k + 1) % poly.size()];
        const Eigen::Vector2d e = (b - a).normalized();
        const double h = std::abs(a.x() * e.y() - a.y() * e.x());
        total += h * (std::asinh(b.dot(e) / h) - std::asinh(a.dot(e) / h));
    }
    return total;
}

double young_l1_bound(const WeierstrassContext& ctx, const TwistData& twist, int n) {
    if (n < 4) throw ValidationError("solver grid needs N >= 4");
    const EllipticCurve& curve = ctx.curve();
    const CVector c = twist_c(ctx, twist);
    const double cell = curve.tau().imag() / (static_cast<double>(n) * n);
    const double sb = std::abs(ctx.sigma(twist.b));
    // Bounded remainder |K| - |sigma(B)| / d by trapezoid, singular part exactly.
    double regular = 0.0;
    for (Eigen::Index L = 1; L < static_cast<Eigen::Index>(n) * n; ++L) {
        const Complex z = grid_point(curve, L, n);
        regular += std::abs(kernel_trivialized(ctx, twist, c, z)) - sb / curve.distance_to_lattice(z);
    }
    return (cell * regular + sb * inverse_distance_l1(curve)) / (kPi * sb);
}

TheoremConstant theorem_constant(const WeierstrassContext& ctx, int twist_points, int z_points) {
    if (twist_points < 2 || z_points < 2) throw ValidationError("sampling grids need at least 2 points per axis");
    const EllipticCurve& curve = ctx.curve();
    TheoremConstant out;
    // Node grids include the half-period lines where the maximum tends to sit.
    for (int i = 0; i < twist_points; ++i) {
        for (int j = 0; j < twist_points; ++j) {
            if (i == 0 && j == 0) continue;
            const TwistData tw = make_twist(ctx, static_cast<double>(i) / twist_points,
                                            static_cast<double>(j) / twist_points);
            const double db = curve.distance_to_lattice(tw.b);
            const Complex sb = ctx.sigma(tw.b);
            for (int a = 0; a < z_points; ++a) {
                for (int b = 0; b < z_points; ++b) {
                    if (a == 0 && b == 0) continue;
                    const Complex z = curve.point(static_cast<double>(a) / z_points,
                                                  static_cast<double>(b) / z_points);
                    const double val =
                        curve.distance_to_lattice(z) * db * std::abs(kernel_eval(ctx, tw, z, 0.0) / sb);
                    out.m = std::max(out.m, val);
                }
            }
        }
    }
    out.inv_dist_l1 = inverse_distance_l1(curve);
    out.k = out.m * out.inv_dist_l1;
    return out;
}

VectorXcd random_smooth_periodic(int n, int band, std::uint64_t seed) {
    if (2 * band >= n) throw ValidationError("band limit must be below the Nyquist frequency");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    VectorXcd h = VectorXcd::Zero(static_cast<Eigen::Index>(n) * n);
    for (int b = -band; b <= band; ++b) {
        for (int a = -band; a <= band; ++a) {
            const double re = unif(rng);
            const double im = unif(rng);
            const Eigen::Index L = ((a + n) % n) + static_cast<Eigen::Index>(n) * ((b + n) % n);
            h(L) = Complex(re, im) / (1.0 + a * a + b * b);
        }
    }
    fft_inverse(h, n, 2);
    return h * static_cast<double>(n) * n;
}

}  // namespace flatdbar
