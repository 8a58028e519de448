#include "flatdbar/cech.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "flatdbar/flat_bundle.hpp"
#include "flatdbar/torus_spectral.hpp"

namespace flatdbar {

namespace {

bool full_axis(double lo, double hi) { return hi - lo >= 1.0; }

// Integer m with lo < s + m < hi (open), or with s + m in [lo, lo + 1) for a
// full axis. Returns false when s has no lift.
bool lift_axis(double s, double lo, double hi, int& m) {
    if (full_axis(lo, hi)) {
        m = static_cast<int>(std::ceil(lo - s));
        return true;
    }
    m = static_cast<int>(std::ceil(hi - s)) - 1;
    return s + m > lo;
}

// Rising step on [0, 1], clamped to 0 below and 1 above.
double taper(Taper kind, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (kind == Taper::Cosine) return x - std::sin(2.0 * kPi * x) / (2.0 * kPi);
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double taper_derivative(Taper kind, double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    if (kind == Taper::Cosine) return 1.0 - std::cos(2.0 * kPi * x);
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    const double da = a / (x * x);
    const double db = -b / ((1.0 - x) * (1.0 - x));
    return (da * b - a * db) / ((a + b) * (a + b));
}

// Profile on one axis at lifted coordinate s, and its derivative in s.
void profile(Taper kind, double s, double lo, double hi, double width, double& value, double& slope) {
    if (full_axis(lo, hi)) {
        value = 1.0;
        slope = 0.0;
        return;
    }
    const double x1 = (s - lo) / width;
    const double x2 = (hi - s) / width;
    const double r1 = taper(kind, x1);
    const double r2 = taper(kind, x2);
    value = r1 * r2;
    slope = (taper_derivative(kind, x1) * r2 - r1 * taper_derivative(kind, x2)) / width;
}

struct PieceSamples {
    std::vector<char> inside;
    MatrixXi lift;   // points x 2
    VectorXd phi;
    MatrixXd grad;   // points x 2, d phi / d t_k
};

PieceSamples sample_piece(const Rect& r, Taper kind, double width, int n) {
    const Eigen::Index points = static_cast<Eigen::Index>(n) * n;
    PieceSamples s;
    s.inside.assign(static_cast<std::size_t>(points), 0);
    s.lift = MatrixXi::Zero(points, 2);
    s.phi = VectorXd::Zero(points);
    s.grad = MatrixXd::Zero(points, 2);
    for (int i2 = 0; i2 < n; ++i2) {
        for (int i1 = 0; i1 < n; ++i1) {
            const Eigen::Index L = i1 + static_cast<Eigen::Index>(n) * i2;
            const double s1 = static_cast<double>(i1) / n;
            const double s2 = static_cast<double>(i2) / n;
            int m1 = 0;
            int m2 = 0;
            if (!lift_axis(s1, r.lo1, r.hi1, m1) || !lift_axis(s2, r.lo2, r.hi2, m2)) continue;
            s.inside[L] = 1;
            s.lift(L, 0) = m1;
            s.lift(L, 1) = m2;
            double v1 = 0.0, d1 = 0.0, v2 = 0.0, d2 = 0.0;
            profile(kind, s1 + m1, r.lo1, r.hi1, width, v1, d1);
            profile(kind, s2 + m2, r.lo2, r.hi2, width, v2, d2);
            s.phi(L) = v1 * v2;
            s.grad(L, 0) = d1 * v2;
            s.grad(L, 1) = v1 * d2;
        }
    }
    return s;
}

std::vector<PieceSamples> sample_cover(const OpenCover& cover, int n) {
    cover.validate();
    if (n < 4) throw ValidationError("cover grid needs N >= 4");
    std::vector<PieceSamples> out;
    out.reserve(cover.rects.size());
    for (const Rect& r : cover.rects) out.push_back(sample_piece(r, cover.taper, cover.overlap_min, n));
    const Eigen::Index points = static_cast<Eigen::Index>(n) * n;
    for (Eigen::Index L = 0; L < points; ++L) {
        double total = 0.0;
        for (const PieceSamples& p : out) total += p.phi(L);
        if (total < 1e-12) throw CoverGap("grid point not covered by any rectangle interior");
    }
    return out;
}

void require_degree(const Cochain& c, int degree, const CechComplex& cx) {
    if (c.degree != degree) throw BidegreeError("cochain has the wrong degree");
    const std::size_t expect = degree == 0 ? static_cast<std::size_t>(cx.pieces())
                                           : static_cast<std::size_t>(cx.pieces()) * cx.pieces();
    if (c.pieces != cx.pieces() || c.data.size() != expect)
        throw DimensionMismatch("cochain does not match the cover");
    const Eigen::Index points = static_cast<Eigen::Index>(cx.resolution()) * cx.resolution();
    for (const VectorXcd& v : c.data)
        if (v.size() != points) throw DimensionMismatch("cochain grid size mismatch");
}

}  // namespace

OpenCover OpenCover::grid(int split, double overlap, Taper taper) {
    if (split < 1) throw ValidationError("cover split must be positive");
    OpenCover cover;
    cover.overlap_min = overlap;
    cover.taper = taper;
    const double h = 1.0 / split;
    for (int b = 0; b < split; ++b) {
        for (int a = 0; a < split; ++a) {
            Rect r;
            if (split == 1) {
                r = {0.0, 1.0, 0.0, 1.0};
            } else {
                r.lo1 = a * h - overlap / 2.0;
                r.hi1 = (a + 1) * h + overlap / 2.0;
                r.lo2 = b * h - overlap / 2.0;
                r.hi2 = (b + 1) * h + overlap / 2.0;
            }
            cover.rects.push_back(r);
        }
    }
    return cover;
}

void OpenCover::validate() const {
    if (rects.empty()) throw ValidationError("cover has no rectangles");
    if (!(overlap_min > 0.0)) throw ValidationError("overlap_min must be positive");
    for (const Rect& r : rects) {
        for (const auto& [lo, hi] : {std::pair{r.lo1, r.hi1}, std::pair{r.lo2, r.hi2}}) {
            if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
                throw ValidationError("rectangle sides must be finite with lo < hi");
            if (!full_axis(lo, hi) && hi - lo < 2.0 * overlap_min)
                throw ValidationError("rectangle side shorter than twice overlap_min");
        }
    }
}

std::vector<VectorXd> partition_of_unity(const OpenCover& cover, int n) {
    const std::vector<PieceSamples> s = sample_cover(cover, n);
    const Eigen::Index points = static_cast<Eigen::Index>(n) * n;
    VectorXd total = VectorXd::Zero(points);
    for (const PieceSamples& p : s) total += p.phi;
    std::vector<VectorXd> rho;
    rho.reserve(s.size());
    for (const PieceSamples& p : s) rho.emplace_back(p.phi.cwiseQuotient(total));
    return rho;
}

CechComplex::CechComplex(OpenCover cover, const WeierstrassContext& ctx, const TwistData& twist, int n)
    : cover_(std::move(cover)), ctx_(&ctx), twist_(twist), c_(twist_c(ctx, twist)), n_(n) {
    const std::vector<PieceSamples> s = sample_cover(cover_, n_);
    const Eigen::Index points = static_cast<Eigen::Index>(n_) * n_;
    const Lattice& lat = ctx.curve().lattice();
    // dbar t_k = lambda^vee_k / 2 (the gradient of t_k is the dual vector).
    const Complex dbar_t1 = lat.dual()(0, 0) / 2.0;
    const Complex dbar_t2 = lat.dual()(0, 1) / 2.0;

    VectorXd total = VectorXd::Zero(points);
    VectorXcd dbar_total = VectorXcd::Zero(points);
    std::vector<VectorXcd> dbar_phi;
    for (const PieceSamples& p : s) {
        total += p.phi;
        VectorXcd dp = p.grad.col(0).cast<Complex>() * dbar_t1 + p.grad.col(1).cast<Complex>() * dbar_t2;
        dbar_total += dp;
        dbar_phi.push_back(std::move(dp));
    }

    VectorXcd z(1);
    for (std::size_t j = 0; j < s.size(); ++j) {
        const PieceSamples& p = s[j];
        mask_.push_back(p.inside);
        lift_index_.push_back(p.lift);
        pou_.emplace_back(p.phi.cwiseQuotient(total));
        VectorXcd dr = (dbar_phi[j].array() * total.array().cast<Complex>()
                        - p.phi.array().cast<Complex>() * dbar_total.array())
                       / total.array().square().cast<Complex>();
        dbar_pou_.push_back(std::move(dr));
        VectorXcd lift = VectorXcd::Zero(points);
        VectorXcd frame = VectorXcd::Zero(points);
        for (Eigen::Index L = 0; L < points; ++L) {
            if (!p.inside[L]) continue;
            const double t1 = static_cast<double>(L % n_) / n_ + p.lift(L, 0);
            const double t2 = static_cast<double>(L / n_) / n_ + p.lift(L, 1);
            lift(L) = ctx.curve().point(t1, t2);
            z(0) = lift(L);
            frame(L) = sigma_eval(c_, z);
        }
        lift_.push_back(std::move(lift));
        frame_.push_back(std::move(frame));
    }
}

Complex CechComplex::transition(int j, int k, Eigen::Index point) const {
    const double dm = lift_index_[j](point, 0) - lift_index_[k](point, 0);
    const double dn = lift_index_[j](point, 1) - lift_index_[k](point, 1);
    const double phase = twist_.p * dm + twist_.q * dn;
    // Integer phases give exactly 1.
    return std::polar(1.0, 2.0 * kPi * (phase - std::round(phase)));
}

double CechComplex::transition_cocycle_defect() const {
    const int J = pieces();
    const Eigen::Index points = static_cast<Eigen::Index>(n_) * n_;
    double worst = 0.0;
    for (Eigen::Index L = 0; L < points; ++L)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < J; ++k)
                for (int l = 0; l < J; ++l) {
                    if (!contains(j, L) || !contains(k, L) || !contains(l, L)) continue;
                    worst = std::max(worst, std::abs(transition(j, k, L) * transition(k, l, L)
                                                     - transition(j, l, L)));
                }
    return worst;
}

Cochain zero_cochain(const CechComplex& cx, int degree) {
    if (degree != 0 && degree != 1) throw BidegreeError("cochain degree must be 0 or 1");
    Cochain c;
    c.degree = degree;
    c.pieces = cx.pieces();
    const std::size_t count = degree == 0 ? static_cast<std::size_t>(c.pieces)
                                          : static_cast<std::size_t>(c.pieces) * c.pieces;
    const Eigen::Index points = static_cast<Eigen::Index>(cx.resolution()) * cx.resolution();
    c.data.assign(count, VectorXcd::Zero(points));
    return c;
}

Cochain random_holomorphic_cochain(const CechComplex& cx, std::uint64_t seed, int degree, Complex offset) {
    if (degree < 0) throw ValidationError("polynomial degree must be non-negative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Cochain c = zero_cochain(cx, 0);
    for (int j = 0; j < cx.pieces(); ++j) {
        const Rect& r = cx.cover().rects[j];
        const Complex centre = cx.context().curve().point((r.lo1 + r.hi1) / 2.0, (r.lo2 + r.hi2) / 2.0);
        std::vector<Complex> coef(static_cast<std::size_t>(degree) + 1);
        double fact = 1.0;
        for (int k = 0; k <= degree; ++k) {
            if (k > 0) fact *= k;
            coef[k] = Complex(u(rng), u(rng)) / fact;
        }
        coef[0] += offset;
        VectorXcd& f = c.at(j);
        for (Eigen::Index L = 0; L < f.size(); ++L) {
            if (!cx.contains(j, L)) continue;
            const Complex x = cx.lift(j, L) - centre;
            Complex acc = 0.0;
            for (int k = degree; k >= 0; --k) acc = acc * x + coef[k];
            f(L) = acc;
        }
    }
    return c;
}

Cochain constant_cochain(const CechComplex& cx, Complex value) {
    Cochain c = zero_cochain(cx, 0);
    for (int j = 0; j < cx.pieces(); ++j)
        for (Eigen::Index L = 0; L < c.at(j).size(); ++L)
            if (cx.contains(j, L)) c.at(j)(L) = value;
    return c;
}

Cochain delta0(const Cochain& c0, const CechComplex& cx) {
    require_degree(c0, 0, cx);
    Cochain c1 = zero_cochain(cx, 1);
    const int J = cx.pieces();
    for (int j = 0; j < J; ++j)
        for (int k = 0; k < J; ++k) {
            if (j == k) continue;
            VectorXcd& out = c1.at(j, k);
            for (Eigen::Index L = 0; L < out.size(); ++L)
                if (cx.overlaps(j, k, L)) out(L) = c0.at(j)(L) - cx.transition(j, k, L) * c0.at(k)(L);
        }
    return c1;
}

double cocycle_defect(const Cochain& c1, const CechComplex& cx) {
    require_degree(c1, 1, cx);
    const int J = cx.pieces();
    const Eigen::Index points = static_cast<Eigen::Index>(cx.resolution()) * cx.resolution();
    double worst = 0.0;
    for (Eigen::Index L = 0; L < points; ++L)
        for (int j = 0; j < J; ++j) {
            if (!cx.contains(j, L)) continue;
            worst = std::max(worst, std::abs(c1.at(j, j)(L)));
            for (int k = 0; k < J; ++k) {
                if (k == j || !cx.contains(k, L)) continue;
                const Complex tjk = cx.transition(j, k, L);
                worst = std::max(worst, std::abs(c1.at(j, k)(L) + tjk * c1.at(k, j)(L)));
                for (int l = 0; l < J; ++l) {
                    if (l == j || l == k || !cx.contains(l, L)) continue;
                    worst = std::max(worst,
                                     std::abs(c1.at(j, l)(L) - c1.at(j, k)(L) - tjk * c1.at(k, l)(L)));
                }
            }
        }
    return worst;
}

PatchedForm cocycle_to_form(const Cochain& c1, const CechComplex& cx) {
    require_degree(c1, 1, cx);
    double scale = 1.0;
    for (const VectorXcd& v : c1.data) scale = std::max(scale, v.cwiseAbs().maxCoeff());
    if (cocycle_defect(c1, cx) > 1e-8 * scale) throw NotACocycle("1-cochain fails the cocycle identity");

    const int J = cx.pieces();
    const int n = cx.resolution();
    const Eigen::Index points = static_cast<Eigen::Index>(n) * n;
    PatchedForm out;
    out.v = FormGrid(1, 0, 1, n);
    auto v = out.v.column(0, 1);
    std::vector<char> assigned(static_cast<std::size_t>(points), 0);
    for (int j = 0; j < J; ++j) {
        VectorXcd g = VectorXcd::Zero(points);
        for (Eigen::Index L = 0; L < points; ++L) {
            if (!cx.contains(j, L)) continue;
            Complex gj = 0.0;
            Complex vj = 0.0;
            for (int l = 0; l < J; ++l) {
                if (l == j || !cx.contains(l, L)) continue;
                gj += cx.pou(l)(L) * c1.at(j, l)(L);
                vj += cx.dbar_pou(l)(L) * c1.at(j, l)(L);
            }
            g(L) = gj;
            const Complex vt = vj / cx.frame(j)(L);
            if (!assigned[L]) {
                v(L) = vt;
                assigned[L] = 1;
            } else {
                out.overlap_mismatch = std::max(out.overlap_mismatch, std::abs(v(L) - vt));
            }
        }
        out.g.push_back(std::move(g));
    }
    return out;
}

Cochain solve_primitive(const Cochain& c1, const CechComplex& cx, PrimitiveSolver solver) {
    if (cx.c().norm() < 1e-14) throw TrivialTwist("the primitive is not unique for the trivial bundle");
    PatchedForm form = cocycle_to_form(c1, cx);
    const int n = cx.resolution();
    const VectorXcd v = form.v.column(0, 1);
    const VectorXcd u = solver == PrimitiveSolver::Fourier
                            ? solve_dbar_fourier(v, cx.c(), cx.context().curve().lattice(), n)
                            : solve_dbar_kernel_trivialized(cx.context(), cx.twist(), v, n);
    Cochain f = zero_cochain(cx, 0);
    for (int j = 0; j < cx.pieces(); ++j)
        for (Eigen::Index L = 0; L < u.size(); ++L)
            if (cx.contains(j, L)) f.at(j)(L) = form.g[j](L) - cx.frame(j)(L) * u(L);
    return f;
}

double sup_distance(const Cochain& a, const Cochain& b, const CechComplex& cx) {
    require_degree(a, a.degree, cx);
    require_degree(b, a.degree, cx);
    const int J = cx.pieces();
    double worst = 0.0;
    for (int j = 0; j < J; ++j)
        for (int k = 0; k < (a.degree == 0 ? 1 : J); ++k) {
            const VectorXcd& x = a.degree == 0 ? a.at(j) : a.at(j, k);
            const VectorXcd& y = a.degree == 0 ? b.at(j) : b.at(j, k);
            for (Eigen::Index L = 0; L < x.size(); ++L) {
                const bool on = a.degree == 0 ? cx.contains(j, L) : (j != k && cx.overlaps(j, k, L));
                if (on) worst = std::max(worst, std::abs(x(L) - y(L)));
            }
        }
    return worst;
}

double sup_norm(const Cochain& f, const CechComplex& cx) { return sup_distance(f, zero_cochain(cx, f.degree), cx); }

UedaReport ueda_ratio(const Cochain& c1, const CechComplex& cx, PrimitiveSolver solver) {
    const Lattice& lat = cx.context().curve().lattice();
    UedaReport r;
    r.distance = cx.c().norm();
    if (r.distance < 1e-14) throw TrivialTwist("Ueda ratio needs a nontrivial twist");
    r.sup_cocycle = sup_norm(c1, cx);
    r.k_times_d = k_rho(cx.c(), lat) * r.distance;

    // Sup over the shrunken pieces is bounded by the L^2 mean over a disc of
    // radius `disc` that stays inside U_j.
    const double grad = std::max(std::abs(lat.dual()(0, 0)), std::abs(lat.dual()(0, 1)));
    const double disc = cx.cover().overlap_min / 4.0 / grad;
    const double c3 = 1.0 / (std::sqrt(kPi) * disc);
    const Eigen::Index points = static_cast<Eigen::Index>(cx.resolution()) * cx.resolution();
    double s = 0.0;
    for (Eigen::Index L = 0; L < points; ++L) {
        double acc = 0.0;
        for (int j = 0; j < cx.pieces(); ++j) acc += std::abs(cx.dbar_pou(j)(L));
        s = std::max(s, acc);
    }
    double max_piece = 0.0;
    for (const Rect& rect : cx.cover().rects)
        max_piece = std::max(max_piece, std::min(1.0, rect.hi1 - rect.lo1) * std::min(1.0, rect.hi2 - rect.lo2));
    r.c1 = c3 * s * std::sqrt(lat.volume());
    r.c2 = c3 * std::sqrt(max_piece * lat.volume()) + 1.0;
    r.bound = r.c1 * r.k_times_d + r.c2 * r.distance;

    if (r.sup_cocycle == 0.0) return r;
    const Cochain f = solve_primitive(c1, cx, solver);
    r.sup_primitive = sup_norm(f, cx);
    r.ratio = r.distance * r.sup_primitive / r.sup_cocycle;
    return r;
}

}  // namespace flatdbar
