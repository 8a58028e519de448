#include "flatdbar/flat_bundle.hpp"

#include <cmath>
#include <random>

namespace flatdbar {

double normalize_angle(double theta) {
    if (!std::isfinite(theta)) throw ValidationError("angle must be finite");
    const double n = std::ceil((theta - kPi) / (2.0 * kPi));
    double out = theta - 2.0 * kPi * n;
    if (out <= -kPi) out += 2.0 * kPi;
    if (out > kPi) out -= 2.0 * kPi;
    return out;
}

Representation::Representation(VectorXd angles) : angles_(std::move(angles)) {
    if (angles_.size() == 0 || angles_.size() % 2 != 0)
        throw ValidationError("representation needs 2d angles");
    for (Eigen::Index k = 0; k < angles_.size(); ++k) angles_(k) = normalize_angle(angles_(k));
}

Representation Representation::trivial(int d) { return Representation(VectorXd::Zero(2 * d)); }

Complex Representation::value(const VectorXi& n) const {
    if (n.size() != angles_.size()) throw DimensionMismatch("lattice vector has wrong rank");
    double phase = 0.0;
    for (Eigen::Index k = 0; k < n.size(); ++k) phase += n(k) * angles_(k);
    return std::polar(1.0, phase);
}

Representation Representation::operator*(const Representation& other) const {
    if (other.angles_.size() != angles_.size())
        throw DimensionMismatch("representations of different rank");
    return Representation(VectorXd(angles_ + other.angles_));
}

CVector c_of_representation(const Representation& rep, const Lattice& lat) {
    if (rep.dim() != lat.dim()) throw DimensionMismatch("representation and lattice dimensions differ");
    const VectorXcd s = kI * rep.angles().cast<Complex>();
    return reduce(c_map(lat, s), lat);
}

double distance_to_trivial(const Representation& rep, const Lattice& lat) {
    return c_of_representation(rep, lat).norm();
}

Complex sigma_eval(const CVector& c, const VectorXcd& z) {
    if (z.size() != c.c.size()) throw DimensionMismatch("sigma_eval: point has wrong dimension");
    // -conj(c).z + c.conj(z) = 2i Im(c.conj(z)).
    const Complex s = (c.c.array() * z.array().conjugate()).sum();
    return std::polar(1.0, 2.0 * s.imag());
}

double monodromy_defect(const CVector& c, const Lattice& lat, const Representation& rep,
                        const std::vector<VectorXcd>& points) {
    if (rep.dim() != lat.dim() || c.dim() != lat.dim())
        throw DimensionMismatch("monodromy_defect: inconsistent dimensions");
    double worst = 0.0;
    for (const auto& z : points) {
        const Complex base = sigma_eval(c, z);
        for (int k = 0; k < lat.rank(); ++k) {
            const Complex shifted = sigma_eval(c, VectorXcd(z + lat.generator(k)));
            worst = std::max(worst, std::abs(shifted - rep.value(k) * base));
        }
    }
    return worst;
}

double monodromy_defect(const CVector& c, const Lattice& lat, const Representation& rep,
                        int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<VectorXcd> points;
    points.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        VectorXd t(lat.rank());
        for (int k = 0; k < lat.rank(); ++k) t(k) = unif(rng);
        points.push_back(lat.point(t));
    }
    return monodromy_defect(c, lat, rep, points);
}

}  // namespace flatdbar
