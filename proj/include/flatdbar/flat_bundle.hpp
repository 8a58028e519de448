#pragma once

// U(1)-characters of a lattice, their c-coordinate on Pic^0 and the unit
// section sigma_rho(z) = exp(-sum conj(c_j) z_j + sum c_j conj(z_j)).

#include <cstdint>
#include <vector>

#include "flatdbar/lattice.hpp"
#include "flatdbar/types.hpp"

namespace flatdbar {

/// Maps an angle into (-pi, pi].
double normalize_angle(double theta);

/// rho(lambda_k) = exp(i theta_k), angles kept normalized.
class Representation {
public:
    Representation() = default;
    explicit Representation(VectorXd angles);

    static Representation trivial(int d);

    int dim() const { return static_cast<int>(angles_.size() / 2); }
    const VectorXd& angles() const { return angles_; }
    Complex value(int k) const { return std::polar(1.0, angles_(k)); }

    /// rho(sum_k n_k lambda_k).
    Complex value(const VectorXi& n) const;

    /// Pointwise product of characters.
    Representation operator*(const Representation& other) const;

private:
    VectorXd angles_;
};

/// c = reduce(c_map(lat, i theta)).
CVector c_of_representation(const Representation& rep, const Lattice& lat);

/// |1 - rho| = || c_reduced ||.
double distance_to_trivial(const Representation& rep, const Lattice& lat);

/// sigma_rho evaluated at z.
Complex sigma_eval(const CVector& c, const VectorXcd& z);

/// Callable wrapper around sigma_eval.
class SigmaSection {
public:
    explicit SigmaSection(CVector c) : c_(std::move(c)) {}
    Complex operator()(const VectorXcd& z) const { return sigma_eval(c_, z); }
    const CVector& c() const { return c_; }

private:
    CVector c_;
};

/// max over generators k and sample points z of |sigma(z + lambda_k) - rho(lambda_k) sigma(z)|.
double monodromy_defect(const CVector& c, const Lattice& lat, const Representation& rep,
                        const std::vector<VectorXcd>& points);

/// Same, over `samples` points drawn uniformly from the period cell with `seed`.
double monodromy_defect(const CVector& c, const Lattice& lat, const Representation& rep,
                        int samples = 100, std::uint64_t seed = 1);

}  // namespace flatdbar
