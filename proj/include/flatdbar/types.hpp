#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace flatdbar {

using Complex = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::MatrixXi;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;

// Error hierarchy. Every numerical or contract failure in the library is one of
// these, so front-ends can map them to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: wrong shapes, out-of-range parameters, malformed files.
class ValidationError : public Error {
public:
    using Error::Error;
};

class SingularLattice : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonImaginaryInput : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BidegreeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BidegreeOverflow : public BidegreeError {
public:
    using BidegreeError::BidegreeError;
};

class BidegreeUnderflow : public BidegreeError {
public:
    using BidegreeError::BidegreeError;
};

// Also raised for a trivial twist (p, q) = (0, 0).
class TrivialBundle : public ValidationError {
public:
    using ValidationError::ValidationError;
};
using TrivialTwist = TrivialBundle;

class CoverGap : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotACocycle : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class PoleAtLattice : public ValidationError {
public:
    using ValidationError::ValidationError;
};
using DiagonalPole = PoleAtLattice;

// A computation ran but could not produce a trustworthy answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

class CutoffTooSmall : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResourceLimit : public NumericalError {
public:
    using NumericalError::NumericalError;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr Complex kI{0.0, 1.0};

}  // namespace flatdbar
