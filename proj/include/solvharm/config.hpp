#pragma once

/**
 * @file config.hpp
 * @brief Error types and the single tolerance record shared by every module.
 */

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solvharm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit (non-square input, vector length mismatch).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Iteration caps, overflow, step-size underflow.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Algebraic preconditions on a Lie algebra fail (wrong codimension, non-central
/// subspace, broken Jacobi identity).
class StructureError : public Error {
public:
    using Error::Error;
};

/// The algebra is solvable of codimension one but cannot be put in standard
/// position (ad_H not self-adjoint, eigenvalues of mixed sign, ...).
class NotStandardError : public StructureError {
public:
    using StructureError::StructureError;
};

/// Argument outside the mathematical domain of a function (pole, non-unit vector).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Riccati spectrum too close to the imaginary axis to pick a maximal solution.
class DegenerateSpectrumError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A Jacobi tensor became singular inside the requested range.
class ConjugatePointError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegeneratePlaneError : public DomainError {
public:
    using DomainError::DomainError;
};

/**
 * Every threshold used by the library. Defaults are the contractual values;
 * the CLI can override individual fields with --tol-* flags.
 */
struct Tolerances {
    // numerics
    double singular_pivot = 1e-13;   ///< relative to ||a||_inf
    // lie_metric
    double jacobi_identity = 1e-12;  ///< relative to max|c|^2
    double rank = 1e-10;             ///< singular values below rank*scale are zero
    double self_adjoint = 1e-8;
    double eigen_merge = 1e-9;
    double imaginary_axis = 1e-8;    ///< growth_type: |Re sigma| threshold
    int growth_samples = 64;
    // curvature
    double einstein = 1e-8;
    double symmetric_ratio = 1e-8;
    double flat = 1e-10;
    // riccati
    double riccati_axis = 1e-10;       ///< |Re sigma| at or below: on the axis
    double riccati_ambiguity = 1e-7;   ///< (axis, ambiguity) band is rejected
    double riccati_residual = 1e-8;
    double horizon_cap = 80.0;
    double horizon_convergence = 1e-8;
    // jacobi_flow
    double ode_rel = 1e-10;
    double ode_abs = 1e-12;
    std::size_t ode_max_steps = 1'000'000;
    double bvp_convergence = 1e-8;
    double conjugate_det = 1e-13;
    // hypergeom
    double series_truncation = 1e-13;
    std::size_t series_max_terms = 200'000;
    double classify = 1e-10;
    double h_derivative_step = 1e-6;
    // report verdicts
    double h_constancy = 1e-8;
    double mean_curvature_constancy = 1e-5;
    double trace_mismatch = 1e-6;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace solvharm
