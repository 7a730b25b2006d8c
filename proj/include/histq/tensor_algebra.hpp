#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "histq/errors.hpp"

namespace histq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance policy shared by all numerical checks.
/// eq_abs governs value equality (traces, reconstructions), structure_abs
/// governs structural predicates (hermiticity, idempotence, unitarity) and
/// spectral_cutoff_rel decides which eigenvalues count as zero.
struct Tolerance {
    double eq_abs = 1e-9;
    double structure_abs = 1e-10;
    double spectral_cutoff_rel = 1e-12;
};

struct EighResult {
    RealVector eigenvalues;      ///< ascending
    ComplexMatrix eigenvectors;  ///< column k belongs to eigenvalues[k]
};

struct MatrixNorms {
    double trace_norm;     ///< sum of singular values
    double operator_norm;  ///< largest singular value
};

enum class MatrixKind { Projection, Density, Unitary };

struct ValidationReport {
    bool ok = false;
    double max_violation = 0.0;
    std::string detail;
};

/// Kronecker product with the left factor as the most significant index
/// block: entry ((i*b.rows+k),(j*b.cols+l)) = a(i,j)*b(k,l).  Time slot t_1
/// always occupies the left-most factor throughout the library.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian eigendecomposition, eigenvalues ascending.
/// Throws NotHermitian when max|h - h^dag| exceeds tol.structure_abs.
EighResult eigh(const ComplexMatrix& h, const Tolerance& tol = {});

/// Trace norm and operator norm via singular values.
MatrixNorms norms(const ComplexMatrix& a);

/// Positive-semidefinite square root.  Eigenvalues in
/// [-tol.structure_abs, 0) are clamped to zero; anything more negative
/// throws NotPSD.
ComplexMatrix sqrt_psd(const ComplexMatrix& a, const Tolerance& tol = {});

/// Orthogonal projector onto the numerical nullspace of a Hermitian PSD
/// matrix: the span of eigenvectors with eigenvalue <=
/// tol.spectral_cutoff_rel * max eigenvalue (all of them when a = 0).
ComplexMatrix nullspace_projector(const ComplexMatrix& a, const Tolerance& tol = {});

/// Structural validator for projections, density matrices and unitaries.
/// Never throws; failures are reported with the largest violation found.
ValidationReport validate(const ComplexMatrix& a, MatrixKind kind, const Tolerance& tol = {});

/// True when every entry is finite (no NaN/Inf in either component).
bool is_finite(const ComplexMatrix& a);

/// max |a(i,j)| over all entries; 0 for empty matrices.
double max_abs(const ComplexMatrix& a);

}  // namespace histq
