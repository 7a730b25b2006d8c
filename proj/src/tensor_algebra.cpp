#include "histq/tensor_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace histq {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

bool is_finite(const ComplexMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    return true;
}

double max_abs(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().maxCoeff();
}

EighResult eigh(const ComplexMatrix& h, const Tolerance& tol) {
    if (h.rows() != h.cols()) throw NotHermitian("eigh: matrix is not square");
    const double herm = max_abs(h - h.adjoint());
    if (herm > tol.structure_abs) {
        std::ostringstream os;
        os << "eigh: matrix is not Hermitian, max|h - h^dag| = " << herm;
        throw NotHermitian(os.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw Error("eigh: eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

MatrixNorms norms(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw Error("norms: matrix is not square");
    if (a.size() == 0) return {0.0, 0.0};
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    const RealVector sv = svd.singularValues();
    return {sv.sum(), sv.size() > 0 ? sv(0) : 0.0};
}

ComplexMatrix sqrt_psd(const ComplexMatrix& a, const Tolerance& tol) {
    EighResult eig = eigh(a, tol);
    RealVector vals = eig.eigenvalues;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < -tol.structure_abs) {
            std::ostringstream os;
            os << "sqrt_psd: eigenvalue " << vals(i) << " below -" << tol.structure_abs;
            throw NotPSD(os.str());
        }
        vals(i) = std::sqrt(std::max(vals(i), 0.0));
    }
    return eig.eigenvectors * vals.asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexMatrix nullspace_projector(const ComplexMatrix& a, const Tolerance& tol) {
    EighResult eig = eigh(a, tol);
    const Eigen::Index n = eig.eigenvalues.size();
    double max_eig = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (eig.eigenvalues(i) < -tol.structure_abs) {
            std::ostringstream os;
            os << "nullspace_projector: eigenvalue " << eig.eigenvalues(i) << " is negative";
            throw NotPSD(os.str());
        }
        max_eig = std::max(max_eig, eig.eigenvalues(i));
    }
    ComplexMatrix proj = ComplexMatrix::Zero(n, n);
    const double cut = tol.spectral_cutoff_rel * max_eig;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (eig.eigenvalues(i) <= cut) {
            const ComplexVector v = eig.eigenvectors.col(i);
            proj.noalias() += v * v.adjoint();
        }
    }
    return proj;
}

ValidationReport validate(const ComplexMatrix& a, MatrixKind kind, const Tolerance& tol) {
    ValidationReport rep;
    if (a.rows() != a.cols()) {
        rep.detail = "matrix is not square";
        rep.max_violation = 1.0;
        return rep;
    }
    if (!is_finite(a)) {
        rep.detail = "matrix has non-finite entries";
        rep.max_violation = std::numeric_limits<double>::infinity();
        return rep;
    }
    const Eigen::Index n = a.rows();
    switch (kind) {
        case MatrixKind::Projection: {
            const double herm = max_abs(a - a.adjoint());
            const double idem = max_abs(a * a - a);
            rep.max_violation = std::max(herm, idem);
            rep.ok = rep.max_violation <= tol.structure_abs;
            if (!rep.ok)
                rep.detail = herm >= idem ? "not self-adjoint" : "not idempotent";
            break;
        }
        case MatrixKind::Density: {
            const double herm = max_abs(a - a.adjoint());
            if (herm > tol.structure_abs) {
                rep.max_violation = herm;
                rep.detail = "not self-adjoint";
                return rep;
            }
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((a + a.adjoint()) / 2.0);
            const double min_eig = solver.eigenvalues().minCoeff();
            const double trace_err = std::abs(a.trace() - Complex(1.0, 0.0));
            const double neg = std::max(0.0, -min_eig);
            rep.max_violation = std::max({herm, neg, trace_err});
            rep.ok = neg <= tol.structure_abs && trace_err <= tol.eq_abs;
            if (!rep.ok)
                rep.detail = neg > tol.structure_abs ? "negative eigenvalue" : "trace differs from 1";
            break;
        }
        case MatrixKind::Unitary: {
            rep.max_violation = max_abs(a.adjoint() * a - ComplexMatrix::Identity(n, n));
            rep.ok = rep.max_violation <= tol.structure_abs;
            if (!rep.ok) rep.detail = "a^dag a differs from identity";
            break;
        }
    }
    return rep;
}

}  // namespace histq
