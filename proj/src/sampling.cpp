#include "histq/sampling.hpp"

#include <Eigen/QR>

namespace histq {

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = rng.cgauss();
    return g;
}

ComplexMatrix haar_unitary(int n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is exactly Haar.
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0) q.col(j) *= d / a;
    }
    return q;
}

ComplexVector random_unit_vector(int n, Rng& rng) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.cgauss();
    const double nrm = v.norm();
    if (nrm == 0.0) {
        v.setZero();
        v(0) = 1.0;
        return v;
    }
    return v / nrm;
}

ComplexMatrix random_projector(int n, int rank, Rng& rng) {
    if (rank <= 0) return ComplexMatrix::Zero(n, n);
    if (rank >= n) return ComplexMatrix::Identity(n, n);
    const ComplexMatrix u = haar_unitary(n, rng);
    const ComplexMatrix cols = u.leftCols(rank);
    return cols * cols.adjoint();
}

ComplexMatrix random_projector(int n, Rng& rng) {
    const int rank = n > 1 ? rng.uniform_int(1, n - 1) : 1;
    return random_projector(n, rank, rng);
}

std::pair<ComplexMatrix, ComplexMatrix> random_orthogonal_pair(int n, Rng& rng) {
    const int r1 = rng.uniform_int(1, n - 1);
    const int r2 = rng.uniform_int(1, n - r1);
    const ComplexMatrix u = haar_unitary(n, rng);
    const ComplexMatrix c1 = u.middleCols(0, r1);
    const ComplexMatrix c2 = u.middleCols(r1, r2);
    return {c1 * c1.adjoint(), c2 * c2.adjoint()};
}

ComplexMatrix random_density(int n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

ComplexMatrix random_hermitian(int n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    return (g + g.adjoint()) / 2.0;
}

}  // namespace histq
