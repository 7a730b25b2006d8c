#include "histq/representations.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace histq {

HermitianKernel realign(const ILSOperator& x, double swap_tol) {
    const long n = x.spec.history_dim();
    const double residual = swap_hermiticity_residual(x.x, n);
    if (residual > swap_tol) {
        std::ostringstream os;
        os << "realign: swap-hermiticity residual " << residual << " exceeds " << swap_tol;
        throw NotSwapHermitian(os.str());
    }
    ComplexMatrix d(n * n, n * n);
    for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b)
            for (long c = 0; c < n; ++c)
                for (long e = 0; e < n; ++e) d(a * n + b, c * n + e) = x.x(a * n + e, b * n + c);
    return {n, std::move(d)};
}

TraceFamilyDecomposition trace_family_decomposition(const ILSOperator& x, double cutoff_rel) {
    const HermitianKernel kernel = realign(x);
    const long n = kernel.history_dim;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(kernel.matrix);
    if (solver.info() != Eigen::Success)
        throw Error("trace_family_decomposition: eigendecomposition failed");
    const RealVector vals = solver.eigenvalues();
    const double max_abs_eig = vals.size() ? vals.cwiseAbs().maxCoeff() : 0.0;

    TraceFamilyDecomposition fam;
    fam.history_dim = n;
    fam.cutoff = cutoff_rel * max_abs_eig;
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        if (std::abs(vals(k)) <= fam.cutoff) continue;
        ComplexMatrix a(n, n);
        const ComplexVector v = solver.eigenvectors().col(k);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) a(i, j) = v(i * n + j);
        if (vals(k) > 0)
            fam.positives.push_back({vals(k), std::move(a)});
        else
            fam.negatives.push_back({-vals(k), std::move(a)});
    }
    return fam;
}

Complex reconstruct_from_family_matrices(const TraceFamilyDecomposition& fam,
                                         const ComplexMatrix& p, const ComplexMatrix& q) {
    const long n = fam.history_dim;
    if (p.rows() != n || p.cols() != n || q.rows() != n || q.cols() != n)
        throw SpecMismatch("reconstruct_from_family: dimension mismatch");
    Complex acc(0.0, 0.0);
    for (const auto& term : fam.positives)
        acc += term.weight * (p * term.op).trace() * (q * term.op.adjoint()).trace();
    for (const auto& term : fam.negatives)
        acc -= term.weight * (p * term.op).trace() * (q * term.op.adjoint()).trace();
    return acc;
}

Complex reconstruct_from_family(const TraceFamilyDecomposition& fam, const HistoryProjector& p,
                                const HistoryProjector& q) {
    if (!(p.spec == q.spec)) throw SpecMismatch("reconstruct_from_family: history specs differ");
    return reconstruct_from_family_matrices(fam, p.matrix, q.matrix);
}

Complex SemiInnerForms::plus(const ComplexMatrix& x, const ComplexMatrix& y) const {
    Complex acc(0.0, 0.0);
    for (const auto& term : fam_.positives)
        acc += term.weight * (x * term.op).trace() * std::conj((y * term.op).trace());
    return acc;
}

Complex SemiInnerForms::minus(const ComplexMatrix& x, const ComplexMatrix& y) const {
    Complex acc(0.0, 0.0);
    for (const auto& term : fam_.negatives)
        acc += term.weight * (x * term.op).trace() * std::conj((y * term.op).trace());
    return acc;
}

SemiInnerForms semi_inner_split(TraceFamilyDecomposition fam) {
    return SemiInnerForms(std::move(fam));
}

TensorPolynomial TensorPolynomial::identity(int d, int n) {
    TensorPolynomial b;
    b.terms.push_back({Complex(1.0, 0.0),
                       std::vector<ComplexMatrix>(n, ComplexMatrix::Identity(d, d))});
    return b;
}

GNSRep make_gns(const QuantumState& state, const Propagator& prop) {
    if (state.dim() != prop.spec.single_dim)
        throw SpecMismatch("make_gns: state dimension differs from the spec");
    return {state, prop, sqrt_psd(state.rho)};
}

ComplexMatrix pi_map(const GNSRep& rep, const TensorPolynomial& b) {
    const int d = rep.d();
    const int n = rep.n();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (const auto& term : b.terms) {
        if (static_cast<int>(term.factors.size()) != n)
            throw SpecMismatch("pi_map: term factor count differs from the time grid");
        ComplexMatrix acc = ComplexMatrix::Identity(d, d);
        for (int i = 0; i < n; ++i) {
            const ComplexMatrix& u = rep.prop.u_list[i];
            if (term.factors[i].rows() != d || term.factors[i].cols() != d)
                throw SpecMismatch("pi_map: factor has the wrong dimension");
            acc = (u.adjoint() * term.factors[i] * u) * acc;
        }
        out += term.coeff * acc;
    }
    return out;
}

ComplexMatrix assemble_tensor_operator(const TensorPolynomial& b, int d, int n) {
    const long dim = pow_checked(d, n, kMaxHistoryDim);
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& term : b.terms) {
        ComplexMatrix acc;
        for (int i = 0; i < n; ++i) acc = i == 0 ? term.factors[0] : kron(acc, term.factors[i]);
        out += term.coeff * acc;
    }
    return out;
}

GnsValue gns_eval(const GNSRep& rep, const TensorPolynomial& b, const TensorPolynomial& b_prime) {
    const ComplexMatrix pb = pi_map(rep, b);
    const ComplexMatrix pbp = pi_map(rep, b_prime);
    const ComplexMatrix rb = pb * rep.sqrt_rho;
    const ComplexMatrix rbp = pbp * rep.sqrt_rho;
    GnsValue out;
    out.value = (rbp.adjoint() * rb).trace();
    out.lhs_check = (pbp.adjoint() * pb * rep.state.rho).trace();
    return out;
}

namespace {

double rayleigh_ratio(const GNSRep& rep, const TensorPolynomial& b) {
    const ComplexMatrix full = assemble_tensor_operator(b, rep.d(), rep.n());
    const double denom = norms(full).operator_norm;
    if (denom < 1e-300) return 0.0;
    const ComplexMatrix r = pi_map(rep, b) * rep.sqrt_rho;
    return r.norm() / denom;  // Frobenius norm == Hilbert-Schmidt norm
}

TensorPolynomial random_polynomial(int d, int n, Rng& rng) {
    TensorPolynomial b;
    const int terms = rng.uniform_int(1, d * d);
    for (int t = 0; t < terms; ++t) {
        TensorPolynomial::Term term;
        term.coeff = rng.cgauss();
        for (int i = 0; i < n; ++i) term.factors.push_back(ginibre(d, d, rng));
        b.terms.push_back(std::move(term));
    }
    return b;
}

/// For n = 2 the flip sum_ij E_ij (x) E_ji; its image under Pi is d * I
/// while its operator norm stays 1, a canonical witness of norm growth.
TensorPolynomial flip_polynomial(int d) {
    TensorPolynomial b;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ComplexMatrix eij = ComplexMatrix::Zero(d, d);
            ComplexMatrix eji = ComplexMatrix::Zero(d, d);
            eij(i, j) = 1.0;
            eji(j, i) = 1.0;
            b.terms.push_back({Complex(1.0, 0.0), {eij, eji}});
        }
    return b;
}

}  // namespace

double estimate_R_norm(const GNSRep& rep, int restarts, std::uint64_t seed) {
    Rng rng(seed);
    const int d = rep.d();
    const int n = rep.n();

    std::vector<TensorPolynomial> starts;
    starts.push_back(TensorPolynomial::identity(d, n));
    if (n == 2) starts.push_back(flip_polynomial(d));
    for (int r = 0; r < restarts; ++r) starts.push_back(random_polynomial(d, n, rng));

    double best = 0.0;
    constexpr int kClimbSteps = 120;
    for (TensorPolynomial b : starts) {
        double val = rayleigh_ratio(rep, b);
        for (int step = 0; step < kClimbSteps; ++step) {
            const int t = rng.uniform_int(0, static_cast<int>(b.terms.size()) - 1);
            const Complex old = b.terms[t].coeff;
            b.terms[t].coeff += 0.3 * rng.cgauss();
            const double trial = rayleigh_ratio(rep, b);
            if (trial > val)
                val = trial;
            else
                b.terms[t].coeff = old;
        }
        best = std::max(best, val);
    }
    return best;
}

}  // namespace histq
