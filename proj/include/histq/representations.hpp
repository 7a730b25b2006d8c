#pragma once

#include <cstdint>
#include <vector>

#include "histq/decoherence.hpp"

namespace histq {

/// Hermitian kernel on the Hilbert-Schmidt space of history-space matrices,
/// obtained by realigning an ILS operator.
struct HermitianKernel {
    long history_dim = 0;  ///< d^n; the kernel is (d^n)^2 x (d^n)^2
    ComplexMatrix matrix;
};

/// Signed family {(lambda_k, A_k)} u {(mu_k, B_k)} with
/// d(p,q) = sum lambda_k tr(p A_k) tr(q A_k^dag) - sum mu_k tr(p B_k) tr(q B_k^dag).
/// The A_k and B_k are Hilbert-Schmidt orthonormal.
struct TraceFamilyDecomposition {
    struct Term {
        double weight;     ///< lambda_k or mu_k, strictly positive
        ComplexMatrix op;  ///< A_k or B_k on the history space
    };
    long history_dim = 0;
    std::vector<Term> positives;
    std::vector<Term> negatives;
    double cutoff = 0.0;  ///< absolute eigenvalue cutoff that was applied
};

/// Index reshuffle D[(a,b),(c,d)] = X[(a,d),(b,c)].  Hermitian exactly when
/// x satisfies the swap-hermiticity identity; throws NotSwapHermitian when
/// the residual of that identity exceeds swap_tol.
HermitianKernel realign(const ILSOperator& x, double swap_tol = 1e-8);

/// Eigendecomposition of the realigned kernel, eigenvectors reshaped to
/// history-space matrices; eigenvalues within cutoff_rel * max|lambda| of
/// zero are dropped.
TraceFamilyDecomposition trace_family_decomposition(const ILSOperator& x,
                                                    double cutoff_rel = 1e-12);

Complex reconstruct_from_family(const TraceFamilyDecomposition& fam, const HistoryProjector& p,
                                const HistoryProjector& q);

/// Raw-matrix variant of reconstruct_from_family.
Complex reconstruct_from_family_matrices(const TraceFamilyDecomposition& fam,
                                         const ComplexMatrix& p, const ComplexMatrix& q);

/// The two positive-semidefinite sesquilinear forms whose difference is the
/// decoherence functional:  <x,y>_1 = sum_+ lambda_k tr(x A_k) conj(tr(y A_k))
/// and <x,y>_2 likewise over the negative family.
class SemiInnerForms {
  public:
    explicit SemiInnerForms(TraceFamilyDecomposition fam) : fam_(std::move(fam)) {}

    Complex plus(const ComplexMatrix& x, const ComplexMatrix& y) const;
    Complex minus(const ComplexMatrix& x, const ComplexMatrix& y) const;
    const TraceFamilyDecomposition& family() const { return fam_; }

  private:
    long dim() const { return fam_.history_dim; }
    TraceFamilyDecomposition fam_;
};

SemiInnerForms semi_inner_split(TraceFamilyDecomposition fam);

/// Finite linear combination of elementary tensors b_1 (x) ... (x) b_n of
/// single-time operators.
struct TensorPolynomial {
    struct Term {
        Complex coeff;
        std::vector<ComplexMatrix> factors;  ///< n factors, d x d each
    };
    std::vector<Term> terms;

    static TensorPolynomial identity(int d, int n);
};

/// GNS-type representation data for the standard decoherence functional:
/// R(b) = Pi(b) rho^{1/2} into the Hilbert-Schmidt space.
struct GNSRep {
    QuantumState state;
    Propagator prop;
    ComplexMatrix sqrt_rho;

    int n() const { return prop.spec.n(); }
    int d() const { return prop.spec.single_dim; }
};

GNSRep make_gns(const QuantumState& state, const Propagator& prop);

/// Heisenberg-dressed product map: Pi(b_1 (x) ... (x) b_n) = b~_n ... b~_1
/// with b~ = U^dag b U, extended linearly.
ComplexMatrix pi_map(const GNSRep& rep, const TensorPolynomial& b);

/// Assemble the polynomial as an operator on the full n-fold tensor space.
ComplexMatrix assemble_tensor_operator(const TensorPolynomial& b, int d, int n);

struct GnsValue {
    Complex value;      ///< <R(b'), R(b)> in the Hilbert-Schmidt inner product
    Complex lhs_check;  ///< tr( Pi(b')^dag Pi(b) rho )
};

GnsValue gns_eval(const GNSRep& rep, const TensorPolynomial& b, const TensorPolynomial& b_prime);

/// Lower bound on ||R|| at this dimension: max over seeded candidates and
/// hill-climbed coefficient tweaks of ||Pi(b) rho^{1/2}||_HS / ||b||_op.
double estimate_R_norm(const GNSRep& rep, int restarts, std::uint64_t seed);

}  // namespace histq
