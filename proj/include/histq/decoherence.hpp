#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "histq/history_space.hpp"
#include "histq/sampling.hpp"

namespace histq {

/// Cap on the doubled-space dimension d^(2n).  Defaults to 4096; the
/// environment variable HISTQ_MAX_DIM overrides it (read once).
long doubled_dim_cap();

/// Density matrix together with its spectral resolution
/// rho = sum_i weights(i) |psi_i><psi_i|, weights ascending from eigh.
struct QuantumState {
    ComplexMatrix rho;
    RealVector weights;        ///< eigenvalues of rho, clamped to >= 0
    ComplexMatrix eigvecs;     ///< column i is psi_i

    int dim() const { return static_cast<int>(rho.rows()); }

    /// Validates the density invariants and computes the spectrum.
    static QuantumState from_density(const ComplexMatrix& rho, const Tolerance& tol = {});
    static QuantumState pure(const ComplexVector& psi);
    static QuantumState maximally_mixed(int d);
    /// Diagonal state with the given weights in the standard basis
    /// (weights must be >= 0 and sum to 1).
    static QuantumState diagonal(const RealVector& weights);
};

/// One unitary per time slot.  u_list[i] propagates states from the
/// reference time t_0 to t_{i+1}; Heisenberg dressing is U^dag h U.
struct Propagator {
    HistorySpec spec;
    std::vector<ComplexMatrix> u_list;

    static Propagator identity(const HistorySpec& spec);
};

/// Validates unitarity of every factor.
Propagator make_propagator(const HistorySpec& spec, std::vector<ComplexMatrix> u_list,
                           const Tolerance& tol = {});

enum class Provenance { Standard, External };

/// The ILS operator X on the 2n-fold tensor space (copy-1 factors first,
/// then copy-2 factors) together with its propagator-free factor Y.
struct ILSOperator {
    HistorySpec spec;
    ComplexMatrix x;
    ComplexMatrix y;  ///< equal to x for identity dynamics; empty for external operators
    Provenance provenance = Provenance::External;

    static ILSOperator external(const HistorySpec& spec, ComplexMatrix x);
};

/// Heisenberg-picture class operator of a homogeneous history:
/// h~_{t_n} ... h~_{t_1} with h~ = U^dag h U.
ComplexMatrix class_operator(const HomogeneousHistory& h, const Propagator& prop);

/// Standard decoherence functional on homogeneous pairs:
/// d_rho(h,k) = tr( C_h rho C_k^dag ) with C the class operator.
Complex eval_standard(const QuantumState& state, const Propagator& prop,
                      const HomogeneousHistory& h, const HomogeneousHistory& k);

/// The propagator-free ILS factor Y as the series over the spectral
/// resolution of rho.  aux_bases supplies the 2n-1 arbitrary orthonormal
/// bases e^2..e^{2n} (columns of unitaries); empty means the standard
/// basis.  The first basis e^1 is always the rho-eigenbasis.
ComplexMatrix build_Y(const QuantumState& state, const HistorySpec& spec,
                      const std::vector<ComplexMatrix>& aux_bases = {});

/// Full ILS operator: x = (U (x) U) y (U (x) U)^dag with
/// U = u_1 (x) ... (x) u_n, so that eval_ils reproduces eval_standard
/// under the U^dag h U dressing convention.
ILSOperator build_X(const QuantumState& state, const Propagator& prop,
                    const std::vector<ComplexMatrix>& aux_bases = {});

/// d(p,q) = tr( (p (x) q) x ), defined for every projector pair.
Complex eval_ils(const ILSOperator& x, const HistoryProjector& p, const HistoryProjector& q);

/// Same contraction on raw history-space matrices (no spec bookkeeping).
Complex eval_ils_matrices(const ILSOperator& x, const ComplexMatrix& p, const ComplexMatrix& q);

/// Evaluation closure over raw history-space matrices.
using DecoherenceFn = std::function<Complex(const ComplexMatrix&, const ComplexMatrix&)>;

DecoherenceFn ils_functional(ILSOperator x);

/// Decoherence-functional axiom violations, maxima over the sample set.
struct AxiomReport {
    double hermiticity_violation = 0.0;  ///< max |d(p,q) - conj(d(q,p))|
    double diagonal_negativity = 0.0;    ///< max of |Im d(p,p)| and (-Re d(p,p))+
    double normalization_error = 0.0;    ///< max of |d(1,1)-1| and |d(0,p)|
    double additivity_violation = 0.0;   ///< max |d(p+p',q) - d(p,q) - d(p',q)|, p ⊥ p'
    int samples_used = 0;
    std::uint64_t seed = 0;

    double max_violation() const;
};

AxiomReport check_axioms(const DecoherenceFn& df, ProjectorSampler& sampler, int samples);

/// Results of the three ILS admissibility checks.
struct IlsConstraintReport {
    double trace_error = 0.0;        ///< |tr(x) - 1|
    double swap_residual = 0.0;      ///< max |x - F x^dag F|
    double min_diagonal_sampled = 0.0;
    double min_diagonal_descent = 0.0;
    ComplexVector certificate;       ///< unit vector attaining min_diagonal_descent
    int samples_used = 0;
    int restarts = 0;
    std::uint64_t seed = 0;

    double min_diagonal() const { return std::min(min_diagonal_sampled, min_diagonal_descent); }
};

/// Exact trace and swap-hermiticity checks plus diagonal positivity probed
/// by random projectors and multi-start projected gradient descent of
/// psi -> tr((P_psi (x) P_psi) x) over unit vectors.
IlsConstraintReport check_ils_constraints(const ILSOperator& x, int samples, int restarts,
                                          std::uint64_t seed);

/// Residual of the swap-hermiticity identity x = F x^dag F.
double swap_hermiticity_residual(const ComplexMatrix& x, long history_dim);

}  // namespace histq
