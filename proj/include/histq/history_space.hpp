#pragma once

#include <optional>
#include <string>
#include <vector>

#include "histq/tensor_algebra.hpp"

namespace histq {

/// Hard ceiling on the n-fold history dimension d^n.
inline constexpr long kMaxHistoryDim = 4096;

/// A single-time dimension d and an ordered time grid t_1 < ... < t_n.
/// The history Hilbert space is the n-fold tensor product of C^d with
/// itself, one factor per time, t_1 left-most.
struct HistorySpec {
    int single_dim = 2;
    std::vector<double> times;

    HistorySpec() = default;
    HistorySpec(int d, std::vector<double> t);

    int n() const { return static_cast<int>(times.size()); }
    long history_dim() const;

    bool operator==(const HistorySpec&) const = default;
};

/// d^exponent with overflow/cap checking; throws DimensionCap above cap.
long pow_checked(int base, int exponent, long cap);

/// A homogeneous history: one single-time projector per time slot.
struct HomogeneousHistory {
    HistorySpec spec;
    std::vector<ComplexMatrix> factors;
};

/// A projector on the full history space (homogeneous or not).
struct HistoryProjector {
    HistorySpec spec;
    ComplexMatrix matrix;
};

/// Orthogonal projectors summing to the identity of the history space.
struct BooleanPartition {
    HistorySpec spec;
    std::vector<HistoryProjector> members;
    std::vector<std::string> labels;
};

/// Tensor-embed a homogeneous history as factors[0] (x) ... (x) factors[n-1].
/// Throws InvalidFactor when a factor fails projector validation.
HistoryProjector embed_homogeneous(const HomogeneousHistory& h, const Tolerance& tol = {});

HistoryProjector lattice_complement(const HistoryProjector& p);

/// Projector onto range(p) ∩ range(q), computed as the nullspace projector
/// of (I-p) + (I-q).
HistoryProjector lattice_meet(const HistoryProjector& p, const HistoryProjector& q,
                              const Tolerance& tol = {});

/// De Morgan dual of the meet.
HistoryProjector lattice_join(const HistoryProjector& p, const HistoryProjector& q,
                              const Tolerance& tol = {});

enum class LatticeKind { Meet, Join, Complement };

/// Dispatching form; q must be absent exactly for complements.
HistoryProjector lattice_op(LatticeKind kind, const HistoryProjector& p,
                            const std::optional<HistoryProjector>& q = std::nullopt,
                            const Tolerance& tol = {});

/// True iff max entry of p*q is at most tol.structure_abs.
bool orthogonal(const HistoryProjector& p, const HistoryProjector& q, const Tolerance& tol = {});

/// All tensor products of per-time partition cells.  Labels default to the
/// index tuple, e.g. "(0,1)".  Throws NotAPartition naming the offending
/// time slot when a per-time list is not a partition of the identity.
BooleanPartition product_partition(const HistorySpec& spec,
                                   const std::vector<std::vector<ComplexMatrix>>& per_time,
                                   const Tolerance& tol = {});

/// Re-checks the BooleanPartition invariants (orthogonality, sum = I).
void verify_partition(const BooleanPartition& part, const Tolerance& tol = {});

}  // namespace histq
