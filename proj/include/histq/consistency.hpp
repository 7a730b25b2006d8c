#pragma once

#include <string>
#include <vector>

#include "histq/decoherence.hpp"

namespace histq {

/// Decoherence matrix of a Boolean partition with the consistency verdict
/// and the candidate probabilities (its diagonal).
struct ConsistencyReport {
    ComplexMatrix matrix;  ///< d(p_i, p_j) over partition members
    std::vector<std::string> labels;
    double max_offdiag_re = 0.0;
    bool consistent = false;
    std::vector<double> probabilities;
    double prob_sum_error = 0.0;
    double tolerance_used = 0.0;
};

/// Evaluates the decoherence matrix over the partition members; the
/// partition is consistent iff max_{i!=j} |Re d(p_i,p_j)| <= tol.
ConsistencyReport analyze_partition(const DecoherenceFn& df, const BooleanPartition& part,
                                    double tol = 1e-9);

struct CoarseGrainReport {
    double max_violation = 0.0;              ///< additivity over groups
    double max_probability_violation = 0.0;  ///< coarse vs summed fine probabilities
    bool partition_consistent = false;
};

/// Verifies d(sum_{i in G} p_i, q) = sum_{i in G} d(p_i, q) for every group
/// G of the grouping and every member q; for consistent partitions also
/// compares coarse-grained probabilities against sums of fine-grained ones.
/// Throws BadGrouping unless the grouping covers all indices disjointly.
CoarseGrainReport coarse_grain_check(const DecoherenceFn& df, const BooleanPartition& part,
                                     const std::vector<std::vector<int>>& grouping, double tol);

}  // namespace histq
