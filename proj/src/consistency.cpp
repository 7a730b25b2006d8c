#include "histq/consistency.hpp"

#include <cmath>
#include <set>

namespace histq {

ConsistencyReport analyze_partition(const DecoherenceFn& df, const BooleanPartition& part,
                                    double tol) {
    verify_partition(part);
    const int m = static_cast<int>(part.members.size());

    ConsistencyReport rep;
    rep.labels = part.labels;
    rep.tolerance_used = tol;
    rep.matrix = ComplexMatrix(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            rep.matrix(i, j) = df(part.members[i].matrix, part.members[j].matrix);

    rep.max_offdiag_re = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j)
                rep.max_offdiag_re = std::max(rep.max_offdiag_re,
                                              std::abs(rep.matrix(i, j).real()));
    rep.consistent = rep.max_offdiag_re <= tol;

    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        rep.probabilities.push_back(rep.matrix(i, i).real());
        sum += rep.matrix(i, i).real();
    }
    rep.prob_sum_error = std::abs(sum - 1.0);
    return rep;
}

CoarseGrainReport coarse_grain_check(const DecoherenceFn& df, const BooleanPartition& part,
                                     const std::vector<std::vector<int>>& grouping, double tol) {
    const int m = static_cast<int>(part.members.size());
    std::set<int> seen;
    for (const auto& group : grouping) {
        if (group.empty()) throw BadGrouping("coarse_grain_check: empty group");
        for (int i : group) {
            if (i < 0 || i >= m) throw BadGrouping("coarse_grain_check: index out of range");
            if (!seen.insert(i).second)
                throw BadGrouping("coarse_grain_check: index " + std::to_string(i) +
                                  " appears twice");
        }
    }
    if (static_cast<int>(seen.size()) != m)
        throw BadGrouping("coarse_grain_check: grouping does not cover all members");

    const long dim = part.spec.history_dim();
    CoarseGrainReport rep;
    std::vector<ComplexMatrix> coarse;
    for (const auto& group : grouping) {
        ComplexMatrix pg = ComplexMatrix::Zero(dim, dim);
        for (int i : group) pg += part.members[i].matrix;
        for (const auto& q : part.members) {
            Complex fine(0.0, 0.0);
            for (int i : group) fine += df(part.members[i].matrix, q.matrix);
            rep.max_violation = std::max(rep.max_violation, std::abs(df(pg, q.matrix) - fine));
        }
        coarse.push_back(std::move(pg));
    }

    const ConsistencyReport cons = analyze_partition(df, part, tol);
    rep.partition_consistent = cons.consistent;
    if (cons.consistent) {
        for (std::size_t g = 0; g < grouping.size(); ++g) {
            double fine_sum = 0.0;
            for (int i : grouping[g]) fine_sum += cons.probabilities[i];
            const double coarse_prob = df(coarse[g], coarse[g]).real();
            rep.max_probability_violation =
                std::max(rep.max_probability_violation, std::abs(coarse_prob - fine_sum));
        }
    }
    return rep;
}

}  // namespace histq
