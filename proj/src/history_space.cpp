#include "histq/history_space.hpp"

#include <sstream>

namespace histq {

long pow_checked(int base, int exponent, long cap) {
    long v = 1;
    for (int i = 0; i < exponent; ++i) {
        v *= base;
        if (v > cap) {
            std::ostringstream os;
            os << base << "^" << exponent << " exceeds the dimension cap " << cap;
            throw DimensionCap(os.str());
        }
    }
    return v;
}

HistorySpec::HistorySpec(int d, std::vector<double> t) : single_dim(d), times(std::move(t)) {
    if (single_dim < 2) throw ValidationError("HistorySpec: single_dim must be >= 2");
    if (times.empty()) throw ValidationError("HistorySpec: at least one time is required");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i - 1] < times[i]))
            throw ValidationError("HistorySpec: times must be strictly increasing");
    pow_checked(single_dim, n(), kMaxHistoryDim);
}

long HistorySpec::history_dim() const { return pow_checked(single_dim, n(), kMaxHistoryDim); }

namespace {

void require_same_spec(const HistorySpec& a, const HistorySpec& b, const char* where) {
    if (!(a == b)) throw SpecMismatch(std::string(where) + ": history specs differ");
}

}  // namespace

HistoryProjector embed_homogeneous(const HomogeneousHistory& h, const Tolerance& tol) {
    if (static_cast<int>(h.factors.size()) != h.spec.n())
        throw InvalidFactor("embed_homogeneous: factor count differs from the time grid");
    ComplexMatrix m;
    for (std::size_t i = 0; i < h.factors.size(); ++i) {
        const ComplexMatrix& f = h.factors[i];
        if (f.rows() != h.spec.single_dim || f.cols() != h.spec.single_dim)
            throw InvalidFactor("embed_homogeneous: factor " + std::to_string(i) +
                                " has the wrong dimension");
        const ValidationReport rep = validate(f, MatrixKind::Projection, tol);
        if (!rep.ok)
            throw InvalidFactor("embed_homogeneous: factor " + std::to_string(i) +
                                " is not a projector (" + rep.detail + ")");
        m = i == 0 ? f : kron(m, f);
    }
    return {h.spec, std::move(m)};
}

HistoryProjector lattice_complement(const HistoryProjector& p) {
    const long dim = p.spec.history_dim();
    return {p.spec, ComplexMatrix::Identity(dim, dim) - p.matrix};
}

HistoryProjector lattice_meet(const HistoryProjector& p, const HistoryProjector& q,
                              const Tolerance& tol) {
    require_same_spec(p.spec, q.spec, "lattice_meet");
    const long dim = p.spec.history_dim();
    const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix a = (eye - p.matrix) + (eye - q.matrix);
    return {p.spec, nullspace_projector((a + a.adjoint()) / 2.0, tol)};
}

HistoryProjector lattice_join(const HistoryProjector& p, const HistoryProjector& q,
                              const Tolerance& tol) {
    require_same_spec(p.spec, q.spec, "lattice_join");
    return lattice_complement(lattice_meet(lattice_complement(p), lattice_complement(q), tol));
}

HistoryProjector lattice_op(LatticeKind kind, const HistoryProjector& p,
                            const std::optional<HistoryProjector>& q, const Tolerance& tol) {
    if (kind == LatticeKind::Complement) {
        if (q) throw SpecMismatch("lattice_op: complement takes a single projector");
        return lattice_complement(p);
    }
    if (!q) throw SpecMismatch("lattice_op: meet/join need two projectors");
    return kind == LatticeKind::Meet ? lattice_meet(p, *q, tol) : lattice_join(p, *q, tol);
}

bool orthogonal(const HistoryProjector& p, const HistoryProjector& q, const Tolerance& tol) {
    require_same_spec(p.spec, q.spec, "orthogonal");
    return max_abs(p.matrix * q.matrix) <= tol.structure_abs;
}

BooleanPartition product_partition(const HistorySpec& spec,
                                   const std::vector<std::vector<ComplexMatrix>>& per_time,
                                   const Tolerance& tol) {
    if (static_cast<int>(per_time.size()) != spec.n())
        throw NotAPartition("product_partition: one partition per time slot is required");
    const int d = spec.single_dim;
    for (std::size_t t = 0; t < per_time.size(); ++t) {
        const auto& cells = per_time[t];
        if (cells.empty())
            throw NotAPartition("product_partition: empty partition at time slot " +
                                std::to_string(t));
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const auto& cell : cells) {
            if (cell.rows() != d || cell.cols() != d)
                throw NotAPartition("product_partition: wrong cell dimension at time slot " +
                                    std::to_string(t));
            if (!validate(cell, MatrixKind::Projection, tol).ok)
                throw NotAPartition("product_partition: cell is not a projector at time slot " +
                                    std::to_string(t));
            sum += cell;
        }
        if (max_abs(sum - ComplexMatrix::Identity(d, d)) > tol.eq_abs)
            throw NotAPartition("product_partition: cells do not sum to identity at time slot " +
                                std::to_string(t));
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = i + 1; j < cells.size(); ++j)
                if (max_abs(cells[i] * cells[j]) > tol.structure_abs)
                    throw NotAPartition("product_partition: cells are not orthogonal at time slot " +
                                        std::to_string(t));
    }

    BooleanPartition part;
    part.spec = spec;
    std::vector<std::size_t> idx(per_time.size(), 0);
    while (true) {
        ComplexMatrix m;
        std::ostringstream label;
        label << "(";
        for (std::size_t t = 0; t < per_time.size(); ++t) {
            const ComplexMatrix& cell = per_time[t][idx[t]];
            m = t == 0 ? cell : kron(m, cell);
            label << (t ? "," : "") << idx[t];
        }
        label << ")";
        part.members.push_back({spec, std::move(m)});
        part.labels.push_back(label.str());

        // odometer over index tuples, last slot fastest
        std::size_t t = per_time.size();
        while (t > 0) {
            --t;
            if (++idx[t] < per_time[t].size()) break;
            idx[t] = 0;
            if (t == 0) {
                verify_partition(part, tol);
                return part;
            }
        }
    }
}

void verify_partition(const BooleanPartition& part, const Tolerance& tol) {
    const long dim = part.spec.history_dim();
    if (part.members.empty()) throw NotAPartition("partition has no members");
    if (part.labels.size() != part.members.size())
        throw NotAPartition("partition labels do not match members");
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& m : part.members) {
        if (!(m.spec == part.spec)) throw NotAPartition("partition member has a foreign spec");
        if (m.matrix.rows() != dim || m.matrix.cols() != dim)
            throw NotAPartition("partition member has the wrong dimension");
        sum += m.matrix;
    }
    if (max_abs(sum - ComplexMatrix::Identity(dim, dim)) > tol.eq_abs)
        throw NotAPartition("partition members do not sum to the identity");
    for (std::size_t i = 0; i < part.members.size(); ++i)
        for (std::size_t j = i + 1; j < part.members.size(); ++j)
            if (max_abs(part.members[i].matrix * part.members[j].matrix) > tol.structure_abs)
                throw NotAPartition("partition members " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are not orthogonal");
}

}  // namespace histq
