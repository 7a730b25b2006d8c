#include <doctest.h>

#include "histq/history_space.hpp"
#include "histq/sampling.hpp"
#include "test_helpers.hpp"

using namespace histq;
using namespace histq::testing;

namespace {

HistorySpec qubit_spec(int n) {
    std::vector<double> times;
    for (int i = 0; i < n; ++i) times.push_back(i);
    return HistorySpec(2, times);
}

/// Pair of commuting projectors: diagonal in a shared random basis.
std::pair<ComplexMatrix, ComplexMatrix> commuting_pair(int dim, Rng& rng) {
    const ComplexMatrix v = haar_unitary(dim, rng);
    ComplexMatrix dp = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix dq = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        if (rng.uniform() < 0.5) dp(i, i) = 1.0;
        if (rng.uniform() < 0.5) dq(i, i) = 1.0;
    }
    return {v * dp * v.adjoint(), v * dq * v.adjoint()};
}

}  // namespace

TEST_SUITE_BEGIN("history_space");

TEST_CASE("spec validation and dimension cap") {
    CHECK(qubit_spec(3).history_dim() == 8);
    CHECK_THROWS_AS(HistorySpec(2, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(HistorySpec(1, {0.0}), ValidationError);
    CHECK_THROWS_AS(HistorySpec(2, {}), ValidationError);
    // 2^13 = 8192 > 4096
    std::vector<double> times;
    for (int i = 0; i < 13; ++i) times.push_back(i);
    CHECK_THROWS_AS(HistorySpec(2, times), DimensionCap);
}

TEST_CASE("embed_homogeneous identity and explicit qubit case") {
    const HistorySpec spec = qubit_spec(2);
    const HomogeneousHistory all_id{spec, {eye(2), eye(2)}};
    CHECK(max_diff(embed_homogeneous(all_id).matrix, eye(4)) == 0.0);

    const HomogeneousHistory h{spec, {p0(), p1()}};
    CHECK(max_diff(embed_homogeneous(h).matrix, diag({0, 1, 0, 0})) == 0.0);

    const HomogeneousHistory bad{spec, {p0(), 0.5 * p1()}};
    CHECK_THROWS_AS(embed_homogeneous(bad), InvalidFactor);
}

TEST_CASE("embedded histories with orthogonal factors multiply to zero") {
    Rng rng(31);
    const HistorySpec spec = qubit_spec(2);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_projector(2, 1, rng);
        const ComplexMatrix b = eye(2) - a;  // orthogonal at the shared slot
        const ComplexMatrix other = random_projector(2, 1, rng);
        const HistoryProjector hp = embed_homogeneous({spec, {a, other}});
        const HistoryProjector kp = embed_homogeneous({spec, {b, other}});
        CHECK(max_abs(hp.matrix * kp.matrix) < 1e-12);
        CHECK(orthogonal(hp, kp));
    }
}

TEST_CASE("slot-wise refinement is preserved by embedding") {
    Rng rng(32);
    const HistorySpec spec = qubit_spec(2);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix sub = random_projector(2, 1, rng);
        const HistoryProjector h = embed_homogeneous({spec, {sub, sub}});
        const HistoryProjector k = embed_homogeneous({spec, {sub, eye(2)}});
        CHECK(max_diff(h.matrix * k.matrix, h.matrix) < 1e-9);
    }
}

TEST_CASE("complement and meet with identity") {
    Rng rng(33);
    const HistorySpec spec = qubit_spec(2);
    const HistoryProjector p{spec, random_projector(4, 2, rng)};
    const HistoryProjector top{spec, eye(4)};

    CHECK(max_diff(lattice_complement(lattice_complement(p)).matrix, p.matrix) < 1e-12);
    CHECK(max_diff(lattice_meet(p, top).matrix, p.matrix) < 1e-9);
    CHECK(max_diff(lattice_op(LatticeKind::Complement, p).matrix, eye(4) - p.matrix) == 0.0);
}

TEST_CASE("meet of commuting projectors equals their product") {
    Rng rng(34);
    const HistorySpec spec = qubit_spec(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto [pm, qm] = commuting_pair(4, rng);
        const HistoryProjector p{spec, pm};
        const HistoryProjector q{spec, qm};
        CHECK(max_diff(lattice_meet(p, q).matrix, pm * qm) < 1e-9);
    }
}

TEST_CASE("meet is commutative and idempotent; join via De Morgan; meet below p") {
    Rng rng(35);
    const HistorySpec spec = qubit_spec(2);
    for (int trial = 0; trial < 10; ++trial) {
        const HistoryProjector p{spec, random_projector(4, rng)};
        const HistoryProjector q{spec, random_projector(4, rng)};
        const ComplexMatrix m = lattice_meet(p, q).matrix;
        CHECK(max_diff(m, lattice_meet(q, p).matrix) < 1e-9);
        CHECK(max_diff(lattice_meet(p, p).matrix, p.matrix) < 1e-9);
        CHECK(max_diff(m * p.matrix, m) < 1e-9);

        const ComplexMatrix dual = lattice_complement(
            lattice_meet(lattice_complement(p), lattice_complement(q))).matrix;
        CHECK(max_diff(lattice_join(p, q).matrix, dual) == 0.0);
    }
}

TEST_CASE("orthogonality predicate") {
    const HistorySpec spec = qubit_spec(2);
    const HistoryProjector p{spec, diag({1, 0, 0, 0})};
    const HistoryProjector q{spec, diag({0, 0, 1, 0})};
    const HistoryProjector top{spec, eye(4)};
    CHECK(orthogonal(p, q));
    CHECK(orthogonal(p, lattice_complement(p)));
    CHECK_FALSE(orthogonal(p, p));
    CHECK_FALSE(orthogonal(p, top));

    const HistorySpec other(3, {0.0, 1.0});
    const HistoryProjector foreign{other, ComplexMatrix::Identity(9, 9)};
    CHECK_THROWS_AS(orthogonal(p, foreign), SpecMismatch);
}

TEST_CASE("product partitions: counting, labels, invariants") {
    const HistorySpec spec = qubit_spec(2);
    const std::vector<ComplexMatrix> basis = {p0(), p1()};
    const BooleanPartition part = product_partition(spec, {basis, basis});
    REQUIRE(part.members.size() == 4);
    CHECK(part.labels[0] == "(0,0)");
    CHECK(part.labels[3] == "(1,1)");
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    for (const auto& m : part.members) sum += m.matrix;
    CHECK(max_diff(sum, eye(4)) < 1e-12);

    const BooleanPartition trivial = product_partition(spec, {{eye(2)}, {eye(2)}});
    CHECK(trivial.members.size() == 1);
    CHECK(max_diff(trivial.members[0].matrix, eye(4)) == 0.0);
}

TEST_CASE("product partition cell count multiplies per-time counts") {
    const HistorySpec spec(3, {0.0, 1.0});
    const std::vector<ComplexMatrix> two = {diag({1, 1, 0}), diag({0, 0, 1})};
    const std::vector<ComplexMatrix> three = {diag({1, 0, 0}), diag({0, 1, 0}), diag({0, 0, 1})};
    CHECK(product_partition(spec, {two, three}).members.size() == 6);
}

TEST_CASE("product partition rejects broken per-time data") {
    const HistorySpec spec = qubit_spec(2);
    const std::vector<ComplexMatrix> incomplete = {p0()};  // misses P_1
    CHECK_THROWS_WITH_AS(product_partition(spec, {incomplete, {eye(2)}}),
                         doctest::Contains("time slot 0"), NotAPartition);
    const std::vector<ComplexMatrix> overlapping = {p0(), pplus()};
    CHECK_THROWS_AS(product_partition(spec, {{eye(2)}, overlapping}), NotAPartition);
}

TEST_CASE("random product partitions satisfy the partition invariants") {
    Rng rng(36);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = rng.uniform_int(2, 3);
        const int n = rng.uniform_int(1, 3);
        std::vector<double> times;
        for (int i = 0; i < n; ++i) times.push_back(i);
        const HistorySpec spec(d, times);

        std::vector<std::vector<ComplexMatrix>> per_time;
        for (int t = 0; t < n; ++t) {
            const ComplexMatrix v = haar_unitary(d, rng);
            const int cells = rng.uniform_int(1, d);
            std::vector<ComplexMatrix> cell_list;
            int start = 0;
            for (int c = 0; c < cells; ++c) {
                const int len = c + 1 == cells ? d - start : 1;
                const ComplexMatrix cols = v.middleCols(start, len);
                cell_list.push_back(cols * cols.adjoint());
                start += len;
            }
            per_time.push_back(std::move(cell_list));
        }
        const BooleanPartition part = product_partition(spec, per_time);

        const long dim = spec.history_dim();
        ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
        for (const auto& m : part.members) sum += m.matrix;
        CHECK(max_diff(sum, eye(static_cast<int>(dim))) < 1e-9);
        for (std::size_t i = 0; i < part.members.size(); ++i)
            for (std::size_t j = i + 1; j < part.members.size(); ++j)
                CHECK(max_abs(part.members[i].matrix * part.members[j].matrix) < 1e-10);
    }
}

TEST_SUITE_END();
