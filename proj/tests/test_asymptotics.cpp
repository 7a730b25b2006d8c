#include <doctest.h>

#include "histq/asymptotics.hpp"
#include "histq/scenario.hpp"
#include "test_helpers.hpp"

using namespace histq;
using namespace histq::testing;

namespace {

Propagator identity_rule(const HistorySpec& s) { return Propagator::identity(s); }

ComplexMatrix identity_q(int d) { return ComplexMatrix::Identity(d * d, d * d); }

/// Literal truncated series of the two-time functional: four nested index
/// loops over the standard basis, no folding.  Oracle for divergence_probe.
Complex decf3_literal(const std::vector<double>& weights, const ComplexMatrix& p,
                      const ComplexMatrix& q, int d) {
    auto w = [&](int k) { return k < static_cast<int>(weights.size()) ? weights[k] : 0.0; };
    Complex acc(0, 0);
    for (int j1 = 0; j1 < d; ++j1)
        for (int j2 = 0; j2 < d; ++j2)
            for (int j3 = 0; j3 < d; ++j3)
                for (int j4 = 0; j4 < d; ++j4)
                    acc += w(j1) * p(j4 * d + j3, j1 * d + j4) * q(j1 * d + j2, j2 * d + j3);
    return acc;
}

ComplexMatrix phi_projector(int i, int i1, int d) {
    ComplexVector phi = ComplexVector::Zero(d * d);
    phi(i * d + i1) = 1.0 / std::sqrt(2.0);
    phi(i1 * d + i) += 1.0 / std::sqrt(2.0);
    return phi * phi.adjoint();
}

}  // namespace

TEST_SUITE_BEGIN("asymptotics");

TEST_CASE("pure-state n=1 sweep: trace norm d, operator norm 1") {
    const SweepResult sweep = norm_sweep(make_state_family("pure"), 1, {2, 3, 4, 5, 6, 7, 8},
                                         identity_rule, 21, 128, "pure");
    REQUIRE(sweep.rows.size() == 7);
    for (const auto& row : sweep.rows) {
        CHECK(row.trace_norm == doctest::Approx(row.d).epsilon(1e-9));
        CHECK(row.operator_norm <= 1.0 + 1e-9);
        CHECK(row.tracial_sup <= row.operator_norm + 1e-9);
    }
}

TEST_CASE("pure-state X coincides with (P_psi (x) I) swap up to singular values") {
    // independent construction of the same operator and its singular values
    for (int d : {2, 3, 4}) {
        ComplexVector psi = ComplexVector::Zero(d);
        psi(0) = 1.0;
        const QuantumState state = QuantumState::pure(psi);
        const HistorySpec spec(d, {1.0});
        const ILSOperator x = build_X(state, Propagator::identity(spec));

        ComplexMatrix swap = ComplexMatrix::Zero(d * d, d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
        const ComplexMatrix direct = kron(state.rho, eye(d)) * swap;
        CHECK(max_diff(x.x, direct) < 1e-12);
        const MatrixNorms nm = norms(direct);
        CHECK(std::abs(norms(x.x).trace_norm - nm.trace_norm) < 1e-9);
        CHECK(nm.trace_norm == doctest::Approx(d).epsilon(1e-12));
    }
}

TEST_CASE("mixed families: trace norm strictly increasing in d") {
    for (const std::string family : {"maximally_mixed", "geometric:0.5"}) {
        const SweepResult sweep = norm_sweep(make_state_family(family), 1, {2, 3, 4, 5, 6},
                                             identity_rule, 22, 64, family);
        for (std::size_t i = 1; i < sweep.rows.size(); ++i)
            CHECK(sweep.rows[i].trace_norm > sweep.rows[i - 1].trace_norm + 1e-6);
        for (const auto& row : sweep.rows) CHECK(row.operator_norm <= 1.0 + 1e-9);
    }
}

TEST_CASE("n=2 sweep respects the doubled-space cap") {
    CHECK_THROWS_AS(norm_sweep(make_state_family("pure"), 2, {2, 100}, identity_rule, 1, 8),
                    DimensionCap);
}

TEST_CASE("divergence probe with q = I follows the closed form") {
    const std::vector<double> weights = {0.4, 0.3, 0.2, 0.1};
    const int i1 = 0;
    std::vector<int> dims;
    for (int d = 4; d <= 20; ++d) dims.push_back(d);
    const DivergenceResult res = divergence_probe(weights, i1, dims, identity_q);

    REQUIRE(res.rows.size() == dims.size());
    for (const auto& row : res.rows) {
        double tail = 0.0;
        for (int i = 0; i < row.d && i < 4; ++i)
            if (i != i1) tail += weights[i];
        const double expected = 0.5 * ((row.d - 1) * weights[i1] + tail);
        CHECK(std::abs(row.partial_sum.real() - expected) < 1e-12);
        CHECK(std::abs(row.partial_sum.imag()) < 1e-12);
    }
    CHECK(std::abs(res.fitted_slope - weights[i1] / 2.0) < 1e-9);
    CHECK(res.fit_residual <= 1e-9);
    CHECK(res.omega_i1 == weights[i1]);
}

TEST_CASE("single member value: closed formula equals the literal series") {
    Rng rng(91);
    const std::vector<double> weights = {0.5, 0.25, 0.15, 0.1};
    const int d = 4, i1 = 1;
    for (int i = 0; i < d; ++i) {
        if (i == i1) continue;
        const ComplexMatrix member = phi_projector(i, i1, d);
        // q = identity and a random two-time projector
        for (const ComplexMatrix& q :
             {identity_q(d), random_projector(d * d, rng)}) {
            const Complex via_formula = divergence_member_value(weights, i1, i, d, q);
            const Complex via_series = decf3_literal(weights, member, q, d);
            CHECK(std::abs(via_formula - via_series) < 1e-9);
        }
    }
}

TEST_CASE("probe partial sums equal the literal series for random q") {
    Rng rng(92);
    const std::vector<double> weights = {0.6, 0.4};
    const int i1 = 0;
    for (int d : {3, 5}) {
        const ComplexMatrix q = random_projector(d * d, rng);
        const DivergenceResult res =
            divergence_probe(weights, i1, {d}, [&](int) { return q; });
        ComplexMatrix proj = ComplexMatrix::Zero(d * d, d * d);
        for (int i = 0; i < d; ++i)
            if (i != i1) proj += phi_projector(i, i1, d);
        CHECK(std::abs(res.rows[0].partial_sum - decf3_literal(weights, proj, q, d)) < 1e-9);
    }
}

TEST_CASE("concentrated weights grow linearly as (d-1)/2") {
    const std::vector<double> weights = {1.0};
    const DivergenceResult res = divergence_probe(weights, 0, {4, 8, 12}, identity_q);
    for (const auto& row : res.rows)
        CHECK(std::abs(row.partial_sum.real() - (row.d - 1) / 2.0) < 1e-12);
    CHECK(std::abs(res.fitted_slope - 0.5) < 1e-12);
}

TEST_CASE("divergence probe rejects an out-of-range distinguished index") {
    CHECK_THROWS_AS(divergence_probe({0.5, 0.5}, 4, {4, 6}, identity_q), BadIndex);
    CHECK_THROWS_AS(divergence_probe({1.0}, 0, {}, identity_q), BadIndex);
}

TEST_CASE("tracial bound probe: standard operator stays within 1") {
    Rng rng(93);
    const HistorySpec spec(3, {1.0});
    const QuantumState state = QuantumState::pure(random_unit_vector(3, rng));
    const ILSOperator x = build_X(state, Propagator::identity(spec));
    CHECK(tracial_bound_probe(x, 128, 5) <= 1.0 + 1e-9);
}

TEST_CASE("tracial bound probe: constant quadratic form and monotonicity") {
    const HistorySpec spec(2, {1.0});
    const int dim2 = 4;
    const ILSOperator x =
        ILSOperator::external(spec, ComplexMatrix::Identity(dim2, dim2) / double(dim2));
    const double v64 = tracial_bound_probe(x, 64, 7);
    CHECK(v64 == doctest::Approx(1.0 / dim2).epsilon(1e-12));

    Rng rng(94);
    const QuantumState state = QuantumState::from_density(random_density(2, rng));
    const ILSOperator xs = build_X(state, Propagator::identity(spec));
    const double a = tracial_bound_probe(xs, 50, 11);
    const double b = tracial_bound_probe(xs, 100, 11);
    CHECK(b >= a);  // same seed stream, larger sample set
}

TEST_CASE("fit_line recovers exact affine data") {
    const auto [slope, residual] = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(residual < 1e-12);
}

TEST_SUITE_END();
