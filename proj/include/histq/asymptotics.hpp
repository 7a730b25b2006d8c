#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "histq/decoherence.hpp"

namespace histq {

struct SweepRow {
    int d = 0;
    int n = 0;
    double trace_norm = 0.0;
    double operator_norm = 0.0;
    double tracial_sup = 0.0;  ///< max |<xi, X xi>| over seeded random unit vectors
};

struct SweepResult {
    std::vector<SweepRow> rows;  ///< ascending in d
    std::string state_family;
    std::uint64_t seed = 0;
};

using StateFamily = std::function<QuantumState(int d)>;
using PropagatorRule = std::function<Propagator(const HistorySpec&)>;

/// Builds X_rho for each dimension in dims and records its trace norm,
/// operator norm and the sampled quadratic-form supremum.
SweepResult norm_sweep(const StateFamily& family, int n, std::vector<int> dims,
                       const PropagatorRule& prop_rule, std::uint64_t seed,
                       int xi_samples = 512, const std::string& family_name = "");

struct DivergenceRow {
    int d = 0;
    Complex partial_sum;
};

struct DivergenceResult {
    std::vector<DivergenceRow> rows;  ///< ascending in d
    double omega_i1 = 0.0;
    double fitted_slope = 0.0;   ///< least-squares slope of Re(partial_sum) vs d
    double fit_residual = 0.0;   ///< max |fit - value|
};

/// Truncated evaluation of the two-time series functional on
/// P_d = sum_{i<d, i != i1} P_{phi_i} with phi_i = (|i,i1> + |i1,i>)/sqrt(2),
/// all auxiliary bases pinned to the rho-eigenbasis (standard basis of the
/// diagonal weight state).  weights is a fixed vector padded with zeros;
/// when renormalize is set the truncated prefix is rescaled to sum 1 per d.
DivergenceResult divergence_probe(const std::vector<double>& weights, int i1,
                                  std::vector<int> dims,
                                  const std::function<ComplexMatrix(int)>& q_rule,
                                  bool renormalize = false);

/// The closed per-member value 1/2 sum_{j2<d} ( w_{i1} f_{i1,j2,i1}(q)
/// + w_i f_{i,j2,i}(q) ) with f_{a,b,c}(q) = <e_a (x) e_b, q (e_b (x) e_c)>.
Complex divergence_member_value(const std::vector<double>& weights, int i1, int i, int d,
                                const ComplexMatrix& q);

/// max over seeded unit vectors (alternating product and entangled ones) of
/// |tr(P_xi x)|; the tracial-boundedness constant probe.
double tracial_bound_probe(const ILSOperator& x, int samples, std::uint64_t seed);

/// Least-squares line fit y ~ a + b*x; returns {slope, max |residual|}.
std::pair<double, double> fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace histq
