#include "histq/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace histq {

namespace {

std::vector<double> default_times(int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = static_cast<double>(i + 1);
    return t;
}

}  // namespace

SweepResult norm_sweep(const StateFamily& family, int n, std::vector<int> dims,
                       const PropagatorRule& prop_rule, std::uint64_t seed, int xi_samples,
                       const std::string& family_name) {
    std::sort(dims.begin(), dims.end());
    for (int d : dims) pow_checked(d, 2 * n, doubled_dim_cap());

    SweepResult result;
    result.state_family = family_name;
    result.seed = seed;
    for (int d : dims) {
        const HistorySpec spec(d, default_times(n));
        const QuantumState state = family(d);
        const Propagator prop = prop_rule(spec);
        const ILSOperator x = build_X(state, prop);

        SweepRow row;
        row.d = d;
        row.n = n;
        const MatrixNorms nm = norms(x.x);
        row.trace_norm = nm.trace_norm;
        row.operator_norm = nm.operator_norm;

        Rng rng(seed + static_cast<std::uint64_t>(d));
        const int dim2 = static_cast<int>(x.x.rows());
        double sup = 0.0;
        for (int s = 0; s < xi_samples; ++s) {
            const ComplexVector xi = random_unit_vector(dim2, rng);
            sup = std::max(sup, std::abs(xi.dot(x.x * xi)));
        }
        row.tracial_sup = sup;
        result.rows.push_back(row);
    }
    return result;
}

Complex divergence_member_value(const std::vector<double>& weights, int i1, int i, int d,
                                const ComplexMatrix& q) {
    auto w = [&](int k) { return k < static_cast<int>(weights.size()) ? weights[k] : 0.0; };
    auto f = [&](int a, int b, int c) { return q(a * d + b, b * d + c); };
    Complex acc(0.0, 0.0);
    for (int j2 = 0; j2 < d; ++j2) acc += w(i1) * f(i1, j2, i1) + w(i) * f(i, j2, i);
    return 0.5 * acc;
}

DivergenceResult divergence_probe(const std::vector<double>& weights, int i1,
                                  std::vector<int> dims,
                                  const std::function<ComplexMatrix(int)>& q_rule,
                                  bool renormalize) {
    if (dims.empty()) throw BadIndex("divergence_probe: no dimensions given");
    std::sort(dims.begin(), dims.end());
    if (i1 < 0 || i1 >= dims.front())
        throw BadIndex("divergence_probe: i1 must lie below the smallest dimension");
    if (dims.front() < 2) throw BadIndex("divergence_probe: dimensions must be >= 2");

    DivergenceResult result;
    result.omega_i1 = i1 < static_cast<int>(weights.size()) ? weights[i1] : 0.0;

    for (int d : dims) {
        std::vector<double> w(d, 0.0);
        for (int k = 0; k < d && k < static_cast<int>(weights.size()); ++k) w[k] = weights[k];
        if (renormalize) {
            double s = 0.0;
            for (double v : w) s += v;
            if (s > 0)
                for (double& v : w) v /= s;
        }

        const ComplexMatrix q = q_rule(d);
        if (q.rows() != static_cast<long>(d) * d || q.cols() != static_cast<long>(d) * d)
            throw SpecMismatch("divergence_probe: q must live on the two-time history space");

        // P_d = sum over the pairwise orthogonal phi_i.
        ComplexMatrix proj = ComplexMatrix::Zero(static_cast<long>(d) * d,
                                                 static_cast<long>(d) * d);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int i = 0; i < d; ++i) {
            if (i == i1) continue;
            ComplexVector phi = ComplexVector::Zero(static_cast<long>(d) * d);
            phi(static_cast<long>(i) * d + i1) += inv_sqrt2;
            phi(static_cast<long>(i1) * d + i) += inv_sqrt2;
            proj.noalias() += phi * phi.adjoint();
        }

        // Truncated series with all bases equal to the standard basis:
        //   sum_{j1,j2,j3,j4 < d} w_{j1} <e_{j4} (x) e_{j3}, P (e_{j1} (x) e_{j4})>
        //                              * <e_{j1} (x) e_{j2}, q (e_{j2} (x) e_{j3})>.
        // The j2 sum only touches q, so it is folded into S(j1,j3) first.
        ComplexMatrix s = ComplexMatrix::Zero(d, d);
        for (int j1 = 0; j1 < d; ++j1)
            for (int j3 = 0; j3 < d; ++j3)
                for (int j2 = 0; j2 < d; ++j2)
                    s(j1, j3) += q(static_cast<long>(j1) * d + j2,
                                   static_cast<long>(j2) * d + j3);

        Complex partial(0.0, 0.0);
        for (int j1 = 0; j1 < d; ++j1) {
            if (w[j1] == 0.0) continue;
            for (int j3 = 0; j3 < d; ++j3)
                for (int j4 = 0; j4 < d; ++j4)
                    partial += w[j1] *
                               proj(static_cast<long>(j4) * d + j3,
                                    static_cast<long>(j1) * d + j4) *
                               s(j1, j3);
        }
        result.rows.push_back({d, partial});
    }

    std::vector<double> xs, ys;
    for (const auto& row : result.rows) {
        xs.push_back(static_cast<double>(row.d));
        ys.push_back(row.partial_sum.real());
    }
    const auto [slope, residual] = fit_line(xs, ys);
    result.fitted_slope = slope;
    result.fit_residual = residual;
    return result;
}

double tracial_bound_probe(const ILSOperator& x, int samples, std::uint64_t seed) {
    Rng rng(seed);
    const int dim = static_cast<int>(x.spec.history_dim());
    const int dim2 = static_cast<int>(x.x.rows());
    double sup = 0.0;
    for (int s = 0; s < samples; ++s) {
        ComplexVector xi;
        if (s % 2 == 0) {
            const ComplexVector a = random_unit_vector(dim, rng);
            const ComplexVector b = random_unit_vector(dim, rng);
            xi.resize(dim2);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) xi(static_cast<long>(i) * dim + j) = a(i) * b(j);
        } else {
            xi = random_unit_vector(dim2, rng);
        }
        sup = std::max(sup, std::abs(xi.dot(x.x * xi)));
    }
    return sup;
}

std::pair<double, double> fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 2) return {0.0, 0.0};
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    const double intercept = my - slope * mx;
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        residual = std::max(residual, std::abs(intercept + slope * xs[i] - ys[i]));
    return {slope, residual};
}

}  // namespace histq
