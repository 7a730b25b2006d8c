#include "histq/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace histq {

long doubled_dim_cap() {
    static const long cap = [] {
        if (const char* env = std::getenv("HISTQ_MAX_DIM")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0) return v;
        }
        return 4096L;
    }();
    return cap;
}

QuantumState QuantumState::from_density(const ComplexMatrix& rho, const Tolerance& tol) {
    const ValidationReport rep = validate(rho, MatrixKind::Density, tol);
    if (!rep.ok)
        throw ValidationError("QuantumState: not a density matrix (" + rep.detail +
                              ", violation " + std::to_string(rep.max_violation) + ")");
    EighResult eig = eigh((rho + rho.adjoint()) / 2.0, tol);
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
        eig.eigenvalues(i) = std::max(eig.eigenvalues(i), 0.0);
    return {rho, std::move(eig.eigenvalues), std::move(eig.eigenvectors)};
}

QuantumState QuantumState::pure(const ComplexVector& psi) {
    const double nrm = psi.norm();
    if (nrm == 0.0) throw ValidationError("QuantumState::pure: zero vector");
    const ComplexVector v = psi / nrm;
    return from_density(v * v.adjoint());
}

QuantumState QuantumState::maximally_mixed(int d) {
    return from_density(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

QuantumState QuantumState::diagonal(const RealVector& weights) {
    const int d = static_cast<int>(weights.size());
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) rho(i, i) = weights(i);
    return from_density(rho);
}

Propagator Propagator::identity(const HistorySpec& spec) {
    const ComplexMatrix eye = ComplexMatrix::Identity(spec.single_dim, spec.single_dim);
    return {spec, std::vector<ComplexMatrix>(spec.n(), eye)};
}

Propagator make_propagator(const HistorySpec& spec, std::vector<ComplexMatrix> u_list,
                           const Tolerance& tol) {
    if (static_cast<int>(u_list.size()) != spec.n())
        throw ValidationError("Propagator: one unitary per time slot is required");
    for (std::size_t i = 0; i < u_list.size(); ++i) {
        if (u_list[i].rows() != spec.single_dim || u_list[i].cols() != spec.single_dim)
            throw ValidationError("Propagator: unitary " + std::to_string(i) +
                                  " has the wrong dimension");
        if (!validate(u_list[i], MatrixKind::Unitary, tol).ok)
            throw ValidationError("Propagator: factor " + std::to_string(i) + " is not unitary");
    }
    return {spec, std::move(u_list)};
}

ILSOperator ILSOperator::external(const HistorySpec& spec, ComplexMatrix x) {
    const long dim2 = spec.history_dim() * spec.history_dim();
    if (x.rows() != dim2 || x.cols() != dim2)
        throw SpecMismatch("ILSOperator::external: operator must live on the doubled space");
    return {spec, std::move(x), ComplexMatrix(), Provenance::External};
}

namespace {

void require_same_spec(const HistorySpec& a, const HistorySpec& b, const char* where) {
    if (!(a == b)) throw SpecMismatch(std::string(where) + ": history specs differ");
}

/// Digits of r in base d, most significant first, `slots` many.
void decode_digits(long r, int d, int slots, int* out) {
    for (int s = slots - 1; s >= 0; --s) {
        out[s] = static_cast<int>(r % d);
        r /= d;
    }
}

}  // namespace

ComplexMatrix class_operator(const HomogeneousHistory& h, const Propagator& prop) {
    require_same_spec(h.spec, prop.spec, "class_operator");
    if (static_cast<int>(h.factors.size()) != h.spec.n())
        throw InvalidFactor("class_operator: factor count differs from the time grid");
    const int d = h.spec.single_dim;
    ComplexMatrix acc = ComplexMatrix::Identity(d, d);
    for (int i = 0; i < h.spec.n(); ++i) {
        const ComplexMatrix& u = prop.u_list[i];
        acc = (u.adjoint() * h.factors[i] * u) * acc;
    }
    return acc;
}

Complex eval_standard(const QuantumState& state, const Propagator& prop,
                      const HomogeneousHistory& h, const HomogeneousHistory& k) {
    require_same_spec(h.spec, k.spec, "eval_standard");
    require_same_spec(h.spec, prop.spec, "eval_standard");
    if (state.dim() != h.spec.single_dim)
        throw SpecMismatch("eval_standard: state dimension differs from the spec");
    const ComplexMatrix ch = class_operator(h, prop);
    const ComplexMatrix ck = class_operator(k, prop);
    return (ch * state.rho * ck.adjoint()).trace();
}

ComplexMatrix build_Y(const QuantumState& state, const HistorySpec& spec,
                      const std::vector<ComplexMatrix>& aux_bases) {
    const int d = spec.single_dim;
    const int n = spec.n();
    if (state.dim() != d) throw SpecMismatch("build_Y: state dimension differs from the spec");
    const long dim2 = pow_checked(d, 2 * n, doubled_dim_cap());

    if (!aux_bases.empty() && static_cast<int>(aux_bases.size()) != 2 * n - 1)
        throw ValidationError("build_Y: expected 2n-1 auxiliary bases");
    for (const auto& b : aux_bases) {
        if (b.rows() != d || b.cols() != d || !validate(b, MatrixKind::Unitary).ok)
            throw ValidationError("build_Y: auxiliary basis is not orthonormal");
    }

    // The series factorizes per basis index: each auxiliary index i_j appears
    // in exactly one ket and one bra, so summing it yields the completeness
    // matrix G_j = sum_i |e^j_i><e^j_i| of that basis, while the i_1 sum
    // (weighted by omega) rebuilds rho from its spectral resolution.  Each
    // entry of Y is the product of these link factors, one link per basis.
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    ComplexMatrix rho_s = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const ComplexVector psi = state.eigvecs.col(i);
        rho_s.noalias() += state.weights(i) * (psi * psi.adjoint());
    }

    struct Link {
        int row_slot;
        int col_slot;
        ComplexMatrix g;
    };
    std::vector<Link> links;
    links.push_back({0, n, rho_s});  // the omega-weighted e^1 link
    auto basis_g = [&](int j) -> ComplexMatrix {
        if (aux_bases.empty()) return eye;
        const ComplexMatrix& b = aux_bases[static_cast<std::size_t>(j - 2)];
        return b * b.adjoint();
    };
    for (int j = 2; j <= n; ++j) links.push_back({n + j - 2, n + j - 1, basis_g(j)});
    links.push_back({2 * n - 1, n - 1, basis_g(n + 1)});
    for (int j = n + 2; j <= 2 * n; ++j) links.push_back({2 * n + 1 - j, 2 * n - j, basis_g(j)});

    ComplexMatrix y(dim2, dim2);
    std::vector<int> rdig(2 * n), cdig(2 * n);
    for (long r = 0; r < dim2; ++r) {
        decode_digits(r, d, 2 * n, rdig.data());
        for (long c = 0; c < dim2; ++c) {
            decode_digits(c, d, 2 * n, cdig.data());
            Complex v(1.0, 0.0);
            for (const Link& link : links) {
                v *= link.g(rdig[link.row_slot], cdig[link.col_slot]);
                if (v == Complex(0.0, 0.0)) break;
            }
            y(r, c) = v;
        }
    }
    return y;
}

ILSOperator build_X(const QuantumState& state, const Propagator& prop,
                    const std::vector<ComplexMatrix>& aux_bases) {
    ComplexMatrix y = build_Y(state, prop.spec, aux_bases);
    ComplexMatrix u_n;
    for (int i = 0; i < prop.spec.n(); ++i)
        u_n = i == 0 ? prop.u_list[0] : kron(u_n, prop.u_list[i]);
    const ComplexMatrix w = kron(u_n, u_n);
    ComplexMatrix x = w * y * w.adjoint();
    return {prop.spec, std::move(x), std::move(y), Provenance::Standard};
}

Complex eval_ils_matrices(const ILSOperator& x, const ComplexMatrix& p, const ComplexMatrix& q) {
    const long dim = x.spec.history_dim();
    if (p.rows() != dim || p.cols() != dim || q.rows() != dim || q.cols() != dim)
        throw SpecMismatch("eval_ils: projector dimension differs from the history space");
    // tr((p (x) q) x) = sum_{a,c,b,e} p(a,c) q(b,e) x(c*dim+e, a*dim+b)
    Complex acc(0.0, 0.0);
    for (long a = 0; a < dim; ++a) {
        for (long b = 0; b < dim; ++b) {
            const long col = a * dim + b;
            Complex s(0.0, 0.0);
            for (long c = 0; c < dim; ++c) {
                const Complex pac = p(a, c);
                if (pac == Complex(0.0, 0.0)) continue;
                const long row0 = c * dim;
                Complex t(0.0, 0.0);
                for (long e = 0; e < dim; ++e) t += q(b, e) * x.x(row0 + e, col);
                s += pac * t;
            }
            acc += s;
        }
    }
    return acc;
}

Complex eval_ils(const ILSOperator& x, const HistoryProjector& p, const HistoryProjector& q) {
    require_same_spec(x.spec, p.spec, "eval_ils");
    require_same_spec(x.spec, q.spec, "eval_ils");
    return eval_ils_matrices(x, p.matrix, q.matrix);
}

DecoherenceFn ils_functional(ILSOperator x) {
    return [op = std::move(x)](const ComplexMatrix& p, const ComplexMatrix& q) {
        return eval_ils_matrices(op, p, q);
    };
}

double AxiomReport::max_violation() const {
    return std::max({hermiticity_violation, diagonal_negativity, normalization_error,
                     additivity_violation});
}

AxiomReport check_axioms(const DecoherenceFn& df, ProjectorSampler& sampler, int samples) {
    const int dim = sampler.dim();
    const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix zero = ComplexMatrix::Zero(dim, dim);

    AxiomReport rep;
    rep.samples_used = samples;
    rep.seed = sampler.seed();
    rep.normalization_error = std::abs(df(eye, eye) - Complex(1.0, 0.0));

    for (int s = 0; s < samples; ++s) {
        const ComplexMatrix p = sampler.projector();
        const ComplexMatrix q = sampler.projector();

        const Complex dpq = df(p, q);
        const Complex dqp = df(q, p);
        rep.hermiticity_violation =
            std::max(rep.hermiticity_violation, std::abs(dpq - std::conj(dqp)));

        const Complex diag = df(p, p);
        rep.diagonal_negativity = std::max(rep.diagonal_negativity, std::abs(diag.imag()));
        rep.diagonal_negativity = std::max(rep.diagonal_negativity, std::max(0.0, -diag.real()));

        rep.normalization_error = std::max(rep.normalization_error, std::abs(df(zero, p)));

        const auto [p1, p2] = sampler.orthogonal_pair();
        const Complex joint = df(p1 + p2, q);  // p1 ⊥ p2, so the join is the sum
        rep.additivity_violation =
            std::max(rep.additivity_violation, std::abs(joint - df(p1, q) - df(p2, q)));
    }
    return rep;
}

double swap_hermiticity_residual(const ComplexMatrix& x, long history_dim) {
    const long n = history_dim;
    double worst = 0.0;
    for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b)
            for (long c = 0; c < n; ++c)
                for (long e = 0; e < n; ++e) {
                    // (F x^dag F)[(a,b),(c,e)] = conj(x[(e,c),(b,a)])
                    const Complex want = std::conj(x(e * n + c, b * n + a));
                    worst = std::max(worst, std::abs(x(a * n + b, c * n + e) - want));
                }
    return worst;
}

namespace {

/// Quadratic form g(psi) = Re <psi (x) psi, x (psi (x) psi)> and its
/// Wirtinger gradient via W = (x + x^dag)(psi (x) psi):
/// grad_a = 1/2 sum_j conj(psi_j) (W[(a,j)] + W[(j,a)]).
struct DiagonalForm {
    const ComplexMatrix& x;
    long dim;

    double value(const ComplexVector& psi) const {
        const ComplexVector z = tensor_square(psi);
        return std::real(z.dot(x * z));
    }

    ComplexVector tensor_square(const ComplexVector& psi) const {
        ComplexVector z(dim * dim);
        for (long i = 0; i < dim; ++i)
            for (long j = 0; j < dim; ++j) z(i * dim + j) = psi(i) * psi(j);
        return z;
    }

    ComplexVector euclidean_gradient(const ComplexVector& psi) const {
        const ComplexVector z = tensor_square(psi);
        const ComplexVector w = x * z + x.adjoint() * z;
        ComplexVector grad = ComplexVector::Zero(dim);
        for (long a = 0; a < dim; ++a) {
            Complex s(0.0, 0.0);
            for (long j = 0; j < dim; ++j) s += std::conj(psi(j)) * (w(a * dim + j) + w(j * dim + a));
            grad(a) = 0.5 * s;
        }
        return grad;
    }
};

}  // namespace

IlsConstraintReport check_ils_constraints(const ILSOperator& x, int samples, int restarts,
                                          std::uint64_t seed) {
    const long dim = x.spec.history_dim();
    IlsConstraintReport rep;
    rep.samples_used = samples;
    rep.restarts = restarts;
    rep.seed = seed;
    rep.trace_error = std::abs(x.x.trace() - Complex(1.0, 0.0));
    rep.swap_residual = swap_hermiticity_residual(x.x, dim);

    Rng rng(seed);
    rep.min_diagonal_sampled = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const ComplexMatrix p = random_projector(static_cast<int>(dim), rng);
        const Complex v = eval_ils_matrices(x, p, p);
        rep.min_diagonal_sampled = std::min(rep.min_diagonal_sampled, v.real());
    }

    const DiagonalForm form{x.x, dim};
    rep.min_diagonal_descent = std::numeric_limits<double>::infinity();
    constexpr double kGradTol = 1e-8;
    constexpr int kMaxIters = 500;
    for (int r = 0; r < restarts; ++r) {
        ComplexVector psi = random_unit_vector(static_cast<int>(dim), rng);
        double val = form.value(psi);
        double step = 1.0;
        constexpr double kArmijo = 0.3;
        for (int it = 0; it < kMaxIters; ++it) {
            ComplexVector grad = form.euclidean_gradient(psi);
            grad -= psi.dot(grad) * psi;  // tangent projection on the unit sphere
            const double gnorm2 = grad.squaredNorm();
            if (std::sqrt(gnorm2) <= kGradTol) break;
            step *= 4.0;  // let the accepted step grow back after backtracking
            bool improved = false;
            while (step > 1e-14) {
                ComplexVector trial = psi - step * grad;
                trial.normalize();
                const double tval = form.value(trial);
                if (tval < val - kArmijo * step * gnorm2) {
                    psi = std::move(trial);
                    val = tval;
                    improved = true;
                    break;
                }
                step /= 2.0;
            }
            if (!improved) break;
        }
        if (val < rep.min_diagonal_descent) {
            rep.min_diagonal_descent = val;
            rep.certificate = psi;
        }
    }
    return rep;
}

}  // namespace histq
