// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "histq/asymptotics.hpp"
#include "histq/consistency.hpp"
#include "histq/representations.hpp"
#include "histq/scenario.hpp"

using namespace histq;
using nlohmann::json;

namespace {

struct SystemDraw {
    HistorySpec spec;
    QuantumState state;
    Propagator prop;
    std::uint64_t seed;
};

HistorySpec make_spec(int d, int n) {
    std::vector<double> times;
    for (int i = 0; i < n; ++i) times.push_back(i);
    return HistorySpec(d, times);
}

SystemDraw draw_system(std::uint64_t seed) {
    Rng rng(seed);
    const int d = rng.uniform_int(2, 3);
    const int n = rng.uniform_int(1, 3);
    const HistorySpec spec = make_spec(d, n);
    const QuantumState state = QuantumState::from_density(random_density(d, rng));
    std::vector<ComplexMatrix> us;
    for (int i = 0; i < n; ++i) us.push_back(haar_unitary(d, rng));
    return {spec, state, make_propagator(spec, std::move(us)), seed};
}

HomogeneousHistory random_homogeneous(const HistorySpec& spec, Rng& rng) {
    HomogeneousHistory h;
    h.spec = spec;
    for (int i = 0; i < spec.n(); ++i) h.factors.push_back(random_projector(spec.single_dim, rng));
    return h;
}

std::vector<ComplexMatrix> random_aux_bases(int d, int n, Rng& rng) {
    std::vector<ComplexMatrix> bases;
    for (int j = 0; j < 2 * n - 1; ++j) bases.push_back(haar_unitary(d, rng));
    return bases;
}

/// Runs fn over 0..count-1 with a small async pool and max-reduces.
double parallel_max(int count, const std::function<double(int)>& fn) {
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<double>> futures;
    double worst = 0.0;
    for (int base = 0; base < count; base += static_cast<int>(workers)) {
        futures.clear();
        for (int i = base; i < std::min(count, base + static_cast<int>(workers)); ++i)
            futures.push_back(std::async(std::launch::async, fn, i));
        for (auto& f : futures) worst = std::max(worst, f.get());
    }
    return worst;
}

struct Criterion {
    bool pass;
    std::string detail;
};

constexpr int kSystems = 50;
constexpr std::uint64_t kMasterSeed = 20240801;

// 1. axiom suite over 50 random systems
Criterion criterion_axioms(double* elapsed_s) {
    const auto t0 = std::chrono::steady_clock::now();
    const double worst = parallel_max(kSystems, [](int i) {
        const SystemDraw sys = draw_system(kMasterSeed + i);
        const ILSOperator x = build_X(sys.state, sys.prop);
        ProjectorSampler sampler(static_cast<int>(sys.spec.history_dim()),
                                 kMasterSeed + 1000 + i);
        return check_axioms(ils_functional(x), sampler, 100).max_violation();
    });
    *elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "axiom suite, %d systems, max violation %.3e, %.1f s",
                  kSystems, worst, *elapsed_s);
    return {worst <= 1e-9 && *elapsed_s < 60.0, buf};
}

// 2. eval_standard vs eval_ils on the same systems
Criterion criterion_cross_oracle() {
    const double worst = parallel_max(kSystems, [](int i) {
        const SystemDraw sys = draw_system(kMasterSeed + i);
        const ILSOperator x = build_X(sys.state, sys.prop);
        Rng rng(kMasterSeed + 2000 + i);
        double w = 0.0;
        for (int s = 0; s < 100; ++s) {
            const HomogeneousHistory h = random_homogeneous(sys.spec, rng);
            const HomogeneousHistory k = random_homogeneous(sys.spec, rng);
            const Complex direct = eval_standard(sys.state, sys.prop, h, k);
            const Complex via_x = eval_ils(x, embed_homogeneous(h), embed_homogeneous(k));
            w = std::max(w, std::abs(direct - via_x) / (1.0 + std::abs(direct)));
        }
        return w;
    });
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "ILS cross-oracle, %d systems x 100 pairs, max relative deviation %.3e",
                  kSystems, worst);
    return {worst <= 1e-9, buf};
}

// 3. Y basis independence
Criterion criterion_basis_independence() {
    double worst_entry = 0.0, worst_value = 0.0;
    Rng rng(kMasterSeed + 3000);
    for (int d : {2, 3}) {
        for (int n : {1, 2, 3}) {
            const HistorySpec spec = make_spec(d, n);

            // non-degenerate state: retry until the spectrum has clear gaps
            QuantumState state = QuantumState::from_density(random_density(d, rng));
            for (int attempt = 0; attempt < 100; ++attempt) {
                double gap = 1.0;
                for (int i = 1; i < d; ++i)
                    gap = std::min(gap, state.weights(i) - state.weights(i - 1));
                if (gap > 1e-3) break;
                state = QuantumState::from_density(random_density(d, rng));
            }
            const ComplexMatrix y1 = build_Y(state, spec, random_aux_bases(d, n, rng));
            const ComplexMatrix y2 = build_Y(state, spec, random_aux_bases(d, n, rng));
            worst_entry = std::max(worst_entry, max_abs(y1 - y2));

            // degenerate state: compare d-values over random projector pairs
            const QuantumState mixed = QuantumState::maximally_mixed(d);
            std::vector<ComplexMatrix> us;
            for (int i = 0; i < n; ++i) us.push_back(haar_unitary(d, rng));
            const Propagator prop = make_propagator(spec, us);
            const ILSOperator xa = build_X(mixed, prop, random_aux_bases(d, n, rng));
            const ILSOperator xb = build_X(mixed, prop, random_aux_bases(d, n, rng));
            const int dim = static_cast<int>(spec.history_dim());
            for (int s = 0; s < 100; ++s) {
                const ComplexMatrix p = random_projector(dim, rng);
                const ComplexMatrix q = random_projector(dim, rng);
                worst_value = std::max(worst_value, std::abs(eval_ils_matrices(xa, p, q) -
                                                             eval_ils_matrices(xb, p, q)));
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "Y basis independence, entry gap %.3e, degenerate d-value gap %.3e",
                  worst_entry, worst_value);
    return {worst_entry <= 1e-9 && worst_value <= 1e-9, buf};
}

// 4. trace-family decomposition and semi-inner-form positivity
Criterion criterion_decomposition() {
    double worst_rec = 0.0, worst_gram = 0.0;
    bool sizes_ok = true;
    Rng rng(kMasterSeed + 4000);
    for (int d : {2, 3}) {
        for (int n : {1, 2, 3}) {
            const HistorySpec spec = make_spec(d, n);
            const QuantumState state = QuantumState::from_density(random_density(d, rng));
            std::vector<ComplexMatrix> us;
            for (int i = 0; i < n; ++i) us.push_back(haar_unitary(d, rng));
            const ILSOperator x = build_X(state, make_propagator(spec, us));
            const TraceFamilyDecomposition fam = trace_family_decomposition(x);

            const long dim = spec.history_dim();
            sizes_ok = sizes_ok && (fam.positives.size() + fam.negatives.size() <=
                                    static_cast<std::size_t>(dim) * dim);
            for (int s = 0; s < 100; ++s) {
                const ComplexMatrix p = random_projector(static_cast<int>(dim), rng);
                const ComplexMatrix q = random_projector(static_cast<int>(dim), rng);
                worst_rec = std::max(worst_rec,
                                     std::abs(reconstruct_from_family_matrices(fam, p, q) -
                                              eval_ils_matrices(x, p, q)));
            }

            const SemiInnerForms forms = semi_inner_split(fam);
            const int family_size = 20;
            std::vector<ComplexMatrix> ops;
            for (int i = 0; i < family_size; ++i)
                ops.push_back(ginibre(static_cast<int>(dim), static_cast<int>(dim), rng));
            ComplexMatrix gp(family_size, family_size), gm(family_size, family_size);
            for (int i = 0; i < family_size; ++i)
                for (int j = 0; j < family_size; ++j) {
                    gp(i, j) = forms.plus(ops[i], ops[j]);
                    gm(i, j) = forms.minus(ops[i], ops[j]);
                }
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> sp((gp + gp.adjoint()) / 2.0);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> sm((gm + gm.adjoint()) / 2.0);
            worst_gram = std::min(std::min(sp.eigenvalues().minCoeff(),
                                           sm.eigenvalues().minCoeff()),
                                  worst_gram);
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "trace-family decomposition, max reconstruction gap %.3e, min Gram eig %.3e",
                  worst_rec, worst_gram);
    return {worst_rec <= 1e-9 && worst_gram >= -1e-9 && sizes_ok, buf};
}

// 5. GNS identity
Criterion criterion_gns() {
    double worst_gap = 0.0, worst_diag = 0.0;
    Rng rng(kMasterSeed + 5000);
    for (int d : {2, 3}) {
        for (int n : {1, 2, 3}) {
            const HistorySpec spec = make_spec(d, n);
            const QuantumState state = QuantumState::from_density(random_density(d, rng));
            std::vector<ComplexMatrix> us;
            for (int i = 0; i < n; ++i) us.push_back(haar_unitary(d, rng));
            const GNSRep rep = make_gns(state, make_propagator(spec, us));
            for (int s = 0; s < 100; ++s) {
                TensorPolynomial b, bp;
                const int terms = rng.uniform_int(1, d * d);
                for (int t = 0; t < terms; ++t) {
                    TensorPolynomial::Term ta{rng.cgauss(), {}}, tb{rng.cgauss(), {}};
                    for (int i = 0; i < n; ++i) {
                        ta.factors.push_back(ginibre(d, d, rng));
                        tb.factors.push_back(ginibre(d, d, rng));
                    }
                    b.terms.push_back(std::move(ta));
                    bp.terms.push_back(std::move(tb));
                }
                const GnsValue v = gns_eval(rep, b, bp);
                worst_gap = std::max(worst_gap, std::abs(v.value - v.lhs_check));
                const GnsValue diag = gns_eval(rep, b, b);
                worst_diag = std::min(worst_diag, diag.value.real());
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "GNS identity, max |<R,R> - trace form| %.3e, min diagonal %.3e", worst_gap,
                  worst_diag);
    return {worst_gap <= 1e-9 && worst_diag >= -1e-12, buf};
}

// 6. norm dichotomy witness
Criterion criterion_norm_sweep(double* elapsed_s) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> dims = {2, 3, 4, 5, 6, 7, 8};
    const auto id_rule = [](const HistorySpec& s) { return Propagator::identity(s); };

    const SweepResult pure = norm_sweep(make_state_family("pure"), 1, dims, id_rule, 61, 512,
                                        "pure");
    double worst_trace = 0.0, worst_op = 0.0;
    for (const auto& row : pure.rows) {
        worst_trace = std::max(worst_trace, std::abs(row.trace_norm - row.d));
        worst_op = std::max(worst_op, row.operator_norm - 1.0);
    }

    bool increasing = true;
    for (const std::string family : {"maximally_mixed", "geometric:0.5"}) {
        const SweepResult mixed = norm_sweep(make_state_family(family), 1, dims, id_rule, 62,
                                             128, family);
        for (std::size_t i = 1; i < mixed.rows.size(); ++i)
            increasing = increasing &&
                         mixed.rows[i].trace_norm > mixed.rows[i - 1].trace_norm + 1e-6;
    }
    *elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "norm dichotomy, |trace_norm - d| max %.3e, operator norm excess %.3e, "
                  "mixed growth %s, %.1f s",
                  worst_trace, std::max(0.0, worst_op), increasing ? "strict" : "BROKEN",
                  *elapsed_s);
    return {worst_trace <= 1e-9 && worst_op <= 1e-9 && increasing && *elapsed_s < 30.0, buf};
}

// 7. divergence counterexample
Criterion criterion_divergence() {
    const std::vector<double> weights = {0.4, 0.3, 0.2, 0.1};
    const int i1 = 0;
    std::vector<int> dims;
    for (int d = 4; d <= 20; ++d) dims.push_back(d);
    const DivergenceResult res = divergence_probe(
        weights, i1, dims,
        [](int d) { return ComplexMatrix(ComplexMatrix::Identity(d * d, d * d)); });
    const double slope_err = std::abs(res.fitted_slope - weights[i1] / 2.0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "divergence counterexample, slope error %.3e, fit residual %.3e", slope_err,
                  res.fit_residual);
    return {slope_err <= 1e-9 && res.fit_residual <= 1e-9, buf};
}

// 8. consistency verdicts
Criterion criterion_consistency() {
    const HistorySpec spec = make_spec(2, 2);
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    ComplexMatrix pp(2, 2), pm(2, 2);
    pp << 0.5, 0.5, 0.5, 0.5;
    pm << 0.5, -0.5, -0.5, 0.5;

    const DecoherenceFn classical = ils_functional(
        build_X(QuantumState::from_density(p0), Propagator::identity(spec)));
    const BooleanPartition basis = product_partition(spec, {{p0, p1}, {p0, p1}});
    const ConsistencyReport class_rep = analyze_partition(classical, basis, 1e-9);

    bool ok = class_rep.consistent;
    double prob_gap = std::abs(class_rep.probabilities[0] - 1.0);
    for (int i = 1; i < 4; ++i)
        prob_gap = std::max(prob_gap, std::abs(class_rep.probabilities[i]));
    ok = ok && prob_gap <= 1e-9;

    const DecoherenceFn interference = ils_functional(
        build_X(QuantumState::from_density(pp), Propagator::identity(spec)));
    const BooleanPartition mixed_basis = product_partition(spec, {{p0, p1}, {pp, pm}});
    const ConsistencyReport intf_rep = analyze_partition(interference, mixed_basis, 1e-9);
    ok = ok && !intf_rep.consistent && std::abs(intf_rep.max_offdiag_re - 0.25) <= 1e-9;

    // every consistent partition sums its probabilities to 1
    double worst_sum = class_rep.prob_sum_error;
    Rng rng(kMasterSeed + 8000);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = rng.uniform_int(2, 3);
        const HistorySpec sp = make_spec(d, 2);
        RealVector w(d);
        double total = 0.0;
        for (int i = 0; i < d; ++i) total += (w(i) = rng.uniform() + 0.1);
        w /= total;
        const QuantumState state = QuantumState::diagonal(w);
        std::vector<ComplexMatrix> cells;
        for (int i = 0; i < d; ++i) {
            ComplexMatrix c = ComplexMatrix::Zero(d, d);
            c(i, i) = 1.0;
            cells.push_back(c);
        }
        const BooleanPartition part = product_partition(sp, {cells, cells});
        const ConsistencyReport rep = analyze_partition(
            ils_functional(build_X(state, Propagator::identity(sp))), part, 1e-9);
        const double m = static_cast<double>(part.members.size());
        if (!rep.consistent || rep.prob_sum_error > m * m * 1e-9) ok = false;
        worst_sum = std::max(worst_sum, rep.prob_sum_error);
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "consistency, classical probabilities gap %.3e, interference offdiag %.6f, "
                  "max prob-sum error %.3e",
                  prob_gap, intf_rep.max_offdiag_re, worst_sum);
    return {ok, buf};
}

// 9. deterministic artifacts
Criterion criterion_determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "histq_acceptance_det";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    json j;
    j["spec"] = {{"single_dim", 2}, {"times", {0.0, 1.0}}};
    j["state"] = "geometric:0.6";
    j["propagator"] = "hadamard_chain";
    j["partitions"]["basis"]["per_time"] =
        json::array({json::array({"span{0}", "span{1}"}), json::array({"span{0}", "span{1}"})});
    j["tasks"] = json::array(
        {{{"kind", "ils_verify"}, {"pairs", 30}, {"seed", 5}},
         {{"kind", "check_axioms"}, {"samples", 30}, {"seed", 6}},
         {{"kind", "consistency"}, {"partition", "basis"}},
         {{"kind", "norm_sweep"}, {"family", "maximally_mixed"}, {"n", 1}, {"dims", "2..6"},
          {"seed", 7}},
         {{"kind", "divergence_probe"}, {"weights", {0.4, 0.3, 0.2, 0.1}}, {"i1", 0},
          {"dims", "4..16"}}});
    const auto scenario_path = dir / "scenario.json";
    {
        std::ofstream out(scenario_path);
        out << j.dump(2);
    }
    const int rc1 = run_scenario(scenario_path, dir / "a");
    const int rc2 = run_scenario(scenario_path, dir / "b");
    bool identical = rc1 == 0 && rc2 == 0;
    int compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
        const auto name = entry.path().filename();
        std::ifstream fa(entry.path(), std::ios::binary);
        std::ifstream fb(dir / "b" / name, std::ios::binary);
        const std::string ca((std::istreambuf_iterator<char>(fa)), {});
        const std::string cb((std::istreambuf_iterator<char>(fb)), {});
        identical = identical && !ca.empty() && ca == cb;
        ++compared;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "CLI determinism, %d artifacts byte-identical across runs",
                  compared);
    return {identical && compared >= 7, buf};
}

}  // namespace

int main() {
    int failures = 0;
    const auto report = [&](int idx, const Criterion& c) {
        std::printf("%s criterion %d: %s\n", c.pass ? "PASS" : "FAIL", idx, c.detail.c_str());
        std::fflush(stdout);
        if (!c.pass) ++failures;
    };

    double t1 = 0.0, t6 = 0.0;
    report(1, criterion_axioms(&t1));
    report(2, criterion_cross_oracle());
    report(3, criterion_basis_independence());
    report(4, criterion_decomposition());
    report(5, criterion_gns());
    report(6, criterion_norm_sweep(&t6));
    report(7, criterion_divergence());
    report(8, criterion_consistency());
    report(9, criterion_determinism());

    if (failures == 0)
        std::printf("all 9 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
