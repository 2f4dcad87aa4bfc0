#pragma once

/**
 * @file experiments.hpp
 * @brief One runner per experiment. Each builds a job list from the config,
 * runs the jobs on the worker pool with per-job seeds, and collects the rows
 * in job order, so output is byte-identical for any thread count.
 *
 * Hard checks (identities, proven inequalities, oracle agreement) go into the
 * table's failure list and drive the exit status. Columns marked "report" in
 * the schema never do.
 */

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zqlab/charsums.hpp"
#include "zqlab/gl2.hpp"
#include "zqlab/harness/config.hpp"
#include "zqlab/harness/random.hpp"
#include "zqlab/harness/table.hpp"
#include "zqlab/incidence.hpp"
#include "zqlab/modring.hpp"
#include "zqlab/parallel.hpp"
#include "zqlab/spectra.hpp"
#include "zqlab/zaremba.hpp"

namespace zqlab::harness {

namespace detail {

constexpr auto E = ColumnType::exact;
constexpr auto F = ColumnType::real;
constexpr auto T = ColumnType::text;

/// Fills one row by column name.
class RowBuilder {
public:
    explicit RowBuilder(const std::vector<Column>& cols) : cols_(cols), cells_(cols.size()) {}

    template <class V>
    RowBuilder& set(const std::string& name, const V& v) {
        for (std::size_t i = 0; i < cols_.size(); ++i)
            if (cols_[i].name == name) {
                cells_[i] = fmt(v);
                return *this;
            }
        fail(ErrorCode::invalid_argument, "no column " + name);
    }

    std::vector<std::string> take() { return std::move(cells_); }

private:
    const std::vector<Column>& cols_;
    std::vector<std::string> cells_;
};

struct JobOut {
    std::vector<std::string> row;
    std::vector<std::string> failures;
};

/// Runs fn(i, builder, failures) for each job on the pool and appends rows in
/// job order. Adds a wall_ms column when timing is on.
inline Table run_jobs(const ExperimentConfig& cfg, std::vector<Column> cols, std::size_t jobs,
                      const std::function<void(std::size_t, RowBuilder&, std::vector<std::string>&)>& fn) {
    if (cfg.timing) cols.push_back({"wall_ms", F, "wall-clock time of the trial; not reproducible"});
    Table table(to_string(cfg.experiment), cols);
    std::vector<JobOut> out(jobs);
    std::vector<double> ms(jobs, 0.0);
    parallel_for(jobs, cfg.threads, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        RowBuilder rb(table.columns());
        fn(i, rb, out[i].failures);
        ms[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (cfg.timing) rb.set("wall_ms", ms[i]);
        out[i].row = rb.take();
    });
    for (auto& o : out) {
        table.add_row(std::move(o.row));
        for (auto& f : o.failures) table.add_failure(std::move(f));
    }
    return table;
}

struct Grid {
    std::int64_t q;
    std::int64_t n;
    std::size_t trial;
};

inline std::vector<Grid> grid(const std::vector<std::int64_t>& moduli, const std::vector<std::int64_t>& dims, std::size_t trials) {
    std::vector<Grid> g;
    for (auto q : moduli)
        for (auto n : dims)
            for (std::size_t t = 0; t < trials; ++t) g.push_back({q, n, t});
    return g;
}

inline std::string where(const char* what, std::size_t job, std::int64_t q) {
    return std::string(what) + " job " + std::to_string(job) + " (q=" + std::to_string(q) + ")";
}

inline std::uint64_t job_seed(const ExperimentConfig& cfg, const Grid& g) {
    return derive_seed(cfg.seed, {static_cast<std::uint64_t>(cfg.experiment), static_cast<std::uint64_t>(g.q),
                                  static_cast<std::uint64_t>(g.n), g.trial});
}

/// Set sizes are drawn uniformly from [size_min, min(size_max, |domain|)].
/// Keys are read up front; config accessors are not thread-safe.
struct SizeRange {
    std::int64_t lo = 1;
    std::optional<std::int64_t> hi;

    explicit SizeRange(const ExperimentConfig& cfg) : lo(cfg.get_int("size_min", 1)), hi(cfg.get_optional_int("size_max")) {}

    std::size_t draw(Rng& rng, std::size_t domain) const {
        const auto top = std::min<std::int64_t>(hi.value_or(static_cast<std::int64_t>(domain)), static_cast<std::int64_t>(domain));
        require(lo >= 0 && lo <= top, ErrorCode::invalid_params,
                "size range [" + std::to_string(lo) + ", " + std::to_string(top) + "] is empty for a domain of " +
                    std::to_string(domain));
        return static_cast<std::size_t>(rng.between(lo, top));
    }
};

/// A fixed character from the "chi" key, or a random one per trial.
struct CharacterChoice {
    std::optional<std::int64_t> index;
    bool allow_principal;

    CharacterChoice(const ExperimentConfig& cfg, bool principal_ok) : index(cfg.get_optional_int("chi")), allow_principal(principal_ok) {}

    Character pick(Rng& rng, std::int64_t p) const {
        if (index) {
            Character chi(p, *index);
            require(allow_principal || !chi.is_principal(), ErrorCode::invalid_params, "a non-principal character is required");
            return chi;
        }
        return Character(p, rng.between(allow_principal ? 0 : 1, p - 2));
    }
};

inline void require_primes(const std::vector<std::int64_t>& moduli, const char* what) {
    for (auto p : moduli)
        require(is_prime(p), ErrorCode::invalid_params, std::string(what) + " needs prime moduli, got " + std::to_string(p));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Incidence experiments
// ---------------------------------------------------------------------------

inline Table run_dot(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {5, 7});
    const auto dims = cfg.get_int_list("dims", {2});
    const auto fixed_lambda = cfg.get_optional_int("lambda");
    for (auto n : dims) require(n >= 2, ErrorCode::invalid_params, "dims must be >= 2");
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Point>> domains;
    for (auto q : moduli) {
        require(q >= 2, ErrorCode::invalid_params, "moduli must be >= 2");
        for (auto n : dims) domains[{q, n}] = coprime_tuples(Modulus(q), static_cast<std::size_t>(n));
    }
    const auto jobs = grid(moduli, dims, cfg.trials);
    const SizeRange sizes(cfg);
    std::vector<Column> cols = {
        {"trial", E, "record index"},
        {"q", E, "modulus"},
        {"n", E, "dimension"},
        {"lambda", E, "target dot product (a unit)"},
        {"size_a", E, "|A|"},
        {"size_b", E, "|B|"},
        {"count", E, "#{(a,b) : a.b = lambda}"},
        {"main_term", E, "|A||B| q^{n-1} / J_n(q)"},
        {"error_lhs", E, "|count - main_term|"},
        {"theta", E, "Theta(n)"},
        {"bound_rhs", F, "2 q^{n-1} sqrt(|A||B|) (Theta m^{-n*})^{1/4}"},
        {"slack", F, "bound_rhs / error_lhs; inf when error_lhs = 0; hard check >= 1"},
        {"hypothesis_ok", T, "least prime divisor >= 5"},
        {"vinh_rhs", F, "report: sqrt(q|A||B|) for n = 2"},
    };
    auto t = run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        Rng rng(job_seed(cfg, g));
        const Modulus mod(g.q);
        const auto& dom = domains.at({g.q, g.n});
        const Residue lambda = fixed_lambda ? mod.reduce(*fixed_lambda) : random_unit(rng, mod);
        const auto sa = sizes.draw(rng, dom.size());
        const auto sb = sizes.draw(rng, dom.size());
        auto a = random_subset(rng, mod, static_cast<std::size_t>(g.n), dom, sa);
        auto b = random_subset(rng, mod, static_cast<std::size_t>(g.n), dom, sb);
        const auto r = check_inequality(IncidenceInstance::dot(std::move(a), std::move(b), lambda));
        rb.set("trial", static_cast<std::uint64_t>(i)).set("q", g.q).set("n", g.n).set("lambda", lambda);
        rb.set("size_a", static_cast<std::uint64_t>(sa)).set("size_b", static_cast<std::uint64_t>(sb));
        rb.set("count", r.count).set("main_term", r.main_term).set("error_lhs", r.error_lhs);
        rb.set("theta", theta(mod, static_cast<unsigned>(g.n))).set("bound_rhs", r.bound_rhs).set("slack", r.slack);
        rb.set("hypothesis_ok", r.hypothesis_ok);
        if (r.comparison_rhs) rb.set("vinh_rhs", *r.comparison_rhs);
        if (!r.holds()) fails.push_back(where("dot-incidence", i, g.q) + ": slack " + fmt(r.slack) + " < 1");
    });
    t.add_summary({"slack"});
    return t;
}

inline Table run_det(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {3, 5});
    const auto d = cfg.get_int("d", 2);
    const auto sn = cfg.get_int("det_n", 1);
    const auto sm = cfg.get_int("det_m", 1);
    const auto fixed_lambda = cfg.get_optional_int("lambda");
    require(d >= 1 && sn >= 1 && sm >= 1 && sn <= d && sm <= d, ErrorCode::invalid_params, "need 1 <= det_n, det_m <= d");
    const DetShape shape{static_cast<std::size_t>(sn), static_cast<std::size_t>(sm)};
    require(shape.d() == static_cast<std::size_t>(d), ErrorCode::invalid_params, "det_n + det_m must equal d");
    std::map<std::int64_t, std::pair<std::vector<Point>, std::vector<Point>>> domains;
    for (auto q : moduli) {
        require(is_prime(q) && q > 2, ErrorCode::invalid_params, "det-incidence needs odd prime moduli");
        const Modulus mod(q);
        domains[q] = {independent_tuples(mod, shape.n, shape.d()), independent_tuples(mod, shape.m, shape.d())};
    }
    const auto jobs = grid(moduli, {d}, cfg.trials);
    const SizeRange sizes(cfg);
    std::atomic<std::size_t> closer_q{0}, closer_q1{0}, ties{0};
    std::vector<Column> cols = {
        {"trial", E, "record index"},
        {"q", E, "prime modulus"},
        {"d", E, "matrix size"},
        {"det_n", E, "vectors per element of A"},
        {"det_m", E, "vectors per element of B"},
        {"lambda", E, "target determinant"},
        {"size_a", E, "|A|"},
        {"size_b", E, "|B|"},
        {"count", E, "#{(a,b) : det[a|b] = lambda}"},
        {"main_term", E, "|A||B| / q"},
        {"alt_main_term", E, "report: |A||B| / (q - 1)"},
        {"error_lhs", E, "|count - |A||B|/q| / 8"},
        {"alt_error", E, "report: |count - |A||B|/(q-1)|"},
        {"bound_rhs", F, "q^{d^2/2 - d/4 - 3/4} sqrt(|A||B|) + |A||B|/q^2"},
        {"slack", F, "bound_rhs / error_lhs; hard check >= 1"},
    };
    auto t = run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        Rng rng(job_seed(cfg, g));
        const Modulus mod(g.q);
        const auto& [dom_a, dom_b] = domains.at(g.q);
        const Residue lambda = fixed_lambda ? mod.reduce(*fixed_lambda) : random_unit(rng, mod);
        const auto sa = sizes.draw(rng, dom_a.size());
        const auto sb = sizes.draw(rng, dom_b.size());
        auto a = random_subset(rng, mod, shape.n * shape.d(), dom_a, sa);
        auto b = random_subset(rng, mod, shape.m * shape.d(), dom_b, sb);
        const auto r = check_inequality(IncidenceInstance::det(std::move(a), std::move(b), lambda, shape));
        rb.set("trial", static_cast<std::uint64_t>(i)).set("q", g.q).set("d", d).set("det_n", sn).set("det_m", sm);
        rb.set("lambda", lambda).set("size_a", static_cast<std::uint64_t>(sa)).set("size_b", static_cast<std::uint64_t>(sb));
        rb.set("count", r.count).set("main_term", r.main_term).set("alt_main_term", *r.alt_main_term);
        const auto alt_error = abs(Rational(BigInt(r.count)) - *r.alt_main_term);
        const auto raw_error = abs(Rational(BigInt(r.count)) - r.main_term);
        rb.set("error_lhs", r.error_lhs).set("alt_error", alt_error);
        rb.set("bound_rhs", r.bound_rhs).set("slack", r.slack);
        ++(raw_error < alt_error ? closer_q : alt_error < raw_error ? closer_q1 : ties);
        if (!r.holds()) fails.push_back(where("det-incidence", i, g.q) + ": slack " + fmt(r.slack) + " < 1");
    });
    t.add_summary({"slack"});
    t.add_note("det main term: |A||B|/q closer in " + std::to_string(closer_q.load()) + " trials, |A||B|/(q-1) closer in " +
               std::to_string(closer_q1.load()) + ", ties " + std::to_string(ties.load()));
    return t;
}

inline Table run_crossratio(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {7, 11});
    const auto fixed_lambda = cfg.get_optional_int("lambda");
    require_primes(moduli, "crossratio-incidence");
    std::map<std::int64_t, std::vector<Point>> domains;
    for (auto q : moduli) domains[q] = all_tuples(Modulus(q), 2);
    const auto jobs = grid(moduli, {2}, cfg.trials);
    const SizeRange sizes(cfg);
    std::vector<Column> cols = {
        {"trial", E, "record index"},
        {"q", E, "prime modulus"},
        {"lambda", E, "target cross-ratio, not 0 or 1"},
        {"size_a", E, "|A|"},
        {"size_b", E, "|B|"},
        {"count", E, "#{(a,b) : [a1,a2,b1,b2] = lambda}"},
        {"main_term", E, "|A||B| / q"},
        {"error_lhs", E, "|count - main_term|"},
        {"bound_rhs", F, "4 q^{3/4} sqrt(|A||B|)"},
        {"slack", F, "bound_rhs / error_lhs; hard check >= 1"},
    };
    auto t = run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        Rng rng(job_seed(cfg, g));
        const Modulus mod(g.q);
        const auto& dom = domains.at(g.q);
        const Residue lambda = fixed_lambda ? mod.reduce(*fixed_lambda) : rng.between(2, g.q - 1);
        const auto sa = sizes.draw(rng, dom.size());
        const auto sb = sizes.draw(rng, dom.size());
        auto a = random_subset(rng, mod, 2, dom, sa);
        auto b = random_subset(rng, mod, 2, dom, sb);
        const auto r = check_inequality(IncidenceInstance::crossratio(std::move(a), std::move(b), lambda));
        rb.set("trial", static_cast<std::uint64_t>(i)).set("q", g.q).set("lambda", lambda);
        rb.set("size_a", static_cast<std::uint64_t>(sa)).set("size_b", static_cast<std::uint64_t>(sb));
        rb.set("count", r.count).set("main_term", r.main_term).set("error_lhs", r.error_lhs);
        rb.set("bound_rhs", r.bound_rhs).set("slack", r.slack);
        if (!r.holds()) fails.push_back(where("crossratio-incidence", i, g.q) + ": slack " + fmt(r.slack) + " < 1");
    });
    t.add_summary({"slack"});
    return t;
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

/// (3 q^{-1} q^{4n-4} Theta(n))^{1/4} with the least prime divisor in place of q^{-1}.
inline double mu2_bound(const Modulus& mod, unsigned n) {
    return std::pow(3.0 / static_cast<double>(mod.least_prime()) * std::pow(static_cast<double>(mod.value()), 4.0 * n - 4.0) *
                        to_double(theta(mod, n)),
                    0.25);
}

/// When dump is set, each built matrix is written to it before analysis.
inline Table run_spectrum(const ExperimentConfig& cfg, std::ostream* dump = nullptr) {
    using namespace detail;
    const auto kind = parse_incidence_kind(cfg.get_string("kind", "dot"));
    const auto moduli = cfg.get_int_list("moduli", {5, 7, 11, 13});
    const auto dims = cfg.get_int_list("dims", {kind == IncidenceKind::dot ? 2 : 1});
    const auto lambda = cfg.get_int("lambda", kind == IncidenceKind::crossratio ? 2 : 1);
    const double tol_factor = cfg.get_double("cluster_tol_factor", 1e-6);
    std::vector<Grid> jobs;
    for (auto q : moduli)
        for (auto n : dims) jobs.push_back({q, n, 0});
    std::vector<Column> cols = {
        {"q", E, "modulus"},
        {"kind", T, "dot, det or crossratio"},
        {"n", E, "dot: dimension; det: vectors per side (d = 2n)"},
        {"lambda", E, "incidence value"},
        {"rows", E, "matrix rows"},
        {"cols", E, "matrix columns"},
        {"symmetric", T, "eigenvalues when true, singular values otherwise"},
        {"top_value", F, "largest eigenvalue or singular value"},
        {"expected_top", E, "dot: q^{n-1}"},
        {"second_value", F, "largest |value| after the first"},
        {"mu2_bound", F, "dot: (3 m^{-1} q^{4n-4} Theta(n))^{1/4}"},
        {"cluster_tol", F, "tolerance used to merge eigenvalues"},
        {"clusters", E, "number of eigenvalue clusters"},
        {"min_multiplicity", E, "smallest multiplicity among non-top clusters"},
        {"required_multiplicity", E, "dot, n = 2, q prime >= 5: (q - 1)/2"},
        {"fourth_moment_exact", E, "sum_{a,a'} (sum_b M(a,b) M(a',b))^2"},
        {"fourth_moment_float", F, "sum of fourth powers of the computed values"},
        {"fourth_moment_rel_error", F, "hard check < 1e-6"},
        {"reconstruction_error", F, "max |M - U L U^T|; hard check < 1e-8"},
        {"reference", F, "det: sqrt(NM)/(q-1) with the closed-form family sizes (report)"},
    };
    // Matrix dumps must come out in job order, so build serially when dumping.
    ExperimentConfig local = cfg;
    if (dump) local.threads = 1;
    return run_jobs(local, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        const Modulus mod(g.q);
        const auto n = static_cast<std::size_t>(g.n);
        const DetShape shape = kind == IncidenceKind::det ? DetShape{n, n} : DetShape{n, 0};
        BuildOptions opts;
        opts.cap = cfg.matrix_cap;
        const auto m = build_full_matrix(kind, mod, lambda, shape, opts);
        if (dump) write_matrix_dump(*dump, m);
        const auto s = analyze_spectrum(m, tol_factor * static_cast<double>(g.q));
        rb.set("q", g.q).set("kind", to_string(kind)).set("n", g.n).set("lambda", lambda);
        rb.set("rows", static_cast<std::uint64_t>(m.rows())).set("cols", static_cast<std::uint64_t>(m.cols()));
        rb.set("symmetric", s.symmetric).set("top_value", s.top_value).set("second_value", s.second_value);
        rb.set("cluster_tol", s.cluster_tol).set("clusters", static_cast<std::uint64_t>(s.clusters.size()));
        rb.set("min_multiplicity", static_cast<std::uint64_t>(s.min_nontop_multiplicity()));
        rb.set("fourth_moment_exact", s.fourth_moment_exact).set("fourth_moment_float", s.fourth_moment_float);
        rb.set("fourth_moment_rel_error", s.fourth_moment_rel_error()).set("reconstruction_error", s.reconstruction_error);
        const auto tag = where("spectrum", i, g.q);
        if (!(s.fourth_moment_rel_error() < 1e-6)) fails.push_back(tag + ": fourth-moment paths disagree");
        if (s.symmetric && !(s.reconstruction_error < 1e-8)) fails.push_back(tag + ": reconstruction error too large");
        if (kind == IncidenceKind::dot) {
            const double expected = std::pow(static_cast<double>(g.q), static_cast<double>(g.n - 1));
            const double bound = mu2_bound(mod, static_cast<unsigned>(g.n));
            rb.set("expected_top", static_cast<std::uint64_t>(expected)).set("mu2_bound", bound);
            if (std::abs(s.top_value - expected) > 1e-8) fails.push_back(tag + ": top eigenvalue " + fmt(s.top_value));
            if (g.n == 2 && mod.is_prime() && mod.reduce(lambda) == 1) {
                if (g.q >= 5) {
                    const auto req = static_cast<std::uint64_t>((g.q - 1) / 2);
                    rb.set("required_multiplicity", req);
                    if (s.min_nontop_multiplicity() < req) fails.push_back(tag + ": multiplicity below (q-1)/2");
                }
                if (s.second_value > bound) fails.push_back(tag + ": second eigenvalue above bound");
            }
        }
        if (kind == IncidenceKind::det) rb.set("reference", det_lambda1_formula(mod, shape));
    });
}

// ---------------------------------------------------------------------------
// Character sums
// ---------------------------------------------------------------------------

inline Table run_kloosterman(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {7, 11, 13, 17});
    require_primes(moduli, "kloosterman");
    std::vector<Grid> jobs;
    for (auto p : moduli)
        for (std::int64_t k = 0; k < p - 1; ++k) jobs.push_back({p, k, 0});
    std::vector<Column> cols = {
        {"p", E, "prime"},
        {"chi_index", E, "character chi(g^e) = e(k e/(p-1))"},
        {"principal", T, "k = 0"},
        {"zero_sum_abs", F, "|K(0,0)|; 0 for non-principal chi (hard)"},
        {"gauss_max_dev", F, "max_{n != 0} ||K(n,0)| - sqrt(p)|; hard check < 1e-8 for non-principal chi"},
        {"weil_max_ratio", F, "max_{nm != 0} |K(n,m)| / (2 sqrt p); hard check <= 1"},
    };
    return run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        const Character chi(g.q, g.n);
        const auto table = kloosterman_table(chi);
        const double root = std::sqrt(static_cast<double>(g.q));
        double gauss = 0.0, weil = 0.0;
        for (std::int64_t n = 1; n < g.q; ++n) {
            gauss = std::max(gauss, std::abs(std::abs(table[n][0]) - root));
            for (std::int64_t m = 1; m < g.q; ++m) weil = std::max(weil, std::abs(table[n][m]) / (2.0 * root));
        }
        const double zero = std::abs(table[0][0]);
        rb.set("p", g.q).set("chi_index", g.n).set("principal", chi.is_principal()).set("zero_sum_abs", zero);
        rb.set("weil_max_ratio", weil);
        const auto tag = where("kloosterman", i, g.q);
        if (!chi.is_principal()) {
            rb.set("gauss_max_dev", gauss);
            if (!(gauss < 1e-8)) fails.push_back(tag + ": Gauss-sum modulus off by " + fmt(gauss));
            if (!(zero < 1e-8)) fails.push_back(tag + ": K(0,0) nonzero");
        }
        if (weil > 1.0 + 1e-9) fails.push_back(tag + ": Weil bound exceeded");
    });
}

inline Table run_bilinear(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {11, 13});
    require_primes(moduli, "bilinear");
    const auto jobs = grid(moduli, {1}, cfg.trials);
    const auto n_len = cfg.get_optional_int("n_len");
    const auto m_len = cfg.get_optional_int("m_len");
    const CharacterChoice chars(cfg, false);
    std::vector<Column> cols = {
        {"trial", E, "record index"},
        {"p", E, "prime"},
        {"chi_index", E, "non-principal character index"},
        {"N", E, "support length of alpha"},
        {"M", E, "support length of beta"},
        {"t1", E, "alpha supported on {1..N} + t1"},
        {"t2", E, "beta supported on {1..M} + t2"},
        {"abs_direct", F, "|S| by the direct triple sum"},
        {"rel_diff_table", F, "relative gap to the K-table path; hard check < 1e-6"},
        {"rel_diff_fourier", F, "relative gap to the Fourier path; hard check < 1e-6"},
        {"trivial", F, "report: ||alpha||_2 ||beta||_2 p"},
        {"ratio_trivial", F, "report: |S| / trivial"},
        {"nm1_rhs", F, "report: first bilinear bound, log factors dropped"},
        {"ratio_nm1", F, "report: |S| / nm1_rhs"},
        {"nm2_condition", T, "report: M^2 N^2 ||alphahat||^12 < p ||alpha||_2^12"},
        {"nm2_rhs", F, "report: second bilinear bound, log factors dropped"},
        {"ratio_nm2", F, "report: |S| / nm2_rhs"},
    };
    return run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        Rng rng(job_seed(cfg, g));
        const auto p = g.q;
        const Character chi = chars.pick(rng, p);
        const auto big_n = n_len.value_or((p - 1) / 2);
        const auto big_m = m_len.value_or((p - 1) / 2);
        require(big_n >= 1 && big_n <= p && big_m >= 1 && big_m <= p, ErrorCode::invalid_params, "interval lengths must lie in [1, p]");
        const auto t1 = rng.between(0, p - 1);
        const auto t2 = rng.between(0, p - 1);
        const auto alpha = random_interval_function(rng, p, t1 + 1, big_n);
        const auto beta = random_interval_function(rng, p, t2 + 1, big_m);
        const auto s = bilinear_form(chi, alpha, beta);
        const auto c = bilinear_comparison(alpha, beta, static_cast<double>(big_n), static_cast<double>(big_m));
        const double scale = std::max(std::abs(s.direct), 1e-300);
        const double rel_fourier = std::abs(s.direct - s.via_fourier) / std::max({scale, std::abs(s.via_fourier)});
        const double mag = std::abs(s.direct);
        rb.set("trial", static_cast<std::uint64_t>(i)).set("p", p).set("chi_index", chi.index());
        rb.set("N", big_n).set("M", big_m).set("t1", t1).set("t2", t2).set("abs_direct", mag);
        rb.set("rel_diff_table", s.rel_diff()).set("rel_diff_fourier", rel_fourier);
        rb.set("trivial", c.trivial).set("ratio_trivial", mag / c.trivial);
        rb.set("nm1_rhs", c.nm1_rhs).set("ratio_nm1", mag / c.nm1_rhs);
        rb.set("nm2_condition", c.nm2_condition).set("nm2_rhs", c.nm2_rhs).set("ratio_nm2", mag / c.nm2_rhs);
        const auto tag = where("bilinear", i, p);
        if (!(s.rel_diff() < 1e-6)) fails.push_back(tag + ": direct and table paths disagree");
        if (!(rel_fourier < 1e-6)) fails.push_back(tag + ": direct and Fourier paths disagree");
    });
}

inline Table run_hyperbola(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {11, 13});
    require_primes(moduli, "hyperbola");
    const auto jobs = grid(moduli, {1}, cfg.trials);
    const SizeRange sizes(cfg);
    const CharacterChoice chars(cfg, false);
    std::vector<Column> cols = {
        {"trial", E, "record index"},
        {"p", E, "prime"},
        {"chi_index", E, "non-principal character index"},
        {"size_a", E, "|A| (weights uniform on the unit disk)"},
        {"size_b", E, "|B| (weights uniform on the unit disk)"},
        {"size_x", E, "|X|"},
        {"size_y", E, "|Y|"},
        {"sum_re", F, "real part of the weighted hyperbola sum"},
        {"sum_im", F, "imaginary part"},
        {"abs_sum", F, "|sum|"},
        {"solutions", E, "#{(a,b,x,y) : (a+x)(b+y) = 1}"},
        {"trivial_bound", F, "sqrt(|A||B|) |X||Y|"},
        {"ratio", F, "report: |sum| / trivial_bound"},
        {"encoding_residual", F, "unit weights: |hyperbola sum - G-twisted sum over g_{a,b}|; hard check < 1e-9 (|A||B||X|)"},
    };
    auto t = run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        Rng rng(job_seed(cfg, g));
        const auto p = g.q;
        const Modulus mod(p);
        const Character chi = chars.pick(rng, p);
        const auto dom = scalar_domain(0, p);
        const auto sa = sizes.draw(rng, dom.size());
        const auto sb = sizes.draw(rng, dom.size());
        const auto sx = sizes.draw(rng, dom.size());
        const auto sy = sizes.draw(rng, dom.size());
        const auto a = random_subset(rng, mod, 1, dom, sa, true);
        const auto b = random_subset(rng, mod, 1, dom, sb, true);
        const auto x = random_subset(rng, mod, 1, dom, sx);
        const auto y = random_subset(rng, mod, 1, dom, sy);
        const auto h = hyperbola_sum(chi, a, b, x, y);
        const auto plain = hyperbola_sum(chi, a.without_weights(), b.without_weights(), x, y);
        const auto twisted = group_twisted_sum(chi, hyperbola_family(a, b), x, y);
        const double residual = std::abs(plain.sum - twisted);
        rb.set("trial", static_cast<std::uint64_t>(i)).set("p", p).set("chi_index", chi.index());
        rb.set("size_a", static_cast<std::uint64_t>(sa)).set("size_b", static_cast<std::uint64_t>(sb));
        rb.set("size_x", static_cast<std::uint64_t>(sx)).set("size_y", static_cast<std::uint64_t>(sy));
        rb.set("sum_re", h.sum.real()).set("sum_im", h.sum.imag()).set("abs_sum", std::abs(h.sum));
        rb.set("solutions", h.solutions).set("trivial_bound", h.trivial_bound).set("ratio", h.cancellation_ratio());
        rb.set("encoding_residual", residual);
        if (!(residual < 1e-9 * static_cast<double>(sa * sb * sx + 1)))
            fails.push_back(where("hyperbola", i, p) + ": g_{a,b} encoding residual " + fmt(residual));
    });
    t.add_summary({"ratio"});
    return t;
}

inline Table run_proposition41(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {7, 11, 13});
    require_primes(moduli, "proposition41");
    const auto k = cfg.get_int("k", 2);
    require(k == 2 || k == 3, ErrorCode::invalid_params, "k must be 2 or 3");
    const auto g_max = cfg.get_int("group_size", 30);
    require(g_max >= 1, ErrorCode::invalid_params, "group_size must be >= 1");
    const auto energy_cap = static_cast<std::uint64_t>(cfg.get_int("energy_cap", 10'000'000));
    const auto jobs = grid(moduli, {k}, cfg.trials);
    const SizeRange sizes(cfg);
    const CharacterChoice chars(cfg, true);
    std::vector<Column> cols = {
        {"trial", E, "record index"},
        {"p", E, "prime"},
        {"k", E, "energy order"},
        {"chi_index", E, "character index (0 = principal)"},
        {"size_a", E, "|A| (disk weights)"},
        {"size_b", E, "|B| (disk weights)"},
        {"size_g", E, "|G|, G drawn uniformly from GL_2(F_p)"},
        {"lhs_abs", F, "|sum_{a,b} c_A c_B sum_{g a = b} chi(gamma a + delta)|"},
        {"t2k_balanced", F, "T_{2k}(f_G) = T_{2k}(G) - |G|^{4k}/|GL_2|"},
        {"rhs", F, "sqrt(|A||B||G|) T^{1/(8k)} + sqrt(|A||B|) |G| max(|A|,|B|)^{-1/(2k)}"},
        {"slack", F, "report: rhs / (lhs_abs / 4)"},
        {"lift_residual", F, "|lifted sum - (p-1) lhs|"},
        {"lift_tolerance", F, "1e-6 (p-1) sqrt(|A||B|) |G|; hard check residual <= tolerance"},
    };
    auto t = run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        Rng rng(job_seed(cfg, g));
        const auto p = g.q;
        const Modulus mod(p);
        const Character chi = chars.pick(rng, p);
        const auto dom = scalar_domain(0, p);
        const auto sa = sizes.draw(rng, dom.size());
        const auto sb = sizes.draw(rng, dom.size());
        const auto a = random_subset(rng, mod, 1, dom, sa, true);
        const auto b = random_subset(rng, mod, 1, dom, sb, true);
        const auto sg = static_cast<std::size_t>(rng.between(1, std::min<std::int64_t>(g_max, static_cast<std::int64_t>(gl2_order(p)))));
        const MatrixFamily fam(p, random_gl2_subset(rng, p, sg));
        const auto lhs = group_twisted_sum(chi, fam, a, b);
        const double energy = energy_T2k(fam, static_cast<unsigned>(k), true, {energy_cap});
        const double rhs = prop_rhs(static_cast<unsigned>(k), sa, sb, sg, std::max(0.0, energy));
        const auto lift = projective_lift_check(chi, fam, a, b);
        const double quarter = std::abs(lhs) / 4.0;
        rb.set("trial", static_cast<std::uint64_t>(i)).set("p", p).set("k", k).set("chi_index", chi.index());
        rb.set("size_a", static_cast<std::uint64_t>(sa)).set("size_b", static_cast<std::uint64_t>(sb));
        rb.set("size_g", static_cast<std::uint64_t>(sg)).set("lhs_abs", std::abs(lhs)).set("t2k_balanced", energy);
        rb.set("rhs", rhs).set("slack", quarter == 0.0 ? std::numeric_limits<double>::infinity() : rhs / quarter);
        rb.set("lift_residual", lift.residual).set("lift_tolerance", lift.tolerance);
        if (!lift.holds()) fails.push_back(where("proposition41", i, p) + ": lift residual " + fmt(lift.residual));
    });
    t.add_summary({"slack"});
    return t;
}

inline Table run_intersection(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {1009});
    require_primes(moduli, "intersection-charsum");
    const auto big_n = cfg.get_int("n_len", 10);
    const auto lambda_size = cfg.get_int("lambda_size", 5);
    const auto variant_name = cfg.get_string("variant", "multiplicative");
    const double c_star = cfg.get_double("c_star", 1.0);
    require(variant_name == "multiplicative" || variant_name == "shifted", ErrorCode::invalid_params,
            "variant must be multiplicative or shifted");
    const auto variant = variant_name == "shifted" ? IntersectionVariant::shifted : IntersectionVariant::multiplicative;
    require(big_n >= 1 && lambda_size >= 1, ErrorCode::invalid_params, "n_len and lambda_size must be >= 1");
    const auto jobs = grid(moduli, {1}, cfg.trials);
    const CharacterChoice chars(cfg, false);
    std::vector<Column> cols = {
        {"trial", E, "record index"},
        {"p", E, "prime"},
        {"variant", T, "multiplicative: A cap A^{-1}; shifted: A^{-1} cap (A^{-1} + 1)"},
        {"chi_index", E, "non-principal character index"},
        {"N", E, "interval length, I = {1..N}"},
        {"lambda_size", E, "|Lambda|"},
        {"size_a", E, "|A| for A = I + Lambda with 0 removed"},
        {"intersection", E, "size of the intersection"},
        {"abs_sum", F, "|sum of chi over the intersection|"},
        {"ratio", F, "report: abs_sum / intersection"},
        {"comparison", F, "report: |A|^2 / p"},
        {"saving_reference", F, "report: N^{-c*}"},
    };
    auto t = run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        (void)fails;
        const auto& g = jobs[i];
        Rng rng(job_seed(cfg, g));
        const auto p = g.q;
        const Modulus mod(p);
        const Character chi = chars.pick(rng, p);
        const auto dom = scalar_domain(0, p);
        std::optional<IntervalUnion> u;
        for (int attempt = 0; attempt < 1000 && !u; ++attempt) {
            const auto lam = random_subset(rng, mod, 1, dom, static_cast<std::size_t>(lambda_size));
            if (is_direct_sum(interval(mod, 1, big_n), lam)) u = interval_union(lam, big_n);
        }
        require(u.has_value(), ErrorCode::structure, "no direct-sum Lambda found in 1000 draws");
        std::vector<Residue> nonzero;
        for (const auto& x : u->set.elements())
            if (x[0] != 0) nonzero.push_back(x[0]);
        const auto a = PointSet::scalars(mod, nonzero);
        const auto r = intersection_char_sum(chi, a, variant);
        rb.set("trial", static_cast<std::uint64_t>(i)).set("p", p).set("variant", variant_name).set("chi_index", chi.index());
        rb.set("N", big_n).set("lambda_size", lambda_size).set("size_a", static_cast<std::uint64_t>(a.size()));
        rb.set("intersection", static_cast<std::uint64_t>(r.size)).set("abs_sum", std::abs(r.sum)).set("ratio", r.ratio());
        rb.set("comparison", r.comparison).set("saving_reference", std::pow(static_cast<double>(big_n), -c_star));
    });
    t.add_summary({"ratio"});
    return t;
}

// ---------------------------------------------------------------------------
// Zaremba sets and energies
// ---------------------------------------------------------------------------

inline std::string join(const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

inline Table run_zaremba(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {7});
    const auto big_m = cfg.get_int("m_bound", 3);
    const double w = cfg.get_double("w", 0.8);
    const auto ad_n = cfg.get_int("ad_n", 1);
    const WitnessKnobs knobs{cfg.get_double("big_c", 1.0), cfg.get_double("c_star", 1.0), cfg.get_double("n_len", 1.0)};
    for (auto q : moduli) require(q >= 2, ErrorCode::invalid_params, "moduli must be >= 2");
    require(big_m >= 1, ErrorCode::invalid_params, "m_bound must be >= 1");
    std::vector<Column> cols = {
        {"q", E, "denominator"},
        {"M", E, "bound on partial quotients"},
        {"zaremba_size", E, "|Z_M(q)|"},
        {"elements", T, "Z_M(q), space separated"},
        {"roundtrip_ok", T, "every reduced a/q expands and reconstructs exactly (hard)"},
        {"alt_form_size", E, "report: |Z_M(q)| when the alternate expansion [.., c_s - 1, 1] is used"},
        {"qr_witness", E, "prime q: smallest quadratic residue in Z_M(q)"},
        {"qr_intersection", E, "prime q: |Z_M(q) cap QR|"},
        {"lower_bound_expr", F, "report: |A||Gamma|/(q-1) - C |A| N^{-c*}"},
        {"minimal_m", E, "report: smallest M with a quadratic-residue witness"},
        {"ad_min_ratio", F, "report: min |Z cap (D+z)| / (|D|^w N^{1-w})"},
        {"ad_max_ratio", F, "report: max of the same ratio"},
        {"mult_energy", E, "E(Z) for Z = Z_M(q)"},
        {"energy_rhs", F, "report: |Z|^3 (q/|Z|)^{3-4w} N^{-2(1-w)}"},
        {"energy_trivial", F, "report: |Z|^3"},
        {"energy_baseline", F, "report: |Z|^4/q + |Z|^2"},
        {"energy_regime", T, "report: w > 3/4"},
    };
    ExperimentConfig local = cfg;
    local.experiment = Experiment::zaremba;
    return run_jobs(local, cols, moduli.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto q = moduli[i];
        const auto z = zaremba_set(q, big_m);
        bool roundtrip = true;
        std::size_t alt = 0;
        for (std::int64_t a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            const auto cf = cf_expand(a, q);
            roundtrip = roundtrip && cf_value(cf.quotients) == std::make_pair(a, q) &&
                        convergent_denominators(cf.quotients).back() == q;
            alt += cf.alternate_max_quotient() <= big_m;
        }
        rb.set("q", q).set("M", big_m).set("zaremba_size", static_cast<std::uint64_t>(z.size())).set("elements", join(z));
        rb.set("roundtrip_ok", roundtrip).set("alt_form_size", static_cast<std::uint64_t>(alt));
        if (!roundtrip) fails.push_back(where("zaremba", i, q) + ": continued-fraction round trip failed");
        if (is_prime(q) && q > 2) {
            const auto qr = SubgroupSpec::quadratic_residues(q);
            const auto wr = find_in_subgroup(q, big_m, qr, knobs);
            if (wr.witness) rb.set("qr_witness", *wr.witness);
            rb.set("qr_intersection", static_cast<std::uint64_t>(wr.intersection)).set("lower_bound_expr", wr.lower_bound_expr);
            for (std::int64_t mm = 1; mm <= q; ++mm)
                if (find_in_subgroup(q, mm, qr).witness) {
                    rb.set("minimal_m", mm);
                    break;
                }
        }
        const auto zs = PointSet::scalars(Modulus(q), std::span<const Residue>(z));
        if (!z.empty()) {
            const auto ad = ad_regularity(zs, ad_n, w);
            if (!ad.rows.empty()) rb.set("ad_min_ratio", ad.min_ratio).set("ad_max_ratio", ad.max_ratio);
        }
        const auto e = energy_bound_report(zs, ad_n, w);
        rb.set("mult_energy", e.energy).set("energy_rhs", e.rhs).set("energy_trivial", e.trivial);
        rb.set("energy_baseline", e.random_baseline).set("energy_regime", e.regime_ok);
    });
}

inline Table run_energy(const ExperimentConfig& cfg) {
    using namespace detail;
    const auto moduli = cfg.get_int_list("moduli", {5});
    require_primes(moduli, "energy");
    const auto k = cfg.get_int("k", 2);
    require(k == 2 || k == 3, ErrorCode::invalid_params, "k must be 2 or 3");
    const auto g_max = cfg.get_int("group_size", 12);
    const auto z_mod = cfg.get_int("z_modulus", 13);
    const auto z_size = cfg.get_int("z_size", 6);
    const auto energy_cap = static_cast<std::uint64_t>(cfg.get_int("energy_cap", 10'000'000));
    const auto subgroup_moduli = cfg.get_int_list("subgroup_moduli", {7, 11, 13});
    require(is_prime(z_mod), ErrorCode::invalid_params, "z_modulus must be prime");
    require(z_size >= 1 && z_size <= z_mod - 1, ErrorCode::invalid_params, "z_size must lie in [1, z_modulus - 1]");
    require(g_max >= 1, ErrorCode::invalid_params, "group_size must be >= 1");
    require_primes(subgroup_moduli, "energy subgroup check");
    const auto jobs = grid(moduli, {k}, cfg.trials);
    std::vector<Column> cols = {
        {"trial", E, "record index"},
        {"p", E, "prime for G in GL_2(F_p)"},
        {"k", E, "energy order"},
        {"size_g", E, "|G|"},
        {"t2k_conv", E, "T_{2k}(G) by iterated convolution"},
        {"t2k_enum", E, "T_{2k}(G) by |G|^{2k} tuple enumeration; empty when over the cap"},
        {"t2k_match", T, "hard check: conv = enum"},
        {"t2k_balanced", F, "T_{2k}(f_G)"},
        {"z_modulus", E, "prime for Z in F^*"},
        {"size_z", E, "|Z|"},
        {"mult_energy", E, "E(Z) from the product histogram"},
        {"mult_enum", E, "E(Z) by |Z|^4 enumeration"},
        {"mult_match", T, "hard check: histogram = enumeration"},
        {"mult_baseline", F, "report: |Z|^4/p + |Z|^2"},
    };
    auto t = run_jobs(cfg, cols, jobs.size(), [&](std::size_t i, RowBuilder& rb, std::vector<std::string>& fails) {
        const auto& g = jobs[i];
        Rng rng(job_seed(cfg, g));
        const auto p = g.q;
        const auto sg = static_cast<std::size_t>(rng.between(1, std::min<std::int64_t>(g_max, static_cast<std::int64_t>(gl2_order(p)))));
        const MatrixFamily fam(p, random_gl2_subset(rng, p, sg));
        const EnergyOptions opts{energy_cap};
        const auto conv = energy_T2k_raw(fam, static_cast<unsigned>(k), opts);
        rb.set("trial", static_cast<std::uint64_t>(i)).set("p", p).set("k", k).set("size_g", static_cast<std::uint64_t>(sg));
        rb.set("t2k_conv", conv).set("t2k_balanced", energy_T2k(fam, static_cast<unsigned>(k), true, opts));
        const auto tag = where("energy", i, p);
        const long double tuples = std::pow(static_cast<long double>(sg), 2.0L * static_cast<long double>(k));
        if (tuples <= static_cast<long double>(energy_cap)) {
            const auto en = energy_T2k_enumerate(fam, static_cast<unsigned>(k), opts);
            rb.set("t2k_enum", en).set("t2k_match", conv == en);
            if (conv != en) fails.push_back(tag + ": T_2k convolution and enumeration differ");
        } else {
            rb.set("t2k_match", "skipped");
        }
        const Modulus zm(z_mod);
        const auto z = random_subset(rng, zm, 1, scalar_domain(1, z_mod), static_cast<std::size_t>(z_size));
        const auto e1 = mult_energy(z);
        const auto e2 = mult_energy_enumerate(z);
        const auto zs = static_cast<double>(z.size());
        rb.set("z_modulus", z_mod).set("size_z", static_cast<std::uint64_t>(z.size()));
        rb.set("mult_energy", e1).set("mult_enum", e2).set("mult_match", e1 == e2);
        rb.set("mult_baseline", zs * zs * zs * zs / static_cast<double>(z_mod) + zs * zs);
        if (e1 != e2) fails.push_back(tag + ": multiplicative energy paths differ");
    });
    for (auto p : subgroup_moduli)
        for (const auto& gamma : SubgroupSpec::all(p)) {
            const auto e = mult_energy(gamma.as_set());
            const BigInt cube = BigInt(gamma.size()) * gamma.size() * gamma.size();
            if (e != cube)
                t.add_failure("energy: E(Gamma) != |Gamma|^3 for p=" + std::to_string(p) + ", |Gamma|=" + std::to_string(gamma.size()));
        }
    t.add_note("subgroup law E(Gamma) = |Gamma|^3 checked for every subgroup of F_p^*, p in {" +
               join(subgroup_moduli) + "}");
    return t;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline Table run(const ExperimentConfig& cfg, std::ostream* matrix_dump = nullptr) {
    Table t = [&] {
        switch (cfg.experiment) {
            case Experiment::dot_incidence: return run_dot(cfg);
            case Experiment::det_incidence: return run_det(cfg);
            case Experiment::crossratio_incidence: return run_crossratio(cfg);
            case Experiment::spectrum: return run_spectrum(cfg, matrix_dump);
            case Experiment::kloosterman: return run_kloosterman(cfg);
            case Experiment::bilinear: return run_bilinear(cfg);
            case Experiment::hyperbola: return run_hyperbola(cfg);
            case Experiment::proposition41: return run_proposition41(cfg);
            case Experiment::intersection_charsum: return run_intersection(cfg);
            case Experiment::zaremba: return run_zaremba(cfg);
            case Experiment::energy: return run_energy(cfg);
        }
        fail(ErrorCode::invalid_params, "unknown experiment");
    }();
    const auto unused = cfg.unused_keys();
    require(unused.empty(), ErrorCode::invalid_params, "unknown config key '" + (unused.empty() ? "" : unused.front()) + "'");
    return t;
}

/// Writes the table in the configured format. For CSV with a file path, the
/// schema goes to PATH.schema.json.
inline void emit(const Table& t, const ExperimentConfig& cfg, std::ostream& fallback) {
    auto write = [&](std::ostream& os) {
        if (cfg.format == OutputFormat::csv) t.write_csv(os);
        else os << t.to_json().dump(2) << "\n";
    };
    if (cfg.out.empty() || cfg.out == "-") {
        write(fallback);
        return;
    }
    std::ofstream os(cfg.out, std::ios::binary);
    require(static_cast<bool>(os), ErrorCode::io, "cannot open " + cfg.out + " for writing");
    write(os);
    require(static_cast<bool>(os), ErrorCode::io, "write to " + cfg.out + " failed");
    if (cfg.format == OutputFormat::csv) {
        const auto schema_path = cfg.out + ".schema.json";
        std::ofstream ss(schema_path, std::ios::binary);
        require(static_cast<bool>(ss), ErrorCode::io, "cannot open " + schema_path + " for writing");
        ss << t.schema().dump(2) << "\n";
        require(static_cast<bool>(ss), ErrorCode::io, "write to " + schema_path + " failed");
    }
}

}  // namespace zqlab::harness
