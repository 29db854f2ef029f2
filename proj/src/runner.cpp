#include "lpres/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "lpres/errors.hpp"
#include "lpres/evolution.hpp"
#include "lpres/linalg.hpp"
#include "lpres/lyapunov.hpp"
#include "lpres/resonance.hpp"

namespace lpres {

namespace {

constexpr double kTransitionMonotoneTol = 1e-6;

class Context {
public:
    explicit Context(const Scenario& sc) : sc_(sc) {}

    GridPtr half() {
        if (!half_) half_ = make_grid(DomainKind::HalfLine, sc_.n, sc_.e_max, sc_.scheme);
        return half_;
    }

    GridPtr full() {
        if (!full_) {
            full_ = sc_.mode == Mode::HalfLine
                        ? half()->parent()
                        : make_grid(DomainKind::FullLine, sc_.n, sc_.e_max, sc_.scheme);
        }
        return full_;
    }

    const HardyProjector& hp() {
        if (!hp_) hp_ = build_hardy_projectors(full(), sc_.projector, sc_.tol);
        return *hp_;
    }

    const LyapunovPair& pair() {
        if (!pair_) pair_ = build_lyapunov_pair(hp(), half(), sc_.tol);
        return *pair_;
    }

    const ResonanceStates& states() {
        if (!states_) states_ = build_resonance_states(pair(), sc_.resonance, sc_.tol);
        return *states_;
    }

    bool has_states() const { return states_.has_value(); }

    StateVector reference() {
        return smooth_peaked_state(half(), 2.0 * sc_.resonance.e0, 0.25 * sc_.resonance.e0);
    }

    double horizon() const {
        return sc_.times.t_max > 0.0 ? sc_.times.t_max : 40.0 / sc_.resonance.gamma;
    }

    std::vector<double> linear_times() const {
        std::vector<double> t(static_cast<std::size_t>(sc_.times.count));
        for (int k = 0; k < sc_.times.count; ++k) t[k] = horizon() * k / (sc_.times.count - 1);
        return t;
    }

private:
    const Scenario& sc_;
    GridPtr half_;
    GridPtr full_;
    std::optional<HardyProjector> hp_;
    std::optional<LyapunovPair> pair_;
    std::optional<ResonanceStates> states_;
};

struct RowFactory {
    const EnergyGrid& grid;
    std::string model;

    BoundReport operator()(std::string name, std::string relation, double lhs,
                           std::vector<std::pair<std::string, double>> terms, double tolerance,
                           double t = 0.0) const {
        BoundReport r;
        r.name = std::move(name);
        r.relation = std::move(relation);
        r.lhs = lhs;
        r.rhs_terms = std::move(terms);
        for (const auto& [k, v] : r.rhs_terms) r.rhs_total += v;
        r.tolerance = tolerance;
        r.n = grid.n();
        r.e_max = grid.e_max();
        r.scheme = to_string(grid.scheme());
        r.model = model;
        r.t = t;
        r.judge();
        return r;
    }
};

std::string format_pole(cplx z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

bool is_informational(const BoundReport& r) {
    return r.name.find(":unresolved") != std::string::npos;
}

double max_increase(const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) worst = std::max(worst, v[k] - v[k - 1]);
    return worst;
}

double max_increase_after_peak(const std::vector<double>& v) {
    const auto peak = std::max_element(v.begin(), v.end()) - v.begin();
    double worst = 0.0;
    for (auto k = peak + 1; k < static_cast<std::ptrdiff_t>(v.size()); ++k) {
        worst = std::max(worst, v[k] - v[k - 1]);
    }
    return worst;
}

std::vector<double> column_norms(const CMat& m) {
    std::vector<double> out(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k) out[k] = m.col(k).norm();
    return out;
}

SuiteResult suite_hardy_oracle(const Scenario& sc, Context& ctx) {
    const HardyProjector& hp = ctx.hp();
    const RowFactory row{*hp.grid(), "-"};
    SuiteResult res;
    const auto poles = default_oracle_poles();
    const OracleReport rep = hardy_oracle(hp, poles, sc.tol);
    for (const auto& c : rep.cases) {
        std::string name = "oracle[" + format_pole(c.pole) + "]";
        if (!c.resolved) name += ":unresolved";
        res.rows.push_back(row(name, "<=", c.residual, {{"oracle_tol", sc.tol.oracle_tol}}, 0.0));
    }
    const ProjectorDefects d = probe_projector(hp, 8, sc.seed);
    res.rows.push_back(row("complementarity", "<=", d.complementarity, {{"build_tol", sc.tol.build_tol}}, 0.0));
    res.rows.push_back(row("idempotence", "<=", d.idempotence, {{"proj_tol", sc.tol.proj_tol}}, 0.0));
    res.rows.push_back(row("self-adjointness", "<=", d.self_adjointness, {{"proj_tol", sc.tol.proj_tol}}, 0.0));
    res.notes.push_back("boundary band excludes |E| > " + format_number(rep.band));
    return res;
}

SuiteResult suite_operators(const Scenario& sc, Context& ctx) {
    const HardyProjector& hp = ctx.hp();
    const GridPtr half = ctx.half();
    const RowFactory row{*half, "-"};
    const int n = half->n();
    SuiteResult res;

    const Vec raw = hp.exact() && n % 2 == 0
                        ? SpectralFactor::structured(n)->raw_eigenvalues()
                        : linalg::eigvalsh(linalg::hermitian_part(hp.plus_block(half->parent_offset(), n)));
    res.rows.push_back(row("mf-spectrum-lower", "<=", -raw.minCoeff(), {{"spec_tol", sc.tol.spec_tol}}, 0.0));
    res.rows.push_back(row("mf-spectrum-upper", "<=", raw.maxCoeff(), {{"one_plus_spec_tol", 1.0 + sc.tol.spec_tol}}, 0.0));
    if (hp.exact()) {
        const InjectivityCertificate cert = injectivity_certificate(n);
        BoundReport r = row("mf-min-eigenvalue-log10-lower-bound", ">=", cert.log10_lambda_min_lower,
                            {{"finite", -std::numeric_limits<double>::infinity()}}, 0.0);
        r.pass = cert.injective;
        res.rows.push_back(r);
    }

    const OperatorMatrix m_f = build_m_f(hp, half);
    const OperatorMatrix m_b = build_m_b(hp, half);
    const CMat id = CMat::Identity(n, n);
    res.rows.push_back(row("complementarity", "<=", linalg::opnorm(m_f.entries + m_b.entries - id),
                           {{"proj_tol", sc.tol.proj_tol}}, 0.0));
    const OperatorMatrix lf = sqrt_operator(m_f);
    const OperatorMatrix lb = sqrt_operator(m_b);
    res.rows.push_back(row("sqrt-reconstruction-f", "<=", linalg::opnorm(lf.entries * lf.entries - m_f.entries),
                           {{"sqrt_tol", sc.tol.sqrt_tol}}, 0.0));
    res.rows.push_back(row("sqrt-reconstruction-b", "<=", linalg::opnorm(lb.entries * lb.entries - m_b.entries),
                           {{"sqrt_tol", sc.tol.sqrt_tol}}, 0.0));
    res.rows.push_back(row("sqrt-commutation", "<=",
                           linalg::opnorm(lf.entries * lb.entries - lb.entries * lf.entries),
                           {{"sqrt_tol", sc.tol.sqrt_tol}}, 0.0));
    const FlagCheck fc = verify_flags(m_f, sc.tol);
    res.rows.push_back(row("mf-hermiticity", "<=", fc.hermiticity_defect, {{"hermiticity_tol", sc.tol.hermiticity_tol}}, 0.0));
    return res;
}

SuiteResult suite_lyapunov(const Scenario& sc, Context& ctx) {
    const LyapunovPair& pair = ctx.pair();
    const RowFactory row{*pair.grid(), "-"};
    const std::vector<double> times = ctx.linear_times();
    std::vector<double> neg(times.rbegin(), times.rend());
    for (auto& t : neg) t = -t;

    auto traces = [&](const StateVector& psi) {
        std::vector<double> f = lyapunov_trace(pair, LyapOp::MF, psi, times);
        std::vector<double> b = lyapunov_trace(pair, LyapOp::MB, psi, neg);
        std::reverse(b.begin(), b.end()); // b[k] at -times[k]
        return std::pair{f, b};
    };

    const auto [ref_f, ref_b] = traces(ctx.reference());
    double worst_f = max_increase(ref_f);
    double worst_b = max_increase(ref_b);
    for (int k = 0; k < kRandomStates; ++k) {
        const StateVector psi = random_packet_state(pair.grid(), sc.seed * 1000003ULL + k, 0.5, 4.0);
        const auto [f, b] = traces(psi);
        worst_f = std::max(worst_f, max_increase(f));
        worst_b = std::max(worst_b, max_increase(b));
    }
    SuiteResult res;
    res.rows.push_back(row("forward-monotone", "<=", worst_f, {{"monotone_tol", kMonotoneTol}}, 0.0));
    res.rows.push_back(row("forward-decay", "<=", ref_f.back() / ref_f.front(), {{"ratio", kDecayRatio}}, 0.0, times.back()));
    res.rows.push_back(row("backward-monotone", "<=", worst_b, {{"monotone_tol", kMonotoneTol}}, 0.0));
    res.rows.push_back(row("backward-decay", "<=", ref_b.back() / ref_b.front(), {{"ratio", kDecayRatio}}, 0.0, -times.back()));
    ColumnTable tab{{"t", "tau_mf", "tau_mb_at_minus_t"}, {}};
    for (std::size_t k = 0; k < times.size(); ++k) tab.rows.push_back({times[k], ref_f[k], ref_b[k]});
    res.columns.emplace_back("trace", std::move(tab));
    res.notes.push_back(std::to_string(kRandomStates) + " random packet states plus the reference state");
    return res;
}

SuiteResult suite_semigroup(const Scenario& sc, Context& ctx) {
    const LyapunovPair& pair = ctx.pair();
    const SMatrixModel model = sc.smatrix();
    const RowFactory row{*pair.grid(), model.name};
    const std::vector<double> times = sc.sample_times();
    const StateVector phi = ctx.reference();
    SuiteResult res;

    const double start = pair.apply(LyapOp::LambdaF, phi).norm();
    double composition = 0.0;
    bool contraction = true;
    const std::size_t m = times.size();
    for (const std::size_t i : {std::size_t{1}, m / 4, m / 2}) {
        for (const std::size_t j : {std::size_t{2}, m / 3, m - 1}) {
            const SemigroupDefectReport d = z_forward_defect(pair, phi, times[i], times[j], sc.tol);
            composition = std::max(composition, d.defect / start);
            contraction = contraction && d.contraction_ok;
        }
    }
    res.rows.push_back(row("z-forward-composition", "<=", composition, {{"semigroup_tol", kSemigroupTol}}, 0.0));
    const std::vector<double> zf = column_norms(
        pair.apply_weighted(LyapOp::LambdaF, evolve_columns(*pair.grid(), phi.weighted(), times)));
    res.rows.push_back(row("z-forward-contraction", "<=", *std::max_element(zf.begin(), zf.end()) / start,
                           {{"one", 1.0}}, sc.tol.spec_tol));
    res.rows.push_back(row("z-forward-monotone", "<=", max_increase(zf) / start, {{"monotone_tol", kMonotoneTol}}, 0.0));

    const double t1 = 1.0 / sc.resonance.gamma;
    const SemigroupDefectReport za = semigroup_defect(pair, model, phi, t1, t1, sc.tol);
    res.rows.push_back(row("z-app-non-semigroup", ">=", za.defect / phi.norm(), {{"floor", kNonSemigroupFloor}}, 0.0, t1));
    const std::vector<double> zn = column_norms(apply_z_app(pair, model, phi.weighted(), times));
    res.rows.push_back(row("z-app-contraction", "<=", *std::max_element(zn.begin(), zn.end()) / phi.norm(),
                           {{"one", 1.0}}, sc.tol.spec_tol));
    ColumnTable tab{{"t", "z_forward_norm", "z_app_norm"}, {}};
    for (std::size_t k = 0; k < m; ++k) tab.rows.push_back({times[k], zf[k], zn[k]});
    res.columns.emplace_back("norms", std::move(tab));
    if (!contraction) res.notes.push_back("z_forward_defect reported a contraction violation");
    return res;
}

SuiteResult suite_norms(const Scenario& sc, Context& ctx) {
    const ResonanceStates& st = ctx.states();
    const RowFactory row{*ctx.half(), "-"};
    SuiteResult res;
    res.rows.push_back(row("norm-app2", "==", st.norm_app2, {{"closed_form", st.norm_app2_exact()}}, 0.005));
    res.rows.push_back(row("norm-res2", "==", st.norm_res2, {{"pi_over_gamma", st.norm_res2_limit()}}, 0.03));
    res.rows.push_back(row("r", "==", st.r, {{"closed_form", st.r_exact()}}, 0.005));
    res.rows.push_back(row("res-dominates-app", ">=", st.norm_res2, {{"norm_app2", st.norm_app2}}, 0.0));
    res.notes.push_back("eigen floor " + format_number(st.conditioning) + ", Lambda_F condition " +
                        format_number(st.lambda_f_condition));
    (void)sc;
    return res;
}

SuiteResult suite_background(const Scenario& sc, Context& ctx) {
    const ResonanceStates& st = ctx.states();
    const RowFactory row{*ctx.half(), "-"};
    const std::vector<double> times = sc.sample_times();
    const auto recs = survival_decomposition(st, times);
    const double bound = background_bound(st.r);
    SuiteResult res;
    ColumnTable tab{{"t", "abs_amplitude", "re_amplitude", "im_amplitude", "abs_pole_term", "abs_background"}, {}};
    for (const auto& r : recs) {
        res.rows.push_back(row("background", "<=", std::abs(r.background), {{"bound", bound}}, sc.tol.report_tol, r.t));
        tab.rows.push_back({r.t, std::abs(r.amplitude), r.amplitude.real(), r.amplitude.imag(),
                            std::abs(r.pole_term), std::abs(r.background)});
    }
    const auto zero = survival_decomposition(st, std::vector<double>{0.0});
    res.rows.push_back(row("background-initial", "<=", std::abs(zero.front().background),
                           {{"tol", kInitialBackgroundTol}}, 0.0));
    res.columns.emplace_back("survival", std::move(tab));
    return res;
}

SuiteResult suite_theorem5(const Scenario& sc, Context& ctx) {
    SuiteResult res;
    res.rows.push_back(theorem5_report(ctx.states(), ctx.pair(), sc.smatrix(), sc.tol));
    return res;
}

SuiteResult suite_eigen_deviation(const Scenario& sc, Context& ctx) {
    const ResonanceStates& st = ctx.states();
    const LyapunovPair& pair = ctx.pair();
    const SMatrixModel model = sc.smatrix();
    const RowFactory row{*pair.grid(), model.name};
    const std::vector<double> times = sc.sample_times();
    SuiteResult res;
    res.rows = eigenvector_deviation(st, pair, model, times, sc.tol);
    std::vector<double> early;
    for (double t : times) {
        if (t <= 5.0 / sc.resonance.gamma) early.push_back(t);
    }
    const auto eig = eigen_relation_residual(st, pair, early);
    ColumnTable tab{{"t", "lift_residual", "direct_residual"}, {}};
    for (const auto& e : eig) {
        res.rows.push_back(row("eigen-relation", "<=", e.lift, {{"tol", kEigenRelationTol}}, 0.0, e.t));
        tab.rows.push_back({e.t, e.lift, e.direct});
    }
    res.columns.emplace_back("eigen_relation", std::move(tab));
    return res;
}

SuiteResult suite_proof_chain(const Scenario& sc, Context& ctx) {
    SuiteResult res;
    res.rows = proof_chain_report(ctx.states(), ctx.pair(), sc.smatrix(), sc.tol);
    return res;
}

SuiteResult suite_transition(const Scenario& sc, Context& ctx) {
    const LyapunovPair& pair = ctx.pair();
    const RowFactory row{*pair.grid(), "-"};
    const std::vector<double> times = ctx.linear_times();
    std::vector<double> neg(times);
    for (auto& t : neg) t = -t;
    const StateVector psi = ctx.reference();
    const std::vector<double> fwd = column_norms(
        pair.apply_weighted(LyapOp::LambdaF, evolve_columns(*pair.grid(), psi.weighted(), times)));
    const std::vector<double> bwd = column_norms(
        pair.apply_weighted(LyapOp::LambdaB, evolve_columns(*pair.grid(), psi.weighted(), neg)));
    SuiteResult res;
    res.rows.push_back(row("forward-decay", "<=", fwd.back() / fwd.front(), {{"ratio", kDecayRatio}}, 0.0, times.back()));
    res.rows.push_back(row("forward-monotone-after-peak", "<=", max_increase_after_peak(fwd) / fwd.front(),
                           {{"tol", kTransitionMonotoneTol}}, 0.0));
    res.rows.push_back(row("backward-decay", "<=", bwd.back() / bwd.front(), {{"ratio", kDecayRatio}}, 0.0, neg.back()));
    res.rows.push_back(row("backward-monotone-after-peak", "<=", max_increase_after_peak(bwd) / bwd.front(),
                           {{"tol", kTransitionMonotoneTol}}, 0.0));
    double identity = 0.0;
    for (const double t : {0.5 * times.back(), -0.5 * times.back()}) {
        for (const Direction dir : {Direction::Forward, Direction::Backward}) {
            const auto [b, f] = transition_decompose(pair, psi, t, dir);
            identity = std::max(identity, (b + f - evolve(psi, t)).norm());
        }
    }
    res.rows.push_back(row("decomposition-identity", "<=", identity, {{"build_tol", sc.tol.build_tol}}, 0.0));
    ColumnTable tab{{"t", "lambda_f_norm", "lambda_b_norm_at_minus_t"}, {}};
    for (std::size_t k = 0; k < times.size(); ++k) tab.rows.push_back({times[k], fwd[k], bwd[k]});
    res.columns.emplace_back("norms", std::move(tab));
    return res;
}

SuiteResult suite_lp_limit(const Scenario& sc, Context&) {
    const LpLimitReport rep = lp_limit_report(sc.n, sc.e_max, sc.seed);
    const GridPtr g = make_grid(DomainKind::FullLine, sc.n, sc.e_max, Scheme::Uniform);
    const RowFactory row{*g, "-"};
    SuiteResult res;
    res.rows.push_back(row("m-plus-idempotence", "<=", rep.idempotence, {{"proj_tol", sc.tol.proj_tol}}, 0.0));
    res.rows.push_back(row("complementarity", "<=", rep.complementarity, {{"build_tol", sc.tol.build_tol}}, 0.0));
    res.rows.push_back(row("z-semigroup-law", "<=", rep.semigroup_defect, {{"semigroup_tol", kSemigroupTol}}, 0.0));
    res.notes.push_back("uniform grid; times are multiples of " + format_number(rep.time_step));
    return res;
}

SuiteResult dispatch(const std::string& suite, const Scenario& sc, Context& ctx) {
    SuiteResult r;
    if (suite == "hardy-oracle") r = suite_hardy_oracle(sc, ctx);
    else if (suite == "operators") r = suite_operators(sc, ctx);
    else if (suite == "lyapunov") r = suite_lyapunov(sc, ctx);
    else if (suite == "semigroup") r = suite_semigroup(sc, ctx);
    else if (suite == "norms") r = suite_norms(sc, ctx);
    else if (suite == "background") r = suite_background(sc, ctx);
    else if (suite == "theorem5") r = suite_theorem5(sc, ctx);
    else if (suite == "eigen-deviation") r = suite_eigen_deviation(sc, ctx);
    else if (suite == "proof-chain") r = suite_proof_chain(sc, ctx);
    else if (suite == "transition") r = suite_transition(sc, ctx);
    else if (suite == "lp-limit") r = suite_lp_limit(sc, ctx);
    else throw ConfigError("unknown suite '" + suite + "'");
    r.suite = suite;
    r.pass = std::all_of(r.rows.begin(), r.rows.end(),
                         [](const BoundReport& b) { return b.pass || is_informational(b); });
    return r;
}

struct Convergence {
    double app = std::numeric_limits<double>::quiet_NaN();
    double res = std::numeric_limits<double>::quiet_NaN();
    double r = std::numeric_limits<double>::quiet_NaN();
};

std::vector<SuiteResult> evaluate(const Scenario& sc, Convergence* conv) {
    validate_scenario(sc);
    check_scenario_preconditions(sc);
    Context ctx(sc);
    std::vector<SuiteResult> out;
    for (const auto& s : sc.suites) out.push_back(dispatch(s, sc, ctx));
    if (conv && sc.mode == Mode::HalfLine) {
        const ResonanceStates& st = ctx.states();
        conv->app = std::abs(st.norm_app2 - st.norm_app2_exact()) / st.norm_app2_exact();
        conv->res = std::abs(st.norm_res2 - st.norm_res2_limit()) / st.norm_res2_limit();
        conv->r = std::abs(st.r - st.r_exact()) / st.r_exact();
    }
    return out;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

KeyValues manifest_base(const Scenario& sc, const std::string& command) {
    std::vector<std::string> poles;
    for (const auto& p : sc.extra_poles) poles.push_back(format_number(p.e0) + ":" + format_number(p.gamma));
    KeyValues kv{
        {"tool", "lpres"},
        {"version", kToolVersion},
        {"command", command},
        {"grid.n", std::to_string(sc.n)},
        {"grid.e_max", format_number(sc.e_max)},
        {"grid.scheme", to_string(sc.scheme)},
        {"grid.projector", to_string(sc.projector)},
        {"resonance.e0", format_number(sc.resonance.e0)},
        {"resonance.gamma", format_number(sc.resonance.gamma)},
        {"smatrix.model", sc.model},
        {"smatrix.extra_poles", join(poles, ",")},
        {"smatrix.phase_a", format_number(sc.phase_a)},
        {"times.kind", sc.times.kind},
        {"times.count", std::to_string(sc.times.count)},
        {"times.t_max", format_number(sc.times.t_max)},
        {"run.mode", to_string(sc.mode)},
        {"run.suites", join(sc.suites, ",")},
        {"seed", std::to_string(sc.seed)},
        {"tolerances.build_tol", format_number(sc.tol.build_tol)},
        {"tolerances.hermiticity_tol", format_number(sc.tol.hermiticity_tol)},
        {"tolerances.proj_tol", format_number(sc.tol.proj_tol)},
        {"tolerances.spec_tol", format_number(sc.tol.spec_tol)},
        {"tolerances.sqrt_tol", format_number(sc.tol.sqrt_tol)},
        {"tolerances.report_tol", format_number(sc.tol.report_tol)},
        {"tolerances.oracle_tol", format_number(sc.tol.oracle_tol)},
        {"tolerances.boundary_band", format_number(sc.tol.boundary_band)},
        {"tolerances.pole_resolution", format_number(sc.tol.pole_resolution)},
        {"tolerances.truncation_widths", format_number(sc.tol.truncation_widths)},
    };
    return kv;
}

void apply_options(Scenario& sc, const RunOptions& opt) {
    if (opt.out) sc.output_dir = *opt.out;
    if (opt.seed) sc.seed = *opt.seed;
    if (opt.threads < 1) throw ParameterError("--threads must be >= 1");
}

std::filesystem::path prepare_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    return p;
}

void summarize(std::ostream& os, const SuiteResult& r) {
    os << r.suite << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.rows.size() << " rows)\n";
    for (const auto& b : r.rows) {
        if (!b.pass && !is_informational(b)) {
            os << "  failed " << b.name << " t=" << format_number(b.t) << " lhs=" << format_number(b.lhs)
               << ' ' << b.relation << " rhs=" << format_number(b.rhs_total) << '\n';
        }
    }
    for (const auto& n : r.notes) os << "  note: " << n << '\n';
}

} // namespace

std::vector<SuiteResult> evaluate_scenario(const Scenario& sc) { return evaluate(sc, nullptr); }

int run_scenario(Scenario sc, const RunOptions& opt, std::ostream& log) {
    apply_options(sc, opt);
    const auto results = evaluate(sc, nullptr);
    const auto dir = prepare_dir(sc.output_dir);
    KeyValues manifest = manifest_base(sc, "run");
    std::ostringstream summary;
    bool all = true;
    for (const auto& r : results) {
        write_bound_csv(dir / (r.suite + ".csv"), r.rows);
        for (const auto& [name, table] : r.columns) {
            write_columns(dir / (r.suite + "_" + name + ".csv"), table);
        }
        manifest.emplace_back("verdict." + r.suite, r.pass ? "pass" : "fail");
        summarize(summary, r);
        all = all && r.pass;
    }
    manifest.emplace_back("verdict", all ? "pass" : "fail");
    write_key_values(dir / "manifest.txt", manifest);
    {
        std::ofstream out(dir / "summary.txt");
        out << summary.str();
    }
    log << summary.str();
    return all ? kExitOk : kExitFail;
}

const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> a{"gamma_ratio", "n", "e_max", "model"};
    return a;
}

Scenario apply_axis(const Scenario& base, const std::string& axis, const std::string& value) {
    Scenario sc = base;
    auto number = [&](auto v) {
        std::istringstream is(value);
        is >> v;
        if (is.fail() || !(is >> std::ws).eof()) {
            throw ConfigError("sweep value '" + value + "' is not valid for axis " + axis);
        }
        return v;
    };
    if (axis == "gamma_ratio") {
        const double ratio = number(0.0);
        if (!(ratio > 0.0)) throw ConfigError("gamma_ratio values must be positive");
        sc.resonance = ResonanceParams(sc.resonance.e0, ratio * sc.resonance.e0);
    } else if (axis == "n") {
        sc.n = number(0);
    } else if (axis == "e_max") {
        sc.e_max = number(0.0);
    } else if (axis == "model") {
        if (value != "pure" && value != "perturbed") {
            throw ConfigError("model axis values must be pure or perturbed");
        }
        sc.model = value;
        sc.extra_poles.clear();
        sc.phase_a = 0.0;
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "' (expected gamma_ratio, n, e_max or model)");
    }
    validate_scenario(sc);
    return sc;
}

std::vector<SweepRow> evaluate_sweep(const Scenario& base, const std::string& axis,
                                     const std::vector<std::string>& values, int threads) {
    if (values.empty()) throw ParameterError("sweep needs at least one value");
    if (threads < 1) throw ParameterError("--threads must be >= 1");
    std::vector<Scenario> scenarios;
    for (const auto& v : values) scenarios.push_back(apply_axis(base, axis, v));
    for (const auto& sc : scenarios) check_scenario_preconditions(sc);

    std::vector<SweepRow> rows(values.size());
    std::vector<std::exception_ptr> errors(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                Convergence conv;
                rows[i].value = values[i];
                rows[i].results = evaluate(scenarios[i], &conv);
                rows[i].norm_app2_err = conv.app;
                rows[i].norm_res2_err = conv.res;
                rows[i].r_err = conv.r;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int count = std::min<int>(threads, static_cast<int>(values.size()));
    std::vector<std::thread> pool;
    for (int k = 1; k < count; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

int run_sweep(Scenario base, const std::string& axis, const std::vector<std::string>& values,
              const RunOptions& opt, std::ostream& log) {
    apply_options(base, opt);
    const auto rows = evaluate_sweep(base, axis, values, opt.threads);
    const auto dir = prepare_dir(base.output_dir);
    std::ofstream out(dir / "sweep.csv");
    if (!out) throw ConfigError("cannot write sweep.csv");
    std::vector<std::string> header{"axis", "value", "suite"};
    for (const auto& f : bound_fields()) header.push_back(f);
    for (const char* c : {"norm_app2_err", "norm_res2_err", "r_err"}) header.emplace_back(c);
    out << csv_line(header) << '\n';
    std::ostringstream summary;
    bool all = true;
    for (const auto& row : rows) {
        summary << axis << " = " << row.value << '\n';
        for (const auto& r : row.results) {
            for (const auto& b : r.rows) {
                std::vector<std::string> cells{axis, row.value, r.suite};
                for (auto& c : bound_cells(b)) cells.push_back(std::move(c));
                cells.push_back(format_number(row.norm_app2_err));
                cells.push_back(format_number(row.norm_res2_err));
                cells.push_back(format_number(row.r_err));
                out << csv_line(cells) << '\n';
            }
            summary << "  ";
            summarize(summary, r);
            all = all && r.pass;
        }
    }
    KeyValues manifest = manifest_base(base, "sweep");
    manifest.emplace_back("sweep.axis", axis);
    manifest.emplace_back("sweep.values", join(values, ","));
    manifest.emplace_back("verdict", all ? "pass" : "fail");
    write_key_values(dir / "manifest.txt", manifest);
    {
        std::ofstream s(dir / "summary.txt");
        s << summary.str();
    }
    log << summary.str();
    return all ? kExitOk : kExitFail;
}

int report_exception(std::ostream& err) {
    try {
        throw;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFail;
    }
}

} // namespace lpres
