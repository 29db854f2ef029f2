#include "lpres/resonance.hpp"

#include <cmath>
#include <sstream>

#include "lpres/errors.hpp"

namespace lpres {

double ResonanceStates::norm_app2_exact() const {
    return (0.5 * std::numbers::pi + std::atan(params.e0 / params.gamma)) / params.gamma;
}

double ResonanceStates::norm_res2_limit() const { return std::numbers::pi / params.gamma; }

double ResonanceStates::r_exact() const {
    return 0.5 + std::atan(params.e0 / params.gamma) / std::numbers::pi;
}

void check_resonance_preconditions(const EnergyGrid& g, const ResonanceParams& p,
                                   const Tolerances& tol) {
    const double spacing = g.local_spacing(p.e0);
    if (!(p.gamma > tol.pole_resolution * spacing)) {
        std::ostringstream os;
        os << "pole not resolved: gamma = " << p.gamma << " but the node spacing at e0 = " << p.e0
           << " is " << spacing << "; increase n or gamma";
        throw PreconditionError(os.str());
    }
    if (!(p.e0 + tol.truncation_widths * p.gamma < g.e_max())) {
        std::ostringstream os;
        os << "pole too close to the cutoff: e0 + " << tol.truncation_widths
           << " gamma = " << p.e0 + tol.truncation_widths * p.gamma << " >= e_max = " << g.e_max()
           << "; increase e_max";
        throw PreconditionError(os.str());
    }
}

ResonanceStates build_resonance_states(const LyapunovPair& pair, const ResonanceParams& p,
                                       const Tolerances& tol) {
    const GridPtr& g = pair.grid();
    check_resonance_preconditions(*g, p, tol);
    ResonanceStates st;
    st.params = p;
    const cplx mu = p.mu();
    st.psi_app = StateVector::sample(g, [mu](double e) { return 1.0 / (e - mu); });
    st.psi_res = pair.apply(LyapOp::LambdaFInv, st.psi_app);
    st.norm_app2 = st.psi_app.norm2();
    st.norm_res2 = st.psi_res.norm2();
    st.r = st.norm_app2 / st.norm_res2;
    st.conditioning = pair.eigen_floor();
    st.lambda_f_condition = pair.lambda_f_condition();
    return st;
}

LambdaPlusDecomposition decompose_lambda_plus(const ResonanceStates& states,
                                              const LyapunovPair& pair, const StateVector& psi) {
    if (!same_grid(psi.grid, pair.grid())) {
        throw UsageError("decompose_lambda_plus: state is not on the half-line grid");
    }
    const cplx coeff = inner(states.psi_app, psi) / states.norm_res2;
    StateVector lf = pair.apply(LyapOp::LambdaF, psi);
    StateVector b = lf - coeff * states.psi_res;
    return {std::move(b), coeff};
}

std::vector<SurvivalRecord> survival_decomposition(const ResonanceStates& states,
                                                   std::span<const double> times) {
    const EnergyGrid& g = *states.psi_app.grid;
    const Vec dens = g.weights().array() * states.psi_app.values.array().abs2();
    const cplx mu = states.params.mu();
    std::vector<SurvivalRecord> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t < 0.0) throw ParameterError("survival_decomposition needs t >= 0");
        cplx acc = 0.0;
        for (int i = 0; i < g.n(); ++i) {
            acc += dens(i) * std::polar(1.0, -g.nodes()(i) * t);
        }
        SurvivalRecord rec;
        rec.t = t;
        rec.amplitude = acc / states.norm_app2;
        rec.pole_term = std::exp(-kI * mu * t);
        rec.background = rec.amplitude - rec.pole_term;
        out.push_back(rec);
    }
    return out;
}

double background_bound(double r) { return std::sqrt(1.0 / (r * r) - 1.0); }

void BoundReport::judge() {
    if (relation == "==") {
        pass = std::abs(lhs - rhs_total) <= tolerance * std::max(std::abs(lhs), std::abs(rhs_total)) + 1e-12;
    } else if (relation == ">=") {
        pass = lhs >= rhs_total * (1.0 - tolerance);
    } else {
        pass = lhs <= rhs_total * (1.0 + tolerance);
    }
}

namespace {

void require_same_pole(const ResonanceStates& states, const SMatrixModel& s) {
    if (states.params.e0 != s.pole.e0 || states.params.gamma != s.pole.gamma) {
        throw UsageError("resonance states and S-matrix model carry different poles");
    }
}

BoundReport make_report(std::string name, std::string relation, const LyapunovPair& pair,
                        const SMatrixModel& s, double tolerance) {
    BoundReport r;
    r.name = std::move(name);
    r.relation = std::move(relation);
    r.tolerance = tolerance;
    r.n = pair.grid()->n();
    r.e_max = pair.grid()->e_max();
    r.scheme = to_string(pair.grid()->scheme());
    r.model = s.name;
    return r;
}

void set_rhs(BoundReport& r, std::vector<std::pair<std::string, double>> terms) {
    r.rhs_terms = std::move(terms);
    r.rhs_total = 0.0;
    for (const auto& [k, v] : r.rhs_terms) r.rhs_total += v;
    r.judge();
}

double term2_of(const ResonanceStates& states, const SMatrixModel& s) {
    const EnergyGrid& g = *states.psi_app.grid;
    const Vec d = deviation_integrand(s, g);
    const double integral =
        (g.weights().array() * d.array().square() * states.psi_app.values.array().abs2()).sum();
    return std::sqrt(integral / states.norm_app2);
}

CVec full_line_plus(const LyapunovPair& pair, const CVec& half_weighted) {
    const HardyProjector& hp = pair.projector();
    CVec full = CVec::Zero(hp.grid()->n());
    full.segment(pair.grid()->parent_offset(), half_weighted.size()) = half_weighted;
    return hp.plus_weighted(full);
}

} // namespace

std::vector<BoundReport> eigenvector_deviation(const ResonanceStates& states,
                                               const LyapunovPair& pair, const SMatrixModel& s,
                                               std::span<const double> times,
                                               const Tolerances& tol) {
    require_same_pole(states, s);
    const CVec x = states.psi_res.weighted() / std::sqrt(states.norm_res2);
    const double rhs = (x - apply_z_app(pair, s, x, 0.0)).norm();
    const CMat z = apply_z_app(pair, s, x, times);
    const cplx mu = states.params.mu();
    std::vector<BoundReport> out;
    for (std::size_t k = 0; k < times.size(); ++k) {
        BoundReport r = make_report("eigenvector-deviation", "<=", pair, s, tol.report_tol);
        r.t = times[k];
        r.lhs = (z.col(static_cast<Eigen::Index>(k)) - std::exp(-kI * mu * r.t) * x).norm();
        set_rhs(r, {{"initial_defect", rhs}});
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<EigenRelationSample> eigen_relation_residual(const ResonanceStates& states,
                                                         const LyapunovPair& pair,
                                                         std::span<const double> times) {
    const CVec x = states.psi_res.weighted();
    const double nx = x.norm();
    const CVec pre = pair.apply_weighted(LyapOp::LambdaFInv, x);
    const cplx mu = states.params.mu();
    const CMat direct = pair.apply_weighted(LyapOp::LambdaF, evolve_columns(*pair.grid(), pre, times));
    std::vector<EigenRelationSample> out;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const CVec target = std::exp(-kI * mu * t) * x;
        EigenRelationSample e;
        e.t = t;
        e.lift = (z_forward_lift(pair, x, t) - target).norm() / nx;
        e.direct = (direct.col(static_cast<Eigen::Index>(k)) - target).norm() / nx;
        out.push_back(e);
    }
    return out;
}

BoundReport theorem5_report(const ResonanceStates& states, const LyapunovPair& pair,
                            const SMatrixModel& s, const Tolerances& tol) {
    require_same_pole(states, s);
    const CVec x = states.psi_res.weighted() / std::sqrt(states.norm_res2);
    BoundReport r = make_report("theorem5", "<=", pair, s, tol.report_tol);
    r.lhs = (x - apply_z_app(pair, s, x, 0.0)).norm();
    r.constant_c = kEstimateConstant;
    set_rhs(r, {{"term1", kEstimateConstant * std::sqrt(1.0 - states.r)},
                {"term2", term2_of(states, s)}});
    return r;
}

std::vector<BoundReport> proof_chain_report(const ResonanceStates& states, const LyapunovPair& pair,
                                            const SMatrixModel& s, const Tolerances& tol) {
    require_same_pole(states, s);
    const EnergyGrid& g = *pair.grid();
    const CVec sv = smatrix_samples(s, g);
    const CVec xres = states.psi_res.weighted();
    const CVec xapp = states.psi_app.weighted();
    const cplx mubar = std::conj(states.params.mu());
    const CVec xbar =
        StateVector::sample(pair.grid(), [mubar](double e) { return 1.0 / (e - mubar); }).weighted();
    const double nres = std::sqrt(states.norm_res2);
    const double napp = std::sqrt(states.norm_app2);
    const double one_minus_r = 1.0 - states.r;

    const CVec v = sv.conjugate().cwiseProduct(xres);
    const double ib_v = pair.apply_weighted(LyapOp::OneMinusLambdaB, v).norm();
    const double mf_v = v.dot(pair.apply_weighted(LyapOp::MF, v)).real();
    const double pplus_v = full_line_plus(pair, v).norm();
    const double res_app = (xres - xapp).norm();
    const double app_sbar = (xapp - sv.cwiseProduct(xbar)).norm();
    const double pplus_bar = full_line_plus(pair, xbar).norm();
    const double term2 = term2_of(states, s);
    const double z0_defect = (xres - apply_z_app(pair, s, xres, 0.0)).norm();

    std::vector<BoundReport> out;
    {
        BoundReport r = make_report("a", "<=", pair, s, tol.report_tol);
        r.lhs = ib_v * ib_v;
        set_rhs(r, {{"mf_expectation", mf_v}});
        out.push_back(std::move(r));
    }
    {
        BoundReport r = make_report("a2", "==", pair, s, tol.proj_tol);
        r.lhs = mf_v;
        set_rhs(r, {{"full_line_plus_norm2", pplus_v * pplus_v}});
        out.push_back(std::move(r));
    }
    {
        BoundReport r = make_report("3-left", "<=", pair, s, tol.report_tol);
        r.lhs = ib_v;
        set_rhs(r, {{"full_line_plus_norm", pplus_v}});
        out.push_back(std::move(r));
    }
    {
        BoundReport r = make_report("3-right", "<=", pair, s, tol.report_tol);
        r.lhs = pplus_v;
        set_rhs(r, {{"res_minus_app", res_app}, {"app_minus_s_bar", app_sbar}, {"plus_bar", pplus_bar}});
        out.push_back(std::move(r));
    }
    {
        BoundReport r = make_report("b", "<=", pair, s, tol.report_tol);
        r.lhs = res_app;
        r.constant_c = 1.0 + std::numbers::sqrt2;
        set_rhs(r, {{"bound", r.constant_c * std::sqrt(one_minus_r) * nres}});
        out.push_back(std::move(r));
    }
    {
        BoundReport r = make_report("c", "==", pair, s, tol.proj_tol);
        r.lhs = app_sbar;
        set_rhs(r, {{"term2_times_norm_app", term2 * napp}});
        out.push_back(std::move(r));
    }
    {
        BoundReport r = make_report("d", "==", pair, s, 0.02);
        r.lhs = pplus_bar;
        r.constant_c = 1.0 / std::numbers::sqrt2;
        set_rhs(r, {{"closed_form", r.constant_c * std::sqrt(1.0 - states.r_exact()) *
                                        std::sqrt(states.norm_app2_exact())}});
        out.push_back(std::move(r));
    }
    {
        BoundReport r = make_report("4", "<=", pair, s, tol.report_tol);
        r.lhs = z0_defect;
        set_rhs(r, {{"res_minus_app", res_app}, {"one_minus_lambda_b", ib_v}});
        out.push_back(std::move(r));
    }
    {
        BoundReport r = make_report("chain", "<=", pair, s, tol.report_tol);
        r.lhs = z0_defect / nres;
        r.constant_c = kChainConstant;
        set_rhs(r, {{"term1", kChainConstant * std::sqrt(one_minus_r)}, {"term2", term2}});
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace lpres
