#include "lpres/smatrix.hpp"

#include <cmath>

#include "lpres/errors.hpp"

namespace lpres {

ResonanceParams::ResonanceParams(double e0_, double gamma_) : e0(e0_), gamma(gamma_) {
    if (!(e0 > 0.0) || !std::isfinite(e0)) {
        throw ParameterError("resonance energy e0 must be positive");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ParameterError("resonance width gamma must be positive");
    }
}

SMatrixModel pure_model(const ResonanceParams& p) {
    SMatrixModel s;
    s.pole = p;
    s.name = "pure";
    return s;
}

SMatrixModel perturbed_model(const ResonanceParams& p) {
    SMatrixModel s;
    s.pole = p;
    s.extra_poles.emplace_back(4.0, 0.8);
    s.phase_a = 0.05;
    s.name = "perturbed";
    return s;
}

cplx blaschke(cplx z, double e) { return (e - std::conj(z)) / (e - z); }

cplx eval_inner_factor(const SMatrixModel& s, double e) {
    cplx v = std::polar(1.0, s.phase_a * e);
    for (const auto& p : s.extra_poles) {
        v *= blaschke(p.mu(), e);
    }
    return v;
}

cplx eval_smatrix(const SMatrixModel& s, double e) {
    return blaschke(s.pole.mu(), e) * eval_inner_factor(s, e);
}

CVec smatrix_samples(const SMatrixModel& s, const EnergyGrid& g, bool conjugate) {
    CVec v(g.n());
    for (int i = 0; i < g.n(); ++i) {
        const cplx x = eval_smatrix(s, g.nodes()(i));
        v(i) = conjugate ? std::conj(x) : x;
    }
    return v;
}

OperatorMatrix multiplication_operator(const SMatrixModel& s, const GridPtr& g, bool conjugate) {
    const CVec d = smatrix_samples(s, *g, conjugate);
    CMat m = d.asDiagonal();
    return OperatorMatrix{g, std::move(m), kUnitary | kContraction};
}

Vec deviation_integrand(const SMatrixModel& s, const EnergyGrid& g) {
    Vec d(g.n());
    for (int i = 0; i < g.n(); ++i) {
        d(i) = std::abs(1.0 - eval_inner_factor(s, g.nodes()(i)));
    }
    return d;
}

} // namespace lpres
