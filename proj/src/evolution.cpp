#include "lpres/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lpres/errors.hpp"
#include "lpres/linalg.hpp"

namespace lpres {

CVec evolve_weighted(const EnergyGrid& g, const CVec& x, double t) {
    const Vec& e = g.nodes();
    CVec y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        y(i) = std::polar(1.0, -e(i) * t) * x(i);
    }
    return y;
}

StateVector evolve(const StateVector& psi, double t) {
    const Vec& e = psi.grid->nodes();
    CVec v(psi.size());
    for (int i = 0; i < psi.size(); ++i) {
        v(i) = std::polar(1.0, -e(i) * t) * psi.values(i);
    }
    return StateVector(psi.grid, std::move(v), psi.rep);
}

CMat evolve_columns(const EnergyGrid& g, const CVec& x, std::span<const double> times) {
    CMat cols(x.size(), static_cast<Eigen::Index>(times.size()));
    for (std::size_t k = 0; k < times.size(); ++k) {
        cols.col(static_cast<Eigen::Index>(k)) = evolve_weighted(g, x, times[k]);
    }
    return cols;
}

StateVector smooth_peaked_state(const GridPtr& g, double center, double width) {
    StateVector psi = StateVector::sample(g, [center, width](double e) {
        const double z = (e - center) / width;
        return cplx(std::exp(-0.5 * z * z), 0.0);
    });
    return cplx(1.0 / psi.norm()) * psi;
}

StateVector random_packet_state(const GridPtr& g, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(lo, hi);
    std::uniform_real_distribution<double> width(0.2, 0.6);
    std::normal_distribution<double> normal;
    struct Packet {
        double c, w;
        cplx a;
    };
    std::vector<Packet> packets;
    for (int k = 0; k < 3; ++k) {
        const double c = center(rng);
        const double w = width(rng);
        const cplx a(normal(rng), normal(rng));
        packets.push_back({c, w, a});
    }
    StateVector psi = StateVector::sample(g, [&packets](double e) {
        cplx v = 0.0;
        for (const auto& p : packets) {
            const double z = (e - p.c) / p.w;
            v += p.a * std::exp(-0.5 * z * z);
        }
        return v;
    });
    return cplx(1.0 / psi.norm()) * psi;
}

StateVector z_forward(const LyapunovPair& pair, const StateVector& phi, double t) {
    if (t < 0.0) throw ParameterError("z_forward needs t >= 0");
    return pair.apply(LyapOp::LambdaF, evolve(phi, t));
}

StateVector z_backward(const LyapunovPair& pair, const StateVector& phi, double t) {
    if (t > 0.0) throw ParameterError("z_backward needs t <= 0");
    return pair.apply(LyapOp::LambdaB, evolve(phi, t));
}

OperatorMatrix build_z_app(const LyapunovPair& pair, const SMatrixModel& s, double t) {
    if (t < 0.0) throw ParameterError("build_z_app needs t >= 0");
    const EnergyGrid& g = *pair.grid();
    const CVec sv = smatrix_samples(s, g);
    const CVec phase = evolve_weighted(g, sv, t);
    const CMat lb = pair.lambda_b().entries * sv.conjugate().asDiagonal();
    const CMat mid = phase.asDiagonal() * lb;
    CMat z = pair.lambda_f().entries * mid;
    return OperatorMatrix{pair.grid(), std::move(z), kContraction};
}

CVec apply_z_app(const LyapunovPair& pair, const SMatrixModel& s, const CVec& x, double t) {
    if (t < 0.0) throw ParameterError("apply_z_app needs t >= 0");
    const EnergyGrid& g = *pair.grid();
    const CVec sv = smatrix_samples(s, g);
    const CVec y = pair.apply_weighted(LyapOp::LambdaB, CVec(sv.conjugate().cwiseProduct(x)));
    const CVec z = evolve_weighted(g, sv.cwiseProduct(y), t);
    return pair.apply_weighted(LyapOp::LambdaF, z);
}

CMat apply_z_app(const LyapunovPair& pair, const SMatrixModel& s, const CVec& x,
                 std::span<const double> times) {
    for (double t : times) {
        if (t < 0.0) throw ParameterError("apply_z_app needs t >= 0");
    }
    const EnergyGrid& g = *pair.grid();
    const CVec sv = smatrix_samples(s, g);
    const CVec y = pair.apply_weighted(LyapOp::LambdaB, CVec(sv.conjugate().cwiseProduct(x)));
    const CMat cols = evolve_columns(g, sv.cwiseProduct(y), times);
    return pair.apply_weighted(LyapOp::LambdaF, cols);
}

SemigroupDefectReport semigroup_defect(const LyapunovPair& pair, const SMatrixModel& s,
                                       const StateVector& psi, double t1, double t2,
                                       const Tolerances& tol) {
    const CVec x = psi.weighted();
    const CVec a = apply_z_app(pair, s, x, t2);
    const CVec ab = apply_z_app(pair, s, a, t1);
    const CVec c = apply_z_app(pair, s, x, t1 + t2);
    SemigroupDefectReport r;
    r.t1 = t1;
    r.t2 = t2;
    r.defect = (ab - c).norm();
    const double cap = x.norm() * (1.0 + tol.spec_tol);
    r.contraction_ok = a.norm() <= cap && c.norm() <= cap && apply_z_app(pair, s, x, t1).norm() <= cap;
    return r;
}

SemigroupDefectReport z_forward_defect(const LyapunovPair& pair, const StateVector& phi, double t1,
                                       double t2, const Tolerances& tol) {
    const StateVector start = pair.apply(LyapOp::LambdaF, phi);
    // Z_F(t2) Lambda_F phi = Lambda_F u(t2) phi, so its preimage is u(t2) phi.
    const StateVector inner_pre = evolve(phi, t2);
    const StateVector composed = z_forward(pair, evolve(inner_pre, t1), 0.0);
    const StateVector direct = z_forward(pair, phi, t1 + t2);
    SemigroupDefectReport r;
    r.t1 = t1;
    r.t2 = t2;
    r.defect = (composed - direct).norm();
    const double cap = start.norm() * (1.0 + tol.spec_tol);
    r.contraction_ok = z_forward(pair, phi, t1).norm() <= cap &&
                       z_forward(pair, inner_pre, 0.0).norm() <= cap && direct.norm() <= cap;
    return r;
}

std::pair<StateVector, StateVector> transition_decompose(const LyapunovPair& pair,
                                                         const StateVector& psi, double t,
                                                         Direction dir) {
    const StateVector pt = evolve(psi, t);
    if (dir == Direction::Forward) {
        StateVector b = pair.apply(LyapOp::LambdaF, pt);
        StateVector f = pt - b;
        return {std::move(b), std::move(f)};
    }
    StateVector f = pair.apply(LyapOp::LambdaB, pt);
    StateVector b = pt - f;
    return {std::move(b), std::move(f)};
}

CVec z_forward_lift(const LyapunovPair& pair, const CVec& x, double t) {
    if (t < 0.0) throw ParameterError("z_forward_lift needs t >= 0");
    const GridPtr& half = pair.grid();
    const HardyProjector& hp = pair.projector();
    const int n = half->n();
    const int offset = half->parent_offset();
    const CVec pre = pair.apply_weighted(LyapOp::LambdaFInv, x);
    CVec full = CVec::Zero(hp.grid()->n());
    full.segment(offset, n) = pre;
    full = hp.plus_weighted(full);
    full = evolve_weighted(*hp.grid(), full, t);
    full = hp.plus_weighted(full);
    const CVec back = full.segment(offset, n);
    return pair.apply_weighted(LyapOp::LambdaFInv, back);
}

IntertwiningResidual intertwining_residual(const LyapunovPair& pair, double t) {
    const EnergyGrid& g = *pair.grid();
    const int n = g.n();
    const CMat& lf = pair.lambda_f().entries;
    const CMat inv = pair.factor().matrix([floor = pair.eigen_floor()](double l) {
        return l > floor ? 1.0 / std::sqrt(l) : 0.0;
    });
    const CVec u = evolve_weighted(g, CVec::Ones(n), t);
    const CMat lfu = lf * u.asDiagonal();
    const CMat zf = lfu * inv;
    const CMat diff = lfu - zf * lf;
    IntertwiningResidual r;
    r.t = t;
    r.residual = linalg::opnorm(diff);
    r.eigen_floor = pair.eigen_floor();
    r.bound = std::sqrt(r.eigen_floor);
    return r;
}

std::vector<double> default_times(double gamma, int count) {
    if (count < 4) throw ParameterError("default_times needs at least 4 samples");
    if (!(gamma > 0.0)) throw ParameterError("default_times needs gamma > 0");
    const double horizon = 40.0 / gamma;
    const int geometric = count / 2 - 1;
    const int linear = count - 1 - geometric;
    std::vector<double> t{0.0};
    const double start = 0.01 / gamma;
    const double ratio = std::pow(400.0, 1.0 / geometric);
    double v = start;
    for (int k = 0; k < geometric; ++k, v *= ratio) t.push_back(v);
    for (int k = 1; k <= linear; ++k) t.push_back(horizon * k / linear);
    std::sort(t.begin(), t.end());
    return t;
}

namespace {

constexpr double kLpMaxShift = 2.0;   // |slope| of the packet phase, a time offset
constexpr double kLpMaxTime = 6.0;    // t1 + t2 at most
constexpr double kLpTailWidths = 8.0; // packet time widths kept clear of the wrap

} // namespace

void check_lp_limit_preconditions(int n, double e_max) {
    const double half_period = 0.5 * std::numbers::pi * n / e_max;
    const double needed = kLpMaxShift + kLpMaxTime + kLpTailWidths;
    if (half_period < needed) {
        std::ostringstream os;
        os << "lp-limit grid too coarse: half period " << half_period << " < " << needed
           << "; use n >= " << std::ceil(2.0 * needed * e_max / std::numbers::pi) << " for e_max = " << e_max;
        throw PreconditionError(os.str());
    }
}

LpLimitReport lp_limit_report(int n, double e_max, unsigned long long seed, int states) {
    if (states < 1) throw ParameterError("lp_limit_report needs at least one state");
    check_lp_limit_preconditions(n, e_max);
    const GridPtr g = make_grid(DomainKind::FullLine, n, e_max, Scheme::Uniform);
    const HardyProjector hp = build_hardy_projectors(g, PvScheme::Fourier);
    const auto [m_plus, m_minus] = build_m_general(hp, g);
    LpLimitReport rep;
    rep.n = n;
    rep.e_max = e_max;
    rep.states = states;
    rep.time_step = std::numbers::pi / e_max;
    const CMat& mp = m_plus.entries;
    rep.idempotence = linalg::opnorm(mp * mp - mp);
    rep.complementarity = linalg::opnorm(mp + m_minus.entries - CMat::Identity(n, n));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(-5.0, 5.0);
    std::uniform_real_distribution<double> width(1.0, 2.0);
    std::uniform_real_distribution<double> slope(-kLpMaxShift, kLpMaxShift);
    const int steps = std::max(1, static_cast<int>(std::floor(0.5 * kLpMaxTime / rep.time_step)));
    auto z = [&](const CVec& x, double t) { return hp.plus_weighted(evolve_weighted(*g, x, t)); };
    for (int k = 0; k < states; ++k) {
        const double c = center(rng);
        const double sg = width(rng);
        const double a = slope(rng);
        const StateVector psi = StateVector::sample(g, [&](double e) {
            return std::exp(-0.5 * (e - c) * (e - c) / (sg * sg)) * std::polar(1.0, a * e);
        });
        const CVec x = psi.weighted();
        const double nx = x.norm();
        for (const int k1 : {1, steps / 2, steps}) {
            for (const int k2 : {1, steps / 3 + 1, steps}) {
                const double t1 = k1 * rep.time_step;
                const double t2 = k2 * rep.time_step;
                const CVec lhs = z(z(x, t2), t1);
                const CVec rhs = z(x, t1 + t2);
                rep.semigroup_defect = std::max(rep.semigroup_defect, (lhs - rhs).norm() / nx);
            }
        }
    }
    return rep;
}

} // namespace lpres
