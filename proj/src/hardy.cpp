#include "lpres/hardy.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>

#include <fftw3.h>

#include "lpres/errors.hpp"

namespace lpres {

PvScheme parse_pv_scheme(std::string_view id) {
    if (id == "fourier") return PvScheme::Fourier;
    if (id == "pv-kernel") return PvScheme::PvKernel;
    if (id == "regularized") return PvScheme::Regularized;
    throw ParameterError("unknown projector scheme '" + std::string(id) +
                         "' (expected fourier, pv-kernel or regularized)");
}

std::string to_string(PvScheme s) {
    switch (s) {
    case PvScheme::Fourier: return "fourier";
    case PvScheme::PvKernel: return "pv-kernel";
    case PvScheme::Regularized: return "regularized";
    }
    return "?";
}

namespace {

// The FFTW planner is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class FftPair {
public:
    explicit FftPair(int n) {
        std::lock_guard lock(planner_mutex());
        auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
        forward_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
    }
    ~FftPair() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    void forward(CVec& x) const { run(forward_, x); }
    void backward(CVec& x) const { run(backward_, x); }

private:
    void run(fftw_plan p, CVec& x) const {
        auto* data = reinterpret_cast<fftw_complex*>(x.data());
        fftw_execute_dft(p, data, data);
    }
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

Vec node_spacing(const Vec& x) {
    const auto n = x.size();
    Vec d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto lo = std::max<Eigen::Index>(i - 1, 0);
        const auto hi = std::min<Eigen::Index>(i + 1, n - 1);
        d(i) = (x(hi) - x(lo)) / static_cast<double>(hi - lo);
    }
    return d;
}

} // namespace

struct HardyProjector::Impl {
    GridPtr grid;
    PvScheme scheme = PvScheme::Fourier;
    Tolerances tol;
    double oracle_residual = std::numeric_limits<double>::quiet_NaN();

    // Fourier
    std::unique_ptr<FftPair> fft;
    CVec twist;

    // Kernel schemes keep P_+ dense from the start.
    CMat kernel_plus;

    mutable std::once_flag dense_once;
    mutable OperatorMatrix plus_op;
    mutable OperatorMatrix minus_op;

    CMat fourier_block(int offset, int size) const {
        (void)offset; // translation invariant
        const int n = grid->n();
        CMat b(size, size);
        for (int j = 0; j < size; ++j) {
            for (int l = 0; l < size; ++l) {
                const int m = j - l;
                if (m == 0) {
                    b(j, l) = 0.5;
                } else if (m % 2 != 0) {
                    b(j, l) = cplx(0.0, 1.0 / (n * std::sin(std::numbers::pi * m / n)));
                } else {
                    b(j, l) = 0.0;
                }
            }
        }
        return b;
    }

    void materialize() const {
        std::call_once(dense_once, [this] {
            const int n = grid->n();
            CMat p = scheme == PvScheme::Fourier ? fourier_block(0, n) : kernel_plus;
            CMat q = CMat::Identity(n, n) - p;
            unsigned flags = scheme == PvScheme::Fourier
                                 ? (kSelfAdjoint | kPositive | kContraction)
                                 : kNoFlags;
            plus_op = OperatorMatrix{grid, std::move(p), flags};
            minus_op = OperatorMatrix{grid, std::move(q), flags};
        });
    }
};

const GridPtr& HardyProjector::grid() const { return impl_->grid; }
PvScheme HardyProjector::scheme() const { return impl_->scheme; }
double HardyProjector::oracle_residual() const { return impl_->oracle_residual; }

CVec HardyProjector::plus_weighted(const CVec& x) const {
    const Impl& m = *impl_;
    if (x.size() != m.grid->n()) {
        throw UsageError("HardyProjector: vector length does not match the grid");
    }
    if (m.scheme != PvScheme::Fourier) {
        CVec y = m.kernel_plus * x;
        return y;
    }
    const int n = m.grid->n();
    CVec y = x.cwiseProduct(m.twist);
    m.fft->forward(y);
    y.tail(n - n / 2).setZero();
    m.fft->backward(y);
    CVec out = y.cwiseProduct(m.twist.conjugate()) / static_cast<double>(n);
    return out;
}

CVec HardyProjector::minus_weighted(const CVec& x) const {
    CVec y = x - plus_weighted(x);
    return y;
}

StateVector HardyProjector::plus(const StateVector& psi) const {
    if (!same_grid(psi.grid, grid())) {
        throw UsageError("HardyProjector: state lives on a different grid");
    }
    return StateVector::from_weighted(psi.grid, plus_weighted(psi.weighted()), psi.rep);
}

StateVector HardyProjector::minus(const StateVector& psi) const {
    if (!same_grid(psi.grid, grid())) {
        throw UsageError("HardyProjector: state lives on a different grid");
    }
    return StateVector::from_weighted(psi.grid, minus_weighted(psi.weighted()), psi.rep);
}

StateVector HardyProjector::hilbert(const StateVector& psi) const {
    const StateVector p = plus(psi);
    return StateVector(psi.grid, -kI * (2.0 * p.values - psi.values), psi.rep);
}

const OperatorMatrix& HardyProjector::p_plus() const {
    impl_->materialize();
    return impl_->plus_op;
}

const OperatorMatrix& HardyProjector::p_minus() const {
    impl_->materialize();
    return impl_->minus_op;
}

CMat HardyProjector::plus_block(int offset, int size) const {
    const Impl& m = *impl_;
    if (offset < 0 || size < 0 || offset + size > m.grid->n()) {
        throw UsageError("plus_block: block outside the grid");
    }
    if (m.scheme == PvScheme::Fourier) {
        return m.fourier_block(offset, size);
    }
    CMat b = m.kernel_plus.block(offset, offset, size, size);
    return b;
}

CMat HardyProjector::minus_block(int offset, int size) const {
    CMat b = CMat::Identity(size, size) - plus_block(offset, size);
    return b;
}

HardyProjector build_hardy_projectors(const GridPtr& full, PvScheme scheme, const Tolerances& tol) {
    if (!full || full->kind() != DomainKind::FullLine) {
        throw UsageError("build_hardy_projectors: a full-line grid is required");
    }
    auto impl = std::make_shared<HardyProjector::Impl>();
    impl->grid = full;
    impl->scheme = scheme;
    impl->tol = tol;
    const int n = full->n();
    const Vec& x = full->nodes();
    const Vec& s = full->sqrt_weights();

    switch (scheme) {
    case PvScheme::Fourier: {
        if (!full->fourier_compatible()) {
            throw UsageError("fourier projector needs a uniform or cayley grid");
        }
        impl->fft = std::make_unique<FftPair>(n);
        impl->twist.resize(n);
        for (int j = 0; j < n; ++j) {
            impl->twist(j) = std::polar(1.0, -std::numbers::pi * (j + 0.5) / n);
        }
        break;
    }
    case PvScheme::PvKernel: {
        CMat h = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double hij = full->weights()(j) / (std::numbers::pi * (x(i) - x(j)));
                row += hij;
                h(i, j) = s(i) * hij / s(j);
            }
            h(i, i) = -row;
        }
        impl->kernel_plus = 0.5 * (CMat::Identity(n, n) + kI * h);
        break;
    }
    case PvScheme::Regularized: {
        const Vec d = node_spacing(x);
        impl->kernel_plus.resize(n, n);
        const cplx pref = 1.0 / (2.0 * std::numbers::pi * kI);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const double eta = 2.0 * d(i);
                impl->kernel_plus(i, j) = pref * s(i) * s(j) / cplx(x(j) - x(i), -eta);
            }
        }
        break;
    }
    }

    HardyProjector hp;
    hp.impl_ = impl;
    const auto poles = default_oracle_poles();
    impl->oracle_residual = hardy_oracle(hp, poles, tol).max_residual;
    return hp;
}

StateVector apply_projector(const OperatorMatrix& p, const StateVector& psi) { return apply(p, psi); }

std::vector<cplx> default_oracle_poles() {
    std::vector<cplx> z;
    for (const cplx base : {cplx(1.0, 0.1), cplx(3.0, 0.5)}) {
        for (const double re : {1.0, -1.0}) {
            for (const double im : {-1.0, 1.0}) {
                z.emplace_back(re * base.real(), im * base.imag());
            }
        }
    }
    return z;
}

OracleReport hardy_oracle(const HardyProjector& hp, std::span<const cplx> poles, const Tolerances& tol) {
    const GridPtr& g = hp.grid();
    OracleReport rep;
    rep.band = (1.0 - tol.boundary_band) * g->e_max();
    rep.max_residual = std::numeric_limits<double>::quiet_NaN();
    const Vec& x = g->nodes();
    for (const cplx z : poles) {
        OracleCase c;
        c.pole = z;
        c.expect_member = z.imag() < 0.0;
        c.resolved = std::abs(z.imag()) >= 4.0 * g->local_spacing(z.real());
        const StateVector f = StateVector::sample(g, [z](double e) { return 1.0 / (e - z); });
        const StateVector pf = hp.plus(f);
        double num = 0.0;
        double den = 0.0;
        for (int i = 0; i < g->n(); ++i) {
            if (std::abs(x(i)) > rep.band) continue;
            const cplx target = c.expect_member ? f.values(i) : cplx(0.0);
            num += g->weights()(i) * std::norm(pf.values(i) - target);
            den += g->weights()(i) * std::norm(f.values(i));
        }
        c.residual = std::sqrt(num / den);
        if (c.resolved) {
            rep.max_residual = std::isnan(rep.max_residual) ? c.residual
                                                            : std::max(rep.max_residual, c.residual);
        }
        rep.cases.push_back(c);
    }
    return rep;
}

ProjectorDefects probe_projector(const HardyProjector& hp, int probes, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const int n = hp.grid()->n();
    auto draw = [&] {
        CVec v(n);
        for (int i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
        return v;
    };
    ProjectorDefects d;
    for (int k = 0; k < probes; ++k) {
        const CVec x = draw();
        const CVec y = draw();
        const CVec px = hp.plus_weighted(x);
        const CVec mx = hp.minus_weighted(x);
        const CVec py = hp.plus_weighted(y);
        const double nx = x.norm();
        d.complementarity = std::max(d.complementarity, (px + mx - x).norm() / nx);
        d.idempotence = std::max(d.idempotence, (hp.plus_weighted(px) - px).norm() / nx);
        d.self_adjointness =
            std::max(d.self_adjointness, std::abs(y.dot(px) - py.dot(x)) / (nx * y.norm()));
    }
    return d;
}

} // namespace lpres
