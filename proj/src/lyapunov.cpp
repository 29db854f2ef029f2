#include "lpres/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "lpres/errors.hpp"
#include "lpres/linalg.hpp"

namespace lpres {

namespace {

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

// M Z for real M and complex Z with a single real GEMM.
CMat real_times(const Mat& m, const CMat& z) {
    const auto k = z.cols();
    Mat stacked(z.rows(), 2 * k);
    stacked.leftCols(k) = z.real();
    stacked.rightCols(k) = z.imag();
    const Mat prod = m * stacked;
    CMat out(m.rows(), k);
    out.real() = prod.leftCols(k);
    out.imag() = prod.rightCols(k);
    return out;
}

CMat real_t_times(const Mat& m, const CMat& z) {
    const auto k = z.cols();
    Mat stacked(z.rows(), 2 * k);
    stacked.leftCols(k) = z.real();
    stacked.rightCols(k) = z.imag();
    const Mat prod = m.transpose() * stacked;
    CMat out(m.cols(), k);
    out.real() = prod.leftCols(k);
    out.imag() = prod.rightCols(k);
    return out;
}

SpectralFactor::Fn op_function(LyapOp op, double floor) {
    switch (op) {
    case LyapOp::MF: return [](double l) { return l; };
    case LyapOp::MB: return [](double l) { return 1.0 - l; };
    case LyapOp::LambdaF: return [](double l) { return std::sqrt(l); };
    case LyapOp::LambdaB: return [](double l) { return std::sqrt(1.0 - l); };
    case LyapOp::LambdaFInv:
        return [floor](double l) { return l > floor ? 1.0 / std::sqrt(l) : 0.0; };
    case LyapOp::OneMinusLambdaB: return [](double l) { return 1.0 - std::sqrt(1.0 - l); };
    }
    return [](double l) { return l; };
}

} // namespace

std::shared_ptr<const SpectralFactor> SpectralFactor::generic(const CMat& hermitian) {
    auto f = std::shared_ptr<SpectralFactor>(new SpectralFactor());
    const linalg::EigH e = linalg::eigh(hermitian);
    f->n_ = static_cast<int>(hermitian.rows());
    f->q_ = e.vectors;
    f->lambda_ = e.values;
    return f;
}

std::shared_ptr<const SpectralFactor> SpectralFactor::structured(int n) {
    if (n < 2 || n % 2 != 0) {
        throw ParameterError("structured factor needs an even block size");
    }
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const SpectralFactor>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    const int q = n / 2;
    const double full = 2.0 * n;
    Mat b(q, q);
    for (int a = 0; a < q; ++a) {
        for (int c = 0; c < q; ++c) {
            const int m = 2 * a - 2 * c - 1;
            b(a, c) = 2.0 / (full * std::sin(std::numbers::pi * m / full));
        }
    }
    linalg::RealSvd s = linalg::svd(b);
    auto f = std::shared_ptr<SpectralFactor>(new SpectralFactor());
    f->n_ = n;
    f->structured_ = true;
    f->u_ = std::move(s.u);
    f->v_ = std::move(s.v);
    f->sigma_ = std::move(s.s);
    std::lock_guard lock(mutex);
    return cache.emplace(n, f).first->second;
}

void SpectralFactor::even_odd(const Fn& h, Vec& he, Vec& ho) const {
    const auto q = sigma_.size();
    he.resize(q);
    ho.resize(q);
    for (Eigen::Index k = 0; k < q; ++k) {
        const double hp = h(clip01(0.5 * (1.0 + sigma_(k))));
        const double hm = h(clip01(0.5 * (1.0 - sigma_(k))));
        he(k) = 0.5 * (hp + hm);
        ho(k) = 0.5 * (hp - hm);
    }
}

Vec SpectralFactor::raw_eigenvalues() const {
    Vec ev(n_);
    if (structured_) {
        const auto q = sigma_.size();
        ev.head(q) = 0.5 * (Vec::Ones(q) - sigma_);
        ev.tail(q) = 0.5 * (Vec::Ones(q) + sigma_);
    } else {
        ev = lambda_;
    }
    std::sort(ev.data(), ev.data() + ev.size());
    return ev;
}

Vec SpectralFactor::eigenvalues() const {
    Vec ev = raw_eigenvalues();
    for (auto& x : ev) x = clip01(x);
    return ev;
}

CMat SpectralFactor::apply(const Fn& h, const CMat& x) const {
    if (x.rows() != n_) {
        throw UsageError("SpectralFactor::apply: dimension mismatch");
    }
    if (!structured_) {
        Vec f(n_);
        for (int i = 0; i < n_; ++i) f(i) = h(clip01(lambda_(i)));
        CMat c = q_.adjoint() * x;
        c = f.asDiagonal() * c;
        CMat y = q_ * c;
        return y;
    }
    const int q = n_ / 2;
    const auto k = x.cols();
    CMat xe(q, k), xo(q, k);
    for (int a = 0; a < q; ++a) {
        xe.row(a) = x.row(2 * a);
        xo.row(a) = x.row(2 * a + 1);
    }
    Vec he, ho;
    even_odd(h, he, ho);
    const CMat a = real_t_times(u_, xe);
    const CMat b = real_t_times(v_, xo);
    const CMat ce = he.asDiagonal() * a + kI * (ho.asDiagonal() * b);
    const CMat co = -kI * (ho.asDiagonal() * a) + he.asDiagonal() * b;
    const CMat ye = real_times(u_, ce);
    const CMat yo = real_times(v_, co);
    CMat y(n_, k);
    for (int r = 0; r < q; ++r) {
        y.row(2 * r) = ye.row(r);
        y.row(2 * r + 1) = yo.row(r);
    }
    return y;
}

CVec SpectralFactor::apply(const Fn& h, const CVec& x) const {
    const CMat y = apply(h, CMat(x));
    return y.col(0);
}

CMat SpectralFactor::matrix(const Fn& h) const {
    if (!structured_) {
        Vec f(n_);
        for (int i = 0; i < n_; ++i) f(i) = h(clip01(lambda_(i)));
        return linalg::reassemble(q_, f);
    }
    const int q = n_ / 2;
    Vec he, ho;
    even_odd(h, he, ho);
    const Mat ee = u_ * he.asDiagonal() * u_.transpose();
    const Mat eo = u_ * ho.asDiagonal() * v_.transpose();
    const Mat oo = v_ * he.asDiagonal() * v_.transpose();
    CMat m(n_, n_);
    for (int a = 0; a < q; ++a) {
        for (int c = 0; c < q; ++c) {
            m(2 * a, 2 * c) = ee(a, c);
            m(2 * a, 2 * c + 1) = cplx(0.0, eo(a, c));
            m(2 * c + 1, 2 * a) = cplx(0.0, -eo(a, c));
            m(2 * a + 1, 2 * c + 1) = oo(a, c);
        }
    }
    return m;
}

double eigen_floor(int n) {
    const double h = std::numbers::pi / n;
    return h * h;
}

struct LyapunovPair::Impl {
    GridPtr grid;
    HardyProjector projector;
    std::shared_ptr<const SpectralFactor> factor;
    double floor = 0.0;

    mutable std::once_flag once[4];
    mutable OperatorMatrix dense[4];

    const OperatorMatrix& get(int slot, LyapOp op, unsigned flags) const {
        std::call_once(once[slot], [&] {
            dense[slot] = OperatorMatrix{grid, factor->matrix(op_function(op, floor)), flags};
        });
        return dense[slot];
    }
};

const GridPtr& LyapunovPair::grid() const { return impl_->grid; }
const HardyProjector& LyapunovPair::projector() const { return impl_->projector; }
const SpectralFactor& LyapunovPair::factor() const { return *impl_->factor; }
double LyapunovPair::eigen_floor() const { return impl_->floor; }

CVec LyapunovPair::apply_weighted(LyapOp op, const CVec& x) const {
    return impl_->factor->apply(op_function(op, impl_->floor), x);
}

CMat LyapunovPair::apply_weighted(LyapOp op, const CMat& x) const {
    return impl_->factor->apply(op_function(op, impl_->floor), x);
}

StateVector LyapunovPair::apply(LyapOp op, const StateVector& psi) const {
    if (!same_grid(psi.grid, impl_->grid)) {
        throw UsageError("LyapunovPair: state lives on a different grid");
    }
    return StateVector::from_weighted(psi.grid, apply_weighted(op, psi.weighted()), psi.rep);
}

namespace {
constexpr unsigned kLyapFlags = kSelfAdjoint | kPositive | kContraction;
}

const OperatorMatrix& LyapunovPair::m_f() const { return impl_->get(0, LyapOp::MF, kLyapFlags); }
const OperatorMatrix& LyapunovPair::m_b() const { return impl_->get(1, LyapOp::MB, kLyapFlags); }
const OperatorMatrix& LyapunovPair::lambda_f() const {
    return impl_->get(2, LyapOp::LambdaF, kLyapFlags);
}
const OperatorMatrix& LyapunovPair::lambda_b() const {
    return impl_->get(3, LyapOp::LambdaB, kLyapFlags);
}

double LyapunovPair::lambda_f_condition() const {
    const Vec ev = impl_->factor->eigenvalues();
    double smallest = 1.0;
    for (double l : ev) {
        if (l > impl_->floor) smallest = std::min(smallest, l);
    }
    return std::sqrt(ev.maxCoeff() / smallest);
}

namespace {

void require_child(const HardyProjector& hp, const GridPtr& half) {
    if (!half || half->kind() != DomainKind::HalfLine || !same_grid(half->parent(), hp.grid())) {
        throw UsageError("half-line grid is not the child of the projector grid");
    }
}

OperatorMatrix clipped(const GridPtr& g, const CMat& block) {
    const linalg::EigH e = linalg::eigh(linalg::hermitian_part(block));
    Vec f = e.values;
    for (auto& x : f) x = clip01(x);
    return OperatorMatrix{g, linalg::reassemble(e.vectors, f), kLyapFlags};
}

} // namespace

LyapunovPair build_lyapunov_pair(const HardyProjector& hp, const GridPtr& half, const Tolerances&) {
    require_child(hp, half);
    auto impl = std::make_shared<LyapunovPair::Impl>();
    impl->grid = half;
    impl->projector = hp;
    impl->floor = eigen_floor(half->n());
    if (hp.exact() && half->n() % 2 == 0) {
        impl->factor = SpectralFactor::structured(half->n());
    } else {
        impl->factor = SpectralFactor::generic(build_m_f(hp, half).entries);
    }
    LyapunovPair p;
    p.impl_ = impl;
    return p;
}

OperatorMatrix build_m_f(const HardyProjector& hp, const GridPtr& half) {
    require_child(hp, half);
    if (hp.exact() && half->n() % 2 == 0) {
        const auto f = SpectralFactor::structured(half->n());
        return OperatorMatrix{half, f->matrix([](double l) { return l; }), kLyapFlags};
    }
    return clipped(half, hp.plus_block(half->parent_offset(), half->n()));
}

OperatorMatrix build_m_b(const HardyProjector& hp, const GridPtr& half) {
    require_child(hp, half);
    return clipped(half, hp.minus_block(half->parent_offset(), half->n()));
}

std::pair<OperatorMatrix, OperatorMatrix> build_m_general(const HardyProjector& hp,
                                                          const GridPtr& sigma) {
    if (sigma && sigma->kind() == DomainKind::FullLine) {
        if (!same_grid(sigma, hp.grid())) {
            throw UsageError("build_m_general: full-line sigma differs from the projector grid");
        }
        return {hp.p_plus(), hp.p_minus()};
    }
    return {build_m_f(hp, sigma), build_m_b(hp, sigma)};
}

OperatorMatrix sqrt_operator(const OperatorMatrix& m) {
    if (!m.has(kSelfAdjoint) || !m.has(kPositive)) {
        throw UsageError("sqrt_operator: input must be flagged self-adjoint and positive");
    }
    const linalg::EigH e = linalg::eigh(linalg::hermitian_part(m.entries));
    Vec f = e.values;
    for (auto& x : f) x = std::sqrt(clip01(x));
    return OperatorMatrix{m.grid, linalg::reassemble(e.vectors, f), kLyapFlags};
}

namespace {

void require_sorted(std::span<const double> times) {
    if (!std::is_sorted(times.begin(), times.end())) {
        throw ParameterError("lyapunov_trace: times must be ascending");
    }
}

CMat evolved_columns(const StateVector& psi, std::span<const double> times) {
    const CVec x = psi.weighted();
    const Vec& e = psi.grid->nodes();
    CMat cols(x.size(), static_cast<Eigen::Index>(times.size()));
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            cols(i, static_cast<Eigen::Index>(k)) = std::polar(1.0, -e(i) * times[k]) * x(i);
        }
    }
    return cols;
}

} // namespace

std::vector<double> lyapunov_trace(const OperatorMatrix& m, const StateVector& psi,
                                   std::span<const double> times) {
    require_sorted(times);
    if (!same_grid(m.grid, psi.grid)) {
        throw UsageError("lyapunov_trace: operator and state live on different grids");
    }
    const CMat x = evolved_columns(psi, times);
    const CMat y = m.entries * x;
    std::vector<double> tau(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto c = static_cast<Eigen::Index>(k);
        tau[k] = x.col(c).dot(y.col(c)).real();
    }
    return tau;
}

std::vector<double> lyapunov_trace(const LyapunovPair& pair, LyapOp op, const StateVector& psi,
                                   std::span<const double> times) {
    require_sorted(times);
    if (!same_grid(pair.grid(), psi.grid)) {
        throw UsageError("lyapunov_trace: operator and state live on different grids");
    }
    const CMat x = evolved_columns(psi, times);
    const CMat y = pair.apply_weighted(op, x);
    std::vector<double> tau(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto c = static_cast<Eigen::Index>(k);
        tau[k] = x.col(c).dot(y.col(c)).real();
    }
    return tau;
}

InjectivityCertificate injectivity_certificate(int n) {
    InjectivityCertificate c;
    c.n = n;
    const double full = 2.0 * n;
    double acc = -n * std::log10(full);
    for (int d = 1; d < n; ++d) {
        acc += 2.0 * (n - d) * std::log10(2.0 * std::sin(std::numbers::pi * d / full));
    }
    c.log10_det = acc;
    c.log10_lambda_min_lower = acc;
    c.injective = std::isfinite(acc);
    return c;
}

} // namespace lpres
