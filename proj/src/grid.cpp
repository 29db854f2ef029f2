#include "lpres/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "lpres/errors.hpp"
#include "lpres/linalg.hpp"

namespace lpres {

Scheme parse_scheme(std::string_view id) {
    if (id == "uniform") return Scheme::Uniform;
    if (id == "gauss-legendre") return Scheme::GaussLegendre;
    if (id == "cayley") return Scheme::Cayley;
    throw ParameterError("unknown quadrature scheme '" + std::string(id) +
                         "' (expected uniform, gauss-legendre or cayley)");
}

std::string to_string(Scheme s) {
    switch (s) {
    case Scheme::Uniform: return "uniform";
    case Scheme::GaussLegendre: return "gauss-legendre";
    case Scheme::Cayley: return "cayley";
    }
    return "?";
}

std::string to_string(DomainKind k) {
    return k == DomainKind::FullLine ? "full-line" : "half-line";
}

namespace {

void full_uniform(int n, double e_max, Vec& x, Vec& w) {
    const double h = 2.0 * e_max / n;
    x.resize(n);
    w.setConstant(n, h);
    for (int j = 0; j < n; ++j) {
        x(j) = -e_max + (j + 0.5) * h;
    }
}

void full_gauss_legendre(int n, double e_max, Vec& x, Vec& w) {
    using Rule = boost::math::quadrature::gauss<double, kPanelOrder>;
    // Boost stores the nonnegative half of the symmetric rule.
    std::vector<double> t, c;
    const auto& a = Rule::abscissa();
    const auto& b = Rule::weights();
    for (std::size_t k = a.size(); k-- > 0;) {
        if (a[k] > 0.0) {
            t.push_back(-a[k]);
            c.push_back(b[k]);
        }
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > 0.0) {
            t.push_back(a[k]);
            c.push_back(b[k]);
        }
    }
    const int panels = n / kPanelOrder;
    const double width = 2.0 * e_max / panels;
    x.resize(n);
    w.resize(n);
    for (int p = 0; p < panels; ++p) {
        const double mid = -e_max + (p + 0.5) * width;
        for (int k = 0; k < kPanelOrder; ++k) {
            x(p * kPanelOrder + k) = mid + 0.5 * width * t[k];
            w(p * kPanelOrder + k) = 0.5 * width * c[k];
        }
    }
}

void full_cayley(int n, double scale, Vec& x, Vec& w) {
    const double h = 2.0 * std::numbers::pi / n;
    x.resize(n);
    w.resize(n);
    for (int j = 0; j < n; ++j) {
        const double half = 0.5 * (-std::numbers::pi + (j + 0.5) * h);
        const double c = std::cos(half);
        x(j) = scale * std::tan(half);
        w(j) = 0.5 * scale * h / (c * c);
    }
    // Exact antisymmetry of the nodes.
    for (int j = 0; j < n / 2; ++j) {
        x(j) = -x(n - 1 - j);
    }
}

void validate(DomainKind kind, int n, double e_max, Scheme scheme) {
    if (n < 8) {
        throw ParameterError("grid needs n >= 8, got " + std::to_string(n));
    }
    if (!(e_max > 0.0) || !std::isfinite(e_max)) {
        throw ParameterError("grid needs e_max > 0");
    }
    const int full_n = kind == DomainKind::FullLine ? n : 2 * n;
    if (full_n % 2 != 0) {
        throw ParameterError("full-line grids need an even node count");
    }
    if (scheme == Scheme::GaussLegendre && full_n % (2 * kPanelOrder) != 0) {
        throw ParameterError("gauss-legendre grids need the full-line node count divisible by " +
                             std::to_string(2 * kPanelOrder));
    }
}

} // namespace

GridPtr make_grid(DomainKind kind, int n, double e_max, Scheme scheme) {
    validate(kind, n, e_max, scheme);
    if (kind == DomainKind::HalfLine) {
        GridPtr parent = make_grid(DomainKind::FullLine, 2 * n, e_max, scheme);
        auto g = std::shared_ptr<EnergyGrid>(new EnergyGrid());
        g->kind_ = DomainKind::HalfLine;
        g->scheme_ = scheme;
        g->e_max_ = e_max;
        g->scale_ = parent->scale();
        g->nodes_ = parent->nodes().tail(n);
        g->weights_ = parent->weights().tail(n);
        g->sqrt_weights_ = parent->sqrt_weights().tail(n);
        g->parent_ = parent;
        return g;
    }
    auto g = std::shared_ptr<EnergyGrid>(new EnergyGrid());
    g->kind_ = DomainKind::FullLine;
    g->scheme_ = scheme;
    g->e_max_ = e_max;
    switch (scheme) {
    case Scheme::Uniform: full_uniform(n, e_max, g->nodes_, g->weights_); break;
    case Scheme::GaussLegendre: full_gauss_legendre(n, e_max, g->nodes_, g->weights_); break;
    case Scheme::Cayley:
        g->scale_ = e_max / kCayleyScaleRatio;
        full_cayley(n, g->scale_, g->nodes_, g->weights_);
        break;
    }
    g->sqrt_weights_ = g->weights_.cwiseSqrt();
    return g;
}

double EnergyGrid::local_spacing(double e) const {
    const double* begin = nodes_.data();
    const double* end = begin + nodes_.size();
    auto it = std::lower_bound(begin, end, e);
    auto j = static_cast<int>(std::clamp<std::ptrdiff_t>(it - begin, 1, n() - 1));
    return nodes_(j) - nodes_(j - 1);
}

bool EnergyGrid::same_as(const EnergyGrid& other) const {
    return kind_ == other.kind_ && scheme_ == other.scheme_ && n() == other.n() &&
           e_max_ == other.e_max_;
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    return a && b && (a == b || a->same_as(*b));
}

StateVector::StateVector(GridPtr g, CVec v, Rep r) : grid(std::move(g)), values(std::move(v)), rep(r) {
    if (!grid || values.size() != grid->n()) {
        throw UsageError("state length does not match its grid");
    }
}

double StateVector::norm2() const {
    return (grid->weights().array() * values.array().abs2()).sum();
}

double StateVector::norm() const { return std::sqrt(norm2()); }

CVec StateVector::weighted() const {
    CVec x = values.cwiseProduct(grid->sqrt_weights().cast<cplx>());
    return x;
}

StateVector StateVector::from_weighted(GridPtr g, const CVec& x, Rep r) {
    CVec v = x.cwiseQuotient(g->sqrt_weights().cast<cplx>());
    return StateVector(std::move(g), std::move(v), r);
}

StateVector StateVector::sample(GridPtr g, const std::function<cplx(double)>& f, Rep r) {
    CVec v(g->n());
    for (int i = 0; i < g->n(); ++i) {
        v(i) = f(g->nodes()(i));
    }
    return StateVector(std::move(g), std::move(v), r);
}

StateVector StateVector::zero(GridPtr g, Rep r) {
    CVec v = CVec::Zero(g->n());
    return StateVector(std::move(g), std::move(v), r);
}

namespace {

void require_compatible(const StateVector& a, const StateVector& b, const char* what) {
    if (!same_grid(a.grid, b.grid)) {
        throw UsageError(std::string(what) + ": states live on different grids");
    }
    if (a.rep != b.rep) {
        throw UsageError(std::string(what) + ": states live in different energy representations");
    }
}

} // namespace

cplx inner(const StateVector& phi, const StateVector& psi) {
    require_compatible(phi, psi, "inner");
    const Vec& w = phi.grid->weights();
    cplx acc = 0.0;
    for (int i = 0; i < phi.size(); ++i) {
        acc += w(i) * std::conj(phi.values(i)) * psi.values(i);
    }
    return acc;
}

StateVector operator+(const StateVector& a, const StateVector& b) {
    require_compatible(a, b, "operator+");
    return StateVector(a.grid, a.values + b.values, a.rep);
}

StateVector operator-(const StateVector& a, const StateVector& b) {
    require_compatible(a, b, "operator-");
    return StateVector(a.grid, a.values - b.values, a.rep);
}

StateVector operator*(cplx c, const StateVector& a) {
    return StateVector(a.grid, c * a.values, a.rep);
}

StateVector embed_halfline(const StateVector& psi, const GridPtr& parent) {
    if (psi.grid->kind() != DomainKind::HalfLine || !same_grid(psi.grid->parent(), parent)) {
        throw UsageError("embed_halfline: state grid is not the half-line child of this parent");
    }
    CVec v = CVec::Zero(parent->n());
    v.tail(psi.size()) = psi.values;
    return StateVector(parent, std::move(v), psi.rep);
}

StateVector restrict_halfline(const StateVector& psi, const GridPtr& half) {
    if (half->kind() != DomainKind::HalfLine || !same_grid(half->parent(), psi.grid)) {
        throw UsageError("restrict_halfline: target is not a half-line child of the state grid");
    }
    return StateVector(half, psi.values.tail(half->n()), psi.rep);
}

OperatorMatrix identity_operator(const GridPtr& g) {
    return OperatorMatrix{g, CMat::Identity(g->n(), g->n()),
                          kSelfAdjoint | kPositive | kContraction | kUnitary};
}

StateVector apply(const OperatorMatrix& a, const StateVector& psi) {
    if (!same_grid(a.grid, psi.grid)) {
        throw UsageError("apply: operator and state live on different grids");
    }
    CVec y = a.entries * psi.weighted();
    return StateVector::from_weighted(psi.grid, y, psi.rep);
}

FlagCheck verify_flags(const OperatorMatrix& a, const Tolerances& tol) {
    FlagCheck c;
    c.hermiticity_defect = linalg::hermiticity_defect(a.entries);
    if (a.has(kSelfAdjoint) || a.has(kPositive)) {
        const Vec ev = linalg::eigvalsh(linalg::hermitian_part(a.entries));
        c.min_eigenvalue = ev.minCoeff();
        c.max_eigenvalue = ev.maxCoeff();
        c.operator_norm = std::max(std::abs(c.min_eigenvalue), std::abs(c.max_eigenvalue));
    } else {
        c.operator_norm = linalg::opnorm(a.entries);
    }
    if (a.has(kSelfAdjoint) && c.hermiticity_defect > tol.hermiticity_tol) c.ok = false;
    if (a.has(kPositive) && c.min_eigenvalue < -tol.spec_tol) c.ok = false;
    if (a.has(kContraction) && c.operator_norm > 1.0 + tol.spec_tol) c.ok = false;
    if (a.has(kUnitary)) {
        const CMat defect = a.entries.adjoint() * a.entries - CMat::Identity(a.n(), a.n());
        if (defect.cwiseAbs().maxCoeff() > tol.spec_tol) c.ok = false;
    }
    return c;
}

} // namespace lpres
