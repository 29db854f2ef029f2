#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "lpres/types.hpp"

namespace lpres {

enum class DomainKind { FullLine, HalfLine };

/**
 * Node placement.
 *
 * Uniform: midpoint rule on [-e_max, e_max] (or [0, e_max]).
 * GaussLegendre: composite 8-point panels on the same interval.
 * Cayley: E = s tan(theta/2) with theta equispaced on (-pi, pi) and
 * s = e_max / kCayleyScaleRatio. The whole line is covered; there is no
 * truncation, and e_max only sets the scale.
 */
enum class Scheme { Uniform, GaussLegendre, Cayley };

/// Energy representation the samples live in.
enum class Rep { Outgoing, Incoming };

inline constexpr double kCayleyScaleRatio = 10.0;
inline constexpr int kPanelOrder = 8;

Scheme parse_scheme(std::string_view id);
std::string to_string(Scheme s);
std::string to_string(DomainKind k);

class EnergyGrid;
using GridPtr = std::shared_ptr<const EnergyGrid>;

/**
 * Quadrature discretization of the energy axis.
 *
 * Immutable. A half-line grid keeps a pointer to the full-line grid whose
 * positive nodes it consists of, so that embedding is index arithmetic.
 */
class EnergyGrid {
public:
    DomainKind kind() const { return kind_; }
    Scheme scheme() const { return scheme_; }
    int n() const { return static_cast<int>(nodes_.size()); }
    double e_max() const { return e_max_; }
    const Vec& nodes() const { return nodes_; }
    const Vec& weights() const { return weights_; }
    const Vec& sqrt_weights() const { return sqrt_weights_; }

    /// Map scale s for Cayley grids, 0 otherwise.
    double scale() const { return scale_; }

    /// Parent full-line grid (half-line grids only).
    const GridPtr& parent() const { return parent_; }

    /// Offset of this grid's first node inside the parent.
    int parent_offset() const { return parent_ ? parent_->n() - n() : 0; }

    /// True when the nodes are equispaced in a variable in which the Hardy
    /// projection is an exact Fourier multiplier (Uniform and Cayley).
    bool fourier_compatible() const { return scheme_ != Scheme::GaussLegendre; }

    /// Node spacing near energy e.
    double local_spacing(double e) const;

    /// Same construction parameters; grids built twice compare equal.
    bool same_as(const EnergyGrid& other) const;

private:
    friend GridPtr make_grid(DomainKind, int, double, Scheme);
    EnergyGrid() = default;

    DomainKind kind_ = DomainKind::FullLine;
    Scheme scheme_ = Scheme::Uniform;
    double e_max_ = 0.0;
    double scale_ = 0.0;
    Vec nodes_;
    Vec weights_;
    Vec sqrt_weights_;
    GridPtr parent_;
};

/// Throws ParameterError on n < 8, e_max <= 0 or a node count the scheme cannot split.
GridPtr make_grid(DomainKind kind, int n, double e_max, Scheme scheme);

bool same_grid(const GridPtr& a, const GridPtr& b);

/// Sampled state. Values are plain samples psi(E_i); weights enter only the pairing.
struct StateVector {
    GridPtr grid;
    CVec values;
    Rep rep = Rep::Outgoing;

    StateVector() = default;
    StateVector(GridPtr g, CVec v, Rep r = Rep::Outgoing);

    int size() const { return static_cast<int>(values.size()); }
    double norm2() const;
    double norm() const;

    /// Samples scaled by sqrt(w); Euclidean geometry equals the L2 geometry.
    CVec weighted() const;
    static StateVector from_weighted(GridPtr g, const CVec& x, Rep r = Rep::Outgoing);

    static StateVector sample(GridPtr g, const std::function<cplx(double)>& f,
                              Rep r = Rep::Outgoing);
    static StateVector zero(GridPtr g, Rep r = Rep::Outgoing);
};

/// Sum of w_i conj(phi_i) psi_i.
cplx inner(const StateVector& phi, const StateVector& psi);

StateVector operator+(const StateVector& a, const StateVector& b);
StateVector operator-(const StateVector& a, const StateVector& b);
StateVector operator*(cplx c, const StateVector& a);

/// Zero extension onto the parent grid.
StateVector embed_halfline(const StateVector& psi, const GridPtr& parent);

/// Restriction of a full-line state onto its half-line child.
StateVector restrict_halfline(const StateVector& psi, const GridPtr& half);

enum OpFlag : unsigned {
    kNoFlags = 0,
    kSelfAdjoint = 1u << 0,
    kPositive = 1u << 1,
    kContraction = 1u << 2,
    kUnitary = 1u << 3,
};

/**
 * Dense operator acting on weighted samples x_i = sqrt(w_i) psi_i.
 *
 * In these coordinates the weighted inner product is Euclidean, so
 * self-adjointness is plain Hermiticity and the operator norm is the
 * spectral norm of `entries`.
 */
struct OperatorMatrix {
    GridPtr grid;
    CMat entries;
    unsigned flags = kNoFlags;

    bool has(OpFlag f) const { return (flags & f) != 0; }
    int n() const { return static_cast<int>(entries.rows()); }
};

OperatorMatrix identity_operator(const GridPtr& g);

StateVector apply(const OperatorMatrix& a, const StateVector& psi);

struct FlagCheck {
    double hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double operator_norm = 0.0;
    bool ok = true;
};

/// Verifies the declared flags spectrally (one eigendecomposition).
FlagCheck verify_flags(const OperatorMatrix& a, const Tolerances& tol = {});

} // namespace lpres
