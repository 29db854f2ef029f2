#include <cmath>

#include <gtest/gtest.h>

#include "lpres/errors.hpp"
#include "lpres/hardy.hpp"
#include "lpres/linalg.hpp"

using namespace lpres;

namespace {

double banded_error(const GridPtr& g, const CVec& got, const CVec& want, double band) {
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < g->n(); ++i) {
        if (std::abs(g->nodes()(i)) > band) continue;
        num += g->weights()(i) * std::norm(got(i) - want(i));
        den += g->weights()(i) * std::norm(want(i));
    }
    return std::sqrt(num / den);
}

} // namespace

TEST(Hardy, RationalOracleFourier) {
    const GridPtr g = make_grid(DomainKind::FullLine, 4096, 200.0, Scheme::Cayley);
    const HardyProjector hp = build_hardy_projectors(g);
    const auto poles = default_oracle_poles();
    const OracleReport rep = hardy_oracle(hp, poles);
    ASSERT_EQ(rep.cases.size(), 8u);
    for (const auto& c : rep.cases) {
        EXPECT_TRUE(c.resolved);
        EXPECT_EQ(c.expect_member, c.pole.imag() < 0.0);
        EXPECT_LE(c.residual, 1e-3) << c.pole;
    }
    EXPECT_LE(hp.oracle_residual(), 1e-3);
}

TEST(Hardy, LowerPoleIsInvariantUpperPoleIsAnnihilated) {
    const GridPtr g = make_grid(DomainKind::FullLine, 4096, 200.0, Scheme::Cayley);
    const HardyProjector hp = build_hardy_projectors(g);
    const cplx mu(1.0, -0.1);
    const StateVector f = StateVector::sample(g, [mu](double e) { return 1.0 / (e - mu); });
    const StateVector fbar = StateVector::sample(g, [mu](double e) { return 1.0 / (e - std::conj(mu)); });
    EXPECT_LE((hp.plus(f) - f).norm() / f.norm(), 1e-3);
    EXPECT_LE(hp.plus(fbar).norm() / fbar.norm(), 1e-3);
}

TEST(Hardy, LorentzianHilbertPair) {
    const GridPtr g = make_grid(DomainKind::FullLine, 4096, 200.0, Scheme::Cayley);
    const HardyProjector hp = build_hardy_projectors(g);
    const double e0 = 1.0;
    const double gam = 0.1;
    const StateVector f = StateVector::sample(g, [&](double e) {
        return cplx(gam / ((e - e0) * (e - e0) + gam * gam), 0.0);
    });
    const StateVector h = hp.hilbert(f);
    const StateVector want = StateVector::sample(g, [&](double e) {
        return cplx((e - e0) / ((e - e0) * (e - e0) + gam * gam), 0.0);
    });
    EXPECT_LE(banded_error(g, h.values, want.values, 0.95 * g->e_max()), 1e-3);
}

TEST(Hardy, FourierProjectorStructure) {
    const GridPtr g = make_grid(DomainKind::FullLine, 256, 20.0, Scheme::Cayley);
    const HardyProjector hp = build_hardy_projectors(g);
    const ProjectorDefects d = probe_projector(hp, 4, 7);
    EXPECT_LE(d.complementarity, 1e-12);
    EXPECT_LE(d.idempotence, 1e-12);
    EXPECT_LE(d.self_adjointness, 1e-12);

    const CMat& p = hp.p_plus().entries;
    const CMat& q = hp.p_minus().entries;
    EXPECT_LE(linalg::opnorm(p + q - CMat::Identity(256, 256)), 1e-12);
    EXPECT_LE(linalg::opnorm(p * p - p), 1e-12);
    EXPECT_LE(linalg::hermiticity_defect(p), 1e-15);
    for (int j = 0; j < 256; j += 37) {
        CVec e = CVec::Zero(256);
        e(j) = 1.0;
        EXPECT_LE((hp.plus_weighted(e) - p.col(j)).norm(), 1e-13);
    }
}

TEST(Hardy, BlockIsTranslationInvariant) {
    const GridPtr g = make_grid(DomainKind::FullLine, 64, 20.0, Scheme::Cayley);
    const HardyProjector hp = build_hardy_projectors(g);
    const CMat b = hp.plus_block(32, 32);
    EXPECT_LE((b - hp.p_plus().entries.block(32, 32, 32, 32)).norm(), 1e-13);
    EXPECT_LE((b - hp.p_plus().entries.block(0, 0, 32, 32)).norm(), 1e-13);
    EXPECT_THROW(hp.plus_block(40, 32), UsageError);
}

TEST(Hardy, KernelSchemesApproximateResolvedOracle) {
    const GridPtr g = make_grid(DomainKind::FullLine, 2048, 50.0, Scheme::Uniform);
    const cplx z(3.0, -0.5);
    const StateVector f = StateVector::sample(g, [z](double e) { return 1.0 / (e - z); });
    const HardyProjector pv = build_hardy_projectors(g, PvScheme::PvKernel);
    EXPECT_FALSE(pv.exact());
    EXPECT_LE(banded_error(g, pv.plus(f).values, f.values, 0.5 * g->e_max()), 0.05);
    // eta = 2 spacing smooths the pole: bias of order eta / |Im z|.
    const HardyProjector reg = build_hardy_projectors(g, PvScheme::Regularized);
    const double spacing = g->local_spacing(3.0);
    EXPECT_LE(banded_error(g, reg.plus(f).values, f.values, 0.5 * g->e_max()), 2.0 * 2.0 * spacing / 0.5);
}

TEST(Hardy, UnresolvedPoleIsFlagged) {
    const GridPtr g = make_grid(DomainKind::FullLine, 64, 200.0, Scheme::Uniform);
    const HardyProjector hp = build_hardy_projectors(g);
    const std::vector<cplx> poles{cplx(1.0, -0.1)};
    EXPECT_FALSE(hardy_oracle(hp, poles).cases.front().resolved);
}

TEST(Hardy, RejectsIncompatibleGrids) {
    const GridPtr half = make_grid(DomainKind::HalfLine, 64, 10.0, Scheme::Cayley);
    EXPECT_THROW(build_hardy_projectors(half), UsageError);
    const GridPtr gl = make_grid(DomainKind::FullLine, 64, 10.0, Scheme::GaussLegendre);
    EXPECT_THROW(build_hardy_projectors(gl, PvScheme::Fourier), UsageError);
    EXPECT_NO_THROW(build_hardy_projectors(gl, PvScheme::PvKernel));
    EXPECT_THROW(parse_pv_scheme("hilbert"), ParameterError);
}
