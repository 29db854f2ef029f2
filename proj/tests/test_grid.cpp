#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lpres/errors.hpp"
#include "lpres/grid.hpp"

using namespace lpres;

TEST(Grid, UniformFullLineMidpoints) {
    const GridPtr g = make_grid(DomainKind::FullLine, 16, 8.0, Scheme::Uniform);
    ASSERT_EQ(g->n(), 16);
    for (int i = 0; i < 16; ++i) {
        EXPECT_DOUBLE_EQ(g->nodes()(i), -7.5 + i);
        EXPECT_DOUBLE_EQ(g->weights()(i), 1.0);
        EXPECT_DOUBLE_EQ(g->nodes()(i), -g->nodes()(15 - i));
    }
}

TEST(Grid, HalfLineIsPositivePartOfParent) {
    const GridPtr full = make_grid(DomainKind::FullLine, 16, 8.0, Scheme::Uniform);
    const GridPtr half = make_grid(DomainKind::HalfLine, 8, 8.0, Scheme::Uniform);
    ASSERT_EQ(half->n(), 8);
    ASSERT_TRUE(half->parent());
    EXPECT_TRUE(half->parent()->same_as(*full));
    EXPECT_EQ(half->parent_offset(), 8);
    for (int i = 0; i < 8; ++i) {
        EXPECT_DOUBLE_EQ(half->nodes()(i), full->nodes()(8 + i));
        EXPECT_DOUBLE_EQ(half->weights()(i), full->weights()(8 + i));
    }
}

TEST(Grid, NodesIncreasingWeightsPositive) {
    for (Scheme s : {Scheme::Uniform, Scheme::GaussLegendre, Scheme::Cayley}) {
        for (DomainKind k : {DomainKind::FullLine, DomainKind::HalfLine}) {
            const GridPtr g = make_grid(k, 64, 20.0, s);
            for (int i = 0; i < g->n(); ++i) {
                EXPECT_GT(g->weights()(i), 0.0);
                if (i > 0) EXPECT_GT(g->nodes()(i), g->nodes()(i - 1));
                if (k == DomainKind::HalfLine) EXPECT_GT(g->nodes()(i), 0.0);
            }
        }
    }
}

TEST(Grid, CayleyNodesFollowTheMap) {
    const GridPtr g = make_grid(DomainKind::FullLine, 32, 50.0, Scheme::Cayley);
    EXPECT_DOUBLE_EQ(g->scale(), 5.0);
    const double theta = -std::numbers::pi + std::numbers::pi * 2.0 * 0.5 / 32;
    EXPECT_NEAR(g->nodes()(0), 5.0 * std::tan(theta / 2.0), 1e-12);
}

TEST(Grid, LorentzianQuadrature) {
    const GridPtr g = make_grid(DomainKind::HalfLine, 4096, 200.0, Scheme::Cayley);
    const StateVector f = StateVector::sample(g, [](double e) { return 1.0 / cplx(e - 1.0, 0.1); });
    const double exact = (0.5 * std::numbers::pi + std::atan(10.0)) / 0.1;
    EXPECT_NEAR(exact, 30.41924001, 1e-8);
    EXPECT_NEAR(f.norm2() / exact, 1.0, 0.005);
}

TEST(Grid, GaussLegendreIntegratesPolynomials) {
    const GridPtr g = make_grid(DomainKind::FullLine, 64, 3.0, Scheme::GaussLegendre);
    const StateVector f = StateVector::sample(g, [](double e) { return cplx(e * e * e, 0.0); });
    // norm2 of e^3 is the integral of e^6: 2 * 3^7 / 7.
    EXPECT_NEAR(f.norm2(), 2.0 * std::pow(3.0, 7) / 7.0, 1e-9);
}

TEST(Grid, RejectsBadParameters) {
    EXPECT_THROW(make_grid(DomainKind::FullLine, 4, 8.0, Scheme::Uniform), ParameterError);
    EXPECT_THROW(make_grid(DomainKind::FullLine, 16, 0.0, Scheme::Uniform), ParameterError);
    EXPECT_THROW(make_grid(DomainKind::FullLine, 20, 8.0, Scheme::GaussLegendre), ParameterError);
    EXPECT_THROW(parse_scheme("chebyshev"), ParameterError);
}

TEST(State, InnerProductProperties) {
    const GridPtr g = make_grid(DomainKind::HalfLine, 64, 10.0, Scheme::Cayley);
    const StateVector a = StateVector::sample(g, [](double e) { return cplx(std::exp(-e), e); });
    const StateVector b = StateVector::sample(g, [](double e) { return cplx(1.0 / (1.0 + e), -0.5); });
    const cplx aa = inner(a, a);
    EXPECT_GE(aa.real(), 0.0);
    EXPECT_LE(std::abs(aa.imag()), 1e-15 * aa.real());
    EXPECT_NEAR(std::abs(inner(a, b) - std::conj(inner(b, a))), 0.0, 1e-14);
    EXPECT_NEAR(aa.real(), a.norm2(), 1e-12 * a.norm2());
}

TEST(State, EmbedAndRestrict) {
    const GridPtr half = make_grid(DomainKind::HalfLine, 32, 10.0, Scheme::Cayley);
    const StateVector psi = StateVector::sample(half, [](double e) { return cplx(e, 1.0) / (1.0 + e * e); });
    const StateVector up = embed_halfline(psi, half->parent());
    EXPECT_NEAR(up.norm(), psi.norm(), 1e-15);
    const StateVector back = restrict_halfline(up, half);
    EXPECT_EQ((back.values - psi.values).norm(), 0.0);
    const StateVector z = embed_halfline(StateVector::zero(half), half->parent());
    EXPECT_EQ(z.values.norm(), 0.0);
}

TEST(State, MismatchedGridsThrow) {
    const GridPtr a = make_grid(DomainKind::HalfLine, 32, 10.0, Scheme::Cayley);
    const GridPtr b = make_grid(DomainKind::HalfLine, 64, 10.0, Scheme::Cayley);
    EXPECT_THROW(inner(StateVector::zero(a), StateVector::zero(b)), UsageError);
    EXPECT_THROW(embed_halfline(StateVector::zero(a), b->parent()), UsageError);
}

TEST(Operator, FlagVerification) {
    const GridPtr g = make_grid(DomainKind::HalfLine, 16, 4.0, Scheme::Uniform);
    OperatorMatrix id = identity_operator(g);
    const FlagCheck ok = verify_flags(id);
    EXPECT_TRUE(ok.ok);
    EXPECT_DOUBLE_EQ(ok.operator_norm, 1.0);
    OperatorMatrix bad{g, 2.0 * CMat::Identity(16, 16), kSelfAdjoint | kContraction};
    EXPECT_FALSE(verify_flags(bad).ok);
}
