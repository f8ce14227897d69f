// test_couplings.cpp — closed-form coupling matrices against the correlator oracle

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "sqz/couplings.hpp"
#include "sqz/errors.hpp"

using namespace sqz;
using cplx = std::complex<double>;

namespace {

bath::BathState bath_for(const PhysicalParams& p, double r) {
    PhysicalParams q = p;
    q.squeezing_r = r;
    return bath::make_bath(q);
}

// closed-form value of one channel between two qubits at separation x (units of lambda)
cplx closed_form(Channel ch, double x, const PhysicalParams& p, const bath::BathState& b) {
    const auto geo = ArrayGeometry::chain(2, x);
    const CouplingSet c = build_couplings(geo, p, b);
    switch (ch) {
    case Channel::J: return c.J(0, 1);
    case Channel::Gamma_mp: return c.Gamma_mp(0, 1);
    case Channel::Gamma_pm: return c.Gamma_pm(0, 1);
    case Channel::Gamma_pp: return c.Gamma_pp(0, 1);
    case Channel::Gamma_mm: return c.Gamma_mm(0, 1);
    default: return 0.0;
    }
}

} // namespace

TEST_CASE("isolated-qubit emission rate is about 8.2 Hz") {
    PhysicalParams p;
    const auto b = bath_for(p, 0.0);
    const CouplingSet c = build_couplings(ArrayGeometry::chain(1, 0.5), p, b);
    CHECK(c.gamma0 == doctest::Approx(75.0 * units::kPi * 100e6 / 2.87e9).epsilon(1e-14));
    CHECK(std::abs(c.Gamma_pm(0, 0) - 8.2) < 0.4);
    CHECK(c.Gamma_pm(0, 0) == doctest::Approx(c.gamma0));
    CHECK(c.Gamma_mp(0, 0) == 0.0);
    CHECK(c.J(0, 0) == 0.0);
}

TEST_CASE("unsqueezed bath has no pair channels") {
    PhysicalParams p;
    const CouplingSet c = build_couplings(ArrayGeometry::chain(4, 0.4), p, bath_for(p, 0.0));
    CHECK(c.Gamma_pp.cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.Gamma_mm.cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.Gamma_mp.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("emission vanishes at the first zero of J0") {
    PhysicalParams p;
    const CouplingSet c = build_couplings(ArrayGeometry::chain(2, 2.404825557695773), p, bath_for(p, 0.5));
    CHECK(std::abs(c.Gamma_pm(0, 1)) < 1e-10 * c.gamma0);
    CHECK(std::abs(c.Gamma_mm(0, 1)) < 1e-10 * c.gamma0);
}

TEST_CASE("J follows -gamma0/2 Y0(rho/lambda)") {
    PhysicalParams p;
    for (double x : {0.05, 0.3, 0.89357696627916752, 1.7, 3.0}) {
        const CouplingSet c = build_couplings(ArrayGeometry::chain(2, x), p, bath_for(p, 0.25));
        CHECK(c.J(0, 1) == doctest::Approx(-0.5 * c.gamma0 * std::cyl_neumann(0.0, x)).epsilon(1e-9));
        CHECK(c.Gamma_pm(0, 1) ==
              doctest::Approx((c.bath.N + 1) * c.gamma0 * std::cyl_bessel_j(0.0, x)).epsilon(1e-9));
    }
}

TEST_CASE("invariants hold on random geometries") {
    PhysicalParams p;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> box(0.0, 3.0);
    std::uniform_int_distribution<int> count(1, 6);
    for (int trial = 0; trial < 40; ++trial) {
        ArrayGeometry g;
        g.explicit_positions = true;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            g.positions.push_back({box(rng), box(rng)});
        }
        const double r = std::vector<double>{0.0, 0.25, 1.0, 2.0}[static_cast<std::size_t>(trial % 4)];
        const CouplingSet c = build_couplings(g, p, bath_for(p, r));
        CHECK_NOTHROW(c.check_invariants());
        CHECK(c.size() == n);
    }
}

TEST_CASE("coincident qubits are rejected") {
    PhysicalParams p;
    ArrayGeometry g;
    g.explicit_positions = true;
    g.positions = {{0.0, 0.0}, {0.5, 0.5}, {0.5, 0.5}};
    CHECK_THROWS_AS(build_couplings(g, p, bath_for(p, 0.0)), ConfigError);
}

TEST_CASE("broken invariants are detected") {
    PhysicalParams p;
    const CouplingSet good = build_couplings(ArrayGeometry::chain(3, 0.5), p, bath_for(p, 0.5));

    CouplingSet pair = good;
    pair.Gamma_mm *= 2.0;
    pair.Gamma_pp *= 2.0;
    CHECK_THROWS_AS(pair.check_invariants(), InvariantViolation);

    CouplingSet asym = good;
    asym.J(0, 1) += 1.0;
    CHECK_THROWS_AS(asym.check_invariants(), InvariantViolation);

    CouplingSet diag = good;
    diag.J(1, 1) = 0.1;
    CHECK_THROWS_AS(diag.check_invariants(), InvariantViolation);

    CouplingSet ratio = good;
    ratio.Gamma_mp *= 1.01;
    CHECK_THROWS_AS(ratio.check_invariants(), InvariantViolation);

    CouplingSet conj = good;
    conj.Gamma_pp = conj.Gamma_mm;
    CHECK_THROWS_AS(conj.check_invariants(), InvariantViolation);
}

TEST_CASE("every channel scales linearly with nu") {
    PhysicalParams p;
    const auto b = bath_for(p, 0.25);
    const auto geo = ArrayGeometry::chain(3, 0.45);
    const CouplingSet a = build_couplings(geo, p, b);
    p.nu_Hz *= 3.5;
    const CouplingSet c = build_couplings(geo, p, b);
    CHECK((c.J - 3.5 * a.J).cwiseAbs().maxCoeff() <= 1e-13 * a.J.cwiseAbs().maxCoeff());
    CHECK((c.Gamma_pm - 3.5 * a.Gamma_pm).cwiseAbs().maxCoeff() <= 1e-13 * a.Gamma_pm.cwiseAbs().maxCoeff());
    CHECK((c.Gamma_mp - 3.5 * a.Gamma_mp).cwiseAbs().maxCoeff() <= 1e-13 * a.Gamma_mp.cwiseAbs().maxCoeff());
    CHECK((c.Gamma_mm - 3.5 * a.Gamma_mm).cwiseAbs().maxCoeff() <= 1e-13 * a.Gamma_mm.cwiseAbs().maxCoeff());
    CHECK((c.Gamma_pp - 3.5 * a.Gamma_pp).cwiseAbs().maxCoeff() <= 1e-13 * a.Gamma_pp.cwiseAbs().maxCoeff());
    Eigen::Index i0, j0, i1, j1;
    a.J.cwiseAbs().maxCoeff(&i0, &j0);
    c.J.cwiseAbs().maxCoeff(&i1, &j1);
    CHECK(i0 == i1);
    CHECK(j0 == j1);
}

TEST_CASE("finite-distance factor multiplies every channel") {
    PhysicalParams p;
    const auto b = bath_for(p, 0.25);
    const auto geo = ArrayGeometry::chain(2, 0.7);
    const CouplingSet a = build_couplings(geo, p, b);
    p.finite_distance_correction = true;
    const CouplingSet c = build_couplings(geo, p, b);
    const double f = std::exp(-2.0 * p.distance_cm() / b.lambda);
    CHECK(c.J(0, 1) == doctest::Approx(f * a.J(0, 1)).epsilon(1e-14));
    CHECK(c.Gamma_pm(0, 0) == doctest::Approx(f * a.Gamma_pm(0, 0)).epsilon(1e-14));
    // the oracle carries the e^{-2kd} kernel directly
    const cplx o = coupling_oracle(Channel::Gamma_pm, 0.7, p, b);
    CHECK(std::abs(o - c.Gamma_pm(0, 1)) < 1e-3 * std::abs(c.Gamma_pm(0, 1)));
}

TEST_CASE("uncorrelated copy keeps only the diagonal") {
    PhysicalParams p;
    const CouplingSet c = build_couplings(ArrayGeometry::chain(3, 0.4), p, bath_for(p, 0.5)).uncorrelated();
    CHECK(c.J.cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.Gamma_pm(1, 1) == doctest::Approx((c.bath.N + 1) * c.gamma0));
    CHECK(c.Gamma_pm(0, 2) == 0.0);
    CHECK_NOTHROW(c.check_invariants());
}

TEST_CASE("oracle on-site emission reproduces gamma0") {
    PhysicalParams p;
    const auto b = bath_for(p, 0.0);
    const CouplingSet c = build_couplings(ArrayGeometry::chain(1, 0.5), p, b);
    const cplx o = coupling_oracle(Channel::Gamma_pm, 0.0, p, b);
    CHECK(std::abs(o - c.gamma0) < 0.01 * c.gamma0);
    CHECK(std::abs(coupling_oracle(Channel::Gamma_mm, 0.0, p, b)) == 0.0);
    CHECK_THROWS_AS(coupling_oracle(Channel::J, 0.0, p, b), std::domain_error);
    CHECK_THROWS_AS(coupling_oracle(Channel::Gamma_pm, -1.0, p, b), std::domain_error);
}

TEST_CASE("pair coherent channels vanish in the oracle") {
    PhysicalParams p;
    for (double r : {0.0, 0.25, 1.0}) {
        const auto b = bath_for(p, r);
        const double g0 = build_couplings(ArrayGeometry::chain(1, 0.5), p, b).gamma0;
        for (double x : {0.2, 1.3}) {
            CHECK(std::abs(coupling_oracle(Channel::J_pp, x, p, b)) < 1e-3 * g0);
            CHECK(std::abs(coupling_oracle(Channel::J_mm, x, p, b)) < 1e-3 * g0);
        }
    }
}

TEST_CASE("closed form agrees with the oracle at random separations") {
    PhysicalParams p;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> sep(0.0, 3.0);
    std::vector<double> xs;
    while (xs.size() < 10) {
        const double x = sep(rng);
        if (x > 0.0) {
            xs.push_back(x);
        }
    }
    for (double r : {0.0, 0.25, 1.0}) {
        const auto b = bath_for(p, r);
        const double g0 = build_couplings(ArrayGeometry::chain(1, 0.5), p, b).gamma0;
        for (double x : xs) {
            for (Channel ch : {Channel::J, Channel::Gamma_mp, Channel::Gamma_pm, Channel::Gamma_pp,
                               Channel::Gamma_mm}) {
                const cplx ref = closed_form(ch, x, p, b);
                const cplx got = coupling_oracle(ch, x, p, b);
                const double err = std::abs(got - ref);
                INFO(to_string(ch), " r=", r, " x=", x, " ref=", ref, " oracle=", got);
                CHECK((err <= 0.01 * std::abs(ref) || err <= 1e-3 * g0));
            }
        }
    }
}
