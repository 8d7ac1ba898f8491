#include <doctest.h>

#include <cmath>
#include <random>

#include "levycross/errors.hpp"
#include "levycross/payoff.hpp"
#include "oracles.hpp"

using namespace levycross;

namespace {
double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("default damping") {
    SUBCASE("gaussian n = 1 gets the unconstrained default") {
        auto g = LevyExponentSpec::gaussian(0.2, 0.0);
        BasketModel m({g}, {}, {});
        DampingVector d = default_damping(m);
        CHECK(d.eps(0) == doctest::Approx(-2.0));
    }
    SUBCASE("kobol n = 2 respects the strips") {
        auto k = LevyExponentSpec::kobol(0.35, 1.0, 1.0, -15.0, 12.0, 0.0);
        BasketModel m({k, k}, {}, {});
        DampingVector d = default_damping(m);
        CHECK(d.eps(1) == doctest::Approx(0.75));
        CHECK(d.eps(0) == doctest::Approx(-2.75));
    }
    SUBCASE("narrow strips raise the adaptedness error") {
        auto k = LevyExponentSpec::kobol(0.35, 1.0, 1.0, -0.9, 0.9, 0.0);
        BasketModel m({k, k}, {}, {});
        try {
            default_damping(m);
            CHECK(false);
        } catch (const adaptedness_error& e) {
            CHECK(std::string(e.what()).find("lambda_+ > 1") != std::string::npos);
        }
    }
}

TEST_CASE("hurd-zhou transform against 2-D quadrature") {
    Eigen::VectorXcd u(2);
    u << Complex(0.3, -2.1), Complex(-0.8, 0.75);
    Complex got = hurd_zhou_g(u);
    Complex want = oracles::payoff_transform_quad(0.3, -0.8, -2.1, 0.75);
    CHECK(rel_err(got, want) < 1e-6);
}

TEST_CASE("hurd-zhou conjugate symmetry on a fixed contour") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> xd(-3.0, 3.0);
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXcd u(2), v(2);
        double x1 = xd(rng), x2 = xd(rng);
        u << Complex(x1, -2.2), Complex(x2, 0.6);
        v << Complex(-x1, -2.2), Complex(-x2, 0.6);
        Complex a = hurd_zhou_g(v);
        Complex b = std::conj(hurd_zhou_g(u));
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
    }
}

TEST_CASE("n = 1 reduction is the rational damped-call transform") {
    Complex u1(0.5, -2.0);
    Eigen::VectorXcd u(1);
    u(0) = u1;
    Complex got = hurd_zhou_g(u);
    const Complex i(0.0, 1.0);
    Complex want = 1.0 / ((i * u1) * (i * u1 - 1.0));
    CHECK(rel_err(got, want) < 1e-12);
}

TEST_CASE("payoff coefficients") {
    DampingVector eps;
    eps.eps.resize(2);
    eps.eps << -2.1, 0.75;
    const double P = 20.0;

    SUBCASE("agrees with hurd_zhou_g at the mapped contour point") {
        Eigen::VectorXi m(2);
        m << 3, -1;
        Complex got = payoff_coefficient(m, eps, P);
        Eigen::VectorXcd u(2);
        u << Complex(-2.0 * M_PI * 3 / P, -2.1), Complex(2.0 * M_PI / P, 0.75);
        CHECK(std::abs(got - hurd_zhou_g(u)) <= 1e-14 * std::abs(got));
    }
    SUBCASE("matches direct quadrature at m = (3, -1)") {
        Eigen::VectorXi m(2);
        m << 3, -1;
        Complex got = payoff_coefficient(m, eps, P);
        Complex want = oracles::payoff_transform_quad(-2.0 * M_PI * 3 / P, 2.0 * M_PI / P, -2.1, 0.75);
        CHECK(rel_err(got, want) < 1e-5);
    }
    SUBCASE("m = 0 reproduces the L1 constant; conjugate pairing holds") {
        Eigen::VectorXi zero = Eigen::VectorXi::Zero(2);
        Complex c0 = payoff_coefficient(zero, eps, P);
        CHECK(c0.real() == doctest::Approx(payoff_l1_constant(eps)).epsilon(1e-14));
        CHECK(std::abs(c0.imag()) < 1e-14 * c0.real());
        std::mt19937_64 rng(31);
        std::uniform_int_distribution<int> md(-6, 6);
        for (int it = 0; it < 20; ++it) {
            Eigen::VectorXi m(2);
            m << md(rng), md(rng);
            Complex a = payoff_coefficient(m, eps, P);
            Complex b = payoff_coefficient(Eigen::VectorXi(-m), eps, P);
            CHECK(std::abs(b - std::conj(a)) <= 1e-13 * (1.0 + std::abs(a)));
        }
    }
    SUBCASE("quadrature agreement at random lattice points") {
        std::mt19937_64 rng(37);
        std::uniform_int_distribution<int> md(-5, 5);
        for (int it = 0; it < 10; ++it) {
            Eigen::VectorXi m(2);
            m << md(rng), md(rng);
            Complex got = payoff_coefficient(m, eps, P);
            Complex want = oracles::payoff_transform_quad(-2.0 * M_PI * m(0) / P,
                                                          -2.0 * M_PI * m(1) / P, -2.1, 0.75);
            CHECK(rel_err(got, want) < 1e-5);
        }
    }
}

TEST_CASE("payoff L1 constant") {
    SUBCASE("matches quadrature") {
        DampingVector eps;
        eps.eps.resize(2);
        eps.eps << -2.5, 0.5;
        double got = payoff_l1_constant(eps);
        Complex want = oracles::payoff_transform_quad(0.0, 0.0, -2.5, 0.5);
        CHECK(got > 0.0);
        CHECK(std::abs(got - want.real()) < 1e-6 * want.real());
    }
    SUBCASE("blows up toward the cone boundary") {
        double prev = 0.0;
        for (double delta : {0.5, 0.05, 0.005}) {
            DampingVector eps;
            eps.eps.resize(2);
            eps.eps << -1.5 - delta, 0.5;
            double v = payoff_l1_constant(eps);
            CHECK(v > prev);
            prev = v;
        }
    }
    SUBCASE("symmetric under permutations of the short legs") {
        DampingVector a, b;
        a.eps.resize(3);
        b.eps.resize(3);
        a.eps << -3.2, 0.4, 0.7;
        b.eps << -3.2, 0.7, 0.4;
        CHECK(payoff_l1_constant(a) == doctest::Approx(payoff_l1_constant(b)).epsilon(1e-14));
    }
}

TEST_CASE("validation and pole detection") {
    DampingVector bad;
    bad.eps.resize(2);
    bad.eps << -1.2, 0.5; // violates eps_1 < -1 - eps_2
    CHECK_THROWS_AS(bad.validate(), domain_error);

    Eigen::VectorXcd u(2);
    u << Complex(0.3, -2.1), Complex(0.0, 0.0); // -i u_2 = 0: gamma pole
    CHECK_THROWS_AS(hurd_zhou_g(u), pole_error);
}
