#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "esq/phase.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace esq;

namespace {
constexpr double kPi = std::numbers::pi;

PhasePoint random_point(std::mt19937_64& rng, double rmax = 1.9)
{
    std::uniform_real_distribution<double> rad(0.0, rmax), ang(0.0, 2.0 * kPi);
    double r = rad(rng), th = ang(rng);
    return {r * std::sin(th), r * std::cos(th)};
}
} // namespace

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly")
{
    std::vector<double> x, w;
    gauss_legendre(6, 0.0, 1.0, x, w);
    for (int k = 0; k <= 11; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(x[i], k);
        CHECK(sum == doctest::Approx(1.0 / (k + 1.0)).epsilon(1e-14));
    }
    // symmetry of nodes about the midpoint
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(x[i] + x[x.size() - 1 - i] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("polar grid weights sum to the disk area 4*pi")
{
    auto grid = build_polar_grid(12, 25);
    CHECK(grid.weight_sum() == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(grid.size() == 12u * 25u);

    // integral of p^2 + q^2 over the disk of radius 2 is 8*pi
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        sum += grid.w[i] * (grid.p[i] * grid.p[i] + grid.q[i] * grid.q[i]);
    CHECK(sum == doctest::Approx(8.0 * kPi).epsilon(1e-13));
}

TEST_CASE("cartesian export grid preserves the total weight")
{
    auto grid = build_cartesian_grid(0.05);
    CHECK(grid.weight_sum() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(grid.p[i] * grid.p[i] + grid.q[i] * grid.q[i] < 4.0);
}

TEST_CASE("grid adequacy rule")
{
    double j = 10.0;
    CHECK(build_polar_grid(11, 42).adequate_for(j));   // j+1, 4j+2
    CHECK_FALSE(build_polar_grid(10, 42).adequate_for(j));
    CHECK_FALSE(build_polar_grid(11, 41).adequate_for(j));
    CHECK(mandated_grid(j)->adequate_for(j));
    CHECK(mandated_grid(j)->n_radial == 22);
    CHECK(mandated_grid(j)->n_angular == 44);
}

TEST_CASE("stereographic map")
{
    CHECK(zeta_from_pq({0.0, 0.0}) == cxd(0.0, 0.0));
    cxd z = zeta_from_pq({0.0, 1.0});
    CHECK(z.real() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(z.imag() == 0.0);
    CHECK_THROWS_AS(zeta_from_pq({2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("coherent states are normalized far into the large-j regime")
{
    std::mt19937_64 rng(11);
    for (double j : {0.5, 10.0, 100.0, 500.0}) {
        for (int rep = 0; rep < 4; ++rep) {
            Vector psi = coherent_state(j, random_point(rng));
            CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
        }
    }
    // the origin maps to the lowest-weight state |j,-j>
    Vector ground = coherent_state(8.0, {0.0, 0.0});
    CHECK(std::abs(ground(0)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pairwise overlaps match the closed form")
{
    std::mt19937_64 rng(23);
    for (double j : {5.0, 60.0}) {
        for (int rep = 0; rep < 8; ++rep) {
            PhasePoint a = random_point(rng), b = random_point(rng);
            cxd za = zeta_from_pq(a), zb = zeta_from_pq(b);
            Vector pa = coherent_state(j, a), pb = coherent_state(j, b);
            double got = std::norm(pa.dot(pb));
            // |<za|zb>|^2 = |1 + conj(za) zb|^(4j) / ((1+|za|^2)(1+|zb|^2))^(2j)
            double expect = std::pow(std::norm(1.0 + std::conj(za) * zb), 2.0 * j) /
                            std::pow((1.0 + std::norm(za)) * (1.0 + std::norm(zb)), 2.0 * j);
            CHECK(got == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("quadrature closure: resolution of identity on the mandated grid")
{
    for (double j : {2.0, 10.5, 25.0}) {
        CHECK(closure_residual(*mandated_grid(j), j) < 1e-12);
    }
    // an inadequate angular count breaks closure
    CHECK(closure_residual(build_polar_grid(12, 11), 10.0) > 1e-6);
}

TEST_CASE("amplitude tables agree with the dense coherent state")
{
    std::mt19937_64 rng(31);
    double j = 40.0;
    PhasePoint pt = random_point(rng);
    auto amp = coherent_amplitudes(j, pt);
    Vector dense = coherent_state(j, pt);
    Vector from_log = amp.vector();
    CHECK((dense - from_log).cwiseAbs().maxCoeff() < 1e-13);
}
