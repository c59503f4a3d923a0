#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "esq/eig.hpp"
#include "esq/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace esq;

TEST_CASE("lipkin spec validation")
{
    CHECK_THROWS_AS(LipkinSpec(41, 0.4), std::invalid_argument);  // odd N
    CHECK_THROWS_AS(LipkinSpec(40, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(LipkinSpec(0, 0.4), std::invalid_argument);
    CHECK(LipkinSpec(40, 0.4).j() == 20.0);
}

TEST_CASE("lipkin block structure at N = 40")
{
    LipkinSpec spec(40, 0.4);
    auto even = lipkin_hamiltonian(spec, LipkinSector::even);
    auto odd = lipkin_hamiltonian(spec, LipkinSector::odd);
    auto full = lipkin_hamiltonian(spec, LipkinSector::full);
    CHECK(even.mat.rows() == 21);
    CHECK(odd.mat.rows() == 20);
    CHECK(full.mat.rows() == 41);
    CHECK(hermiticity_residual(full.mat) < 1e-14);

    // block energies together reproduce the full spectrum
    auto es_full = eigensolve(full.mat);
    std::vector<double> blocks;
    for (auto* h : {&even, &odd}) {
        auto es = eigensolve(h->mat);
        blocks.insert(blocks.end(), es.values.data(), es.values.data() + es.values.size());
    }
    std::sort(blocks.begin(), blocks.end());
    for (Eigen::Index i = 0; i < es_full.values.size(); ++i)
        CHECK(blocks[static_cast<std::size_t>(i)] ==
              doctest::Approx(es_full.values(i)).epsilon(1e-10));

    // ground state lives in the even sector
    auto es_even = eigensolve(even.mat);
    CHECK(es_even.values(0) == doctest::Approx(es_full.values(0)).epsilon(1e-12));
}

TEST_CASE("lipkin kappa = 1 limit is the pure field term")
{
    LipkinSpec spec(12, 1.0);
    auto es = eigensolve(lipkin_hamiltonian(spec, LipkinSector::full).mat);
    // H = Jz + N/2 has spectrum {0, 1, ..., N}
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        CHECK(es.values(i) == doctest::Approx(static_cast<double>(i)).epsilon(1e-12));
}

TEST_CASE("coupled top V++ dimension and direct assembly")
{
    CoupledTopSpec spec(7, 3.0);
    Matrix vpp = coupled_top_sector_matrix(spec, 1, 1);
    CHECK(vpp.rows() == 64);  // (j+1)^2
    CHECK(hermiticity_residual(vpp) < 1e-14);

    // direct sparse assembly agrees with projecting the full tensor operator
    TensorBasis tb{SpinBasis(7.0), SpinBasis(7.0)};
    auto iso = coupled_top_sector_isometry(spec, 1, 1);
    Matrix full = coupled_top_hamiltonian(spec, CtSector::full).mat;
    Matrix projected = iso.project_operator(full);
    CHECK((vpp - projected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("coupled top xi = 0 limit")
{
    CoupledTopSpec spec(3, 0.0);
    auto es = eigensolve(coupled_top_hamiltonian(spec, CtSector::full).mat);
    // H = J1z + J2z: integer spectrum from -2j to 2j
    CHECK(es.values(0) == doctest::Approx(-6.0).epsilon(1e-14));
    CHECK(es.values(es.values.size() - 1) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("all four coupled-top sectors recover the full spectrum")
{
    CoupledTopSpec spec(4, 2.0);
    std::vector<double> pieces;
    for (int perm : {1, -1})
        for (int par : {1, -1}) {
            Matrix h = coupled_top_sector_matrix(spec, par, perm);
            auto es = eigensolve(h);
            pieces.insert(pieces.end(), es.values.data(), es.values.data() + es.values.size());
        }
    std::sort(pieces.begin(), pieces.end());
    auto es_full = eigensolve(coupled_top_hamiltonian(spec, CtSector::full).mat);
    REQUIRE(static_cast<Eigen::Index>(pieces.size()) == es_full.values.size());
    for (Eigen::Index i = 0; i < es_full.values.size(); ++i)
        CHECK(pieces[static_cast<std::size_t>(i)] ==
              doctest::Approx(es_full.values(i)).epsilon(1e-9));
}

TEST_CASE("density of states: counts, normalization, validation")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> levels(4000);
    for (auto& e : levels) e = dist(rng);

    auto hist = density_of_states(levels, 1.0, 1.0);
    CHECK(hist.level_count == 4000);
    // integral of density over the axis recovers the level count
    double integral = 0.0;
    for (std::size_t i = 0; i < hist.density.size(); ++i)
        integral += hist.density[i] * (hist.bin_edges[i + 1] - hist.bin_edges[i]);
    CHECK(integral * hist.rescale_norm == doctest::Approx(4000.0).epsilon(1e-6));

    // flat sample: central density close to N/span
    std::size_t mid = hist.density.size() / 2;
    CHECK(hist.density[mid] == doctest::Approx(2000.0).epsilon(0.1));

    CHECK_THROWS_AS(density_of_states(std::vector<double>(50, 0.0), 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(density_of_states(levels, 1.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("dos derivative of a linear ramp is constant")
{
    // triangular density via quadratic-spaced levels
    std::vector<double> levels;
    for (int i = 0; i < 2000; ++i) {
        double x = static_cast<double>(i) / 1999.0;
        levels.push_back(std::sqrt(x));  // density grows linearly on [0,1]
    }
    auto hist = density_of_states(levels, 1.0, 1.0, 40);
    auto deriv = dos_derivative(hist);
    // interior derivative approximately 2 * count (density = 2 N E)
    std::size_t mid = deriv.size() / 2;
    CHECK(deriv[mid] == doctest::Approx(2.0 * 2000.0).epsilon(0.15));
}
