#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "esq/quench.hpp"

#include <cmath>
#include <random>

using namespace esq;

TEST_CASE("quench spec validation")
{
    CHECK_THROWS_AS(LipkinQuench(40, 0.9, 1.0), std::invalid_argument);  // kappa >= 4/5
    CHECK_THROWS_AS(LipkinQuench(40, 0.4, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(CoupledTopQuench(5, 0.8, 1.0), std::invalid_argument);  // xi0 <= 1
    CHECK_THROWS_AS(CoupledTopQuench(5, 3.0, -1.0), std::invalid_argument);
}

TEST_CASE("overlap profile is normalized and mean energy is consistent")
{
    auto ws = prepare_quench(LipkinQuench(30, 0.4, 1.0));
    CHECK(std::abs(ws.overlaps.probabilities.sum() - 1.0) < 1e-12);
    CHECK(ws.overlaps.mean_energy == doctest::Approx(post_quench_energy(ws)).epsilon(1e-10));

    auto ct = prepare_quench(CoupledTopQuench(6, 3.0, 1.5));
    CHECK(std::abs(ct.overlaps.probabilities.sum() - 1.0) < 1e-12);
    CHECK(ct.overlaps.mean_energy == doctest::Approx(post_quench_energy(ct)).epsilon(1e-10));
}

TEST_CASE("null quench leaves the ground state invariant")
{
    // eta = 0 means H_f = H_i: all weight on the ground level
    auto ws = prepare_quench(LipkinQuench(24, 0.4, 0.0));
    CHECK(ws.overlaps.probabilities(0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("diagonal ensemble matches a long but finite explicit time average")
{
    auto ws = prepare_quench(LipkinQuench(16, 0.4, 1.0));
    auto de = diagonal_ensemble(ws.overlaps, ws.eig);
    CHECK(std::abs(de.rho.trace().real() - 1.0) < 1e-12);

    // exact finite-T average: rho_T = sum_{n,m} c_n conj(c_m) phi((E_n-E_m)T)
    // with phi(x) = (exp(-ix) - 1)/(-ix), phi(0) = 1
    const double T = 1e7;
    const Eigen::Index d = ws.eig.dim();
    Matrix rho_T = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m) {
            double x = (ws.eig.values(n) - ws.eig.values(m)) * T;
            cxd phi = std::abs(x) < 1e-300
                          ? cxd(1.0, 0.0)
                          : (std::exp(cxd(0.0, -x)) - 1.0) / cxd(0.0, -x);
            rho_T += ws.overlaps.amplitudes(n) * std::conj(ws.overlaps.amplitudes(m)) * phi *
                     (ws.eig.vectors.col(n) * ws.eig.vectors.col(m).adjoint());
        }
    CHECK((de.rho - rho_T).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("degenerate levels keep their coherences")
{
    // synthetic two-fold degenerate system
    EigenSystem eig;
    eig.values = RVector(4);
    eig.values << 0.0, 0.0, 1.0, 2.0;
    eig.vectors = Matrix::Identity(4, 4);
    OverlapProfile ov;
    ov.amplitudes = Vector(4);
    ov.amplitudes << 0.5, 0.5, std::sqrt(0.5), 0.0;
    ov.probabilities = ov.amplitudes.cwiseAbs2();

    auto de = diagonal_ensemble(ov, eig, 1e-9);
    REQUIRE(de.clusters.size() == 3);
    // coherence inside the degenerate pair survives
    CHECK(de.rho(0, 1).real() == doctest::Approx(0.25).epsilon(1e-14));
    // coherence across clusters dephases to zero
    CHECK(std::abs(de.rho(0, 2)) == 0.0);
}

TEST_CASE("evolution at t = 0 reproduces the initial state field")
{
    auto ws = prepare_quench(LipkinQuench(20, 0.4, 1.0));
    auto grid = mandated_grid(ws.j_phase);
    auto field0 = evolved_husimi(ws, 0.0, grid);
    Vector full = ws.iso.embed(ws.psi0);
    auto direct = husimi_field(StateRows::from_state(ws.j_phase, full), grid);
    for (std::size_t i = 0; i < field0.values.size(); ++i)
        CHECK(field0.values[i] == doctest::Approx(direct.values[i]).epsilon(1e-10));
}

TEST_CASE("averaged field is normalized for both models")
{
    auto lp = prepare_quench(LipkinQuench(20, 0.4, 1.0));
    auto f1 = averaged_husimi(lp, mandated_grid(lp.j_phase));
    CHECK(f1.norm_residual < 1e-10);

    auto ct = prepare_quench(CoupledTopQuench(5, 3.0, 1.5));
    auto f2 = averaged_husimi(ct, mandated_grid(ct.j_phase));
    CHECK(f2.norm_residual < 1e-10);
}

TEST_CASE("partial trace identities")
{
    const long j = 2;
    const Eigen::Index d = 2 * j + 1;
    std::mt19937_64 rng(211);
    std::normal_distribution<double> g;

    // random pure state on the pair
    Vector psi(d * d);
    for (Eigen::Index i = 0; i < d * d; ++i) psi(i) = cxd(g(rng), g(rng));
    psi /= psi.norm();
    Matrix rho = psi * psi.adjoint();

    Matrix r1 = partial_trace_first(rho, j);
    Matrix r2 = partial_trace_second(rho, j);
    CHECK(std::abs(r1.trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(r2.trace().real() - 1.0) < 1e-12);
    CHECK(hermiticity_residual(r1) < 1e-14);
    // both reductions of a pure state share their purity
    CHECK((r1 * r1).trace().real() == doctest::Approx((r2 * r2).trace().real()).epsilon(1e-12));

    // a product state reduces to its factors
    Vector a(d), b(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        a(i) = cxd(g(rng), g(rng));
        b(i) = cxd(g(rng), g(rng));
    }
    a /= a.norm();
    b /= b.norm();
    Vector prod(d * d);
    for (Eigen::Index i1 = 0; i1 < d; ++i1)
        for (Eigen::Index i2 = 0; i2 < d; ++i2) prod(i1 * d + i2) = a(i1) * b(i2);
    Matrix rp = prod * prod.adjoint();
    CHECK((partial_trace_first(rp, j) - a * a.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((partial_trace_second(rp, j) - b * b.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coupled-top averaged reduction equals the brute-force partial trace")
{
    auto ws = prepare_quench(CoupledTopQuench(4, 3.0, 1.5));
    const long j = 4;
    auto de = diagonal_ensemble(ws.overlaps, ws.eig);

    // embed the full diagonal-ensemble operator and keep the first spin
    Matrix u = ws.iso.dense();
    Matrix rho_full = u * de.rho * u.adjoint();
    Matrix r2 = partial_trace_first(rho_full, j);
    r2 /= r2.trace().real();

    auto grid = mandated_grid(static_cast<double>(j));
    auto direct = husimi_field(StateRows::from_density(static_cast<double>(j), r2), grid);
    auto averaged = averaged_husimi(ws, grid);
    for (std::size_t i = 0; i < direct.values.size(); i += 7)
        CHECK(averaged.values[i] == doctest::Approx(direct.values[i]).epsilon(1e-8));
}

TEST_CASE("quench mean energy sits at the critical energy for the critical quench")
{
    // Lipkin kappa = 0.4, eta = eta_c = 1: mean post-quench energy at E_c = 0
    auto ws = prepare_quench(LipkinQuench(200, 0.4, 1.0));
    CHECK(std::abs(post_quench_energy(ws) / 200.0) < 0.05);
}
