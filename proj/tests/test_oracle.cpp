#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cavitynoon/dynamics.hpp"
#include "cavitynoon/model.hpp"
#include "cavitynoon/oracle.hpp"

using namespace cavitynoon;
using namespace cavitynoon::oracle;

TEST_CASE("truncation caps") {
    CHECK(FockTruncation{20}.dimension() == 1764);
    CHECK_NOTHROW(FockTruncation{20}.validate());
    CHECK_THROWS_AS(FockTruncation{130}.validate(), std::length_error);
}

TEST_CASE("hamiltonian is exactly symmetric") {
    const ModelParams p{1.0, 0.15, 0.1, 0.5};
    const FockTruncation t{6};
    const auto h = build_hamiltonian(p, t);
    const std::size_t dim = static_cast<std::size_t>(t.dimension());
    double asym = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            asym = std::max(asym, std::abs(h[i * dim + j] - h[j * dim + i]));
    CHECK(asym == 0.0);
}

TEST_CASE("fully decoupled spectrum") {
    // lambda = nu = 0: eigenvalues are omega (n0+n1) +- delta/2 +- delta/2
    const ModelParams p{1.0, 0.15, 0.0, 0.0};
    const FockTruncation t{3};
    const auto h = build_hamiltonian(p, t);
    std::vector<double> values, vectors;
    linalg::symmetric_eigen(t.dimension(), h, values, vectors);
    std::vector<double> expected;
    for (int n0 = 0; n0 <= 3; ++n0)
        for (int n1 = 0; n1 <= 3; ++n1)
            for (double e0 : {-0.075, 0.075})
                for (double e1 : {-0.075, 0.075}) expected.push_back(n0 + n1 + e0 + e1);
    std::sort(expected.begin(), expected.end());
    REQUIRE(values.size() == expected.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        CHECK(values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("lambda = 0 spectrum contains every block energy") {
    // sectors with total photon number <= the cutoff are truncation-exact
    const ModelParams p{1.0, 0.15, 0.0, 0.5};
    const int cutoff = 6;
    const auto h = build_hamiltonian(p, FockTruncation{cutoff});
    std::vector<double> values, vectors;
    linalg::symmetric_eigen(FockTruncation{cutoff}.dimension(), h, values, vectors);
    for (int b0 = 0; b0 <= cutoff; ++b0)
        for (int b1 = 0; b1 + b0 <= cutoff; ++b1) {
            const auto s = block_spectrum(p, {b0, b1});
            for (double e : s.energy) {
                const auto it = std::lower_bound(values.begin(), values.end(), e - 1e-6);
                REQUIRE(it != values.end());
                const double nearest = (it == values.begin())
                                           ? *it
                                           : (std::abs(*it - e) < std::abs(*(it - 1) - e) ? *it : *(it - 1));
                CHECK(nearest == doctest::Approx(e).epsilon(1e-10));
            }
        }
}

TEST_CASE("parity commutes with the hamiltonian at every truncation") {
    const ModelParams p{1.0, 0.15, 0.1, 0.5};
    CHECK(parity_commutator_norm(p, FockTruncation{6}) < 1e-12);
    CHECK(parity_commutator_norm(p, FockTruncation{10}) < 1e-12);
    const ModelParams decoupled{1.0, 0.15, 0.0, 0.5};
    CHECK(parity_commutator_norm(decoupled, FockTruncation{6}) < 1e-14);
}

TEST_CASE("spectral evolution conserves energy, norm and parity") {
    const ModelParams p{1.0, 0.15, 0.1, 0.5};
    const InitialNoonState s{1, {0.0, 1.0}};
    const FockTruncation trunc{10};
    const ExactEvolution exact(s, p, trunc);
    const double parity0 = exact.parity_expectation(0.0);
    const double energy0 = exact.energy_expectation();

    // <psi(t)|H|psi(t)> recomputed from the evolved vector and the raw matrix
    const auto h = build_hamiltonian(p, trunc);
    const std::size_t dim = static_cast<std::size_t>(trunc.dimension());
    const auto direct_energy = [&](double t) {
        const auto psi = exact.state_at(t);
        std::complex<double> acc{};
        for (std::size_t i = 0; i < dim; ++i) {
            std::complex<double> row{};
            for (std::size_t j = 0; j < dim; ++j) row += h[i * dim + j] * psi[j];
            acc += std::conj(psi[i]) * row;
        }
        return acc.real();
    };

    for (double t : {0.0, 7.0, 40.0, 90.0, 400.0}) {
        CHECK(std::abs(exact.norm_at(t) - 1.0) < 1e-12);
        CHECK(std::abs(exact.parity_expectation(t) - parity0) < 1e-10);
        CHECK(std::abs(direct_energy(t) - energy0) < 1e-10);
    }
}

TEST_CASE("exact reduced density at t = 0") {
    const ModelParams p{1.0, 0.15, 0.1, 0.5};
    const InitialNoonState s{2, {0.0, 0.0}};
    const ExactEvolution exact(s, p, FockTruncation{12});
    const auto rho = exact.reduced_density(0.0);
    CHECK(rho.rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != 0 || j != 0) CHECK(std::abs(rho.rho(i, j)) < 1e-14);
    CHECK(rho.trace_real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(exact.reliable_at(50.0));
}

TEST_CASE("leakage margin precondition") {
    const ModelParams p{1.0, 0.15, 0.1, 0.5};
    CHECK_THROWS_AS(exact_reduced_density({5, {0.0, 0.0}}, p, FockTruncation{12}, 1.0),
                    std::length_error);
    CHECK_NOTHROW(exact_reduced_density({2, {0.0, 0.0}}, p, FockTruncation{12}, 1.0));
}

TEST_CASE("ground state within 2% of the adiabatic minimum") {
    const ModelParams p{1.0, 0.15, 0.1, 0.5};
    const InitialNoonState s{1, {0.0, 0.0}};
    const ExactEvolution exact(s, p, FockTruncation{14});
    double adiabatic_min = 0.0;
    for (int b0 = 0; b0 <= 3; ++b0)
        for (int b1 = 0; b1 <= 3; ++b1)
            adiabatic_min = std::min(adiabatic_min, block_spectrum(p, {b0, b1}).energy[3]);
    const double exact_min = exact.eigenvalues().front();
    CHECK(std::abs(exact_min - adiabatic_min) < 0.02 * std::abs(exact_min));
}

TEST_CASE("adiabatic path tracks the exact dynamics at moderate times") {
    // regression guard on the approximation quality; the spec-level 0.05
    // bound over [0, 100] belongs to the acceptance suite
    const ModelParams p{1.0, 0.15, 0.1, 0.5};
    const InitialNoonState s{1, {0.0, 0.0}};
    const ExactEvolution exact(s, p, FockTruncation{10});
    const NoonSimulator sim(s, p, 1e-12);
    for (double t : {0.0, 2.0, 5.0, 12.0, 25.0}) {
        const auto a = sim.reduced_density(t);
        const auto e = exact.reduced_density(t);
        double dev = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) dev = std::max(dev, std::abs(a.rho(i, j) - e.rho(i, j)));
        CHECK(dev < 0.06);
    }
}
