#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cavitynoon/model.hpp"
#include "cavitynoon/specfun.hpp"

using namespace cavitynoon;

TEST_CASE("params validation") {
    CHECK_NOTHROW(ModelParams{1.0, 0.15, 0.1, 0.5}.validate());
    CHECK_THROWS_AS((ModelParams{1.0, 0.15, 0.1, 1.0}.validate()), PhysicsDomainError);
    CHECK_THROWS_AS((ModelParams{1.0, 0.15, 0.1, -1.2}.validate()), PhysicsDomainError);
    CHECK_THROWS_AS((ModelParams{0.0, 0.15, 0.1, 0.0}.validate()), PhysicsDomainError);
    CHECK_THROWS_AS((ModelParams{1.0, -0.1, 0.1, 0.0}.validate()), PhysicsDomainError);
    CHECK(ModelParams{1.0, 0.3, 0.1, 0.5}.adiabatic_flagged());
    CHECK_FALSE(ModelParams{1.0, 0.15, 0.1, 0.5}.adiabatic_flagged());
}

TEST_CASE("lambda_of_block limits") {
    CHECK(lambda_of_block({1.0, 0.2, 0.0, 0.5}, {3, 7}) == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(lambda_of_block({1.0, 0.0, 0.13, 0.5}, {2, 2}) == 0.0);
    // degeneracy point: first Laguerre zero of L_6 mapped through Omega1 = 0.5
    CHECK(std::abs(lambda_of_block({1.0, 0.2, 0.166901, 0.5}, {5, 6})) < 1e-5);
}

TEST_CASE("block_spectrum decoupled limit") {
    const auto s = block_spectrum({1.0, 0.2, 0.0, 0.5}, {0, 0});
    CHECK(s.energy[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.energy[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.energy[2] == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(s.energy[3] == doctest::Approx(-0.2).epsilon(1e-13));
}

TEST_CASE("block_spectrum mixing rows are orthonormal") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> lam(0.0, 0.25), nu(-0.6, 0.6), dl(0.0, 0.3);
    std::uniform_int_distribution<int> qn(0, 12);
    for (int trial = 0; trial < 200; ++trial) {
        const ModelParams p{1.0, dl(rng), lam(rng), nu(rng)};
        const auto s = block_spectrum(p, {qn(rng), qn(rng)});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double dot = 0.0;
                for (int b = 0; b < 4; ++b) dot += s.mixing[i][b] * s.mixing[j][b];
                CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
    }
}

TEST_CASE("block_spectrum solves the explicit 4x4 block") {
    // over the mixing basis order (b0, b1, b2, b3): equal-spin slots carry
    // N - 2 lambda^2/Omega0, mixed-spin slots N - 2 lambda^2/Omega1, and
    // every equal-spin/mixed-spin pair couples through Lambda
    const ModelParams p{1.0, 0.17, 0.11, 0.35};
    const BlockIndex block{2, 3};
    const auto s = block_spectrum(p, block);
    const double d0 = s.cal_n - 2.0 * p.lambda * p.lambda / p.omega0();
    const double d1 = s.cal_n - 2.0 * p.lambda * p.lambda / p.omega1();
    const double L = s.lambda_n;
    const double h[4][4] = {{d0, 0, L, L}, {0, d0, L, L}, {L, L, d1, 0}, {L, L, 0, d1}};
    for (int j = 0; j < 4; ++j)
        for (int col = 0; col < 4; ++col) {
            double hv = 0.0;
            for (int b = 0; b < 4; ++b) hv += h[col][b] * s.mixing[j][b];
            CHECK(hv == doctest::Approx(s.energy[j] * s.mixing[j][col]).epsilon(1e-11));
        }
}

TEST_CASE("energy sum rule and hierarchy") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> lam(0.0, 0.2), nu(0.05, 0.6), dl(0.01, 0.25);
    std::uniform_int_distribution<int> qn(0, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const ModelParams p{1.0, dl(rng), lam(rng), nu(rng)};
        const auto s = block_spectrum(p, {qn(rng), qn(rng)});
        CHECK(s.energy[2] + s.energy[3] ==
              doctest::Approx(2.0 * (s.cal_n - s.gamma_plus)).epsilon(1e-12));
        // paper regime nu > 0: E+ >= E0 >= E1 >= E-
        CHECK(s.energy[2] >= s.energy[0] - 1e-12);
        CHECK(s.energy[0] >= s.energy[1] - 1e-12);
        CHECK(s.energy[1] >= s.energy[3] - 1e-12);
    }
}

TEST_CASE("parity labels for all blocks up to 10") {
    const ModelParams p{1.0, 0.2, 0.15, 0.5};
    for (int n0 = 0; n0 <= 10; ++n0)
        for (int n1 = 0; n1 <= 10; ++n1) {
            const auto s = block_spectrum(p, {n0, n1});
            const int even = ((n0 + n1) % 2 == 0) ? 1 : -1;
            CHECK(s.parity[0] == even);
            CHECK(s.parity[1] == even);
            CHECK(s.parity[2] == -even);
            CHECK(s.parity[3] == -even);
        }
}

TEST_CASE("degeneracy couplings reproduce the quoted values") {
    const ModelParams p{1.0, 0.2, 0.0, 0.5};
    const auto has_near = [](const std::vector<double>& v, double x) {
        for (double y : v)
            if (std::abs(y - x) < 1e-5) return true;
        return false;
    };
    CHECK(has_near(degeneracy_couplings(p, {5, 6}, 0.2), 0.166901));
    CHECK(has_near(degeneracy_couplings(p, {6, 9}, 0.2), 0.137986));
    CHECK(has_near(degeneracy_couplings(p, {8, 8}, 0.2), 0.145894));
    CHECK(degeneracy_couplings(p, {0, 0}, 10.0).empty());
}

TEST_CASE("degeneracy couplings annihilate Lambda") {
    ModelParams p{1.0, 0.2, 0.0, 0.5};
    for (const BlockIndex block : {BlockIndex{5, 6}, BlockIndex{6, 9}, BlockIndex{8, 8}}) {
        const auto couplings = degeneracy_couplings(p, block, 0.2);
        CHECK(!couplings.empty());
        for (double lam : couplings) {
            ModelParams q = p;
            q.lambda = lam;
            CHECK(std::abs(lambda_of_block(q, block)) < 1e-10);
        }
    }
}

TEST_CASE("pairwise energy degeneracy at the Laguerre zeros") {
    const ModelParams p{1.0, 0.2, 0.166901, 0.5};
    const auto s = block_spectrum(p, {5, 6});
    CHECK(std::abs(s.energy[2] - s.energy[0]) < 1e-4);
    CHECK(std::abs(s.energy[3] - s.energy[1]) < 1e-4);
}

TEST_CASE("energy_sweep rows") {
    const ModelParams p{1.0, 0.2, 0.0, 0.5};
    std::vector<double> grid;
    for (int i = 0; i <= 80; ++i) grid.push_back(0.2 * i / 80.0);
    const auto rows = energy_sweep(p, {5, 6}, grid);
    REQUIRE(rows.size() == grid.size());
    // lambda = 0 row: E+ - E- = 2 delta
    CHECK(rows[0].energy[2] - rows[0].energy[3] == doctest::Approx(0.4).epsilon(1e-12));
    for (const auto& r : rows) {
        CHECK(r.energy[2] >= r.energy[0] - 1e-12);
        CHECK(r.energy[0] >= r.energy[1] - 1e-12);
        CHECK(r.energy[1] >= r.energy[3] - 1e-12);
    }
    bool meets = false;
    for (const auto& r : rows)
        if (std::abs(r.lambda - 0.1669) < 0.003 && std::abs(r.energy[2] - r.energy[0]) < 1e-3)
            meets = true;
    CHECK(meets);
}
