#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ising/instances.hpp"
#include "ising/problem.hpp"

using namespace ising;

namespace {

SpinConfig config_from(std::initializer_list<int> spins) {
    SpinConfig c;
    for (int s : spins) c.spins.push_back(static_cast<int8_t>(s));
    return c;
}

IsingProblem random_problem(int n, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    std::vector<Coupling> couplings;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::uniform_real_distribution<double>(0, 1)(rng) < density)
                couplings.push_back({i, j, uni(rng)});
    return IsingProblem(n, couplings);
}

SpinConfig random_spins(int n, std::mt19937_64& rng) {
    SpinConfig c;
    for (int i = 0; i < n; ++i) c.spins.push_back((rng() & 1) ? 1 : -1);
    return c;
}

}  // namespace

TEST_CASE("ferromagnetic pair energy") {
    IsingProblem p(2, {{0, 1, 1.0}});
    CHECK(energy(p, config_from({1, 1})) == -1.0);
    CHECK(energy(p, config_from({1, -1})) == 1.0);
}

TEST_CASE("antiferromagnetic pair satisfied") {
    IsingProblem p(2, {{0, 1, -1.0}});
    CHECK(energy(p, config_from({1, -1})) == -1.0);
    CHECK(energy(p, config_from({1, 1})) == 1.0);
}

TEST_CASE("planted L=4 instance: recorded config evaluates to recorded ground energy") {
    auto p = gen_planted_square({4, 7, 0}, PlantMode::Mattis);
    REQUIRE(p.ground_energy());
    const std::string planted = p.metadata_value("planted");
    REQUIRE(planted.size() == 16);
    SpinConfig star;
    for (char ch : planted) star.spins.push_back(ch == '+' ? 1 : -1);
    CHECK(energy(p, star) == *p.ground_energy());
    // independent oracle over all 2^16 configurations agrees
    auto [oracle_e, oracle_config] = brute_force_ground_state(p);
    CHECK(oracle_e == *p.ground_energy());
}

TEST_CASE("energy dimension mismatch throws") {
    IsingProblem p(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(energy(p, config_from({1, 1, 1})), std::invalid_argument);
}

TEST_CASE("readout: sign kind") {
    std::vector<double> x = {0.3, -0.2};
    auto c = readout(x, ReadoutKind::Sign);
    CHECK(c == config_from({1, -1}));
}

TEST_CASE("readout: sign(0) resolves to +1") {
    std::vector<double> x = {0.0, -0.0};
    auto c = readout(x, ReadoutKind::Sign);
    CHECK(c == config_from({1, 1}));
}

TEST_CASE("readout: phase kind uses cos") {
    std::vector<double> x = {0.0, std::numbers::pi};
    auto c = readout(x, ReadoutKind::Phase);
    CHECK(c == config_from({1, -1}));
}

TEST_CASE("readout: real-part kind on packed complex state") {
    // psi = (1+0.2i, -0.5+0.1i) packed as [re..., im...]
    std::vector<double> state = {1.0, -0.5, 0.2, 0.1};
    auto c = readout(state, ReadoutKind::RealPart);
    CHECK(c == config_from({1, -1}));
}

TEST_CASE("validate: well-formed instance has no violations") {
    auto p = gen_planted_square({4, 1, 0}, PlantMode::Mattis);
    CHECK(validate(p).empty());
}

TEST_CASE("validate: self-coupling reported") {
    IsingProblem p(4, {{3, 3, 1.0}});
    auto v = validate(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("self-coupling") != std::string::npos);
}

TEST_CASE("validate: duplicate pair reported") {
    IsingProblem p(4, {{0, 1, 1.0}, {0, 1, 2.0}});
    auto v = validate(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("duplicate") != std::string::npos);
}

TEST_CASE("validate: out-of-range index reported") {
    IsingProblem p(2, {{0, 5, 1.0}});
    auto v = validate(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("out of range") != std::string::npos);
}

TEST_CASE("gauge invariance: flipping a spin and negating incident couplings") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 8);
        auto p = random_problem(n, 0.6, rng);
        auto config = random_spins(n, rng);
        const int k = static_cast<int>(rng() % n);
        const double before = energy(p, config);

        auto couplings = p.couplings();
        for (auto& c : couplings)
            if (c.i == k || c.j == k) c.value = -c.value;
        IsingProblem gauged(n, couplings);
        auto flipped = config;
        flipped.spins[k] = static_cast<int8_t>(-flipped.spins[k]);
        CHECK(energy(gauged, flipped) == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("global flip symmetry") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 10);
        auto p = random_problem(n, 0.5, rng);
        auto config = random_spins(n, rng);
        auto negated = config;
        for (auto& s : negated.spins) s = static_cast<int8_t>(-s);
        CHECK(energy(p, config) == energy(p, negated));
    }
}

TEST_CASE("no config beats an oracle-set ground energy") {
    auto p = gen_planted_square({3, 5, 0}, PlantMode::RandomVerified);
    REQUIRE(p.ground_energy());
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        auto config = random_spins(p.size(), rng);
        CHECK(energy(p, config) >= *p.ground_energy());
    }
}

TEST_CASE("sparse and dense field paths agree") {
    std::mt19937_64 rng(3);
    auto dense = random_problem(12, 0.9, rng);   // dense fallback active
    std::vector<double> x(12), out_a(12), out_b(12);
    for (auto& v : x) v = std::uniform_real_distribution<double>(-1, 1)(rng);
    dense.field(x, out_a);
    // brute-force reference
    for (int l = 0; l < 12; ++l) {
        double acc = 0.0;
        for (const auto& c : dense.couplings()) {
            if (c.i == l) acc += c.value * x[c.j];
            if (c.j == l) acc += c.value * x[c.i];
        }
        out_b[l] = acc;
    }
    for (int l = 0; l < 12; ++l) CHECK(out_a[l] == doctest::Approx(out_b[l]).epsilon(1e-12));
}
