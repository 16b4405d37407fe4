#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "ising/problem.hpp"

namespace ising {

// Largest instance the exhaustive oracle will accept (~16.8M states).
inline constexpr int kOracleMaxSpins = 24;

enum class PlantMode { Mattis, FrustratedLoops, RandomVerified };

// Request exceeds what exhaustive enumeration can verify.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Periodic L x L lattice, degree 4, coupling magnitudes in {1, 2}.
struct SquareLatticeSpec {
    int L = 4;
    std::uint64_t seed = 0;
    int num_loops = 0;  // frustrated-loops only; 0 means L*L/2
};

// Random c-regular graph with i.i.d. Gaussian(0,1) couplings.
// c = N-1 is the fully-connected Sherrington-Kirkpatrick limit.
struct VianaBraySpec {
    int n = 128;
    int c = 16;
    std::uint64_t seed = 0;
    bool verify = false;  // oracle-annotate ground energy (n <= 24 only)
};

IsingProblem gen_planted_square(const SquareLatticeSpec& spec, PlantMode mode);
IsingProblem gen_viana_bray(const VianaBraySpec& spec);

/// Exact ground state by Gray-code enumeration with incremental energy
/// updates. Ties resolve to the lexicographically smallest configuration
/// (+1 ordered before -1, spin 0 most significant). Throws for n > 24.
std::pair<double, SpinConfig> brute_force_ground_state(const IsingProblem& problem);

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

IsingProblem read_instance(const std::string& path);
void write_instance(const IsingProblem& problem, const std::string& path);

}  // namespace ising
