#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ising {

// One upper-triangular coupling entry (i < j).
struct Coupling {
    int i = 0;
    int j = 0;
    double value = 0.0;

    friend bool operator==(const Coupling&, const Coupling&) = default;
};

// Binary spin configuration, entries are exactly +1 or -1.
struct SpinConfig {
    std::vector<int8_t> spins;

    std::size_t size() const { return spins.size(); }
    friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

enum class ReadoutKind {
    Sign,      // sign of a real amplitude
    Phase,     // sign of cos(x), for phase oscillators
    RealPart,  // sign of Re(psi), state packed as [re..., im...]
};

/// Zero-field Ising problem: H = -1/2 sum_{l,m} J_lm s_l s_m.
///
/// Couplings are stored once as (i < j) entries plus symmetric adjacency
/// rows for O(degree) field evaluation. Instances denser than 50% also
/// keep a dense matrix and use it for field products.
/// Immutable after construction apart from ground-energy annotation.
class IsingProblem {
public:
    IsingProblem() = default;
    IsingProblem(int n, std::vector<Coupling> couplings);

    int size() const { return n_; }
    const std::vector<Coupling>& couplings() const { return couplings_; }

    std::span<const std::pair<int, double>> neighbors(int l) const;

    // out[l] = sum_m J_lm x[m]
    void field(std::span<const double> x, std::span<double> out) const;
    double local_field(int l, const SpinConfig& config) const;

    std::optional<double> ground_energy() const { return ground_energy_; }
    void set_ground_energy(double e) { ground_energy_ = e; }

    const std::vector<std::pair<std::string, std::string>>& metadata() const {
        return metadata_;
    }
    void add_metadata(std::string key, std::string value);
    std::string metadata_value(const std::string& key) const;

    bool has_integer_couplings() const;
    // max_l sum_m |J_lm|, used by the gain-dissipative parameter formulas
    double max_row_abs_sum() const;
    // RMS of the off-diagonal coupling-matrix entries, zeros included
    double coupling_stddev() const;
    // tolerance for "energy reached the optimum" comparisons
    double energy_tolerance() const;

private:
    int n_ = 0;
    std::vector<Coupling> couplings_;
    std::vector<std::pair<int, double>> adjacency_;   // flattened rows
    std::vector<int> row_offsets_;                    // n_+1 offsets
    std::vector<double> dense_;                       // n_*n_ when dense
    bool dense_mode_ = false;
    std::optional<double> ground_energy_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

double energy(const IsingProblem& problem, const SpinConfig& config);

SpinConfig readout(std::span<const double> state, ReadoutKind kind);

/// Invariant check; returns human-readable violations instead of throwing.
std::vector<std::string> validate(const IsingProblem& problem);

}  // namespace ising
