#include "ising/instances.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ising {
namespace {

struct Edge {
    int i, j;
    bool operator<(const Edge& other) const {
        return std::tie(i, j) < std::tie(other.i, other.j);
    }
};

// Periodic square-lattice edge list: right and down neighbor per site.
// L = 2 wraparounds collapse onto the same pair; those are merged later.
std::vector<Edge> lattice_edges(int L) {
    std::vector<Edge> edges;
    edges.reserve(2 * L * L);
    auto idx = [L](int r, int c) { return ((r % L + L) % L) * L + ((c % L + L) % L); };
    for (int r = 0; r < L; ++r) {
        for (int c = 0; c < L; ++c) {
            int a = idx(r, c);
            int right = idx(r, c + 1);
            int down = idx(r + 1, c);
            edges.push_back({std::min(a, right), std::max(a, right)});
            edges.push_back({std::min(a, down), std::max(a, down)});
        }
    }
    return edges;
}

std::string config_string(const std::vector<int8_t>& spins) {
    std::string s;
    s.reserve(spins.size());
    for (int8_t v : spins) s.push_back(v > 0 ? '+' : '-');
    return s;
}

std::vector<Coupling> merge_edges(const std::map<std::pair<int, int>, double>& acc) {
    std::vector<Coupling> couplings;
    couplings.reserve(acc.size());
    for (const auto& [key, value] : acc)
        if (value != 0.0) couplings.push_back({key.first, key.second, value});
    return couplings;
}

std::vector<int8_t> random_config(int n, std::mt19937_64& rng) {
    std::vector<int8_t> spins(n);
    for (auto& s : spins) s = (rng() & 1) ? int8_t{1} : int8_t{-1};
    return spins;
}

// Random c-regular simple graph: a circulant graph randomized by
// degree-preserving double-edge swaps. Dense targets (c > (n-1)/2) are
// built as the complement of an (n-1-c)-regular graph.
std::vector<Edge> regular_graph(int n, int c, std::mt19937_64& rng) {
    if (c == 0) return {};
    if (c > (n - 1) / 2) {
        std::vector<Edge> sparse = regular_graph(n, n - 1 - c, rng);
        std::vector<char> present(static_cast<std::size_t>(n) * n, 0);
        for (const auto& e : sparse) present[static_cast<std::size_t>(e.i) * n + e.j] = 1;
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!present[static_cast<std::size_t>(i) * n + j]) edges.push_back({i, j});
        return edges;
    }

    std::set<std::pair<int, int>> present;
    auto add = [&present](int a, int b) {
        present.insert({std::min(a, b), std::max(a, b)});
    };
    // ring offsets 1..c/2; odd c forces even n, add the antipodal matching
    for (int k = 1; k <= c / 2; ++k)
        for (int v = 0; v < n; ++v) add(v, (v + k) % n);
    if (c % 2 == 1)
        for (int v = 0; v < n / 2; ++v) add(v, v + n / 2);

    std::vector<Edge> edges;
    edges.reserve(present.size());
    for (const auto& [i, j] : present) edges.push_back({i, j});

    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    const std::size_t swaps = 20 * edges.size();
    for (std::size_t s = 0; s < swaps; ++s) {
        const std::size_t ka = pick(rng), kb = pick(rng);
        if (ka == kb) continue;
        Edge a = edges[ka], b = edges[kb];
        if (rng() & 1) std::swap(b.i, b.j);
        // rewire (a.i,a.j),(b.i,b.j) -> (a.i,b.i),(a.j,b.j)
        if (a.i == b.i || a.j == b.j) continue;
        const std::pair<int, int> n1{std::min(a.i, b.i), std::max(a.i, b.i)};
        const std::pair<int, int> n2{std::min(a.j, b.j), std::max(a.j, b.j)};
        if (n1 == n2 || present.count(n1) || present.count(n2)) continue;
        present.erase({edges[ka].i, edges[ka].j});
        present.erase({edges[kb].i, edges[kb].j});
        present.insert(n1);
        present.insert(n2);
        edges[ka] = {n1.first, n1.second};
        edges[kb] = {n2.first, n2.second};
    }
    return edges;
}

}  // namespace

IsingProblem gen_planted_square(const SquareLatticeSpec& spec, PlantMode mode) {
    if (spec.L < 2) throw std::invalid_argument("gen_planted_square: L must be >= 2");
    const int n = spec.L * spec.L;
    std::mt19937_64 rng(spec.seed);
    std::map<std::pair<int, int>, double> acc;
    std::optional<double> ground;
    std::string planted;

    const char* mode_name = "";
    switch (mode) {
        case PlantMode::Mattis: {
            mode_name = "mattis";
            auto star = random_config(n, rng);
            double total_mag = 0.0;
            for (const auto& e : lattice_edges(spec.L)) {
                double mag = (rng() & 1) ? 2.0 : 1.0;
                total_mag += mag;
                acc[{e.i, e.j}] += mag * star[e.i] * star[e.j];
            }
            ground = -total_mag;
            planted = config_string(star);
            break;
        }
        case PlantMode::FrustratedLoops: {
            mode_name = "frustrated-loops";
            auto star = random_config(n, rng);
            const int L = spec.L;
            const int loops = spec.num_loops > 0 ? spec.num_loops : n / 2;
            // elementary plaquettes, chosen distinct while supply lasts
            std::vector<int> plaq(n);
            for (int k = 0; k < n; ++k) plaq[k] = k;
            std::shuffle(plaq.begin(), plaq.end(), rng);
            auto idx = [L](int r, int c) { return (r % L) * L + (c % L); };
            for (int k = 0; k < loops; ++k) {
                int p = (k < n) ? plaq[k]
                                : plaq[std::uniform_int_distribution<int>(0, n - 1)(rng)];
                int r = p / L, c = p % L;
                int v[4] = {idx(r, c), idx(r, c + 1), idx(r + 1, c + 1), idx(r + 1, c)};
                int flipped = std::uniform_int_distribution<int>(0, 3)(rng);
                for (int e = 0; e < 4; ++e) {
                    int a = v[e], b = v[(e + 1) % 4];
                    double coeff = (e == flipped) ? -1.0 : 1.0;
                    int i = std::min(a, b), j = std::max(a, b);
                    acc[{i, j}] += coeff * star[a] * star[b];
                }
            }
            // each length-4 loop is frustrated with one unit violation
            ground = -2.0 * loops;
            planted = config_string(star);
            break;
        }
        case PlantMode::RandomVerified: {
            mode_name = "random-verified";
            if (n > kOracleMaxSpins)
                throw InfeasibleError(
                    "gen_planted_square: random-verified needs N <= 24 for the oracle");
            for (const auto& e : lattice_edges(spec.L)) {
                double mag = (rng() & 1) ? 2.0 : 1.0;
                double sign = (rng() & 1) ? 1.0 : -1.0;
                acc[{e.i, e.j}] += sign * mag;
            }
            break;
        }
    }

    IsingProblem problem(n, merge_edges(acc));
    if (mode == PlantMode::RandomVerified) {
        auto [e, config] = brute_force_ground_state(problem);
        ground = e;
        planted = config_string(config.spins);
    }
    problem.set_ground_energy(*ground);
    problem.add_metadata("generator", std::string("square-") + mode_name);
    problem.add_metadata("L", std::to_string(spec.L));
    problem.add_metadata("seed", std::to_string(spec.seed));
    problem.add_metadata("planted", planted);
    return problem;
}

IsingProblem gen_viana_bray(const VianaBraySpec& spec) {
    if (spec.c < 1 || spec.c > spec.n - 1)
        throw InfeasibleError("gen_viana_bray: need 1 <= c <= N-1");
    if ((static_cast<long long>(spec.c) * spec.n) % 2 != 0)
        throw InfeasibleError("gen_viana_bray: c*N must be even");

    std::mt19937_64 rng(spec.seed);
    auto edges = regular_graph(spec.n, spec.c, rng);
    std::sort(edges.begin(), edges.end());
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Coupling> couplings;
    couplings.reserve(edges.size());
    for (const auto& e : edges) couplings.push_back({e.i, e.j, gauss(rng)});

    IsingProblem problem(spec.n, std::move(couplings));
    problem.add_metadata("generator", "viana-bray");
    problem.add_metadata("N", std::to_string(spec.n));
    problem.add_metadata("c", std::to_string(spec.c));
    problem.add_metadata("seed", std::to_string(spec.seed));
    if (spec.verify) {
        auto [e, config] = brute_force_ground_state(problem);
        problem.set_ground_energy(e);
    }
    return problem;
}

std::pair<double, SpinConfig> brute_force_ground_state(const IsingProblem& problem) {
    const int n = problem.size();
    if (n > kOracleMaxSpins)
        throw InfeasibleError("brute_force_ground_state: N > 24 is infeasible");
    if (n == 0) return {0.0, SpinConfig{}};

    SpinConfig current{std::vector<int8_t>(n, 1)};
    double e = energy(problem, current);
    SpinConfig best = current;
    double best_e = e;

    auto lex_less = [](const SpinConfig& a, const SpinConfig& b) {
        // +1 sorts before -1
        for (std::size_t k = 0; k < a.spins.size(); ++k)
            if (a.spins[k] != b.spins[k]) return a.spins[k] > b.spins[k];
        return false;
    };

    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int b = std::countr_zero(k);
        e += 2.0 * current.spins[b] * problem.local_field(b, current);
        current.spins[b] = static_cast<int8_t>(-current.spins[b]);
        if (e < best_e || (e == best_e && lex_less(current, best))) {
            best_e = e;
            best = current;
        }
    }
    // clean accumulated incremental rounding
    return {energy(problem, best), best};
}

IsingProblem read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_instance: cannot open " + path);

    std::optional<double> ground;
    std::vector<std::pair<std::string, std::string>> meta;
    std::string line;
    int lineno = 0;
    int n = -1, m = -1;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
                return s;
            };
            body = trim(body);
            if (body.rfind("ground_energy:", 0) == 0) {
                std::string v = trim(body.substr(14));
                try {
                    std::size_t pos = 0;
                    ground = std::stod(v, &pos);
                    if (pos != v.size()) throw std::invalid_argument(v);
                } catch (const std::exception&) {
                    throw ParseError("malformed ground_energy directive", lineno);
                }
            } else if (body.rfind("meta:", 0) == 0) {
                std::string kv = trim(body.substr(5));
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw ParseError("malformed meta directive (expected key=value)", lineno);
                meta.emplace_back(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
            }
            continue;
        }
        std::istringstream hs(line);
        if (!(hs >> n >> m) || n < 0 || m < 0)
            throw ParseError("malformed header (expected '<N> <M>')", lineno);
        break;
    }
    if (n < 0) throw ParseError("missing header line", lineno);

    std::vector<Coupling> couplings;
    couplings.reserve(m);
    while (static_cast<int>(couplings.size()) < m) {
        if (!std::getline(in, line))
            throw ParseError("unexpected end of file, expected " + std::to_string(m) +
                                 " couplings",
                             lineno);
        ++lineno;
        if (line.empty()) continue;
        std::istringstream cs(line);
        int i, j;
        double v;
        if (!(cs >> i >> j >> v))
            throw ParseError("malformed coupling line", lineno);
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw ParseError("coupling index out of range", lineno);
        if (i >= j) throw ParseError("coupling indices must satisfy i < j", lineno);
        couplings.push_back({i, j, v});
    }

    IsingProblem problem(n, std::move(couplings));
    if (ground) problem.set_ground_energy(*ground);
    for (auto& [k, v] : meta) problem.add_metadata(k, v);
    return problem;
}

void write_instance(const IsingProblem& problem, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_instance: cannot open " + path);
    char buf[64];
    if (problem.ground_energy()) {
        std::snprintf(buf, sizeof(buf), "%.17g", *problem.ground_energy());
        out << "# ground_energy: " << buf << "\n";
    }
    for (const auto& [k, v] : problem.metadata())
        out << "# meta: " << k << "=" << v << "\n";
    out << problem.size() << " " << problem.couplings().size() << "\n";
    for (const auto& c : problem.couplings()) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.value);
        out << c.i << " " << c.j << " " << buf << "\n";
    }
    if (!out) throw std::runtime_error("write_instance: write failed for " + path);
}

}  // namespace ising
