#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ising/bench_config.hpp"
#include "ising/instances.hpp"

using namespace ising;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    auto dir = fs::temp_directory_path() / "isingbench-config-tests";
    fs::create_directories(dir);
    return dir;
}

const char* kMinimalConfig = R"({
  "solver": "sa",
  "runs": 20,
  "seed": 5,
  "units": "steps",
  "tts_csv": "tts.csv",
  "instance_sets": [
    {"generator": {"type": "square", "L": 3, "mode": "mattis", "count": 2, "seed": 1}}
  ]
})";

}  // namespace

TEST_CASE("minimal config parses with defaults filled in") {
    auto cfg = parse_bench_config(kMinimalConfig);
    REQUIRE(cfg.solvers.size() == 1);
    CHECK(cfg.solvers[0] == SolverKind::Sa);
    CHECK(cfg.runs == 20);
    CHECK(cfg.p_d == 0.99);
    CHECK(cfg.seed == 5);
    CHECK(cfg.jobs == 1);
    CHECK(cfg.steps_units);
    CHECK(cfg.tts_csv_path == "tts.csv");
    CHECK(cfg.fit_csv_path.empty());
    REQUIRE(cfg.sets.size() == 1);
    CHECK(cfg.sets[0].name == "square-L3");
    CHECK(cfg.sets[0].size_label == 3.0);
    REQUIRE(cfg.sets[0].generator);
    CHECK(cfg.sets[0].generator->count == 2);
}

TEST_CASE("solver may be an array") {
    auto cfg = parse_bench_config(R"({
      "solver": ["sa", "sbm"],
      "tts_csv": "t.csv",
      "instance_sets": [{"generator": {"type": "square", "L": 3}}]
    })");
    REQUIRE(cfg.solvers.size() == 2);
    CHECK(cfg.solvers[1] == SolverKind::Sbm);
}

TEST_CASE("unknown keys are rejected by name") {
    const char* bad = R"({
      "solver": "sa", "tts_csv": "t.csv", "speling_mistake": 1,
      "instance_sets": [{"generator": {"type": "square", "L": 3}}]
    })";
    CHECK_THROWS_WITH_AS(parse_bench_config(bad),
                         doctest::Contains("speling_mistake"), ConfigError);

    const char* bad_nested = R"({
      "solver": "sa", "tts_csv": "t.csv",
      "instance_sets": [{"generator": {"type": "square", "L": 3, "bogus": 2}}]
    })";
    CHECK_THROWS_WITH_AS(parse_bench_config(bad_nested), doctest::Contains("bogus"),
                         ConfigError);

    const char* bad_params = R"({
      "solver": "sa", "tts_csv": "t.csv", "params": {"betta": 0.2},
      "instance_sets": [{"generator": {"type": "square", "L": 3}}]
    })";
    CHECK_THROWS_WITH_AS(parse_bench_config(bad_params), doctest::Contains("betta"),
                         ConfigError);
}

TEST_CASE("structural errors raise config errors") {
    CHECK_THROWS_AS(parse_bench_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_bench_config("[1,2]"), ConfigError);
    CHECK_THROWS_AS(parse_bench_config(R"({"tts_csv": "t.csv", "instance_sets": []})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_bench_config(R"({"solver": "sa", "instance_sets": []})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_bench_config(R"({"solver": "sa", "tts_csv": "t.csv",
                                            "instance_sets": []})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_bench_config(R"({"solver": "sa", "tts_csv": "t.csv",
                                            "units": "hours",
                                            "instance_sets": [{"generator": {"type": "square"}}]})"),
                    ConfigError);
}

TEST_CASE("override keys build a canonical grid label") {
    ParamOverrides o;
    CHECK(o.key() == "default");
    o.numeric["beta"] = 0.25;
    o.numeric["steps"] = 512;
    o.flags["noise_outside"] = true;
    CHECK(o.key() == "beta=0.25;steps=512;noise_outside=true");
}

TEST_CASE("overrides update the solver parameters") {
    IsingProblem p(2, {{0, 1, 1.0}});
    auto params = SolverParams::defaults(SolverKind::SimCim, p);
    ParamOverrides o;
    o.numeric["steps"] = 200;
    o.numeric["beta"] = 0.5;
    o.numeric["sigma"] = 0.01;
    o.numeric["x_sat"] = 2.0;
    o.numeric["alpha0"] = 0.9;
    o.flags["noise_outside"] = true;
    apply_overrides(params, o);
    CHECK(params.num_steps == 200);
    CHECK(params.pump.total_steps == 200);
    CHECK(eval_schedule(params.coupling, 10) == 0.5);
    CHECK(eval_schedule(params.noise, 10) == 0.01);
    CHECK(params.x_sat == 2.0);
    CHECK(params.noise_outside);
    CHECK(eval_schedule(params.pump, 200) == doctest::Approx(0.9 * std::tanh(1.0)));

    ParamOverrides integ;
    integ.strings["integrator"] = "rk45";
    apply_overrides(params, integ);
    CHECK(params.integrator == IntegratorKind::Rk45);

    ParamOverrides bad;
    bad.numeric["not_a_knob"] = 1.0;
    CHECK_THROWS_AS(apply_overrides(params, bad), ConfigError);
}

TEST_CASE("generator spec produces annotated instances") {
    GeneratorSpec spec;
    spec.type = "square";
    spec.L = 3;
    spec.mode = "mattis";
    spec.count = 3;
    spec.seed = 11;
    auto problems = generate_instances(spec);
    REQUIRE(problems.size() == 3);
    for (const auto& p : problems) {
        CHECK(p.size() == 9);
        CHECK(p.ground_energy());
    }
    CHECK(problems[0].couplings() != problems[1].couplings());

    spec.type = "vb";
    spec.n = 12;
    spec.c = 4;
    spec.verify = true;
    auto vb = generate_instances(spec);
    REQUIRE(vb.size() == 3);
    CHECK(vb[0].ground_energy());

    spec.type = "ring";
    CHECK_THROWS_AS(generate_instances(spec), ConfigError);
}

TEST_CASE("run_bench emits the TTS table and is reproducible") {
    auto cfg = parse_bench_config(kMinimalConfig);
    cfg.jobs = 2;
    auto a = run_bench(cfg);
    auto b = run_bench(cfg);
    CHECK(a.tts_csv == b.tts_csv);
    CHECK(a.fit_csv.empty());

    std::istringstream in(a.tts_csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "solver,instance_set,L,param_key,p_s,n,tts_us,tts_steps,ci_lo,ci_hi");
    std::string row;
    REQUIRE(std::getline(in, row));
    CHECK(row.rfind("sa,square-L3,3,default,", 0) == 0);
    // steps units: the tts_us column stays empty
    std::vector<std::string> fields;
    std::stringstream rs(row);
    std::string f;
    while (std::getline(rs, f, ',')) fields.push_back(f);
    REQUIRE(fields.size() >= 9);
    CHECK(fields[6].empty());
}

TEST_CASE("grid rows appear per parameter point and the fit covers the sets") {
    const char* config = R"({
      "solver": "sa",
      "runs": 16,
      "seed": 3,
      "units": "steps",
      "tts_csv": "t.csv",
      "fit_csv": "f.csv",
      "grid": [{"steps": 64}, {"steps": 256}],
      "instance_sets": [
        {"generator": {"type": "square", "L": 3, "mode": "mattis", "count": 2, "seed": 1}},
        {"generator": {"type": "square", "L": 4, "mode": "mattis", "count": 2, "seed": 2}}
      ]
    })";
    auto out = run_bench(parse_bench_config(config));
    std::istringstream in(out.tts_csv);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);  // 2 grid points x 2 sets

    std::istringstream fin(out.fit_csv);
    std::getline(fin, line);
    CHECK(line == "solver,a,b,err_a,err_b");
    REQUIRE(std::getline(fin, line));
    CHECK(line.rfind("sa,", 0) == 0);
}

TEST_CASE("fit_from_csv reconstructs fits from the table") {
    // synthetic table following tts = 10^(0.5 + 0.25 L) in step units
    std::string csv = "solver,instance_set,L,param_key,p_s,n,tts_us,tts_steps,ci_lo,ci_hi\n";
    for (double L : {4.0, 6.0, 8.0, 10.0}) {
        char buf[200];
        std::snprintf(buf, sizeof(buf), "sa,set,%g,default,0.5,6.64,,%.17g,0,0\n", L,
                      std::pow(10.0, 0.5 + 0.25 * L));
        csv += buf;
    }
    auto fit_csv = fit_from_csv(csv, true);
    std::istringstream in(fit_csv);
    std::string line;
    std::getline(in, line);
    REQUIRE(std::getline(in, line));
    std::stringstream ls(line);
    std::string solver, a, b;
    std::getline(ls, solver, ',');
    std::getline(ls, a, ',');
    std::getline(ls, b, ',');
    CHECK(solver == "sa");
    CHECK(std::stod(a) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::stod(b) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("glob expansion matches a single star and sorts") {
    auto dir = work_dir() / "glob";
    fs::create_directories(dir);
    for (const char* name : {"inst_2.txt", "inst_0.txt", "inst_1.txt", "other.dat"})
        std::ofstream(dir / name) << "x";
    auto files = expand_glob((dir / "inst_*.txt").string());
    REQUIRE(files.size() == 3);
    CHECK(files[0] == (dir / "inst_0.txt").string());
    CHECK(files[2] == (dir / "inst_2.txt").string());
    CHECK(expand_glob((dir / "none_*.txt").string()).empty());
    auto exact = expand_glob((dir / "other.dat").string());
    REQUIRE(exact.size() == 1);
}

TEST_CASE("file-based instance sets feed the bench") {
    auto dir = work_dir() / "sets";
    fs::create_directories(dir);
    for (int k = 0; k < 2; ++k) {
        auto p = gen_planted_square({3, static_cast<std::uint64_t>(40 + k), 0},
                                    PlantMode::Mattis);
        write_instance(p, (dir / ("sq_" + std::to_string(k) + ".txt")).string());
    }
    std::string config = R"({
      "solver": "sa", "runs": 10, "units": "steps", "tts_csv": "t.csv",
      "instance_sets": [{"name": "disk", "L": 3, "files": ")" +
                         (dir / "sq_*.txt").string() + R"("}]
    })";
    auto out = run_bench(parse_bench_config(config));
    CHECK(out.tts_csv.find("sa,disk,3,") != std::string::npos);
}
