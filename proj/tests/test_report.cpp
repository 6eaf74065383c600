#include "helpers.hpp"

#include "hbmut/baselines.hpp"
#include "hbmut/errors.hpp"
#include "hbmut/report.hpp"
#include "hbmut/simulator.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace hbmut;
using testing::TempDir;

namespace {

// Runs the tool and returns (exit status, stderr text).
std::pair<int, std::string> run_cli_stderr(const std::string& args, const fs::path& err) {
    const std::string cmd = std::string(HBMUT_CLI) + " " + args + " >/dev/null 2>" + err.string();
    const int status = std::system(cmd.c_str());
    const int code = (status == -1 || !WIFEXITED(status)) ? -1 : WEXITSTATUS(status);
    return {code, testing::read_file(err)};
}

std::string data_flags(const fs::path& dir) {
    return "--counts " + (dir / "counts.tsv").string() + " --coverage " + (dir / "coverage.tsv").string() +
           " --types " + (dir / "types.tsv").string();
}

// Table rows split on tabs, header included.
std::vector<std::vector<std::string>> read_table(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(testing::read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, '\t')) cols.push_back(c);
        rows.push_back(cols);
    }
    return rows;
}

struct SmallStudy {
    TempDir dir;
    SmallStudy() {
        REQUIRE(testing::run_cli("simulate --out " + (dir / "sim").string() +
                                 " --seed 3 --genes 300 --samples 4 --lambda0 2e-6") == 0);
        testing::write_file(dir / "short.cfg", "iterations=300\nburn_in=100\nthin=2\n");
    }
    fs::path sim() const { return dir / "sim"; }
    std::string config() const { return " --config " + (dir / "short.cfg").string(); }
};

} // namespace

TEST_CASE("predictive probability of a constant rate") {
    DatasetBuilder b({"t"});
    b.add_gene("g");
    b.add_sample("s1");
    b.add_sample("s2");
    b.add_broadcast_coverage(0, 0, 1000);
    auto d = std::move(b).build();
    Trace t;
    t.num_genes = 1;
    for (int i = 0; i < 10; ++i) {
        TraceRecord r;
        r.lambda = {1e-3};
        r.alpha = {1.0};
        r.beta = {1.0, 1.0};
        t.records.push_back(r);
    }
    CHECK(predictive_mutation_probability(t, d, 0u) == doctest::Approx(0.6321205588285577).epsilon(1e-12));
    CHECK(predictive_mutation_probability(t, d, "g") == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    // Tiny rates keep full relative precision.
    for (auto& r : t.records) r.lambda = {1e-15};
    CHECK(predictive_mutation_probability(t, d, 0u) == doctest::Approx(1e-12).epsilon(1e-9));
    CHECK_THROWS_AS(predictive_mutation_probability(t, d, "nope"), DataError);
    const std::vector<double> cov{500.0};
    for (auto& r : t.records) r.lambda = {1e-3};
    CHECK(predictive_mutation_probability(t, d, 0u, std::span<const double>(cov), 2.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(testing::run_cli("") == 2);
    CHECK(testing::run_cli("no-such-command") == 2);
    CHECK(testing::run_cli("fit-rates --counts x") == 2);
    CHECK(testing::run_cli("fit-rates --counts missing.tsv --coverage missing.tsv --out " + (dir / "o").string()) == 3);

    testing::write_file(dir / "types.txt", "a\n");
    testing::write_file(dir / "cov.tsv", "gene\ttype\tcoverage\ng1\ta\t100\n");
    testing::write_file(dir / "counts.tsv", "gene\ttype\tsample\tcount\ng1\ta\ts1\tx\n");
    const std::string flags = "--counts " + (dir / "counts.tsv").string() + " --coverage " +
                              (dir / "cov.tsv").string() + " --types " + (dir / "types.txt").string();
    CHECK(testing::run_cli("fit-rates " + flags + " --out " + (dir / "o").string()) == 3);

    testing::write_file(dir / "bad.cfg", "iterations=0\n");
    testing::write_file(dir / "counts.tsv", "gene\ttype\tsample\tcount\ng1\ta\ts1\t1\n");
    CHECK(testing::run_cli("fit-rates " + flags + " --config " + (dir / "bad.cfg").string() + " --out " +
                           (dir / "o").string()) == 2);
    CHECK(testing::run_cli("fit-drivers " + flags + " --lambda0 -1 --out " + (dir / "o").string()) == 2);

    auto [code, err] = run_cli_stderr("fit-drivers " + flags + " --out " + (dir / "o").string(), dir / "err.txt");
    CHECK(code == 2);
    CHECK(err.find("low 2.07e-07") != std::string::npos);
    CHECK(err.find("intermediate 3.68e-07") != std::string::npos);
    CHECK(err.find("high 5.3e-07") != std::string::npos);
}

TEST_CASE("simulate at desk scale plants 61 drivers") {
    TempDir dir;
    REQUIRE(testing::run_cli("simulate --out " + (dir / "s").string() + " --seed 2 --target-g 2000") == 0);
    const auto truth = load_truth(dir / "s" / "truth.tsv");
    CHECK(truth.genes.size() == 2000);
    CHECK(std::count(truth.is_driver.begin(), truth.is_driver.end(), 1) == 61);
    for (const char* f : {"counts.tsv", "coverage.tsv", "types.tsv", "true_effects.tsv", "manifest.json"})
        CHECK(fs::exists(dir / "s" / f));
    CHECK(testing::run_cli("simulate --out " + (dir / "t").string() + " --target-g 100") == 2);
}

TEST_CASE("fit-rates writes its tables and is reproducible") {
    SmallStudy study;
    const auto a = study.dir / "fa", b = study.dir / "fb";
    REQUIRE(testing::run_cli("fit-rates " + data_flags(study.sim()) + study.config() + " --out " + a.string()) == 0);
    REQUIRE(testing::run_cli("fit-rates " + data_flags(study.sim()) + study.config() + " --out " + b.string()) == 0);
    for (const char* f : {"rate_summary.tsv", "effects.tsv", "predictive.tsv", "diagnostics.tsv", "trace.tsv"}) {
        REQUIRE(fs::exists(a / f));
        CHECK(testing::read_file(a / f) == testing::read_file(b / f));
    }
    const auto rows = read_table(a / "rate_summary.tsv");
    CHECK(rows.size() == 301);
    CHECK(rows[1][6] == "1");

    const auto m = nlohmann::json::parse(testing::read_file(a / "manifest.json"));
    const auto mb = nlohmann::json::parse(testing::read_file(b / "manifest.json"));
    CHECK(m["command"] == "fit-rates");
    CHECK(m["outputs"] == mb["outputs"]);
    CHECK(m["dataset_fingerprint"] == mb["dataset_fingerprint"]);
    CHECK(m["seed"] == 1);

    const auto c = study.dir / "fc";
    REQUIRE(testing::run_cli("fit-rates " + data_flags(study.sim()) + study.config() + " --seed 9 --out " +
                             c.string()) == 0);
    CHECK(testing::read_file(a / "trace.tsv") != testing::read_file(c / "trace.tsv"));
}

TEST_CASE("two chains give per-chain outputs and diagnostics") {
    SmallStudy study;
    const auto out = study.dir / "f2";
    REQUIRE(testing::run_cli("fit-drivers " + data_flags(study.sim()) + study.config() +
                             " --lambda0 2e-6 --chains 2 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "chain1" / "trace.tsv"));
    CHECK(fs::exists(out / "chain2" / "trace.tsv"));
    CHECK(testing::read_file(out / "chain1" / "trace.tsv") != testing::read_file(out / "chain2" / "trace.tsv"));
    const auto diag = read_table(out / "diagnostics.tsv");
    REQUIRE(diag.size() > 2);
    bool found_pi = false;
    for (const auto& row : diag)
        if (row[0] == "pi") {
            found_pi = true;
            CHECK(row[3] != "NA");
        }
    CHECK(found_pi);
}

TEST_CASE("simulate, fit drivers, evaluate") {
    SmallStudy study;
    const auto fit = study.dir / "fd", ev = study.dir / "ev";
    REQUIRE(testing::run_cli("fit-drivers " + data_flags(study.sim()) + study.config() + " --lambda0 2e-6 --out " +
                             fit.string()) == 0);
    for (const char* f : {"driver_summary.tsv", "genome_summary.tsv", "drivers_per_sample.tsv", "effects.tsv"})
        CHECK(fs::exists(fit / f));
    const auto genome = read_table(fit / "genome_summary.tsv");
    REQUIRE(genome.size() == 3);
    CHECK(genome[1][0] == "pi");
    CHECK(genome[2][0] == "total_drivers");

    REQUIRE(testing::run_cli("evaluate " + data_flags(study.sim()) + " --fit " + fit.string() + " --truth " +
                             (study.sim() / "truth.tsv").string() + " --out " + ev.string() + " --max-k 50") == 0);
    const auto curve = read_table(ev / "fdr_curve.tsv");
    CHECK(curve.size() == 51);
    CHECK(curve[0] == std::vector<std::string>{"k", "bayes_fdr", "bh_fdr", "true_fdr", "true_fdr_pvalue_rank"});
    const auto cal = read_table(ev / "calibration.tsv");
    CHECK(cal.size() == 3);

    // The same evaluation against a truth file for other genes fails.
    testing::write_file(study.dir / "truth2.tsv", "gene\ttier_multiplier\ttrue_lambda\tis_driver\nX1\t1\t1e-6\t0\n");
    auto [code, err] = run_cli_stderr("evaluate " + data_flags(study.sim()) + " --fit " + fit.string() + " --truth " +
                                          (study.dir / "truth2.tsv").string() + " --out " + ev.string(),
                                      study.dir / "err.txt");
    CHECK(code == 3);
    CHECK(err.find("symmetric difference: 301") != std::string::npos);
}

TEST_CASE("perfect probabilities make the Bayesian FDR exact") {
    SmallStudy study;
    const auto truth = load_truth(study.sim() / "truth.tsv");
    const auto fit = study.dir / "perfect", ev = study.dir / "ev";
    fs::create_directories(fit);
    std::string table = "gene\tn_mutations\tcoverage_total\tp_driver\tlambda_mean\trank\n";
    for (std::size_t g = 0; g < truth.genes.size(); ++g)
        table += truth.genes[g] + "\t0\t1\t" + (truth.is_driver[g] ? "1" : "0") + "\t1e-6\t1\n";
    testing::write_file(fit / "driver_summary.tsv", table);
    REQUIRE(testing::run_cli("evaluate " + data_flags(study.sim()) + " --fit " + fit.string() + " --truth " +
                             (study.sim() / "truth.tsv").string() + " --lambda0 2e-6 --out " + ev.string()) == 0);
    const auto curve = read_table(ev / "fdr_curve.tsv");
    REQUIRE(curve.size() > 1);
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(std::stod(curve[i][1]) == std::stod(curve[i][3]));
    const auto cal = read_table(ev / "calibration.tsv");
    CHECK(std::stod(cal[1][1]) == 0.0);
}

TEST_CASE("baseline on data without mutations") {
    TempDir dir;
    testing::write_file(dir / "types.txt", "a\nb\n");
    testing::write_file(dir / "cov.tsv", "gene\ttype\tsample\tcoverage\ng1\ta\ts1\t100\ng1\tb\ts1\t100\n"
                                         "g2\ta\ts1\t300\n");
    testing::write_file(dir / "counts.tsv", "gene\ttype\tsample\tcount\n");
    const std::string flags = "--counts " + (dir / "counts.tsv").string() + " --coverage " +
                              (dir / "cov.tsv").string() + " --types " + (dir / "types.txt").string();
    CHECK(testing::run_cli("baseline " + flags + " --out " + (dir / "b").string()) == 2);
    REQUIRE(testing::run_cli("baseline " + flags + " --lambda0 1e-3 --out " + (dir / "b").string()) == 0);
    const auto rows = read_table(dir / "b" / "baseline.tsv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"gene", "X", "E", "mle", "p", "bh_q"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][4] == "1");
        CHECK(rows[i][5] == "1");
    }
}

TEST_CASE("pooled sample units skip drivers per sample") {
    TempDir dir;
    testing::write_file(dir / "types.tsv", "a\n");
    testing::write_file(dir / "coverage.tsv", "gene\ttype\tcoverage\ng1\ta\t100000\ng2\ta\t100000\ng3\ta\t100000\n");
    testing::write_file(dir / "counts.tsv",
                        "gene\ttype\tsample\tcount\ng1\ta\tstage:discovery\t4\ng2\ta\tstage:prevalence\t1\n");
    testing::write_file(dir / "short.cfg", "iterations=200\nburn_in=50\nthin=5\n");
    const auto out = dir / "f";
    REQUIRE(testing::run_cli("fit-drivers " + data_flags(dir.path()) + " --config " + (dir / "short.cfg").string() +
                             " --lambda0 1e-6 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "driver_summary.tsv"));
    CHECK_FALSE(fs::exists(out / "drivers_per_sample.tsv"));
}

TEST_CASE("run_chains is deterministic and returns one trace per chain") {
    auto d = testing::uniform_dataset(5, {"a"}, 2, 10000);
    ModelConfig config;
    config.iterations = 50;
    config.burn_in = 10;
    config.thin = 2;
    const auto a = run_chains(d, config, ModelKind::rate, 3);
    const auto b = run_chains(d, config, ModelKind::rate, 3);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(a[i].records.size() == b[i].records.size());
        for (std::size_t r = 0; r < a[i].records.size(); ++r) CHECK(a[i].records[r].lambda == b[i].records[r].lambda);
    }
    CHECK_THROWS_AS(run_chains(d, config, ModelKind::rate, 0), UsageError);
}
