#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "treesmooth/dataset.hpp"
#include "treesmooth/forest.hpp"
#include "treesmooth/regularize.hpp"
#include "support/test_helpers.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("ts_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CliResult run_cli(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = "TREESMOOTH_DATA_DIR='" + testutil::data_dir() + "' '" +
                            TREESMOOTH_CLI_PATH + "' " + args + " > '" + out.string() +
                            "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    CliResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out);
    res.err = slurp(err);
    return res;
}

} // namespace

TEST_CASE("bench happy path writes a report and exits 0") {
    const fs::path report_path = work_dir() / "r.json";
    const CliResult res = run_cli(
        "bench --dataset haberman --method hs --protocol cv --reps 2 --trees 8 --seed 7 --out '" +
        report_path.string() + "'");
    CAPTURE(res.err);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("balanced_accuracy") != std::string::npos);
    REQUIRE(fs::exists(report_path));
    const auto j = nlohmann::json::parse(slurp(report_path));
    CHECK(j.at("rows").size() == 2);
    CHECK(j.at("config").at("dataset") == "haberman");
    CHECK(j.at("config").at("forest").at("n_trees") == 8);
}

TEST_CASE("bench can emit the flat CSV report instead") {
    const fs::path report_path = work_dir() / "r.csv";
    const CliResult res = run_cli(
        "bench --dataset heart --method hs --protocol cv --reps 2 --trees 6 --seed 3 "
        "--format csv --out '" + report_path.string() + "'");
    CHECK(res.exit_code == 0);
    const std::string csv = slurp(report_path);
    CHECK(csv.rfind("rep,protocol,dataset,method,chosen_lambda,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("bench echoes an explicit lambda grid in the report config") {
    const fs::path report_path = work_dir() / "grid.json";
    const CliResult res = run_cli(
        "bench --dataset haberman --method hs --protocol cv --reps 1 --trees 5 --seed 1 "
        "--lambda-grid 0.001,0.01,0.1,1,10,25,50,100,200 --out '" +
        report_path.string() + "'");
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(report_path));
    const std::vector<double> expected = {0.001, 0.01, 0.1, 1, 10, 25, 50, 100, 200};
    CHECK(j.at("config").at("grid").at("lambdas").get<std::vector<double>>() == expected);
}

TEST_CASE("bench repeated with identical flags is byte-identical") {
    const fs::path a = work_dir() / "det_a.json";
    const fs::path b = work_dir() / "det_b.json";
    const std::string flags =
        "bench --dataset heart --method beta --protocol holdout --reps 2 --trees 6 --seed 42 "
        "--tied-prior --jobs 2 --out '";
    CHECK(run_cli(flags + a.string() + "'").exit_code == 0);
    CHECK(run_cli(flags + b.string() + "'").exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("bench with an unknown dataset lists the registry and exits 1") {
    const CliResult res = run_cli("bench --dataset nonsense --reps 1");
    CHECK(res.exit_code == 1);
    CHECK(res.err.find("known datasets") != std::string::npos);
    CHECK(res.err.find("haberman") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("bench --no-such-flag").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("validate-data passes for every bundled dataset") {
    using treesmooth::dataset_registry;
    for (const auto& entry : dataset_registry()) {
        const CliResult res = run_cli("validate-data " + entry.name);
        CAPTURE(entry.name);
        CAPTURE(res.err);
        CHECK(res.exit_code == 0);
        const std::string expect = std::to_string(entry.expected_samples) + " samples, " +
                                   std::to_string(entry.expected_features) + " features";
        CHECK(res.out.find(expect) != std::string::npos);
    }
    // spot-check the printed class counts
    const CliResult breast = run_cli("validate-data breast_cancer");
    CHECK(breast.out.find("classes 196/81") != std::string::npos);
}

TEST_CASE("validate-data flags a mismatching file and parse errors") {
    const auto wrong = testutil::write_temp_file(
        "fake_heart.csv", "a,b,label\n1,2,0\n3,4,1\n5,6,0\n");
    const CliResult res = run_cli("validate-data heart --csv '" + wrong + "'");
    CHECK(res.exit_code == 1);
    CHECK(res.out.find("mismatch") != std::string::npos);

    const auto truncated = testutil::write_temp_file(
        "trunc.csv", "a,b,label\n1,2,0\n3,4\n");
    CHECK(run_cli("validate-data heart --csv '" + truncated + "'").exit_code == 1);

    CHECK(run_cli("validate-data nonsense").exit_code == 1);
}

TEST_CASE("dump-model then predict matches the in-memory pipeline") {
    using namespace treesmooth;
    const fs::path model_path = work_dir() / "model.json";
    const fs::path pred_path = work_dir() / "preds.csv";
    const CliResult dumped = run_cli(
        "dump-model --dataset heart --method beta --alpha 100 --beta 100 --trees 10 --seed 3 "
        "--out '" + model_path.string() + "'");
    CAPTURE(dumped.err);
    REQUIRE(dumped.exit_code == 0);

    const std::string data_csv = testutil::data_dir() + "/heart.csv";
    REQUIRE(run_cli("predict --model '" + model_path.string() + "' --data '" + data_csv +
                    "' --out '" + pred_path.string() + "'")
                .exit_code == 0);

    // the same pipeline in memory
    const Dataset ds = load_csv(data_csv);
    ForestConfig fc;
    fc.n_trees = 10;
    fc.seed = 3;
    const FittedForest calibrated = apply(fit_forest(ds, fc), RegularizerSpec::beta({100, 100}));
    const std::vector<double> expected = predict_proba_batch(calibrated, ds);

    std::ifstream in(pred_path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "row,class1_probability");
    std::size_t row = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stod(line.substr(comma + 1)) == expected.at(row));
        ++row;
    }
    CHECK(row == ds.n_samples());
}

TEST_CASE("predict with a post-load calibration differs from none") {
    const fs::path model_path = work_dir() / "plain.json";
    REQUIRE(run_cli("dump-model --dataset haberman --trees 10 --seed 9 --out '" +
                    model_path.string() + "'")
                .exit_code == 0);
    const std::string data_csv = testutil::data_dir() + "/haberman.csv";
    const fs::path none_path = work_dir() / "p_none.csv";
    const fs::path beta_path = work_dir() / "p_beta.csv";
    REQUIRE(run_cli("predict --model '" + model_path.string() + "' --data '" + data_csv +
                    "' --method none --out '" + none_path.string() + "'")
                .exit_code == 0);
    REQUIRE(run_cli("predict --model '" + model_path.string() + "' --data '" + data_csv +
                    "' --method beta --alpha 100 --beta 100 --out '" + beta_path.string() + "'")
                .exit_code == 0);
    CHECK(slurp(none_path) != slurp(beta_path));
}

TEST_CASE("predict rejects inputs with the wrong feature count") {
    const fs::path model_path = work_dir() / "hmodel.json";
    REQUIRE(run_cli("dump-model --dataset haberman --trees 4 --seed 1 --out '" +
                    model_path.string() + "'")
                .exit_code == 0);
    const auto narrow = testutil::write_temp_file("narrow.csv", "a,label\n1,0\n2,1\n");
    const CliResult res =
        run_cli("predict --model '" + model_path.string() + "' --data '" + narrow + "'");
    CHECK(res.exit_code == 1);
}

TEST_CASE("predict rejects a schema-invalid model file") {
    const auto broken = testutil::write_temp_file("broken_model.json", "{\"schema_version\": 1}");
    const std::string data_csv = testutil::data_dir() + "/haberman.csv";
    const CliResult res = run_cli("predict --model '" + broken + "' --data '" + data_csv + "'");
    CHECK(res.exit_code == 1);
    CHECK(res.err.find("schema") != std::string::npos);
}

TEST_CASE("betafun-eval exposes the kernel") {
    const CliResult cdf = run_cli("betafun-eval --op cdf --x 0.5 --alpha 2 --beta 1");
    CHECK(cdf.exit_code == 0);
    CHECK(std::stod(cdf.out) == doctest::Approx(0.25).epsilon(1e-12));
    const CliResult ppf = run_cli("betafun-eval --op ppf --q 0.25 --alpha 2 --beta 1");
    CHECK(ppf.exit_code == 0);
    CHECK(std::stod(ppf.out) == doctest::Approx(0.5).epsilon(1e-9));
    // hidden from the top-level help
    CHECK(run_cli("--help").out.find("betafun-eval") == std::string::npos);
}
