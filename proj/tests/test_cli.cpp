#include <doctest.h>

#include "rblda/dataio.hpp"

#include "test_support.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef RBLDA_CLI_PATH
#error "RBLDA_CLI_PATH must point at the CLI binary"
#endif

using namespace rblda;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
    fs::path dir = fs::temp_directory_path() / "rblda_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(RBLDA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("synth writes a loadable dataset") {
    const fs::path dir = work_dir();
    const fs::path data = dir / "synth.mts";
    const int code = run_cli("synth --d1 6 --d2 3 --classes 2 --per-class 10 --gap 8 "
                             "--sigma 1 --seed 5 --out " + data.string());
    REQUIRE(code == 0);
    MtsDataset loaded = load_mts(data.string());
    CHECK(loaded.size() == 20);
    CHECK(loaded.d1() == 6);
    CHECK(loaded.d2() == 3);
    CHECK(loaded.num_classes == 2);
}

TEST_CASE("fit writes a model and propagates typed failures as exit codes") {
    const fs::path dir = work_dir();
    const fs::path data = dir / "fitdata.mts";
    REQUIRE(run_cli("synth --d1 5 --d2 3 --classes 2 --per-class 8 --gap 4 --sigma 1 "
                    "--seed 2 --out " + data.string()) == 0);
    const fs::path model = dir / "model.txt";
    CHECK(run_cli("fit --data " + data.string() + " --method rblda --r1 0.3 --r2 0.5 "
                  "--out " + model.string()) == 0);
    CHECK(fs::exists(model));

    // Missing input file: exit 2.
    CHECK(run_cli("fit --data " + (dir / "nope.mts").string() + " --out " +
                  model.string()) == 2);

    // Constant data: numerical degeneracy, exit 3.
    MtsDataset constant;
    constant.num_classes = 2;
    for (int i = 0; i < 6; ++i) {
        constant.observations.push_back(Matrix::Ones(3, 2));
        constant.labels.push_back(i % 2);
    }
    const fs::path const_path = dir / "constant.mts";
    save_mts(const_path.string(), constant);
    CHECK(run_cli("fit --data " + const_path.string() + " --method rblda --out " +
                  (dir / "m3.txt").string()) == 3);

    // Strict BLDA on rank-deficient within-class data: exit 4.
    MtsDataset thin = test_support::random_dataset(10, 1, 6, 2, 77);
    const fs::path thin_path = dir / "thin.mts";
    save_mts(thin_path.string(), thin);
    CHECK(run_cli("fit --data " + thin_path.string() + " --method blda --out " +
                  (dir / "m4.txt").string()) == 4);
}

TEST_CASE("crossval emits a grid CSV with the selected cell") {
    const fs::path dir = work_dir();
    const fs::path data = dir / "cvdata.mts";
    REQUIRE(run_cli("synth --d1 6 --d2 3 --classes 3 --per-class 8 --gap 5 --sigma 1 "
                    "--seed 9 --out " + data.string()) == 0);
    const fs::path csv = dir / "cv.csv";
    REQUIRE(run_cli("crossval --data " + data.string() +
                    " --grid 0.1,0.5 --grid2 0.2,0.8 --folds 3 --seed 4 --out " +
                    csv.string()) == 0);
    const std::string text = slurp(csv);
    CHECK(text.find("i,j,r1,r2,mean_error,selected") == 0);
    CHECK(text.find(",1,") != std::string::npos); // some row is selected
}

TEST_CASE("evaluate produces a byte-stable summary CSV") {
    const fs::path dir = work_dir();
    const fs::path data = dir / "evaldata.mts";
    REQUIRE(run_cli("synth --d1 8 --d2 3 --classes 2 --per-class 10 --gap 10 --sigma 1 "
                    "--seed 6 --out " + data.string()) == 0);
    const fs::path out1 = dir / "eval1.csv";
    const fs::path out2 = dir / "eval2.csv";
    const std::string args = "evaluate --data " + data.string() +
                             " --method rblda --proportion 0.5 --splits 2 --folds 2 "
                             "--grid 0.1,0.9 --grid2 0.1,0.9 --seed 12 --out ";
    REQUIRE(run_cli(args + out1.string()) == 0);
    REQUIRE(run_cli(args + out2.string()) == 0);
    const std::string a = slurp(out1);
    CHECK(a == slurp(out2));
    CHECK(a.find("summary,rblda") != std::string::npos);
    CHECK(a.find(",0,") != std::string::npos);
}

TEST_CASE("evaluate accepts a config file with flag overrides") {
    const fs::path dir = work_dir();
    const fs::path data = dir / "cfgdata.mts";
    REQUIRE(run_cli("synth --d1 6 --d2 3 --classes 2 --per-class 8 --gap 8 --sigma 1 "
                    "--seed 3 --out " + data.string()) == 0);
    const fs::path cfg = dir / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "# evaluation settings\n"
            << "method = rlda\n"
            << "proportion = 0.5\n"
            << "splits = 2\n"
            << "folds = 2\n"
            << "grid = 0.1,0.9\n"
            << "seed = 8\n";
    }
    const fs::path csv = dir / "cfg.csv";
    REQUIRE(run_cli("evaluate --data " + data.string() + " --config " + cfg.string() +
                    " --out " + csv.string()) == 0);
    CHECK(slurp(csv).find("summary,rlda") != std::string::npos);

    // Unknown keys are input errors.
    {
        std::ofstream out(cfg);
        out << "mystery = 1\n";
    }
    CHECK(run_cli("evaluate --data " + data.string() + " --config " + cfg.string() +
                  " --out " + csv.string()) == 2);
}

TEST_CASE("bench writes the timing table") {
    const fs::path dir = work_dir();
    const fs::path data = dir / "benchdata.mts";
    REQUIRE(run_cli("synth --d1 10 --d2 3 --classes 2 --per-class 12 --gap 4 --sigma 1 "
                    "--seed 1 --out " + data.string()) == 0);
    const fs::path csv = dir / "bench.csv";
    REQUIRE(run_cli("bench --data " + data.string() +
                    " --grids 1,2 --folds 2 --repeats 1 --out " + csv.string()) == 0);
    const std::string text = slurp(csv);
    CHECK(text.find("m,cells,seconds,ratio") == 0);
    CHECK(text.find("\n1,1,") != std::string::npos);
    CHECK(text.find("\n2,4,") != std::string::npos);
}
