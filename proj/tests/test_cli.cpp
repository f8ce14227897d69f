// test_cli.cpp — end-to-end runs of the sqzsim scenario runner

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sqzsim_test_" + name);
    fs::remove_all(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(SQZSIM_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

Csv read_csv(const fs::path& p) {
    Csv c;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) {
            c.comments.push_back(line);
        } else if (c.header.empty()) {
            c.header = split(line);
        } else if (!line.empty()) {
            c.rows.push_back(split(line));
        }
    }
    return c;
}

int column(const Csv& c, const std::string& prefix) {
    for (std::size_t i = 0; i < c.header.size(); ++i) {
        if (c.header[i].rfind(prefix, 0) == 0) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

bool has_comment(const Csv& c, const std::string& text) {
    for (const auto& l : c.comments) {
        if (l.find(text) != std::string::npos) {
            return true;
        }
    }
    return false;
}

std::vector<fs::path> csv_files(const fs::path& dir) {
    std::vector<fs::path> out;
    if (fs::exists(dir)) {
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.path().extension() == ".csv") {
                out.push_back(e.path());
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("fig2a writes the coupling curves with units and provenance") {
    const fs::path out = scratch("fig2a");
    REQUIRE(run("--scenario fig2a_couplings --out " + out.string()) == 0);
    const Csv c = read_csv(out / "fig2a_couplings.csv");
    CHECK(c.header.front() == "rho_over_lambda [1]");
    CHECK(column(c, "J [Hz]") >= 0);
    CHECK(column(c, "Gamma_pm [Hz]") >= 0);
    CHECK(has_comment(c, "scenario = fig2a_couplings"));
    CHECK(has_comment(c, "detuning_MHz = 100"));
    CHECK(has_comment(c, "nu_Hz = 75"));
    REQUIRE(!c.rows.empty());
    CHECK(std::stod(c.rows.front()[0]) == doctest::Approx(0.05));
    CHECK(std::stod(c.rows.back()[0]) == doctest::Approx(3.0));
    for (const char* name : {"J", "Gamma_mp", "Gamma_pm", "Gamma_pp", "Gamma_mm"}) {
        const Csv m = read_csv(out / (std::string("couplings_") + name + ".csv"));
        CHECK(m.header.front() == "row [qubit]");
        CHECK(m.rows.size() == 2);
        CHECK(!m.comments.empty());
    }
}

TEST_CASE("fig2b reproduces the qualitative ordering") {
    const fs::path out = scratch("fig2b");
    REQUIRE(run("--scenario fig2b_squeezing --out " + out.string()) == 0);
    const Csv wide = read_csv(out / "fig2b_squeezing.csv");
    CHECK(wide.rows.size() == 400);
    CHECK(std::stod(wide.rows.back()[0]) == doctest::Approx(20.0));
    const int r0 = column(wide, "inv_xi_R2_r0_a0.5_excited");
    REQUIRE(r0 > 0);
    const double final_r0 = std::stod(wide.rows.back()[static_cast<std::size_t>(r0)]);
    CHECK(final_r0 >= 0.99);
    CHECK(final_r0 <= 1.01);

    const Csv steady = read_csv(out / "fig2b_steady.csv");
    REQUIRE(steady.rows.size() == 4);
    const int col = column(steady, "inv_xi_R2_steady");
    REQUIRE(col > 0);
    auto value = [&](std::size_t row) { return std::stod(steady.rows[row][static_cast<std::size_t>(col)]); };
    CHECK(value(1) > 1.05);
    CHECK(value(2) > 1.0);
    CHECK(value(2) < value(1));
    for (const char* name : {"r0_a0.5_excited", "r0.25_a0.5_excited", "r0.25_a1_excited", "r0.25_a0.5_ground"}) {
        const Csv t = read_csv(out / (std::string("fig2b_") + name + ".csv"));
        CHECK(column(t, "min_eig") > 0);
        CHECK(column(t, "trace_error") > 0);
        CHECK(t.rows.size() == 400);
    }
}

TEST_CASE("fig2c writes correlated and uncorrelated rates") {
    const fs::path out = scratch("fig2c");
    REQUIRE(run("--scenario fig2c_relaxation --out " + out.string()) == 0);
    const Csv c = read_csv(out / "fig2c_relaxation.csv");
    CHECK(c.rows.size() == 500);
    for (const char* name : {"R_corr_r0 ", "R_uncorr_r0 ", "R_corr_r0.5 ", "R_uncorr_r1 "}) {
        CHECK(column(c, name) > 0);
    }
    CHECK(has_comment(c, "n_qubits = 4"));
    CHECK(has_comment(c, "a_over_lambda = 0.40000000000000002"));
}

TEST_CASE("single-qubit sweep never shows squeezing") {
    const fs::path out = scratch("sweep_n1");
    REQUIRE(run("--scenario sweep --out " + out.string() +
                " --set sweep_n_qubits=1 --set sweep_r=0,0.25,0.5,1 --set sweep_a_over_lambda=0.3,1") == 0);
    const Csv c = read_csv(out / "sweep_steady_state.csv");
    CHECK(c.rows.size() == 8);
    const int col = column(c, "xi_R2 ");
    REQUIRE(col > 0);
    for (const auto& row : c.rows) {
        CHECK(std::stod(row[static_cast<std::size_t>(col)]) >= 1.0 - 1e-12);
    }
}

TEST_CASE("identical inputs give byte-identical output, for any thread count") {
    const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    const std::string args = "--scenario sweep --set sweep_n_qubits=1,2,3 --set sweep_r=0,0.5";
    REQUIRE(run(args + " --threads 1 --out " + a.string()) == 0);
    REQUIRE(run(args + " --threads 1 --out " + b.string()) == 0);
    REQUIRE(run(args + " --threads 3 --out " + c.string()) == 0);
    const std::string ref = slurp(a / "sweep_steady_state.csv");
    CHECK(!ref.empty());
    CHECK(ref == slurp(b / "sweep_steady_state.csv"));
    CHECK(ref == slurp(c / "sweep_steady_state.csv"));

    const fs::path d = scratch("det_d"), e = scratch("det_e");
    REQUIRE(run("--scenario custom --set t_max=3 --set n_points=31 --out " + d.string()) == 0);
    REQUIRE(run("--scenario custom --set t_max=3 --set n_points=31 --out " + e.string()) == 0);
    const auto fd = csv_files(d);
    const auto fe = csv_files(e);
    REQUIRE(fd.size() == fe.size());
    for (std::size_t i = 0; i < fd.size(); ++i) {
        CHECK(slurp(fd[i]) == slurp(fe[i]));
    }
}

TEST_CASE("config file and --set overrides") {
    const fs::path out = scratch("config");
    fs::create_directories(out);
    const fs::path cfg = out / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "# three qubits\nn_qubits = 3\nsqueezing_r = 0.5\nt_max = 2\nn_points = 5\n";
    }
    REQUIRE(run("--scenario custom --config " + cfg.string() + " --set squeezing_r=0.75 --out " + out.string()) == 0);
    const Csv c = read_csv(out / "custom_trajectory.csv");
    CHECK(c.rows.size() == 5);
    CHECK(has_comment(c, "squeezing_r = 0.75"));
    CHECK(has_comment(c, "n_qubits = 3"));
    CHECK(column(c, "xi_R2") > 0);
}

TEST_CASE("exit codes") {
    const fs::path out = scratch("codes");
    CHECK(run("") == 2);
    CHECK(run("--scenario nonsense --out " + out.string()) == 2);
    CHECK(run("--scenario custom --set detuning_MHz=0 --out " + out.string()) == 2);
    CHECK(run("--scenario custom --set no_such_key=1 --out " + out.string()) == 2);
    CHECK(run("--scenario custom --set squeezing_r=-1 --out " + out.string()) == 2);
    CHECK(run("--scenario custom --config /nonexistent.cfg --out " + out.string()) == 2);
    // figure scenarios fix the caption geometry and squeezing
    CHECK(run("--scenario fig2c_relaxation --set n_qubits=3 --out " + out.string()) == 2);
    CHECK(run("--scenario fig2b_squeezing --set squeezing_r=0.1 --out " + out.string()) == 2);
    // an integrator that cannot meet its tolerance
    CHECK(run("--scenario custom --rtol 1e-300 --atol 1e-300 --set t_max=1 --set n_points=3 --out " + out.string()) == 3);
    // tolerances so loose the state leaves the positive cone
    CHECK(run("--scenario custom --rtol 0.9 --atol 0.5 --set t_max=5 --set n_points=11 --out " + out.string()) == 4);
}

TEST_CASE("partial outputs are removed on failure") {
    const fs::path out = scratch("partial");
    CHECK(run("--scenario fig2b_squeezing --rtol 1 --atol 1 --out " + out.string()) == 4);
    CHECK(csv_files(out).empty());
    CHECK(run("--scenario custom --rtol 0.9 --atol 0.5 --set t_max=5 --set n_points=11 --out " + out.string()) == 4);
    CHECK(csv_files(out).empty());
}
