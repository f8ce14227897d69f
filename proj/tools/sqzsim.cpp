// sqzsim.cpp — command-line entry: parse flags, run one scenario, map failures to exit codes

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "scenarios.hpp"
#include "sqz/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvariant = 4;

void remove_partial(const std::vector<std::filesystem::path>& written) {
    for (const auto& p : written) {
        std::error_code ec;
        std::filesystem::remove(p, ec);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sqzsim: qubit array coupled to a squeezed magnon bath"};
    sqzsim::Scenario scenario;
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir = "out";
    app.add_option("--scenario", scenario.name,
                   "fig2a_couplings | fig2b_squeezing | fig2c_relaxation | sweep | custom")
        ->required();
    app.add_option("--config", config_path, "key = value parameter file");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--rtol", scenario.rtol, "ODE relative tolerance")->capture_default_str();
    app.add_option("--atol", scenario.atol, "ODE absolute tolerance")->capture_default_str();
    app.add_option("--set", sets, "override, key=value (repeatable)");
    app.add_option("--threads", scenario.threads, "worker threads for sweeps")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    scenario.output_dir = out_dir;

    std::vector<std::filesystem::path> written;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw sqz::ConfigError("cannot open config file '" + config_path + "'");
            }
            std::stringstream buf;
            buf << in.rdbuf();
            scenario.overrides = sqz::parse_key_values(buf.str());
        }
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw sqz::ConfigError("--set expects key=value, got '" + kv + "'");
            }
            const auto parsed = sqz::parse_key_values(kv);
            for (const auto& [k, v] : parsed) {
                scenario.overrides[k] = v;
            }
        }
        sqzsim::run_scenario(scenario, written);
    } catch (const sqz::ConfigError& e) {
        remove_partial(written);
        std::cerr << "sqzsim: config error in scenario '" << scenario.name << "': " << e.what() << "\n";
        return kExitConfig;
    } catch (const sqz::InvariantViolation& e) {
        remove_partial(written);
        std::cerr << "sqzsim: invariant violation in scenario '" << scenario.name << "': " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        remove_partial(written);
        std::cerr << "sqzsim: numerical failure in scenario '" << scenario.name << "': " << e.what() << "\n";
        return kExitNumerical;
    }
    for (const auto& p : written) {
        std::cout << p.string() << "\n";
    }
    return 0;
}
