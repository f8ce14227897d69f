// scenarios.hpp — figure scenarios, sweeps and custom runs behind the sqzsim CLI

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sqz/params.hpp"

namespace sqzsim {

struct Scenario {
    std::string name;
    sqz::KeyValues overrides; // config file merged with --set
    std::filesystem::path output_dir;
    double rtol{1e-8};
    double atol{1e-10};
    int threads{1};
};

bool known_scenario(const std::string& name);

// Writes the scenario's CSV files and appends each path to `written` as soon as it exists,
// so the caller can remove partial output on failure.
void run_scenario(const Scenario& s, std::vector<std::filesystem::path>& written);

} // namespace sqzsim
