// csv.hpp — CSV tables with '#' provenance lines, plus trajectory and coupling exporters

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqz/dynamics.hpp"

namespace sqz::csv {

struct Table {
    std::vector<std::string> provenance; // written as "# line"
    std::vector<std::string> header;     // column names with units, e.g. "gamma0_t [1]"
    std::vector<std::vector<std::string>> rows;
};

// Fixed, locale-independent formatting so identical inputs give identical bytes.
std::string number(double v);

std::string to_string(const Table& t);
void write(const std::filesystem::path& path, const Table& t);

// Splits multi-line text into provenance lines.
std::vector<std::string> lines(const std::string& text);

// Columns: t, Sx, Sy, Sz, xi_R^2, 1/xi_R^2, relaxation rate, min eigenvalue, trace error.
Table trajectory_table(const Trajectory& traj, std::vector<std::string> provenance);

// One row per qubit; real and imaginary parts for complex channels.
Table matrix_table(const Eigen::MatrixXcd& m, const std::string& unit, std::vector<std::string> provenance);

} // namespace sqz::csv
