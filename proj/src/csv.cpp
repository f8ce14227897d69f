// csv.cpp — deterministic CSV formatting

#include "sqz/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sqz/errors.hpp"

namespace sqz::csv {

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

std::string to_string(const Table& t) {
    std::ostringstream out;
    for (const auto& p : t.provenance) {
        out << "# " << p << '\n';
    }
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        out << (i ? "," : "") << t.header[i];
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << '\n';
    }
    return out.str();
}

void write(const std::filesystem::path& path, const Table& t) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ConfigError("cannot open " + path.string() + " for writing");
    }
    f << to_string(t);
    if (!f) {
        throw ConfigError("failed writing " + path.string());
    }
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.push_back(line);
        }
    }
    return out;
}

Table trajectory_table(const Trajectory& traj, std::vector<std::string> provenance) {
    Table t;
    t.provenance = std::move(provenance);
    t.header = {"gamma0_t [1]",   "Sx [1]",        "Sy [1]",      "Sz [1]",
                "xi_R2 [1]",      "inv_xi_R2 [1]", "relaxation_rate [N*Gamma0]",
                "min_eig [1]",    "trace_error [1]"};
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const auto& xi = traj.xi_R_squared[i];
        t.rows.push_back({number(traj.t[i]), number(traj.mean_S[i].x()), number(traj.mean_S[i].y()),
                          number(traj.mean_S[i].z()), xi ? number(*xi) : "",
                          xi ? number(1.0 / *xi) : "", number(traj.relaxation_rate[i]),
                          number(traj.min_eig[i]), number(traj.trace_error[i])});
    }
    return t;
}

Table matrix_table(const Eigen::MatrixXcd& m, const std::string& unit, std::vector<std::string> provenance) {
    Table t;
    t.provenance = std::move(provenance);
    const bool complex = m.imag().cwiseAbs().maxCoeff() > 0.0;
    t.header.push_back("row [qubit]");
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (complex) {
            t.header.push_back("re_" + std::to_string(c) + " [" + unit + "]");
            t.header.push_back("im_" + std::to_string(c) + " [" + unit + "]");
        } else {
            t.header.push_back("col_" + std::to_string(c) + " [" + unit + "]");
        }
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<std::string> row{std::to_string(r)};
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(number(m(r, c).real()));
            if (complex) {
                row.push_back(number(m(r, c).imag()));
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace sqz::csv
