#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "decolemma/grid.hpp"
#include "decolemma/model.hpp"

namespace decolemma::io {

// One value per line, either `re` or `re,im`. Blank lines and lines starting
// with '#' are skipped. Malformed lines raise InputError with the line number.
std::vector<Complex> read_value_column(std::istream& in, const std::string& source = "<stream>");
std::vector<Complex> read_value_column(const std::filesystem::path& path);

std::vector<double> read_real_column(std::istream& in, const std::string& source = "<stream>");
std::vector<double> read_real_column(const std::filesystem::path& path);

// Row-major complex matrix: each line carries `re,im` pairs for one row.
Eigen::MatrixXcd read_complex_matrix(std::istream& in, const std::string& source = "<stream>");
Eigen::MatrixXcd read_complex_matrix(const std::filesystem::path& path);

void write_complex_matrix(std::ostream& out, const Eigen::MatrixXcd& m);

/**
 * Model description file, line-oriented `key: value`:
 *
 *     hbar: 1
 *     energies: energies.csv
 *     rho: rho.csv
 *     observable: observable.csv
 *
 * Relative paths resolve against the directory of the description file.
 * `hbar` is optional (default 1).
 */
DiscreteModel load_model(const std::filesystem::path& path);

// Writes the description file plus the three CSVs next to it.
void save_model(const DiscreteModel& model, const std::filesystem::path& path);

}  // namespace decolemma::io
