#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ilab/integrator.hpp"

namespace ilab {

// 17 significant digits; enough to round-trip a double exactly, and stable
// across runs so equal inputs give byte-identical files.
std::string format_double(double v);

// Header t,x1,...,xn,is_jump_pre,is_jump_post. At each impulse instant the
// pre-jump row comes immediately before the post-jump row at the same t.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

// Header t,norm.
void write_norm_csv(std::ostream& os,
                    const std::vector<std::pair<double, double>>& samples);

// Rows of comma-separated entries, one row per matrix row.
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);

// Reads back either CSV layout; trajectory states are reduced to sup norms.
// Pre-jump rows are kept as ordinary samples. Throws std::invalid_argument
// on malformed input.
std::vector<std::pair<double, double>> read_norm_csv(std::istream& is);

}  // namespace ilab
