#include "ilab/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ilab/linalg.hpp"

namespace ilab {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_state_row(std::ostream& os, double t, const Eigen::VectorXd& x,
                     int pre, int post) {
  os << format_double(t);
  for (Eigen::Index j = 0; j < x.size(); ++j) os << ',' << format_double(x[j]);
  os << ',' << pre << ',' << post << '\n';
}

std::vector<double> split_numbers(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto comma = line.find(',', pos);
    const auto end = comma == std::string::npos ? line.size() : comma;
    const std::string tok = line.substr(pos, end - pos);
    char* tail = nullptr;
    const double v = std::strtod(tok.c_str(), &tail);
    if (tok.empty() || tail == tok.c_str() || *tail != '\0')
      throw std::invalid_argument("csv: bad number '" + tok + "' on line " +
                                  std::to_string(lineno));
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  const auto dim = trajectory.state(0).size();
  os << 't';
  for (Eigen::Index j = 0; j < dim; ++j) os << ",x" << (j + 1);
  os << ",is_jump_pre,is_jump_post\n";
  const auto& jumps = trajectory.jump_records();
  std::size_t next_jump = 0;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const double t = trajectory.time(i);
    const bool at_jump = next_jump < jumps.size() && jumps[next_jump].time == t;
    if (at_jump) write_state_row(os, t, jumps[next_jump].pre, 1, 0);
    write_state_row(os, t, trajectory.state(i), 0, at_jump ? 1 : 0);
    if (at_jump) ++next_jump;
  }
}

void write_norm_csv(std::ostream& os,
                    const std::vector<std::pair<double, double>>& samples) {
  os << "t,norm\n";
  for (const auto& [t, v] : samples)
    os << format_double(t) << ',' << format_double(v) << '\n';
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << format_double(m(r, c));
    }
    os << '\n';
  }
}

std::vector<std::pair<double, double>> read_norm_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header))
    throw std::invalid_argument("csv: empty input");
  bool norms;
  if (header == "t,norm")
    norms = true;
  else if (header.rfind("t,x1", 0) == 0)
    norms = false;
  else
    throw std::invalid_argument("csv: unrecognized header '" + header + "'");

  std::vector<std::pair<double, double>> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto nums = split_numbers(line, lineno);
    if (norms) {
      if (nums.size() != 2)
        throw std::invalid_argument("csv: expected 2 columns on line " +
                                    std::to_string(lineno));
      out.emplace_back(nums[0], nums[1]);
    } else {
      // t, x1..xn, is_jump_pre, is_jump_post
      if (nums.size() < 4)
        throw std::invalid_argument("csv: expected >= 4 columns on line " +
                                    std::to_string(lineno));
      double norm = 0.0;
      for (std::size_t j = 1; j + 2 < nums.size(); ++j)
        norm = std::max(norm, std::abs(nums[j]));
      out.emplace_back(nums[0], norm);
    }
  }
  if (out.empty()) throw std::invalid_argument("csv: no data rows");
  return out;
}

}  // namespace ilab
