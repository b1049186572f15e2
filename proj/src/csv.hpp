#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace satcs::csv {

// All numeric output uses %.17g so doubles round-trip exactly.
std::string format_double(double v);

void write_matrix(const std::string& path, const Eigen::MatrixXd& m);
void write_vector(const std::string& path, const Eigen::VectorXd& v);
void write_int_vector(const std::string& path, const Eigen::VectorXi& v);

// expected_cols >= 0 pins the width (needed to size matrices with zero rows).
Eigen::MatrixXd read_matrix(const std::string& path, Eigen::Index expected_cols = -1);
Eigen::VectorXd read_vector(const std::string& path);
Eigen::VectorXi read_int_vector(const std::string& path);

void write_kv(const std::string& path,
              const std::vector<std::pair<std::string, std::string>>& kv);
std::map<std::string, std::string> read_kv(const std::string& path);

std::vector<std::string> split_fields(const std::string& line);
double parse_double(const std::string& token, const std::string& context);
long long parse_int(const std::string& token, const std::string& context);

}  // namespace satcs::csv
