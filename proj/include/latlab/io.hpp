#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace latlab {

// Shortest round-trip decimal form; locale-independent, so output files are
// byte-stable across runs and thread counts.
std::string format_double(double value);

// Matrices as plain text (one row per line, whitespace-separated decimals)
// or as JSON arrays of arrays; files ending in .json take the JSON path.
Eigen::MatrixXd read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Eigen::MatrixXd& matrix);

// Minimal CSV emitter: header once, then rows of preformatted cells.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::string& path) const;

  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace latlab
