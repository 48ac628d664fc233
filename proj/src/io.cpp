#include "latlab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "latlab/errors.hpp"

namespace latlab {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

namespace {

bool has_json_extension(const std::string& path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json";
}

Eigen::MatrixXd matrix_from_rows(const std::vector<std::vector<double>>& rows,
                                 const std::string& path) {
  if (rows.empty())
    throw ParseError("matrix file has no rows: " + path);
  const std::size_t cols = rows.front().size();
  if (cols == 0) throw ParseError("matrix file has an empty row: " + path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw ParseError("matrix file has ragged rows: " + path);
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

}  // namespace

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::vector<std::vector<double>> rows;
  if (has_json_extension(path)) {
    const auto parsed = nlohmann::json::parse(read_text_file(path), nullptr,
                                              /*allow_exceptions=*/true);
    if (!parsed.is_array())
      throw ParseError("JSON matrix must be an array of arrays: " + path);
    for (const auto& row : parsed) {
      if (!row.is_array())
        throw ParseError("JSON matrix must be an array of arrays: " + path);
      rows.push_back(row.get<std::vector<double>>());
    }
    return matrix_from_rows(rows, path);
  }

  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof() && ls.fail()) {
      ls.clear();
      std::string bad;
      ls >> bad;
      throw ParseError("matrix file has a non-numeric token '" + bad +
                       "': " + path);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return matrix_from_rows(rows, path);
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& matrix) {
  if (has_json_extension(path)) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < matrix.cols(); ++j) row.push_back(matrix(i, j));
      rows.push_back(std::move(row));
    }
    write_text_file(path, rows.dump(2) + "\n");
    return;
  }
  std::ostringstream out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

CsvWriter::CsvWriter(std::vector<std::string> header)
    : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("CsvWriter: row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
  std::ostringstream out;
  for (std::size_t j = 0; j < header_.size(); ++j) {
    if (j) out << ',';
    out << header_[j];
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  }
  return out.str();
}

void CsvWriter::write(const std::string& path) const {
  write_text_file(path, str());
}

}  // namespace latlab
