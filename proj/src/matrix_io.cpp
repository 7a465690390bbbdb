#include "epsk/matrix_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "epsk/errors.hpp"

namespace epsk {

namespace {

constexpr char kMagic[5] = {'E', 'P', 'S', 'K', '1'};

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_matrix_csv(const Matrix& X, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for write: " + path);
  out << X.rows() << "," << X.cols() << "\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (j) out << ",";
      out << X(i, j);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for read: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV: " + path);
  Eigen::Index rows = 0, cols = 0;
  {
    std::istringstream hdr(line);
    char comma;
    if (!(hdr >> rows >> comma >> cols) || comma != ',' || rows < 0 || cols < 0)
      throw IoError("bad CSV header (expected rows,cols): " + path);
  }
  Matrix X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw IoError("truncated CSV: " + path);
    std::istringstream row(line);
    std::string cell;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!std::getline(row, cell, ',')) throw IoError("short CSV row: " + path);
      X(i, j) = std::stod(cell);
    }
  }
  return X;
}

void write_matrix_binary(const Matrix& X, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for write: " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t rows = static_cast<std::uint64_t>(X.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(X.cols());
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double v = X(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
  if (!out) throw IoError("write failed: " + path);
}

Matrix read_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for read: " + path);
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, kMagic, 5) != 0)
    throw IoError("bad magic (expected EPSK1): " + path);
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  if (!in) throw IoError("truncated header: " + path);
  Matrix X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), 8);
      if (!in) throw IoError("truncated payload: " + path);
      X(i, j) = v;
    }
  return X;
}

void write_matrix(const Matrix& X, const std::string& path) {
  if (has_suffix(path, ".csv"))
    write_matrix_csv(X, path);
  else
    write_matrix_binary(X, path);
}

Matrix read_matrix(const std::string& path) {
  return has_suffix(path, ".csv") ? read_matrix_csv(path)
                                  : read_matrix_binary(path);
}

}  // namespace epsk
