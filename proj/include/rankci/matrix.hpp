#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace rankci {

// Dense n x p data matrix, row-major. Immutable by convention after
// construction; all operations below return fresh values, so instances
// are safe to share read-only across workers.
struct DataMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;  // row-major, length n_rows * n_cols

  DataMatrix() = default;
  DataMatrix(std::size_t n, std::size_t p, std::vector<double> v)
      : n_rows(n), n_cols(p), values(std::move(v)) {
    if (n_rows == 0 || n_cols == 0)
      throw std::invalid_argument("DataMatrix: dimensions must be positive");
    if (values.size() != n_rows * n_cols)
      throw std::invalid_argument("DataMatrix: value count does not match dimensions");
  }

  double operator()(std::size_t i, std::size_t j) const {
    return values[i * n_cols + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values[i * n_cols + j];
  }

  double aspect_ratio() const {
    return static_cast<double>(n_cols) / static_cast<double>(n_rows);
  }

  using EigenRowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Eigen::Map<const EigenRowMajor> map() const {
    return {values.data(), static_cast<Eigen::Index>(n_rows),
            static_cast<Eigen::Index>(n_cols)};
  }
};

// Descending nonnegative eigenvalues of a sample covariance matrix
// X X^T / n, plus the context they were computed in.
struct EigenSpectrum {
  std::vector<double> eigenvalues;  // non-increasing, >= 0
  std::size_t n_used = 0;           // covariance divisor
  double aspect_ratio = 0.0;        // p/n of the source matrix
};

enum class MatrixFormat { csv, bin };

// ---------------------------------------------------------------------
// File I/O
//
// bin layout: 8-byte magic "SRCIMAT1", little-endian u64 n_rows and
// n_cols, then row-major little-endian f64 payload. Bit-exact across
// round trips.
// ---------------------------------------------------------------------

namespace detail {

inline constexpr char kBinMagic[8] = {'S', 'R', 'C', 'I', 'M', 'A', 'T', '1'};

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

inline std::uint64_t get_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

inline void put_f64_le(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64_le(out, bits);
}

inline double get_f64_le(std::istream& in) {
  const std::uint64_t bits = get_u64_le(in);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

// Parses a CSV cell. Missing or non-numeric cells map to 0.0; *numeric
// reports whether the cell parsed fully as a finite number (used for
// header detection).
inline double parse_cell(const std::string& cell, bool* numeric) {
  std::size_t begin = cell.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    *numeric = false;
    return 0.0;  // missing value rule
  }
  std::size_t end = cell.find_last_not_of(" \t\r") + 1;
  const std::string body = cell.substr(begin, end - begin);
  char* stop = nullptr;
  const double v = std::strtod(body.c_str(), &stop);
  if (stop != body.c_str() + body.size() || !std::isfinite(v)) {
    *numeric = false;
    return 0.0;
  }
  *numeric = true;
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace detail

inline DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::bin) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_matrix: cannot open " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, detail::kBinMagic, 8) != 0)
      throw std::runtime_error("load_matrix: bad magic in " + path.string());
    const std::uint64_t n = detail::get_u64_le(in);
    const std::uint64_t p = detail::get_u64_le(in);
    if (!in || n == 0 || p == 0)
      throw std::runtime_error("load_matrix: bad dimensions in " + path.string());
    std::vector<double> vals(static_cast<std::size_t>(n * p));
    for (auto& v : vals) v = detail::get_f64_le(in);
    if (!in) throw std::runtime_error("load_matrix: truncated payload in " + path.string());
    for (auto& v : vals)
      if (!std::isfinite(v)) v = 0.0;  // missing value rule
    return DataMatrix(n, p, std::move(vals));
  }

  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_matrix: cannot open " + path.string());
  std::string line;
  std::vector<double> vals;
  std::size_t n_cols = 0, n_rows = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = detail::split_csv_line(line);
    std::vector<double> row(cells.size());
    bool any_non_numeric_text = false;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      bool numeric = false;
      row[j] = detail::parse_cell(cells[j], &numeric);
      if (!numeric && cells[j].find_first_not_of(" \t\r") != std::string::npos)
        any_non_numeric_text = true;
    }
    if (first_data_row && any_non_numeric_text) continue;  // header row
    first_data_row = false;
    if (n_cols == 0) n_cols = row.size();
    if (row.size() != n_cols)
      throw std::runtime_error("load_matrix: ragged CSV row in " + path.string());
    vals.insert(vals.end(), row.begin(), row.end());
    ++n_rows;
  }
  if (n_rows == 0 || n_cols == 0)
    throw std::runtime_error("load_matrix: no data rows in " + path.string());
  return DataMatrix(n_rows, n_cols, std::move(vals));
}

inline void write_matrix(const DataMatrix& m, const std::filesystem::path& path,
                         MatrixFormat format) {
  if (format == MatrixFormat::bin) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_matrix: cannot open " + path.string());
    out.write(detail::kBinMagic, 8);
    detail::put_u64_le(out, m.n_rows);
    detail::put_u64_le(out, m.n_cols);
    for (double v : m.values) detail::put_f64_le(out, v);
    if (!out) throw std::runtime_error("write_matrix: write failed for " + path.string());
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix: cannot open " + path.string());
  char buf[40];
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    for (std::size_t j = 0; j < m.n_cols; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_matrix: write failed for " + path.string());
}

// ---------------------------------------------------------------------
// Column standardization: mean 0, sample sd 1 (divisor n-1).
// Constant columns map to all zeros rather than NaN.
// ---------------------------------------------------------------------

inline DataMatrix standardize_columns(const DataMatrix& m) {
  if (m.n_rows < 2)
    throw std::invalid_argument("standardize_columns: need at least 2 rows");
  const std::size_t n = m.n_rows, p = m.n_cols;
  std::vector<double> mean(p, 0.0), scale(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) mean[j] += m(i, j);
  for (std::size_t j = 0; j < p; ++j) mean[j] /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      const double d = m(i, j) - mean[j];
      scale[j] += d * d;
    }
  for (std::size_t j = 0; j < p; ++j)
    scale[j] = std::sqrt(scale[j] / static_cast<double>(n - 1));

  DataMatrix out = m;
  for (std::size_t j = 0; j < p; ++j) {
    if (scale[j] > 0.0) {
      const double inv = 1.0 / scale[j];
      for (std::size_t i = 0; i < n; ++i)
        out(i, j) = (m(i, j) - mean[j]) * inv;
    } else {
      for (std::size_t i = 0; i < n; ++i) out(i, j) = 0.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------
// Covariance spectrum: descending eigenvalues of X X^T / n, computed as
// squared singular values of X (never forming the Gram matrix).
// ---------------------------------------------------------------------

namespace detail {

// Shared by the DataMatrix front end and the subsampling hot paths.
inline std::vector<double> spectrum_of(const Eigen::MatrixXd& x, std::size_t n_used) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("covariance_spectrum: SVD failed to converge");
  const auto& sv = svd.singularValues();
  std::vector<double> ev(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    ev[static_cast<std::size_t>(i)] = sv[i] * sv[i] / static_cast<double>(n_used);
  return ev;  // BDCSVD returns singular values sorted descending
}

}  // namespace detail

inline EigenSpectrum covariance_spectrum(const DataMatrix& m) {
  if (m.n_rows == 0 || m.n_cols == 0)
    throw std::invalid_argument("covariance_spectrum: empty matrix");
  EigenSpectrum spec;
  spec.eigenvalues = detail::spectrum_of(m.map(), m.n_rows);
  spec.n_used = m.n_rows;
  spec.aspect_ratio = m.aspect_ratio();
  return spec;
}

// ---------------------------------------------------------------------
// Submatrix extraction in the given index order.
// ---------------------------------------------------------------------

namespace detail {

inline void check_indices(std::span<const std::uint32_t> ids, std::size_t bound,
                          const char* what) {
  std::vector<bool> seen(bound, false);
  for (auto id : ids) {
    if (id >= bound)
      throw std::out_of_range(std::string("submatrix: ") + what + " index out of range");
    if (seen[id])
      throw std::invalid_argument(std::string("submatrix: duplicate ") + what + " index");
    seen[id] = true;
  }
}

}  // namespace detail

inline DataMatrix submatrix(const DataMatrix& m, std::span<const std::uint32_t> row_ids,
                            std::span<const std::uint32_t> col_ids) {
  detail::check_indices(row_ids, m.n_rows, "row");
  detail::check_indices(col_ids, m.n_cols, "column");
  if (row_ids.empty() || col_ids.empty())
    throw std::invalid_argument("submatrix: empty index set");
  std::vector<double> vals;
  vals.reserve(row_ids.size() * col_ids.size());
  for (auto i : row_ids) {
    const double* row = m.values.data() + static_cast<std::size_t>(i) * m.n_cols;
    for (auto j : col_ids) vals.push_back(row[j]);
  }
  return DataMatrix(row_ids.size(), col_ids.size(), std::move(vals));
}

}  // namespace rankci
