#include "gkb/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>
#include <vector>

#include "gkb/errors.hpp"

namespace gkb {

namespace {

struct MmHeader {
  bool coordinate = true;
  bool symmetric = false;
};

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

MmHeader read_header(std::ifstream& in, const std::string& path, std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  line_no = 1;
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") parse_fail(path, 1, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") parse_fail(path, 1, "unsupported object '" + object + "'");
  MmHeader h;
  if (format == "coordinate") {
    h.coordinate = true;
  } else if (format == "array") {
    h.coordinate = false;
  } else {
    parse_fail(path, 1, "unsupported format '" + format + "'");
  }
  if (field != "real") parse_fail(path, 1, "unsupported field '" + field + "'");
  if (symmetry == "general") {
    h.symmetric = false;
  } else if (symmetry == "symmetric") {
    h.symmetric = true;
  } else {
    parse_fail(path, 1, "unsupported symmetry '" + symmetry + "'");
  }
  return h;
}

bool next_content_line(std::ifstream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) continue;  // blank
    if (line[i] == '%') continue;    // comment
    return true;
  }
  return false;
}

SparseMatrix read_impl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::size_t line_no = 0;
  const MmHeader h = read_header(in, path, line_no);

  std::string line;
  if (!next_content_line(in, line, line_no)) {
    parse_fail(path, line_no + 1, "missing size line");
  }
  std::istringstream ss(line);
  long long rows = -1, cols = -1, nnz = -1;
  if (h.coordinate) {
    if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
      parse_fail(path, line_no, "bad coordinate size line");
    }
  } else {
    if (!(ss >> rows >> cols) || rows < 0 || cols < 0) {
      parse_fail(path, line_no, "bad array size line");
    }
    nnz = rows * cols;
  }

  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  trip.reserve(static_cast<std::size_t>(nnz) * (h.symmetric ? 2 : 1));

  if (h.coordinate) {
    for (long long k = 0; k < nnz; ++k) {
      if (!next_content_line(in, line, line_no)) {
        parse_fail(path, line_no + 1, "unexpected end of file; expected " +
                                          std::to_string(nnz) + " entries");
      }
      std::istringstream es(line);
      long long i = 0, j = 0;
      double v = 0.0;
      if (!(es >> i >> j >> v)) parse_fail(path, line_no, "bad coordinate entry");
      if (i < 1 || i > rows || j < 1 || j > cols) {
        parse_fail(path, line_no, "index out of bounds");
      }
      const std::size_t i0 = static_cast<std::size_t>(i - 1);
      const std::size_t j0 = static_cast<std::size_t>(j - 1);
      if (h.symmetric) {
        if (j0 > i0) parse_fail(path, line_no, "upper-triangle entry in symmetric file");
        trip.emplace_back(i0, j0, v);
        if (i0 != j0) trip.emplace_back(j0, i0, v);
      } else {
        trip.emplace_back(i0, j0, v);
      }
    }
  } else {
    // array format: column-major dense listing
    for (long long j = 0; j < cols; ++j) {
      const long long i_start = h.symmetric ? j : 0;
      for (long long i = i_start; i < rows; ++i) {
        if (!next_content_line(in, line, line_no)) {
          parse_fail(path, line_no + 1, "unexpected end of array data");
        }
        std::istringstream es(line);
        double v = 0.0;
        if (!(es >> v)) parse_fail(path, line_no, "bad array entry");
        const std::size_t i0 = static_cast<std::size_t>(i);
        const std::size_t j0 = static_cast<std::size_t>(j);
        if (v != 0.0) {
          trip.emplace_back(i0, j0, v);
          if (h.symmetric && i0 != j0) trip.emplace_back(j0, i0, v);
        }
      }
    }
  }
  return SparseMatrix::from_triplets(static_cast<std::size_t>(rows),
                                     static_cast<std::size_t>(cols), std::move(trip));
}

}  // namespace

SparseMatrix mm_read_matrix(const std::string& path) { return read_impl(path); }

Vector mm_read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::size_t line_no = 0;
  const MmHeader h = read_header(in, path, line_no);
  std::string line;
  if (!next_content_line(in, line, line_no)) {
    parse_fail(path, line_no + 1, "missing size line");
  }
  std::istringstream ss(line);
  long long rows = -1, cols = -1;
  if (h.coordinate) {
    long long nnz = -1;
    if (!(ss >> rows >> cols >> nnz)) parse_fail(path, line_no, "bad size line");
  } else {
    if (!(ss >> rows >> cols)) parse_fail(path, line_no, "bad size line");
  }
  if (cols != 1) {
    parse_fail(path, line_no, "expected a single column, got " + std::to_string(cols));
  }
  in.close();
  const SparseMatrix m = read_impl(path);
  Vector v(m.n_rows, 0.0);
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    for (std::size_t k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k) {
      v[i] = m.values[k];
    }
  }
  return v;
}

void mm_write(const std::string& path, const SparseMatrix& a) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f, "%zu %zu %zu\n", a.n_rows, a.n_cols, a.nnz());
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      std::fprintf(f, "%zu %zu %.17g\n", i + 1, a.col_indices[k] + 1, a.values[k]);
    }
  }
  std::fclose(f);
}

void mm_write(const std::string& path, const Vector& v) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "%%%%MatrixMarket matrix array real general\n");
  std::fprintf(f, "%zu 1\n", v.size());
  for (double x : v) std::fprintf(f, "%.17g\n", x);
  std::fclose(f);
}

}  // namespace gkb
