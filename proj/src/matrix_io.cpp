// Copyright 2026 The vmc Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vmc/matrix_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <string>

#include "vmc/errors.hpp"

namespace vmc {

namespace {

static_assert(std::endian::native == std::endian::little,
              "matrix dumps assume a little-endian host");

struct Header {
  Index rows = 0;
  Index cols = 0;
  std::string dtype;
};

void write_raw(const std::filesystem::path &path, Index rows, Index cols,
               const char *dtype, const void *data, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "VMCMAT 1\nrows " << rows << "\ncols " << cols << "\ndtype " << dtype
      << "\norder column-major\nendian little\nend\n";
  out.write(static_cast<const char *>(data), static_cast<std::streamsize>(bytes));
  if (!out) throw IoError("failed writing " + path.string());
}

Header read_header(std::ifstream &in, const std::filesystem::path &path) {
  std::string line;
  if (!std::getline(in, line) || line != "VMCMAT 1") {
    throw IoError(path.string() + " is not a VMCMAT file");
  }
  Header h;
  std::string order, endian;
  while (std::getline(in, line) && line != "end") {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "rows") {
      ss >> h.rows;
    } else if (key == "cols") {
      ss >> h.cols;
    } else if (key == "dtype") {
      ss >> h.dtype;
    } else if (key == "order") {
      ss >> order;
    } else if (key == "endian") {
      ss >> endian;
    }
  }
  if (line != "end" || order != "column-major" || endian != "little" ||
      h.rows < 0 || h.cols < 0) {
    throw IoError("unsupported or truncated header in " + path.string());
  }
  return h;
}

template <typename Matrix>
Matrix read_body(const std::filesystem::path &path, const char *dtype) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const Header h = read_header(in, path);
  if (h.dtype != dtype) {
    throw IoError(path.string() + " holds " + h.dtype + ", expected " + dtype);
  }
  Matrix m(h.rows, h.cols);
  const auto bytes =
      static_cast<std::streamsize>(sizeof(typename Matrix::Scalar) * m.size());
  in.read(reinterpret_cast<char *>(m.data()), bytes);
  if (in.gcount() != bytes) throw IoError("truncated data in " + path.string());
  return m;
}

}  // namespace

void write_matrix(const std::filesystem::path &path, const ComplexMatrix &m) {
  write_raw(path, m.rows(), m.cols(), "complex128", m.data(),
            sizeof(Complex) * static_cast<std::size_t>(m.size()));
}

void write_matrix(const std::filesystem::path &path, const RealMatrix &m) {
  write_raw(path, m.rows(), m.cols(), "float64", m.data(),
            sizeof(double) * static_cast<std::size_t>(m.size()));
}

ComplexMatrix read_complex_matrix(const std::filesystem::path &path) {
  return read_body<ComplexMatrix>(path, "complex128");
}

RealMatrix read_real_matrix(const std::filesystem::path &path) {
  return read_body<RealMatrix>(path, "float64");
}

}  // namespace vmc
