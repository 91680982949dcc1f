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

#ifndef VMC_MATRIX_IO_HPP
#define VMC_MATRIX_IO_HPP

#include <filesystem>

#include "vmc/types.hpp"

namespace vmc {

// Flat binary matrix dump: a short text header
//
//   VMCMAT 1
//   rows <R>
//   cols <C>
//   dtype complex128 | float64
//   order column-major
//   endian little
//   end
//
// followed by the raw entries. complex128 stores (re, im) pairs.
void write_matrix(const std::filesystem::path &path, const ComplexMatrix &m);
void write_matrix(const std::filesystem::path &path, const RealMatrix &m);

ComplexMatrix read_complex_matrix(const std::filesystem::path &path);
RealMatrix read_real_matrix(const std::filesystem::path &path);

}  // namespace vmc

#endif  // VMC_MATRIX_IO_HPP
