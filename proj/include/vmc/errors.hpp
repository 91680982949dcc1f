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

#ifndef VMC_ERRORS_HPP
#define VMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vmc {

// Base class for every error raised by the library. kind() is a stable
// machine-readable tag used in CLI error records.
class VmcError : public std::runtime_error {
 public:
  VmcError(std::string kind, const std::string &what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string &kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define VMC_DEFINE_ERROR(Name, tag)                                  \
  class Name : public VmcError {                                     \
   public:                                                           \
    explicit Name(const std::string &what) : VmcError(tag, what) {} \
  }

VMC_DEFINE_ERROR(InvalidArgumentError, "invalid_argument");
VMC_DEFINE_ERROR(InvalidSectorError, "invalid_sector");
VMC_DEFINE_ERROR(SectorTooLargeError, "sector_too_large");
VMC_DEFINE_ERROR(DegenerateAmplitudeError, "degenerate_amplitude");
VMC_DEFINE_ERROR(NumericalOverflowError, "numerical_overflow");
VMC_DEFINE_ERROR(UnknownLayerError, "unknown_layer");
VMC_DEFINE_ERROR(SolverError, "solver_error");
VMC_DEFINE_ERROR(OracleError, "oracle_error");
VMC_DEFINE_ERROR(DegenerateStateError, "degenerate_state");
VMC_DEFINE_ERROR(UndefinedMetricError, "undefined_metric");
VMC_DEFINE_ERROR(CapacityError, "capacity_exceeded");
VMC_DEFINE_ERROR(ConfigError, "config_error");
VMC_DEFINE_ERROR(IoError, "io_error");

#undef VMC_DEFINE_ERROR

}  // namespace vmc

#endif  // VMC_ERRORS_HPP
