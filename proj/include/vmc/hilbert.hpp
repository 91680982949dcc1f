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

#ifndef VMC_HILBERT_HPP
#define VMC_HILBERT_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vmc {

inline constexpr int kMaxSites = 63;

// Bit-encoding of a basis state: bit i is set iff spin i is +1.
struct BasisIndex {
  std::uint64_t value = 0;
  friend auto operator<=>(const BasisIndex &, const BasisIndex &) = default;
};

// A basis state of N spin-1/2 sites in the sigma-z eigenbasis, entries +-1.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  explicit SpinConfiguration(std::vector<std::int8_t> spins);
  SpinConfiguration(std::initializer_list<int> spins);

  int size() const { return static_cast<int>(spins_.size()); }
  std::span<const std::int8_t> spins() const { return spins_; }
  int operator[](int i) const { return spins_[static_cast<std::size_t>(i)]; }

  // Sum of all entries (twice the total S^z).
  int total() const;

  // Copy with spins i and j swapped.
  SpinConfiguration exchanged(int i, int j) const;

  // Compact "+-+-" rendering used in error messages and files.
  std::string to_string() const;
  static SpinConfiguration parse(const std::string &text);

  friend bool operator==(const SpinConfiguration &,
                         const SpinConfiguration &) = default;

 private:
  std::vector<std::int8_t> spins_;
};

BasisIndex encode(const SpinConfiguration &config);
SpinConfiguration decode(BasisIndex index, int num_sites);

// Number of configurations of n sites with the given spin sum. Throws
// InvalidSectorError on a parity or range mismatch.
std::uint64_t sector_dimension(int num_sites, int total);

// All configurations with the given spin sum, in ascending BasisIndex order.
std::vector<SpinConfiguration> enumerate_sector(int num_sites, int total);

// Enumerated magnetization sector with O(log D) index lookup.
class Sector {
 public:
  // Throws SectorTooLargeError when the dimension exceeds cap.
  Sector(int num_sites, int total, std::uint64_t cap = 1ull << 20);

  int num_sites() const { return num_sites_; }
  int total() const { return total_; }
  std::size_t dimension() const { return indices_.size(); }

  const SpinConfiguration &configuration(std::size_t k) const {
    return configs_[k];
  }
  const std::vector<SpinConfiguration> &configurations() const {
    return configs_;
  }
  BasisIndex index(std::size_t k) const { return BasisIndex{indices_[k]}; }

  std::optional<std::size_t> position(BasisIndex index) const;

 private:
  int num_sites_;
  int total_;
  std::vector<std::uint64_t> indices_;
  std::vector<SpinConfiguration> configs_;
};

}  // namespace vmc

#endif  // VMC_HILBERT_HPP
