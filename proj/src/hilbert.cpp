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

#include "vmc/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "vmc/errors.hpp"

namespace vmc {

SpinConfiguration::SpinConfiguration(std::vector<std::int8_t> spins)
    : spins_(std::move(spins)) {
  if (spins_.size() > static_cast<std::size_t>(kMaxSites)) {
    throw InvalidArgumentError("configuration exceeds " +
                               std::to_string(kMaxSites) + " sites");
  }
  for (auto s : spins_) {
    if (s != 1 && s != -1) {
      throw InvalidArgumentError("spin entries must be -1 or +1, got " +
                                 std::to_string(int{s}));
    }
  }
}

SpinConfiguration::SpinConfiguration(std::initializer_list<int> spins)
    : SpinConfiguration([&] {
        std::vector<std::int8_t> v;
        v.reserve(spins.size());
        for (int s : spins) {
          if (s != 1 && s != -1) {
            throw InvalidArgumentError(
                "spin entries must be -1 or +1, got " + std::to_string(s));
          }
          v.push_back(static_cast<std::int8_t>(s));
        }
        return v;
      }()) {}

int SpinConfiguration::total() const {
  return std::accumulate(spins_.begin(), spins_.end(), 0);
}

SpinConfiguration SpinConfiguration::exchanged(int i, int j) const {
  SpinConfiguration out = *this;
  std::swap(out.spins_[static_cast<std::size_t>(i)],
            out.spins_[static_cast<std::size_t>(j)]);
  return out;
}

std::string SpinConfiguration::to_string() const {
  std::string s;
  s.reserve(spins_.size());
  for (auto v : spins_) s.push_back(v > 0 ? '+' : '-');
  return s;
}

SpinConfiguration SpinConfiguration::parse(const std::string &text) {
  std::vector<std::int8_t> v;
  v.reserve(text.size());
  for (char c : text) {
    if (c == '+') {
      v.push_back(1);
    } else if (c == '-') {
      v.push_back(-1);
    } else {
      throw InvalidArgumentError("bad configuration character '" +
                                 std::string(1, c) + "'");
    }
  }
  return SpinConfiguration(std::move(v));
}

BasisIndex encode(const SpinConfiguration &config) {
  std::uint64_t bits = 0;
  const auto spins = config.spins();
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] > 0) bits |= (std::uint64_t{1} << i);
  }
  return BasisIndex{bits};
}

SpinConfiguration decode(BasisIndex index, int num_sites) {
  if (num_sites < 0 || num_sites > kMaxSites) {
    throw InvalidArgumentError("site count out of range");
  }
  if (num_sites < 64 && (index.value >> num_sites) != 0) {
    throw InvalidArgumentError("basis index " + std::to_string(index.value) +
                               " out of range for " +
                               std::to_string(num_sites) + " sites");
  }
  std::vector<std::int8_t> spins(static_cast<std::size_t>(num_sites));
  for (int i = 0; i < num_sites; ++i) {
    spins[static_cast<std::size_t>(i)] = ((index.value >> i) & 1u) ? 1 : -1;
  }
  return SpinConfiguration(std::move(spins));
}

namespace {

int up_count(int num_sites, int total) {
  if (num_sites < 0 || num_sites > kMaxSites) {
    throw InvalidSectorError("site count " + std::to_string(num_sites) +
                             " out of range");
  }
  if (std::abs(total) > num_sites || (num_sites + total) % 2 != 0) {
    throw InvalidSectorError("no configurations of " +
                             std::to_string(num_sites) +
                             " spins sum to " + std::to_string(total));
  }
  return (num_sites + total) / 2;
}

}  // namespace

std::uint64_t sector_dimension(int num_sites, int total) {
  const int k = up_count(num_sites, total);
  // Multiplicative binomial; exact for n <= 63 at every step.
  std::uint64_t c = 1;
  const int kk = std::min(k, num_sites - k);
  for (int i = 1; i <= kk; ++i) {
    c = c * static_cast<std::uint64_t>(num_sites - kk + i) /
        static_cast<std::uint64_t>(i);
  }
  return c;
}

std::vector<SpinConfiguration> enumerate_sector(int num_sites, int total) {
  const int ups = up_count(num_sites, total);
  std::vector<SpinConfiguration> out;
  out.reserve(sector_dimension(num_sites, total));
  if (ups == 0) {
    out.push_back(decode(BasisIndex{0}, num_sites));
    return out;
  }
  // Gosper's hack walks fixed-popcount words in increasing order.
  const std::uint64_t limit = std::uint64_t{1} << num_sites;
  std::uint64_t v = (std::uint64_t{1} << ups) - 1;
  while (v < limit) {
    out.push_back(decode(BasisIndex{v}, num_sites));
    const std::uint64_t t = v | (v - 1);
    const std::uint64_t next =
        (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    if (next <= v) break;
    v = next;
  }
  return out;
}

Sector::Sector(int num_sites, int total, std::uint64_t cap)
    : num_sites_(num_sites), total_(total) {
  const std::uint64_t dim = sector_dimension(num_sites, total);
  if (dim > cap) {
    throw SectorTooLargeError("sector of " + std::to_string(num_sites) +
                              " sites with total " + std::to_string(total) +
                              " has dimension " + std::to_string(dim) +
                              " > cap " + std::to_string(cap));
  }
  configs_ = enumerate_sector(num_sites, total);
  indices_.reserve(configs_.size());
  for (const auto &c : configs_) indices_.push_back(encode(c).value);
}

std::optional<std::size_t> Sector::position(BasisIndex index) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index.value);
  if (it == indices_.end() || *it != index.value) return std::nullopt;
  return static_cast<std::size_t>(it - indices_.begin());
}

}  // namespace vmc
