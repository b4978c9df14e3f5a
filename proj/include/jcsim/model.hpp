// Copyright 2026 The jcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Fixed-excitation bases and dense operators of a finite Jaynes-Cummings chain
// in the rotating frame:
//
//   H_r = sum_j delta a_j^+ a_j + g V_g + J V_J
//   V_g = sum_j (a_j^+ s_j- + s_j+ a_j)
//   V_J = -sum_<ij> (a_i^+ a_j + a_j^+ a_i)
//
// Units are dimensionless with hbar = 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jcsim/core.hpp"

namespace jcsim {

enum class Qubit : int { g = 0, e = 1 };

struct SiteState {
  int photons = 0;
  Qubit qubit = Qubit::g;

  int excitations() const { return photons + (qubit == Qubit::e ? 1 : 0); }

  auto operator<=>(const SiteState&) const = default;
};

using ProductState = std::vector<SiteState>;

inline int excitations(const ProductState& s) {
  int total = 0;
  for (const auto& site : s) total += site.excitations();
  return total;
}

/// "|1,g>|0,e>" style label.
inline std::string to_string(const ProductState& s) {
  std::string out;
  for (const auto& site : s) {
    out += "|" + std::to_string(site.photons) + "," +
           (site.qubit == Qubit::e ? "e" : "g") + ">";
  }
  return out;
}

namespace detail {

inline void append_compositions(int remaining, int sites_left,
                                std::vector<int>& prefix,
                                std::vector<std::vector<int>>& out) {
  if (sites_left == 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int here = remaining; here >= 0; --here) {
    prefix.push_back(here);
    append_compositions(remaining - here, sites_left - 1, prefix, out);
    prefix.pop_back();
  }
}

// Single-site states carrying n excitations, photon-heavy first.
inline std::vector<SiteState> local_states(int n) {
  if (n == 0) return {SiteState{0, Qubit::g}};
  return {SiteState{n, Qubit::g}, SiteState{n - 1, Qubit::e}};
}

inline std::vector<ProductState> sector_states(int n_sites, int k) {
  std::vector<std::vector<int>> distributions;
  std::vector<int> prefix;
  append_compositions(k, n_sites, prefix, distributions);

  // Excitations concentrated on fewer sites come first; ties go to the
  // distribution loading the lower site indices.
  auto occupied = [](const std::vector<int>& d) {
    return std::count_if(d.begin(), d.end(), [](int x) { return x > 0; });
  };
  std::stable_sort(distributions.begin(), distributions.end(),
                   [&](const auto& a, const auto& b) {
                     if (occupied(a) != occupied(b)) return occupied(a) < occupied(b);
                     return a > b;
                   });

  std::vector<ProductState> states;
  for (const auto& d : distributions) {
    std::vector<std::vector<SiteState>> locals;
    for (int n : d) locals.push_back(local_states(n));
    // Mixed-radix counter with site 0 as the fastest digit.
    std::vector<std::size_t> digit(n_sites, 0);
    while (true) {
      ProductState s(n_sites);
      for (int j = 0; j < n_sites; ++j) s[j] = locals[j][digit[j]];
      states.push_back(std::move(s));
      int j = 0;
      while (j < n_sites && ++digit[j] == locals[j].size()) digit[j++] = 0;
      if (j == n_sites) break;
    }
  }
  return states;
}

}  // namespace detail

/// Ordered list of product states. Usually a single excitation sector; a
/// direct sum of sectors is used for open-system dynamics. Cheap to copy.
class Basis {
 public:
  struct Block {
    int excitations;
    int offset;
    int size;
  };

  Basis() = default;

  /// Direct sum of the listed excitation sectors, in the given order.
  static Basis direct_sum(int n_sites, const std::vector<int>& sectors) {
    if (n_sites < 1) throw InvalidArgument("basis needs at least one site");
    auto data = std::make_shared<Data>();
    data->n_sites = n_sites;
    for (int k : sectors) {
      if (k < 0) throw InvalidArgument("negative excitation number");
      auto states = detail::sector_states(n_sites, k);
      data->blocks.push_back(
          {k, static_cast<int>(data->states.size()), static_cast<int>(states.size())});
      for (auto& s : states) {
        if (!data->index.emplace(s, static_cast<int>(data->states.size())).second) {
          throw InvalidArgument("sector listed twice in direct sum");
        }
        data->states.push_back(std::move(s));
      }
    }
    return Basis(std::move(data));
  }

  int n_sites() const { return data_ ? data_->n_sites : 0; }
  int size() const { return data_ ? static_cast<int>(data_->states.size()) : 0; }

  /// Excitation number of a single-sector basis; nullopt for a direct sum.
  std::optional<int> n_excitations() const {
    if (!data_ || data_->blocks.size() != 1) return std::nullopt;
    return data_->blocks.front().excitations;
  }

  const std::vector<Block>& blocks() const { return data_->blocks; }
  const std::vector<ProductState>& states() const { return data_->states; }
  const ProductState& operator[](int i) const { return data_->states[i]; }

  std::optional<int> index_of(const ProductState& s) const {
    auto it = data_->index.find(s);
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Basis& other) const {
    if (data_ == other.data_) return true;
    if (!data_ || !other.data_) return false;
    return data_->n_sites == other.data_->n_sites && data_->states == other.data_->states;
  }

 private:
  struct Data {
    int n_sites = 0;
    std::vector<Block> blocks;
    std::vector<ProductState> states;
    std::map<ProductState, int> index;
  };

  explicit Basis(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

/// All product states of `n_sites` sites with exactly `n_excitations`
/// excitations. Sites are filled photon-heavy first (|n,g> before |n-1,e>).
inline Basis enumerate_basis(int n_sites, int n_excitations) {
  return Basis::direct_sum(n_sites, {n_excitations});
}

enum class Boundary { open, periodic };

struct LatticeParams {
  int n_sites = 2;
  double g = 1.0;
  double J = 0.0;
  double delta = 0.0;
  Boundary boundary = Boundary::open;
};

/// Dense matrix together with the basis it acts on.
struct HermitianOperator {
  Basis basis;
  Matrix matrix;
};

// ---------------------------------------------------------------------------
// Ladder operators

enum class OpKind { a, a_dagger, sigma_minus, sigma_plus, sigma_x, sigma_z, number };

struct Factor {
  OpKind kind;
  int site;
};

/// Product of factors, written left to right as in the operator expression
/// (the rightmost factor acts first).
using OpString = std::vector<Factor>;

namespace detail {

// Each elementary factor maps a product state to at most one product state.
inline std::optional<std::pair<double, ProductState>> apply(const Factor& f,
                                                            ProductState s,
                                                            double coeff) {
  auto& site = s[f.site];
  switch (f.kind) {
    case OpKind::a:
      if (site.photons == 0) return std::nullopt;
      coeff *= std::sqrt(static_cast<double>(site.photons));
      --site.photons;
      break;
    case OpKind::a_dagger:
      ++site.photons;
      coeff *= std::sqrt(static_cast<double>(site.photons));
      break;
    case OpKind::sigma_minus:
      if (site.qubit == Qubit::g) return std::nullopt;
      site.qubit = Qubit::g;
      break;
    case OpKind::sigma_plus:
      if (site.qubit == Qubit::e) return std::nullopt;
      site.qubit = Qubit::e;
      break;
    case OpKind::sigma_x:
      site.qubit = site.qubit == Qubit::e ? Qubit::g : Qubit::e;
      break;
    case OpKind::sigma_z:
      coeff *= site.qubit == Qubit::e ? 1.0 : -1.0;
      break;
    case OpKind::number:
      coeff *= site.photons;
      break;
  }
  if (coeff == 0.0) return std::nullopt;
  return std::make_pair(coeff, std::move(s));
}

inline void check_sites(const OpString& ops, int n_sites) {
  for (const auto& f : ops) {
    if (f.site < 0 || f.site >= n_sites) {
      throw InvalidArgument("site index " + std::to_string(f.site) +
                            " out of range for " + std::to_string(n_sites) + " sites");
    }
  }
}

}  // namespace detail

/// Matrix of an operator product from `cols` to `rows`. Components that land
/// outside `rows` are dropped, i.e. the result is the restriction
/// P_rows O P_cols.
inline Matrix operator_matrix(const OpString& ops, const Basis& rows, const Basis& cols) {
  if (rows.n_sites() != cols.n_sites()) throw InvalidArgument("bases differ in site count");
  detail::check_sites(ops, cols.n_sites());
  Matrix m = Matrix::Zero(rows.size(), cols.size());
  for (int c = 0; c < cols.size(); ++c) {
    std::optional<std::pair<double, ProductState>> cur{std::in_place, 1.0, cols[c]};
    for (auto it = ops.rbegin(); it != ops.rend() && cur; ++it) {
      cur = detail::apply(*it, std::move(cur->second), cur->first);
    }
    if (!cur) continue;
    if (auto r = rows.index_of(cur->second)) m(*r, c) += cur->first;
  }
  return m;
}

/// Square matrix of an operator product on one basis. Intended for
/// excitation-conserving composites such as a_i^+ s_j-, a_i^+ a_j, s_i+ s_j-.
inline Matrix build_operator(const OpString& ops, const Basis& basis) {
  return operator_matrix(ops, basis, basis);
}

inline Matrix build_operator(OpKind kind, int site, const Basis& basis) {
  return operator_matrix({{kind, site}}, basis, basis);
}

/// Single ladder factor as a rectangular map from `basis` into the sector
/// it lands in.
struct SectorMap {
  Basis rows;
  Matrix matrix;
};

inline SectorMap ladder_map(OpKind kind, int site, const Basis& basis) {
  auto k = basis.n_excitations();
  if (!k) throw InvalidArgument("ladder_map needs a single-sector basis");
  int target = *k;
  switch (kind) {
    case OpKind::a:
    case OpKind::sigma_minus:
      target -= 1;
      break;
    case OpKind::a_dagger:
    case OpKind::sigma_plus:
      target += 1;
      break;
    case OpKind::sigma_z:
    case OpKind::number:
      break;
    case OpKind::sigma_x:
      throw InvalidArgument("sigma_x does not map into a single sector");
  }
  if (target < 0) {
    return {Basis{}, Matrix::Zero(0, basis.size())};
  }
  Basis rows = enumerate_basis(basis.n_sites(), target);
  return {rows, operator_matrix({{kind, site}}, rows, basis)};
}

// ---------------------------------------------------------------------------
// Hamiltonian pieces

/// Nearest-neighbour links of the chain. Two sites have a single link for
/// either boundary condition.
inline std::vector<std::pair<int, int>> chain_links(int n_sites, Boundary boundary) {
  std::vector<std::pair<int, int>> links;
  for (int j = 0; j + 1 < n_sites; ++j) links.emplace_back(j, j + 1);
  if (boundary == Boundary::periodic && n_sites > 2) links.emplace_back(n_sites - 1, 0);
  return links;
}

inline Matrix photon_number(const Basis& basis) {
  Matrix m = Matrix::Zero(basis.size(), basis.size());
  for (int j = 0; j < basis.n_sites(); ++j) m += build_operator(OpKind::number, j, basis);
  return m;
}

inline Matrix excitation_number(const Basis& basis) {
  Matrix m = photon_number(basis);
  for (int j = 0; j < basis.n_sites(); ++j) {
    m += build_operator({{OpKind::sigma_plus, j}, {OpKind::sigma_minus, j}}, basis);
  }
  return m;
}

/// V_g: on-site qubit-cavity exchange.
inline Matrix coupling_operator(const Basis& basis) {
  Matrix m = Matrix::Zero(basis.size(), basis.size());
  for (int j = 0; j < basis.n_sites(); ++j) {
    m += build_operator({{OpKind::a_dagger, j}, {OpKind::sigma_minus, j}}, basis);
    m += build_operator({{OpKind::sigma_plus, j}, {OpKind::a, j}}, basis);
  }
  return m;
}

/// V_J: photon hopping with the minus sign of the lattice Hamiltonian.
inline Matrix hopping_operator(const Basis& basis, Boundary boundary = Boundary::open) {
  Matrix m = Matrix::Zero(basis.size(), basis.size());
  for (auto [i, j] : chain_links(basis.n_sites(), boundary)) {
    m -= build_operator({{OpKind::a_dagger, i}, {OpKind::a, j}}, basis);
    m -= build_operator({{OpKind::a_dagger, j}, {OpKind::a, i}}, basis);
  }
  return m;
}

inline HermitianOperator build_hamiltonian(const LatticeParams& p, const Basis& basis) {
  if (p.n_sites != basis.n_sites()) {
    throw InvalidArgument("lattice has " + std::to_string(p.n_sites) +
                          " sites but basis has " + std::to_string(basis.n_sites()));
  }
  Matrix h = p.delta * photon_number(basis) + p.g * coupling_operator(basis) +
             p.J * hopping_operator(basis, p.boundary);
  return {basis, std::move(h)};
}

// ---------------------------------------------------------------------------
// Site permutations

/// Permutation matrix moving the state of site j to site `site_map[j]`.
inline Matrix site_permutation(const Basis& basis, std::span<const int> site_map) {
  const int n = basis.n_sites();
  if (static_cast<int>(site_map.size()) != n) throw InvalidArgument("site map has wrong length");
  Matrix p = Matrix::Zero(basis.size(), basis.size());
  for (int c = 0; c < basis.size(); ++c) {
    ProductState moved(n);
    for (int j = 0; j < n; ++j) moved[site_map[j]] = basis[c][j];
    auto r = basis.index_of(moved);
    if (!r) throw InvalidArgument("site map does not preserve the basis");
    p(*r, c) = 1.0;
  }
  return p;
}

/// Mirror reflection j -> N-1-j; the site swap for two sites.
inline Matrix reflection_permutation(const Basis& basis) {
  std::vector<int> map(basis.n_sites());
  for (int j = 0; j < basis.n_sites(); ++j) map[j] = basis.n_sites() - 1 - j;
  return site_permutation(basis, map);
}

}  // namespace jcsim
