#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcc/clonoid.hpp"
#include "lcc/pminor.hpp"

namespace lcc {

/// Finite poset of masks ordered by inclusion, with its cover relation.
struct MaskLattice {
  std::vector<PMinorSubset> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> covers;  // (lower, upper)
};

inline MaskLattice hasse(std::vector<PMinorSubset> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  MaskLattice lat{std::move(nodes), {}};
  const auto n = lat.nodes.size();
  std::vector<std::vector<bool>> below(n, std::vector<bool>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) below[a][b] = a != b && is_subset(lat.nodes[a], lat.nodes[b]);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!below[a][b]) continue;
      bool cover = true;
      for (std::size_t c = 0; c < n && cover; ++c) cover = !(below[a][c] && below[c][b]);
      if (cover) lat.covers.emplace_back(a, b);
    }
  }
  return lat;
}

/// Every finite p-minor subset with all elements <= bound.
inline std::vector<PMinorSubset> bounded_masks(PrimeModulus p, std::uint64_t bound, bool with_zero) {
  const std::uint32_t period = p.value() - 1;
  std::vector<std::vector<ClassBound>> choices(period);
  for (std::uint32_t r = 1; r <= period; ++r) {
    choices[r - 1].push_back(ClassBound::empty());
    for (std::uint64_t s = r; s <= bound; s += period) choices[r - 1].push_back(ClassBound::finite(s));
  }
  std::vector<PMinorSubset> out;
  std::vector<std::size_t> idx(period, 0);
  for (;;) {
    std::vector<ClassBound> sups(period);
    for (std::uint32_t r = 0; r < period; ++r) sups[r] = choices[r][idx[r]];
    out.emplace_back(p, false, sups);
    if (with_zero) out.emplace_back(p, true, sups);
    std::size_t r = period;
    while (r > 0) {
      --r;
      if (++idx[r] < choices[r].size()) break;
      idx[r] = 0;
      if (r == 0) return out;
    }
  }
}

inline std::string to_dot(const MaskLattice& lat, const std::string& name) {
  std::string s = "digraph \"" + name + "\" {\n  rankdir=BT;\n  node [shape=plaintext];\n";
  for (std::size_t i = 0; i < lat.nodes.size(); ++i) {
    s += "  n" + std::to_string(i) + " [label=\"" + to_string(lat.nodes[i]) + "\"];\n";
  }
  for (const auto& [a, b] : lat.covers) s += "  n" + std::to_string(a) + " -> n" + std::to_string(b) + ";\n";
  s += "}\n";
  return s;
}

inline std::vector<PMinorSubset> masks_of(const std::vector<Clonoid>& cs) {
  std::vector<PMinorSubset> out;
  for (const auto& c : cs) out.push_back(c.mask());
  return out;
}

}  // namespace lcc
