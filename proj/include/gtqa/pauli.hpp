#pragma once

// Pauli-string expansions of operators on q qubits. Qubit 1 is the most
// significant (leftmost) bit of a basis label, so the word "XIZ" acts as X
// on the first label bit and Z on the last.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gtqa/error.hpp"
#include "gtqa/linalg.hpp"

namespace gtqa {

inline constexpr int kMaxPauliQubits = 12;
inline constexpr double kPauliTolerance = 1e-12;

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::string word) : word_(std::move(word)) {
    for (char c : word_) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw InvalidParameter("Pauli word '" + word_ + "' contains a symbol outside {I,X,Y,Z}");
      }
    }
  }

  // Word from bit masks; bit (q - 1 - i) of a mask belongs to qubit i + 1.
  static PauliString from_masks(int qubits, std::uint32_t x_mask, std::uint32_t z_mask) {
    std::string w(static_cast<std::size_t>(qubits), 'I');
    for (int i = 0; i < qubits; ++i) {
      const std::uint32_t bit = 1u << (qubits - 1 - i);
      const bool x = x_mask & bit, z = z_mask & bit;
      w[static_cast<std::size_t>(i)] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return PauliString(std::move(w));
  }

  const std::string& word() const noexcept { return word_; }
  int qubits() const noexcept { return static_cast<int>(word_.size()); }

  int weight() const noexcept {
    return static_cast<int>(std::count_if(word_.begin(), word_.end(), [](char c) { return c != 'I'; }));
  }

  // Flip mask (X or Y) and phase mask (Z or Y).
  std::uint32_t x_mask() const noexcept { return mask('X', 'Y'); }
  std::uint32_t z_mask() const noexcept { return mask('Z', 'Y'); }
  int y_count() const noexcept { return static_cast<int>(std::count(word_.begin(), word_.end(), 'Y')); }

  // True when the word carries at least two distinct non-identity symbols.
  bool is_cross_term() const noexcept {
    bool seen[3] = {false, false, false};
    for (char c : word_) {
      if (c == 'X') seen[0] = true;
      if (c == 'Y') seen[1] = true;
      if (c == 'Z') seen[2] = true;
    }
    return int(seen[0]) + int(seen[1]) + int(seen[2]) >= 2;
  }

  // Dense real matrix; only defined for words with an even number of Ys.
  Matrix matrix() const {
    if (y_count() % 2 != 0) throw InvalidParameter("Pauli word " + word_ + " is not real");
    const std::size_t dim = std::size_t{1} << qubits();
    Matrix m(dim, dim);
    for (std::size_t b = 0; b < dim; ++b) m(b ^ x_mask(), b) = real_phase(static_cast<std::uint32_t>(b));
    return m;
  }

  // sigma |b> = phase(b) |b ^ x_mask>; real part of the phase for even-Y words.
  double real_phase(std::uint32_t b) const noexcept {
    const int sign_flips = std::popcount(b & z_mask());
    const int ys = y_count();
    double p = (sign_flips % 2 == 0) ? 1.0 : -1.0;
    if (ys % 4 == 2) p = -p;  // i^2
    return p;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::uint32_t mask(char a, char b) const noexcept {
    std::uint32_t m = 0;
    const int q = qubits();
    for (int i = 0; i < q; ++i) {
      const char c = word_[static_cast<std::size_t>(i)];
      if (c == a || c == b) m |= 1u << (q - 1 - i);
    }
    return m;
  }

  std::string word_;
};

// Output order: weight first, then the word itself.
inline bool pauli_order(const PauliString& a, const PauliString& b) {
  if (a.weight() != b.weight()) return a.weight() < b.weight();
  return a.word() < b.word();
}

struct PauliTerm {
  PauliString word;
  double coefficient = 0.0;
};

struct PauliExpansion {
  int qubits = 0;
  std::string source;
  std::vector<PauliTerm> terms;

  double coefficient(std::string_view word) const {
    for (const auto& t : terms)
      if (t.word.word() == word) return t.coefficient;
    return 0.0;
  }

  Matrix reconstruct() const {
    const std::size_t dim = std::size_t{1} << qubits;
    Matrix m(dim, dim);
    for (const auto& t : terms) m.add_scaled(t.word.matrix(), t.coefficient);
    return m;
  }

  // 2^q * sum c^2, equal to the squared Frobenius norm of the source.
  double parseval_sum() const {
    double acc = 0.0;
    for (const auto& t : terms) acc += t.coefficient * t.coefficient;
    return std::ldexp(acc, qubits);
  }

  // Copy without the identity word.
  PauliExpansion traceless() const {
    PauliExpansion out = *this;
    std::erase_if(out.terms, [](const PauliTerm& t) { return t.word.weight() == 0; });
    return out;
  }
};

inline int qubits_for_dimension(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw DimensionMismatch("Pauli expansion needs a power-of-two dimension, got " + std::to_string(dim));
  }
  const int q = std::countr_zero(dim);
  if (q > kMaxPauliQubits) throw InvalidParameter("Pauli expansion capped at 12 qubits");
  return q;
}

// Coefficient of sigma is Tr[M sigma] / 2^q. Real symmetric input makes every
// word with an odd number of Ys vanish, so those are skipped outright.
inline PauliExpansion expand_operator(const Matrix& m, double tolerance = kPauliTolerance,
                                      std::string source = {}) {
  require_square(m, "expand_operator");
  const int q = qubits_for_dimension(m.rows());
  require_symmetric(m, "expand_operator");
  const std::uint32_t dim = 1u << q;
  PauliExpansion e;
  e.qubits = q;
  e.source = std::move(source);
  for (std::uint32_t x = 0; x < dim; ++x) {
    for (std::uint32_t z = 0; z < dim; ++z) {
      if (std::popcount(x & z) % 2 != 0) continue;
      const PauliString sigma = PauliString::from_masks(q, x, z);
      double trace = 0.0;
      for (std::uint32_t b = 0; b < dim; ++b) {
        const double entry = m(b ^ x, b);
        if (entry != 0.0) trace += entry * sigma.real_phase(b);
      }
      const double c = trace / static_cast<double>(dim);
      if (std::abs(c) > tolerance) e.terms.push_back({sigma, c});
    }
  }
  std::sort(e.terms.begin(), e.terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return pauli_order(a.word, b.word); });
  return e;
}

struct LocalityReport {
  std::vector<std::size_t> weight_histogram;  // index = word weight
  std::size_t cross_terms = 0;
  int max_weight = 0;
};

inline LocalityReport locality_report(const PauliExpansion& e) {
  LocalityReport r;
  r.weight_histogram.assign(static_cast<std::size_t>(e.qubits) + 1, 0);
  for (const auto& t : e.terms) {
    const int w = t.word.weight();
    ++r.weight_histogram[static_cast<std::size_t>(w)];
    r.max_weight = std::max(r.max_weight, w);
    if (t.word.is_cross_term()) ++r.cross_terms;
  }
  return r;
}

// Vertex -> basis-label assignment.
struct LabelMap {
  int qubits = 0;
  std::vector<std::uint32_t> labels;  // labels[v] is the basis index of vertex v
};

inline std::uint32_t parse_bitstring(std::string_view bits) {
  if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxPauliQubits)) {
    throw InvalidParameter("label bitstring '" + std::string(bits) + "' has invalid length");
  }
  std::uint32_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidParameter("label bitstring '" + std::string(bits) + "' is not binary");
    v = (v << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return v;
}

// One line per vertex: "<vertex_index> <bitstring>". '#' starts a comment.
inline LabelMap read_labels(std::istream& in) {
  std::map<std::size_t, std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long index = 0;
    std::string bits;
    if (!(ss >> index)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw IoError("label file: bad line '" + line + "'");
    }
    if (!(ss >> bits) || index < 0) throw IoError("label file: bad line '" + line + "'");
    if (!entries.emplace(static_cast<std::size_t>(index), bits).second) {
      throw IoError("label file: vertex " + std::to_string(index) + " listed twice");
    }
  }
  if (entries.empty()) throw IoError("label file: no labels");
  LabelMap map;
  map.qubits = static_cast<int>(entries.begin()->second.size());
  map.labels.resize(entries.size());
  std::vector<bool> used(std::size_t{1} << map.qubits, false);
  std::size_t expected = 0;
  for (const auto& [index, bits] : entries) {
    if (index != expected++) throw IoError("label file: vertex indices must be 0..V-1 without gaps");
    if (static_cast<int>(bits.size()) != map.qubits) throw IoError("label file: bitstrings differ in length");
    const std::uint32_t label = parse_bitstring(bits);
    if (used[label]) throw IoError("label file: label " + bits + " assigned twice");
    used[label] = true;
    map.labels[index] = label;
  }
  return map;
}

// Places the vertex-space operator on the labelled basis states; unused
// labels get zero rows and columns.
inline Matrix embed_operator(const Matrix& vertex_operator, const LabelMap& map) {
  require_square(vertex_operator, "embed_operator");
  if (vertex_operator.rows() != map.labels.size()) {
    throw DimensionMismatch("embed_operator: operator has " + std::to_string(vertex_operator.rows()) +
                            " rows but " + std::to_string(map.labels.size()) + " labels were given");
  }
  const std::size_t dim = std::size_t{1} << map.qubits;
  Matrix m(dim, dim);
  for (std::size_t u = 0; u < map.labels.size(); ++u)
    for (std::size_t v = 0; v < map.labels.size(); ++v) m(map.labels[u], map.labels[v]) = vertex_operator(u, v);
  return m;
}

struct LabeledInstance {
  LabelMap labels;
  Matrix adjacency;  // 2^q x 2^q
  Matrix initial;    // -|ENTRANCE><ENTRANCE|
  Matrix final;      // -|EXIT><EXIT|
};

// The six-vertex graph with Hamming-economical labels
// v0=000, v1=001, v2=100, v3=101, v4=010, v5=111.
inline LabeledInstance n1_labeled_instance() {
  LabeledInstance inst;
  inst.labels.qubits = 3;
  inst.labels.labels = {0b000, 0b001, 0b100, 0b101, 0b010, 0b111};
  Matrix a(6, 6);
  constexpr std::array<std::pair<int, int>, 8> edges{
      {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 5}, {4, 5}}};
  for (const auto& [u, v] : edges) {
    a(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = 1.0;
    a(static_cast<std::size_t>(v), static_cast<std::size_t>(u)) = 1.0;
  }
  inst.adjacency = embed_operator(a, inst.labels);
  inst.initial = Matrix(8, 8);
  inst.initial(inst.labels.labels[0], inst.labels.labels[0]) = -1.0;
  inst.final = Matrix(8, 8);
  inst.final(inst.labels.labels[5], inst.labels.labels[5]) = -1.0;
  return inst;
}

}  // namespace gtqa
