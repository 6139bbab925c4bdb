// SPDX-License-Identifier: Apache-2.0
#pragma once

// Cylinder-set algebra on the two-sided full shift {1..N}^Z.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ddm::sym {

using Symbol = int;
using Word = std::vector<Symbol>;

class SymbolicError : public std::runtime_error {
 public:
  enum class Code { InvalidSymbol, EmptyWord, WindowTooSmall, Parse, AlphabetMismatch };
  SymbolicError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// { x : x_{start+k} = word[k], k = 0..len-1 }.
struct Cylinder {
  int start = 0;
  Word word;

  int end() const { return start + static_cast<int>(word.size()) - 1; }
  /// Member of A_m iff every constrained coordinate is >= m.
  bool in_ladder(int m) const { return start >= m; }
  friend bool operator==(const Cylinder&, const Cylinder&) = default;
  friend auto operator<=>(const Cylinder&, const Cylinder&) = default;
};

Cylinder make_cylinder(int alphabet, int start, Word word);

/// A finite union of cylinders, stored as a sorted set of words over one
/// coordinate window. A window of length 0 encodes X (one empty word) or the
/// empty set (no words).
class CylinderUnion {
 public:
  static CylinderUnion full(int alphabet);
  static CylinderUnion empty(int alphabet);
  static CylinderUnion of(int alphabet, const Cylinder& c);
  static CylinderUnion of(int alphabet, const std::vector<Cylinder>& parts);
  /// Words must all have length `len`; they are sorted and deduplicated. Not trimmed.
  static CylinderUnion from_window(int alphabet, int lo, int len, std::vector<Word> words);

  int alphabet() const { return alphabet_; }
  bool is_full() const { return len_ == 0 && !words_.empty(); }
  bool is_empty() const { return words_.empty(); }
  int window_lo() const { return lo_; }
  int window_len() const { return len_; }
  int window_hi() const { return lo_ + len_ - 1; }
  const std::vector<Word>& words() const { return words_; }

  /// Smallest constrained coordinate; nullopt for X and the empty set.
  std::optional<int> start_bound() const;
  /// Member of A_m (generated by the coordinates >= m).
  bool in_ladder(int m) const;

  /// Full-window cylinders, pairwise disjoint.
  std::vector<Cylinder> parts() const;
  /// Same point set with sibling groups merged into shorter words (display form).
  std::vector<Cylinder> compact_parts() const;

  /// Trims coordinates the set does not depend on at either end of the window.
  CylinderUnion canonical() const;

  /// `point` holds coordinates point_start.. and must cover the window.
  bool contains(int point_start, const Word& point) const;

  /// Point-set equality.
  friend bool operator==(const CylinderUnion& a, const CylinderUnion& b);

 private:
  CylinderUnion(int alphabet, int lo, int len, std::vector<Word> words)
      : alphabet_(alphabet), lo_(lo), len_(len), words_(std::move(words)) {}

  int alphabet_ = 1;
  int lo_ = 0;
  int len_ = 0;
  std::vector<Word> words_;
};

/// S^{-i}(set): coordinates relabelled so that _m[w] becomes _{m+i}[w].
CylinderUnion preimage_shift(const CylinderUnion& set, int i);
Cylinder preimage_shift(const Cylinder& c, int i);

/// Dense representation on [a, b]; throws WindowTooSmall if a constrained
/// coordinate falls outside.
CylinderUnion refine(const CylinderUnion& set, int a, int b);

enum class SetOp { Union, Intersect, Difference };
CylinderUnion set_op(const CylinderUnion& a, const CylinderUnion& b, SetOp op);
CylinderUnion complement(const CylinderUnion& a);

/// Enumerates all N^len words in lexicographic order.
std::vector<Word> all_words(int alphabet, int len);

// Literal syntax: "m[w1 w2 ... wk]"; unions as literals joined by '|';
// "X" for the whole space and "{}" for the empty set.
Cylinder parse_cylinder(int alphabet, std::string_view text);
CylinderUnion parse_union(int alphabet, std::string_view text);
std::string to_literal(const Cylinder& c);
std::string to_literal(const CylinderUnion& u);

}  // namespace ddm::sym
