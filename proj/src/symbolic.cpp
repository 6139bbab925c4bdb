// SPDX-License-Identifier: Apache-2.0
#include "ddm/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace ddm::sym {

namespace {

void check_symbols(int alphabet, const Word& w) {
  for (Symbol s : w)
    if (s < 1 || s > alphabet)
      throw SymbolicError(SymbolicError::Code::InvalidSymbol,
                          "symbol " + std::to_string(s) + " outside 1.." + std::to_string(alphabet));
}

void sort_unique(std::vector<Word>& words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

// Extends every word by `before` free coordinates on the left and `after` on the right.
std::vector<Word> pad(int alphabet, const std::vector<Word>& words, int before, int after) {
  if (before == 0 && after == 0) return words;
  const auto pre = all_words(alphabet, before);
  const auto post = all_words(alphabet, after);
  std::vector<Word> out;
  out.reserve(words.size() * pre.size() * post.size());
  for (const auto& p : pre)
    for (const auto& w : words)
      for (const auto& s : post) {
        Word x;
        x.reserve(p.size() + w.size() + s.size());
        x.insert(x.end(), p.begin(), p.end());
        x.insert(x.end(), w.begin(), w.end());
        x.insert(x.end(), s.begin(), s.end());
        out.push_back(std::move(x));
      }
  sort_unique(out);
  return out;
}

void require_same_alphabet(const CylinderUnion& a, const CylinderUnion& b) {
  if (a.alphabet() != b.alphabet())
    throw SymbolicError(SymbolicError::Code::AlphabetMismatch, "alphabet mismatch in set operation");
}

// Joint window of two unions; length 0 when both are unconstrained.
std::pair<int, int> joint_window(const CylinderUnion& a, const CylinderUnion& b) {
  if (a.window_len() == 0 && b.window_len() == 0) return {0, -1};
  if (a.window_len() == 0) return {b.window_lo(), b.window_hi()};
  if (b.window_len() == 0) return {a.window_lo(), a.window_hi()};
  return {std::min(a.window_lo(), b.window_lo()), std::max(a.window_hi(), b.window_hi())};
}

// True when coordinate `pos` of the window can be dropped: words grouped by the
// remaining coordinates always come in complete groups of N.
bool coordinate_free(int alphabet, const std::vector<Word>& words, std::size_t pos) {
  std::map<Word, int> groups;
  for (const auto& w : words) {
    Word rest = w;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
    ++groups[rest];
  }
  for (const auto& [rest, count] : groups)
    if (count != alphabet) return false;
  return true;
}

std::vector<Word> drop_coordinate(const std::vector<Word>& words, std::size_t pos) {
  std::vector<Word> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    Word rest = w;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
    out.push_back(std::move(rest));
  }
  sort_unique(out);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(std::string_view text, const std::string& why) {
  throw SymbolicError(SymbolicError::Code::Parse,
                      "cannot parse cylinder literal '" + std::string(text) + "': " + why);
}

int parse_int(std::string_view tok, std::string_view whole) {
  tok = trim(tok);
  if (tok.empty()) parse_fail(whole, "missing integer");
  std::size_t i = 0;
  bool neg = false;
  if (tok[0] == '-' || tok[0] == '+') {
    neg = tok[0] == '-';
    i = 1;
  }
  if (i == tok.size()) parse_fail(whole, "missing digits");
  long long v = 0;
  for (; i < tok.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) parse_fail(whole, "unexpected character");
    v = v * 10 + (tok[i] - '0');
    if (v > 1'000'000) parse_fail(whole, "integer out of range");
  }
  return static_cast<int>(neg ? -v : v);
}

}  // namespace

Cylinder make_cylinder(int alphabet, int start, Word word) {
  if (word.empty()) throw SymbolicError(SymbolicError::Code::EmptyWord, "cylinder word must be nonempty");
  check_symbols(alphabet, word);
  return Cylinder{start, std::move(word)};
}

std::vector<Word> all_words(int alphabet, int len) {
  std::vector<Word> out;
  Word w(static_cast<std::size_t>(len), 1);
  while (true) {
    out.push_back(w);
    int k = len - 1;
    while (k >= 0 && w[static_cast<std::size_t>(k)] == alphabet) {
      w[static_cast<std::size_t>(k)] = 1;
      --k;
    }
    if (k < 0) break;
    ++w[static_cast<std::size_t>(k)];
  }
  return out;
}

CylinderUnion CylinderUnion::full(int alphabet) { return CylinderUnion(alphabet, 0, 0, {Word{}}); }
CylinderUnion CylinderUnion::empty(int alphabet) { return CylinderUnion(alphabet, 0, 0, {}); }

CylinderUnion CylinderUnion::of(int alphabet, const Cylinder& c) {
  check_symbols(alphabet, c.word);
  if (c.word.empty()) return full(alphabet);
  return CylinderUnion(alphabet, c.start, static_cast<int>(c.word.size()), {c.word});
}

CylinderUnion CylinderUnion::of(int alphabet, const std::vector<Cylinder>& parts) {
  CylinderUnion acc = empty(alphabet);
  for (const auto& c : parts) acc = set_op(acc, of(alphabet, c), SetOp::Union);
  return acc;
}

CylinderUnion CylinderUnion::from_window(int alphabet, int lo, int len, std::vector<Word> words) {
  for (const auto& w : words) {
    if (static_cast<int>(w.size()) != len)
      throw SymbolicError(SymbolicError::Code::WindowTooSmall, "word length does not match window");
    check_symbols(alphabet, w);
  }
  sort_unique(words);
  if (len == 0) lo = 0;
  return CylinderUnion(alphabet, lo, len, std::move(words));
}

std::optional<int> CylinderUnion::start_bound() const {
  CylinderUnion c = canonical();
  if (c.len_ == 0) return std::nullopt;
  return c.lo_;
}

bool CylinderUnion::in_ladder(int m) const {
  auto s = start_bound();
  return !s || *s >= m;
}

std::vector<Cylinder> CylinderUnion::parts() const {
  std::vector<Cylinder> out;
  out.reserve(words_.size());
  for (const auto& w : words_) out.push_back(Cylinder{lo_, w});
  return out;
}

std::vector<Cylinder> CylinderUnion::compact_parts() const {
  CylinderUnion c = canonical();
  if (c.len_ == 0) return {};
  // Repeatedly merge complete sibling groups (same prefix, all last symbols).
  std::vector<Word> current = c.words_;
  std::vector<Word> done;
  while (!current.empty()) {
    std::map<Word, std::vector<Word>> groups;
    for (const auto& w : current) {
      Word prefix(w.begin(), w.end() - 1);
      groups[prefix].push_back(w);
    }
    std::vector<Word> next;
    for (auto& [prefix, members] : groups) {
      if (static_cast<int>(members.size()) == alphabet_ && !prefix.empty())
        next.push_back(prefix);
      else
        for (auto& m : members) done.push_back(std::move(m));
    }
    current = std::move(next);
  }
  std::vector<Cylinder> out;
  for (auto& w : done) out.push_back(Cylinder{c.lo_, std::move(w)});
  std::sort(out.begin(), out.end());
  return out;
}

CylinderUnion CylinderUnion::canonical() const {
  if (words_.empty()) return empty(alphabet_);
  std::vector<Word> words = words_;
  int lo = lo_;
  int len = len_;
  while (len > 0 && coordinate_free(alphabet_, words, 0)) {
    words = drop_coordinate(words, 0);
    ++lo;
    --len;
  }
  while (len > 0 && coordinate_free(alphabet_, words, static_cast<std::size_t>(len - 1))) {
    words = drop_coordinate(words, static_cast<std::size_t>(len - 1));
    --len;
  }
  if (len == 0) return full(alphabet_);
  return CylinderUnion(alphabet_, lo, len, std::move(words));
}

bool CylinderUnion::contains(int point_start, const Word& point) const {
  if (words_.empty()) return false;
  if (len_ == 0) return true;
  const int offset = lo_ - point_start;
  if (offset < 0 || offset + len_ > static_cast<int>(point.size()))
    throw SymbolicError(SymbolicError::Code::WindowTooSmall, "point does not cover the window");
  Word key(point.begin() + offset, point.begin() + offset + len_);
  return std::binary_search(words_.begin(), words_.end(), key);
}

bool operator==(const CylinderUnion& a, const CylinderUnion& b) {
  if (a.alphabet_ != b.alphabet_) return false;
  CylinderUnion ca = a.canonical();
  CylinderUnion cb = b.canonical();
  return ca.lo_ == cb.lo_ && ca.len_ == cb.len_ && ca.words_ == cb.words_;
}

Cylinder preimage_shift(const Cylinder& c, int i) { return Cylinder{c.start + i, c.word}; }

CylinderUnion preimage_shift(const CylinderUnion& set, int i) {
  if (set.window_len() == 0) return set;
  return CylinderUnion::from_window(set.alphabet(), set.window_lo() + i, set.window_len(), set.words());
}

CylinderUnion refine(const CylinderUnion& set, int a, int b) {
  if (b < a) {
    if (set.window_len() != 0 && !set.canonical().is_full() && !set.canonical().is_empty())
      throw SymbolicError(SymbolicError::Code::WindowTooSmall, "empty window for a constrained set");
    return set.is_empty() ? CylinderUnion::empty(set.alphabet()) : CylinderUnion::full(set.alphabet());
  }
  const int len = b - a + 1;
  if (set.is_empty()) return CylinderUnion::from_window(set.alphabet(), a, len, {});
  if (set.window_len() == 0)
    return CylinderUnion::from_window(set.alphabet(), a, len, all_words(set.alphabet(), len));
  CylinderUnion c = set;
  if (c.window_lo() < a || c.window_hi() > b) c = c.canonical();
  if (c.window_len() == 0)
    return CylinderUnion::from_window(set.alphabet(), a, len, all_words(set.alphabet(), len));
  if (c.window_lo() < a || c.window_hi() > b)
    throw SymbolicError(SymbolicError::Code::WindowTooSmall,
                        "window [" + std::to_string(a) + "," + std::to_string(b) +
                            "] misses constrained coordinates of " + to_literal(c));
  auto words = pad(set.alphabet(), c.words(), c.window_lo() - a, b - c.window_hi());
  return CylinderUnion::from_window(set.alphabet(), a, len, std::move(words));
}

CylinderUnion set_op(const CylinderUnion& a, const CylinderUnion& b, SetOp op) {
  require_same_alphabet(a, b);
  auto [lo, hi] = joint_window(a, b);
  CylinderUnion ra = refine(a, lo, hi);
  CylinderUnion rb = refine(b, lo, hi);
  std::vector<Word> out;
  const auto& wa = ra.words();
  const auto& wb = rb.words();
  switch (op) {
    case SetOp::Union:
      std::set_union(wa.begin(), wa.end(), wb.begin(), wb.end(), std::back_inserter(out));
      break;
    case SetOp::Intersect:
      std::set_intersection(wa.begin(), wa.end(), wb.begin(), wb.end(), std::back_inserter(out));
      break;
    case SetOp::Difference:
      std::set_difference(wa.begin(), wa.end(), wb.begin(), wb.end(), std::back_inserter(out));
      break;
  }
  const int len = hi >= lo ? hi - lo + 1 : 0;
  return CylinderUnion::from_window(a.alphabet(), lo, len, std::move(out)).canonical();
}

CylinderUnion complement(const CylinderUnion& a) {
  return set_op(CylinderUnion::full(a.alphabet()), a, SetOp::Difference);
}

Cylinder parse_cylinder(int alphabet, std::string_view text) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '_') s.remove_prefix(1);  // "_0[2]" is accepted as "0[2]"
  auto open = s.find('[');
  auto close = s.rfind(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      close != s.size() - 1)
    parse_fail(text, "expected m[w1 ... wk]");
  int start = parse_int(s.substr(0, open), text);
  std::string_view body = s.substr(open + 1, close - open - 1);
  Word w;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && (std::isspace(static_cast<unsigned char>(body[i])) || body[i] == ','))
      ++i;
    std::size_t j = i;
    while (j < body.size() && !std::isspace(static_cast<unsigned char>(body[j])) && body[j] != ',') ++j;
    if (j > i) w.push_back(parse_int(body.substr(i, j - i), text));
    i = j;
  }
  return make_cylinder(alphabet, start, std::move(w));
}

CylinderUnion parse_union(int alphabet, std::string_view text) {
  std::string_view s = trim(text);
  if (s == "X") return CylinderUnion::full(alphabet);
  if (s == "{}") return CylinderUnion::empty(alphabet);
  std::vector<Cylinder> parts;
  while (true) {
    auto bar = s.find('|');
    parts.push_back(parse_cylinder(alphabet, s.substr(0, bar)));
    if (bar == std::string_view::npos) break;
    s = s.substr(bar + 1);
  }
  return CylinderUnion::of(alphabet, parts);
}

std::string to_literal(const Cylinder& c) {
  std::string out = std::to_string(c.start) + "[";
  for (std::size_t k = 0; k < c.word.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(c.word[k]);
  }
  return out + "]";
}

std::string to_literal(const CylinderUnion& u) {
  if (u.is_empty()) return "{}";
  CylinderUnion c = u.canonical();
  if (c.is_full()) return "X";
  std::string out;
  for (const auto& p : c.compact_parts()) {
    if (!out.empty()) out += " | ";
    out += to_literal(p);
  }
  return out;
}

}  // namespace ddm::sym
