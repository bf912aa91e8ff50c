#include "gogbench/words.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace gogbench {

Word free_reduce(std::span<const Letter> letters, int rank) {
  if (rank < 1) throw InvalidInput("free group rank must be >= 1");
  Word w(rank);
  w.letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (l == 0 || std::abs(l) > rank)
      throw InvalidInput("letter " + std::to_string(l) + " out of range for rank " +
                         std::to_string(rank));
    if (!w.letters_.empty() && w.letters_.back() == -l)
      w.letters_.pop_back();
    else
      w.letters_.push_back(l);
  }
  return w;
}

Word Word::inverse() const {
  Word w(rank_);
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
  return w;
}

Word Word::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  // Conjugate out the non-cyclically-reduced part so the power is built
  // without repeated cancellation.
  auto [core, g] = cyclic_reduce(*this);
  std::vector<Letter> out = g.letters();
  for (long i = 0; i < exponent; ++i)
    out.insert(out.end(), core.letters().begin(), core.letters().end());
  auto gi = g.inverse();
  out.insert(out.end(), gi.letters().begin(), gi.letters().end());
  return free_reduce(out, rank_);
}

Word operator*(const Word& a, const Word& b) {
  if (a.rank_ != b.rank_) throw InvalidInput("rank mismatch in word product");
  std::vector<Letter> out;
  out.reserve(a.size() + b.size());
  out = a.letters_;
  out.insert(out.end(), b.letters_.begin(), b.letters_.end());
  return free_reduce(out, a.rank_);
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                b.letters_.begin(), b.letters_.end());
}

std::string Word::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < letters_.size(); ++i) os << (i ? "," : "") << letters_[i];
  os << ']';
  return os.str();
}

CyclicReduction cyclic_reduce(const Word& w) {
  const auto& l = w.letters();
  std::size_t i = 0, j = l.size();
  while (j - i >= 2 && l[i] == -l[j - 1]) {
    ++i;
    --j;
  }
  std::vector<Letter> core(l.begin() + i, l.begin() + j);
  std::vector<Letter> conj(l.begin(), l.begin() + i);
  return {free_reduce(core, w.rank()), free_reduce(conj, w.rank())};
}

std::vector<Letter> least_rotation(const std::vector<Letter>& seq) {
  const std::size_t n = seq.size();
  if (n == 0) return {};
  // Booth's algorithm on the doubled sequence.
  std::vector<Letter> s(seq);
  s.insert(s.end(), seq.begin(), seq.end());
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Letter sj = s[j];
    long i = f[j - k - 1];
    while (i != -1 && sj != s[k + i + 1]) {
      if (sj < s[k + i + 1]) k = j - i - 1;
      i = f[i];
    }
    if (sj != s[k + i + 1]) {
      if (sj < s[k]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return std::vector<Letter>(s.begin() + k, s.begin() + k + n);
}

ConjClass conj_canonical(const Word& w) {
  if (w.is_identity()) throw InvalidInput("conjugacy class of the identity is not allowed");
  auto core = cyclic_reduce(w).core;
  return ConjClass{free_reduce(least_rotation(core.letters()), w.rank())};
}

PrimitiveRoot primitive_root(const Word& w) {
  if (w.is_identity()) throw InvalidInput("primitive root of the identity is undefined");
  auto core = cyclic_reduce(w).core;
  const auto& l = core.letters();
  const std::size_t n = l.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = l[i] == l[i - p];
    if (periodic) {
      return {free_reduce(std::span<const Letter>(l.data(), p), w.rank()),
              static_cast<int>(n / p)};
    }
  }
  return {core, 1};  // unreachable: p == n always succeeds
}

std::vector<long> abelianize_word(const Word& w) {
  std::vector<long> v(w.rank(), 0);
  for (Letter l : w.letters()) v[std::abs(l) - 1] += l > 0 ? 1 : -1;
  return v;
}

}  // namespace gogbench
