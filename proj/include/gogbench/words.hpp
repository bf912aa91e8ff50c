#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gogbench {

/// Raised on malformed input (bad letters, invalid tables, schema errors).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Letter = int;

/// A freely reduced element of the free group F_rank.
///
/// Letters are nonzero integers; +i is the i-th basis element and -i its
/// inverse. The only way to build a Word is through free_reduce (or the
/// operations below), so every Word is reduced and in range.
class Word {
 public:
  explicit Word(int rank = 1) : rank_(rank) {}

  int rank() const { return rank_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  bool is_identity() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  Word inverse() const;
  Word pow(long exponent) const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

  std::string str() const;

 private:
  friend Word free_reduce(std::span<const Letter> letters, int rank);
  int rank_;
  std::vector<Letter> letters_;
};

Word free_reduce(std::span<const Letter> letters, int rank);
inline Word free_reduce(std::initializer_list<Letter> letters, int rank) {
  return free_reduce(std::span<const Letter>(letters.begin(), letters.size()), rank);
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // w == conjugator * core * conjugator^-1
};

CyclicReduction cyclic_reduce(const Word& w);

/// Conjugacy class in F_rank, stored as the least rotation of the cyclically
/// reduced core. A class and its inverse are different classes.
struct ConjClass {
  Word canonical;

  int rank() const { return canonical.rank(); }
  friend bool operator==(const ConjClass&, const ConjClass&) = default;
  friend auto operator<=>(const ConjClass& a, const ConjClass& b) {
    return a.canonical <=> b.canonical;
  }
};

ConjClass conj_canonical(const Word& w);

struct PrimitiveRoot {
  Word root;
  int exponent = 1;
};

PrimitiveRoot primitive_root(const Word& w);

std::vector<long> abelianize_word(const Word& w);

/// Lexicographically least rotation of a sequence (letters compare as ints,
/// which is the fixed order -r < ... < -1 < 1 < ... < r).
std::vector<Letter> least_rotation(const std::vector<Letter>& seq);

}  // namespace gogbench
