#pragma once

#include <random>
#include <string>
#include <vector>

#include "gogbench/document.hpp"
#include "gogbench/words.hpp"

namespace gbtest {

using namespace gogbench;

inline Word W(int rank, std::initializer_list<Letter> letters) { return free_reduce(letters, rank); }

inline std::vector<Letter> random_letters(std::mt19937& rng, int rank, int len) {
  std::uniform_int_distribution<int> pick(0, 2 * rank - 1);
  std::vector<Letter> out(len);
  for (auto& l : out) {
    int k = pick(rng);
    l = k < rank ? k + 1 : -(k - rank + 1);
  }
  return out;
}

inline Word random_word(std::mt19937& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  auto l = random_letters(rng, rank, len(rng));
  return free_reduce(std::span<const Letter>(l), rank);
}

inline std::string fixture(const std::string& name) { return std::string(GOGBENCH_FIXTURES) + "/" + name; }

inline std::shared_ptr<const GraphOfGroups> load_gog(const std::string& name) {
  return load_document(fixture(name)).gog;
}

}  // namespace gbtest
