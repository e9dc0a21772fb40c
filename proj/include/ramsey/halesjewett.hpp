#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ramsey/errors.hpp"

namespace ramsey::hj {

/// The parameter letter. Letters of the alphabet are 0..sigma-1.
inline constexpr int kLambda = -1;

using Word = std::vector<int>;
using ParameterWord = std::vector<int>;

bool is_parameter_word(const ParameterWord& w, int sigma);

/// W(a): every lambda replaced by a. Throws InvalidInput for a letter
/// outside the alphabet.
Word substitute(const ParameterWord& w, int a, int sigma);

struct Line {
  ParameterWord word;
  std::vector<Word> words;  // W(0), ..., W(sigma-1)
};

/// All parameter words of length n, lexicographic with lambda first.
std::vector<ParameterWord> parameter_words(int sigma, int n);
std::vector<Line> enumerate_lines(int sigma, int n);

/// Words of length n in lexicographic order; index is the base-sigma value.
std::int64_t word_index(const Word& w, int sigma);
Word word_at(std::int64_t index, int sigma, int n);
std::int64_t word_count(int sigma, int n);

/// Lexicographically least r-colouring of sigma^n (indexed by word_index)
/// with no monochromatic line, or nullopt when every colouring has one.
std::optional<std::vector<int>> find_bad_coloring(
    int sigma, int n, int r, std::int64_t max_nodes = 10000000);

/// Least n <= cap with no bad colouring; nullopt when cap is exceeded.
std::optional<int> hj_number(int sigma, int r, int cap,
                             std::int64_t max_nodes = 10000000);

/// Line through a colouring that is monochromatic, if any.
std::optional<ParameterWord> monochromatic_line(const std::vector<int>& col,
                                                int sigma, int n);

}  // namespace ramsey::hj
