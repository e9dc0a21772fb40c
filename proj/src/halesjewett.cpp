#include "ramsey/halesjewett.hpp"

#include <algorithm>
#include <string>

namespace ramsey::hj {

bool is_parameter_word(const ParameterWord& w, int sigma) {
  bool lambda = false;
  for (int x : w) {
    if (x == kLambda)
      lambda = true;
    else if (x < 0 || x >= sigma)
      return false;
  }
  return lambda;
}

Word substitute(const ParameterWord& w, int a, int sigma) {
  if (a < 0 || a >= sigma)
    throw InvalidInput("letter " + std::to_string(a) +
                       " is not in the alphabet of size " +
                       std::to_string(sigma));
  Word out(w);
  for (int& x : out)
    if (x == kLambda) x = a;
  return out;
}

std::vector<ParameterWord> parameter_words(int sigma, int n) {
  if (sigma < 1 || n < 1)
    throw InvalidInput("parameter words need sigma >= 1 and n >= 1");
  std::vector<ParameterWord> out;
  ParameterWord w(n, kLambda);
  while (true) {
    if (is_parameter_word(w, sigma)) out.push_back(w);
    int i = n - 1;
    while (i >= 0 && w[i] == sigma - 1) w[i--] = kLambda;
    if (i < 0) break;
    ++w[i];
  }
  return out;
}

std::vector<Line> enumerate_lines(int sigma, int n) {
  std::vector<Line> out;
  for (auto& w : parameter_words(sigma, n)) {
    Line l{w, {}};
    for (int a = 0; a < sigma; ++a) l.words.push_back(substitute(w, a, sigma));
    out.push_back(std::move(l));
  }
  return out;
}

std::int64_t word_count(int sigma, int n) {
  std::int64_t c = 1;
  for (int i = 0; i < n; ++i) {
    c *= sigma;
    if (c > (std::int64_t{1} << 40))
      throw CapExceeded("word space too large");
  }
  return c;
}

std::int64_t word_index(const Word& w, int sigma) {
  std::int64_t idx = 0;
  for (int x : w) idx = idx * sigma + x;
  return idx;
}

Word word_at(std::int64_t index, int sigma, int n) {
  Word w(n);
  for (int i = n - 1; i >= 0; --i) {
    w[i] = static_cast<int>(index % sigma);
    index /= sigma;
  }
  return w;
}

std::optional<std::vector<int>> find_bad_coloring(int sigma, int n, int r,
                                                  std::int64_t max_nodes) {
  if (r < 1) throw InvalidInput("need at least one colour");
  const auto lines = enumerate_lines(sigma, n);
  const std::int64_t total = word_count(sigma, n);
  // Each line is checked once, when its largest word receives a colour.
  std::vector<std::vector<std::vector<std::int64_t>>> closing(total);
  for (const auto& l : lines) {
    std::vector<std::int64_t> ids;
    for (const auto& w : l.words) ids.push_back(word_index(w, sigma));
    auto mx = *std::max_element(ids.begin(), ids.end());
    closing[mx].push_back(ids);
  }
  std::vector<int> col(total, -1);
  Budget budget(max_nodes, "Hales-Jewett colouring search");
  // Colour 0 for the first word loses nothing: colours can be permuted.
  std::int64_t i = 0;
  col[0] = -1;
  while (true) {
    if (i == total) return col;
    if (i < 0) return std::nullopt;
    budget.tick();
    int next = col[i] + 1;
    int limit = i == 0 ? 1 : r;
    bool placed = false;
    for (int c = next; c < limit; ++c) {
      col[i] = c;
      bool ok = true;
      for (const auto& ids : closing[i]) {
        bool mono = std::all_of(ids.begin(), ids.end(),
                                [&](std::int64_t x) { return col[x] == c; });
        if (mono) {
          ok = false;
          break;
        }
      }
      if (ok) {
        placed = true;
        break;
      }
    }
    if (placed) {
      ++i;
    } else {
      col[i] = -1;
      --i;
    }
  }
}

std::optional<int> hj_number(int sigma, int r, int cap,
                             std::int64_t max_nodes) {
  for (int n = 1; n <= cap; ++n)
    if (!find_bad_coloring(sigma, n, r, max_nodes)) return n;
  return std::nullopt;
}

std::optional<ParameterWord> monochromatic_line(const std::vector<int>& col,
                                                int sigma, int n) {
  for (const auto& l : enumerate_lines(sigma, n)) {
    int c = col[word_index(l.words[0], sigma)];
    bool mono = std::all_of(l.words.begin(), l.words.end(), [&](const Word& w) {
      return col[word_index(w, sigma)] == c;
    });
    if (mono) return l.word;
  }
  return std::nullopt;
}

}  // namespace ramsey::hj
