#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ramsey {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (CLI exit code 2).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A size or search budget was exhausted (CLI exit code 3).
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Resource limits shared by the expensive searches and constructions.
struct Limits {
  std::int64_t max_vertices = 100000;
  std::int64_t max_nodes = 10000000;
};

/// Counts search nodes and throws CapExceeded once the budget is spent.
class Budget {
 public:
  explicit Budget(std::int64_t max_nodes, std::string what = "search")
      : max_(max_nodes), what_(std::move(what)) {}
  void tick() {
    if (++used_ > max_)
      throw CapExceeded(what_ + ": node budget of " + std::to_string(max_) +
                        " exceeded");
  }
  std::int64_t used() const { return used_; }

 private:
  std::int64_t max_;
  std::int64_t used_ = 0;
  std::string what_;
};

inline void check_vertex_cap(std::int64_t n, const Limits& lim,
                             const std::string& what) {
  if (n > lim.max_vertices)
    throw CapExceeded(what + ": " + std::to_string(n) +
                      " vertices exceeds cap " +
                      std::to_string(lim.max_vertices));
}

}  // namespace ramsey
