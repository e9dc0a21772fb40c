#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ramsey/io.hpp"

namespace ramsey::cli {

/// Line-oriented record of one command run:
///   cert <kind> v1
///   param <key> <value>      inputs, in insertion order
///   result <key> <value>     outputs
///   structures               embedded structure file (inputs and outputs,
///   ...                      outputs named "out.<name>")
///   end structures
struct Certificate {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, std::string>> results;
  StructureFile structures;

  std::optional<std::string> find(const std::string& key) const;
  std::string param(const std::string& key) const;  // InvalidInput if absent
  void set(const std::string& key, const std::string& value);
  void result(const std::string& key, const std::string& value);
  /// Adds a copy named `role`; languages are shared by name when equal.
  void add_structure(const std::string& role, Structure s);
  const Structure& structure(const std::string& role) const;
};

std::string serialize_certificate(const Certificate& c);
Certificate parse_certificate(const std::string& text);

struct Outcome {
  int code = 0;  // 0 holds, 1 fails
  Certificate cert;
};

/// Runs the computation described by kind, params and input structures.
Outcome execute(const Certificate& input);

/// Re-executes a certificate; 0 when the replay reproduces it byte for
/// byte and its witnesses check out, 1 otherwise.
int verify_certificate(const Certificate& c, std::ostream& out);

/// Command line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ramsey::cli
