#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ramsey/structures.hpp"

namespace ramsey {

/// Parse failure; the message starts with "line N: ".
class ParseError : public InvalidInput {
 public:
  ParseError(int line_no, const std::string& msg)
      : InvalidInput("line " + std::to_string(line_no) + ": " + msg),
        line(line_no) {}
  int line;
};

/// Contents of a structure file in declaration order.
struct StructureFile {
  std::vector<Language> languages;
  std::vector<Structure> structures;
  /// ('l', i) or ('s', i) per block; empty means languages first.
  std::vector<std::pair<char, int>> order;

  const Language* language(const std::string& name) const;
  const Structure* structure(const std::string& name) const;
  void add(const Language& l);
  /// Adds the structure's language too unless one of that name exists.
  void add(const Structure& s);
};

/// Grammar, one declaration per line, '#' starts a comment:
///   language L / rel NAME ARITY / fun NAME ARITY / end
///   structure G over L / vertices N / rel NAME: t;t;... /
///   fun NAME: (args) -> {ids};... / end
/// A tuple is space separated vertex ids; "()" is the empty tuple.
StructureFile parse_structure_file(const std::string& text);

/// Canonical text: blocks separated by one blank line, tuples and function
/// entries in increasing order, empty relations omitted.
std::string serialize_structure_file(const StructureFile& f);
std::string serialize_structure(const Structure& s);
std::string serialize_language(const Language& l);

}  // namespace ramsey
