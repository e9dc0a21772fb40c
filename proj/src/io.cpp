#include "ramsey/io.hpp"

#include <charconv>
#include <sstream>

namespace ramsey {

const Language* StructureFile::language(const std::string& name) const {
  for (const auto& l : languages)
    if (l.name == name) return &l;
  return nullptr;
}

const Structure* StructureFile::structure(const std::string& name) const {
  for (const auto& s : structures)
    if (s.name == name) return &s;
  return nullptr;
}

void StructureFile::add(const Language& l) {
  if (order.empty()) {
    for (std::size_t i = 0; i < languages.size(); ++i) order.emplace_back('l', i);
    for (std::size_t i = 0; i < structures.size(); ++i) order.emplace_back('s', i);
  }
  languages.push_back(l);
  order.emplace_back('l', static_cast<int>(languages.size()) - 1);
}

void StructureFile::add(const Structure& s) {
  if (!language(s.lang.name)) add(s.lang);
  if (order.empty()) {
    for (std::size_t i = 0; i < languages.size(); ++i) order.emplace_back('l', i);
    for (std::size_t i = 0; i < structures.size(); ++i) order.emplace_back('s', i);
  }
  structures.push_back(s);
  order.emplace_back('s', static_cast<int>(structures.size()) - 1);
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

int to_int(const std::string& w, int line, const std::string& what) {
  int v = 0;
  auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc() || p != w.data() + w.size())
    throw ParseError(line, "expected an integer for " + what + ", got '" + w + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Tuple parse_ids(const std::string& text, int n, int line) {
  std::string t = trim(text);
  if (t == "()") return {};
  Tuple out;
  for (const auto& w : words(t)) {
    int v = to_int(w, line, "a vertex id");
    if (v < 0 || v >= n)
      throw ParseError(line, "vertex " + w + " out of range 0.." + std::to_string(n - 1));
    out.push_back(v);
  }
  return out;
}

std::string join_ids(const Tuple& t) {
  if (t.empty()) return "()";
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(t[i]);
  }
  return s;
}

// Names are single words so that the text parses back.
void check_name(const std::string& name, const std::string& what) {
  if (name.empty() || name.find_first_of(" \t\r\n#:;") != std::string::npos)
    throw InvalidInput(what + " name '" + name + "' is not a single word");
}

}  // namespace

StructureFile parse_structure_file(const std::string& text) {
  StructureFile f;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  enum class Mode { Top, Lang, Struct } mode = Mode::Top;
  Language cur_lang;
  Structure cur;
  bool have_vertices = false;
  int block_line = 0;

  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string ln = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (ln.empty()) continue;
    auto w = words(ln);

    if (mode == Mode::Top) {
      if (w[0] == "language" && w.size() == 2) {
        if (f.language(w[1])) throw ParseError(line, "language " + w[1] + " declared twice");
        cur_lang = Language(w[1]);
        mode = Mode::Lang;
      } else if (w[0] == "structure" && w.size() == 4 && w[2] == "over") {
        const Language* l = f.language(w[3]);
        if (!l) throw ParseError(line, "unknown language " + w[3]);
        if (f.structure(w[1])) throw ParseError(line, "structure " + w[1] + " declared twice");
        cur = Structure(*l, 0);
        cur.name = w[1];
        have_vertices = false;
        mode = Mode::Struct;
      } else {
        throw ParseError(line, "expected 'language NAME' or 'structure NAME over LANG'");
      }
      block_line = line;
      continue;
    }

    if (mode == Mode::Lang) {
      if (ln == "end") {
        f.add(cur_lang);
        mode = Mode::Top;
      } else if ((w[0] == "rel" || w[0] == "fun") && w.size() == 3) {
        int ar = to_int(w[2], line, "an arity");
        if (ar < 0) throw ParseError(line, "negative arity");
        if (cur_lang.has_symbol(w[1])) throw ParseError(line, "symbol " + w[1] + " declared twice");
        if (w[0] == "rel")
          cur_lang.add_relation(w[1], ar);
        else
          cur_lang.add_function(w[1], ar);
      } else {
        throw ParseError(line, "expected 'rel NAME ARITY', 'fun NAME ARITY' or 'end'");
      }
      continue;
    }

    // structure block
    if (ln == "end") {
      if (!have_vertices) throw ParseError(line, "structure without a vertices line");
      f.add(cur);
      mode = Mode::Top;
      continue;
    }
    if (w[0] == "vertices") {
      if (have_vertices || w.size() != 2) throw ParseError(line, "bad or repeated vertices line");
      int n = to_int(w[1], line, "the vertex count");
      if (n < 0) throw ParseError(line, "negative vertex count");
      cur.add_vertices(n);
      have_vertices = true;
      continue;
    }
    if (!have_vertices) throw ParseError(line, "vertices line must come first");
    auto colon = ln.find(':');
    if ((w[0] != "rel" && w[0] != "fun") || colon == std::string::npos)
      throw ParseError(line, "expected 'rel NAME: ...', 'fun NAME: ...' or 'end'");
    std::string name = trim(ln.substr(3, colon - 3));
    std::string body = trim(ln.substr(colon + 1));
    if (w[0] == "rel") {
      int r = cur.lang.relation_index(name);
      if (r < 0) throw ParseError(line, "unknown relation " + name);
      int ar = cur.lang.relations[r].arity;
      if (body.empty()) continue;
      for (const auto& part : split(body, ';')) {
        Tuple t = parse_ids(part, cur.n, line);
        if (static_cast<int>(t.size()) != ar)
          throw ParseError(line, "arity mismatch for " + name + ": expected " +
                                     std::to_string(ar) + " ids, got " +
                                     std::to_string(t.size()));
        cur.add_tuple(r, t);
      }
    } else {
      int fi = cur.lang.function_index(name);
      if (fi < 0) throw ParseError(line, "unknown function " + name);
      int ar = cur.lang.functions[fi].arity;
      if (body.empty()) continue;
      for (const auto& part : split(body, ';')) {
        std::string e = trim(part);
        auto arrow = e.find("->");
        if (arrow == std::string::npos) throw ParseError(line, "function entry needs '->'");
        std::string lhs = trim(e.substr(0, arrow)), rhs = trim(e.substr(arrow + 2));
        if (lhs.size() < 2 || lhs.front() != '(' || lhs.back() != ')' ||
            rhs.size() < 2 || rhs.front() != '{' || rhs.back() != '}')
          throw ParseError(line, "function entry must read (args) -> {ids}");
        Tuple args = parse_ids(lhs.size() == 2 ? "()" : lhs.substr(1, lhs.size() - 2), cur.n, line);
        if (static_cast<int>(args.size()) != ar)
          throw ParseError(line, "arity mismatch for " + name);
        Tuple vals = rhs.size() == 2 ? Tuple{} : parse_ids(rhs.substr(1, rhs.size() - 2), cur.n, line);
        for (int v : vals) cur.add_value(fi, args, v);
      }
    }
  }
  if (mode != Mode::Top)
    throw ParseError(block_line, "block is not closed by 'end'");
  return f;
}

std::string serialize_language(const Language& l) {
  check_name(l.name, "language");
  for (const auto& r : l.relations) check_name(r.name, "relation");
  for (const auto& fn : l.functions) check_name(fn.name, "function");
  std::string s = "language " + l.name + "\n";
  for (const auto& r : l.relations) s += "rel " + r.name + " " + std::to_string(r.arity) + "\n";
  for (const auto& fn : l.functions) s += "fun " + fn.name + " " + std::to_string(fn.arity) + "\n";
  return s + "end\n";
}

std::string serialize_structure(const Structure& st) {
  check_name(st.name, "structure");
  std::string s = "structure " + st.name + " over " + st.lang.name + "\n";
  s += "vertices " + std::to_string(st.n) + "\n";
  for (std::size_t r = 0; r < st.rel.size(); ++r) {
    if (st.rel[r].empty()) continue;
    s += "rel " + st.lang.relations[r].name + ":";
    bool first = true;
    for (const auto& t : st.rel[r]) {
      s += first ? " " : ";";
      s += join_ids(t);
      first = false;
    }
    s += "\n";
  }
  for (std::size_t fi = 0; fi < st.fun.size(); ++fi) {
    bool first = true;
    for (const auto& [args, vals] : st.fun[fi]) {
      if (vals.empty()) continue;
      s += first ? "fun " + st.lang.functions[fi].name + ": " : ";";
      s += "(" + (args.empty() ? std::string() : join_ids(args)) + ") -> {" +
           join_ids(Tuple(vals.begin(), vals.end())) + "}";
      first = false;
    }
    if (!first) s += "\n";
  }
  return s + "end\n";
}

std::string serialize_structure_file(const StructureFile& f) {
  std::vector<std::pair<char, int>> order = f.order;
  if (order.empty()) {
    for (std::size_t i = 0; i < f.languages.size(); ++i) order.emplace_back('l', i);
    for (std::size_t i = 0; i < f.structures.size(); ++i) order.emplace_back('s', i);
  }
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += "\n";
    auto [k, idx] = order[i];
    out += k == 'l' ? serialize_language(f.languages[idx])
                    : serialize_structure(f.structures[idx]);
  }
  return out;
}

}  // namespace ramsey
