#include "ramsey/cli.hpp"

#include <CLI11.hpp>

#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ramsey/amalgamation.hpp"
#include "ramsey/arrows.hpp"
#include "ramsey/completion.hpp"
#include "ramsey/eppa.hpp"
#include "ramsey/halesjewett.hpp"
#include "ramsey/orientations.hpp"
#include "ramsey/partite.hpp"

namespace ramsey::cli {

// --- Certificates -----------------------------------------------------------

std::optional<std::string> Certificate::find(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return std::nullopt;
}

std::string Certificate::param(const std::string& key) const {
  auto v = find(key);
  if (!v) throw InvalidInput(kind + ": missing parameter " + key);
  return *v;
}

void Certificate::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : params)
    if (k == key) {
      v = value;
      return;
    }
  params.emplace_back(key, value);
}

void Certificate::result(const std::string& key, const std::string& value) {
  results.emplace_back(key, value);
}

void Certificate::add_structure(const std::string& role, Structure s) {
  s.name = role;
  const Language* l = structures.language(s.lang.name);
  if (l && !l->same_symbols(s.lang)) s.lang.name = s.lang.name + "." + role;
  if (s.lang.name.empty()) s.lang.name = "L." + role;
  structures.add(s);
}

const Structure& Certificate::structure(const std::string& role) const {
  const Structure* s = structures.structure(role);
  if (!s) throw InvalidInput(kind + ": missing structure " + role);
  return *s;
}

std::string serialize_certificate(const Certificate& c) {
  std::string out = "cert " + c.kind + " v1\n";
  for (const auto& [k, v] : c.params) out += "param " + k + " " + v + "\n";
  for (const auto& [k, v] : c.results) out += "result " + k + " " + v + "\n";
  if (!c.structures.structures.empty()) {
    out += "structures\n";
    out += serialize_structure_file(c.structures);
    out += "end structures\n";
  }
  return out;
}

Certificate parse_certificate(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Certificate c;
  int no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty certificate");
  ++no;
  {
    std::istringstream h(line);
    std::string cert, kind, ver;
    h >> cert >> kind >> ver;
    if (cert != "cert" || kind.empty() || ver != "v1")
      throw ParseError(1, "certificate must start with 'cert <kind> v1'");
    c.kind = kind;
  }
  auto key_value = [&](const std::string& rest) {
    auto sp = rest.find(' ');
    if (sp == std::string::npos) return std::make_pair(rest, std::string());
    return std::make_pair(rest.substr(0, sp), rest.substr(sp + 1));
  };
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    if (line.rfind("param ", 0) == 0) {
      c.params.push_back(key_value(line.substr(6)));
    } else if (line.rfind("result ", 0) == 0) {
      c.results.push_back(key_value(line.substr(7)));
    } else if (line == "structures") {
      std::string body, l2;
      bool closed = false;
      while (std::getline(in, l2)) {
        ++no;
        if (l2 == "end structures") {
          closed = true;
          break;
        }
        body += l2 + "\n";
      }
      if (!closed) throw ParseError(no, "missing 'end structures'");
      c.structures = parse_structure_file(body);
    } else {
      throw ParseError(no, "unexpected certificate line");
    }
  }
  return c;
}

// --- Formatting helpers -----------------------------------------------------

namespace {

std::string ids(const std::vector<int>& v) {
  if (v.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(v[i]);
  }
  return s;
}

std::vector<int> parse_ids(const std::string& text) {
  std::string t = text;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  std::vector<int> out;
  std::string w;
  while (in >> w) {
    if (w == "-") continue;
    try {
      std::size_t pos = 0;
      int v = std::stoi(w, &pos);
      if (pos != w.size()) throw std::invalid_argument(w);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InvalidInput("expected integers, got '" + w + "'");
    }
  }
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  auto v = parse_ids(s);
  if (v.size() != 1) throw InvalidInput(what + ": expected one integer");
  return v[0];
}

std::int64_t to_i64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(what + ": expected an integer, got '" + s + "'");
  }
}

std::vector<std::string> parse_words(const std::string& s) {
  std::string t = s;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  std::vector<std::string> out;
  std::string w;
  while (in >> w)
    if (w != "-") out.push_back(w);
  return out;
}

std::string join_words(const std::vector<std::string>& w) {
  if (w.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i];
  return s;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string rat(const Rational& r) {
  std::ostringstream o;
  o << r;
  return o.str();
}

void add_output(Certificate& c, const std::string& name, Structure s) {
  c.add_structure("out." + name, std::move(s));
}

std::int64_t max_nodes(const Certificate& in) {
  auto v = in.find("max-nodes");
  return v ? to_i64(*v, "max-nodes") : Limits{}.max_nodes;
}

Limits limits(const Certificate& in) {
  Limits l;
  l.max_nodes = max_nodes(in);
  if (auto v = in.find("max-vertices")) l.max_vertices = to_i64(*v, "max-vertices");
  return l;
}

ExponentPolicy policy(const Certificate& in) {
  ExponentPolicy p;
  std::string s = in.find("policy").value_or("fixed:1");
  if (s.rfind("fixed:", 0) == 0) {
    p.kind = ExponentPolicy::Kind::Fixed;
    p.fixed = to_int(s.substr(6), "policy");
  } else if (s.rfind("hj:", 0) == 0) {
    p.kind = ExponentPolicy::Kind::HalesJewett;
    p.hj_cap = to_int(s.substr(3), "policy");
  } else if (s == "base") {
    p.kind = ExponentPolicy::Kind::BaseAlphabet;
  } else {
    throw InvalidInput("policy must be fixed:N, hj:CAP or base");
  }
  if (auto sch = in.find("schedule")) p.schedule = parse_ids(*sch);
  return p;
}

PictureOptions picture_options(const Certificate& in) {
  PictureOptions o;
  o.limits = limits(in);
  std::string e = in.find("extension").value_or("words");
  if (e == "words")
    o.extension = ExtensionPolicy::ParameterWords;
  else if (e == "all")
    o.extension = ExtensionPolicy::AllEmbeddings;
  else
    throw InvalidInput("extension must be words or all");
  return o;
}

void trace_results(Certificate& c, const ConstructionTrace& t) {
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    c.result("step", std::to_string(i) + " sigma " + std::to_string(s.sigma_size) +
                         " exponent " + std::to_string(s.exponent) + " mode " +
                         to_string(s.mode) + " core " + std::to_string(s.core_size));
  }
  const auto& p = t.final_picture();
  c.result("vertices", std::to_string(p.s.n));
  c.result("tuples", std::to_string(p.s.tuple_count()));
  c.result("mode", to_string(t.mode));
}

// --- Commands ---------------------------------------------------------------

using Handler = std::function<int(const Certificate&, Certificate&)>;

int cmd_tangent(const Certificate& in, Certificate& out) {
  int k = to_int(in.param("k"), "k");
  if (k < 1 || k > 200) throw InvalidInput("tangent: k must lie in 1..200");
  std::string s;
  for (const auto& t : tangent_numbers(k)) s += (s.empty() ? "" : " ") + t.str();
  out.result("values", s);
  return 0;
}

int cmd_hj(const Certificate& in, Certificate& out) {
  int sigma = to_int(in.param("sigma"), "sigma"), r = to_int(in.param("r"), "r");
  int cap = to_int(in.param("cap"), "cap");
  auto n = hj::hj_number(sigma, r, cap, max_nodes(in));
  if (n) {
    out.result("verdict", "found");
    out.result("number", std::to_string(*n));
    return 0;
  }
  auto bad = hj::find_bad_coloring(sigma, cap, r, max_nodes(in));
  out.result("verdict", "above-cap");
  if (bad) out.result("witness", ids(*bad));
  return 1;
}

int cmd_arrow(const Certificate& in, Certificate& out) {
  const auto &a = in.structure("A"), &b = in.structure("B"), &c = in.structure("C");
  int r = to_int(in.param("colors"), "colors");
  if (in.find("degree").value_or("no") == "yes") {
    auto d = ramsey_degree_in(a, b, c, r, max_nodes(in));
    out.result("degree", std::to_string(d.t));
    out.result("automorphisms", std::to_string(d.automorphisms));
    if (d.lower_witness) out.result("lower-witness", ids(d.lower_witness->colors));
    return 0;
  }
  auto res = check_arrow(a, b, c, r, max_nodes(in));
  out.result("verdict", res.holds ? "holds" : "fails");
  out.result("vertices", std::to_string(res.vertices));
  out.result("edges", std::to_string(res.edges));
  if (res.witness) out.result("witness", ids(res.witness->colors));
  return res.holds ? 0 : 1;
}

int cmd_emb(const Certificate& in, Certificate& out) {
  const auto &a = in.structure("A"), &b = in.structure("B");
  std::vector<VertexMap> maps;
  if (in.find("projection").value_or("no") == "yes") {
    for (const auto& h : enumerate_homomorphisms(a, b, max_nodes(in)))
      if (is_homomorphism_embedding(h, a, b)) maps.push_back(h);
  } else {
    EmbeddingConstraints c;
    auto closed = parse_words(in.find("closed").value_or("-"));
    if (!closed.empty()) c.u_closed = closed;
    for (const auto& e : enumerate_embeddings(a, b, c, max_nodes(in))) maps.push_back(e.map);
  }
  out.result("count", std::to_string(maps.size()));
  for (const auto& m : maps) out.result("map", ids(m));
  return maps.empty() ? 1 : 0;
}

int cmd_amalgam(const Certificate& in, Certificate& out) {
  if (in.param("mode") == "tree") {
    TreeAmalgamSpec spec;
    spec.leaf = in.structure("leaf");
    spec.root = to_int(in.param("root"), "root");
    int k = to_int(in.param("nodes"), "nodes");
    for (int i = 0; i < k; ++i) {
      auto w = parse_words(in.param("node" + std::to_string(i)));
      TreeAmalgamNode nd;
      if (!w.empty()) {
        if (w.size() != 2) throw InvalidInput("tree node: expected LEFT RIGHT");
        nd.left = to_int(w[0], "left");
        nd.right = to_int(w[1], "right");
        nd.overlap = in.structure("O" + std::to_string(i));
        nd.f1 = parse_ids(in.param("f1." + std::to_string(i)));
        nd.f2 = parse_ids(in.param("f2." + std::to_string(i)));
      }
      spec.nodes.push_back(nd);
    }
    auto res = tree_amalgam(spec);
    for (const auto& c : res.copies) out.result("copy", ids(c));
    add_output(out, "C", res.s);
    return 0;
  }
  AmalgamationProblem p{in.structure("base"), in.structure("left"), in.structure("right"),
                        parse_ids(in.param("alpha1")), parse_ids(in.param("alpha2"))};
  auto am = free_amalgam(p);
  out.result("grade", to_string(is_amalgam(am.c, p, am.beta1, am.beta2)));
  out.result("beta1", ids(am.beta1));
  out.result("beta2", ids(am.beta2));
  add_output(out, "C", am.c);
  return 0;
}

PartiteSystem system_from(const Certificate& in, const std::string& role) {
  PartiteSystem ps;
  ps.s = in.structure(role);
  ps.proj = parse_ids(in.param("proj"));
  if (static_cast<int>(ps.proj.size()) != ps.s.n)
    throw InvalidInput("proj: one predicate per vertex of " + role + " needed");
  int k = 0;
  for (int p : ps.proj) {
    if (p < 0) throw InvalidInput("proj: negative predicate");
    k = std::max(k, p + 1);
  }
  ps.predicates = in.find("predicates") ? to_int(in.param("predicates"), "predicates") : k;
  return ps;
}

int cmd_partite(const Certificate& in, Certificate& out) {
  std::string mode = in.param("mode");
  const auto& a = in.structure("A");
  if (mode == "lemma") {
    auto b = system_from(in, "B");
    auto res = induced_partite_lemma(a, b, to_int(in.param("exponent"), "exponent"),
                                     nullptr, limits(in));
    int fw = 0;
    for (const auto& f : res.w.f) fw += is_embedding(f, b.s, res.c.s);
    out.result("vertices", std::to_string(res.c.s.n));
    out.result("sigma", std::to_string(res.w.sigma.size()));
    out.result("parameter-words", std::to_string(res.w.pwords.size()));
    out.result("f-embeddings", std::to_string(fw));
    out.result("mode", to_string(res.mode));
    return fw == static_cast<int>(res.w.f.size()) ? 0 : 1;
  }
  if (mode == "picture") {
    auto b = system_from(in, "B");
    auto res = picture_lemma(a, parse_ids(in.param("alpha")), b,
                             to_int(in.param("exponent"), "exponent"), picture_options(in));
    out.result("vertices", std::to_string(res.c.s.n));
    out.result("core", std::to_string(res.rec.core_size));
    out.result("sigma", std::to_string(res.rec.sigma_size));
    out.result("extensions", std::to_string(res.rec.extensions.size()));
    out.result("mode", to_string(res.rec.mode));
    return 0;
  }
  if (mode == "induced") {
    const auto &b = in.structure("B"), &d = in.structure("D");
    auto t = induced_construction(a, b, d, policy(in), picture_options(in));
    trace_results(out, t);
    auto bad = check_irreducible_projection(t, b);
    out.result("irreducible-projection", bad ? "fails" : "holds");
    int code = bad ? 1 : 0;
    int r = to_int(in.find("check-colors").value_or("0"), "check-colors");
    if (r > 0) {
      auto res = check_arrow(a, b, t.final_picture().s, r, max_nodes(in));
      out.result("arrow", res.holds ? "holds" : "fails");
      if (!res.holds) code = 1;
    }
    return code;
  }
  if (mode == "sparsen") {
    const auto &b = in.structure("B"), &c0 = in.structure("C0");
    int n = to_int(in.param("n"), "n");
    auto res = sparsen(a, b, c0, n, policy(in), picture_options(in));
    auto kind = classify_map(res.to_c0, res.c, c0);
    bool hom_emb = kind && kind_implies(*kind, MapKind::HomomorphismEmbedding);
    auto tl = is_locally_treelike(res.c, a, b, n, res.witnesses);
    out.result("vertices", std::to_string(res.c.n));
    out.result("to-c0", kind ? to_string(*kind) : "none");
    out.result("tree-witnesses", std::to_string(res.witnesses.size()));
    out.result("treelike", yes_no(tl.all_valid));
    out.result("extension-certificates", std::to_string(res.extensions.size()));
    return hom_emb && tl.all_valid ? 0 : 1;
  }
  if (mode == "closed") {
    const auto& b = in.structure("B");
    auto u = parse_words(in.param("u"));
    std::optional<Structure> d;
    if (in.structures.structure("D")) d = in.structure("D");
    int preds = to_int(in.find("predicates").value_or("0"), "predicates");
    auto res = recursive_closed_construction(a, b, u, policy(in), d, preds, picture_options(in));
    bool all_u = std::all_of(res.u_transversal.begin(), res.u_transversal.end(),
                             [](bool x) { return x; });
    out.result("vertices", std::to_string(res.c.n));
    out.result("start", std::to_string(res.d.n));
    out.result("steps", std::to_string(res.inner.size()));
    out.result("copies", std::to_string(res.copies.size()));
    out.result("u-transversal", yes_no(all_u));
    return all_u ? 0 : 1;
  }
  throw InvalidInput("partite: unknown mode " + mode);
}

int cmd_complete(const Certificate& in, Certificate& out) {
  std::string mode = in.param("mode");
  const auto& g = in.structure("G");
  if (mode == "metric") {
    auto res = complete_metric(labelled_graph_from_structure(g));
    out.result("cap", rat(res.cap));
    if (res.ok()) {
      out.result("verdict", "completed");
      add_output(out, "completion", to_structure(*res.completed));
      return 0;
    }
    out.result("verdict", "non-metric-cycle");
    out.result("cycle", ids(res.witness->cycle));
    std::string ls;
    for (const auto& l : res.witness->labels) ls += (ls.empty() ? "" : " ") + rat(l);
    out.result("labels", ls);
    return 1;
  }
  if (mode == "equiv") {
    auto res = complete_equivalence(equivalence_graph_from_structure(g));
    if (res.ok()) {
      out.result("verdict", "completed");
      add_output(out, "completion", to_structure(*res.completed));
      return 0;
    }
    out.result("verdict", "inconsistent");
    out.result("witness", ids(*res.witness));
    return 1;
  }
  if (mode == "order") {
    auto res = extend_linear_order(g, in.find("rel").value_or("<"));
    if (res.ok()) {
      out.result("verdict", "completed");
      add_output(out, "completion", *res.result);
      return 0;
    }
    out.result("verdict", to_string(res.violation));
    out.result("witness", ids(res.witness));
    return 1;
  }
  if (mode == "poset") {
    auto res = complete_poset_linext(g);
    if (res.ok()) {
      out.result("verdict", "completed");
      add_output(out, "completion", *res.result);
      return 0;
    }
    out.result("clause", std::to_string(res.clause));
    out.result("pair", ids({res.pair.first, res.pair.second}));
    out.result("violation", to_string(res.violation));
    out.result("witness", ids(res.witness));
    return 1;
  }
  if (mode == "crel") {
    auto res = check_c_relation(g);
    out.result("verdict", res.holds ? "holds" : "fails");
    if (!res.holds) {
      out.result("axiom", std::to_string(res.axiom));
      out.result("witness", ids(res.witness));
    }
    return res.holds ? 0 : 1;
  }
  throw InvalidInput("complete: unknown mode " + mode);
}

int cmd_ba(const Certificate& in, Certificate& out) {
  auto res = ba_embedding_correspondence(to_int(in.param("m"), "m"), to_int(in.param("k"), "k"));
  out.result("surjections", std::to_string(res.surjections));
  out.result("embeddings", std::to_string(res.embeddings));
  out.result("certified", yes_no(res.all_certified));
  out.result("round-trip", yes_no(res.round_trip));
  for (const auto& [g, f] : res.pairs) out.result("pair", ids(g) + " | " + ids(f));
  return res.counts_agree() && res.all_certified && res.round_trip ? 0 : 1;
}

std::string partial_text(const PartialAutomorphism& p) {
  return ids(p.domain) + " | " + ids(p.map);
}

int cmd_eppa(const Certificate& in, Certificate& out) {
  std::string mode = in.param("mode");
  if (mode == "npartite") {
    const auto& a = in.structure("A");
    auto w = npartite_tournament_witness(a, parse_ids(in.param("parts")));
    out.result("padding", std::to_string(w.padding));
    out.result("witness-vertices", std::to_string(w.b.n));
    out.result("embedding", ids(w.embedding));
    auto rep = is_eppa_witness({a, w.b, w.embedding, std::nullopt}, max_nodes(in));
    out.result("verified", yes_no(rep.verified));
    if (rep.failing) out.result("failing", partial_text(*rep.failing));
    add_output(out, "B", w.b);
    return rep.verified ? 0 : 1;
  }
  EppaInstance inst{in.structure("small"), in.structure("witness"),
                    parse_ids(in.param("inclusion")), std::nullopt};
  auto rep = is_eppa_witness(inst, max_nodes(in));
  if (mode == "check") {
    out.result("verified", yes_no(rep.verified));
    if (rep.failing) out.result("failing", partial_text(*rep.failing));
    for (const auto& [key, g] : rep.table)
      out.result("entry", ids(key.first) + " | " + ids(key.second) + " | " + ids(g));
    return rep.verified ? 0 : 1;
  }
  if (mode == "coherence") {
    if (!rep.verified) {
      out.result("verified", "no");
      out.result("failing", partial_text(*rep.failing));
      return 1;
    }
    inst.table = rep.table;
    auto c = check_coherence(inst);
    out.result("coherent", yes_no(c.coherent));
    if (!c.coherent) {
      out.result("kind", c.kind);
      out.result("f", partial_text(*c.f));
      out.result("g", partial_text(*c.g));
    }
    return c.coherent ? 0 : 1;
  }
  throw InvalidInput("eppa: unknown mode " + mode);
}

int cmd_orient(const Certificate& in, Certificate& out) {
  std::string mode = in.param("mode");
  auto g = UGraph::from_structure(in.structure("G"));
  if (mode == "delta") {
    out.result("delta", std::to_string(predimension(g)));
    return 0;
  }
  if (mode == "class") {
    std::string which = in.param("which");
    if (which != "C0" && which != "CF") throw InvalidInput("class: which must be C0 or CF");
    double base = kDefaultLogBase;
    if (auto b = in.find("log-base")) {
      try {
        base = std::stod(*b);
      } catch (const std::exception&) {
        throw InvalidInput("log-base: expected a number");
      }
    }
    int bound = to_int(in.find("bound").value_or("12"), "bound");
    auto res = class_membership(g, which == "C0" ? DeltaClass::C0 : DeltaClass::CF, base, bound);
    out.result("member", yes_no(res.member));
    if (res.violating) out.result("violating", ids(*res.violating));
    return res.member ? 0 : 1;
  }
  if (mode == "orient") {
    std::optional<VertexSet> closed;
    if (auto c = in.find("closed")) {
      auto v = parse_ids(*c);
      std::sort(v.begin(), v.end());
      closed = v;
    }
    bool dc = in.find("d-closed").value_or("no") == "yes";
    auto o = find_2orientation(g, closed, dc, max_nodes(in));
    if (!o) {
      out.result("verdict", "none");
      if (!closed) {
        auto m = class_membership(g, DeltaClass::C0, kDefaultLogBase, 30);
        if (m.violating) out.result("violating", ids(*m.violating));
      }
      return 1;
    }
    out.result("verdict", "found");
    for (auto [t, h] : o->arcs) out.result("arc", std::to_string(t) + " " + std::to_string(h));
    std::string roots;
    for (auto [v, m] : o->roots())
      roots += (roots.empty() ? "" : " ") + std::to_string(v) + ":" + std::to_string(m);
    out.result("roots", roots.empty() ? "-" : roots);
    out.result("multiplicity-sum", std::to_string(o->multiplicity_sum()));
    return 0;
  }
  if (mode == "order") {
    auto h = parse_ids(in.param("h"));
    std::sort(h.begin(), h.end());
    std::string which = in.param("which");
    if (which != "s" && which != "d") throw InvalidInput("order: which must be s or d");
    int bound = to_int(in.find("bound").value_or("12"), "bound");
    auto res = substructure_order(g, h, which == "s" ? SubOrder::LeqS : SubOrder::LeqD, bound);
    out.result("holds", yes_no(res.holds));
    if (res.witness) out.result("witness", ids(*res.witness));
    return res.holds ? 0 : 1;
  }
  throw InvalidInput("orient: unknown mode " + mode);
}

int cmd_validate(const Certificate& in, Certificate& out) {
  bool all = true;
  for (const auto& s : in.structures.structures) {
    auto rep = validate_structure(s);
    all = all && rep.valid;
    std::string line = s.name + " " + (rep.valid ? "valid" : "invalid") + " vertices " +
                       std::to_string(s.n) + " ordered " + yes_no(rep.ordered);
    out.result("structure", line);
    for (const auto& p : rep.problems) out.result("problem", s.name + ": " + p);
  }
  return all ? 0 : 1;
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"tangent", cmd_tangent}, {"hj", cmd_hj},         {"arrow", cmd_arrow},
      {"emb", cmd_emb},         {"amalgam", cmd_amalgam}, {"partite", cmd_partite},
      {"complete", cmd_complete}, {"ba-corr", cmd_ba},  {"eppa", cmd_eppa},
      {"orient", cmd_orient},   {"validate", cmd_validate},
  };
  return h;
}

// Independent checks of witnesses carried by a certificate.
std::optional<std::string> check_witnesses(const Certificate& c) {
  auto res = [&](const std::string& k) -> std::optional<std::string> {
    for (const auto& [key, v] : c.results)
      if (key == k) return v;
    return std::nullopt;
  };
  if (c.kind == "arrow" && res("witness")) {
    auto h = abc_hypergraph(c.structure("A"), c.structure("B"), c.structure("C"), max_nodes(c));
    auto col = parse_ids(*res("witness"));
    if (col.size() != h.vertices.size()) return "witness length";
    if (monochromatic_edge(h, col)) return "witness coloring has a monochromatic copy";
  }
  if (c.kind == "hj" && res("witness")) {
    int sigma = to_int(c.param("sigma"), "sigma"), cap = to_int(c.param("cap"), "cap");
    if (hj::monochromatic_line(parse_ids(*res("witness")), sigma, cap))
      return "witness coloring has a monochromatic line";
  }
  if (c.kind == "eppa" && c.param("mode") == "check") {
    const auto& w = c.structure("witness");
    auto inc = parse_ids(c.param("inclusion"));
    for (const auto& [key, v] : c.results) {
      if (key != "entry") continue;
      std::vector<std::string> parts;
      std::string cur;
      for (char ch : v + "|") {
        if (ch == '|') {
          parts.push_back(cur);
          cur.clear();
        } else {
          cur += ch;
        }
      }
      auto dom = parse_ids(parts.at(0)), img = parse_ids(parts.at(1)), g = parse_ids(parts.at(2));
      if (static_cast<int>(g.size()) != w.n || !is_embedding(g, w, w)) return "entry is no automorphism";
      for (std::size_t i = 0; i < dom.size(); ++i)
        if (g[inc[dom[i]]] != inc[img[i]]) return "entry does not extend its key";
    }
  }
  if (c.kind == "complete" && c.param("mode") == "metric" && res("verdict") == "completed") {
    auto in = labelled_graph_from_structure(c.structure("G"));
    auto outg = labelled_graph_from_structure(c.structure("out.completion"));
    if (!outg.complete() || !satisfies_triangle_inequality(outg)) return "completion is not metric";
    for (const auto& [e, d] : in.labels)
      if (outg.get(e.first, e.second) != d) return "completion changes a label";
  }
  return std::nullopt;
}

}  // namespace

Outcome execute(const Certificate& input) {
  auto it = handlers().find(input.kind);
  if (it == handlers().end()) throw InvalidInput("unknown certificate kind " + input.kind);
  Outcome o;
  o.cert.kind = input.kind;
  o.cert.params = input.params;
  for (const auto& s : input.structures.structures)
    if (s.name.rfind("out.", 0) != 0) o.cert.add_structure(s.name, s);
  o.code = it->second(input, o.cert);
  return o;
}

int verify_certificate(const Certificate& c, std::ostream& out) {
  Certificate input;
  input.kind = c.kind;
  input.params = c.params;
  for (const auto& s : c.structures.structures)
    if (s.name.rfind("out.", 0) != 0) input.add_structure(s.name, s);
  auto o = execute(input);
  std::string verdict = o.code == 0 ? "holds" : "fails";
  if (serialize_certificate(o.cert) != serialize_certificate(c)) {
    out << "verify " << c.kind << ": replay differs from the certificate\n";
    return 1;
  }
  if (auto bad = check_witnesses(c)) {
    out << "verify " << c.kind << ": " << *bad << "\n";
    return 1;
  }
  out << "verify " << c.kind << ": confirmed, verdict " << verdict << "\n";
  return 0;
}

// --- Command line -----------------------------------------------------------

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// PATH or PATH:NAME; without a name the first structure of the file.
Structure load_structure(const std::string& ref) {
  std::string path = ref, name;
  auto colon = ref.rfind(':');
  if (colon != std::string::npos && colon + 1 < ref.size() &&
      ref.find('/', colon) == std::string::npos) {
    path = ref.substr(0, colon);
    name = ref.substr(colon + 1);
  }
  auto f = parse_structure_file(read_file(path));
  if (f.structures.empty()) throw InvalidInput(path + ": no structures");
  if (name.empty()) return f.structures.front();
  const Structure* s = f.structure(name);
  if (!s) throw InvalidInput(path + ": no structure named " + name);
  return *s;
}

// leaf REF / node - - / node LEFT RIGHT REF | F1 | F2 / root K
void load_tree_spec(const std::string& path, Certificate& c) {
  std::istringstream in(read_file(path));
  std::string line;
  int nodes = 0, no = 0;
  bool have_root = false, have_leaf = false;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "leaf") {
      std::string ref;
      ls >> ref;
      c.add_structure("leaf", load_structure(ref));
      have_leaf = true;
    } else if (head == "root") {
      std::string k;
      ls >> k;
      c.set("root", k);
      have_root = true;
    } else if (head == "node") {
      std::string l, r;
      ls >> l >> r;
      std::string idx = std::to_string(nodes);
      if (l == "-") {
        c.set("node" + idx, "-");
      } else {
        std::string ref;
        ls >> ref;
        std::string rest;
        std::getline(ls, rest);
        auto bar1 = rest.find('|'), bar2 = rest.rfind('|');
        if (bar1 == std::string::npos || bar1 == bar2)
          throw ParseError(no, "node needs '| F1 | F2'");
        c.set("node" + idx, l + " " + r);
        c.add_structure("O" + idx, load_structure(ref));
        c.set("f1." + idx, ids(parse_ids(rest.substr(bar1 + 1, bar2 - bar1 - 1))));
        c.set("f2." + idx, ids(parse_ids(rest.substr(bar2 + 1))));
      }
      ++nodes;
    } else {
      throw ParseError(no, "expected leaf, node or root");
    }
  }
  if (!have_leaf || !have_root) throw InvalidInput("tree spec needs leaf and root lines");
  c.set("nodes", std::to_string(nodes));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural Ramsey theory toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string cert_path;
  std::int64_t nodes = Limits{}.max_nodes, verts = Limits{}.max_vertices;
  int threads = 1;
  app.add_option("--cert", cert_path, "Write the certificate to this file");
  app.add_option("--max-nodes", nodes, "Search node budget");
  app.add_option("--max-vertices", verts, "Vertex cap for constructions");
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  Certificate in;
  std::vector<std::string> refs;      // structure files in role order
  std::vector<std::string> roles;
  std::string s1, s2, s3, s4;
  int i1 = 0, i2 = 0;
  // Options with defaults get their own storage.
  int hj_cap = 3, bound_c = 12, bound_o = 12;
  std::string which_c = "C0", which_o = "s";
  bool f1 = false;
  std::string verify_path, validate_path, tree_path;

  // Positional structure references; the storage must not move once bound.
  std::deque<std::string> slot_store;
  std::map<CLI::App*, std::vector<std::string*>> slots;
  auto structs = [&](CLI::App* sub, std::vector<std::string> names) {
    for (const auto& name : names) {
      slot_store.emplace_back();
      slots[sub].push_back(&slot_store.back());
      sub->add_option(name, slot_store.back(), "Structure file PATH[:NAME]")->required();
    }
  };

  // Each subcommand fills `in` in its callback; roles name the structures.
  auto* tangent = app.add_subcommand("tangent", "Tangent numbers t_1..t_k");
  tangent->add_option("k", i1)->required();
  tangent->callback([&] { in.kind = "tangent"; in.set("k", std::to_string(i1)); });

  auto* hjc = app.add_subcommand("hj", "Hales-Jewett number by exhaustive search");
  hjc->add_option("sigma", i1)->required();
  hjc->add_option("r", i2)->required();
  hjc->add_option("--cap", hj_cap, "Largest dimension tried");
  hjc->callback([&] {
    in.kind = "hj";
    in.set("sigma", std::to_string(i1));
    in.set("r", std::to_string(i2));
    in.set("cap", std::to_string(hj_cap));
  });

  auto* arrow = app.add_subcommand("arrow", "Check C -> (B)^A_r");
  structs(arrow, {"A", "B", "C"});
  arrow->add_option("--colors", i1)->required();
  arrow->add_flag("--degree", f1, "Compute the least t with C -> (B)^A_{r,t}");
  arrow->callback([&] {
    in.kind = "arrow";
    roles = {"A", "B", "C"};
    in.set("colors", std::to_string(i1));
    in.set("degree", yes_no(f1));
  });

  auto* emb = app.add_subcommand("emb", "Enumerate embeddings A -> B");
  structs(emb, {"A", "B"});
  emb->add_flag("--projection", f1, "List homomorphism-embeddings instead");
  emb->add_option("--closed", s1, "Symbols whose closure the image must respect");
  emb->callback([&] {
    in.kind = "emb";
    roles = {"A", "B"};
    in.set("projection", yes_no(f1));
    if (!s1.empty()) in.set("closed", join_words(parse_words(s1)));
  });

  auto* amalgam = app.add_subcommand("amalgam", "Free or tree amalgam");
  std::vector<std::string> am_refs;
  amalgam->add_option("structures", am_refs, "BASE LEFT RIGHT for the free amalgam");
  amalgam->add_option("--alpha1", s1);
  amalgam->add_option("--alpha2", s2);
  amalgam->add_flag("--free", f1);
  amalgam->add_option("--tree", tree_path, "Tree amalgam spec file");
  amalgam->callback([&] {
    in.kind = "amalgam";
    if (!tree_path.empty()) {
      in.set("mode", "tree");
      load_tree_spec(tree_path, in);
      return;
    }
    if (am_refs.size() != 3) throw InvalidInput("amalgam: BASE LEFT RIGHT expected");
    in.set("mode", "free");
    in.set("alpha1", ids(parse_ids(s1)));
    in.set("alpha2", ids(parse_ids(s2)));
    refs = am_refs;
    roles = {"base", "left", "right"};
  });

  auto* partite = app.add_subcommand("partite", "Partite constructions");
  partite->require_subcommand(1);
  std::string pol = "fixed:1", schedule, ext = "words", caps;
  auto partite_common = [&](CLI::App* sub) {
    sub->add_option("--caps", caps, "VERTICES[,NODES] caps for this construction");
    sub->add_option("--exponent-policy", pol, "fixed:N, hj:CAP or base");
    sub->add_option("--schedule", schedule, "Per-step exponents, e.g. 2,1,1");
    sub->add_option("--extension", ext, "words or all");
  };
  auto set_partite = [&](const std::string& mode) {
    in.kind = "partite";
    in.set("mode", mode);
    in.set("policy", pol);
    if (!schedule.empty()) in.set("schedule", ids(parse_ids(schedule)));
    in.set("extension", ext);
    auto c = parse_ids(caps);
    if (c.size() > 2) throw InvalidInput("--caps: VERTICES[,NODES] expected");
    if (c.size() >= 1) in.set("max-vertices", std::to_string(c[0]));
    if (c.size() == 2) in.set("max-nodes", std::to_string(c[1]));
  };
  auto* lemma = partite->add_subcommand("lemma", "Induced partite lemma");
  structs(lemma, {"A", "B"});
  lemma->add_option("--proj", s1, "Predicate of each B vertex")->required();
  lemma->add_option("--exponent", i1)->required();
  lemma->add_option("--caps", caps, "VERTICES[,NODES] caps for this construction");
  lemma->callback([&] {
    set_partite("lemma");
    in.set("proj", ids(parse_ids(s1)));
    in.set("exponent", std::to_string(i1));
    roles = {"A", "B"};
  });
  auto* picture = partite->add_subcommand("picture", "Picture lemma");
  structs(picture, {"A", "B"});
  picture->add_option("--alpha", s2, "Predicate of each A vertex")->required();
  picture->add_option("--proj", s1, "Predicate of each B vertex")->required();
  picture->add_option("--exponent", i1)->required();
  partite_common(picture);
  picture->callback([&] {
    set_partite("picture");
    in.set("alpha", ids(parse_ids(s2)));
    in.set("proj", ids(parse_ids(s1)));
    in.set("exponent", std::to_string(i1));
    roles = {"A", "B"};
  });
  auto* induced = partite->add_subcommand("induced", "Induced construction over D");
  structs(induced, {"A", "B", "D"});
  induced->add_option("--check-colors", i2, "Check the arrow on the final picture");
  partite_common(induced);
  induced->callback([&] {
    set_partite("induced");
    if (i2 > 0) in.set("check-colors", std::to_string(i2));
    roles = {"A", "B", "D"};
  });
  auto* sparse = partite->add_subcommand("sparsen", "Iterated sparsening");
  structs(sparse, {"A", "B", "C0"});
  sparse->add_option("-n", i1)->required();
  partite_common(sparse);
  sparse->callback([&] {
    set_partite("sparsen");
    in.set("n", std::to_string(i1));
    roles = {"A", "B", "C0"};
  });
  auto* closedc = partite->add_subcommand("closed", "Recursive construction with closures");
  std::vector<std::string> closed_refs;
  closedc->add_option("structures", closed_refs, "A B [D]")->required();
  closedc->add_option("--u", s1, "Closure symbols")->required();
  closedc->add_option("--predicates", i1, "Predicates when D is absent");
  partite_common(closedc);
  closedc->callback([&] {
    set_partite("closed");
    if (closed_refs.size() < 2 || closed_refs.size() > 3)
      throw InvalidInput("partite closed: A B [D] expected");
    in.set("u", join_words(parse_words(s1)));
    if (i1 > 0) in.set("predicates", std::to_string(i1));
    refs = closed_refs;
    roles = {"A", "B", "D"};
    roles.resize(refs.size());
  });

  auto* complete = app.add_subcommand("complete", "Completions");
  complete->require_subcommand(1);
  for (std::string mode : {"metric", "equiv", "order", "poset", "crel"}) {
    auto* sub = complete->add_subcommand(mode);
    structs(sub, {"G"});
    if (mode == "order") sub->add_option("--rel", s1, "Relation to extend");
    sub->callback([&, mode] {
      in.kind = "complete";
      in.set("mode", mode);
      if (mode == "order" && !s1.empty()) in.set("rel", s1);
      roles = {"G"};
    });
  }

  auto* ba = app.add_subcommand("ba-corr", "Boolean algebra embeddings vs rigid surjections");
  ba->add_option("m", i1)->required();
  ba->add_option("k", i2)->required();
  ba->callback([&] {
    in.kind = "ba-corr";
    in.set("m", std::to_string(i1));
    in.set("k", std::to_string(i2));
  });

  auto* eppa = app.add_subcommand("eppa", "Extension property for partial automorphisms");
  eppa->require_subcommand(1);
  for (std::string mode : {"check", "coherence"}) {
    auto* sub = eppa->add_subcommand(mode);
    structs(sub, {"small", "witness"});
    sub->add_option("--inclusion", s1, "Embedding of small into witness")->required();
    sub->callback([&, mode] {
      in.kind = "eppa";
      in.set("mode", mode);
      in.set("inclusion", ids(parse_ids(s1)));
      roles = {"small", "witness"};
    });
  }
  auto* np = eppa->add_subcommand("npartite", "Witness for an n-partite tournament");
  structs(np, {"A"});
  np->add_option("--parts", s1, "Part of each vertex")->required();
  np->callback([&] {
    in.kind = "eppa";
    in.set("mode", "npartite");
    in.set("parts", ids(parse_ids(s1)));
    roles = {"A"};
  });

  auto* orient = app.add_subcommand("orient", "Predimension and 2-orientations");
  orient->require_subcommand(1);
  auto* od = orient->add_subcommand("delta");
  structs(od, {"G"});
  od->callback([&] { in.kind = "orient"; in.set("mode", "delta"); roles = {"G"}; });
  auto* oc = orient->add_subcommand("class");
  structs(oc, {"G"});
  oc->add_option("--which", which_c, "C0 or CF (default C0)");
  oc->add_option("--log-base", s2, "Logarithm base for CF (default e)");
  oc->add_option("--bound", bound_c, "Exhaustive vertex bound (default 12)");
  oc->callback([&] {
    in.kind = "orient";
    in.set("mode", "class");
    in.set("which", which_c);
    if (!s2.empty()) in.set("log-base", s2);
    in.set("bound", std::to_string(bound_c));
    roles = {"G"};
  });
  auto* oo = orient->add_subcommand("orient");
  structs(oo, {"G"});
  oo->add_option("--closed", s1, "Vertex set to keep successor-closed");
  oo->add_flag("--d-closed", f1, "Also require roots outside the set");
  oo->callback([&] {
    in.kind = "orient";
    in.set("mode", "orient");
    if (!s1.empty() || f1) in.set("closed", ids(parse_ids(s1)));
    in.set("d-closed", yes_no(f1));
    roles = {"G"};
  });
  auto* oord = orient->add_subcommand("order");
  structs(oord, {"G"});
  oord->add_option("--set", s1, "Vertex set of the substructure")->required();
  oord->add_option("--which", which_o, "s or d (default s)");
  oord->add_option("--bound", bound_o, "Exhaustive vertex bound (default 12)");
  oord->callback([&] {
    in.kind = "orient";
    in.set("mode", "order");
    in.set("h", ids(parse_ids(s1)));
    in.set("which", which_o);
    in.set("bound", std::to_string(bound_o));
    roles = {"G"};
  });

  auto* validate = app.add_subcommand("validate", "Parse and validate a structure file");
  validate->add_option("file", validate_path)->required();
  validate->callback([&] { in.kind = "validate"; });

  auto* verify = app.add_subcommand("verify", "Replay a certificate");
  verify->add_option("cert", verify_path)->required();
  verify->callback([&] { in.kind = "verify"; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    CLI::App* leaf = &app;
    while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
    if (auto it = slots.find(leaf); it != slots.end()) {
      refs.clear();
      for (auto* s : it->second) refs.push_back(*s);
    }
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : 2;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 3;
  }

  try {
    if (in.kind == "verify") return verify_certificate(parse_certificate(read_file(verify_path)), out);
    if (in.kind == "validate") {
      auto f = parse_structure_file(read_file(validate_path));
      for (const auto& s : f.structures) in.add_structure(s.name, s);
    }
    for (std::size_t i = 0; i < roles.size(); ++i) in.add_structure(roles[i], load_structure(refs[i]));
    if (nodes != Limits{}.max_nodes) in.set("max-nodes", std::to_string(nodes));
    if (verts != Limits{}.max_vertices) in.set("max-vertices", std::to_string(verts));

    auto o = execute(in);
    std::string text = serialize_certificate(o.cert);
    if (o.cert.kind == "tangent") {
      out << o.cert.results.front().second << "\n";
    } else {
      for (const auto& [k, v] : o.cert.results) out << k << ": " << v << "\n";
      for (const auto& s : o.cert.structures.structures)
        if (s.name.rfind("out.", 0) == 0) out << serialize_structure(s);
      if (o.code == 1) out << text;
    }
    if (!cert_path.empty()) {
      std::ofstream f(cert_path, std::ios::binary);
      if (!f) throw InvalidInput("cannot write " + cert_path);
      f << text;
    }
    return o.code;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ramsey::cli
