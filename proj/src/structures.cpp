#include "ramsey/structures.hpp"

#include <algorithm>
#include <numeric>

namespace ramsey {

namespace {

const std::set<int> kEmpty;

// Calls visit(subset) for every k-subset of 0..n-1 in lexicographic order.
template <class F>
bool for_each_combination(int n, int k, F&& visit) {
  if (k > n || k < 0) return true;
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    if (!visit(c)) return false;
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return true;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

Tuple map_tuple(const VertexMap& f, const Tuple& t) {
  Tuple r(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = f[t[i]];
  return r;
}

void require_same_language(const Structure& a, const Structure& b) {
  if (!a.lang.same_symbols(b.lang))
    throw InvalidInput("structures '" + a.name + "' and '" + b.name +
                       "' are over different languages");
}

std::vector<std::vector<int>> preimages(const VertexMap& f, int nb) {
  std::vector<std::vector<int>> pre(nb);
  for (int v = 0; v < static_cast<int>(f.size()); ++v) pre[f[v]].push_back(v);
  return pre;
}

}  // namespace

// --- Language ---------------------------------------------------------------

int Language::add_relation(const std::string& sym, int arity) {
  if (has_symbol(sym)) throw InvalidInput("duplicate symbol '" + sym + "'");
  if (arity < 1)
    throw InvalidInput("relation '" + sym + "' needs positive arity");
  relations.push_back({sym, arity});
  return static_cast<int>(relations.size()) - 1;
}

int Language::add_function(const std::string& sym, int arity) {
  if (has_symbol(sym)) throw InvalidInput("duplicate symbol '" + sym + "'");
  if (arity < 0)
    throw InvalidInput("function '" + sym + "' needs non-negative arity");
  functions.push_back({sym, arity});
  return static_cast<int>(functions.size()) - 1;
}

int Language::relation_index(std::string_view sym) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == sym) return static_cast<int>(i);
  return -1;
}

int Language::function_index(std::string_view sym) const {
  for (std::size_t i = 0; i < functions.size(); ++i)
    if (functions[i].name == sym) return static_cast<int>(i);
  return -1;
}

bool Language::has_symbol(std::string_view sym) const {
  return relation_index(sym) >= 0 || function_index(sym) >= 0;
}

// --- Structure --------------------------------------------------------------

Structure::Structure(Language l, int size)
    : lang(std::move(l)),
      n(size),
      rel(lang.relations.size()),
      fun(lang.functions.size()) {}

void Structure::add_tuple(std::string_view r, Tuple t) {
  int i = lang.relation_index(r);
  if (i < 0) throw InvalidInput("unknown relation '" + std::string(r) + "'");
  rel[i].insert(std::move(t));
}

bool Structure::has_tuple(std::string_view r, const Tuple& t) const {
  int i = lang.relation_index(r);
  return i >= 0 && rel[i].count(t) > 0;
}

void Structure::set_value(int f, Tuple args, std::set<int> vals) {
  if (vals.empty())
    fun[f].erase(args);
  else
    fun[f][std::move(args)] = std::move(vals);
}

void Structure::add_value(int f, const Tuple& args, int v) {
  fun[f][args].insert(v);
}

const std::set<int>& Structure::value(int f, const Tuple& args) const {
  auto it = fun[f].find(args);
  return it == fun[f].end() ? kEmpty : it->second;
}

int Structure::extend_relation(const std::string& sym, int arity) {
  int r = lang.add_relation(sym, arity);
  rel.emplace_back();
  return r;
}

bool Structure::ordered() const {
  int r = lang.relation_index("<");
  if (r < 0 || lang.relations[r].arity != 2) return false;
  const auto& lt = rel[r];
  if (static_cast<long long>(lt.size()) !=
      static_cast<long long>(n) * (n - 1) / 2)
    return false;
  std::vector<int> out(n, 0);
  for (const auto& t : lt) {
    if (t[0] == t[1] || t[0] < 0 || t[0] >= n || t[1] < 0 || t[1] >= n)
      return false;
    if (lt.count({t[1], t[0]})) return false;
    ++out[t[0]];
  }
  // A tournament is transitive iff its out-degrees are pairwise distinct.
  std::sort(out.begin(), out.end());
  for (int i = 0; i < n; ++i)
    if (out[i] != i) return false;
  return true;
}

std::size_t Structure::tuple_count() const {
  std::size_t c = 0;
  for (const auto& r : rel) c += r.size();
  for (const auto& f : fun) c += f.size();
  return c;
}

// --- Builders ---------------------------------------------------------------

Language graph_language() {
  Language l("graphs");
  l.add_relation("E", 2);
  return l;
}

Language ordered_graph_language() {
  Language l("ordered_graphs");
  l.add_relation("<", 2);
  l.add_relation("E", 2);
  return l;
}

Language order_language() {
  Language l("orders");
  l.add_relation("<", 2);
  return l;
}

Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                     bool ordered) {
  Structure s(ordered ? ordered_graph_language() : graph_language(), n);
  int e = s.lang.relation_index("E");
  for (auto [u, v] : edges) {
    s.add_tuple(e, {u, v});
    s.add_tuple(e, {v, u});
  }
  if (ordered) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s.add_tuple(0, {i, j});
  }
  return s;
}

Structure make_chain(int n) {
  Structure s(order_language(), n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s.add_tuple(0, {i, j});
  return s;
}

Structure complete_graph(int n, bool ordered) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e, ordered);
}

Structure cycle_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return make_graph(n, e);
}

Structure disjoint_union(const Structure& a, const Structure& b) {
  require_same_language(a, b);
  Structure c(a.lang, a.n + b.n);
  c.rel = a.rel;
  c.fun = a.fun;
  for (std::size_t r = 0; r < b.rel.size(); ++r)
    for (auto t : b.rel[r]) {
      for (int& x : t) x += a.n;
      c.rel[r].insert(std::move(t));
    }
  for (std::size_t f = 0; f < b.fun.size(); ++f)
    for (const auto& [args, vals] : b.fun[f]) {
      Tuple t = args;
      for (int& x : t) x += a.n;
      std::set<int> v;
      for (int x : vals) v.insert(x + a.n);
      c.fun[f][t] = v;
    }
  return c;
}

// --- Validation and closure -------------------------------------------------

ValidationReport validate_structure(const Structure& s) {
  ValidationReport rep;
  auto bad = [&](std::string m) {
    rep.valid = false;
    rep.problems.push_back(std::move(m));
  };
  if (s.n < 0) bad("negative size");
  if (s.rel.size() != s.lang.relations.size() ||
      s.fun.size() != s.lang.functions.size()) {
    bad("contents do not match the language");
    return rep;
  }
  auto show = [](const Tuple& t) {
    std::string o = "(";
    for (std::size_t i = 0; i < t.size(); ++i)
      o += (i ? "," : "") + std::to_string(t[i]);
    return o + ")";
  };
  for (std::size_t r = 0; r < s.rel.size(); ++r) {
    const auto& sym = s.lang.relations[r];
    for (const auto& t : s.rel[r]) {
      if (static_cast<int>(t.size()) != sym.arity)
        bad("relation " + sym.name + ": tuple " + show(t) + " has arity " +
            std::to_string(t.size()) + ", expected " +
            std::to_string(sym.arity));
      for (int x : t)
        if (x < 0 || x >= s.n)
          bad("relation " + sym.name + ": tuple " + show(t) + " vertex " +
              std::to_string(x) + " out of range");
    }
  }
  for (std::size_t f = 0; f < s.fun.size(); ++f) {
    const auto& sym = s.lang.functions[f];
    for (const auto& [args, vals] : s.fun[f]) {
      if (static_cast<int>(args.size()) != sym.arity)
        bad("function " + sym.name + ": argument " + show(args) +
            " has arity " + std::to_string(args.size()) + ", expected " +
            std::to_string(sym.arity));
      for (int x : args)
        if (x < 0 || x >= s.n)
          bad("function " + sym.name + ": argument " + show(args) +
              " vertex " + std::to_string(x) + " out of range");
      for (int x : vals)
        if (x < 0 || x >= s.n)
          bad("function " + sym.name + ": value vertex " + std::to_string(x) +
              " out of range");
    }
  }
  if (rep.valid) rep.ordered = s.ordered();
  return rep;
}

VertexSet generated_closure(const Structure& s, const VertexSet& seed) {
  std::vector<char> in(s.n, 0);
  for (int v : seed) in[v] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& f : s.fun)
      for (const auto& [args, vals] : f) {
        bool inside = std::all_of(args.begin(), args.end(),
                                  [&](int x) { return in[x]; });
        if (!inside) continue;
        for (int v : vals)
          if (!in[v]) in[v] = 1, changed = true;
      }
  }
  VertexSet out;
  for (int v = 0; v < s.n; ++v)
    if (in[v]) out.push_back(v);
  return out;
}

bool is_closed(const Structure& s, const VertexSet& vs) {
  return generated_closure(s, vs).size() == vs.size();
}

Substructure induced_substructure(const Structure& s, const VertexSet& vset) {
  std::vector<int> idx(s.n, -1);
  for (std::size_t i = 0; i < vset.size(); ++i) {
    int v = vset[i];
    if (v < 0 || v >= s.n)
      throw InvalidInput("vertex " + std::to_string(v) + " out of range");
    if (i > 0 && vset[i - 1] >= v)
      throw InvalidInput("vertex set must be sorted and duplicate free");
    idx[v] = static_cast<int>(i);
  }
  Substructure out{Structure(s.lang, static_cast<int>(vset.size())), vset};
  out.s.name = s.name;
  auto inside = [&](const Tuple& t) {
    return std::all_of(t.begin(), t.end(), [&](int x) { return idx[x] >= 0; });
  };
  for (std::size_t r = 0; r < s.rel.size(); ++r)
    for (const auto& t : s.rel[r])
      if (inside(t)) out.s.rel[r].insert(map_tuple(idx, t));
  for (std::size_t f = 0; f < s.fun.size(); ++f)
    for (const auto& [args, vals] : s.fun[f]) {
      if (!inside(args)) continue;
      std::set<int> nv;
      for (int v : vals) {
        if (idx[v] < 0)
          throw NotClosed("function " + s.lang.functions[f].name +
                              " sends the set outside itself (vertex " +
                              std::to_string(v) + ")",
                          args, v);
        nv.insert(idx[v]);
      }
      out.s.fun[f][map_tuple(idx, args)] = std::move(nv);
    }
  return out;
}

// --- Map classification -----------------------------------------------------

std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::Homomorphism: return "homomorphism";
    case MapKind::Monomorphism: return "monomorphism";
    case MapKind::HomomorphismEmbedding: return "homomorphism-embedding";
    case MapKind::Embedding: return "embedding";
    case MapKind::UClosedEmbedding: return "U-closed-embedding";
    case MapKind::Isomorphism: return "isomorphism";
  }
  return "?";
}

std::optional<MapKind> map_kind_from_string(std::string_view s) {
  for (auto k : {MapKind::Homomorphism, MapKind::Monomorphism,
                 MapKind::HomomorphismEmbedding, MapKind::Embedding,
                 MapKind::UClosedEmbedding, MapKind::Isomorphism})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

bool kind_implies(MapKind have, MapKind wanted) {
  using K = MapKind;
  if (have == wanted || wanted == K::Homomorphism) return true;
  switch (have) {
    case K::Isomorphism: return true;
    case K::UClosedEmbedding:
    case K::Embedding:
      return wanted == K::Monomorphism || wanted == K::HomomorphismEmbedding ||
             wanted == K::Embedding;
    default: return false;
  }
}

namespace {

bool valid_map(const VertexMap& f, const Structure& a, const Structure& b) {
  if (static_cast<int>(f.size()) != a.n) return false;
  return std::all_of(f.begin(), f.end(),
                     [&](int x) { return x >= 0 && x < b.n; });
}

bool injective(const VertexMap& f, int nb) {
  std::vector<char> seen(nb, 0);
  for (int x : f) {
    if (seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

bool functions_preserved(const VertexMap& f, const Structure& a,
                         const Structure& b,
                         const std::vector<std::vector<int>>& pre) {
  for (std::size_t fi = 0; fi < a.fun.size(); ++fi) {
    for (const auto& [args, vals] : a.fun[fi]) {
      std::set<int> img;
      for (int v : vals) img.insert(f[v]);
      if (img != b.value(static_cast<int>(fi), map_tuple(f, args))) return false;
    }
    // Every argument tuple of a mapping onto a non-empty entry of b must
    // itself carry the matching value.
    for (const auto& [bargs, bvals] : b.fun[fi]) {
      bool covered = std::all_of(bargs.begin(), bargs.end(),
                                 [&](int y) { return !pre[y].empty(); });
      if (!covered) continue;
      Tuple t(bargs.size());
      std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        if (i == t.size()) {
          auto it = a.fun[fi].find(t);
          return it != a.fun[fi].end();  // value compared above
        }
        for (int x : pre[bargs[i]]) {
          t[i] = x;
          if (!rec(i + 1)) return false;
        }
        return true;
      };
      if (!rec(0)) return false;
    }
  }
  return true;
}

bool relations_preserved(const VertexMap& f, const Structure& a,
                         const Structure& b) {
  for (std::size_t r = 0; r < a.rel.size(); ++r)
    for (const auto& t : a.rel[r])
      if (!b.rel[r].count(map_tuple(f, t))) return false;
  return true;
}

// Relations reflected on the image for an injective map.
bool relations_reflected(const VertexMap& f, const Structure& a,
                         const Structure& b) {
  std::vector<int> inv(b.n, -1);
  for (int v = 0; v < a.n; ++v) inv[f[v]] = v;
  for (std::size_t r = 0; r < b.rel.size(); ++r)
    for (const auto& t : b.rel[r]) {
      bool inside = std::all_of(t.begin(), t.end(),
                                [&](int y) { return inv[y] >= 0; });
      if (inside && !a.rel[r].count(map_tuple(inv, t))) return false;
    }
  return true;
}

bool restriction_is_embedding(const VertexMap& f, const Structure& a,
                              const Structure& b, const VertexSet& c) {
  std::vector<int> seen(b.n, -1);
  std::vector<char> inC(a.n, 0);
  for (int v : c) {
    if (seen[f[v]] >= 0) return false;
    seen[f[v]] = v;
    inC[v] = 1;
  }
  for (std::size_t r = 0; r < b.rel.size(); ++r)
    for (const auto& t : b.rel[r]) {
      bool inside = std::all_of(t.begin(), t.end(),
                                [&](int y) { return seen[y] >= 0; });
      if (inside && !a.rel[r].count(map_tuple(seen, t))) return false;
    }
  return true;
}

}  // namespace

bool is_homomorphism(const VertexMap& f, const Structure& a,
                     const Structure& b) {
  if (!a.lang.same_symbols(b.lang) || !valid_map(f, a, b)) return false;
  if (!relations_preserved(f, a, b)) return false;
  if (a.lang.relational()) return true;
  return functions_preserved(f, a, b, preimages(f, b.n));
}

bool is_embedding(const VertexMap& f, const Structure& a, const Structure& b) {
  return is_homomorphism(f, a, b) && injective(f, b.n) &&
         relations_reflected(f, a, b);
}

bool is_homomorphism_embedding(const VertexMap& f, const Structure& a,
                               const Structure& b) {
  if (!is_homomorphism(f, a, b)) return false;
  if (!a.lang.relational()) {
    for (const auto& c : closed_subsets(a)) {
      if (restriction_is_embedding(f, a, b, c)) continue;
      auto sub = induced_substructure(a, c);
      if (is_irreducible(sub.s).irreducible) return false;
    }
    return true;
  }
  // Relational: irreducible substructures are the Gaifman cliques.
  auto adj = gaifman_adjacency(a);
  for (int u = 0; u < a.n; ++u)
    for (int v : adj[u])
      if (f[u] == f[v]) return false;
  std::vector<std::set<int>> adjs(a.n);
  for (int u = 0; u < a.n; ++u) adjs[u].insert(adj[u].begin(), adj[u].end());
  auto pre = preimages(f, b.n);
  for (std::size_t r = 0; r < b.rel.size(); ++r)
    for (const auto& t : b.rel[r]) {
      std::size_t k = t.size();
      Tuple x(k);
      std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == k) return a.rel[r].count(x) > 0;
        for (std::size_t j = 0; j < i; ++j)
          if (t[j] == t[i]) {
            x[i] = x[j];
            return rec(i + 1);
          }
        const std::vector<int>* cand = &pre[t[i]];
        std::vector<int> filtered;
        if (i > 0) {
          for (int c : adj[x[0]])
            if (f[c] == t[i]) filtered.push_back(c);
          cand = &filtered;
        }
        for (int c : *cand) {
          bool ok = true;
          for (std::size_t j = 0; j < i && ok; ++j)
            if (x[j] != c && !adjs[x[j]].count(c)) ok = false;
          if (!ok) continue;
          x[i] = c;
          if (!rec(i + 1)) return false;
        }
        return true;
      };
      if (!rec(0)) return false;
    }
  return true;
}

bool is_u_closed_set(const Structure& b, const VertexSet& vs,
                     const SymbolSet& u) {
  std::vector<char> in(b.n, 0);
  for (int v : vs) in[v] = 1;
  for (const auto& sym : u) {
    int r = b.lang.relation_index(sym);
    if (r >= 0) {
      for (const auto& t : b.rel[r]) {
        bool args_in = std::all_of(t.begin(), t.end() - 1,
                                   [&](int x) { return in[x]; });
        if (args_in && !in[t.back()]) return false;
      }
      continue;
    }
    int fi = b.lang.function_index(sym);
    if (fi < 0) throw InvalidInput("unknown U symbol '" + sym + "'");
    for (const auto& [args, vals] : b.fun[fi]) {
      bool args_in =
          std::all_of(args.begin(), args.end(), [&](int x) { return in[x]; });
      if (!args_in) continue;
      for (int v : vals)
        if (!in[v]) return false;
    }
  }
  return true;
}

bool is_u_closed_image(const VertexMap& f, const Structure& b,
                       const SymbolSet& u) {
  return is_u_closed_set(b, image_of(f), u);
}

std::optional<MapKind> classify_map(const VertexMap& f, const Structure& a,
                                    const Structure& b, const SymbolSet* u) {
  if (!is_homomorphism(f, a, b)) return std::nullopt;
  bool inj = injective(f, b.n);
  if (inj && relations_reflected(f, a, b)) {
    if (a.n == b.n) return MapKind::Isomorphism;
    if (u && is_u_closed_image(f, b, *u)) return MapKind::UClosedEmbedding;
    return MapKind::Embedding;
  }
  if (is_homomorphism_embedding(f, a, b))
    return MapKind::HomomorphismEmbedding;
  if (inj) return MapKind::Monomorphism;
  return MapKind::Homomorphism;
}

// --- Embedding search -------------------------------------------------------

namespace {

struct EmbeddingSearch {
  const Structure& a;
  const Structure& b;
  const EmbeddingConstraints& c;
  Budget budget;
  // tuples of a grouped by their largest entry
  std::vector<std::vector<std::pair<int, const Tuple*>>> a_by_max;
  // tuples of b incident to each vertex
  std::vector<std::vector<std::pair<int, const Tuple*>>> b_inc;
  VertexMap f;
  std::vector<int> inv;
  bool check_functions;

  EmbeddingSearch(const Structure& a_, const Structure& b_,
                  const EmbeddingConstraints& c_, std::int64_t max_nodes)
      : a(a_), b(b_), c(c_), budget(max_nodes, "embedding search") {
    a_by_max.resize(a.n);
    for (std::size_t r = 0; r < a.rel.size(); ++r)
      for (const auto& t : a.rel[r]) {
        if (t.empty()) continue;
        int m = *std::max_element(t.begin(), t.end());
        a_by_max[m].emplace_back(static_cast<int>(r), &t);
      }
    if (!c.monomorphisms_only) {
      b_inc.resize(b.n);
      for (std::size_t r = 0; r < b.rel.size(); ++r)
        for (const auto& t : b.rel[r]) {
          std::vector<int> vs(t.begin(), t.end());
          std::sort(vs.begin(), vs.end());
          vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
          for (int v : vs) b_inc[v].emplace_back(static_cast<int>(r), &t);
        }
    }
    f.assign(a.n, -1);
    inv.assign(b.n, -1);
    check_functions = !a.lang.relational();
  }

  bool consistent(int i) {
    for (auto [r, t] : a_by_max[i]) {
      Tuple img(t->size());
      for (std::size_t j = 0; j < t->size(); ++j) img[j] = f[(*t)[j]];
      if (!b.rel[r].count(img)) return false;
    }
    if (c.monomorphisms_only) return true;
    for (auto [r, t] : b_inc[f[i]]) {
      Tuple pre(t->size());
      bool inside = true;
      for (std::size_t j = 0; j < t->size() && inside; ++j) {
        pre[j] = inv[(*t)[j]];
        inside = pre[j] >= 0;
      }
      if (inside && !a.rel[r].count(pre)) return false;
    }
    return true;
  }

  bool leaf_ok() {
    if (check_functions &&
        !functions_preserved(f, a, b, preimages(f, b.n)))
      return false;
    if (c.u_closed && !is_u_closed_image(f, b, *c.u_closed)) return false;
    return true;
  }

  bool run(int i, const std::function<bool(const VertexMap&)>& visit) {
    budget.tick();
    if (i == a.n) return leaf_ok() ? visit(f) : true;
    auto try_vertex = [&](int w) -> bool {
      if (inv[w] >= 0) return true;
      f[i] = w;
      inv[w] = i;
      bool cont = true;
      if (consistent(i)) cont = run(i + 1, visit);
      inv[w] = -1;
      f[i] = -1;
      return cont;
    };
    if (c.candidates) {
      for (int w : (*c.candidates)[i])
        if (!try_vertex(w)) return false;
    } else {
      for (int w = 0; w < b.n; ++w)
        if (!try_vertex(w)) return false;
    }
    return true;
  }
};

}  // namespace

void for_each_embedding(const Structure& a, const Structure& b,
                        const EmbeddingConstraints& c,
                        const std::function<bool(const VertexMap&)>& visit,
                        std::int64_t max_nodes) {
  require_same_language(a, b);
  if (a.n > b.n) return;
  if (c.candidates && static_cast<int>(c.candidates->size()) != a.n)
    throw InvalidInput("candidate list does not match source size");
  EmbeddingSearch s(a, b, c, max_nodes);
  s.run(0, visit);
}

std::vector<EmbeddingMap> enumerate_embeddings(const Structure& a,
                                               const Structure& b,
                                               const EmbeddingConstraints& c,
                                               std::int64_t max_nodes) {
  std::vector<EmbeddingMap> out;
  MapKind k = c.monomorphisms_only ? MapKind::Monomorphism
              : a.n == b.n         ? MapKind::Isomorphism
              : c.u_closed         ? MapKind::UClosedEmbedding
                                   : MapKind::Embedding;
  for_each_embedding(
      a, b, c,
      [&](const VertexMap& f) {
        out.push_back({f, k});
        return true;
      },
      max_nodes);
  return out;
}

std::optional<VertexMap> first_embedding(const Structure& a,
                                         const Structure& b,
                                         const EmbeddingConstraints& c) {
  std::optional<VertexMap> out;
  for_each_embedding(a, b, c, [&](const VertexMap& f) {
    out = f;
    return false;
  });
  return out;
}

std::vector<VertexMap> enumerate_homomorphisms(const Structure& a,
                                               const Structure& b,
                                               std::int64_t max_nodes) {
  require_same_language(a, b);
  std::vector<std::vector<std::pair<int, const Tuple*>>> by_max(a.n);
  for (std::size_t r = 0; r < a.rel.size(); ++r)
    for (const auto& t : a.rel[r])
      if (!t.empty())
        by_max[*std::max_element(t.begin(), t.end())].emplace_back(
            static_cast<int>(r), &t);
  std::vector<VertexMap> out;
  VertexMap f(a.n, -1);
  Budget budget(max_nodes, "homomorphism search");
  std::function<void(int)> rec = [&](int i) {
    budget.tick();
    if (i == a.n) {
      if (a.lang.relational() || is_homomorphism(f, a, b)) out.push_back(f);
      return;
    }
    for (int w = 0; w < b.n; ++w) {
      f[i] = w;
      bool ok = true;
      for (auto [r, t] : by_max[i]) {
        if (!b.rel[r].count(map_tuple(f, *t))) {
          ok = false;
          break;
        }
      }
      if (ok) rec(i + 1);
    }
    f[i] = -1;
  };
  rec(0);
  return out;
}

bool isomorphic(const Structure& a, const Structure& b) {
  if (a.n != b.n || !a.lang.same_symbols(b.lang)) return false;
  for (std::size_t r = 0; r < a.rel.size(); ++r)
    if (a.rel[r].size() != b.rel[r].size()) return false;
  for (std::size_t f = 0; f < a.fun.size(); ++f)
    if (a.fun[f].size() != b.fun[f].size()) return false;
  return first_embedding(a, b).has_value();
}

// --- Gaifman graph and irreducibility ---------------------------------------

std::vector<std::vector<bool>> gaifman_matrix(const Structure& s) {
  std::vector<std::vector<bool>> m(s.n, std::vector<bool>(s.n, false));
  auto clique = [&](const std::vector<int>& vs) {
    for (int u : vs)
      for (int v : vs)
        if (u != v) m[u][v] = true;
  };
  for (const auto& r : s.rel)
    for (const auto& t : r) clique(t);
  for (const auto& f : s.fun)
    for (const auto& [args, vals] : f) {
      std::vector<int> vs = args;
      vs.insert(vs.end(), vals.begin(), vals.end());
      clique(vs);
    }
  return m;
}

Structure gaifman_graph(const Structure& s) {
  Structure g(graph_language(), s.n);
  auto m = gaifman_matrix(s);
  for (int u = 0; u < s.n; ++u)
    for (int v = 0; v < s.n; ++v)
      if (m[u][v]) g.add_tuple(0, {u, v});
  return g;
}

namespace {

std::vector<VertexSet> component_split(const std::vector<std::vector<bool>>& m,
                                       const std::vector<char>& removed) {
  int n = static_cast<int>(m.size());
  std::vector<int> comp(n, -1);
  std::vector<VertexSet> comps;
  for (int s = 0; s < n; ++s) {
    if (removed[s] || comp[s] >= 0) continue;
    int id = static_cast<int>(comps.size());
    comps.emplace_back();
    std::vector<int> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comps[id].push_back(u);
      for (int v = 0; v < n; ++v)
        if (m[u][v] && !removed[v] && comp[v] < 0) {
          comp[v] = id;
          stack.push_back(v);
        }
    }
  }
  for (auto& c : comps) std::sort(c.begin(), c.end());
  return comps;
}

bool entry_inside(const std::vector<char>& in, const Tuple& t) {
  return std::all_of(t.begin(), t.end(), [&](int x) { return in[x]; });
}

}  // namespace

IrreducibilityResult is_irreducible(const Structure& s) {
  IrreducibilityResult res;
  auto m = gaifman_matrix(s);
  bool complete = true;
  for (int u = 0; u < s.n && complete; ++u)
    for (int v = u + 1; v < s.n && complete; ++v)
      if (!m[u][v]) complete = false;
  if (complete) return res;

  if (s.lang.relational()) {
    // Every subset is closed; a split is a vertex separator plus one side.
    Budget budget(2000000, "irreducibility separator search");
    for (int k = 0; k <= s.n - 2 && !res.witness; ++k) {
      try {
        for_each_combination(s.n, k, [&](const std::vector<int>& sep) {
          budget.tick();
          std::vector<char> removed(s.n, 0);
          for (int v : sep) removed[v] = 1;
          auto comps = component_split(m, removed);
          if (comps.size() < 2) return true;
          VertexSet x = sep, y;
          x.insert(x.end(), comps[0].begin(), comps[0].end());
          std::sort(x.begin(), x.end());
          std::vector<char> inx(s.n, 0);
          for (int v : comps[0]) inx[v] = 1;
          for (int v = 0; v < s.n; ++v)
            if (!inx[v]) y.push_back(v);
          res.witness = std::make_pair(x, y);
          return false;
        });
      } catch (const CapExceeded&) {
        break;
      }
    }
    if (!res.witness) {
      for (int u = 0; u < s.n && !res.witness; ++u)
        for (int v = u + 1; v < s.n && !res.witness; ++v)
          if (!m[u][v]) {
            VertexSet x, y;
            for (int w = 0; w < s.n; ++w) {
              if (w != v) x.push_back(w);
              if (w != u) y.push_back(w);
            }
            res.witness = std::make_pair(x, y);
          }
    }
    res.irreducible = false;
    return res;
  }

  if (s.n > 20)
    throw CapExceeded("irreducibility test with functions limited to 20 "
                      "vertices");
  // General case: for each closed X take the least closed Y covering the
  // remaining vertices and every entry not inside X.
  std::vector<Tuple> entries;
  for (const auto& r : s.rel)
    for (const auto& t : r) entries.push_back(t);
  for (const auto& f : s.fun)
    for (const auto& [args, vals] : f) {
      Tuple t = args;
      t.insert(t.end(), vals.begin(), vals.end());
      entries.push_back(t);
    }
  std::optional<std::pair<VertexSet, VertexSet>> best;
  std::size_t best_overlap = 0;
  for (const auto& x : closed_subsets(s)) {
    if (x.empty() || static_cast<int>(x.size()) == s.n) continue;
    std::vector<char> inx(s.n, 0);
    for (int v : x) inx[v] = 1;
    std::vector<char> iny(s.n, 0);
    for (int v = 0; v < s.n; ++v)
      if (!inx[v]) iny[v] = 1;
    for (const auto& e : entries)
      if (!entry_inside(inx, e))
        for (int v : e) iny[v] = 1;
    VertexSet y0;
    for (int v = 0; v < s.n; ++v)
      if (iny[v]) y0.push_back(v);
    VertexSet y = generated_closure(s, y0);
    if (static_cast<int>(y.size()) == s.n) continue;
    std::size_t overlap = x.size() + y.size() - s.n;
    auto cand = std::make_pair(x, y);
    if (!best || overlap < best_overlap ||
        (overlap == best_overlap && cand < *best)) {
      best = cand;
      best_overlap = overlap;
    }
  }
  if (best) {
    res.irreducible = false;
    res.witness = best;
  }
  return res;
}

std::vector<VertexSet> closed_subsets(const Structure& s, int max_size,
                                      std::int64_t max_nodes) {
  if (max_size < 0 || max_size > s.n) max_size = s.n;
  std::vector<VertexSet> out;
  Budget budget(max_nodes, "closed subset enumeration");
  bool rel = s.lang.relational();
  for (int k = 0; k <= max_size; ++k)
    for_each_combination(s.n, k, [&](const std::vector<int>& c) {
      budget.tick();
      if (rel || is_closed(s, c)) out.push_back(c);
      return true;
    });
  return out;
}

std::vector<std::vector<int>> gaifman_adjacency(const Structure& s) {
  std::vector<std::set<int>> nb(s.n);
  auto clique = [&](const std::vector<int>& vs) {
    for (int u : vs)
      for (int v : vs)
        if (u != v) nb[u].insert(v);
  };
  for (const auto& r : s.rel)
    for (const auto& t : r) clique(t);
  for (const auto& f : s.fun)
    for (const auto& [args, vals] : f) {
      std::vector<int> vs = args;
      vs.insert(vs.end(), vals.begin(), vals.end());
      clique(vs);
    }
  std::vector<std::vector<int>> adj(s.n);
  for (int v = 0; v < s.n; ++v) adj[v].assign(nb[v].begin(), nb[v].end());
  return adj;
}

std::vector<VertexSet> gaifman_cliques(const Structure& s, int max_size) {
  auto adj = gaifman_adjacency(s);
  std::vector<VertexSet> out;
  std::vector<VertexSet> layer;
  for (int v = 0; v < s.n; ++v) layer.push_back({v});
  while (!layer.empty() && (max_size < 0 ||
                            static_cast<int>(layer.front().size()) <= max_size)) {
    out.insert(out.end(), layer.begin(), layer.end());
    std::vector<VertexSet> next;
    for (const auto& c : layer) {
      // extend by a common neighbour larger than the last vertex
      for (int w : adj[c.back()]) {
        if (w <= c.back()) continue;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < c.size() && ok; ++i)
          ok = std::binary_search(adj[c[i]].begin(), adj[c[i]].end(), w);
        if (!ok) continue;
        auto d = c;
        d.push_back(w);
        next.push_back(std::move(d));
      }
    }
    layer = std::move(next);
  }
  return out;
}

std::vector<VertexSet> maximal_irreducible_subsets(const Structure& s) {
  if (s.lang.relational()) {
    auto cl = gaifman_cliques(s, -1);
    auto adj = gaifman_adjacency(s);
    std::vector<VertexSet> out;
    for (const auto& c : cl) {
      bool maximal = true;
      for (int w : adj[c.front()]) {
        if (std::binary_search(c.begin(), c.end(), w)) continue;
        bool all = true;
        for (int x : c)
          all = all && std::binary_search(adj[x].begin(), adj[x].end(), w);
        if (all) {
          maximal = false;
          break;
        }
      }
      if (maximal) out.push_back(c);
    }
    return out;
  }
  std::vector<VertexSet> irr;
  for (const auto& c : closed_subsets(s)) {
    if (c.empty()) continue;
    if (is_irreducible(induced_substructure(s, c).s).irreducible)
      irr.push_back(c);
  }
  std::vector<VertexSet> out;
  for (const auto& c : irr) {
    bool maximal = true;
    for (const auto& d : irr)
      if (d.size() > c.size() &&
          std::includes(d.begin(), d.end(), c.begin(), c.end())) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(c);
  }
  return out;
}

// --- Automorphisms ----------------------------------------------------------

std::vector<EmbeddingMap> automorphisms(const Structure& s) {
  return enumerate_embeddings(s, s);
}

bool is_rigid(const Structure& s) {
  int count = 0;
  for_each_embedding(s, s, {}, [&](const VertexMap&) { return ++count < 2; });
  return count == 1;
}

std::vector<PartialAutomorphism> enumerate_partial_automorphisms(
    const Structure& s, std::optional<int> max_domain) {
  std::vector<PartialAutomorphism> out;
  for (const auto& d : closed_subsets(s, max_domain.value_or(-1))) {
    auto sub = induced_substructure(s, d);
    for (const auto& e : enumerate_embeddings(sub.s, s))
      out.push_back({d, e.map});
  }
  return out;
}

// --- Small helpers ----------------------------------------------------------

VertexSet image_of(const VertexMap& f, const VertexSet& vs) {
  VertexSet out;
  for (int v : vs) out.push_back(f[v]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexSet image_of(const VertexMap& f) {
  VertexSet out(f.begin(), f.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexMap compose(const VertexMap& g, const VertexMap& f) {
  VertexMap out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = g[f[i]];
  return out;
}

VertexSet all_vertices(int n) {
  VertexSet v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace ramsey
