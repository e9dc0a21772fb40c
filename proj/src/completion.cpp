#include "ramsey/completion.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>

#include "ramsey/amalgamation.hpp"

namespace ramsey {

namespace {

std::pair<int, int> key(int u, int v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

void check_pair(int n, int u, int v) {
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw InvalidInput("pair (" + std::to_string(u) + "," + std::to_string(v) +
                       ") out of range");
  if (u == v)
    throw InvalidInput("self pair at vertex " + std::to_string(u));
}

int require_relation(const Structure& s, const std::string& name) {
  int r = s.lang.relation_index(name);
  if (r < 0 || s.lang.relations[r].arity != 2)
    throw InvalidInput("structure has no binary relation '" + name + "'");
  return r;
}

std::vector<std::set<int>> successors(const Structure& s, int r) {
  std::vector<std::set<int>> succ(s.n);
  if (r >= 0)
    for (const auto& t : s.rel[r]) succ[t[0]].insert(t[1]);
  return succ;
}

// Reflexive pair, then symmetric pair, then the least cycle.
std::pair<OrderViolation, std::vector<int>> order_defect(
    const std::vector<std::set<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  for (int v = 0; v < n; ++v)
    if (succ[v].count(v)) return {OrderViolation::Reflexive, {v}};
  for (int u = 0; u < n; ++u)
    for (int v : succ[u])
      if (u < v && succ[v].count(u)) return {OrderViolation::Symmetric, {u, v}};
  auto c = least_cycle(succ);
  if (!c.empty()) return {OrderViolation::Cycle, c};
  return {OrderViolation::None, {}};
}

// Kahn's algorithm taking the least available vertex. Assumes acyclic.
std::vector<int> least_topological_order(const std::vector<std::set<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> indeg(n, 0);
  for (int u = 0; u < n; ++u)
    for (int v : succ[u]) ++indeg[v];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<int> order;
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (int v : succ[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  return order;
}

std::set<Tuple> linear_pairs(const std::vector<int>& order) {
  std::set<Tuple> out;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      out.insert({order[i], order[j]});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void EdgeLabelledGraph::set(int u, int v, const Rational& d) {
  check_pair(n, u, v);
  if (d <= 0) throw InvalidInput("edge labels must be positive");
  labels[key(u, v)] = d;
}

std::optional<Rational> EdgeLabelledGraph::get(int u, int v) const {
  if (u == v) return std::nullopt;
  auto it = labels.find(key(u, v));
  if (it == labels.end()) return std::nullopt;
  return it->second;
}

std::set<Rational> EdgeLabelledGraph::alphabet() const {
  std::set<Rational> out;
  for (const auto& [p, d] : labels) out.insert(d);
  return out;
}

bool EdgeLabelledGraph::complete() const {
  return static_cast<long long>(labels.size()) ==
         static_cast<long long>(n) * (n - 1) / 2;
}

std::string label_relation_name(const Rational& d) {
  return "d_" + numerator(d).str() + "_" + denominator(d).str();
}

std::optional<Rational> parse_label_relation_name(const std::string& name) {
  if (name.rfind("d_", 0) != 0) return std::nullopt;
  auto mid = name.find('_', 2);
  if (mid == std::string::npos) return std::nullopt;
  auto p = name.substr(2, mid - 2), q = name.substr(mid + 1);
  auto digits = [](const std::string& x) {
    return !x.empty() &&
           std::all_of(x.begin(), x.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!digits(p) || !digits(q)) return std::nullopt;
  boost::multiprecision::cpp_int den(q);
  if (den == 0) return std::nullopt;
  return Rational(boost::multiprecision::cpp_int(p), den);
}

Structure to_structure(const EdgeLabelledGraph& g) {
  Language l("labelled");
  auto alpha = g.alphabet();
  std::map<Rational, int> index;
  for (const auto& d : alpha) index[d] = l.add_relation(label_relation_name(d), 2);
  Structure s(l, g.n);
  for (const auto& [p, d] : g.labels) {
    s.add_tuple(index[d], {p.first, p.second});
    s.add_tuple(index[d], {p.second, p.first});
  }
  return s;
}

EdgeLabelledGraph labelled_graph_from_structure(const Structure& s) {
  EdgeLabelledGraph g(s.n);
  for (std::size_t r = 0; r < s.rel.size(); ++r) {
    auto d = parse_label_relation_name(s.lang.relations[r].name);
    if (!d) continue;
    if (s.lang.relations[r].arity != 2 || *d <= 0)
      throw InvalidInput("bad label relation " + s.lang.relations[r].name);
    for (const auto& t : s.rel[r]) {
      if (!s.rel[r].count({t[1], t[0]}))
        throw InvalidInput("label relation " + s.lang.relations[r].name +
                           " is not symmetric");
      auto old = g.get(t[0], t[1]);
      if (old && *old != *d)
        throw InvalidInput("pair (" + std::to_string(t[0]) + "," +
                           std::to_string(t[1]) + ") carries two labels");
      g.set(t[0], t[1], *d);
    }
  }
  return g;
}

bool satisfies_triangle_inequality(const EdgeLabelledGraph& g) {
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y)
      for (int z = 0; z < g.n; ++z) {
        if (x == y || y == z || x == z) continue;
        auto a = g.get(x, z), b = g.get(x, y), c = g.get(y, z);
        if (a && b && c && *a > *b + *c) return false;
      }
  return true;
}

MetricCompletion complete_metric(const EdgeLabelledGraph& g) {
  MetricCompletion out;
  const int n = g.n;
  if (n <= 1) {
    out.completed = g;
    return out;
  }
  if (g.labels.empty())
    throw InvalidInput("graph has no labels, distances are undefined");
  for (const auto& [p, d] : g.labels) out.cap = std::max(out.cap, d);

  std::vector<std::vector<std::pair<int, Rational>>> adj(n);
  for (const auto& [p, d] : g.labels) {
    adj[p.first].push_back({p.second, d});
    adj[p.second].push_back({p.first, d});
  }
  for (auto& a : adj)
    std::sort(a.begin(), a.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

  // Shortest paths; unreachable pairs stay unset.
  std::vector<std::vector<std::optional<Rational>>> dist(
      n, std::vector<std::optional<Rational>>(n));
  for (int v = 0; v < n; ++v) dist[v][v] = Rational(0);
  for (const auto& [p, d] : g.labels) {
    dist[p.first][p.second] = d;
    dist[p.second][p.first] = d;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (!dist[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (!dist[k][j]) continue;
        Rational via = *dist[i][k] + *dist[k][j];
        if (!dist[i][j] || via < *dist[i][j]) dist[i][j] = via;
      }
    }

  std::vector<std::pair<int, int>> short_cut;
  for (const auto& [p, d] : g.labels)
    if (*dist[p.first][p.second] < d) short_cut.push_back(p);

  if (short_cut.empty()) {
    EdgeLabelledGraph c(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        c.labels[{u, v}] = dist[u][v] ? std::min(*dist[u][v], out.cap) : out.cap;
    out.completed = std::move(c);
    return out;
  }

  // Every non-metric cycle has a short-cut edge as its long edge. For each
  // such edge x < y find the fewest hops of a y -> x path shorter than the
  // label, avoiding the edge itself.
  struct Best {
    int hops;
    std::pair<int, int> edge;
    std::vector<std::vector<std::optional<Rational>>> table;
  };
  std::optional<Best> best;
  for (auto [x, y] : short_cut) {
    const Rational s = *g.get(x, y);
    std::vector<std::vector<std::optional<Rational>>> t(1, std::vector<std::optional<Rational>>(n));
    t[0][x] = Rational(0);
    int found = -1;
    for (int j = 1; j < n && (!best || j <= best->hops); ++j) {
      std::vector<std::optional<Rational>> row = t[j - 1];
      for (int v = 0; v < n; ++v)
        for (const auto& [w, d] : adj[v]) {
          if (key(v, w) == std::pair{x, y} || !t[j - 1][w]) continue;
          Rational c = d + *t[j - 1][w];
          if (!row[v] || c < *row[v]) row[v] = c;
        }
      t.push_back(std::move(row));
      if (t[j][y] && *t[j][y] < s) {
        found = j;
        break;
      }
    }
    if (found >= 0 && (!best || found < best->hops))
      best = Best{found, {x, y}, std::move(t)};
  }

  auto [x, y] = best->edge;
  const Rational s = *g.get(x, y);
  NonMetricCycle w;
  w.cycle = {x, y};
  w.labels = {s};
  int cur = y, left = best->hops;
  Rational acc = 0;
  while (cur != x) {
    for (const auto& [v, d] : adj[cur]) {
      if (key(cur, v) == std::pair{x, y}) continue;
      const auto& rest = best->table[left - 1][v];
      if (rest && acc + d + *rest < s) {
        acc += d;
        w.labels.push_back(d);
        if (v != x) w.cycle.push_back(v);
        cur = v;
        --left;
        break;
      }
    }
  }
  out.witness = std::move(w);
  return out;
}

// ---------------------------------------------------------------------------

void EquivalenceGraph::set(int u, int v, bool e) {
  check_pair(n, u, v);
  same[key(u, v)] = e;
}

std::optional<bool> EquivalenceGraph::get(int u, int v) const {
  if (u == v) return true;
  auto it = same.find(key(u, v));
  if (it == same.end()) return std::nullopt;
  return it->second;
}

EquivalenceCompletion complete_equivalence(const EquivalenceGraph& g) {
  const int n = g.n;
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> eadj(n);
  for (const auto& [p, e] : g.same)
    if (e) {
      eadj[p.first].push_back(p.second);
      eadj[p.second].push_back(p.first);
    }
  for (auto& a : eadj) std::sort(a.begin(), a.end());
  for (int v = 0, c = 0; v < n; ++v) {
    if (comp[v] >= 0) continue;
    std::deque<int> q{v};
    comp[v] = c;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int w : eadj[u])
        if (comp[w] < 0) {
          comp[w] = c;
          q.push_back(w);
        }
    }
    ++c;
  }

  EquivalenceCompletion out;
  for (const auto& [p, e] : g.same) {
    if (e || comp[p.first] != comp[p.second]) continue;
    auto [u, v] = p;
    // Distances to u along E edges, then the least path from v.
    std::vector<int> dist(n, -1);
    std::deque<int> q{u};
    dist[u] = 0;
    while (!q.empty()) {
      int a = q.front();
      q.pop_front();
      for (int b : eadj[a])
        if (dist[b] < 0) {
          dist[b] = dist[a] + 1;
          q.push_back(b);
        }
    }
    std::vector<int> w{u, v};
    int cur = v;
    while (dist[cur] > 1) {
      for (int b : eadj[cur])
        if (dist[b] == dist[cur] - 1) {
          cur = b;
          break;
        }
      w.push_back(cur);
    }
    out.witness = std::move(w);
    return out;
  }
  EquivalenceGraph c(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) c.same[{u, v}] = comp[u] == comp[v];
  out.completed = std::move(c);
  return out;
}

Structure to_structure(const EquivalenceGraph& g) {
  Language l("equivalence");
  int e = l.add_relation("E", 2), nn = l.add_relation("N", 2);
  Structure s(l, g.n);
  for (const auto& [p, same] : g.same) {
    s.add_tuple(same ? e : nn, {p.first, p.second});
    s.add_tuple(same ? e : nn, {p.second, p.first});
  }
  return s;
}

EquivalenceGraph equivalence_graph_from_structure(const Structure& s) {
  EquivalenceGraph g(s.n);
  int e = require_relation(s, "E"), nn = require_relation(s, "N");
  for (int r : {e, nn})
    for (const auto& t : s.rel[r]) {
      if (!s.rel[r].count({t[1], t[0]}))
        throw InvalidInput("relation " + s.lang.relations[r].name +
                           " is not symmetric");
      auto old = g.get(t[0], t[1]);
      if (t[0] != t[1] && old && *old != (r == e))
        throw InvalidInput("pair labelled both E and N");
      g.set(t[0], t[1], r == e);
    }
  return g;
}

bool convexly_ordered(const Structure& s) {
  auto g = equivalence_graph_from_structure(s);
  auto ext = extend_linear_order(s);
  if (!ext.ok() || ext.result->rel[require_relation(s, "<")] !=
                       s.rel[require_relation(s, "<")])
    return false;  // "<" is not a linear order
  std::vector<int> pos(s.n);
  for (const auto& t : s.rel[require_relation(s, "<")]) ++pos[t[1]];
  std::vector<int> by_pos(s.n);
  for (int v = 0; v < s.n; ++v) by_pos[pos[v]] = v;
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 2; j < s.n; ++j)
      if (g.get(by_pos[i], by_pos[j]).value_or(false))
        for (int k = i + 1; k < j; ++k)
          if (!g.get(by_pos[i], by_pos[k]).value_or(false)) return false;
  return true;
}

Structure equivalence_U(const Structure& s, bool ordered) {
  auto g = equivalence_graph_from_structure(s);
  auto c = complete_equivalence(g);
  if (!c.ok() || !(*c.completed == g))
    throw InvalidInput("structure is not a complete equivalence");
  std::vector<int> cls(s.n, -1);
  int classes = 0;
  for (int v = 0; v < s.n; ++v) {
    if (cls[v] >= 0) continue;
    for (int w = v; w < s.n; ++w)
      if (*g.get(v, w)) cls[w] = classes;
    ++classes;
  }
  Language l("imaginary");
  int o = l.add_relation("O", 1), im = l.add_relation("I", 1);
  int f = l.add_function("F", 1);
  int lt = ordered ? l.add_relation("<", 2) : -1;
  Structure d(l, s.n + classes);
  for (int v = 0; v < s.n; ++v) {
    d.add_tuple(o, {v});
    d.add_value(f, {v}, s.n + cls[v]);
  }
  for (int c2 = 0; c2 < classes; ++c2) d.add_tuple(im, {s.n + c2});
  if (ordered) {
    if (!convexly_ordered(s))
      throw InvalidInput("structure is not convexly ordered");
    int r = require_relation(s, "<");
    for (const auto& t : s.rel[r]) {
      d.add_tuple(lt, t);
      if (cls[t[0]] != cls[t[1]]) d.add_tuple(lt, {s.n + cls[t[0]], s.n + cls[t[1]]});
    }
    for (int v = 0; v < s.n; ++v)
      for (int c2 = 0; c2 < classes; ++c2) d.add_tuple(lt, {v, s.n + c2});
  }
  return d;
}

Structure equivalence_T(const Structure& d, bool ordered) {
  int o = d.lang.relation_index("O"), f = d.lang.function_index("F");
  if (o < 0 || f < 0) throw InvalidInput("structure lacks O or F");
  std::vector<int> orig, index(d.n, -1);
  for (int v = 0; v < d.n; ++v)
    if (d.rel[o].count({v})) {
      index[v] = static_cast<int>(orig.size());
      orig.push_back(v);
    }
  Language l("equivalence");
  int e = l.add_relation("E", 2), nn = l.add_relation("N", 2);
  int lt = ordered ? l.add_relation("<", 2) : -1;
  Structure s(l, static_cast<int>(orig.size()));
  for (std::size_t i = 0; i < orig.size(); ++i)
    for (std::size_t j = 0; j < orig.size(); ++j) {
      if (i == j) continue;
      const auto& fi = d.value(f, {orig[i]});
      bool same = !fi.empty() && fi == d.value(f, {orig[j]});
      s.add_tuple(same ? e : nn, {static_cast<int>(i), static_cast<int>(j)});
    }
  if (ordered) {
    int r = require_relation(d, "<");
    for (const auto& t : d.rel[r])
      if (index[t[0]] >= 0 && index[t[1]] >= 0)
        s.add_tuple(lt, {index[t[0]], index[t[1]]});
  }
  return s;
}

// ---------------------------------------------------------------------------

std::string to_string(OrderViolation v) {
  switch (v) {
    case OrderViolation::None: return "none";
    case OrderViolation::Reflexive: return "reflexive";
    case OrderViolation::Symmetric: return "symmetric";
    case OrderViolation::Cycle: return "cycle";
  }
  return "?";
}

std::vector<int> least_cycle(const std::vector<std::set<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  for (int v = 0; v < n; ++v)
    if (succ[v].count(v)) return {v};
  std::vector<std::vector<int>> pred(n);
  for (int u = 0; u < n; ++u)
    for (int v : succ[u]) pred[v].push_back(u);
  int best_len = std::numeric_limits<int>::max();
  std::vector<int> best;
  for (int s = 0; s < n; ++s) {
    // Hops from each vertex >= s back to s.
    std::vector<int> to(n, -1);
    std::deque<int> q{s};
    to[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int u : pred[v])
        if (u > s && to[u] < 0) {
          to[u] = to[v] + 1;
          q.push_back(u);
        }
    }
    int len = std::numeric_limits<int>::max();
    for (int w : succ[s])
      if (w > s && to[w] >= 0) len = std::min(len, to[w] + 1);
    if (len >= best_len) continue;
    best_len = len;
    best = {s};
    int cur = s, left = len;
    while (left > 1) {
      for (int w : succ[cur])
        if (w > s && to[w] == left - 1) {
          cur = w;
          break;
        }
      best.push_back(cur);
      --left;
    }
  }
  return best;
}

OrderExtension extend_linear_order(const Structure& s, const std::string& rel) {
  int r = require_relation(s, rel);
  auto succ = successors(s, r);
  OrderExtension out;
  auto [v, w] = order_defect(succ);
  if (v != OrderViolation::None) {
    out.violation = v;
    out.witness = std::move(w);
    return out;
  }
  Structure t = s;
  t.rel[r] = linear_pairs(least_topological_order(succ));
  out.result = std::move(t);
  return out;
}

PosetCompletion complete_poset_linext(const Structure& s) {
  const int lt = require_relation(s, "<");
  const int ll = s.lang.relation_index("<<");
  if (ll >= 0 && s.lang.relations[ll].arity != 2)
    throw InvalidInput("relation '<<' must be binary");
  PosetCompletion out;
  auto much = successors(s, ll);
  if (auto [v, w] = order_defect(much); v != OrderViolation::None) {
    out.violation = v;
    out.witness = std::move(w);
    return out;
  }
  // Transitive closure of <<.
  std::vector<std::set<int>> closure(s.n);
  for (int x = 0; x < s.n; ++x) {
    std::vector<int> stack(much[x].begin(), much[x].end());
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      if (!closure[x].insert(y).second) continue;
      for (int z : much[y]) stack.push_back(z);
    }
  }
  auto less = [&](int x, int y) { return s.rel[lt].count({x, y}) > 0; };
  for (int x = 0; x < s.n; ++x)
    for (int y : much[x])
      if (less(y, x)) {
        out.clause = 1;
        out.pair = {x, y};
        return out;
      }
  for (int x = 0; x < s.n; ++x)
    for (int y : closure[x])
      if (!much[x].count(y) && (less(x, y) || less(y, x))) {
        out.clause = 2;
        out.pair = {x, y};
        return out;
      }
  auto both = successors(s, lt);
  for (int x = 0; x < s.n; ++x) both[x].insert(closure[x].begin(), closure[x].end());
  if (auto [v, w] = order_defect(both); v != OrderViolation::None) {
    out.violation = v;
    out.witness = std::move(w);
    return out;
  }
  Structure t = s;
  t.rel[lt] = linear_pairs(least_topological_order(both));
  if (ll >= 0) {
    t.rel[ll].clear();
    for (int x = 0; x < s.n; ++x)
      for (int y : closure[x]) t.rel[ll].insert({x, y});
  }
  out.result = std::move(t);
  return out;
}

// ---------------------------------------------------------------------------

CRelationReport check_c_relation(const Structure& s) {
  int c = s.lang.relation_index("C");
  if (c < 0 || s.lang.relations[c].arity != 3)
    throw InvalidInput("structure has no ternary relation 'C'");
  const int n = s.n;
  auto C = [&](int a, int b, int d) { return s.rel[c].count({a, b, d}) > 0; };
  CRelationReport rep;
  auto fail = [&](int axiom, std::vector<int> w) {
    rep.holds = false;
    rep.axiom = axiom;
    rep.witness = std::move(w);
    return rep;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        if (C(a, b, d) != C(a, d, b)) return fail(1, {a, b, d});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        if (C(a, b, d) && C(b, a, d)) return fail(2, {a, b, d});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        if (!C(a, b, d)) continue;
        for (int x = 0; x < n; ++x)
          if (!C(a, x, d) && !C(x, b, d)) return fail(3, {a, b, d, x});
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && !C(a, b, b)) return fail(4, {a, b});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        if (a != b && b != d && a != d && !C(a, b, d) && !C(b, a, d) &&
            !C(d, a, b))
          return fail(5, {a, b, d});
  int lt = s.lang.relation_index("<");
  if (lt >= 0) {
    auto L = [&](int x, int y) { return s.rel[lt].count({x, y}) > 0; };
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          if (C(a, b, d) && L(b, d) && !(L(a, b) && L(b, d)) &&
              !(L(b, d) && L(d, a)))
            return fail(6, {a, b, d});
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> enumerate_rigid_surjections(int m, int k) {
  if (k < 1 || m < k) throw InvalidInput("rigid surjections need m >= k >= 1");
  std::vector<std::vector<int>> out;
  std::vector<int> g(m);
  // Restricted growth: each value is at most one more than the running max.
  auto rec = [&](auto&& self, int j, int mx) -> void {
    if (m - j < k - 1 - mx) return;
    if (j == m) {
      if (mx == k - 1) out.push_back(g);
      return;
    }
    for (int v = 0; v <= std::min(mx + 1, k - 1); ++v) {
      g[j] = v;
      self(self, j + 1, std::max(mx, v));
    }
  };
  g[0] = 0;
  rec(rec, 1, 0);
  return out;
}

Structure ordered_boolean_algebra(int k) {
  if (k < 0 || k > 4)
    throw InvalidInput("Boolean algebras are materialised for k <= 4 only");
  Language l("ba");
  int join = l.add_function("join", 2), meet = l.add_function("meet", 2);
  int neg = l.add_function("neg", 1);
  int zero = l.add_relation("Zero", 1), one = l.add_relation("One", 1);
  int lt = l.add_relation("<", 2);
  const int n = 1 << k;
  Structure s(l, n);
  for (int x = 0; x < n; ++x) {
    s.add_value(neg, {x}, (n - 1) & ~x);
    for (int y = 0; y < n; ++y) {
      s.add_value(join, {x, y}, x | y);
      s.add_value(meet, {x, y}, x & y);
      int diff = x ^ y;
      if (diff && (x & diff & -diff)) s.add_tuple(lt, {x, y});
    }
  }
  s.add_tuple(zero, {0});
  s.add_tuple(one, {n - 1});
  return s;
}

VertexMap surjection_to_embedding(const std::vector<int>& g, int m, int k) {
  VertexMap f(1 << k, 0);
  for (int x = 0; x < (1 << k); ++x)
    for (int j = 0; j < m; ++j)
      if ((x >> g[j]) & 1) f[x] |= 1 << j;
  return f;
}

std::vector<int> embedding_to_surjection(const VertexMap& f, int m, int k) {
  std::vector<int> g(m, -1);
  for (int x = 0; x < k; ++x)
    for (int j = 0; j < m; ++j)
      if ((f[1 << x] >> j) & 1) {
        if (g[j] >= 0) throw InvalidInput("atom images overlap");
        g[j] = x;
      }
  if (std::count(g.begin(), g.end(), -1))
    throw InvalidInput("atom images do not cover");
  return g;
}

BACorrespondence ba_embedding_correspondence(int m, int k) {
  if (k < 1 || m < k) throw InvalidInput("need m >= k >= 1");
  auto a = ordered_boolean_algebra(k), b = ordered_boolean_algebra(m);
  BACorrespondence out;
  auto sur = enumerate_rigid_surjections(m, k);
  out.surjections = sur.size();
  for (auto& g : sur) {
    auto f = surjection_to_embedding(g, m, k);
    if (!is_embedding(f, a, b)) out.all_certified = false;
    if (embedding_to_surjection(f, m, k) != g) out.round_trip = false;
    out.pairs.push_back({g, f});
  }
  auto embs = enumerate_embeddings(a, b);
  out.embeddings = embs.size();
  for (const auto& e : embs) {
    auto g = embedding_to_surjection(e.map, m, k);
    if (surjection_to_embedding(g, m, k) != e.map) out.round_trip = false;
  }
  return out;
}

// ---------------------------------------------------------------------------

InjectiveResult injectivize_homomorphism_embedding(const Structure& a,
                                                   const VertexMap& f,
                                                   const Structure& b) {
  if (!a.lang.relational() || !b.lang.relational())
    throw NotRelational("injectivization needs a relational language");
  if (static_cast<int>(f.size()) != a.n ||
      std::any_of(f.begin(), f.end(), [&](int v) { return v < 0 || v >= b.n; }) ||
      !is_homomorphism_embedding(f, a, b))
    throw NotHomomorphismEmbedding("map is not a homomorphism-embedding");
  InjectiveResult out{b, f, 0};
  while (true) {
    int x = -1, y = -1;
    for (int u = 0; u < a.n && y < 0; ++u)
      for (int v = u + 1; v < a.n; ++v)
        if (out.f[u] == out.f[v]) {
          x = u;
          y = v;
          break;
        }
    if (y < 0) break;
    VertexSet rest;
    for (int v = 0; v < a.n; ++v)
      if (out.f[v] != out.f[x]) rest.push_back(out.f[v]);
    std::sort(rest.begin(), rest.end());
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    AmalgamationProblem p{induced_substructure(out.b, rest).s, out.b, out.b,
                          rest, rest};
    auto am = free_amalgam(p);
    VertexMap g(a.n);
    for (int v = 0; v < a.n; ++v) g[v] = am.beta1[out.f[v]];
    g[y] = am.beta2[out.f[y]];
    out.b = std::move(am.c);
    out.f = std::move(g);
    ++out.steps;
  }
  return out;
}

}  // namespace ramsey
