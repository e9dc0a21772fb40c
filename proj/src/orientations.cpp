#include "ramsey/orientations.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <queue>

namespace ramsey {

UGraph UGraph::from_structure(const Structure& s) {
  int e = s.lang.relation_index("E");
  if (e < 0 || s.lang.relations[e].arity != 2)
    throw InvalidInput("graph: binary relation E required");
  UGraph g;
  g.n = s.n;
  for (const auto& t : s.rel[e]) {
    if (t[0] == t[1]) throw InvalidInput("graph: loop at " + std::to_string(t[0]));
    if (!s.has_tuple(e, {t[1], t[0]}))
      throw InvalidInput("graph: E is not symmetric at " + std::to_string(t[0]) +
                         "," + std::to_string(t[1]));
    if (t[0] < t[1]) g.edges.emplace_back(t[0], t[1]);
  }
  return g;
}

Structure UGraph::to_structure() const { return make_graph(n, edges); }

bool UGraph::adjacent(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

UGraph UGraph::induced(const VertexSet& vs) const {
  std::vector<int> pos(n, -1);
  for (std::size_t i = 0; i < vs.size(); ++i) pos[vs[i]] = static_cast<int>(i);
  UGraph h;
  h.n = static_cast<int>(vs.size());
  for (auto [u, v] : edges)
    if (pos[u] >= 0 && pos[v] >= 0)
      h.edges.emplace_back(std::min(pos[u], pos[v]), std::max(pos[u], pos[v]));
  std::sort(h.edges.begin(), h.edges.end());
  return h;
}

int predimension(const UGraph& g) {
  return 2 * g.n - static_cast<int>(g.edges.size());
}

int predimension(const Structure& g) {
  return predimension(UGraph::from_structure(g));
}

namespace {

VertexSet from_mask(std::uint32_t m, int n) {
  VertexSet vs;
  for (int v = 0; v < n; ++v)
    if (m >> v & 1u) vs.push_back(v);
  return vs;
}

// Size first, then lexicographic on the sorted vertex lists.
bool smaller(const VertexSet& a, const VertexSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

int delta_of_mask(const UGraph& g, std::uint32_t m) {
  int vs = std::popcount(m), es = 0;
  for (auto [u, v] : g.edges)
    if ((m >> u & 1u) && (m >> v & 1u)) ++es;
  return 2 * vs - es;
}

void check_bound(int n, int bound, const std::string& what) {
  if (n > bound || n > 30)
    throw BoundExceeded(what + ": " + std::to_string(n) +
                        " vertices exceeds the exhaustive bound " +
                        std::to_string(bound));
}

}  // namespace

MembershipResult class_membership(const UGraph& g, DeltaClass which,
                                  double log_base, int bound) {
  check_bound(g.n, bound, "class membership");
  if (which == DeltaClass::CF && !(log_base > 1.0))
    throw InvalidInput("class membership: log base must exceed 1");
  MembershipResult res;
  for (std::uint32_t m = 1; m < (1u << g.n); ++m) {
    int d = delta_of_mask(g, m);
    bool bad;
    if (which == DeltaClass::C0) {
      bad = d < 0;
    } else {
      double need = std::log(static_cast<double>(std::popcount(m))) /
                    std::log(log_base);
      bad = d < need - 1e-12;
    }
    if (!bad) continue;
    auto vs = from_mask(m, g.n);
    if (!res.violating || smaller(vs, *res.violating)) res.violating = vs;
    res.member = false;
  }
  return res;
}

// --- Orientations -----------------------------------------------------------

std::vector<int> OrientedGraph::outdegrees() const {
  std::vector<int> d(g.n, 0);
  for (auto [t, h] : arcs) ++d[t];
  return d;
}

bool OrientedGraph::is_2orientation() const {
  if (arcs.size() != g.edges.size()) return false;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    auto [t, h] = arcs[i];
    if (std::make_pair(std::min(t, h), std::max(t, h)) != g.edges[i]) return false;
  }
  for (int d : outdegrees())
    if (d > 2) return false;
  return true;
}

std::vector<std::pair<int, int>> OrientedGraph::roots() const {
  std::vector<std::pair<int, int>> out;
  auto d = outdegrees();
  for (int v = 0; v < g.n; ++v)
    if (d[v] < 2) out.emplace_back(v, 2 - d[v]);
  return out;
}

int OrientedGraph::multiplicity_sum() const {
  int s = 0;
  for (auto [v, m] : roots()) s += m;
  return s;
}

VertexSet OrientedGraph::roots_from(int u) const {
  std::vector<std::vector<int>> succ(g.n);
  for (auto [t, h] : arcs) succ[t].push_back(h);
  auto d = outdegrees();
  std::vector<bool> seen(g.n, false);
  std::queue<int> q;
  q.push(u);
  seen[u] = true;
  VertexSet out;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (d[x] < 2) out.push_back(x);
    for (int y : succ[x])
      if (!seen[y]) {
        seen[y] = true;
        q.push(y);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool OrientedGraph::successor_closed(const VertexSet& a) const {
  std::vector<bool> in(g.n, false);
  for (int v : a) in[v] = true;
  for (auto [t, h] : arcs)
    if (in[t] && !in[h]) return false;
  return true;
}

bool OrientedGraph::successor_d_closed(const VertexSet& a) const {
  if (!successor_closed(a)) return false;
  std::vector<bool> in(g.n, false);
  for (int v : a) in[v] = true;
  for (int u = 0; u < g.n; ++u) {
    if (in[u]) continue;
    auto r = roots_from(u);
    if (std::none_of(r.begin(), r.end(), [&](int x) { return !in[x]; }))
      return false;
  }
  return true;
}

Structure OrientedGraph::to_structure() const {
  Language l("oriented_graphs");
  l.add_relation("E", 2);
  Structure s(l, g.n);
  for (auto [t, h] : arcs) s.add_tuple(0, {t, h});
  return s;
}

namespace {

// Admissible tails of each edge; edges leaving `closed` must start outside.
std::vector<std::vector<int>> allowed_tails(const UGraph& g,
                                            const std::optional<VertexSet>& closed) {
  std::vector<bool> in(g.n, false);
  if (closed)
    for (int v : *closed) {
      if (v < 0 || v >= g.n)
        throw InvalidInput("orientation: closed set vertex out of range");
      in[v] = true;
    }
  std::vector<std::vector<int>> tails;
  for (auto [u, v] : g.edges) {
    if (in[u] && !in[v])
      tails.push_back({v});
    else if (in[v] && !in[u])
      tails.push_back({u});
    else
      tails.push_back({u, v});
  }
  return tails;
}

class SlotMatching {
 public:
  SlotMatching(int n, const std::vector<std::vector<int>>& tails)
      : tails_(tails), tail_(tails.size(), -1), load_(n) {}

  bool run() {
    for (std::size_t e = 0; e < tails_.size(); ++e) {
      std::vector<bool> seen(load_.size(), false);
      if (!augment(static_cast<int>(e), seen)) return false;
    }
    return true;
  }
  const std::vector<int>& tails() const { return tail_; }

 private:
  bool augment(int e, std::vector<bool>& seen) {
    for (int t : tails_[e]) {
      if (seen[t]) continue;
      seen[t] = true;
      if (load_[t].size() < 2) {
        place(e, t);
        return true;
      }
      for (int other : std::vector<int>(load_[t])) {
        if (augment_from(other, t, seen)) {
          place(e, t);
          return true;
        }
      }
    }
    return false;
  }
  // Moves edge `e` away from tail `from`.
  bool augment_from(int e, int from, std::vector<bool>& seen) {
    auto& l = load_[from];
    l.erase(std::find(l.begin(), l.end(), e));
    tail_[e] = -1;
    if (augment(e, seen)) return true;
    place(e, from);
    return false;
  }
  void place(int e, int t) {
    tail_[e] = t;
    load_[t].push_back(e);
  }

  const std::vector<std::vector<int>>& tails_;
  std::vector<int> tail_;
  std::vector<std::vector<int>> load_;
};

OrientedGraph make_oriented(const UGraph& g, const std::vector<int>& tail) {
  OrientedGraph o;
  o.g = g;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    auto [u, v] = g.edges[i];
    o.arcs.emplace_back(tail[i], tail[i] == u ? v : u);
  }
  return o;
}

}  // namespace

std::optional<OrientedGraph> find_2orientation(
    const UGraph& g, const std::optional<VertexSet>& closed, bool d_closed,
    std::int64_t max_nodes) {
  auto tails = allowed_tails(g, closed);
  if (!d_closed) {
    SlotMatching m(g.n, tails);
    if (!m.run()) return std::nullopt;
    return make_oriented(g, m.tails());
  }
  VertexSet h = closed.value_or(VertexSet{});
  Budget budget(max_nodes, "d-closed orientation search");
  std::vector<int> tail(g.edges.size(), -1), load(g.n, 0);
  std::optional<OrientedGraph> found;
  std::function<bool(std::size_t)> go = [&](std::size_t e) {
    if (e == tails.size()) {
      auto o = make_oriented(g, tail);
      if (o.successor_d_closed(h)) {
        found = std::move(o);
        return true;
      }
      return false;
    }
    for (int t : tails[e]) {
      if (load[t] == 2) continue;
      budget.tick();
      tail[e] = t;
      ++load[t];
      if (go(e + 1)) return true;
      --load[t];
    }
    return false;
  };
  go(0);
  return found;
}

SubOrderResult substructure_order(const UGraph& g, const VertexSet& h,
                                  SubOrder which, int bound) {
  check_bound(g.n, bound, "substructure order");
  std::uint32_t hm = 0;
  for (int v : h) {
    if (v < 0 || v >= g.n) throw InvalidInput("substructure order: vertex out of range");
    hm |= 1u << v;
  }
  int dh = delta_of_mask(g, hm);
  SubOrderResult res;
  for (std::uint32_t m = 0; m < (1u << g.n); ++m) {
    if ((m & hm) != hm || m == hm) continue;
    int d = delta_of_mask(g, m);
    bool bad = which == SubOrder::LeqS ? d < dh : d <= dh;
    if (!bad) continue;
    auto vs = from_mask(m, g.n);
    if (!res.witness || smaller(vs, *res.witness)) res.witness = vs;
    res.holds = false;
  }
  return res;
}

std::optional<OrientedGraph> orient_free_amalgam(const AmalgamationProblem& p,
                                                 const Amalgam& am) {
  check_problem(p);
  auto left = UGraph::from_structure(p.left);
  auto right = UGraph::from_structure(p.right);
  auto c = UGraph::from_structure(am.c);
  auto o1 = find_2orientation(left, image_of(p.alpha1));
  auto o2 = find_2orientation(right, image_of(p.alpha2));
  if (!o1 || !o2) return std::nullopt;

  std::map<std::pair<int, int>, int> tail;  // edge of c -> tail
  for (auto [t, h] : o1->arcs) {
    int a = am.beta1[t], b = am.beta1[h];
    tail[{std::min(a, b), std::max(a, b)}] = a;
  }
  for (auto [t, h] : o2->arcs) {
    int a = am.beta2[t], b = am.beta2[h];
    tail.emplace(std::make_pair(std::min(a, b), std::max(a, b)), a);
  }
  std::vector<int> tails;
  for (const auto& e : c.edges) {
    auto it = tail.find(e);
    if (it == tail.end())
      throw InvalidInput("orient amalgam: edge " + std::to_string(e.first) +
                         "," + std::to_string(e.second) +
                         " comes from neither side");
    tails.push_back(it->second);
  }
  return make_oriented(c, tails);
}

}  // namespace ramsey
