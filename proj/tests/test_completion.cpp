#include <functional>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ramsey/amalgamation.hpp"
#include "ramsey/completion.hpp"

using namespace ramsey;

namespace {

// Labels 1..3 encoded as ints, 0 meaning no label.
using Code = std::vector<int>;

std::vector<std::pair<int, int>> pairs_of(int n) {
  std::vector<std::pair<int, int>> p;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) p.push_back({u, v});
  return p;
}

EdgeLabelledGraph decode(int n, const Code& c) {
  EdgeLabelledGraph g(n);
  auto ps = pairs_of(n);
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (c[i]) g.set(ps[i].first, ps[i].second, c[i]);
  return g;
}

// Some assignment of labels from {1,2,3} to the missing pairs satisfies the
// triangle inequality everywhere.
bool oracle_completable(int n, Code c) {
  auto ps = pairs_of(n);
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i]) free.push_back(i);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == free.size()) {
      auto lab = [&](int u, int v) {
        for (std::size_t k = 0; k < ps.size(); ++k)
          if (ps[k] == std::pair{std::min(u, v), std::max(u, v)}) return c[k];
        return 0;
      };
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z)
            if (x != y && y != z && x != z && lab(x, z) > lab(x, y) + lab(y, z))
              return false;
      return true;
    }
    for (int l = 1; l <= 3; ++l) {
      c[free[i]] = l;
      if (rec(i + 1)) return true;
    }
    c[free[i]] = 0;
    return false;
  };
  return rec(0);
}

// Fewest vertices of a non-metric cycle given by distinct vertices with all
// consecutive pairs labelled; 0 when there is none.
int oracle_shortest_nonmetric_cycle(const EdgeLabelledGraph& g) {
  int best = 0;
  std::vector<int> path;
  std::vector<char> used(g.n, 0);
  std::function<void()> rec = [&]() {
    const int k = static_cast<int>(path.size());
    if (k >= 3) {
      if (auto close = g.get(path.back(), path.front())) {
        std::vector<Rational> ls{*close};
        for (int i = 0; i + 1 < k; ++i) ls.push_back(*g.get(path[i], path[i + 1]));
        Rational sum = 0, mx = 0;
        for (auto& l : ls) {
          sum += l;
          mx = std::max(mx, l);
        }
        if (mx > sum - mx && (best == 0 || k < best)) best = k;
      }
    }
    for (int v = 0; v < g.n; ++v)
      if (!used[v] && (path.empty() || g.get(path.back(), v))) {
        used[v] = 1;
        path.push_back(v);
        rec();
        path.pop_back();
        used[v] = 0;
      }
  };
  rec();
  return best;
}

Structure labelled_cycle(const std::vector<int>& labels) {
  const int k = static_cast<int>(labels.size());
  EdgeLabelledGraph c(k);
  for (int i = 0; i < k; ++i) c.set(i, (i + 1) % k, labels[i]);
  return to_structure(c);
}

// Language with d_1_1, d_2_1, d_3_1 so that structures are comparable.
Structure in_full_language(const EdgeLabelledGraph& g) {
  Language l("labelled");
  for (int d = 1; d <= 3; ++d) l.add_relation(label_relation_name(d), 2);
  Structure s(l, g.n);
  for (const auto& [p, d] : g.labels) {
    int r = static_cast<int>(numerator(d)) - 1;
    s.add_tuple(r, {p.first, p.second});
    s.add_tuple(r, {p.second, p.first});
  }
  return s;
}

Structure in_full_language(const Structure& cyc) {
  return in_full_language(labelled_graph_from_structure(cyc));
}

void check_metric_case(int n, const Code& code, bool brute) {
  auto g = decode(n, code);
  if (g.labels.empty()) return;
  auto res = complete_metric(g);
  int shortest = oracle_shortest_nonmetric_cycle(g);
  // The only non-metric cycles with labels in {1,2,3} are triangles 3,1,1,
  // so cycles of length up to 3/1 + 1 = 4 cover every case.
  std::vector<Structure> family;
  for (auto& ls : std::vector<std::vector<int>>{{3, 1, 1}})
    family.push_back(in_full_language(labelled_cycle(ls)));
  bool forbidden = forbidden_free(in_full_language(g), family,
                                  ForbidMode::Embedding)
                       .has_value();
  CHECK(res.ok() == (shortest == 0));
  CHECK(res.ok() == !forbidden);
  if (brute) CHECK(res.ok() == oracle_completable(n, code));
  if (res.ok()) {
    const auto& c = *res.completed;
    CHECK(c.complete());
    CHECK(satisfies_triangle_inequality(c));
    for (const auto& [p, d] : g.labels) CHECK(c.labels.at(p) == d);
    for (const auto& [p, d] : c.labels) CHECK(d <= res.cap);
  } else {
    const auto& w = *res.witness;
    CHECK(static_cast<int>(w.cycle.size()) == shortest);
    Rational rest = 0;
    for (std::size_t i = 1; i < w.labels.size(); ++i) rest += w.labels[i];
    CHECK(w.labels[0] > rest);
    const int k = static_cast<int>(w.cycle.size());
    for (int i = 0; i < k; ++i)
      CHECK(g.get(w.cycle[i], w.cycle[(i + 1) % k]) == w.labels[i]);
    // Minimal witnesses are induced cycles.
    for (int i = 0; i < k; ++i)
      for (int j = i + 2; j < k; ++j)
        if (!(i == 0 && j == k - 1)) CHECK(!g.get(w.cycle[i], w.cycle[j]));
  }
}

bool oracle_is_linear(const Structure& s, int r) {
  for (int u = 0; u < s.n; ++u)
    for (int v = 0; v < s.n; ++v) {
      if (u == v) {
        if (s.rel[r].count({u, v})) return false;
        continue;
      }
      if (s.rel[r].count({u, v}) == s.rel[r].count({v, u})) return false;
      for (int w = 0; w < s.n; ++w)
        if (s.rel[r].count({u, v}) && s.rel[r].count({v, w}) &&
            !s.rel[r].count({u, w}))
          return false;
    }
  return true;
}

// C-relation of the leaves of a rooted binary tree given by parent links:
// C(a,b,c) iff meet(b,c) lies strictly below meet(a,b,c).
Structure tree_c_relation(const std::vector<int>& parent,
                          const std::vector<int>& leaves) {
  auto ancestors = [&](int v) {
    std::vector<int> a;
    for (; v >= 0; v = parent[v]) a.push_back(v);
    return a;
  };
  auto depth = [&](int v) { return static_cast<int>(ancestors(v).size()); };
  auto meet = [&](int x, int y) {
    auto ax = ancestors(x);
    for (int v : ancestors(y))
      if (std::find(ax.begin(), ax.end(), v) != ax.end()) return v;
    return -1;
  };
  Language l("c");
  l.add_relation("C", 3);
  const int n = static_cast<int>(leaves.size());
  Structure s(l, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        int bc = meet(leaves[b], leaves[c]);
        int abc = meet(leaves[a], bc);
        if (depth(bc) > depth(abc)) s.add_tuple(0, {a, b, c});
      }
  return s;
}

Structure with_order(Structure s, const std::vector<int>& order) {
  int r = s.extend_relation("<", 2);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      s.add_tuple(r, {order[i], order[j]});
  return s;
}

}  // namespace

TEST_SUITE("completion") {

TEST_CASE("metric completion of a path") {
  EdgeLabelledGraph g(3);
  g.set(0, 1, 1);
  g.set(1, 2, 3);
  auto r = complete_metric(g);
  REQUIRE(r.ok());
  CHECK(r.cap == 3);
  CHECK(*r.completed->get(0, 2) == 3);

  g.set(1, 2, Rational(3, 2));
  r = complete_metric(g);
  REQUIRE(r.ok());
  CHECK(*r.completed->get(0, 2) == Rational(3, 2));
}

TEST_CASE("non-metric triangle gives a witness") {
  EdgeLabelledGraph g(3);
  g.set(0, 1, 3);
  g.set(1, 2, 1);
  g.set(0, 2, 1);
  auto r = complete_metric(g);
  REQUIRE(!r.ok());
  CHECK(r.witness->cycle == std::vector<int>{0, 1, 2});
  CHECK(r.witness->labels == std::vector<Rational>{3, 1, 1});
}

TEST_CASE("metric witness prefers fewer vertices") {
  // Pentagon 0..4 with a long chord 0-2 labelled 10 and a cheap path
  // 2-3-4-0, plus a direct triangle around 1-3.
  EdgeLabelledGraph g(5);
  g.set(0, 2, 10);
  g.set(2, 3, 1);
  g.set(3, 4, 1);
  g.set(4, 0, 1);
  g.set(1, 3, 5);
  g.set(1, 4, 1);
  g.set(3, 0, 3);
  auto r = complete_metric(g);
  REQUIRE(!r.ok());
  // 0-2 (10) with 2-3-0 (1+3) closes a triangle.
  CHECK(r.witness->cycle == std::vector<int>{0, 2, 3});
}

TEST_CASE("metric edge cases") {
  CHECK(complete_metric(EdgeLabelledGraph(0)).ok());
  CHECK(complete_metric(EdgeLabelledGraph(1)).ok());
  CHECK_THROWS_AS(complete_metric(EdgeLabelledGraph(2)), InvalidInput);
  EdgeLabelledGraph g(2);
  CHECK_THROWS_AS(g.set(0, 0, 1), InvalidInput);
  CHECK_THROWS_AS(g.set(0, 1, 0), InvalidInput);
  // Disconnected pairs get the cap.
  EdgeLabelledGraph h(4);
  h.set(0, 1, 2);
  auto r = complete_metric(h);
  REQUIRE(r.ok());
  CHECK(*r.completed->get(2, 3) == 2);
  CHECK(*r.completed->get(0, 3) == 2);
}

TEST_CASE("label relation names round trip") {
  CHECK(label_relation_name(Rational(3, 2)) == "d_3_2");
  CHECK(label_relation_name(Rational(4)) == "d_4_1");
  CHECK(*parse_label_relation_name("d_6_4") == Rational(3, 2));
  CHECK(!parse_label_relation_name("d_1_0"));
  CHECK(!parse_label_relation_name("E"));
  EdgeLabelledGraph g(3);
  g.set(0, 1, Rational(1, 3));
  g.set(1, 2, 2);
  CHECK(labelled_graph_from_structure(to_structure(g)) == g);
}

TEST_CASE("metric completion matches brute force on four vertices") {
  for (int n = 2; n <= 4; ++n) {
    const int m = n * (n - 1) / 2;
    Code c(m, 0);
    while (true) {
      check_metric_case(n, c, true);
      int i = 0;
      while (i < m && c[i] == 3) c[i++] = 0;
      if (i == m) break;
      ++c[i];
    }
  }
}

TEST_CASE("metric completion on five vertices") {
  // Exhaustive over labels {none, 1, 3}: label 2 never lies on a non-metric
  // cycle with labels in {1, 2, 3}.
  const int m = 10;
  Code c(m, 0);
  while (true) {
    check_metric_case(5, c, false);
    int i = 0;
    while (i < m && c[i] == 3) c[i++] = 0;
    if (i == m) break;
    c[i] = c[i] == 0 ? 1 : 3;
  }
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int t = 0; t < 600; ++t) {
    Code d(m);
    for (auto& x : d) x = lab(rng);
    int missing = static_cast<int>(std::count(d.begin(), d.end(), 0));
    check_metric_case(5, d, missing <= 6);
  }
}

TEST_CASE("equivalence completion examples") {
  EquivalenceGraph g(3);
  g.set(0, 1, true);
  g.set(1, 2, true);
  auto r = complete_equivalence(g);
  REQUIRE(r.ok());
  CHECK(*r.completed->get(0, 2));

  g.set(0, 2, false);
  r = complete_equivalence(g);
  REQUIRE(!r.ok());
  CHECK(*r.witness == std::vector<int>{0, 2, 1});

  EquivalenceGraph h(4);
  h.set(0, 1, true);
  h.set(2, 3, true);
  r = complete_equivalence(h);
  REQUIRE(r.ok());
  CHECK(!*r.completed->get(0, 2));
  CHECK(!*r.completed->get(1, 3));
  CHECK(*r.completed->get(2, 3));
}

TEST_CASE("equivalence completion against transitive closure") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> lab(0, 5);
  for (int t = 0; t < 400; ++t) {
    const int n = 2 + t % 6;
    EquivalenceGraph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        int x = lab(rng);
        if (x <= 1) g.set(u, v, true);
        else if (x == 2) g.set(u, v, false);
      }
    // Boolean closure.
    std::vector<std::vector<bool>> e(n, std::vector<bool>(n, false));
    for (int u = 0; u < n; ++u) e[u][u] = true;
    for (const auto& [p, s] : g.same)
      if (s) e[p.first][p.second] = e[p.second][p.first] = true;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (e[i][k] && e[k][j]) e[i][j] = true;
    bool consistent = true;
    for (const auto& [p, s] : g.same)
      if (!s && e[p.first][p.second]) consistent = false;
    auto r = complete_equivalence(g);
    REQUIRE(r.ok() == consistent);
    if (r.ok()) {
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) CHECK(*r.completed->get(u, v) == e[u][v]);
    } else {
      const auto& w = *r.witness;
      CHECK(*g.get(w[0], w[1]) == false);
      for (std::size_t i = 1; i < w.size(); ++i)
        CHECK(*g.get(w[i], w[(i + 1) % w.size()]) == true);
      std::set<int> distinct(w.begin(), w.end());
      CHECK(distinct.size() == w.size());
    }
  }
}

TEST_CASE("imaginary encoding functors") {
  EquivalenceGraph g(5);
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) g.set(u, v, (u % 2) == (v % 2));
  auto a = to_structure(g);
  auto d = equivalence_U(a);
  CHECK(d.n == 7);
  CHECK(d.value(d.lang.function_index("F"), {0}) == std::set<int>{5});
  CHECK(d.value(d.lang.function_index("F"), {1}) == std::set<int>{6});
  CHECK(equivalence_T(d) == a);

  // Embeddings of a into b lift to embeddings of U(a) into U(b), mapping
  // classes to classes.
  EquivalenceGraph h(3);
  h.set(0, 1, false);
  h.set(0, 2, true);
  h.set(1, 2, false);
  auto small = to_structure(h);
  auto du = equivalence_U(small);
  for (const auto& e : enumerate_embeddings(small, a)) {
    VertexMap lift = e.map;
    for (int c = 0; c < du.n - small.n; ++c) {
      int member = -1;
      for (int v = 0; v < small.n; ++v)
        if (*du.value(du.lang.function_index("F"), {v}).begin() == small.n + c) {
          member = v;
          break;
        }
      lift.push_back(*d.value(d.lang.function_index("F"), {e.map[member]}).begin());
    }
    CHECK(is_embedding(lift, du, d));
  }

  // Ordered variant on a convex order: classes {0,1}, {2}, {3,4}.
  EquivalenceGraph k(5);
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) k.set(u, v, (u / 2) == (v / 2) && u != 2 && v != 2);
  k.set(0, 1, true);
  k.set(3, 4, true);
  auto ko = with_order(to_structure(k), {0, 1, 2, 3, 4});
  CHECK(convexly_ordered(ko));
  auto du2 = equivalence_U(ko, true);
  CHECK(du2.n == 8);
  CHECK(oracle_is_linear(du2, du2.lang.relation_index("<")));
  CHECK(equivalence_T(du2, true) == ko);
  auto bad = with_order(to_structure(k), {0, 2, 1, 3, 4});
  CHECK(!convexly_ordered(bad));
  CHECK_THROWS_AS(equivalence_U(bad, true), InvalidInput);
}

TEST_CASE("extend linear order") {
  auto s = make_graph(3, {{1, 2}});
  int lt = s.extend_relation("<", 2);
  s.add_tuple(lt, {0, 1});
  auto r = extend_linear_order(s);
  REQUIRE(r.ok());
  CHECK(r.result->rel[lt] == std::set<Tuple>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(r.result->rel[0] == s.rel[0]);

  // Tie-break: 2 < 0 only.
  auto t = make_graph(3, {});
  lt = t.extend_relation("<", 2);
  t.add_tuple(lt, {2, 0});
  r = extend_linear_order(t);
  REQUIRE(r.ok());
  CHECK(r.result->rel[lt] == std::set<Tuple>{{1, 2}, {1, 0}, {2, 0}});

  auto c = make_graph(3, {});
  lt = c.extend_relation("<", 2);
  c.add_tuple(lt, {0, 1});
  c.add_tuple(lt, {1, 2});
  c.add_tuple(lt, {2, 0});
  r = extend_linear_order(c);
  CHECK(r.violation == OrderViolation::Cycle);
  CHECK(r.witness == std::vector<int>{0, 1, 2});

  c.add_tuple(lt, {1, 0});
  r = extend_linear_order(c);
  CHECK(r.violation == OrderViolation::Symmetric);
  CHECK(r.witness == std::vector<int>{0, 1});
  c.add_tuple(lt, {2, 2});
  CHECK(extend_linear_order(c).violation == OrderViolation::Reflexive);

  auto chain = make_chain(4);
  auto again = extend_linear_order(chain);
  REQUIRE(again.ok());
  CHECK(*again.result == chain);
  CHECK_THROWS_AS(extend_linear_order(make_graph(2, {})), InvalidInput);
}

TEST_CASE("least cycle is shortest then lexicographic") {
  std::vector<std::set<int>> succ(6);
  succ[0] = {1};
  succ[1] = {2};
  succ[2] = {3};
  succ[3] = {0};
  succ[4] = {5};
  succ[5] = {2};
  succ[2].insert(4);
  // Cycles: 0123 (length 4) and 2452 (length 3).
  CHECK(least_cycle(succ) == std::vector<int>{2, 4, 5});
  succ[5] = {};
  CHECK(least_cycle(succ) == std::vector<int>{0, 1, 2, 3});
  succ[3] = {};
  CHECK(least_cycle(succ).empty());
}

TEST_CASE("extend linear order on random acyclic relations") {
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 7;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto s = oracle::random_structure(rng, n, 0.3, true, false);
    int lt = s.extend_relation("<", 2);
    std::bernoulli_distribution coin(0.3);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng)) s.add_tuple(lt, {perm[i], perm[j]});
    auto r = extend_linear_order(s);
    REQUIRE(r.ok());
    CHECK(oracle_is_linear(*r.result, lt));
    for (const auto& x : s.rel[lt]) CHECK(r.result->rel[lt].count(x));
    CHECK(r.result->rel[0] == s.rel[0]);
    CHECK(*extend_linear_order(*r.result).result == *r.result);
  }
}

TEST_CASE("poset with linear extension") {
  Language l("poset");
  int lt = l.add_relation("<", 2), ll = l.add_relation("<<", 2);
  Structure s(l, 2);
  s.add_tuple(lt, {0, 1});
  s.add_tuple(ll, {0, 1});
  auto r = complete_poset_linext(s);
  REQUIRE(r.ok());
  CHECK(*r.result == s);

  Structure t(l, 3);
  t.add_tuple(ll, {0, 1});
  t.add_tuple(ll, {1, 2});
  t.add_tuple(lt, {2, 0});
  r = complete_poset_linext(t);
  CHECK(r.clause == 2);
  CHECK(r.pair == std::pair{0, 2});

  Structure u(l, 2);
  u.add_tuple(ll, {0, 1});
  u.add_tuple(lt, {1, 0});
  r = complete_poset_linext(u);
  CHECK(r.clause == 1);
  CHECK(r.pair == std::pair{0, 1});

  // Closure and extension.
  Structure w(l, 4);
  w.add_tuple(ll, {3, 1});
  w.add_tuple(ll, {1, 0});
  w.add_tuple(lt, {2, 3});
  r = complete_poset_linext(w);
  REQUIRE(r.ok());
  CHECK(r.result->rel[ll] == std::set<Tuple>{{3, 1}, {1, 0}, {3, 0}});
  CHECK(oracle_is_linear(*r.result, lt));
  for (const auto& x : r.result->rel[ll]) CHECK(r.result->rel[lt].count(x));

  // Empty << reduces to the order extension.
  Structure e(l, 3);
  e.add_tuple(lt, {2, 1});
  auto pe = complete_poset_linext(e);
  auto oe = extend_linear_order(e);
  REQUIRE(pe.ok());
  CHECK(*pe.result == *oe.result);

  Structure cyc(l, 2);
  cyc.add_tuple(ll, {0, 1});
  cyc.add_tuple(ll, {1, 0});
  CHECK(complete_poset_linext(cyc).violation == OrderViolation::Symmetric);
}

TEST_CASE("C-relation axioms") {
  Language l("c");
  l.add_relation("C", 3);
  Structure two(l, 2);
  two.add_tuple(0, {0, 1, 1});
  two.add_tuple(0, {1, 0, 0});
  CHECK(check_c_relation(two).holds);

  Structure bad = two;
  bad.add_tuple(0, {0, 1, 0});
  bad.add_tuple(0, {0, 0, 1});
  auto rep = check_c_relation(bad);
  CHECK(!rep.holds);

  // Leaves x=0, y=1, z=2 with y and z siblings.
  std::vector<int> parent{-1, 0, 0, 2, 2};
  auto c3 = tree_c_relation(parent, {1, 3, 4});
  CHECK(check_c_relation(c3).holds);
  Structure swapped = c3;
  swapped.add_tuple(0, {1, 0, 2});
  swapped.add_tuple(0, {1, 2, 0});
  rep = check_c_relation(swapped);
  CHECK(!rep.holds);
  CHECK(rep.axiom == 2);
  CHECK(rep.witness == std::vector<int>{0, 1, 2});

  CHECK(check_c_relation(with_order(c3, {0, 1, 2})).holds);
  CHECK(check_c_relation(with_order(c3, {2, 1, 0})).holds);
  rep = check_c_relation(with_order(c3, {1, 0, 2}));
  CHECK(!rep.holds);
  CHECK(rep.axiom == 6);
}

TEST_CASE("C-relations of random binary trees") {
  std::mt19937 rng(3);
  for (int t = 0; t < 60; ++t) {
    // Grow a binary tree by splitting random leaves.
    std::vector<int> parent{-1};
    std::vector<int> leaves{0};
    const int want = 2 + t % 5;
    while (static_cast<int>(leaves.size()) < want) {
      std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
      std::size_t i = pick(rng);
      int v = leaves[i];
      int a = static_cast<int>(parent.size());
      parent.push_back(v);
      parent.push_back(v);
      leaves[i] = a;
      leaves.insert(leaves.begin() + static_cast<long>(i) + 1, a + 1);
    }
    auto s = tree_c_relation(parent, leaves);
    CHECK(check_c_relation(s).holds);
    // Left-to-right leaf order is convex.
    std::vector<int> order(leaves.size());
    std::iota(order.begin(), order.end(), 0);
    CHECK(check_c_relation(with_order(s, order)).holds);
  }
}

TEST_CASE("rigid surjections") {
  CHECK(enumerate_rigid_surjections(2, 1).size() == 1);
  CHECK(enumerate_rigid_surjections(3, 2) ==
        std::vector<std::vector<int>>{{0, 0, 1}, {0, 1, 0}, {0, 1, 1}});
  CHECK(enumerate_rigid_surjections(4, 4).size() == 1);
  CHECK_THROWS_AS(enumerate_rigid_surjections(2, 3), InvalidInput);
  for (int m = 1; m <= 6; ++m)
    for (int k = 1; k <= m; ++k) {
      std::vector<std::vector<int>> brute;
      oracle::all_tuples(k, m, [&](const Tuple& g) {
        std::vector<int> first(k, -1);
        for (int j = 0; j < m; ++j)
          if (first[g[j]] < 0) first[g[j]] = j;
        if (std::count(first.begin(), first.end(), -1)) return;
        if (std::is_sorted(first.begin(), first.end())) brute.push_back(g);
      });
      CHECK(enumerate_rigid_surjections(m, k) == brute);
    }
}

TEST_CASE("ordered Boolean algebra embeddings") {
  auto b2 = ordered_boolean_algebra(2);
  CHECK(b2.n == 4);
  CHECK(oracle_is_linear(b2, b2.lang.relation_index("<")));
  // Atom a_0 comes before a_1, and the order is antilexicographic.
  CHECK(b2.has_tuple("<", {1, 2}));
  CHECK(b2.has_tuple("<", {3, 0}));

  for (auto [m, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 2}, {3, 3}}) {
    auto brute = oracle::embeddings(ordered_boolean_algebra(k),
                                    ordered_boolean_algebra(m));
    CHECK(brute.size() == enumerate_rigid_surjections(m, k).size());
  }
  for (int m = 1; m <= 4; ++m)
    for (int k = 1; k <= m; ++k) {
      auto c = ba_embedding_correspondence(m, k);
      CHECK(c.counts_agree());
      CHECK(c.all_certified);
      CHECK(c.round_trip);
    }
  CHECK(ba_embedding_correspondence(3, 2).pairs.size() == 3);
  CHECK_THROWS_AS(ordered_boolean_algebra(5), InvalidInput);
}

TEST_CASE("injectivizing homomorphism-embeddings") {
  auto e = complete_graph(2);
  auto r = injectivize_homomorphism_embedding(e, {0, 1}, e);
  CHECK(r.steps == 0);
  CHECK(r.b == e);

  auto two = make_graph(2, {});
  auto one = make_graph(1, {});
  r = injectivize_homomorphism_embedding(two, {0, 0}, one);
  CHECK(r.b.n == 2);
  CHECK(r.f == VertexMap{0, 1});

  auto c4 = cycle_graph(4);
  r = injectivize_homomorphism_embedding(c4, {0, 1, 0, 1}, e);
  CHECK(r.steps == 2);
  CHECK(isomorphic(r.b, c4));
  CHECK(classify_map(r.f, c4, r.b) == MapKind::Isomorphism);

  CHECK_THROWS_AS(injectivize_homomorphism_embedding(e, {0, 0}, e),
                  NotHomomorphismEmbedding);
  Language fl("f");
  fl.add_function("F", 1);
  Structure fs(fl, 1);
  CHECK_THROWS_AS(injectivize_homomorphism_embedding(fs, {0}, fs),
                  NotRelational);
}

TEST_CASE("injectivizing random quotient maps") {
  std::mt19937 rng(19);
  for (int t = 0; t < 80; ++t) {
    auto a = oracle::random_structure(rng, 6, 0.3, true, false);
    // Merge random non-adjacent pairs into classes.
    std::vector<int> cls(a.n);
    std::iota(cls.begin(), cls.end(), 0);
    std::uniform_int_distribution<int> pick(0, a.n - 1);
    for (int k = 0; k < 3; ++k) {
      int u = pick(rng), v = pick(rng);
      bool ok = cls[u] != cls[v];
      for (int x = 0; x < a.n && ok; ++x)
        for (int y = 0; y < a.n && ok; ++y)
          if ((cls[x] == cls[u] && cls[y] == cls[v]) &&
              (a.has_tuple(0, {x, y}) || a.has_tuple(0, {y, x})))
            ok = false;
      if (!ok) continue;
      int old = cls[v];
      for (auto& c : cls)
        if (c == old) c = cls[u];
    }
    std::map<int, int> ids;
    VertexMap f(a.n);
    for (int v = 0; v < a.n; ++v) f[v] = ids.emplace(cls[v], ids.size()).first->second;
    Structure b(a.lang, static_cast<int>(ids.size()));
    for (const auto& tu : a.rel[0]) b.add_tuple(0, {f[tu[0]], f[tu[1]]});
    if (!is_homomorphism_embedding(f, a, b)) continue;
    auto r = injectivize_homomorphism_embedding(a, f, b);
    auto k = classify_map(r.f, a, r.b);
    REQUIRE(k.has_value());
    CHECK(kind_implies(*k, MapKind::HomomorphismEmbedding));
    std::set<int> img(r.f.begin(), r.f.end());
    CHECK(static_cast<int>(img.size()) == a.n);
  }
}

}  // TEST_SUITE
