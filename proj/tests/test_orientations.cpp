#include <bit>
#include <cmath>

#include "catalogs.hpp"
#include "doctest.h"
#include "ramsey/orientations.hpp"

using namespace ramsey;

namespace {

UGraph ug(const Structure& s) { return UGraph::from_structure(s); }

UGraph bowtie() {
  return ug(make_graph(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}));
}

// Brute force over all 2^m orientations; calls f with tails per edge.
void all_orientations(const UGraph& g,
                      const std::function<void(const std::vector<int>&)>& f) {
  const std::size_t m = g.edges.size();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> tail(m);
    std::vector<int> out(g.n, 0);
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      tail[i] = (mask >> i & 1u) ? g.edges[i].second : g.edges[i].first;
      if (++out[tail[i]] > 2) ok = false;
    }
    if (ok) f(tail);
  }
}

bool closed_under(const UGraph& g, const std::vector<int>& tail, unsigned h) {
  for (std::size_t i = 0; i < tail.size(); ++i) {
    int t = tail[i], hd = t == g.edges[i].first ? g.edges[i].second : g.edges[i].first;
    if ((h >> t & 1u) && !(h >> hd & 1u)) return false;
  }
  return true;
}

// Every vertex outside h reaches a vertex of outdegree < 2 outside h.
bool d_closed_under(const UGraph& g, const std::vector<int>& tail, unsigned h) {
  if (!closed_under(g, tail, h)) return false;
  std::vector<int> out(g.n, 0);
  std::vector<unsigned> succ(g.n, 0);
  for (std::size_t i = 0; i < tail.size(); ++i) {
    int t = tail[i], hd = t == g.edges[i].first ? g.edges[i].second : g.edges[i].first;
    ++out[t];
    succ[t] |= 1u << hd;
  }
  for (int u = 0; u < g.n; ++u) {
    if (h >> u & 1u) continue;
    unsigned reach = 1u << u;
    for (int it = 0; it < g.n; ++it)
      for (int x = 0; x < g.n; ++x)
        if (reach >> x & 1u) reach |= succ[x];
    bool ok = false;
    for (int x = 0; x < g.n; ++x)
      if ((reach >> x & 1u) && !(h >> x & 1u) && out[x] < 2) ok = true;
    if (!ok) return false;
  }
  return true;
}

int edges_in(const UGraph& g, unsigned m) {
  int c = 0;
  for (auto [u, v] : g.edges) c += (m >> u & 1u) && (m >> v & 1u);
  return c;
}

bool oracle_c0(const UGraph& g) {
  for (unsigned m = 1; m < (1u << g.n); ++m)
    if (2 * std::popcount(m) - edges_in(g, m) < 0) return false;
  return true;
}

bool oracle_cf(const UGraph& g) {
  for (unsigned m = 1; m < (1u << g.n); ++m)
    if (2 * std::popcount(m) - edges_in(g, m) < std::log(double(std::popcount(m))))
      return false;
  return true;
}

// The order by its definition: every subgraph containing h, edge subsets
// included.
bool oracle_order(const UGraph& g, unsigned h, bool strict) {
  int dh = 2 * std::popcount(h) - edges_in(g, h);
  for (unsigned s = 0; s < (1u << g.n); ++s) {
    if ((s & h) != h) continue;
    std::vector<std::pair<int, int>> optional_edges;
    int forced = 0;
    for (auto [u, v] : g.edges) {
      bool in_s = (s >> u & 1u) && (s >> v & 1u);
      bool in_h = (h >> u & 1u) && (h >> v & 1u);
      if (in_h) ++forced;
      else if (in_s) optional_edges.emplace_back(u, v);
    }
    for (unsigned e = 0; e < (1u << optional_edges.size()); ++e) {
      if (s == h && e == 0) continue;  // G' = G
      int d = 2 * std::popcount(s) - forced - std::popcount(e);
      if (strict ? d <= dh : d < dh) return false;
    }
  }
  return true;
}

VertexSet mask_set(unsigned m, int n) {
  VertexSet v;
  for (int i = 0; i < n; ++i)
    if (m >> i & 1u) v.push_back(i);
  return v;
}

std::vector<Structure> reps_upto(int n) {
  std::vector<Structure> out;
  for (int k = 1; k <= n; ++k)
    for (auto& g : catalogs::graph_representatives(k)) out.push_back(g);
  return out;
}

}  // namespace

TEST_SUITE("orientations") {

TEST_CASE("predimension examples") {
  CHECK(predimension(bowtie()) == 4);
  CHECK(predimension(complete_graph(5)) == 0);
  CHECK(predimension(complete_graph(6)) == -3);
  CHECK(predimension(make_graph(0, {})) == 0);
  CHECK_THROWS_AS(predimension(make_chain(3)), InvalidInput);
}

TEST_CASE("class membership examples") {
  CHECK(class_membership(bowtie(), DeltaClass::C0).member);
  auto k6 = class_membership(ug(complete_graph(6)), DeltaClass::C0);
  CHECK_FALSE(k6.member);
  CHECK(*k6.violating == VertexSet{0, 1, 2, 3, 4, 5});
  CHECK(class_membership(ug(make_graph(1, {})), DeltaClass::CF).member);

  // K5 has delta 0 < ln 5 and K4 has delta 2 >= ln 4
  auto k5 = class_membership(ug(complete_graph(5)), DeltaClass::CF);
  CHECK_FALSE(k5.member);
  CHECK(*k5.violating == VertexSet{0, 1, 2, 3, 4});
  CHECK(class_membership(ug(complete_graph(4)), DeltaClass::CF).member);
  // base 2: K4 sits exactly on the bound
  CHECK(class_membership(ug(complete_graph(4)), DeltaClass::CF, 2.0).member);
  CHECK_FALSE(class_membership(ug(complete_graph(4)), DeltaClass::CF, 1.5).member);
  CHECK_THROWS_AS(class_membership(ug(make_graph(13, {})), DeltaClass::C0), BoundExceeded);
  CHECK_THROWS_AS(class_membership(ug(make_graph(2, {})), DeltaClass::CF, 1.0), InvalidInput);
}

TEST_CASE("membership agrees with brute force on small graphs") {
  for (const auto& s : reps_upto(6)) {
    auto g = ug(s);
    CHECK(class_membership(g, DeltaClass::C0).member == oracle_c0(g));
    CHECK(class_membership(g, DeltaClass::CF).member == oracle_cf(g));
  }
}

TEST_CASE("orientation examples") {
  auto k5 = find_2orientation(ug(complete_graph(5)));
  REQUIRE(k5);
  CHECK(k5->is_2orientation());
  for (int d : k5->outdegrees()) CHECK(d == 2);
  CHECK(k5->roots().empty());
  CHECK_FALSE(find_2orientation(ug(complete_graph(6))));

  auto p = ug(make_graph(3, {{0, 1}, {1, 2}}));
  auto o = find_2orientation(p, VertexSet{1});
  REQUIRE(o);
  CHECK(o->arcs == std::vector<std::pair<int, int>>{{0, 1}, {2, 1}});
  CHECK(o->successor_closed({1}));
  int closed_count = 0;
  all_orientations(p, [&](const std::vector<int>& t) { closed_count += closed_under(p, t, 0b010); });
  CHECK(closed_count == 1);
}

TEST_CASE("orientable exactly when in C0, with delta the root multiplicity") {
  int n_graphs = 0;
  for (const auto& s : reps_upto(6)) {
    auto g = ug(s);
    ++n_graphs;
    auto o = find_2orientation(g);
    CHECK(o.has_value() == class_membership(g, DeltaClass::C0).member);
    if (g.n <= 5) {
      bool any = false;
      all_orientations(g, [&](const std::vector<int>&) { any = true; });
      CHECK(any == o.has_value());
    }
    if (o) {
      CHECK(o->is_2orientation());
      CHECK(o->multiplicity_sum() == predimension(g));
    }
  }
  CHECK(n_graphs == 1 + 2 + 4 + 11 + 34 + 156);
}

TEST_CASE("closed orientations against brute force") {
  for (const auto& s : reps_upto(5)) {
    auto g = ug(s);
    bool c0 = oracle_c0(g);
    for (unsigned h = 0; h < (1u << g.n); ++h) {
      bool any = false, any_d = false;
      all_orientations(g, [&](const std::vector<int>& t) {
        any = any || closed_under(g, t, h);
        any_d = any_d || d_closed_under(g, t, h);
      });
      auto hs = mask_set(h, g.n);
      auto o = find_2orientation(g, hs);
      CHECK(o.has_value() == any);
      if (o) CHECK(o->successor_closed(hs));
      auto od = find_2orientation(g, hs, true);
      CHECK(od.has_value() == any_d);
      if (od) CHECK(od->successor_d_closed(hs));
      // <=_s bases of C0 graphs admit closed orientations
      if (c0 && substructure_order(g, hs, SubOrder::LeqS).holds) CHECK(any);
      // in C_F, <=_d is the same as having a d-closed orientation
      if (oracle_cf(g))
        CHECK(substructure_order(g, hs, SubOrder::LeqD).holds == any_d);
    }
  }
}

TEST_CASE("substructure order examples") {
  auto e = ug(make_graph(2, {{0, 1}}));
  CHECK(substructure_order(e, {0, 1}, SubOrder::LeqS).holds);
  CHECK(substructure_order(e, {0, 1}, SubOrder::LeqD).holds);
  CHECK(substructure_order(e, {0}, SubOrder::LeqD).holds);

  auto k5 = ug(complete_graph(5));
  CHECK(predimension(k5.induced({0, 1})) == 3);
  auto r = substructure_order(k5, {0, 1}, SubOrder::LeqS);
  CHECK_FALSE(r.holds);
  CHECK(*r.witness == VertexSet{0, 1, 2, 3});
  CHECK_FALSE(substructure_order(k5, {0, 1}, SubOrder::LeqD).holds);
}

TEST_CASE("substructure order matches its definition over edge subsets") {
  for (const auto& s : reps_upto(5)) {
    auto g = ug(s);
    for (unsigned h = 0; h < (1u << g.n); ++h) {
      auto hs = mask_set(h, g.n);
      CHECK(substructure_order(g, hs, SubOrder::LeqS).holds == oracle_order(g, h, false));
      CHECK(substructure_order(g, hs, SubOrder::LeqD).holds == oracle_order(g, h, true));
    }
  }
}

TEST_CASE("free amalgams over <=_s bases stay in C0") {
  int instances = 0;
  std::vector<Structure> sides;
  for (const auto& s : reps_upto(4))
    if (oracle_c0(ug(s))) sides.push_back(s);
  for (const auto& b1 : sides) {
    auto g1 = ug(b1);
    for (unsigned x = 1; x < (1u << g1.n); ++x) {
      if (std::popcount(x) > 2) continue;
      auto xs = mask_set(x, g1.n);
      if (!substructure_order(g1, xs, SubOrder::LeqS).holds) continue;
      auto base = induced_substructure(b1, xs).s;
      for (const auto& b2 : sides) {
        auto g2 = ug(b2);
        for (const auto& em : enumerate_embeddings(base, b2)) {
          if (!substructure_order(g2, image_of(em.map), SubOrder::LeqS).holds) continue;
          AmalgamationProblem p{base, b1, b2, xs, em.map};
          auto am = free_amalgam(p);
          auto o = orient_free_amalgam(p, am);
          REQUIRE(o);
          CHECK(o->is_2orientation());
          CHECK(class_membership(ug(am.c), DeltaClass::C0).member);
          ++instances;
        }
      }
    }
  }
  CHECK(instances > 100);
}

}  // TEST_SUITE
