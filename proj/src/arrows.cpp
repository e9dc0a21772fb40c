#include "ramsey/arrows.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ramsey {

int ABCHypergraph::index_of(const VertexMap& e) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), e);
  if (it == vertices.end() || *it != e) return -1;
  return static_cast<int>(it - vertices.begin());
}

ABCHypergraph abc_hypergraph(const Structure& a, const Structure& b,
                             const Structure& c, std::int64_t max_nodes) {
  ABCHypergraph h;
  for (auto& e : enumerate_embeddings(a, c, {}, max_nodes))
    h.vertices.push_back(std::move(e.map));
  std::vector<VertexMap> ab;
  for (auto& e : enumerate_embeddings(a, b, {}, max_nodes))
    ab.push_back(std::move(e.map));
  h.emb_ab = static_cast<int>(ab.size());
  std::map<std::vector<int>, int> seen;
  for_each_embedding(
      b, c, {},
      [&](const VertexMap& e) {
        ++h.copies_of_b;
        std::vector<int> edge;
        for (const auto& f : ab) edge.push_back(h.index_of(compose(e, f)));
        std::sort(edge.begin(), edge.end());
        edge.erase(std::unique(edge.begin(), edge.end()), edge.end());
        auto [it, fresh] = seen.emplace(edge, static_cast<int>(h.edges.size()));
        if (fresh) {
          h.edges.push_back(std::move(edge));
          h.multiplicity.push_back(1);
          h.edge_copy.push_back(e);
        } else {
          ++h.multiplicity[it->second];
        }
        return true;
      },
      max_nodes);
  return h;
}

namespace {

// Searches for a coloring in which every hyperedge sees at least `need`
// colors. Components are solved independently in vertex order; within a
// component decisions go in increasing vertex order, smallest color first,
// never opening more than one fresh color. The first solution found is the
// lexicographically least one.
class ColorSearch {
 public:
  ColorSearch(const ABCHypergraph& h, int r, int need, std::int64_t max_nodes)
      : h_(h), r_(r), need_(need), budget_(max_nodes, "arrow search") {
    const int n = static_cast<int>(h.vertices.size());
    inc_.resize(n);
    for (std::size_t e = 0; e < h.edges.size(); ++e)
      for (int v : h.edges[e]) inc_[v].push_back(static_cast<int>(e));
    color_.assign(n, -1);
    dom_.assign(n, r >= 64 ? ~0ULL : ((1ULL << r) - 1));
    cnt_.assign(h.edges.size() * r, 0);
    distinct_.assign(h.edges.size(), 0);
    open_.resize(h.edges.size());
    for (std::size_t e = 0; e < h.edges.size(); ++e)
      open_[e] = static_cast<int>(h.edges[e].size());
    used_.assign(r, 0);
  }

  std::optional<std::vector<int>> run() {
    for (std::size_t e = 0; e < h_.edges.size(); ++e)
      if (open_[e] < need_) return std::nullopt;
    const int n = static_cast<int>(h_.vertices.size());
    // Components by union-find over the hyperedges.
    std::vector<int> uf(n);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    for (const auto& e : h_.edges)
      for (std::size_t i = 1; i < e.size(); ++i) uf[find(e[i])] = find(e[0]);
    std::map<int, std::vector<int>> comps;
    for (int v = 0; v < n; ++v) comps[find(v)].push_back(v);
    std::vector<std::vector<int>> order;
    for (auto& [root, vs] : comps) order.push_back(std::move(vs));
    std::sort(order.begin(), order.end());
    for (const auto& vs : order) {
      std::fill(used_.begin(), used_.end(), 0);
      if (!solve(vs)) return std::nullopt;
    }
    return color_;
  }

  std::int64_t nodes() const { return budget_.used(); }

 private:
  struct Op {
    int v;
    int color;            // >= 0: assignment
    std::uint64_t old;    // otherwise previous domain
  };

  std::uint64_t edge_colors(int e) const {
    std::uint64_t m = 0;
    for (int c = 0; c < r_; ++c)
      if (cnt_[static_cast<std::size_t>(e) * r_ + c]) m |= 1ULL << c;
    return m;
  }

  bool assign(int v, int c, std::vector<int>& queue) {
    trail_.push_back({v, c, 0});
    color_[v] = c;
    ++used_[c];
    bool ok = true;
    for (int e : inc_[v]) {
      if (cnt_[static_cast<std::size_t>(e) * r_ + c]++ == 0) ++distinct_[e];
      --open_[e];
      if (distinct_[e] + open_[e] < need_) ok = false;
      else if (open_[e] > 0 && distinct_[e] + open_[e] == need_)
        queue.push_back(e);
    }
    return ok;
  }

  bool propagate(std::vector<int>& queue) {
    while (!queue.empty()) {
      int e = queue.back();
      queue.pop_back();
      if (open_[e] == 0 || distinct_[e] + open_[e] != need_) continue;
      // Tight: every open vertex must bring a color new to the edge.
      std::uint64_t seen = edge_colors(e);
      for (int u : h_.edges[e]) {
        if (color_[u] >= 0) continue;
        std::uint64_t d = dom_[u] & ~seen;
        if (d == dom_[u]) continue;
        trail_.push_back({u, -1, dom_[u]});
        dom_[u] = d;
        if (d == 0) return false;
        if ((d & (d - 1)) == 0) {
          budget_.tick();
          if (!assign(u, __builtin_ctzll(d), queue)) return false;
        }
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      Op op = trail_.back();
      trail_.pop_back();
      if (op.color < 0) {
        dom_[op.v] = op.old;
        continue;
      }
      for (int e : inc_[op.v]) {
        if (--cnt_[static_cast<std::size_t>(e) * r_ + op.color] == 0)
          --distinct_[e];
        ++open_[e];
      }
      --used_[op.color];
      color_[op.v] = -1;
    }
  }

  bool solve(const std::vector<int>& vs) {
    struct Level {
      std::size_t pos;
      std::size_t mark;
      int next;  // next color to try
    };
    std::vector<Level> stack;
    std::size_t pos = 0;
    auto advance = [&](std::size_t p) {
      while (p < vs.size() && color_[vs[p]] >= 0) ++p;
      return p;
    };
    pos = advance(0);
    int resume = 0;
    while (true) {
      if (pos == vs.size()) return true;
      int v = vs[pos];
      int fresh = 0;
      while (fresh < r_ && used_[fresh]) ++fresh;
      bool placed = false;
      std::size_t mark = trail_.size();
      for (int c = resume; c < r_ && c <= fresh; ++c) {
        if (!((dom_[v] >> c) & 1)) continue;
        budget_.tick();
        std::vector<int> queue;
        if (assign(v, c, queue) && propagate(queue)) {
          stack.push_back({pos, mark, c + 1});
          placed = true;
          break;
        }
        undo(mark);
      }
      if (placed) {
        resume = 0;
        pos = advance(pos + 1);
        continue;
      }
      if (stack.empty()) return false;
      Level top = stack.back();
      stack.pop_back();
      undo(top.mark);
      pos = top.pos;
      resume = top.next;
    }
  }

  const ABCHypergraph& h_;
  int r_;
  int need_;
  Budget budget_;
  std::vector<std::vector<int>> inc_;
  std::vector<int> color_;
  std::vector<std::uint64_t> dom_;
  std::vector<int> cnt_;
  std::vector<int> distinct_;
  std::vector<int> open_;
  std::vector<int> used_;
  std::vector<Op> trail_;
};

}  // namespace

ArrowResult check_arrow(const ABCHypergraph& h, int r, std::int64_t max_nodes) {
  if (r < 1 || r > 64) throw InvalidInput("number of colors must be 1..64");
  ArrowResult res;
  res.vertices = static_cast<int>(h.vertices.size());
  res.edges = static_cast<int>(h.edges.size());
  ColorSearch search(h, r, 2, max_nodes);
  auto col = search.run();
  res.nodes = search.nodes();
  res.holds = !col.has_value();
  if (col) res.witness = ColoringWitness{r, std::move(*col)};
  return res;
}

ArrowResult check_arrow(const Structure& a, const Structure& b,
                        const Structure& c, int r, std::int64_t max_nodes) {
  if (r < 1 || r > 64) throw InvalidInput("number of colors must be 1..64");
  return check_arrow(abc_hypergraph(a, b, c, max_nodes), r, max_nodes);
}

std::optional<int> monochromatic_edge(const ABCHypergraph& h,
                                      const std::vector<int>& colors) {
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    std::set<int> seen;
    for (int v : h.edges[e]) seen.insert(colors.at(v));
    if (seen.size() <= 1) return static_cast<int>(e);
  }
  return std::nullopt;
}

bool every_edge_exceeds(const ABCHypergraph& h, const std::vector<int>& colors,
                        int t) {
  for (const auto& e : h.edges) {
    std::set<int> seen;
    for (int v : e) seen.insert(colors.at(v));
    if (static_cast<int>(seen.size()) <= t) return false;
  }
  return true;
}

std::optional<ColoringWitness> automorphism_coloring(const Structure& a,
                                                     const ABCHypergraph& h) {
  auto aut = automorphisms(a);
  if (aut.size() <= 1) return std::nullopt;
  ColoringWitness w{2, std::vector<int>(h.vertices.size(), 0)};
  for (std::size_t i = 0; i < h.vertices.size(); ++i)
    for (const auto& g : aut)
      if (compose(h.vertices[i], g.map) < h.vertices[i]) w.colors[i] = 1;
  return w;
}

DegreeResult ramsey_degree_in(const Structure& a, const Structure& b,
                              const Structure& c, int r,
                              std::int64_t max_nodes) {
  if (r < 1 || r > 64) throw InvalidInput("number of colors must be 1..64");
  auto h = abc_hypergraph(a, b, c, max_nodes);
  if (h.edges.empty()) throw InvalidInput("c contains no copy of b");
  DegreeResult out;
  out.automorphisms = static_cast<int>(automorphisms(a).size());
  for (int t = 1;; ++t) {
    ColorSearch search(h, r, t + 1, max_nodes);
    auto col = search.run();
    if (!col) {
      out.t = t;
      return out;
    }
    out.lower_witness = ColoringWitness{r, std::move(*col)};
  }
}

std::vector<BigInt> tangent_numbers(int k) {
  if (k < 1) throw InvalidInput("tangent numbers need k >= 1");
  // Binomials up to 2k - 2.
  std::vector<std::vector<BigInt>> binom(2 * k, std::vector<BigInt>(2 * k, 0));
  for (int n = 0; n < 2 * k; ++n) {
    binom[n][0] = 1;
    for (int j = 1; j <= n; ++j) binom[n][j] = binom[n - 1][j - 1] + binom[n - 1][j];
  }
  std::vector<BigInt> t(k + 1, 0);
  t[1] = 1;
  for (int m = 2; m <= k; ++m)
    for (int l = 1; l < m; ++l) t[m] += binom[2 * m - 2][2 * l - 1] * t[l] * t[m - l];
  return {t.begin() + 1, t.end()};
}

BigInt clique_big_degree(int k) {
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return tangent_numbers(k).back() * f;
}

TypeTree tree_of_types(const Structure& s, int depth) {
  if (!s.lang.relational())
    throw InvalidInput("tree of types needs a relational structure");
  if (depth < 0 || depth > s.n) throw InvalidInput("depth out of range");
  // u and v have the same type over {0..m-1}: swapping them maps every
  // tuple inside {0..m-1, u} onto a tuple inside {0..m-1, v}.
  auto same_type = [&](int m, int u, int v) {
    auto inside = [&](const Tuple& t, int x) {
      bool has = false;
      for (int y : t) {
        if (y == x) has = true;
        else if (y >= m) return false;
      }
      return has;
    };
    auto moved = [&](const Tuple& t, int from, int to) {
      Tuple o = t;
      for (int& y : o)
        if (y == from) y = to;
      return o;
    };
    for (std::size_t r = 0; r < s.rel.size(); ++r)
      for (const auto& t : s.rel[r]) {
        if (inside(t, u) && !s.rel[r].count(moved(t, u, v))) return false;
        if (inside(t, v) && !s.rel[r].count(moved(t, v, u))) return false;
      }
    return true;
  };
  TypeTree tree;
  for (int m = 0; m <= depth; ++m) {
    std::vector<VertexSet> classes;
    for (int v = m; v < s.n; ++v) {
      bool placed = false;
      for (auto& c : classes)
        if (same_type(m, c.front(), v)) {
          c.push_back(v);
          placed = true;
          break;
        }
      if (!placed) classes.push_back({v});
    }
    std::vector<int> parent(classes.size(), -1);
    if (m > 0)
      for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = 0; j < tree.levels[m - 1].size(); ++j) {
          const auto& up = tree.levels[m - 1][j];
          if (std::binary_search(up.begin(), up.end(), classes[i].front()))
            parent[i] = static_cast<int>(j);
        }
    tree.levels.push_back(std::move(classes));
    tree.parent.push_back(std::move(parent));
  }
  return tree;
}

}  // namespace ramsey
