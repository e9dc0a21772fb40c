#include "ramsey/eppa.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace ramsey {

namespace {

void require_inclusion(const Structure& small, const Structure& witness,
                       const VertexMap& inc) {
  if (!small.lang.same_symbols(witness.lang))
    throw InvalidInput("eppa: small structure and witness differ in language");
  if (static_cast<int>(inc.size()) != small.n ||
      !is_embedding(inc, small, witness))
    throw InvalidInput("eppa: inclusion is not an embedding");
}

// Automorphism search with forward checking for relational structures of
// arity at most two; domains are bitsets. Higher arities are checked at the
// leaves; structures with functions use the generic embedding search.
class AutSearch {
 public:
  AutSearch(const Structure& w, std::int64_t max_nodes)
      : w_(w), n_(w.n), words_((w.n + 63) / 64),
        budget_(max_nodes, "automorphism search") {
    std::vector<std::vector<char>> un;
    for (std::size_t r = 0; r < w.rel.size(); ++r) {
      int ar = w.lang.relations[r].arity;
      if (ar > 2) {
        leaf_check_ = true;
        continue;
      }
      if (ar == 2) {
        Matrix m{std::vector<char>(n_ * n_, 0), bits(), bits()};
        for (const auto& t : w.rel[r]) {
          m.adj[t[0] * n_ + t[1]] = 1;
          set(m.in, t[1], t[0]);   // in[y] holds x with x -> y
          set(m.out, t[0], t[1]);  // out[y] holds x with y -> x
        }
        bin_.push_back(std::move(m));
      } else if (ar == 1) {
        std::vector<char> m(n_, 0);
        for (const auto& t : w.rel[r]) m[t[0]] = 1;
        un.push_back(std::move(m));
      }
      // nullary relations are fixed by every permutation
    }
    inv_.assign(n_, {});
    for (int v = 0; v < n_; ++v) {
      for (const auto& m : un) inv_[v].push_back(m[v]);
      for (const auto& m : bin_) {
        int out = 0, in = 0;
        for (int u = 0; u < n_; ++u) {
          out += m.adj[v * n_ + u];
          in += m.adj[u * n_ + v];
        }
        inv_[v].push_back(m.adj[v * n_ + v]);
        inv_[v].push_back(out);
        inv_[v].push_back(in);
      }
    }
  }

  std::optional<VertexMap> run(const VertexSet& from, const VertexMap& to) {
    std::vector<std::uint64_t> dom(n_ * words_, 0);
    for (int v = 0; v < n_; ++v)
      for (int y = 0; y < n_; ++y)
        if (inv_[v] == inv_[y]) dom[v * words_ + y / 64] |= 1ull << (y % 64);
    f_.assign(n_, -1);
    for (std::size_t i = 0; i < from.size(); ++i) {
      int v = from[i], y = to[i];
      if (!(dom[v * words_ + y / 64] >> (y % 64) & 1)) return std::nullopt;
      std::fill_n(dom.begin() + v * words_, words_, 0);
      dom[v * words_ + y / 64] = 1ull << (y % 64);
    }
    if (go(dom, 0)) return f_;
    return std::nullopt;
  }

 private:
  struct Matrix {
    std::vector<char> adj;
    std::vector<std::uint64_t> in, out;
  };

  std::vector<std::uint64_t> bits() const {
    return std::vector<std::uint64_t>(n_ * words_, 0);
  }
  void set(std::vector<std::uint64_t>& b, int row, int col) const {
    b[row * words_ + col / 64] |= 1ull << (col % 64);
  }
  int count(const std::vector<std::uint64_t>& d, int v) const {
    int c = 0;
    for (int k = 0; k < words_; ++k) c += std::popcount(d[v * words_ + k]);
    return c;
  }

  bool go(const std::vector<std::uint64_t>& dom, int depth) {
    if (depth == n_) return !leaf_check_ || is_embedding(f_, w_, w_);
    int v = -1, best = 0;
    for (int u = 0; u < n_; ++u) {
      if (f_[u] >= 0) continue;
      int c = count(dom, u);
      if (v < 0 || c < best) {
        v = u;
        best = c;
      }
    }
    std::vector<std::uint64_t> next(dom.size());
    for (int y = 0; y < n_; ++y) {
      if (!(dom[v * words_ + y / 64] >> (y % 64) & 1)) continue;
      budget_.tick();
      f_[v] = y;
      bool dead = false;
      for (int u = 0; u < n_ && !dead; ++u) {
        if (f_[u] >= 0) continue;
        std::uint64_t any = 0;
        for (int k = 0; k < words_; ++k) {
          std::uint64_t d = dom[u * words_ + k];
          if (k == y / 64) d &= ~(1ull << (y % 64));
          for (const auto& m : bin_) {
            std::uint64_t in = m.in[y * words_ + k], out = m.out[y * words_ + k];
            d &= m.adj[u * n_ + v] ? in : ~in;
            d &= m.adj[v * n_ + u] ? out : ~out;
          }
          next[u * words_ + k] = d;
          any |= d;
        }
        dead = any == 0;
      }
      if (!dead && go(next, depth + 1)) return true;
      f_[v] = -1;
    }
    return false;
  }

  const Structure& w_;
  int n_;
  int words_;
  Budget budget_;
  bool leaf_check_ = false;
  std::vector<Matrix> bin_;
  std::vector<std::vector<int>> inv_;
  VertexMap f_;
};

// Some automorphism of w sending from[i] to to[i].
std::optional<VertexMap> extend_in(const Structure& w, const VertexSet& from,
                                   const VertexMap& to,
                                   std::int64_t max_nodes) {
  if (w.lang.relational()) return AutSearch(w, max_nodes).run(from, to);
  std::vector<std::vector<int>> cand(w.n);
  std::vector<int> all(w.n);
  for (int v = 0; v < w.n; ++v) all[v] = v;
  for (int v = 0; v < w.n; ++v) cand[v] = all;
  for (std::size_t i = 0; i < from.size(); ++i) cand[from[i]] = {to[i]};
  EmbeddingConstraints c;
  c.candidates = std::move(cand);
  std::optional<VertexMap> out;
  for_each_embedding(
      w, w, c,
      [&](const VertexMap& m) {
        out = m;
        return false;
      },
      max_nodes);
  return out;
}

std::optional<VertexMap> extend_partial(const EppaInstance& inst,
                                        const PartialAutomorphism& p,
                                        std::int64_t max_nodes) {
  VertexSet from;
  VertexMap to;
  for (std::size_t i = 0; i < p.domain.size(); ++i) {
    from.push_back(inst.inclusion[p.domain[i]]);
    to.push_back(inst.inclusion[p.map[i]]);
  }
  // candidates are indexed by witness vertex, so order does not matter
  return extend_in(inst.witness, from, to, max_nodes);
}

bool extends(const EppaInstance& inst, const PartialAutomorphism& p,
             const VertexMap& g) {
  if (static_cast<int>(g.size()) != inst.witness.n) return false;
  for (std::size_t i = 0; i < p.domain.size(); ++i)
    if (g[inst.inclusion[p.domain[i]]] != inst.inclusion[p.map[i]])
      return false;
  return true;
}

bool is_automorphism(const Structure& w, const VertexMap& g) {
  if (static_cast<int>(g.size()) != w.n) return false;
  return is_embedding(g, w, w);
}

}  // namespace

EppaReport is_eppa_witness(const EppaInstance& inst, std::int64_t max_nodes) {
  require_inclusion(inst.small, inst.witness, inst.inclusion);
  EppaReport rep;
  for (const auto& p : enumerate_partial_automorphisms(inst.small)) {
    auto g = extend_partial(inst, p, max_nodes);
    if (!g) {
      rep.verified = false;
      rep.failing = p;
      rep.table.clear();
      return rep;
    }
    rep.table[{p.domain, p.map}] = *g;
  }
  return rep;
}

CoherenceReport check_coherence(const EppaInstance& inst) {
  require_inclusion(inst.small, inst.witness, inst.inclusion);
  if (!inst.table) throw InvalidInput("eppa: no extension table given");
  const auto& table = *inst.table;
  auto parts = enumerate_partial_automorphisms(inst.small);
  auto lookup = [&](const PartialAutomorphism& p) -> const VertexMap& {
    auto it = table.find({p.domain, p.map});
    if (it == table.end()) throw IncompleteTable(p);
    return it->second;
  };

  CoherenceReport rep;
  for (const auto& p : parts) {
    const auto& g = lookup(p);
    if (!is_automorphism(inst.witness, g) || !extends(inst, p, g)) {
      rep.coherent = false;
      rep.kind = "not an extension";
      rep.f = rep.g = p;
      return rep;
    }
  }
  for (const auto& f : parts) {
    VertexSet range = image_of(f.map);
    for (const auto& g : parts) {
      if (g.domain != range) continue;
      PartialAutomorphism gf;
      gf.domain = f.domain;
      for (int y : f.map) {
        auto it = std::lower_bound(g.domain.begin(), g.domain.end(), y);
        gf.map.push_back(g.map[it - g.domain.begin()]);
      }
      if (lookup(gf) != compose(lookup(g), lookup(f))) {
        rep.coherent = false;
        rep.kind = "composition";
        rep.f = f;
        rep.g = g;
        return rep;
      }
    }
  }
  return rep;
}

FaithfulReport is_irreducible_faithful(const EppaInstance& inst,
                                       std::int64_t max_nodes) {
  require_inclusion(inst.small, inst.witness, inst.inclusion);
  VertexSet img = image_of(inst.inclusion);
  FaithfulReport rep;
  for (const auto& d : maximal_irreducible_subsets(inst.witness)) {
    std::vector<std::vector<int>> cand(inst.witness.n);
    for (int v = 0; v < inst.witness.n; ++v) {
      if (std::binary_search(d.begin(), d.end(), v)) {
        cand[v] = img;
      } else {
        cand[v].resize(inst.witness.n);
        for (int u = 0; u < inst.witness.n; ++u) cand[v][u] = u;
      }
    }
    EmbeddingConstraints c;
    c.candidates = std::move(cand);
    bool found = false;
    for_each_embedding(
        inst.witness, inst.witness, c,
        [&](const VertexMap&) {
          found = true;
          return false;
        },
        max_nodes);
    if (!found) {
      rep.faithful = false;
      rep.failing = d;
      return rep;
    }
  }
  return rep;
}

std::optional<Amalgam> amalgam_from_eppa(const AmalgamationProblem& p,
                                         const Structure& joint,
                                         const VertexMap& j1,
                                         const VertexMap& j2,
                                         const EppaInstance& witness,
                                         std::int64_t max_nodes) {
  check_problem(p);
  if (!is_embedding(j1, p.left, joint) || !is_embedding(j2, p.right, joint))
    throw InvalidInput("eppa amalgam: joint maps are not embeddings");
  require_inclusion(joint, witness.witness, witness.inclusion);

  // theta sends the left copy of the base onto the right copy.
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < p.base.n; ++a)
    pairs.emplace_back(witness.inclusion[j1[p.alpha1[a]]],
                       witness.inclusion[j2[p.alpha2[a]]]);
  std::sort(pairs.begin(), pairs.end());
  VertexSet from;
  VertexMap to;
  for (auto [x, y] : pairs) {
    from.push_back(x);
    to.push_back(y);
  }
  auto theta = extend_in(witness.witness, from, to, max_nodes);
  if (!theta) return std::nullopt;
  Amalgam am;
  am.c = witness.witness;
  am.beta1 = compose(*theta, compose(witness.inclusion, j1));
  am.beta2 = compose(witness.inclusion, j2);
  return am;
}

// ---------------------------------------------------------------------------

Language tournament_language() {
  Language l("oriented_graphs");
  l.add_relation("E", 2);
  return l;
}

void check_npartite_tournament(const Structure& a,
                               const std::vector<int>& parts) {
  int e = a.lang.relation_index("E");
  if (e < 0 || a.lang.relations[e].arity != 2 || !a.lang.functions.empty() ||
      a.lang.relations.size() != 1)
    throw NotNPartiteTournament("tournament: language must be exactly E/2");
  if (static_cast<int>(parts.size()) != a.n)
    throw NotNPartiteTournament("tournament: one part label per vertex needed");
  std::set<int> labels(parts.begin(), parts.end());
  if (labels.size() < 2)
    throw NotNPartiteTournament("tournament: at least two parts needed");
  for (int x = 0; x < a.n; ++x) {
    if (a.has_tuple(e, {x, x}))
      throw NotNPartiteTournament("tournament: loop at " + std::to_string(x));
    for (int y = x + 1; y < a.n; ++y) {
      bool xy = a.has_tuple(e, {x, y}), yx = a.has_tuple(e, {y, x});
      std::string pr = std::to_string(x) + "," + std::to_string(y);
      if (parts[x] == parts[y] && (xy || yx))
        throw NotNPartiteTournament("tournament: edge inside a part at " + pr);
      if (parts[x] != parts[y] && xy == yx)
        throw NotNPartiteTournament(
            "tournament: pair " + pr + " needs exactly one orientation");
    }
  }
}

NPartiteWitness npartite_tournament_witness(const Structure& a,
                                            const std::vector<int>& parts) {
  check_npartite_tournament(a, parts);
  int e = a.lang.relation_index("E");
  NPartiteWitness w;

  // Normalize: parts by increasing label, members by increasing vertex.
  std::map<int, std::vector<int>> by_part;
  for (int x = 0; x < a.n; ++x) by_part[parts[x]].push_back(x);
  std::size_t width = 0;
  for (auto& [lab, mem] : by_part) width = std::max(width, mem.size());
  int k = static_cast<int>(by_part.size() * width);
  w.padding = k - a.n;
  w.renumber.assign(a.n, -1);
  w.normalized_parts.assign(k, 0);
  std::vector<int> original(k, -1);
  int pi = 0;
  for (auto& [lab, mem] : by_part) {
    for (std::size_t j = 0; j < width; ++j) {
      int v = pi * static_cast<int>(width) + static_cast<int>(j);
      w.normalized_parts[v] = pi;
      if (j < mem.size()) {
        w.renumber[mem[j]] = v;
        original[v] = mem[j];
      }
    }
    ++pi;
  }
  w.normalized = Structure(tournament_language(), k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      if (x == y || w.normalized_parts[x] == w.normalized_parts[y]) continue;
      bool edge;
      if (original[x] >= 0 && original[y] >= 0)
        edge = a.has_tuple(e, {original[x], original[y]});
      else
        edge = x < y;
      if (edge) w.normalized.add_tuple(0, {x, y});
    }

  // Neighbourhoods and the bit of y in chi over N(x).
  std::vector<std::vector<int>> nb(k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (w.normalized_parts[x] != w.normalized_parts[y]) nb[x].push_back(y);
  auto bit = [&](int x, std::uint32_t chi, int y) -> int {
    auto it = std::lower_bound(nb[x].begin(), nb[x].end(), y);
    int pos = static_cast<int>(it - nb[x].begin());
    int len = static_cast<int>(nb[x].size());
    return (chi >> (len - 1 - pos)) & 1u;
  };
  if (!nb.empty() && nb[0].size() >= 30)
    throw CapExceeded("tournament witness: neighbourhood too large");

  std::vector<int> first(k + 1, 0);
  for (int x = 0; x < k; ++x) {
    first[x] = static_cast<int>(w.labels.size());
    std::uint32_t count = 1u << nb[x].size();
    for (std::uint32_t chi = 0; chi < count; ++chi) {
      w.labels.emplace_back(x, chi);
      w.b_parts.push_back(w.normalized_parts[x]);
    }
  }
  first[k] = static_cast<int>(w.labels.size());
  int nb_total = first[k];
  Limits lim;
  check_vertex_cap(nb_total, lim, "tournament witness");
  w.b = Structure(tournament_language(), nb_total);
  for (int i = 0; i < nb_total; ++i)
    for (int j = 0; j < nb_total; ++j) {
      auto [x, c] = w.labels[i];
      auto [x2, c2] = w.labels[j];
      if (w.normalized_parts[x] == w.normalized_parts[x2]) continue;
      int s = (bit(x, c, x2) + bit(x2, c2, x)) % 2;
      if ((x > x2 && s == 1) || (x < x2 && s == 0)) w.b.add_tuple(0, {i, j});
    }

  w.psi.assign(k, -1);
  for (int x = 0; x < k; ++x) {
    std::uint32_t chi = 0;
    int len = static_cast<int>(nb[x].size());
    for (int pos = 0; pos < len; ++pos) {
      int y = nb[x][pos];
      if (y < x && w.normalized.has_tuple(0, {x, y}))
        chi |= 1u << (len - 1 - pos);
    }
    w.psi[x] = first[x] + static_cast<int>(chi);
  }
  w.embedding = compose(w.psi, w.renumber);
  if (!is_embedding(w.psi, w.normalized, w.b))
    throw Error("tournament witness: psi failed to certify");
  check_npartite_tournament(w.b, w.b_parts);
  return w;
}

}  // namespace ramsey
