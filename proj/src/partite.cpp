#include "ramsey/partite.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <set>

namespace ramsey {

namespace {

Tuple map_tuple(const VertexMap& f, const Tuple& t) {
  Tuple out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = f[t[i]];
  return out;
}

/// Visits every index vector in [0,sizes[0]) x ... in lexicographic order.
void for_each_product(const std::vector<int>& sizes,
                      const std::function<void(const std::vector<int>&)>& f) {
  for (int s : sizes)
    if (s == 0) return;
  std::vector<int> idx(sizes.size(), 0);
  while (true) {
    f(idx);
    int i = static_cast<int>(sizes.size()) - 1;
    while (i >= 0 && ++idx[i] == sizes[i]) idx[i--] = 0;
    if (i < 0) return;
  }
}

std::int64_t checked_pow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (b != 0 && r > (std::int64_t{1} << 50) / b)
      throw CapExceeded("power: partition size overflows");
    r *= b;
  }
  return r;
}

std::string predicate_name(int p) { return "P" + std::to_string(p); }

bool standard_order(const Structure& s) {
  int lt = s.lang.relation_index("<");
  if (lt < 0 || s.lang.relations[lt].arity != 2) return false;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      if (s.has_tuple(lt, {i, j}) != (i < j)) return false;
  return s.rel[lt].size() == static_cast<std::size_t>(s.n) * (s.n - 1) / 2;
}

VertexMap invert_on(const VertexMap& f, int target_n) {
  VertexMap inv(target_n, -1);
  for (int v = 0; v < static_cast<int>(f.size()); ++v) inv[f[v]] = v;
  return inv;
}

std::vector<VertexMap> increasing_injections(int k, int n) {
  std::vector<VertexMap> out;
  if (k > n) return out;
  VertexMap c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return out;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

void add_mapped_content(Structure& c, const Structure& b, const VertexMap& f) {
  for (std::size_t r = 0; r < b.rel.size(); ++r)
    for (const auto& t : b.rel[r]) c.add_tuple(static_cast<int>(r), map_tuple(f, t));
  for (std::size_t fi = 0; fi < b.fun.size(); ++fi)
    for (const auto& [args, vals] : b.fun[fi]) {
      auto a2 = map_tuple(f, args);
      for (int v : vals) c.add_value(static_cast<int>(fi), a2, f[v]);
    }
}

PartiteSystem disjoint_copies(const Structure& b, const std::vector<VertexMap>& betas,
                              int predicates, std::vector<VertexMap>& copies) {
  PartiteSystem p;
  p.s = Structure(b.lang, static_cast<int>(betas.size()) * b.n);
  p.predicates = predicates;
  p.proj.resize(p.s.n);
  copies.clear();
  for (std::size_t k = 0; k < betas.size(); ++k) {
    VertexMap g(b.n);
    for (int v = 0; v < b.n; ++v) {
      g[v] = static_cast<int>(k) * b.n + v;
      p.proj[g[v]] = betas[k][v];
    }
    add_mapped_content(p.s, b, g);
    copies.push_back(std::move(g));
  }
  return p;
}

std::vector<VertexMap> maps_of(const std::vector<EmbeddingMap>& es) {
  std::vector<VertexMap> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(e.map);
  return out;
}

}  // namespace

// --- Partite systems ---------------------------------------------------------

std::vector<VertexSet> PartiteSystem::partitions() const {
  std::vector<VertexSet> parts(predicates);
  for (int v = 0; v < s.n; ++v) parts[proj[v]].push_back(v);
  return parts;
}

Structure PartiteSystem::with_predicates() const {
  Structure t = s;
  for (int p = 0; p < predicates; ++p) {
    std::string name = predicate_name(p);
    while (t.lang.has_symbol(name)) name += "_";
    t.extend_relation(name, 1);
  }
  const int base = static_cast<int>(s.rel.size());
  for (int v = 0; v < s.n; ++v) t.add_tuple(base + proj[v], {v});
  return t;
}

std::vector<std::vector<int>> PartiteSystem::candidates_for(
    const std::vector<int>& from_proj) const {
  auto parts = partitions();
  std::vector<std::vector<int>> c;
  c.reserve(from_proj.size());
  for (int p : from_proj) {
    if (p < 0 || p >= predicates) c.emplace_back();
    else c.push_back(parts[p]);
  }
  return c;
}

bool PartiteSystem::transversal() const {
  std::vector<char> seen(predicates, 0);
  for (int p : proj) {
    if (seen[p]) return false;
    seen[p] = 1;
  }
  return true;
}

PartiteSystem transversal_system(const Structure& a, const VertexMap& alpha,
                                 int predicates) {
  if (static_cast<int>(alpha.size()) != a.n)
    throw InvalidInput("projection has wrong length");
  PartiteSystem p{a, alpha, predicates};
  if (!p.transversal()) throw InvalidInput("system is not transversal");
  return p;
}

bool u_transversal(const PartiteSystem& p, const SymbolSet& u) {
  auto distinct = [&](const std::set<int>& vals) {
    std::set<int> seen;
    for (int v : vals)
      if (!seen.insert(p.proj[v]).second) return false;
    return true;
  };
  for (const auto& sym : u) {
    int f = p.s.lang.function_index(sym);
    if (f >= 0) {
      for (const auto& [args, vals] : p.s.fun[f])
        if (!distinct(vals)) return false;
      continue;
    }
    int r = p.s.lang.relation_index(sym);
    if (r < 0) throw InvalidInput("unknown U symbol '" + sym + "'");
    std::map<Tuple, std::set<int>> vals;
    for (const auto& t : p.s.rel[r])
      vals[Tuple(t.begin(), t.end() - 1)].insert(t.back());
    for (const auto& [args, vs] : vals)
      if (!distinct(vs)) return false;
  }
  return true;
}

PartiteReport validate_partite(const PartiteSystem& b, const Structure* over,
                               const SymbolSet* u) {
  PartiteReport r;
  if (static_cast<int>(b.proj.size()) != b.s.n) {
    r.valid = false;
    r.problems.push_back("projection length differs from vertex count");
    return r;
  }
  for (int v = 0; v < b.s.n; ++v)
    if (b.proj[v] < 0 || b.proj[v] >= b.predicates) {
      r.valid = false;
      r.problems.push_back("vertex " + std::to_string(v) +
                           " has no predicate");
      return r;
    }
  r.transversal = b.transversal();
  auto spread = [&](const Tuple& t) {
    std::set<int> ps;
    for (int v : t)
      if (!ps.insert(b.proj[v]).second) return false;
    return true;
  };
  for (std::size_t ri = 0; ri < b.s.rel.size(); ++ri)
    for (const auto& t : b.s.rel[ri])
      if (!spread(t)) {
        r.valid = false;
        r.problems.push_back("tuple of '" + b.s.lang.relations[ri].name +
                             "' meets a partition twice");
      }
  for (std::size_t fi = 0; fi < b.s.fun.size(); ++fi)
    for (const auto& [args, vals] : b.s.fun[fi])
      for (int v : vals) {
        Tuple t = args;
        t.push_back(v);
        if (!spread(t)) {
          r.valid = false;
          r.problems.push_back("entry of '" + b.s.lang.functions[fi].name +
                               "' meets a partition twice");
        }
      }
  if (!r.valid) return r;
  if (over) {
    if (over->n != b.predicates) {
      r.projection_ok = false;
      r.problems.push_back("predicate count differs from target size");
    } else if (!is_homomorphism_embedding(b.proj, b.s, *over)) {
      r.projection_ok = false;
      r.problems.push_back("projection is not a homomorphism-embedding");
    }
  }
  if (u) {
    r.u_transversal = u_transversal(b, *u);
    if (!r.u_transversal) r.problems.push_back("not U-transversal");
  }
  r.valid = r.projection_ok && r.u_transversal;
  return r;
}

// --- Powers --------------------------------------------------------------------

PowerIndex::PowerIndex(const PartiteSystem& b, int n) : n_(n) {
  if (n < 1) throw InvalidInput("exponent must be positive");
  parts_ = b.partitions();
  rank_.assign(b.s.n, 0);
  part_of_b_ = b.proj;
  for (const auto& part : parts_)
    for (std::size_t i = 0; i < part.size(); ++i) rank_[part[i]] = static_cast<int>(i);
  for (const auto& part : parts_) {
    offset_.push_back(total_);
    radix_pow_.push_back(checked_pow(static_cast<std::int64_t>(part.size()), n));
    total_ += radix_pow_.back();
    if (total_ > (std::int64_t{1} << 40))
      throw CapExceeded("power: vertex count overflows");
  }
}

int PowerIndex::encode(int p, const std::vector<int>& coords) const {
  const std::int64_t s = static_cast<std::int64_t>(parts_[p].size());
  std::int64_t idx = 0;
  for (int x : coords) idx = idx * s + rank_[x];
  return static_cast<int>(offset_[p] + idx);
}

int PowerIndex::partition_of(int v) const {
  auto it = std::upper_bound(offset_.begin(), offset_.end(), v);
  int p = static_cast<int>(it - offset_.begin()) - 1;
  while (p > 0 && radix_pow_[p] == 0) --p;
  return p;
}

std::vector<int> PowerIndex::decode(int v) const {
  // skip empty partitions sharing the same offset
  int p = static_cast<int>(std::upper_bound(offset_.begin(), offset_.end(), v) -
                           offset_.begin()) - 1;
  while (radix_pow_[p] == 0) --p;
  std::int64_t idx = v - offset_[p];
  const std::int64_t s = static_cast<std::int64_t>(parts_[p].size());
  std::vector<int> coords(n_);
  for (int i = n_ - 1; i >= 0; --i) {
    coords[i] = parts_[p][idx % s];
    idx /= s;
  }
  return coords;
}

PartiteSystem power(const PartiteSystem& b, int n, const Limits& lim) {
  PowerIndex ix(b, n);
  check_vertex_cap(ix.size(), lim, "power");
  PartiteSystem c;
  c.s = Structure(b.s.lang, static_cast<int>(ix.size()));
  c.predicates = b.predicates;
  c.proj.resize(c.s.n);
  for (int v = 0; v < c.s.n; ++v) c.proj[v] = ix.partition_of(v);
  Budget budget(lim.max_nodes, "power");

  for (std::size_t r = 0; r < b.s.rel.size(); ++r) {
    std::map<Tuple, std::vector<const Tuple*>> groups;
    for (const auto& t : b.s.rel[r]) groups[map_tuple(b.proj, t)].push_back(&t);
    for (const auto& [pat, ts] : groups) {
      std::vector<int> sizes(n, static_cast<int>(ts.size()));
      for_each_product(sizes, [&](const std::vector<int>& pick) {
        budget.tick();
        Tuple t(pat.size());
        std::vector<int> coords(n);
        for (std::size_t j = 0; j < pat.size(); ++j) {
          for (int i = 0; i < n; ++i) coords[i] = (*ts[pick[i]])[j];
          t[j] = ix.encode(pat[j], coords);
        }
        c.s.add_tuple(static_cast<int>(r), std::move(t));
      });
    }
  }

  for (std::size_t fi = 0; fi < b.s.fun.size(); ++fi) {
    using Entry = std::pair<const Tuple*, const std::set<int>*>;
    std::map<Tuple, std::vector<Entry>> groups;
    for (const auto& [args, vals] : b.s.fun[fi])
      groups[map_tuple(b.proj, args)].push_back({&args, &vals});
    for (const auto& [pat, es] : groups) {
      std::vector<int> sizes(n, static_cast<int>(es.size()));
      for_each_product(sizes, [&](const std::vector<int>& pick) {
        budget.tick();
        Tuple args(pat.size());
        std::vector<int> coords(n);
        for (std::size_t j = 0; j < pat.size(); ++j) {
          for (int i = 0; i < n; ++i) coords[i] = (*es[pick[i]].first)[j];
          args[j] = ix.encode(pat[j], coords);
        }
        // values stay inside one partition
        for (int q = 0; q < b.predicates; ++q) {
          std::vector<std::vector<int>> opts(n);
          for (int i = 0; i < n; ++i)
            for (int y : *es[pick[i]].second)
              if (b.proj[y] == q) opts[i].push_back(y);
          std::vector<int> osz(n);
          for (int i = 0; i < n; ++i) osz[i] = static_cast<int>(opts[i].size());
          for_each_product(osz, [&](const std::vector<int>& vp) {
            budget.tick();
            for (int i = 0; i < n; ++i) coords[i] = opts[i][vp[i]];
            c.s.add_value(static_cast<int>(fi), args, ix.encode(q, coords));
          });
        }
      });
    }
  }
  return c;
}

// --- Partite lemmas --------------------------------------------------------------

std::string to_string(ArrowMode m) {
  return m == ArrowMode::Full ? "full" : "witness";
}

std::string to_string(ExtensionPolicy p) {
  return p == ExtensionPolicy::AllEmbeddings ? "all-embeddings"
                                             : "parameter-words";
}

ArrowMode mode_for(int sigma_size, int n) {
  if (sigma_size <= 1) return n >= 1 ? ArrowMode::Full : ArrowMode::Witness;
  if (sigma_size > 3) return ArrowMode::Witness;
  static std::map<int, std::optional<int>> cache;
  auto it = cache.find(sigma_size);
  if (it == cache.end())
    it = cache.emplace(sigma_size, hj::hj_number(sigma_size, 2, 2)).first;
  return it->second && n >= *it->second ? ArrowMode::Full : ArrowMode::Witness;
}

namespace {

void fill_words(PartiteWitnesses& w, int s, int n,
                const std::function<VertexMap(const hj::Word&)>& e_of,
                const std::function<VertexMap(const hj::ParameterWord&)>& f_of,
                const Limits& lim) {
  w.exponent = n;
  if (s == 0) return;
  const std::int64_t count = hj::word_count(s, n);
  if (count > lim.max_nodes) throw CapExceeded("partite lemma: too many words");
  for (std::int64_t i = 0; i < count; ++i) {
    w.words.push_back(hj::word_at(i, s, n));
    w.e.push_back(e_of(w.words.back()));
  }
  w.pwords = hj::parameter_words(s, n);
  for (const auto& pw : w.pwords) w.f.push_back(f_of(pw));
}

}  // namespace

PartiteLemmaResult partite_lemma(const PartiteSystem& a, const PartiteSystem& b,
                                 int n, const Limits& lim) {
  if (!a.s.lang.same_symbols(b.s.lang))
    throw InvalidInput("partite lemma: languages differ");
  if (a.predicates != b.predicates)
    throw InvalidInput("partite lemma: predicate counts differ");
  if (!a.transversal()) throw InvalidInput("partite lemma: a is not transversal");
  std::vector<int> a_in(b.predicates, -1);
  for (int v = 0; v < a.s.n; ++v) a_in[a.proj[v]] = v;
  for (int v = 0; v < b.s.n; ++v)
    if (a_in[b.proj[v]] < 0)
      throw InvalidInput("partite lemma: b uses a predicate missing from a");

  PartiteLemmaResult res;
  EmbeddingConstraints ec;
  ec.candidates = b.candidates_for(a.proj);
  res.w.sigma = maps_of(enumerate_embeddings(a.s, b.s, ec, lim.max_nodes));
  const int s = static_cast<int>(res.w.sigma.size());

  PowerIndex ix(b, n);
  check_vertex_cap(ix.size(), lim, "partite lemma");
  res.c.s = Structure(b.s.lang, static_cast<int>(ix.size()));
  res.c.predicates = b.predicates;
  res.c.proj.resize(res.c.s.n);
  for (int v = 0; v < res.c.s.n; ++v) res.c.proj[v] = ix.partition_of(v);

  auto e_of = [&](const hj::Word& w) {
    VertexMap e(a.s.n);
    std::vector<int> coords(n);
    for (int v = 0; v < a.s.n; ++v) {
      for (int i = 0; i < n; ++i) coords[i] = res.w.sigma[w[i]][v];
      e[v] = ix.encode(a.proj[v], coords);
    }
    return e;
  };
  auto f_of = [&](const hj::ParameterWord& W) {
    VertexMap f(b.s.n);
    std::vector<int> coords(n);
    for (int v = 0; v < b.s.n; ++v) {
      for (int i = 0; i < n; ++i)
        coords[i] = W[i] == hj::kLambda ? v : res.w.sigma[W[i]][a_in[b.proj[v]]];
      f[v] = ix.encode(b.proj[v], coords);
    }
    return f;
  };
  fill_words(res.w, s, n, e_of, f_of, lim);
  Budget budget(lim.max_nodes, "partite lemma");
  for (const auto& f : res.w.f) {
    budget.tick();
    add_mapped_content(res.c.s, b.s, f);
  }
  res.mode = mode_for(s, n);
  return res;
}

PartiteLemmaResult induced_partite_lemma(const Structure& a,
                                         const PartiteSystem& b, int n,
                                         const SymbolSet* u, const Limits& lim) {
  if (!a.lang.same_symbols(b.s.lang))
    throw InvalidInput("induced partite lemma: languages differ");
  if (b.predicates != a.n)
    throw InvalidInput("induced partite lemma: b must be a-partite");
  PartiteLemmaResult res;
  EmbeddingConstraints ec;
  ec.candidates = b.candidates_for(all_vertices(a.n));
  if (u) ec.u_closed = *u;
  res.w.sigma = maps_of(enumerate_embeddings(a, b.s, ec, lim.max_nodes));
  const int s = static_cast<int>(res.w.sigma.size());
  res.c = power(b, n, lim);
  PowerIndex ix(b, n);
  auto e_of = [&](const hj::Word& w) {
    VertexMap e(a.n);
    std::vector<int> coords(n);
    for (int p = 0; p < a.n; ++p) {
      for (int i = 0; i < n; ++i) coords[i] = res.w.sigma[w[i]][p];
      e[p] = ix.encode(p, coords);
    }
    return e;
  };
  auto f_of = [&](const hj::ParameterWord& W) {
    VertexMap f(b.s.n);
    std::vector<int> coords(n);
    for (int v = 0; v < b.s.n; ++v) {
      for (int i = 0; i < n; ++i)
        coords[i] = W[i] == hj::kLambda ? v : res.w.sigma[W[i]][b.proj[v]];
      f[v] = ix.encode(b.proj[v], coords);
    }
    return f;
  };
  fill_words(res.w, s, n, e_of, f_of, lim);
  res.mode = mode_for(s, n);
  return res;
}

// --- Picture lemma -----------------------------------------------------------------

namespace {

struct Restriction {
  PartiteSystem sys;  // a-partite (induced) or transversal-indexed
  VertexSet vertices;
};

Restriction restrict_to(const Structure& a, const VertexMap& alpha,
                        const PartiteSystem& b) {
  std::vector<int> a_of(b.predicates, -1);
  for (int v = 0; v < a.n; ++v) {
    if (alpha[v] < 0 || alpha[v] >= b.predicates)
      throw InvalidInput("picture lemma: alpha leaves the predicates");
    if (a_of[alpha[v]] >= 0) throw InvalidInput("picture lemma: alpha not injective");
    a_of[alpha[v]] = v;
  }
  Restriction r;
  for (int v = 0; v < b.s.n; ++v)
    if (a_of[b.proj[v]] >= 0) r.vertices.push_back(v);
  auto sub = induced_substructure(b.s, r.vertices);
  r.sys.s = std::move(sub.s);
  r.sys.predicates = a.n;
  for (int v : r.vertices) r.sys.proj.push_back(a_of[b.proj[v]]);
  return r;
}

}  // namespace

PictureResult picture_lemma(const Structure& a, const VertexMap& alpha,
                            const PartiteSystem& b, int n,
                            const PictureOptions& opt) {
  if (static_cast<int>(alpha.size()) != a.n)
    throw InvalidInput("picture lemma: alpha has wrong length");
  auto r = restrict_to(a, alpha, b);
  const SymbolSet* u = opt.u ? &*opt.u : nullptr;

  PartiteLemmaResult lemma;
  if (opt.variant == PartiteVariant::Induced) {
    lemma = induced_partite_lemma(a, r.sys, n, u, opt.limits);
  } else {
    lemma = partite_lemma(transversal_system(a, all_vertices(a.n), a.n), r.sys,
                          n, opt.limits);
  }
  std::vector<VertexMap> ext;
  if (lemma.w.sigma.empty()) {
    // nothing to colour: the step keeps b
    n = 1;
    lemma.c = power(r.sys, 1, opt.limits);
    lemma.mode = ArrowMode::Full;
    PowerIndex ix1(r.sys, 1);
    VertexMap id(r.sys.s.n);
    for (int i = 0; i < r.sys.s.n; ++i) id[i] = ix1.encode(r.sys.proj[i], {i});
    ext.push_back(std::move(id));
  } else if (opt.extension == ExtensionPolicy::ParameterWords) {
    std::set<VertexMap> seen;
    for (const auto& f : lemma.w.f) {
      if (u && !is_u_closed_image(f, lemma.c.s, *u)) continue;
      if (seen.insert(f).second) ext.push_back(f);
    }
  } else {
    EmbeddingConstraints ec;
    ec.candidates = lemma.c.candidates_for(r.sys.proj);
    if (u) ec.u_closed = *u;
    const std::int64_t per_copy = b.s.n - static_cast<std::int64_t>(r.vertices.size());
    for_each_embedding(
        r.sys.s, lemma.c.s, ec,
        [&](const VertexMap& g) {
          ext.push_back(g);
          check_vertex_cap(lemma.c.s.n + per_copy * static_cast<std::int64_t>(ext.size()),
                           opt.limits, "picture lemma");
          return true;
        },
        opt.limits.max_nodes);
  }

  const PartiteSystem& core = lemma.c;
  const int newcount = b.s.n - static_cast<int>(r.vertices.size());
  const std::int64_t total =
      core.s.n + static_cast<std::int64_t>(newcount) * static_cast<std::int64_t>(ext.size());
  check_vertex_cap(total, opt.limits, "picture lemma");

  PictureResult res;
  res.c.s = Structure(b.s.lang, static_cast<int>(total));
  res.c.predicates = b.predicates;
  res.c.proj.resize(res.c.s.n);
  for (int v = 0; v < core.s.n; ++v) res.c.proj[v] = alpha[core.proj[v]];
  add_mapped_content(res.c.s, core.s, all_vertices(core.s.n));

  std::vector<int> pos_in_r(b.s.n, -1);
  for (std::size_t i = 0; i < r.vertices.size(); ++i) pos_in_r[r.vertices[i]] = static_cast<int>(i);

  int next = core.s.n;
  for (const auto& g : ext) {
    VertexMap full(b.s.n);
    for (int v = 0; v < b.s.n; ++v) {
      if (pos_in_r[v] >= 0) {
        full[v] = g[pos_in_r[v]];
      } else {
        full[v] = next++;
        res.c.proj[full[v]] = b.proj[v];
      }
    }
    add_mapped_content(res.c.s, b.s, full);
    res.rec.extensions.push_back(std::move(full));
  }

  res.rec.alpha = alpha;
  res.rec.exponent = n;
  res.rec.sigma_size = static_cast<int>(lemma.w.sigma.size());
  res.rec.mode = lemma.mode;
  res.rec.core_size = core.s.n;
  res.rec.restricted = r.vertices;
  PowerIndex ix(r.sys, n);
  res.rec.core_coords.resize(core.s.n);
  for (int v = 0; v < core.s.n; ++v) {
    auto cs = ix.decode(v);
    for (int& x : cs) x = r.vertices[x];
    res.rec.core_coords[v] = std::move(cs);
  }
  res.w = std::move(lemma.w);
  return res;
}

// --- Constructions -------------------------------------------------------------------

int choose_exponent(const ExponentPolicy& pol, int step, int sigma_size,
                    int base_sigma) {
  if (step < static_cast<int>(pol.schedule.size())) return pol.schedule[step];
  auto hj_or_fixed = [&](int s) {
    if (s <= 1) return std::max(1, pol.fixed);
    auto h = hj::hj_number(s, 2, pol.hj_cap);
    return h ? *h : pol.fixed;
  };
  switch (pol.kind) {
    case ExponentPolicy::Kind::Fixed: return pol.fixed;
    case ExponentPolicy::Kind::HalesJewett: return hj_or_fixed(sigma_size);
    case ExponentPolicy::Kind::BaseAlphabet: return hj_or_fixed(base_sigma);
  }
  return pol.fixed;
}

namespace {

int step_alphabet_size(const Structure& a, const VertexMap& alpha,
                       const PartiteSystem& p, const PictureOptions& opt) {
  auto r = restrict_to(a, alpha, p);
  EmbeddingConstraints ec;
  if (opt.variant == PartiteVariant::Induced) {
    ec.candidates = r.sys.candidates_for(all_vertices(a.n));
    if (opt.u) ec.u_closed = *opt.u;
  } else {
    ec.candidates = r.sys.candidates_for(all_vertices(a.n));
  }
  int count = 0;
  for_each_embedding(a, r.sys.s, ec, [&](const VertexMap&) {
    ++count;
    return true;
  }, opt.limits.max_nodes);
  return count;
}

void run_steps(ConstructionTrace& t, const Structure& a,
               const std::vector<VertexMap>& alphas, const ExponentPolicy& pol,
               int base_sigma, const PictureOptions& opt) {
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    int sigma = pol.kind == ExponentPolicy::Kind::HalesJewett
                    ? step_alphabet_size(a, alphas[i], t.pictures.back(), opt)
                    : 0;
    int n = choose_exponent(pol, static_cast<int>(i), sigma, base_sigma);
    auto res = picture_lemma(a, alphas[i], t.pictures.back(), n, opt);
    if (res.rec.mode == ArrowMode::Witness) t.mode = ArrowMode::Witness;
    t.steps.push_back(std::move(res.rec));
    t.pictures.push_back(std::move(res.c));
  }
}

}  // namespace

ConstructionTrace induced_construction(const Structure& a, const Structure& b,
                                       const Structure& d,
                                       const ExponentPolicy& pol,
                                       const PictureOptions& opt) {
  if (!a.lang.same_symbols(b.lang) || !b.lang.same_symbols(d.lang))
    throw InvalidInput("induced construction: languages differ");
  ConstructionTrace t;
  t.target = d;
  t.initial_betas = maps_of(enumerate_embeddings(b, d, {}, opt.limits.max_nodes));
  if (t.initial_betas.empty())
    throw NoEmbeddings("induced construction: b does not embed into d");
  check_vertex_cap(static_cast<std::int64_t>(t.initial_betas.size()) * b.n,
                   opt.limits, "induced construction");
  t.pictures.push_back(disjoint_copies(b, t.initial_betas, d.n, t.initial_copies));

  EmbeddingConstraints ec;
  if (opt.u) ec.u_closed = *opt.u;
  std::vector<VertexMap> alphas;
  for (auto& e : enumerate_embeddings(a, d, ec, opt.limits.max_nodes)) {
    auto img = image_of(e.map);
    for (const auto& beta : t.initial_betas) {
      auto bi = image_of(beta);
      if (std::includes(bi.begin(), bi.end(), img.begin(), img.end())) {
        alphas.push_back(std::move(e.map));
        break;
      }
    }
  }
  const int base_sigma =
      static_cast<int>(enumerate_embeddings(a, b, ec, opt.limits.max_nodes).size());
  run_steps(t, a, alphas, pol, base_sigma, opt);
  return t;
}

UnrestrictedResult unrestricted_construction(const Structure& a,
                                             const Structure& b, int predicates,
                                             const ExponentPolicy& pol,
                                             const PictureOptions& opt_in) {
  if (!a.lang.same_symbols(b.lang))
    throw InvalidInput("non-induced construction: languages differ");
  if (!standard_order(a) || !standard_order(b))
    throw InvalidInput(
        "non-induced construction: a and b must be ordered by vertex index");
  PictureOptions opt = opt_in;
  opt.variant = PartiteVariant::NonInduced;
  opt.u.reset();
  UnrestrictedResult out;
  auto& t = out.trace;
  t.target = Structure(b.lang, predicates);
  for (int i = 0; i < predicates; ++i)
    for (int j = i + 1; j < predicates; ++j) t.target.add_tuple("<", {i, j});
  t.initial_betas = increasing_injections(b.n, predicates);
  if (t.initial_betas.empty())
    throw NoEmbeddings("non-induced construction: too few predicates");
  check_vertex_cap(static_cast<std::int64_t>(t.initial_betas.size()) * b.n,
                   opt.limits, "non-induced construction");
  t.pictures.push_back(
      disjoint_copies(b, t.initial_betas, predicates, t.initial_copies));
  auto alphas = increasing_injections(a.n, predicates);
  int base_sigma = 0;
  {
    EmbeddingConstraints ec;
    base_sigma = static_cast<int>(enumerate_embeddings(a, b, ec).size());
  }
  run_steps(t, a, alphas, pol, base_sigma, opt);
  out.c = linear_extension(t.final_picture().s);
  return out;
}

// --- Orders ----------------------------------------------------------------------------

namespace {

std::optional<std::vector<int>> topological(const Structure& s, int lt) {
  std::vector<std::vector<int>> out(s.n);
  std::vector<int> indeg(s.n, 0);
  for (const auto& t : s.rel[lt]) {
    if (t[0] == t[1]) return std::nullopt;
    out[t[0]].push_back(t[1]);
    ++indeg[t[1]];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> q;
  for (int v = 0; v < s.n; ++v)
    if (indeg[v] == 0) q.push(v);
  std::vector<int> order;
  while (!q.empty()) {
    int v = q.top();
    q.pop();
    order.push_back(v);
    for (int w : out[v])
      if (--indeg[w] == 0) q.push(w);
  }
  if (static_cast<int>(order.size()) != s.n) return std::nullopt;
  return order;
}

}  // namespace

bool order_acyclic(const Structure& s, const std::string& lt) {
  int r = s.lang.relation_index(lt);
  if (r < 0) throw InvalidInput("no relation '" + lt + "'");
  return topological(s, r).has_value();
}

Structure linear_extension(const Structure& s, const std::string& lt) {
  int r = s.lang.relation_index(lt);
  if (r < 0) return s;
  auto order = topological(s, r);
  if (!order) throw InvalidInput("relation '" + lt + "' has a cycle");
  Structure out = s;
  out.rel[r].clear();
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 1; j < s.n; ++j) out.rel[r].insert({(*order)[i], (*order)[j]});
  return out;
}

PosetInvariant check_poset_invariant(const Structure& p, const std::string& lt,
                                     const std::string& ll) {
  int r_lt = p.lang.relation_index(lt);
  int r_ll = p.lang.relation_index(ll);
  if (r_lt < 0 || r_ll < 0) throw InvalidInput("poset invariant: missing relation");
  PosetInvariant inv;
  std::vector<std::vector<int>> out(p.n);
  for (const auto& t : p.rel[r_ll]) {
    if (!p.has_tuple(r_lt, t)) inv.contained = false;
    out[t[0]].push_back(t[1]);
  }
  for (int x = 0; x < p.n && inv.closure_ok; ++x) {
    std::vector<char> seen(p.n, 0);
    std::vector<int> stack(out[x].begin(), out[x].end());
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      if (seen[y]) continue;
      seen[y] = 1;
      if (p.has_tuple(r_lt, {x, y}) && !p.has_tuple(r_ll, {x, y})) {
        inv.closure_ok = false;
        break;
      }
      for (int z : out[y]) stack.push_back(z);
    }
  }
  return inv;
}

std::optional<std::pair<int, VertexSet>> check_irreducible_projection(
    const ConstructionTrace& t, const Structure& b) {
  (void)b;
  std::vector<VertexSet> images;
  for (const auto& beta : t.initial_betas) images.push_back(image_of(beta));
  for (std::size_t i = 0; i < t.pictures.size(); ++i) {
    const auto& p = t.pictures[i];
    for (const auto& e : maximal_irreducible_subsets(p.s)) {
      auto img = image_of(p.proj, e);
      bool ok = img.size() == e.size();
      if (ok) {
        ok = false;
        for (const auto& bi : images)
          if (std::includes(bi.begin(), bi.end(), img.begin(), img.end())) {
            ok = true;
            break;
          }
      }
      if (!ok) return std::make_pair(static_cast<int>(i), e);
    }
  }
  return std::nullopt;
}

std::pair<Structure, SymbolSet> relational_encoding(const Structure& s) {
  Language l(s.lang.name);
  for (const auto& r : s.lang.relations) l.add_relation(r.name, r.arity);
  SymbolSet u;
  for (const auto& f : s.lang.functions) {
    l.add_relation(f.name, f.arity + 1);
    u.push_back(f.name);
  }
  Structure out(l, s.n);
  out.name = s.name;
  for (std::size_t r = 0; r < s.rel.size(); ++r) out.rel[r] = s.rel[r];
  for (std::size_t f = 0; f < s.fun.size(); ++f)
    for (const auto& [args, vals] : s.fun[f])
      for (int v : vals) {
        Tuple t = args;
        t.push_back(v);
        out.add_tuple(static_cast<int>(s.rel.size() + f), std::move(t));
      }
  return {std::move(out), std::move(u)};
}

// --- Local tree-likeness ------------------------------------------------------------

namespace {

struct Witness {
  TreeAmalgamSpec spec;
  Structure t;  // evaluation of spec
  VertexMap f;  // position in sub -> vertex of t
};

Witness single_witness(const Structure& b, VertexMap f) {
  return {TreeAmalgamSpec::single(b), b, std::move(f)};
}

/// Tree amalgam of two witnesses' trees over `overlap`; the left tree keeps
/// its numbering. Returns the embedding of the right tree.
VertexMap join(Witness& left, const TreeAmalgamSpec& rspec, const Structure& rt,
               const Structure& overlap, const VertexMap& f1,
               const VertexMap& f2) {
  TreeAmalgamSpec spec;
  spec.leaf = left.spec.leaf;
  spec.nodes = left.spec.nodes;
  const int off = static_cast<int>(spec.nodes.size());
  for (auto node : rspec.nodes) {
    if (!node.leaf()) {
      node.left += off;
      node.right += off;
    }
    spec.nodes.push_back(std::move(node));
  }
  TreeAmalgamNode root;
  root.left = left.spec.root;
  root.right = rspec.root + off;
  root.overlap = overlap;
  root.f1 = f1;
  root.f2 = f2;
  spec.nodes.push_back(std::move(root));
  spec.root = static_cast<int>(spec.nodes.size()) - 1;
  auto am = free_amalgam({overlap, left.t, rt, f1, f2});
  left.spec = std::move(spec);
  left.t = std::move(am.c);
  return am.beta2;
}

int pos_of(const VertexSet& s, int v) {
  return static_cast<int>(std::lower_bound(s.begin(), s.end(), v) - s.begin());
}

/// Witnesses along one induced construction, following its case analysis.
class TraceWitnesses {
 public:
  using Lower = std::function<const Witness&(const VertexSet&)>;

  TraceWitnesses(const ConstructionTrace& t, const Structure& b, int n,
                 Lower lower)
      : t_(t), b_(b), n_(n), lower_(std::move(lower)) {
    for (const auto& rec : t.steps) {
      auto img = image_of(rec.alpha);
      VertexMap beta_inv;
      for (const auto& beta : t.initial_betas) {
        auto bi = image_of(beta);
        if (std::includes(bi.begin(), bi.end(), img.begin(), img.end())) {
          beta_inv = invert_on(beta, t.target.n);
          break;
        }
      }
      step_beta_inv_.push_back(std::move(beta_inv));
      // owner extension and preimage of every new vertex
      const int prev = t.pictures[step_beta_inv_.size() - 1].s.n;
      std::vector<std::pair<int, int>> owner(
          t.pictures[step_beta_inv_.size()].s.n, {-1, -1});
      std::vector<char> in_r(prev, 0);
      for (int v : rec.restricted) in_r[v] = 1;
      for (std::size_t k = 0; k < rec.extensions.size(); ++k)
        for (int v = 0; v < prev; ++v)
          if (!in_r[v]) owner[rec.extensions[k][v]] = {static_cast<int>(k), v};
      owner_.push_back(std::move(owner));
    }
  }

  const Witness& get(int i, const VertexSet& sub) {
    auto key = std::make_pair(i, sub);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Witness w = build(i, sub);
    return memo_.emplace(key, std::move(w)).first->second;
  }

 private:
  Witness build(int i, const VertexSet& sub) {
    const auto& p = t_.pictures[i];
    if (i == 0) {
      VertexMap f;
      for (int v : sub) f.push_back(v % b_.n);
      return single_witness(b_, std::move(f));
    }
    const auto& rec = t_.steps[i - 1];
    auto img = image_of(p.proj, sub);
    if (static_cast<int>(img.size()) < n_) {
      const Witness& lw = lower_(img);
      Witness w = lw;
      w.f.clear();
      for (int v : sub) w.f.push_back(lw.f[pos_of(img, p.proj[v])]);
      return w;
    }
    // |sub| = n and the projection is injective on sub
    bool in_core = true;
    for (int v : sub) in_core = in_core && v < rec.core_size;
    if (in_core) {
      VertexMap f;
      for (int v : sub) f.push_back(step_beta_inv_[i - 1][p.proj[v]]);
      return single_witness(b_, std::move(f));
    }
    const auto& owner = owner_[i - 1];
    int k = -1;
    for (int v : sub)
      if (v >= rec.core_size) {
        k = owner[v].first;
        break;
      }
    const auto& g = rec.extensions[k];
    std::map<int, int> pre;
    for (int v = 0; v < static_cast<int>(g.size()); ++v) pre[g[v]] = v;
    VertexSet e_set, f_set;
    bool inside = true;
    for (int v : sub) {
      bool in_copy = v < rec.core_size ? pre.count(v) > 0 : owner[v].first == k;
      if (in_copy) e_set.push_back(v);
      else inside = false;
      if (v < rec.core_size || owner[v].first != k) f_set.push_back(v);
    }
    if (inside) {
      VertexSet q;
      for (int v : sub) q.push_back(pre[v]);
      std::vector<std::pair<int, int>> order;
      for (std::size_t j = 0; j < sub.size(); ++j) order.push_back({q[j], sub[j]});
      std::sort(order.begin(), order.end());
      VertexSet qs;
      for (auto& [x, y] : order) qs.push_back(x);
      const Witness& pw = get(i - 1, qs);
      Witness w = pw;
      w.f.clear();
      for (std::size_t j = 0; j < sub.size(); ++j)
        w.f.push_back(pw.f[pos_of(qs, q[j])]);
      return w;
    }
    // sub is the free amalgam of e_set and f_set over core vertices
    const auto& target = t_.target;
    auto pe = image_of(p.proj, e_set);
    auto pf = image_of(p.proj, f_set);
    VertexSet g_set;
    std::set_intersection(pe.begin(), pe.end(), pf.begin(), pf.end(),
                          std::back_inserter(g_set));
    const Witness& we = lower_(pe);
    const Witness& wf = lower_(pf);
    auto overlap = induced_substructure(target, g_set);
    VertexMap f1, f2;
    for (int x : g_set) {
      f1.push_back(we.f[pos_of(pe, x)]);
      f2.push_back(wf.f[pos_of(pf, x)]);
    }
    Witness w = we;
    auto beta2 = join(w, wf.spec, wf.t, overlap.s, f1, f2);
    w.f.clear();
    for (int v : sub) {
      int x = p.proj[v];
      if (std::binary_search(e_set.begin(), e_set.end(), v))
        w.f.push_back(we.f[pos_of(pe, x)]);
      else
        w.f.push_back(beta2[wf.f[pos_of(pf, x)]]);
    }
    return w;
  }

  const ConstructionTrace& t_;
  const Structure& b_;
  int n_;
  Lower lower_;
  std::vector<VertexMap> step_beta_inv_;
  std::vector<std::vector<std::pair<int, int>>> owner_;
  std::map<std::pair<int, VertexSet>, Witness> memo_;
};

std::vector<VertexSet> small_subsets(int n, int k) {
  std::vector<VertexSet> out;
  for (int size = 1; size <= k && size <= n; ++size)
    for (auto& c : increasing_injections(size, n)) out.push_back(std::move(c));
  return out;
}

/// Glues copies of b onto the tree until every embedding a -> c meeting sub
/// has its trace covered by a copy of a.
void complete_covering(Witness& w, const Structure& c, const VertexSet& sub,
                       const Structure& a, const Structure& b,
                       const std::vector<VertexMap>& embs_a_c,
                       const VertexMap& iota) {
  for (const auto& alpha : embs_a_c) {
    VertexSet s_pos;  // positions in sub hit by alpha
    VertexMap alpha_inv;
    for (int x = 0; x < a.n; ++x) {
      auto it = std::lower_bound(sub.begin(), sub.end(), alpha[x]);
      if (it != sub.end() && *it == alpha[x]) {
        s_pos.push_back(static_cast<int>(it - sub.begin()));
        alpha_inv.push_back(x);
      }
    }
    if (s_pos.empty()) continue;
    VertexSet target;
    for (int j : s_pos) target.push_back(w.f[j]);
    std::sort(target.begin(), target.end());
    bool covered = false;
    for_each_embedding(a, w.t, {}, [&](const VertexMap& ap) {
      auto im = image_of(ap);
      covered = std::includes(im.begin(), im.end(), target.begin(), target.end());
      return !covered;
    });
    if (covered) continue;
    // order the overlap by vertex of c
    std::vector<std::pair<int, int>> by_vertex;
    for (std::size_t j = 0; j < s_pos.size(); ++j)
      by_vertex.push_back({sub[s_pos[j]], static_cast<int>(j)});
    std::sort(by_vertex.begin(), by_vertex.end());
    VertexSet verts;
    VertexMap f1, f2;
    for (auto& [v, j] : by_vertex) {
      verts.push_back(v);
      f1.push_back(w.f[s_pos[j]]);
      f2.push_back(iota[alpha_inv[j]]);
    }
    auto overlap = induced_substructure(c, verts);
    join(w, TreeAmalgamSpec::single(b), b, overlap.s, f1, f2);
  }
}

}  // namespace

SparsenResult sparsen(const Structure& a, const Structure& b,
                      const Structure& c0, int n, const ExponentPolicy& pol,
                      const PictureOptions& opt) {
  if (n < 0) throw InvalidInput("sparsen: n must be non-negative");
  if (!a.lang.same_symbols(b.lang) || !b.lang.same_symbols(c0.lang))
    throw InvalidInput("sparsen: languages differ");
  if (!a.lang.relational())
    throw InvalidInput("sparsen: witnesses need a relational language");
  if (!is_irreducible(a).irreducible || !is_irreducible(b).irreducible)
    throw InvalidInput("sparsen: a and b must be irreducible");
  auto iota = first_embedding(a, b);
  if (!iota) throw NoEmbeddings("sparsen: a does not embed into b");

  SparsenResult res;
  res.n = n;
  res.c = c0;
  res.to_c0 = all_vertices(c0.n);
  if (n == 0) {
    res.witnesses.push_back({{}, TreeAmalgamSpec::single(b), {}});
    return res;
  }

  Witness empty = single_witness(b, {});
  std::vector<std::unique_ptr<TraceWitnesses>> levels;
  res.traces.reserve(n);  // the witness levels refer into the traces
  for (int j = 1; j <= n; ++j) {
    res.traces.push_back(induced_construction(a, b, res.c, pol, opt));
    const auto& t = res.traces.back();
    TraceWitnesses::Lower lower;
    if (j == 1) {
      lower = [&empty](const VertexSet&) -> const Witness& { return empty; };
    } else {
      TraceWitnesses* prev = levels.back().get();
      const int last = static_cast<int>(res.traces[j - 2].pictures.size()) - 1;
      lower = [prev, last](const VertexSet& s) -> const Witness& {
        return prev->get(last, s);
      };
    }
    levels.push_back(std::make_unique<TraceWitnesses>(t, b, j, lower));
    res.to_c0 = compose(res.to_c0, t.final_picture().proj);
    res.c = t.final_picture().s;
  }

  // every irreducible substructure extends to a copy of b
  const auto& last = res.traces.back();
  const Structure cn = res.c;
  const VertexMap proj_last = last.final_picture().proj;
  std::set<VertexSet> covered;
  auto cover = [&](const VertexSet& img) {
    const int k = static_cast<int>(img.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      VertexSet s;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1) s.push_back(img[i]);
      covered.insert(std::move(s));
    }
  };
  for_each_embedding(b, cn, {}, [&](const VertexMap& g) {
    cover(image_of(g));
    return true;
  }, opt.limits.max_nodes);
  auto cliques = gaifman_cliques(cn, b.n);
  std::stable_sort(cliques.begin(), cliques.end(),
                   [](const VertexSet& x, const VertexSet& y) {
                     return x.size() > y.size();
                   });
  struct Glue {
    VertexSet e;
    VertexMap g;  // b -> C
  };
  std::vector<Glue> glues;
  const VertexMap to_prev_c0 = [&] {
    // projection C_{n-1} -> C_0
    VertexMap m = all_vertices(c0.n);
    for (int j = 0; j + 1 < n; ++j) m = compose(m, res.traces[j].final_picture().proj);
    return m;
  }();
  for (const auto& e : cliques) {
    if (covered.count(e)) continue;
    auto pe = image_of(proj_last, e);
    int bidx = -1;
    for (std::size_t k = 0; k < last.initial_betas.size() && bidx < 0; ++k) {
      auto bi = image_of(last.initial_betas[k]);
      if (pe.size() == e.size() &&
          std::includes(bi.begin(), bi.end(), pe.begin(), pe.end()))
        bidx = static_cast<int>(k);
    }
    if (bidx < 0)
      throw Error("sparsen: irreducible substructure outside every copy");
    const VertexMap& beta = last.initial_betas[bidx];
    const VertexMap beta_inv = invert_on(beta, last.target.n);
    VertexMap h;  // e -> b
    for (int v : e) h.push_back(beta_inv[proj_last[v]]);
    VertexMap g(b.n, -1);
    for (std::size_t i = 0; i < e.size(); ++i) g[h[i]] = e[i];
    const int old_n = res.c.n;
    res.c.add_vertices(b.n - static_cast<int>(e.size()));
    int next = old_n;
    for (int v = 0; v < b.n; ++v)
      if (g[v] < 0) {
        g[v] = next++;
        res.to_c0.push_back(to_prev_c0[beta[v]]);
      }
    add_mapped_content(res.c, b, g);
    cover(image_of(g));
    glues.push_back({e, g});
  }
  check_vertex_cap(res.c.n, opt.limits, "sparsen");

  for (const auto& e : gaifman_cliques(res.c, b.n)) {
    auto cert = std::optional<VertexMap>{};
    for (const auto& gl : glues) {
      auto im = image_of(gl.g);
      if (std::includes(im.begin(), im.end(), e.begin(), e.end())) {
        cert = gl.g;
        break;
      }
    }
    if (!cert) {
      for_each_embedding(b, res.c, {}, [&](const VertexMap& g) {
        auto im = image_of(g);
        if (std::includes(im.begin(), im.end(), e.begin(), e.end())) cert = g;
        return !cert;
      }, opt.limits.max_nodes);
    }
    if (!cert) throw Error("sparsen: irreducible substructure without a copy");
    res.extensions.push_back({e, *cert});
  }

  // witnesses for the final structure
  auto embs = maps_of(enumerate_embeddings(a, res.c, {}, opt.limits.max_nodes));
  TraceWitnesses& top = *levels.back();
  const int last_pic = static_cast<int>(last.pictures.size()) - 1;
  for (const auto& sub : small_subsets(res.c.n, n)) {
    VertexSet old_part;
    for (int v : sub)
      if (v < cn.n) old_part.push_back(v);
    Witness w = old_part.empty() ? empty : top.get(last_pic, old_part);
    VertexMap f(sub.size(), -1);
    for (std::size_t j = 0; j < sub.size(); ++j)
      if (sub[j] < cn.n) f[j] = w.f[pos_of(old_part, sub[j])];
    std::set<std::pair<VertexSet, VertexMap>> done;
    for (const auto& gl : glues) {
      VertexMap g_inv(res.c.n, -1);
      for (int v = 0; v < b.n; ++v) g_inv[gl.g[v]] = v;
      bool has_new = false;
      VertexSet ov;
      for (int v : sub) {
        if (g_inv[v] < 0) continue;
        if (v >= cn.n) has_new = true;
        else ov.push_back(v);
      }
      if (!has_new) continue;
      VertexMap f1, f2;
      for (int v : ov) {
        f1.push_back(w.f[pos_of(old_part, v)]);
        f2.push_back(g_inv[v]);
      }
      auto overlap = induced_substructure(res.c, ov);
      auto beta2 = join(w, TreeAmalgamSpec::single(b), b, overlap.s, f1, f2);
      for (std::size_t j = 0; j < sub.size(); ++j)
        if (sub[j] >= cn.n && g_inv[sub[j]] >= 0) f[j] = beta2[g_inv[sub[j]]];
    }
    w.f = f;
    complete_covering(w, res.c, sub, a, b, embs, *iota);
    res.witnesses.push_back({sub, std::move(w.spec), std::move(w.f)});
  }
  return res;
}

TreeLikeReport is_locally_treelike(const Structure& c, const Structure& a,
                                   const Structure& b, int n,
                                   const std::vector<TreeWitness>& witnesses) {
  TreeLikeReport rep;
  std::map<VertexSet, const TreeWitness*> by_sub;
  for (const auto& w : witnesses) by_sub[w.sub] = &w;
  auto embs = maps_of(enumerate_embeddings(a, c));
  auto fail = [&](const VertexSet& s, std::string why) {
    rep.all_valid = false;
    rep.verdicts.push_back({s, false, std::move(why)});
  };
  std::vector<VertexSet> subs;
  for (auto& s : small_subsets(c.n, n))
    if (is_closed(c, s)) subs.push_back(std::move(s));
  for (const auto& sub : subs) {
    auto it = by_sub.find(sub);
    if (it == by_sub.end()) {
      fail(sub, "missing witness");
      continue;
    }
    const auto& w = *it->second;
    if (!isomorphic(w.spec.leaf, b)) {
      fail(sub, "leaf is not a copy of b");
      continue;
    }
    TreeAmalgamResult t;
    try {
      t = tree_amalgam(w.spec);
    } catch (const OverlapNotInIrreducible&) {
      fail(sub, "overlap not inside an irreducible substructure");
      continue;
    } catch (const InvalidInput& e) {
      fail(sub, std::string("malformed tree amalgam: ") + e.what());
      continue;
    }
    auto cs = induced_substructure(c, sub);
    if (w.f.size() != sub.size() ||
        std::any_of(w.f.begin(), w.f.end(),
                    [&](int x) { return x < 0 || x >= t.s.n; }) ||
        !is_homomorphism_embedding(w.f, cs.s, t.s)) {
      fail(sub, "map is not a homomorphism-embedding");
      continue;
    }
    bool ok = true;
    for (const auto& alpha : embs) {
      VertexSet target;
      for (int x : alpha) {
        auto p = std::lower_bound(sub.begin(), sub.end(), x);
        if (p != sub.end() && *p == x) target.push_back(w.f[p - sub.begin()]);
      }
      if (target.empty()) continue;
      std::sort(target.begin(), target.end());
      bool covered = false;
      for_each_embedding(a, t.s, {}, [&](const VertexMap& ap) {
        auto im = image_of(ap);
        covered = std::includes(im.begin(), im.end(), target.begin(), target.end());
        return !covered;
      });
      if (!covered) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      fail(sub, "covering of copies of a fails");
      continue;
    }
    rep.verdicts.push_back({sub, true, {}});
  }
  return rep;
}

// --- Recursive construction with closures --------------------------------------------

ClosedConstructionResult recursive_closed_construction(
    const Structure& a, const Structure& b, const SymbolSet& u,
    const ExponentPolicy& pol, std::optional<Structure> d, int predicates,
    const PictureOptions& opt_in) {
  if (!a.lang.same_symbols(b.lang))
    throw InvalidInput("closed construction: languages differ");
  if (!a.lang.relational())
    throw InvalidInput("closed construction: use the relational encoding");
  for (const auto& sym : u) {
    int r = a.lang.relation_index(sym);
    if (r < 0 || a.lang.relations[r].arity < 2)
      throw InvalidInput("closed construction: U symbol '" + sym +
                         "' must be a relation of arity at least 2");
  }
  ClosedConstructionResult res;
  if (d) {
    res.d = *d;
  } else {
    res.d = unrestricted_construction(a, b, predicates > 0 ? predicates : b.n,
                                      pol, opt_in)
                .c;
  }
  PictureOptions opt = opt_in;
  opt.variant = PartiteVariant::Induced;
  if (u.empty()) {
    // every embedding is U-closed: the little pictures are the pictures
    opt.u.reset();
    auto t = induced_construction(a, b, res.d, pol, opt);
    res.pictures = t.pictures;
    res.u_transversal.assign(res.pictures.size(), true);
    res.inner.push_back(std::move(t));
    res.c = linear_extension(res.pictures.back().s);
    res.copies = maps_of(enumerate_embeddings(b, res.c, {}, opt.limits.max_nodes));
    return res;
  }
  opt.u = u;

  auto alphas = maps_of(enumerate_embeddings(a, res.d, {}, opt.limits.max_nodes));
  auto betas = maps_of(enumerate_embeddings(b, res.d, {}, opt.limits.max_nodes));
  if (betas.empty()) throw NoEmbeddings("closed construction: b does not embed into d");
  std::vector<VertexMap> copies;
  res.pictures.push_back(disjoint_copies(b, betas, res.d.n, copies));
  res.u_transversal.push_back(u_transversal(res.pictures.back(), u));
  const int l_rel = static_cast<int>(a.lang.relations.size());

  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const PartiteSystem& pi = res.pictures.back();
    int n = choose_exponent(pol, static_cast<int>(i), 0, 0);
    auto little = picture_lemma(a, alphas[i], pi, n, opt);
    // keep what lies in some U-closed copy of P_i
    std::set<int> keep_v;
    std::vector<const VertexMap*> good;
    for (const auto& g : little.rec.extensions)
      if (is_u_closed_image(g, little.c.s, u)) {
        good.push_back(&g);
        for (int x : g) keep_v.insert(x);
      }
    VertexSet keep(keep_v.begin(), keep_v.end());
    PartiteSystem o;
    o.s = Structure(little.c.s.lang, static_cast<int>(keep.size()));
    o.predicates = little.c.predicates;
    for (int v : keep) o.proj.push_back(little.c.proj[v]);
    std::vector<int> renum(little.c.s.n, -1);
    for (std::size_t j = 0; j < keep.size(); ++j) renum[keep[j]] = static_cast<int>(j);
    for (const auto* g : good) add_mapped_content(o.s, pi.s, compose(renum, *g));

    // half U-closed construction over O, seen as L_P structures
    PartiteSystem ai = transversal_system(a, alphas[i], res.d.n);
    Structure a_lp = ai.with_predicates();
    Structure b_lp = pi.with_predicates();
    Structure o_lp = o.with_predicates();
    PictureOptions inner_opt = opt;
    auto inner = induced_construction(a_lp, b_lp, o_lp, pol, inner_opt);
    const auto& plus = inner.final_picture();
    PartiteSystem next;
    next.s = Structure(a.lang, plus.s.n);
    for (int r = 0; r < l_rel; ++r) next.s.rel[r] = plus.s.rel[r];
    next.predicates = res.d.n;
    for (int v = 0; v < plus.s.n; ++v) next.proj.push_back(o.proj[plus.proj[v]]);
    res.inner.push_back(std::move(inner));
    res.u_transversal.push_back(u_transversal(next, u));
    res.pictures.push_back(std::move(next));
  }
  res.c = linear_extension(res.pictures.back().s);
  res.copies = maps_of(enumerate_embeddings(b, res.c, {}, opt.limits.max_nodes));
  return res;
}

}  // namespace ramsey
