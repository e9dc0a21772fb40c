#include "ramsey/amalgamation.hpp"

#include <algorithm>
#include <functional>

namespace ramsey {

namespace {

std::string show(const VertexMap& f) {
  std::string o = "[";
  for (std::size_t i = 0; i < f.size(); ++i)
    o += (i ? "," : "") + std::to_string(f[i]);
  return o + "]";
}

Tuple map_tuple(const VertexMap& f, const Tuple& t) {
  Tuple r(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = f[t[i]];
  return r;
}

}  // namespace

void check_problem(const AmalgamationProblem& p) {
  if (!is_embedding(p.alpha1, p.base, p.left))
    throw InvalidInput("alpha1 is not an embedding");
  if (!is_embedding(p.alpha2, p.base, p.right))
    throw InvalidInput("alpha2 is not an embedding");
}

Amalgam free_amalgam(const AmalgamationProblem& p) {
  check_problem(p);
  const int nl = p.left.n, nr = p.right.n;
  Amalgam out{Structure(p.left.lang, nl + nr - p.base.n), all_vertices(nl),
              VertexMap(nr, -1)};
  for (int a = 0; a < p.base.n; ++a) out.beta2[p.alpha2[a]] = p.alpha1[a];
  int next = nl;
  for (int v = 0; v < nr; ++v)
    if (out.beta2[v] < 0) out.beta2[v] = next++;
  out.c.rel = p.left.rel;
  out.c.fun = p.left.fun;
  for (std::size_t r = 0; r < p.right.rel.size(); ++r)
    for (const auto& t : p.right.rel[r])
      out.c.rel[r].insert(map_tuple(out.beta2, t));
  for (std::size_t f = 0; f < p.right.fun.size(); ++f)
    for (const auto& [args, vals] : p.right.fun[f])
      for (int v : vals)
        out.c.add_value(static_cast<int>(f), map_tuple(out.beta2, args),
                        out.beta2[v]);
  return out;
}

std::string to_string(AmalgamGrade g) {
  switch (g) {
    case AmalgamGrade::None: return "none";
    case AmalgamGrade::Amalgam: return "amalgam";
    case AmalgamGrade::Strong: return "strong";
    case AmalgamGrade::Free: return "free";
  }
  return "?";
}

AmalgamGrade is_amalgam(const Structure& c, const AmalgamationProblem& p,
                        const VertexMap& beta1, const VertexMap& beta2) {
  if (!is_embedding(beta1, p.left, c) || !is_embedding(beta2, p.right, c))
    return AmalgamGrade::None;
  if (compose(beta1, p.alpha1) != compose(beta2, p.alpha2))
    return AmalgamGrade::None;
  auto i1 = image_of(beta1), i2 = image_of(beta2);
  VertexSet inter;
  std::set_intersection(i1.begin(), i1.end(), i2.begin(), i2.end(),
                        std::back_inserter(inter));
  if (inter != image_of(compose(beta1, p.alpha1))) return AmalgamGrade::Amalgam;
  std::vector<char> in1(c.n, 0), in2(c.n, 0);
  for (int v : i1) in1[v] = 1;
  for (int v : i2) in2[v] = 1;
  for (int v = 0; v < c.n; ++v)
    if (!in1[v] && !in2[v]) return AmalgamGrade::Strong;
  auto inside = [&](const std::vector<char>& in, const Tuple& t) {
    return std::all_of(t.begin(), t.end(), [&](int x) { return in[x]; });
  };
  for (const auto& r : c.rel)
    for (const auto& t : r)
      if (!inside(in1, t) && !inside(in2, t)) return AmalgamGrade::Strong;
  for (const auto& f : c.fun)
    for (const auto& [args, vals] : f) {
      Tuple t = args;
      t.insert(t.end(), vals.begin(), vals.end());
      if (!inside(in1, t) && !inside(in2, t)) return AmalgamGrade::Strong;
    }
  return AmalgamGrade::Free;
}

// --- Tree amalgams ----------------------------------------------------------

TreeAmalgamSpec TreeAmalgamSpec::single(const Structure& a) {
  TreeAmalgamSpec s;
  s.leaf = a;
  s.nodes.emplace_back();
  s.root = 0;
  return s;
}

bool inside_irreducible(const Structure& s, const VertexSet& vs) {
  if (s.lang.relational()) {
    auto m = gaifman_matrix(s);
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (!m[vs[i]][vs[j]]) return false;
    return true;
  }
  auto cl = generated_closure(s, vs);
  if (is_irreducible(induced_substructure(s, cl).s).irreducible) return true;
  for (const auto& c : maximal_irreducible_subsets(s))
    if (std::includes(c.begin(), c.end(), vs.begin(), vs.end())) return true;
  return false;
}

TreeAmalgamResult tree_amalgam(const TreeAmalgamSpec& spec) {
  const int k = static_cast<int>(spec.nodes.size());
  std::vector<char> visiting(k, 0);
  std::function<TreeAmalgamResult(int)> eval = [&](int i) {
    if (i < 0 || i >= k)
      throw InvalidInput("tree amalgam node " + std::to_string(i) +
                         " out of range");
    if (visiting[i]) throw InvalidInput("tree amalgam recipe has a cycle");
    const auto& node = spec.nodes[i];
    if (node.leaf())
      return TreeAmalgamResult{spec.leaf, {all_vertices(spec.leaf.n)}};
    if (node.right < 0)
      throw InvalidInput("tree amalgam node " + std::to_string(i) +
                         " has one child");
    visiting[i] = 1;
    auto l = eval(node.left);
    auto r = eval(node.right);
    visiting[i] = 0;
    if (!is_embedding(node.f1, node.overlap, l.s) ||
        !is_embedding(node.f2, node.overlap, r.s))
      throw InvalidInput("tree amalgam node " + std::to_string(i) +
                         ": overlap maps are not embeddings");
    if (!inside_irreducible(l.s, image_of(node.f1)))
      throw OverlapNotInIrreducible(i, 1);
    if (!inside_irreducible(r.s, image_of(node.f2)))
      throw OverlapNotInIrreducible(i, 2);
    auto am = free_amalgam({node.overlap, l.s, r.s, node.f1, node.f2});
    TreeAmalgamResult out{std::move(am.c), {}};
    for (const auto& c : l.copies) out.copies.push_back(compose(am.beta1, c));
    for (const auto& c : r.copies) out.copies.push_back(compose(am.beta2, c));
    return out;
  };
  return eval(spec.root);
}

// --- Class properties -------------------------------------------------------

std::string to_string(PropertyStatus s) {
  switch (s) {
    case PropertyStatus::Verified: return "verified";
    case PropertyStatus::Violated: return "violated";
    case PropertyStatus::Unknown: return "unknown";
  }
  return "?";
}

int catalog_index(const std::vector<Structure>& catalog, const Structure& s) {
  for (std::size_t i = 0; i < catalog.size(); ++i)
    if (isomorphic(catalog[i], s)) return static_cast<int>(i);
  return -1;
}

std::optional<Amalgam> find_amalgam_in(const std::vector<Structure>& catalog,
                                       const AmalgamationProblem& p,
                                       AmalgamGrade grade, int bound) {
  auto fa = free_amalgam(p);
  if (fa.c.n <= bound) {
    int idx = catalog_index(catalog, fa.c);
    if (idx >= 0) {
      auto iso = first_embedding(fa.c, catalog[idx]);
      return Amalgam{catalog[idx], compose(*iso, fa.beta1),
                     compose(*iso, fa.beta2)};
    }
  }
  const bool strong = grade == AmalgamGrade::Strong;
  std::vector<int> forced(p.right.n, -1);
  for (const auto& c : catalog) {
    if (c.n > bound || c.n < std::max(p.left.n, p.right.n)) continue;
    if (!c.lang.same_symbols(p.left.lang)) continue;
    std::optional<Amalgam> found;
    for_each_embedding(p.left, c, {}, [&](const VertexMap& b1) {
      std::vector<char> used(c.n, 0);
      for (int v : b1) used[v] = 1;
      std::fill(forced.begin(), forced.end(), -1);
      for (int a = 0; a < p.base.n; ++a) forced[p.alpha2[a]] = b1[p.alpha1[a]];
      std::vector<std::vector<int>> cand(p.right.n);
      for (int v = 0; v < p.right.n; ++v) {
        if (forced[v] >= 0) {
          cand[v] = {forced[v]};
          continue;
        }
        for (int w = 0; w < c.n; ++w)
          if (!strong || !used[w]) cand[v].push_back(w);
      }
      EmbeddingConstraints ec;
      ec.candidates = std::move(cand);
      if (auto b2 = first_embedding(p.right, c, ec)) {
        found = Amalgam{c, b1, *b2};
        return false;
      }
      return true;
    });
    if (found) return found;
  }
  return std::nullopt;
}

ClassReport check_class_properties(const std::vector<Structure>& catalog,
                                   int bound, std::int64_t max_nodes) {
  ClassReport rep;
  Budget budget(max_nodes, "class property check");
  const int k = static_cast<int>(catalog.size());

  auto violate = [](PropertyResult& r, std::string what) {
    if (r.status == PropertyStatus::Violated) return;
    r.status = PropertyStatus::Violated;
    r.counterexample = std::move(what);
  };

  try {
    for (int i = 0; i < k; ++i) {
      for (const auto& c : closed_subsets(catalog[i])) {
        if (c.empty() || static_cast<int>(c.size()) == catalog[i].n) continue;
        budget.tick();
        ++rep.hereditary.checked;
        if (catalog_index(catalog, induced_substructure(catalog[i], c).s) < 0)
          violate(rep.hereditary, "member #" + std::to_string(i) +
                                      " substructure on " + show(c) +
                                      " is not in the catalog");
      }
    }
  } catch (const CapExceeded&) {
    if (rep.hereditary.status != PropertyStatus::Violated)
      rep.hereditary.status = PropertyStatus::Unknown;
  }

  auto run_problem = [&](const AmalgamationProblem& p, const std::string& tag,
                         bool joint) {
    budget.tick();
    if (p.left.n + p.right.n - p.base.n > bound) {
      (joint ? rep.jep : rep.ap).skipped++;
      if (!joint) rep.strong_ap.skipped++, rep.free_ap.skipped++;
      return;
    }
    if (joint) {
      ++rep.jep.checked;
      if (!find_amalgam_in(catalog, p, AmalgamGrade::Amalgam, bound))
        violate(rep.jep, tag);
      return;
    }
    ++rep.ap.checked;
    ++rep.strong_ap.checked;
    ++rep.free_ap.checked;
    auto fa = free_amalgam(p);
    if (catalog_index(catalog, fa.c) < 0) violate(rep.free_ap, tag);
    auto st = find_amalgam_in(catalog, p, AmalgamGrade::Strong, bound);
    if (!st) violate(rep.strong_ap, tag);
    if (!st && !find_amalgam_in(catalog, p, AmalgamGrade::Amalgam, bound))
      violate(rep.ap, tag);
  };

  try {
    Structure empty(catalog.empty() ? Language() : catalog[0].lang, 0);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        run_problem({empty, catalog[i], catalog[j], {}, {}},
                    "B1=#" + std::to_string(i) + " B2=#" + std::to_string(j) +
                        " have no joint embedding",
                    true);
  } catch (const CapExceeded&) {
    if (rep.jep.status != PropertyStatus::Violated)
      rep.jep.status = PropertyStatus::Unknown;
  }

  try {
    for (int a = 0; a < k; ++a)
      for (int i = 0; i < k; ++i) {
        if (catalog[i].n < catalog[a].n) continue;
        auto e1 = enumerate_embeddings(catalog[a], catalog[i]);
        for (int j = 0; j < k; ++j) {
          if (catalog[j].n < catalog[a].n) continue;
          auto e2 = enumerate_embeddings(catalog[a], catalog[j]);
          for (const auto& x : e1)
            for (const auto& y : e2)
              run_problem({catalog[a], catalog[i], catalog[j], x.map, y.map},
                          "A=#" + std::to_string(a) + " B1=#" +
                              std::to_string(i) + " B2=#" +
                              std::to_string(j) + " alpha1=" + show(x.map) +
                              " alpha2=" + show(y.map),
                          false);
        }
      }
  } catch (const CapExceeded&) {
    for (auto* r : {&rep.ap, &rep.strong_ap, &rep.free_ap})
      if (r->status != PropertyStatus::Violated)
        r->status = PropertyStatus::Unknown;
  }
  return rep;
}

// --- Forbidden substructures ------------------------------------------------

std::optional<ForbiddenWitness> forbidden_free(
    const Structure& s, const std::vector<Structure>& family,
    ForbidMode mode) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    if (!f.lang.same_symbols(s.lang)) continue;
    std::optional<VertexMap> hit;
    switch (mode) {
      case ForbidMode::Embedding:
        hit = first_embedding(f, s);
        break;
      case ForbidMode::Monomorphism: {
        EmbeddingConstraints c;
        c.monomorphisms_only = true;
        hit = first_embedding(f, s, c);
        break;
      }
      case ForbidMode::Homomorphism:
      case ForbidMode::HomomorphismEmbedding:
        for (auto& h : enumerate_homomorphisms(f, s)) {
          if (mode == ForbidMode::Homomorphism ||
              is_homomorphism_embedding(h, f, s)) {
            hit = h;
            break;
          }
        }
        break;
    }
    if (hit) return ForbiddenWitness{static_cast<int>(i), *hit};
  }
  return std::nullopt;
}

}  // namespace ramsey
