#pragma once

#include "fch/diagram.hpp"
#include "fch/homology.hpp"

#include <random>
#include <vector>

namespace fch {

struct RandomOptions {
  std::size_t max_summands = 3;  // free summands per random free object
  std::size_t max_rank = 1;      // rank of each summand
  long bound = 3;                // entry bound for integer maps
  std::size_t max_relations = 2;  // free summands of relations per presentation
  bool torsion = true;            // sometimes add a relation k * psi, k in {2, 3}

  RandomOptions relations() const {
    RandomOptions r = *this;
    r.max_summands = max_relations;
    return r;
  }
  RandomOptions single() const {
    RandomOptions r = *this;
    r.max_summands = 1;
    return r;
  }
};

inline ModuleObj random_free(const ModuleCategory& C, std::mt19937_64& rng, const RandomOptions& o = {},
                             std::size_t min_summands = 1) {
  std::uniform_int_distribution<std::size_t> n(min_summands, std::max(min_summands, o.max_summands * o.max_rank));
  return ModuleObj::free(C.ring(), n(rng));
}

inline Diagram random_free(const DiagramCategory& D, std::mt19937_64& rng, const RandomOptions& o = {},
                           std::size_t min_summands = 1) {
  std::uniform_int_distribution<std::size_t> nsum(min_summands, std::max(min_summands, o.max_summands));
  std::uniform_int_distribution<std::size_t> obj(0, D.index().num_objects() - 1);
  std::uniform_int_distribution<std::size_t> rank(1, o.max_rank);
  std::vector<FreeSummand> basis;
  std::size_t n = nsum(rng);
  for (std::size_t k = 0; k < n; ++k) basis.push_back({obj(rng), ModuleObj::free(D.base().ring(), rank(rng))});
  return D.free_sum(std::move(basis));
}

inline Diagram random_free_diagram(const DiagramCategory& D, std::mt19937_64& rng, const RandomOptions& o = {},
                                   std::size_t min_summands = 1) {
  return random_free(D, rng, o, min_summands);
}

/// An object together with the free presentation it was built from:
/// object = coker(relations), quotient: free -> object.
template <class Obj, class Mor>
struct Presented {
  Obj free;
  Mor relations;
  Obj object;
  Mor quotient;
};

template <AbelianCategory C>
using PresentedOf = Presented<typename C::Object, typename C::Morphism>;
using PresentedDiagram = PresentedOf<DiagramCategory>;

template <AbelianCategory C>
typename C::Morphism sum_of_maps_from(const C& c, const std::vector<typename C::Morphism>& maps,
                                      const typename C::Object& target, typename C::Object* source_out) {
  std::vector<typename C::Object> srcs;
  for (const auto& m : maps) srcs.push_back(m.source());
  auto bp = biproduct_of(c, srcs);
  auto all = c.zero_morphism(bp.object, target);
  for (std::size_t k = 0; k < maps.size(); ++k) all = c.add(all, c.compose(maps[k], bp.pr[k]));
  if (source_out) *source_out = bp.object;
  return all;
}

template <AbelianCategory C>
PresentedOf<C> random_presented(const C& c, std::mt19937_64& rng, const RandomOptions& o = {}) {
  auto P = random_free(c, rng, o);
  auto Q = random_free(c, rng, o.relations(), 0);
  auto phi = c.random_from_free(Q, P, rng, o.bound);
  if (o.torsion && std::uniform_int_distribution<int>(0, 1)(rng)) {
    auto S = random_free(c, rng, o.single());
    auto psi = c.random_from_free(S, P, rng, o.bound);
    auto k = c.add(psi, psi);
    if (std::uniform_int_distribution<int>(0, 1)(rng)) k = c.add(k, psi);
    phi = sum_of_maps_from(c, {phi, k}, P, nullptr);
  }
  auto q = c.cokernel(phi);
  return {P, phi, q.object, q.epi};
}

inline Diagram random_diagram(const DiagramCategory& D, std::mt19937_64& rng, const RandomOptions& o = {}) {
  return random_presented(D, rng, o).object;
}

/// A random finitely generated module: a cokernel of a random map of frees.
inline ModuleObj random_module(const ModuleCategory& C, std::mt19937_64& rng, const RandomOptions& o = {}) {
  return random_presented(C, rng, o).object;
}

/// A random morphism out of a presented object: theta on the free part, the
/// target presented by the image of the old relations plus fresh ones.
template <AbelianCategory C>
struct RandomMorphism {
  PresentedOf<C> target;
  typename C::Morphism map;
  typename C::Morphism theta;  // free(A) -> free(B)
};

template <AbelianCategory C>
RandomMorphism<C> random_morphism_from(const C& c, const PresentedOf<C>& a, std::mt19937_64& rng,
                                       const RandomOptions& o = {}) {
  auto P2 = random_free(c, rng, o);
  auto theta = c.random_from_free(a.free, P2, rng, o.bound);
  auto Q2 = random_free(c, rng, o.relations(), 0);
  auto fresh = c.random_from_free(Q2, P2, rng, o.bound);
  auto all = sum_of_maps_from(c, {c.compose(theta, a.relations), fresh}, P2, nullptr);
  auto q = c.cokernel(all);
  PresentedOf<C> b{P2, all, q.object, q.epi};
  auto f = c.factor_through_epi(a.quotient, c.compose(q.epi, theta));
  if (!f) throw std::logic_error("random_morphism_from: induced map does not descend");
  return {b, *f, theta};
}

enum class PairKind { CokernelExact, KernelExact, ZeroComposite };

template <AbelianCategory C>
struct ComposablePair {
  typename C::Morphism f, g;
  PairKind kind;
};

/// f: A -> B, g: B -> C with g o f = 0; the first two kinds are exact at B.
template <AbelianCategory C>
ComposablePair<C> random_composable_pair(const C& c, std::mt19937_64& rng, PairKind kind, const RandomOptions& o = {}) {
  auto A = random_presented(c, rng, o);
  auto fm = random_morphism_from(c, A, rng, o);
  switch (kind) {
    case PairKind::CokernelExact:
      return {fm.map, c.cokernel(fm.map).epi, kind};
    case PairKind::KernelExact:
      return {c.kernel(fm.map).mono, fm.map, kind};
    case PairKind::ZeroComposite:
    default: {
      const auto& B = fm.target;
      auto P3 = random_free(c, rng, o);
      auto psi = c.random_from_free(B.free, P3, rng, o.bound);
      auto Q3 = random_free(c, rng, o.relations(), 0);
      auto all = sum_of_maps_from(
          c, {c.compose(psi, B.relations), c.compose(psi, fm.theta), c.random_from_free(Q3, P3, rng, o.bound)}, P3,
          nullptr);
      auto q = c.cokernel(all);
      auto g = c.factor_through_epi(B.quotient, c.compose(q.epi, psi));
      if (!g) throw std::logic_error("random_composable_pair: induced map does not descend");
      return {fm.map, *g, kind};
    }
  }
}

/// A random homomorphism A -> B of modules (through the free cover of A, when it descends).
inline ModMor random_module_map(const ModuleCategory& C, const ModuleObj& A, const ModuleObj& B, std::mt19937_64& rng,
                                long bound = 3) {
  auto cov = C.free_cover(A);
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto h = C.random_from_free(cov.object, B, rng, bound);
    if (auto f = C.factor_through_epi(cov.epi, h)) return *f;
  }
  return C.zero_morphism(A, B);
}

/// Z/n_1 + ... with orders drawn from {0, 2..max_order}.
inline ModuleObj random_cyclic_sum(std::mt19937_64& rng, std::size_t max_summands = 2, long max_order = 6,
                                   bool allow_free = true) {
  std::uniform_int_distribution<std::size_t> ns(1, max_summands);
  std::uniform_int_distribution<long> ord(allow_free ? 1 : 2, max_order);
  std::vector<long> orders;
  std::size_t n = ns(rng);
  for (std::size_t k = 0; k < n; ++k) {
    long v = ord(rng);
    orders.push_back(v == 1 ? 0 : v);
  }
  return ModuleObj::cyclic_sum(orders);
}

/// A SES 0 -> L -> M -> N -> 0 with L the image of a random map into a random M.
template <AbelianCategory C>
struct RandomSES {
  PresentedOf<C> middle;
  SESOf<C> ses;
};

template <AbelianCategory C>
SESOf<C> ses_from_submodule(const C& c, const typename C::Morphism& into_m) {
  auto im = image(c, into_m);
  return SESOf<C>{im.mono, c.cokernel(im.mono).epi};
}

template <AbelianCategory C>
RandomSES<C> random_ses(const C& c, std::mt19937_64& rng, const RandomOptions& o = {}) {
  auto M = random_presented(c, rng, o);
  auto S = random_free(c, rng, o.single());
  return {M, ses_from_submodule(c, c.random_from_free(S, M.object, rng, o.bound))};
}

/// A random morphism of SESs out of s, with its target SES.
template <AbelianCategory C>
struct RandomSESMorphism {
  RandomSES<C> target;
  SESMorphism<typename C::Morphism> map;
};

template <AbelianCategory C>
RandomSESMorphism<C> random_ses_morphism(const C& c, const RandomSES<C>& s, std::mt19937_64& rng,
                                         const RandomOptions& o = {}) {
  auto bm = random_morphism_from(c, s.middle, rng, o);
  const auto& beta = bm.map;
  auto S = random_free(c, rng, o.single(), 0);
  auto extra = c.random_from_free(S, bm.target.object, rng, o.bound);
  auto into = sum_of_maps_from(c, {c.compose(beta, s.ses.i), extra}, bm.target.object, nullptr);
  auto t = ses_from_submodule(c, into);
  auto alpha = c.factor_through_mono(t.i, c.compose(beta, s.ses.i));
  auto gamma = c.factor_through_epi(s.ses.p, c.compose(t.p, beta));
  if (!alpha || !gamma) throw std::logic_error("random_ses_morphism: induced outer maps do not exist");
  return {{bm.target, t}, {*alpha, beta, *gamma}};
}

}  // namespace fch
