#pragma once

#include "fch/category.hpp"
#include "fch/fincat.hpp"
#include "fch/module.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fch {

/// One summand of a free diagram: the free diagram generated at an object by a
/// free module.
struct FreeSummand {
  std::size_t object;
  ModuleObj module;
};

/// An object of C^I: a module per object of I and a map per morphism of I.
struct Diagram {
  std::shared_ptr<const FinCat> index;
  std::vector<ModuleObj> components;
  std::vector<ModMor> maps;
  // Set when the diagram is the sum of free diagrams with this basis.
  std::optional<std::vector<FreeSummand>> free_basis;

  const ModuleObj& at(std::size_t i) const { return components.at(i); }
  const ModMor& map(std::size_t m) const { return maps.at(m); }
  bool is_free() const { return free_basis.has_value(); }

  friend bool operator==(const Diagram& a, const Diagram& b) {
    if (a.index != b.index && !(*a.index == *b.index)) return false;
    if (a.components != b.components) return false;
    for (std::size_t m = 0; m < a.maps.size(); ++m)
      if (a.maps[m].matrix() != b.maps[m].matrix()) return false;
    return true;
  }
};

/// A morphism of C^I: one module map per object of I.
class DiagMor {
 public:
  DiagMor() = default;
  DiagMor(Diagram source, Diagram target, std::vector<ModMor> components)
      : src_(std::make_shared<const Diagram>(std::move(source))),
        tgt_(std::make_shared<const Diagram>(std::move(target))),
        comps_(std::move(components)) {}
  DiagMor(std::shared_ptr<const Diagram> source, std::shared_ptr<const Diagram> target, std::vector<ModMor> components)
      : src_(std::move(source)), tgt_(std::move(target)), comps_(std::move(components)) {}

  const Diagram& source() const { return *src_; }
  const Diagram& target() const { return *tgt_; }
  const std::shared_ptr<const Diagram>& source_ptr() const { return src_; }
  const std::shared_ptr<const Diagram>& target_ptr() const { return tgt_; }
  const ModMor& at(std::size_t i) const { return comps_.at(i); }
  const std::vector<ModMor>& components() const { return comps_; }

 private:
  std::shared_ptr<const Diagram> src_, tgt_;
  std::vector<ModMor> comps_;
};

inline bool same_diagram(const std::shared_ptr<const Diagram>& a, const std::shared_ptr<const Diagram>& b) {
  return a == b || *a == *b;
}

/// Empty when every functoriality law holds.
inline std::optional<std::string> check_diagram(const Diagram& d) {
  const FinCat& I = *d.index;
  ModuleCategory C(d.components.empty() ? Ring::integers() : d.components.front().ring());
  if (d.components.size() != I.num_objects()) return "wrong number of components";
  if (d.maps.size() != I.num_morphisms()) return "wrong number of structure maps";
  for (std::size_t m = 0; m < I.num_morphisms(); ++m) {
    const auto& a = I.arrow(m);
    const auto& f = d.maps[m];
    if (!(f.source() == d.components[a.source]) || !(f.target() == d.components[a.target]))
      return "structure map " + a.label + " has the wrong source or target";
    if (auto why = f.well_defined_violation()) return "structure map " + a.label + ": " + *why;
  }
  for (std::size_t o = 0; o < I.num_objects(); ++o)
    if (!C.equal(d.maps[I.identity(o)], C.identity(d.components[o])))
      return "identity " + I.arrow(I.identity(o)).label + " is not sent to an identity map";
  for (std::size_t g = 0; g < I.num_morphisms(); ++g)
    for (std::size_t f = 0; f < I.num_morphisms(); ++f) {
      std::size_t h = I.compose(g, f);
      if (h == FinCat::npos) continue;
      if (!C.equal(d.maps[h], C.compose(d.maps[g], d.maps[f])))
        return "map of composite " + I.arrow(g).label + " o " + I.arrow(f).label + " is not the composite of maps";
    }
  return std::nullopt;
}

/// Empty when every naturality square commutes.
inline std::optional<std::string> naturality_violation(const DiagMor& f) {
  const Diagram& A = f.source();
  const Diagram& B = f.target();
  const FinCat& I = *A.index;
  if (f.components().size() != I.num_objects()) return "wrong number of components";
  ModuleCategory C(A.components.empty() ? Ring::integers() : A.components.front().ring());
  for (std::size_t i = 0; i < I.num_objects(); ++i) {
    if (!(f.at(i).source() == A.at(i)) || !(f.at(i).target() == B.at(i)))
      return "component " + I.objects()[i] + " has the wrong source or target";
    if (auto why = f.at(i).well_defined_violation()) return "component " + I.objects()[i] + ": " + *why;
  }
  for (std::size_t m = 0; m < I.num_morphisms(); ++m) {
    const auto& a = I.arrow(m);
    if (!C.equal(C.compose(B.map(m), f.at(a.source)), C.compose(f.at(a.target), A.map(m))))
      return "naturality square for " + a.label + " does not commute";
  }
  return std::nullopt;
}

/// The functor category C^I for a finite I and a module category C.
class DiagramCategory {
 public:
  using Object = Diagram;
  using Morphism = DiagMor;

  DiagramCategory(std::shared_ptr<const FinCat> index, ModuleCategory base)
      : index_(std::move(index)), base_(std::move(base)) {
    index_->require_valid();
  }
  DiagramCategory(const FinCat& index, ModuleCategory base)
      : DiagramCategory(std::make_shared<const FinCat>(index), std::move(base)) {}

  const FinCat& index() const { return *index_; }
  const std::shared_ptr<const FinCat>& index_ptr() const { return index_; }
  const ModuleCategory& base() const { return base_; }

  /// Assemble a diagram from per-object modules and per-morphism maps.
  Diagram make(std::vector<ModuleObj> comps, std::vector<ModMor> maps) const {
    Diagram d{index_, std::move(comps), std::move(maps), std::nullopt};
    if (auto why = check_diagram(d)) throw std::invalid_argument("invalid diagram: " + *why);
    return d;
  }

  DiagMor make_morphism(const Diagram& a, const Diagram& b, std::vector<ModMor> comps) const {
    DiagMor f(a, b, std::move(comps));
    if (auto why = naturality_violation(f)) throw std::invalid_argument("invalid diagram morphism: " + *why);
    return f;
  }

  /// All components A, all structure maps the identity.
  Diagram constant(const ModuleObj& a) const {
    std::vector<ModuleObj> comps(index_->num_objects(), a);
    std::vector<ModMor> maps(index_->num_morphisms(), base_.identity(a));
    return Diagram{index_, std::move(comps), std::move(maps), std::nullopt};
  }

  DiagMor constant(const ModMor& f) const {
    return DiagMor(constant(f.source()), constant(f.target()), std::vector<ModMor>(index_->num_objects(), f));
  }

  Diagram zero_object() const { return free_sum({}); }

  DiagMor identity(const Diagram& a) const {
    std::vector<ModMor> c;
    for (const auto& m : a.components) c.push_back(base_.identity(m));
    auto p = std::make_shared<const Diagram>(a);
    return DiagMor(p, p, std::move(c));
  }

  DiagMor zero_morphism(const Diagram& a, const Diagram& b) const {
    std::vector<ModMor> c;
    for (std::size_t i = 0; i < a.components.size(); ++i) c.push_back(base_.zero_morphism(a.at(i), b.at(i)));
    return DiagMor(a, b, std::move(c));
  }

  DiagMor compose(const DiagMor& g, const DiagMor& f) const {
    if (!same_diagram(f.target_ptr(), g.source_ptr())) throw std::invalid_argument("compose: target of f != source of g");
    std::vector<ModMor> c;
    for (std::size_t i = 0; i < f.components().size(); ++i) c.push_back(base_.compose(g.at(i), f.at(i)));
    return DiagMor(f.source_ptr(), g.target_ptr(), std::move(c));
  }

  DiagMor add(const DiagMor& f, const DiagMor& g) const {
    if (!same_diagram(f.source_ptr(), g.source_ptr()) || !same_diagram(f.target_ptr(), g.target_ptr()))
      throw std::invalid_argument("add: morphisms are not parallel");
    std::vector<ModMor> c;
    for (std::size_t i = 0; i < f.components().size(); ++i) c.push_back(base_.add(f.at(i), g.at(i)));
    return DiagMor(f.source_ptr(), f.target_ptr(), std::move(c));
  }

  DiagMor negate(const DiagMor& f) const {
    std::vector<ModMor> c;
    for (const auto& m : f.components()) c.push_back(base_.negate(m));
    return DiagMor(f.source_ptr(), f.target_ptr(), std::move(c));
  }

  bool is_zero(const DiagMor& f) const {
    for (const auto& m : f.components())
      if (!base_.is_zero(m)) return false;
    return true;
  }

  bool equal(const DiagMor& f, const DiagMor& g) const {
    if (!same_diagram(f.source_ptr(), g.source_ptr()) || !same_diagram(f.target_ptr(), g.target_ptr())) return false;
    for (std::size_t i = 0; i < f.components().size(); ++i)
      if (!base_.equal(f.at(i), g.at(i))) return false;
    return true;
  }

  bool is_zero_object(const Diagram& a) const {
    for (const auto& m : a.components)
      if (!m.is_zero()) return false;
    return true;
  }

  struct KernelResult {
    Diagram object;
    DiagMor mono;
  };
  struct CokernelResult {
    Diagram object;
    DiagMor epi;
  };

  /// Componentwise kernels; the structure map over u: i -> j is the
  /// factorization of A(u) o m^i through m^j.
  KernelResult kernel(const DiagMor& f) const {
    const FinCat& I = *index_;
    const Diagram& A = f.source();
    std::vector<ModuleObj> comps;
    std::vector<ModMor> monos;
    for (std::size_t i = 0; i < I.num_objects(); ++i) {
      auto k = base_.kernel(f.at(i));
      comps.push_back(k.object);
      monos.push_back(k.mono);
    }
    std::vector<ModMor> maps;
    for (std::size_t m = 0; m < I.num_morphisms(); ++m) {
      const auto& a = I.arrow(m);
      auto g = base_.factor_through_mono(monos[a.target], base_.compose(A.map(m), monos[a.source]));
      if (!g) throw std::logic_error("d_kernel: structure map does not restrict to kernels");
      maps.push_back(*g);
    }
    Diagram K{index_, std::move(comps), std::move(maps), std::nullopt};
    return {K, DiagMor(std::make_shared<const Diagram>(K), f.source_ptr(), std::move(monos))};
  }

  CokernelResult cokernel(const DiagMor& f) const {
    const FinCat& I = *index_;
    const Diagram& B = f.target();
    std::vector<ModuleObj> comps;
    std::vector<ModMor> epis;
    for (std::size_t i = 0; i < I.num_objects(); ++i) {
      auto q = base_.cokernel(f.at(i));
      comps.push_back(q.object);
      epis.push_back(q.epi);
    }
    std::vector<ModMor> maps;
    for (std::size_t m = 0; m < I.num_morphisms(); ++m) {
      const auto& a = I.arrow(m);
      auto g = base_.factor_through_epi(epis[a.source], base_.compose(epis[a.target], B.map(m)));
      if (!g) throw std::logic_error("d_cokernel: structure map does not descend to cokernels");
      maps.push_back(*g);
    }
    Diagram Q{index_, std::move(comps), std::move(maps), std::nullopt};
    return {Q, DiagMor(f.target_ptr(), std::make_shared<const Diagram>(Q), std::move(epis))};
  }

  /// Coordinate layout of a free diagram: for each component, the blocks
  /// (summand, morphism from the summand's object) in order, with offsets.
  struct Block {
    std::size_t summand;
    std::size_t morphism;
    std::size_t offset;
  };
  std::vector<std::vector<Block>> layout(const std::vector<FreeSummand>& basis) const {
    const FinCat& I = *index_;
    std::vector<std::vector<Block>> out(I.num_objects());
    for (std::size_t j = 0; j < I.num_objects(); ++j) {
      std::size_t off = 0;
      for (std::size_t s = 0; s < basis.size(); ++s)
        for (auto u : I.hom(basis[s].object, j)) {
          out[j].push_back({s, u, off});
          off += basis[s].module.coord_dim();
        }
    }
    return out;
  }

  /// The sum of free diagrams generated by each (object, free module).
  Diagram free_sum(std::vector<FreeSummand> basis) const {
    const FinCat& I = *index_;
    const Ring& R = base_.ring();
    for (const auto& b : basis) {
      if (!b.module.is_free()) throw std::invalid_argument("free_diagram: module must be free");
      if (!(b.module.ring() == R)) throw std::invalid_argument("free_diagram: ring mismatch");
      if (b.object >= I.num_objects()) throw std::invalid_argument("free_diagram: unknown object");
    }
    auto lay = layout(basis);
    std::vector<ModuleObj> comps;
    for (std::size_t j = 0; j < I.num_objects(); ++j) {
      std::size_t rank = 0;
      for (const auto& bl : lay[j]) rank += basis[bl.summand].module.free_rank();
      comps.push_back(ModuleObj::free(R, rank));
    }
    std::vector<ModMor> maps;
    for (std::size_t v = 0; v < I.num_morphisms(); ++v) {
      const auto& a = I.arrow(v);
      auto M = mat_zero(R, comps[a.target].coord_dim(), comps[a.source].coord_dim());
      for (const auto& bl : lay[a.source]) {
        std::size_t vu = I.compose(v, bl.morphism);
        for (const auto& tb : lay[a.target])
          if (tb.summand == bl.summand && tb.morphism == vu) {
            mat_place(M, tb.offset, bl.offset, mat_identity(R, basis[bl.summand].module.coord_dim()));
            break;
          }
      }
      maps.push_back(ModMor::unchecked(comps[a.source], comps[a.target], std::move(M)));
    }
    return Diagram{index_, std::move(comps), std::move(maps), std::move(basis)};
  }

  Diagram free_diagram(std::size_t i, const ModuleObj& P) const { return free_sum({{i, P}}); }

  /// The map out of a free diagram determined by one base map per summand
  /// (from the summand's module to X at the summand's object).
  DiagMor extend_from_free(const Diagram& P, const Diagram& X, const std::vector<ModMor>& h) const {
    const auto& basis = *P.free_basis;
    const FinCat& I = *index_;
    auto lay = layout(basis);
    std::vector<ModMor> comps;
    for (std::size_t j = 0; j < I.num_objects(); ++j) {
      auto M = mat_zero(base_.ring(), X.at(j).coord_dim(), P.at(j).coord_dim());
      for (const auto& bl : lay[j]) mat_place(M, 0, bl.offset, base_.compose(X.map(bl.morphism), h[bl.summand]).matrix());
      comps.push_back(ModMor::unchecked(P.at(j), X.at(j), std::move(M)));
    }
    return DiagMor(P, X, std::move(comps));
  }

  /// Per summand, the restriction of g to the generating copy of its module.
  std::vector<ModMor> restrict_to_basis(const DiagMor& g) const {
    const Diagram& P = g.source();
    const auto& basis = *P.free_basis;
    auto lay = layout(basis);
    std::vector<ModMor> out;
    for (std::size_t s = 0; s < basis.size(); ++s) {
      std::size_t i = basis[s].object;
      std::size_t id = index_->identity(i);
      for (const auto& bl : lay[i])
        if (bl.summand == s && bl.morphism == id) {
          auto M = mat_block(g.at(i).matrix(), 0, bl.offset, g.target().at(i).coord_dim(), basis[s].module.coord_dim());
          out.push_back(ModMor::unchecked(basis[s].module, g.target().at(i), std::move(M)));
          break;
        }
    }
    return out;
  }

  /// h with e o h = g, for g out of a free diagram.
  std::optional<DiagMor> lift(const DiagMor& e, const DiagMor& g) const {
    if (!g.source().is_free()) throw std::invalid_argument("lift: source must be a free diagram");
    const auto& basis = *g.source().free_basis;
    auto gs = restrict_to_basis(g);
    std::vector<ModMor> hs;
    for (std::size_t s = 0; s < basis.size(); ++s) {
      auto h = base_.lift(e.at(basis[s].object), gs[s]);
      if (!h) return std::nullopt;
      hs.push_back(*h);
    }
    auto h = extend_from_free(g.source(), e.source(), hs);
    return DiagMor(g.source_ptr(), e.source_ptr(), h.components());
  }

  std::optional<DiagMor> factor_through_mono(const DiagMor& m, const DiagMor& h) const {
    std::vector<ModMor> c;
    for (std::size_t i = 0; i < index_->num_objects(); ++i) {
      auto k = base_.factor_through_mono(m.at(i), h.at(i));
      if (!k) return std::nullopt;
      c.push_back(*k);
    }
    DiagMor k(h.source_ptr(), m.source_ptr(), std::move(c));
    if (naturality_violation(k)) return std::nullopt;
    return k;
  }

  std::optional<DiagMor> factor_through_epi(const DiagMor& e, const DiagMor& h) const {
    std::vector<ModMor> c;
    for (std::size_t i = 0; i < index_->num_objects(); ++i) {
      auto k = base_.factor_through_epi(e.at(i), h.at(i));
      if (!k) return std::nullopt;
      c.push_back(*k);
    }
    DiagMor k(e.target_ptr(), h.target_ptr(), std::move(c));
    if (naturality_violation(k)) return std::nullopt;
    return k;
  }

  struct Cover {
    Diagram object;
    DiagMor epi;
  };

  /// Sum over objects i of the free diagram on a free cover of A^i, with the evaluation epi.
  Cover free_cover(const Diagram& a) const {
    std::vector<FreeSummand> basis;
    std::vector<ModMor> hs;
    for (std::size_t i = 0; i < index_->num_objects(); ++i) {
      auto c = base_.free_cover(a.at(i));
      basis.push_back({i, c.object});
      hs.push_back(c.epi);
    }
    Diagram P = free_sum(std::move(basis));
    return {P, extend_from_free(P, a, hs)};
  }

  struct Biproduct {
    Diagram object;
    DiagMor in1, in2, pr1, pr2;
  };

  Biproduct biproduct(const Diagram& a, const Diagram& b) const {
    const FinCat& I = *index_;
    std::vector<ModuleObj> comps;
    std::vector<ModuleCategory::Biproduct> parts;
    for (std::size_t i = 0; i < I.num_objects(); ++i) {
      parts.push_back(base_.biproduct(a.at(i), b.at(i)));
      comps.push_back(parts.back().object);
    }
    std::vector<ModMor> maps;
    for (std::size_t m = 0; m < I.num_morphisms(); ++m) {
      const auto& ar = I.arrow(m);
      const auto& ps = parts[ar.source];
      const auto& pt = parts[ar.target];
      ModMor x = base_.add(base_.compose(pt.in1, base_.compose(a.map(m), ps.pr1)),
                           base_.compose(pt.in2, base_.compose(b.map(m), ps.pr2)));
      maps.push_back(x);
    }
    Diagram s{index_, std::move(comps), std::move(maps), std::nullopt};
    if (a.is_free() && b.is_free()) {
      auto basis = *a.free_basis;
      basis.insert(basis.end(), b.free_basis->begin(), b.free_basis->end());
      s.free_basis = std::move(basis);
    }
    auto sp = std::make_shared<const Diagram>(std::move(s));
    auto ap = std::make_shared<const Diagram>(a);
    auto bp = std::make_shared<const Diagram>(b);
    std::vector<ModMor> i1, i2, p1, p2;
    for (const auto& p : parts) {
      i1.push_back(p.in1);
      i2.push_back(p.in2);
      p1.push_back(p.pr1);
      p2.push_back(p.pr2);
    }
    return {*sp, DiagMor(ap, sp, std::move(i1)), DiagMor(bp, sp, std::move(i2)), DiagMor(sp, ap, std::move(p1)),
            DiagMor(sp, bp, std::move(p2))};
  }

  DiagMor random_from_free(const Diagram& P, const Diagram& X, std::mt19937_64& rng, long bound = 3) const {
    if (!P.is_free()) throw std::invalid_argument("random_from_free: source must be a free diagram");
    std::vector<ModMor> hs;
    for (const auto& s : *P.free_basis) hs.push_back(base_.random_from_free(s.module, X.at(s.object), rng, bound));
    return extend_from_free(P, X, hs);
  }

 private:
  std::shared_ptr<const FinCat> index_;
  ModuleCategory base_;
};

static_assert(AbelianCategory<ModuleCategory>);
static_assert(AbelianCategory<DiagramCategory>);

/// pi^i on objects and morphisms.
inline const ModuleObj& projection(const Diagram& d, std::size_t i) { return d.at(i); }
inline const ModMor& projection(const DiagMor& f, std::size_t i) { return f.at(i); }

/// gamma over a morphism of the index: the structure map.
inline const ModMor& gamma(const Diagram& d, std::size_t m) { return d.map(m); }

struct DiagramExactness {
  bool intrinsic = false;
  bool componentwise = false;
  std::optional<std::size_t> failing_component;
};

/// Exactness of f, g at the middle diagram, decided both in C^I and per component.
inline DiagramExactness d_is_exact_at(const DiagramCategory& D, const DiagMor& f, const DiagMor& g) {
  DiagramExactness r;
  r.intrinsic = is_exact_at(D, f, g);
  r.componentwise = true;
  for (std::size_t i = 0; i < D.index().num_objects(); ++i)
    if (!is_exact_at(D.base(), f.at(i), g.at(i))) {
      r.componentwise = false;
      if (!r.failing_component) r.failing_component = i;
    }
  return r;
}

}  // namespace fch
