#pragma once

#include <concepts>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace fch {

/// What the generic homology code needs from an abelian category with
/// enough (explicitly free) projectives.
template <class C>
concept AbelianCategory = requires(const C& c, const typename C::Object& a, const typename C::Morphism& f,
                                   std::mt19937_64& rng) {
  { c.zero_object() } -> std::same_as<typename C::Object>;
  { c.identity(a) } -> std::same_as<typename C::Morphism>;
  { c.zero_morphism(a, a) } -> std::same_as<typename C::Morphism>;
  { c.compose(f, f) } -> std::same_as<typename C::Morphism>;
  { c.add(f, f) } -> std::same_as<typename C::Morphism>;
  { c.negate(f) } -> std::same_as<typename C::Morphism>;
  { c.is_zero(f) } -> std::same_as<bool>;
  { c.equal(f, f) } -> std::same_as<bool>;
  { c.is_zero_object(a) } -> std::same_as<bool>;
  c.kernel(f).mono;
  c.cokernel(f).epi;
  c.free_cover(a).epi;
  c.biproduct(a, a).in1;
  { c.lift(f, f) } -> std::same_as<std::optional<typename C::Morphism>>;
  { c.factor_through_mono(f, f) } -> std::same_as<std::optional<typename C::Morphism>>;
  { c.factor_through_epi(f, f) } -> std::same_as<std::optional<typename C::Morphism>>;
  { c.random_from_free(a, a, rng) } -> std::same_as<typename C::Morphism>;
  { f.source() };
  { f.target() };
};

template <class Obj, class Mor>
struct ImageResult {
  Obj object;
  Mor mono;  // into the target
  Mor epi;   // from the source
};

/// im(f) computed as ker(coker(f)); f = mono o epi.
template <AbelianCategory C>
auto image(const C& c, const typename C::Morphism& f) {
  auto q = c.cokernel(f);
  auto k = c.kernel(q.epi);
  auto e = c.factor_through_mono(k.mono, f);
  if (!e) throw std::logic_error("image: morphism does not factor through ker(coker f)");
  return ImageResult<typename C::Object, typename C::Morphism>{k.object, k.mono, *e};
}

template <AbelianCategory C>
bool is_mono(const C& c, const typename C::Morphism& f) {
  return c.is_zero_object(c.kernel(f).object);
}

template <AbelianCategory C>
bool is_epi(const C& c, const typename C::Morphism& f) {
  return c.is_zero_object(c.cokernel(f).object);
}

/// A given morphism is an isomorphism iff its kernel and cokernel vanish.
template <AbelianCategory C>
bool is_iso(const C& c, const typename C::Morphism& f) {
  return is_mono(c, f) && is_epi(c, f);
}

template <AbelianCategory C>
typename C::Morphism inverse(const C& c, const typename C::Morphism& iso) {
  auto inv = c.factor_through_epi(iso, c.identity(iso.source()));
  if (!inv) throw std::invalid_argument("inverse: morphism is not an isomorphism");
  return *inv;
}

/// The canonical map im(f) -> ker(g) for a composable pair with g o f = 0.
template <AbelianCategory C>
typename C::Morphism image_to_kernel(const C& c, const typename C::Morphism& f, const typename C::Morphism& g) {
  if (!c.is_zero(c.compose(g, f))) throw std::invalid_argument("image_to_kernel: composite g o f is nonzero");
  auto im = image(c, f);
  auto ker = c.kernel(g);
  auto m = c.factor_through_mono(ker.mono, im.mono);
  if (!m) throw std::logic_error("image_to_kernel: image not contained in kernel");
  return *m;
}

/// Exactness of A -f-> B -g-> C at B, via the canonical map im(f) -> ker(g).
template <AbelianCategory C>
bool is_exact_at(const C& c, const typename C::Morphism& f, const typename C::Morphism& g) {
  return is_iso(c, image_to_kernel(c, f, g));
}

/// Biproduct of a list of objects with all injections and projections.
template <class Obj, class Mor>
struct MultiBiproduct {
  Obj object;
  std::vector<Mor> in, pr;
};

template <AbelianCategory C>
auto biproduct_of(const C& c, const std::vector<typename C::Object>& parts) {
  using Obj = typename C::Object;
  using Mor = typename C::Morphism;
  MultiBiproduct<Obj, Mor> out{c.zero_object(), {}, {}};
  for (const auto& p : parts) {
    auto b = c.biproduct(out.object, p);
    for (auto& m : out.in) m = c.compose(b.in1, m);
    for (auto& m : out.pr) m = c.compose(m, b.pr1);
    out.in.push_back(b.in2);
    out.pr.push_back(b.pr2);
    out.object = b.object;
  }
  return out;
}

template <AbelianCategory C>
typename C::Morphism sum(const C& c, const std::vector<typename C::Morphism>& fs) {
  if (fs.empty()) throw std::invalid_argument("sum: empty list");
  auto s = fs.front();
  for (std::size_t k = 1; k < fs.size(); ++k) s = c.add(s, fs[k]);
  return s;
}

}  // namespace fch
