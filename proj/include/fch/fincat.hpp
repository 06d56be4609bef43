#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace fch {

/// A finite category with an explicit full composition table.
///
/// Objects and morphisms are kept sorted by label; every enumeration below
/// follows that order.
class FinCat {
 public:
  struct Arrow {
    std::string label;
    std::size_t source = 0;
    std::size_t target = 0;
  };
  struct ArrowSpec {
    std::string label, source, target;
  };
  /// g o f = h, by label.
  struct CompositionSpec {
    std::string g, f, h;
  };

  FinCat() = default;

  /// Builds the raw table; call validate() for the category laws.
  static FinCat from_labels(std::vector<std::string> objects, std::vector<ArrowSpec> arrows,
                            const std::map<std::string, std::string>& identities,
                            const std::vector<CompositionSpec>& composition) {
    std::sort(objects.begin(), objects.end());
    if (std::adjacent_find(objects.begin(), objects.end()) != objects.end())
      throw std::invalid_argument("category: duplicate object label");
    std::sort(arrows.begin(), arrows.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    FinCat c;
    c.objects_ = objects;
    for (const auto& a : arrows) {
      if (!c.arrows_.empty() && c.arrows_.back().label == a.label)
        throw std::invalid_argument("category: duplicate morphism label " + a.label);
      c.arrows_.push_back({a.label, c.object_index(a.source), c.object_index(a.target)});
    }
    c.identity_.assign(objects.size(), npos);
    for (const auto& [obj, mor] : identities) c.identity_[c.object_index(obj)] = c.morphism_index(mor);
    c.table_.assign(c.arrows_.size(), std::vector<std::size_t>(c.arrows_.size(), npos));
    for (const auto& comp : composition)
      c.table_[c.morphism_index(comp.g)][c.morphism_index(comp.f)] = c.morphism_index(comp.h);
    return c;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t num_objects() const { return objects_.size(); }
  std::size_t num_morphisms() const { return arrows_.size(); }
  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const Arrow& arrow(std::size_t m) const { return arrows_.at(m); }
  std::size_t identity(std::size_t obj) const { return identity_.at(obj); }
  bool is_identity(std::size_t m) const { return identity_.at(arrows_.at(m).source) == m; }

  /// g o f, or npos when not composable.
  std::size_t compose(std::size_t g, std::size_t f) const { return table_.at(g).at(f); }

  std::size_t object_index(const std::string& label) const {
    auto it = std::lower_bound(objects_.begin(), objects_.end(), label);
    if (it == objects_.end() || *it != label) throw std::invalid_argument("unknown object " + label);
    return static_cast<std::size_t>(it - objects_.begin());
  }
  std::size_t morphism_index(const std::string& label) const {
    auto it = std::lower_bound(arrows_.begin(), arrows_.end(), label,
                               [](const Arrow& a, const std::string& l) { return a.label < l; });
    if (it == arrows_.end() || it->label != label) throw std::invalid_argument("unknown morphism " + label);
    return static_cast<std::size_t>(it - arrows_.begin());
  }

  /// Morphisms i -> j in label order.
  std::vector<std::size_t> hom(std::size_t i, std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < arrows_.size(); ++m)
      if (arrows_[m].source == i && arrows_[m].target == j) out.push_back(m);
    return out;
  }

  /// Empty when all laws hold; otherwise names the first failure.
  std::optional<std::string> validate() const {
    const std::size_t n = arrows_.size();
    for (std::size_t o = 0; o < objects_.size(); ++o) {
      std::size_t id = identity_[o];
      if (id == npos) return "object " + objects_[o] + " has no identity";
      if (arrows_[id].source != o || arrows_[id].target != o)
        return "identity " + arrows_[id].label + " of " + objects_[o] + " is not an endomorphism of it";
    }
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t f = 0; f < n; ++f) {
        bool composable = arrows_[f].target == arrows_[g].source;
        std::size_t h = table_[g][f];
        if (composable && h == npos) return "composite " + arrows_[g].label + " o " + arrows_[f].label + " is missing";
        if (!composable && h != npos)
          return "composite " + arrows_[g].label + " o " + arrows_[f].label + " is defined but not composable";
        if (composable && (arrows_[h].source != arrows_[f].source || arrows_[h].target != arrows_[g].target))
          return "composite " + arrows_[g].label + " o " + arrows_[f].label + " has the wrong source or target";
      }
    for (std::size_t f = 0; f < n; ++f) {
      if (table_[identity_[arrows_[f].target]][f] != f)
        return "left identity law fails for " + arrows_[f].label;
      if (table_[f][identity_[arrows_[f].source]] != f)
        return "right identity law fails for " + arrows_[f].label;
    }
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t g = 0; g < n; ++g) {
        if (table_[h][g] == npos) continue;
        for (std::size_t f = 0; f < n; ++f) {
          if (table_[g][f] == npos) continue;
          if (table_[table_[h][g]][f] != table_[h][table_[g][f]])
            return "associativity fails on triple (" + arrows_[h].label + ", " + arrows_[g].label + ", " +
                   arrows_[f].label + ")";
        }
      }
    return std::nullopt;
  }

  void require_valid() const {
    if (auto why = validate()) throw std::invalid_argument("invalid category: " + *why);
  }

  /// Arrows reversed; labels unchanged.
  FinCat opposite() const {
    FinCat c = *this;
    for (auto& a : c.arrows_) std::swap(a.source, a.target);
    for (std::size_t g = 0; g < arrows_.size(); ++g)
      for (std::size_t f = 0; f < arrows_.size(); ++f) c.table_[f][g] = table_[g][f];
    return c;
  }

  static std::string pair_label(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

  /// I x J with objects and morphisms labelled "(a,b)".
  static FinCat product(const FinCat& I, const FinCat& J) {
    I.require_valid();
    J.require_valid();
    std::vector<std::string> objs;
    for (const auto& a : I.objects_)
      for (const auto& b : J.objects_) objs.push_back(pair_label(a, b));
    std::vector<ArrowSpec> arrows;
    for (const auto& u : I.arrows_)
      for (const auto& v : J.arrows_)
        arrows.push_back({pair_label(u.label, v.label), pair_label(I.objects_[u.source], J.objects_[v.source]),
                          pair_label(I.objects_[u.target], J.objects_[v.target])});
    std::map<std::string, std::string> ids;
    for (std::size_t a = 0; a < I.num_objects(); ++a)
      for (std::size_t b = 0; b < J.num_objects(); ++b)
        ids[pair_label(I.objects_[a], J.objects_[b])] =
            pair_label(I.arrows_[I.identity_[a]].label, J.arrows_[J.identity_[b]].label);
    std::vector<CompositionSpec> comp;
    for (std::size_t g1 = 0; g1 < I.num_morphisms(); ++g1)
      for (std::size_t f1 = 0; f1 < I.num_morphisms(); ++f1) {
        std::size_t h1 = I.table_[g1][f1];
        if (h1 == npos) continue;
        for (std::size_t g2 = 0; g2 < J.num_morphisms(); ++g2)
          for (std::size_t f2 = 0; f2 < J.num_morphisms(); ++f2) {
            std::size_t h2 = J.table_[g2][f2];
            if (h2 == npos) continue;
            comp.push_back({pair_label(I.arrows_[g1].label, J.arrows_[g2].label),
                            pair_label(I.arrows_[f1].label, J.arrows_[f2].label),
                            pair_label(I.arrows_[h1].label, J.arrows_[h2].label)});
          }
      }
    FinCat c = from_labels(std::move(objs), std::move(arrows), ids, comp);
    c.require_valid();
    return c;
  }

  /// Index in product(I, J) of the object (a, b) / morphism (u, v).
  static std::size_t product_object(const FinCat& P, const FinCat& I, const FinCat& J, std::size_t a, std::size_t b) {
    return P.object_index(pair_label(I.objects_[a], J.objects_[b]));
  }
  static std::size_t product_morphism(const FinCat& P, const FinCat& I, const FinCat& J, std::size_t u, std::size_t v) {
    return P.morphism_index(pair_label(I.arrows_[u].label, J.arrows_[v].label));
  }

  /// One object "*" with morphisms labelled by the monoid elements.
  static FinCat monoid(const std::vector<std::string>& labels, const std::vector<std::vector<std::size_t>>& table) {
    const std::size_t n = labels.size();
    if (table.size() != n) throw std::invalid_argument("monoid: table size mismatch");
    std::vector<ArrowSpec> arrows;
    for (const auto& l : labels) arrows.push_back({l, "*", "*"});
    std::vector<CompositionSpec> comp;
    std::optional<std::string> unit;
    for (std::size_t a = 0; a < n; ++a) {
      if (table[a].size() != n) throw std::invalid_argument("monoid: table not square");
      bool is_unit = true;
      for (std::size_t b = 0; b < n; ++b) {
        if (table[a][b] >= n) throw std::invalid_argument("monoid: entry out of range");
        comp.push_back({labels[a], labels[b], labels[table[a][b]]});
        if (table[a][b] != b || table[b][a] != b) is_unit = false;
      }
      if (is_unit && !unit) unit = labels[a];
    }
    if (!unit) throw std::invalid_argument("monoid: no identity element");
    return from_labels({"*"}, arrows, {{"*", *unit}}, comp);
  }

  /// point, arrow, square (commutative), parallel (pair), or cyclicN (monoid Z/N).
  static FinCat standard(const std::string& name) {
    if (name == "point") return from_labels({"0"}, {{"id0", "0", "0"}}, {{"0", "id0"}}, {{"id0", "id0", "id0"}});
    if (name == "arrow") {
      FinCat c = from_labels({"0", "1"}, {{"id0", "0", "0"}, {"id1", "1", "1"}, {"u", "0", "1"}},
                             {{"0", "id0"}, {"1", "id1"}},
                             {{"id0", "id0", "id0"}, {"id1", "id1", "id1"}, {"u", "id0", "u"}, {"id1", "u", "u"}});
      c.require_valid();
      return c;
    }
    if (name == "parallel") {
      FinCat c = from_labels({"0", "1"}, {{"id0", "0", "0"}, {"id1", "1", "1"}, {"u", "0", "1"}, {"v", "0", "1"}},
                             {{"0", "id0"}, {"1", "id1"}},
                             {{"id0", "id0", "id0"},
                              {"id1", "id1", "id1"},
                              {"u", "id0", "u"},
                              {"id1", "u", "u"},
                              {"v", "id0", "v"},
                              {"id1", "v", "v"}});
      c.require_valid();
      return c;
    }
    if (name == "square") {
      // a: 00->01, b: 00->10, c: 01->11, d: 10->11, e = c o a = d o b
      std::vector<ArrowSpec> arrows{{"id00", "00", "00"}, {"id01", "01", "01"}, {"id10", "10", "10"},
                                    {"id11", "11", "11"}, {"a", "00", "01"},    {"b", "00", "10"},
                                    {"c", "01", "11"},    {"d", "10", "11"},    {"e", "00", "11"}};
      std::map<std::string, std::string> ids{{"00", "id00"}, {"01", "id01"}, {"10", "id10"}, {"11", "id11"}};
      std::vector<CompositionSpec> comp;
      for (const auto& a : arrows) {
        comp.push_back({ids.at(a.target), a.label, a.label});
        if (ids.at(a.source) != a.label) comp.push_back({a.label, ids.at(a.source), a.label});
      }
      comp.push_back({"c", "a", "e"});
      comp.push_back({"d", "b", "e"});
      FinCat c = from_labels({"00", "01", "10", "11"}, arrows, ids, comp);
      c.require_valid();
      return c;
    }
    if (name.rfind("cyclic", 0) == 0 && name.size() > 6) {
      std::size_t n = std::stoul(name.substr(6));
      std::vector<std::string> labels;
      std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
      for (std::size_t a = 0; a < n; ++a) {
        labels.push_back("m" + std::to_string(a));
        for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
      }
      return monoid(labels, table);
    }
    throw std::invalid_argument("unknown standard category " + name);
  }

  /// Raw (label-level) description, sufficient to rebuild the table.
  std::vector<CompositionSpec> composition_specs() const {
    std::vector<CompositionSpec> out;
    for (std::size_t g = 0; g < arrows_.size(); ++g)
      for (std::size_t f = 0; f < arrows_.size(); ++f)
        if (table_[g][f] != npos) out.push_back({arrows_[g].label, arrows_[f].label, arrows_[table_[g][f]].label});
    return out;
  }

  friend bool operator==(const FinCat& a, const FinCat& b) {
    if (a.objects_ != b.objects_ || a.identity_ != b.identity_ || a.table_ != b.table_) return false;
    if (a.arrows_.size() != b.arrows_.size()) return false;
    for (std::size_t k = 0; k < a.arrows_.size(); ++k)
      if (a.arrows_[k].label != b.arrows_[k].label || a.arrows_[k].source != b.arrows_[k].source ||
          a.arrows_[k].target != b.arrows_[k].target)
        return false;
    return true;
  }

  // Test hook for planting table defects.
  void set_composite(std::size_t g, std::size_t f, std::size_t h) { table_.at(g).at(f) = h; }

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<std::size_t> identity_;
  std::vector<std::vector<std::size_t>> table_;
};

}  // namespace fch
