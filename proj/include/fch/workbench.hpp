#pragma once

// Elaboration of workbench documents into library objects, the task runner,
// and text / JSON reports.

#include "fch/dsl.hpp"
#include "fch/suites.hpp"

#include <json.hpp>

#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace fch::wb {

using dsl::Decl;
using dsl::Diagnostic;
using dsl::Span;
using dsl::Term;

constexpr std::size_t max_group_order = 16;
constexpr std::size_t max_rank = 64;
constexpr std::size_t max_fp_dim = 256;
constexpr std::size_t max_degree = 8;
constexpr std::size_t max_ss_degree = 6;
constexpr std::size_t max_cases = 10000;
constexpr std::size_t max_objects = 16;
constexpr std::size_t max_arrows = 64;

// ---------------------------------------------------------------- reports

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct TaskReport {
  std::string name, kind;
  bool pass = false;
  std::vector<Table> tables;
  std::vector<std::string> notes;
};

struct Report {
  std::vector<TaskReport> tasks;
  bool pass() const {
    for (const auto& t : tasks)
      if (!t.pass) return false;
    return true;
  }
};

inline std::string render_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t k = 0; k < cells.size(); ++k) s += (k == 0 ? "" : k == 1 ? ": " : " | ") + cells[k];
  return s;
}

inline void emit_table(std::ostream& os, const Table& t) {
  os << "-- " << t.title << "\n";
  std::string h;
  for (std::size_t k = 0; k < t.header.size(); ++k) h += (k ? " | " : "") + t.header[k];
  os << "# " << h << "\n";
  for (const auto& r : t.rows) os << render_row(r) << "\n";
}

inline std::string emit_text(const Report& r) {
  std::ostringstream os;
  Table summary{"summary", {"task", "kind", "status"}, {}};
  std::size_t passed = 0;
  for (const auto& t : r.tasks) {
    os << "== " << t.name << " [" << t.kind << "] " << (t.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& tab : t.tables) emit_table(os, tab);
    for (const auto& n : t.notes) os << "note: " << n << "\n";
    os << "\n";
    summary.rows.push_back({t.name, t.kind, t.pass ? "PASS" : "FAIL"});
    passed += t.pass;
  }
  emit_table(os, summary);
  os << passed << "/" << r.tasks.size() << " tasks pass\n";
  return os.str();
}

/// {"tasks": [{"name", "kind", "status", "tables": [{"title", "header", "rows"}], "notes"}],
///  "summary": {"tasks", "passed", "status"}}
inline std::string emit_json(const Report& r) {
  using J = nlohmann::ordered_json;
  J tasks = J::array();
  std::size_t passed = 0;
  for (const auto& t : r.tasks) {
    J tables = J::array();
    for (const auto& tab : t.tables) {
      J rows = J::array();
      for (const auto& row : tab.rows) rows.push_back(row);
      J jt;
      jt["title"] = tab.title;
      jt["header"] = tab.header;
      jt["rows"] = rows;
      tables.push_back(jt);
    }
    J jt;
    jt["name"] = t.name;
    jt["kind"] = t.kind;
    jt["status"] = t.pass ? "pass" : "fail";
    jt["tables"] = tables;
    jt["notes"] = t.notes;
    tasks.push_back(jt);
    passed += t.pass;
  }
  J out;
  out["tasks"] = tasks;
  out["summary"]["tasks"] = r.tasks.size();
  out["summary"]["passed"] = passed;
  out["summary"]["status"] = r.pass() ? "pass" : "fail";
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------- values

struct ModuleEntry {
  ModuleObj obj;
  std::optional<ModMor> epi;   // coker: the quotient map onto obj
  std::optional<ModMor> mono;  // ker: the inclusion of obj
  std::vector<ModMor> in, pr;  // sum
};

using ModSES = SESOf<ModuleCategory>;
using DiagSES = SESOf<DiagramCategory>;
using CatPtr = std::shared_ptr<const FinCat>;

struct TaskSpec {
  std::string name, kind;
  std::map<std::string, Term> args;
  Span span;
};

using Value = std::variant<Ring, ModuleEntry, ModMor, CatPtr, Diagram, DiagMor, FunctorSpec, ModSES, DiagSES, TaskSpec>;

inline const char* kind_name(const Value& v) {
  static const char* names[] = {"ring",    "module",  "morphism", "category", "diagram",
                                "diagmor", "functor", "ses",      "ses",      "task"};
  return names[v.index()];
}

struct ElabError {
  Span at;
  std::string message;
};

inline const Ring& ring_of(const Diagram& d) {
  if (d.components.empty()) throw std::invalid_argument("diagram over an empty category");
  return d.at(0).ring();
}

inline DiagramCategory category_of(const Diagram& d) { return DiagramCategory(d.index, ModuleCategory(ring_of(d))); }

inline std::string describe(const Diagram& d) {
  std::string s;
  for (std::size_t i = 0; i < d.components.size(); ++i)
    s += (i ? ", " : "") + d.index->objects()[i] + ": " + d.at(i).describe();
  return s;
}

// ---------------------------------------------------------------- workbench

struct RunOptions {
  std::optional<std::string> task;
  std::optional<std::size_t> max_degree;
  std::optional<std::uint64_t> seed;
};

class Workbench {
 public:
  /// Parses and elaborates; diagnostics() is empty iff the document is valid.
  static Workbench load(const std::string& text) {
    Workbench w;
    auto pr = dsl::parse(text);
    w.doc_ = std::move(pr.doc);
    w.diags_ = std::move(pr.diagnostics);
    if (w.diags_.empty()) w.elaborate();
    return w;
  }

  const dsl::Doc& doc() const { return doc_; }
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  bool ok() const { return diags_.empty(); }
  const std::vector<std::string>& task_names() const { return tasks_; }
  std::size_t declaration_count() const { return doc_.decls.size(); }

  Report run(const RunOptions& opt = {}) const {
    Report r;
    if (opt.task && std::find(tasks_.begin(), tasks_.end(), *opt.task) == tasks_.end()) {
      TaskReport t{*opt.task, "?", false, {}, {"no task named '" + *opt.task + "'"}};
      r.tasks.push_back(t);
      return r;
    }
    for (const auto& name : tasks_) {
      if (opt.task && name != *opt.task) continue;
      r.tasks.push_back(run_task(std::get<TaskSpec>(env_.at(name)), opt));
    }
    return r;
  }

  /// One battery by name, with the case count of the first matching verify
  /// task in the document when there is one.
  Report verify(const std::string& suite, std::uint64_t seed) const {
    std::optional<std::size_t> cases;
    for (const auto& name : tasks_) {
      const auto& t = std::get<TaskSpec>(env_.at(name));
      if (t.kind == "verify" && t.args.at("suite").text == suite && t.args.count("cases")) {
        cases = std::size_t(t.args.at("cases").value);
        break;
      }
    }
    TaskSpec t{"verify-" + suite, "verify", {}, {}};
    Term s;
    s.text = suite;
    t.args["suite"] = s;
    if (cases) {
      Term c;
      c.kind = Term::Kind::Int;
      c.value = (long long)*cases;
      c.text = std::to_string(*cases);
      t.args["cases"] = c;
    }
    RunOptions opt;
    opt.seed = seed;
    Report r;
    r.tasks.push_back(run_task(t, opt));
    return r;
  }

  template <class T>
  const T* find(const std::string& name) const {
    auto it = env_.find(name);
    return it == env_.end() ? nullptr : std::get_if<T>(&it->second);
  }

 private:
  // -------------------------------------------------- lookup helpers

  [[noreturn]] static void fail(const Span& at, const std::string& msg) { throw ElabError{at, msg}; }

  const Value& lookup(const Term& t) const {
    if (!t.is_word()) fail(t.span, "expected a name, found '" + dsl::print(t).substr(0, 40) + "'");
    auto it = env_.find(t.text);
    if (it == env_.end()) {
      if (failed_.count(t.text)) fail(t.span, "'" + t.text + "' refers to a declaration that failed");
      fail(t.span, "unresolved name '" + t.text + "'");
    }
    return it->second;
  }

  template <class T>
  const T& get(const Term& t, const char* expected) const {
    const Value& v = lookup(t);
    if (auto p = std::get_if<T>(&v)) return *p;
    fail(t.span, "'" + t.text + "' is a " + kind_name(v) + ", expected a " + expected);
  }

  const Value& get_named(const std::string& name, const Span& at) const {
    Term t;
    t.text = name;
    t.span = at;
    return lookup(t);
  }

  static std::size_t count(const Term& t, std::size_t cap, const char* what, std::size_t lo = 0) {
    if (!t.is_int()) fail(t.span, std::string("expected an integer ") + what);
    if (t.value < (long long)lo || t.value > (long long)cap)
      fail(t.span, std::string(what) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(cap) + "]");
    return std::size_t(t.value);
  }

  static const Term& arg(const std::vector<Term>& body, std::size_t k, const char* what, const Span& at) {
    if (k >= body.size()) fail(at, std::string("missing ") + what);
    return body[k];
  }

  static void expect_arity(const std::vector<Term>& body, std::size_t n, const Span& at) {
    if (body.size() > n) fail(body[n].span, "unexpected '" + dsl::print(body[n]).substr(0, 40) + "'");
    if (body.size() < n) fail(at, "incomplete definition");
  }

  static void check_size(const ModuleObj& m, const Span& at) {
    if (m.is_integer() ? m.coord_dim() > max_rank : m.coord_dim() > max_fp_dim)
      fail(at, "module too large (" + std::to_string(m.coord_dim()) + " coordinates)");
  }

  // -------------------------------------------------- elaboration

  void elaborate() {
    std::size_t task_no = 0;
    for (const auto& d : doc_.decls) {
      std::string name = d.name;
      try {
        if (d.keyword == "task") {
          auto t = elab_task(d, ++task_no);
          name = t.name;
          define(name, d.span, t);
          tasks_.push_back(name);
        } else {
          if (env_.count(name) || failed_.count(name)) fail(d.span, "duplicate name '" + name + "'");
          define(name, d.span, elab_decl(d));
        }
      } catch (const ElabError& e) {
        diags_.push_back({e.at, e.message});
        failed_.insert(name);
      } catch (const std::exception& e) {
        diags_.push_back({d.span, d.keyword + " " + name + ": " + e.what()});
        failed_.insert(name);
      } catch (...) {
        diags_.push_back({d.span, d.keyword + " " + name + ": unknown error"});
        failed_.insert(name);
      }
    }
  }

  void define(const std::string& name, const Span& at, Value v) {
    if (env_.count(name) || failed_.count(name)) fail(at, "duplicate name '" + name + "'");
    env_.emplace(name, std::move(v));
  }

  Value elab_decl(const Decl& d) {
    const auto& k = d.keyword;
    if (k == "ring") return elab_ring(d);
    if (k == "module") return elab_module(d);
    if (k == "morphism") return elab_morphism(d);
    if (k == "category") return elab_category(d);
    if (k == "diagram") return elab_diagram(d);
    if (k == "diagmor") return elab_diagmor(d);
    if (k == "functor") return elab_functor(d.body.at(0), 0);
    if (k == "ses") return elab_ses(d);
    fail(d.span, "unknown declaration '" + k + "'");
  }

  static std::uint32_t prime(const Term& t) {
    auto p = count(t, 251, "prime", 2);
    for (std::size_t q = 2; q * q <= p; ++q)
      if (p % q == 0) fail(t.span, std::to_string(p) + " is not prime");
    return std::uint32_t(p);
  }

  Ring elab_ring(const Decl& d) {
    const auto& b = d.body;
    if (b.empty() || (b.size() == 1 && b[0].is_word("integers"))) return Ring::integers();
    if (b[0].is_word("field")) {
      expect_arity(b, 2, d.span);
      return Ring::prime_field(prime(b[1]));
    }
    if (b[0].is_word("group")) {
      // group p cyclic n [x cyclic m ...]
      const auto p = prime(arg(b, 1, "prime", d.span));
      GroupTable table;
      std::size_t order = 1, k = 2;
      while (true) {
        const Term& c = arg(b, k, "'cyclic'", d.span);
        if (!c.is_word("cyclic")) fail(c.span, "expected 'cyclic'");
        auto n = count(arg(b, k + 1, "cyclic order", d.span), max_group_order, "cyclic order", 1);
        order *= n;
        if (order > max_group_order) fail(c.span, "group order exceeds " + std::to_string(max_group_order));
        table = table.empty() ? cyclic_group_table(n) : product_group_table(table, cyclic_group_table(n));
        k += 2;
        if (k == b.size()) break;
        if (!b[k].is_word("x")) fail(b[k].span, "expected 'x' between cyclic factors");
        ++k;
      }
      return group_algebra(p, table, {}, d.name);
    }
    fail(b[0].span, "expected integers, field p or group p cyclic n");
  }

  // ring element: an integer (multiple of 1) or a coefficient list
  static FpVector element(const Ring& R, const Term& t) {
    if (t.is_int()) {
      FpVector v = R.unit();
      for (auto& x : v) x = FpMatrix::reduce(R.prime(), (long)((t.value % (long long)R.prime()) * (long long)x));
      return v;
    }
    if (!t.is_list() || t.items.size() != R.dim())
      fail(t.span, "expected a ring element: an integer or a list of " + std::to_string(R.dim()) + " coefficients");
    FpVector v;
    for (const auto& c : t.items) {
      if (!c.is_int()) fail(c.span, "expected an integer coefficient");
      v.push_back(FpMatrix::reduce(R.prime(), (long)(c.value % (long long)R.prime())));
    }
    return v;
  }

  // [[..], ..]: rows of terms, all of the same length
  static std::vector<std::vector<const Term*>> matrix(const Term& t) {
    if (!t.is_list()) fail(t.span, "expected a matrix [[..], ..]");
    if (t.items.size() > max_rank) fail(t.span, "matrix too large");
    std::vector<std::vector<const Term*>> rows;
    for (const auto& r : t.items) {
      if (!r.is_list()) fail(r.span, "expected a matrix row [..]");
      if (r.items.size() > max_rank) fail(r.span, "matrix too large");
      rows.emplace_back();
      for (const auto& x : r.items) rows.back().push_back(&x);
      if (rows.back().size() != rows.front().size()) fail(r.span, "matrix rows have different lengths");
    }
    return rows;
  }

  static IntMatrix int_matrix(const Term& t, std::size_t* cols_out = nullptr) {
    auto rows = matrix(t);
    const std::size_t c = rows.empty() ? 0 : rows[0].size();
    IntMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < c; ++j) {
        if (!rows[i][j]->is_int()) fail(rows[i][j]->span, "expected an integer entry");
        m(i, j) = Int(std::to_string(rows[i][j]->value));
      }
    if (cols_out) *cols_out = c;
    return m;
  }

  // x -> sum over generators: column i is the image of generator i, entry (j, i) a ring element
  static ModMor mult_map(const Ring& R, const Term& t, const ModuleObj* src, const ModuleObj* tgt) {
    auto rows = matrix(t);
    const std::size_t b = rows.size(), a = rows.empty() ? 0 : rows[0].size();
    ModuleObj A = src ? *src : ModuleObj::free(R, a);
    ModuleObj B = tgt ? *tgt : ModuleObj::free(R, b);
    if (R.is_integers()) {
      if (A.coord_dim() != a || B.coord_dim() != b) fail(t.span, "matrix shape does not match the modules");
      return ModMor::make(A, B, int_matrix(t));
    }
    const std::size_t d = R.dim();
    if (A.coord_dim() != a * d || B.coord_dim() != b * d) fail(t.span, "matrix shape does not match the free modules");
    FpMatrix m(R.prime(), b * d, a * d);
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t i = 0; i < a; ++i) {
        FpMatrix block = R.right_mult(element(R, *rows[j][i]));
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c) m(j * d + r, i * d + c) = block(r, c);
      }
    return ModMor::make(A, B, m);
  }

  ModuleEntry elab_module(const Decl& d) {
    const Ring& R = get<Ring>(Term{Term::Kind::Word, d.over, 0, {}, {}, d.span}, "ring");
    ModuleCategory C(R);
    const auto& b = d.body;
    const Term& head = b[0];
    ModuleEntry e;
    if (head.is_word("free")) {
      expect_arity(b, 2, d.span);
      e.obj = ModuleObj::free(R, count(b[1], max_rank, "rank"));
    } else if (head.is_word("zero")) {
      expect_arity(b, 1, d.span);
      e.obj = ModuleObj::zero(R);
    } else if (head.is_word("trivial")) {
      expect_arity(b, 1, d.span);
      e.obj = R.is_integers() ? ModuleObj::cyclic(0) : ModuleObj::trivial(R);
    } else if (head.is_word("cyclic")) {
      if (!R.is_integers()) fail(head.span, "cyclic modules are defined over the integers only");
      if (b.size() < 2) fail(d.span, "missing cyclic order");
      if (b.size() - 1 > max_rank) fail(head.span, "too many summands");
      std::vector<long> orders;
      for (std::size_t k = 1; k < b.size(); ++k) orders.push_back((long)count(b[k], dsl::max_literal, "cyclic order"));
      e.obj = ModuleObj::cyclic_sum(orders);
    } else if (head.is_word("sum")) {
      expect_arity(b, 2, d.span);
      if (!b[1].is_list()) fail(b[1].span, "expected a list of modules");
      std::vector<ModuleObj> parts;
      for (const auto& t : b[1].items) {
        const auto& m = get<ModuleEntry>(t, "module").obj;
        if (!(m.ring() == R)) fail(t.span, "'" + t.text + "' is over a different ring");
        parts.push_back(m);
      }
      auto bp = biproduct_of(C, parts);
      e.obj = bp.object;
      e.in = bp.in;
      e.pr = bp.pr;
    } else if (head.is_word("coker") || head.is_word("ker")) {
      expect_arity(b, 2, d.span);
      ModMor f = b[1].is_list() ? mult_map(R, b[1], nullptr, nullptr) : get<ModMor>(b[1], "morphism");
      if (!(f.source().ring() == R)) fail(b[1].span, "map is over a different ring");
      if (head.is_word("coker")) {
        auto q = C.cokernel(f);
        e.obj = q.object;
        e.epi = q.epi;
      } else {
        auto k = C.kernel(f);
        e.obj = k.object;
        e.mono = k.mono;
      }
    } else {
      fail(head.span, "expected free, zero, trivial, cyclic, sum, coker or ker");
    }
    check_size(e.obj, d.span);
    return e;
  }

  ModMor elab_morphism(const Decl& d) {
    const Span at = d.span;
    const auto& A = get<ModuleEntry>(Term{Term::Kind::Word, d.source, 0, {}, {}, at}, "module");
    const auto& B = get<ModuleEntry>(Term{Term::Kind::Word, d.target, 0, {}, {}, at}, "module");
    if (!(A.obj.ring() == B.obj.ring())) fail(at, "source and target are over different rings");
    ModuleCategory C(A.obj.ring());
    const auto& b = d.body;
    const Term& head = b[0];
    auto with_ends = [&](const ModMor& f, const Span& s) {
      if (!(f.source() == A.obj) || !(f.target() == B.obj)) fail(s, "map does not run " + d.source + " -> " + d.target);
      return ModMor::make(A.obj, B.obj, f.matrix());
    };
    if (head.is_list()) {
      expect_arity(b, 1, at);
      if (A.obj.is_integer()) {
        auto m = int_matrix(head);
        if (m.rows() != B.obj.coord_dim() || m.cols() != A.obj.coord_dim())
          fail(head.span, "matrix must be " + std::to_string(B.obj.coord_dim()) + " x " +
                              std::to_string(A.obj.coord_dim()));
        return ModMor::make(A.obj, B.obj, m);
      }
      auto rows = matrix(head);
      const auto p = A.obj.ring().prime();
      if (rows.size() != B.obj.coord_dim() || (rows.size() && rows[0].size() != A.obj.coord_dim()) ||
          (rows.empty() && B.obj.coord_dim()))
        fail(head.span, "matrix must be " + std::to_string(B.obj.coord_dim()) + " x " +
                            std::to_string(A.obj.coord_dim()));
      FpMatrix m(p, B.obj.coord_dim(), A.obj.coord_dim());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
          if (!rows[i][j]->is_int()) fail(rows[i][j]->span, "expected an integer entry");
          m(i, j) = FpMatrix::reduce(p, (long)(rows[i][j]->value % (long long)p));
        }
      return ModMor::make(A.obj, B.obj, m);
    }
    if (head.is_word("identity")) {
      expect_arity(b, 1, at);
      if (!(A.obj == B.obj)) fail(head.span, "identity needs equal source and target");
      return C.identity(A.obj);
    }
    if (head.is_word("zero")) {
      expect_arity(b, 1, at);
      return C.zero_morphism(A.obj, B.obj);
    }
    if (head.is_word("mult")) {
      expect_arity(b, 2, at);
      return mult_map(A.obj.ring(), b[1], &A.obj, &B.obj);
    }
    if (head.is_word("compose")) {
      expect_arity(b, 3, at);
      const auto& v = get<ModMor>(b[1], "morphism");
      const auto& w = get<ModMor>(b[2], "morphism");
      if (!(w.target() == v.source())) fail(b[1].span, "'" + b[1].text + "' does not follow '" + b[2].text + "'");
      return with_ends(C.compose(v, w), head.span);
    }
    if (head.is_word("descend")) {
      expect_arity(b, 2, at);
      if (!A.epi) fail(head.span, "'" + d.source + "' is not declared as a cokernel");
      const auto& v = get<ModMor>(b[1], "morphism");
      if (!(v.source() == A.epi->source()) || !(v.target() == B.obj))
        fail(b[1].span, "'" + b[1].text + "' must run from the presented module to " + d.target);
      auto f = C.factor_through_epi(*A.epi, v);
      if (!f) fail(b[1].span, "'" + b[1].text + "' does not vanish on the relations");
      return with_ends(*f, head.span);
    }
    if (head.is_word("mono")) {
      expect_arity(b, 1, at);
      if (!A.mono) fail(head.span, "'" + d.source + "' is not declared as a kernel");
      return with_ends(*A.mono, head.span);
    }
    if (head.is_word("quotient")) {
      expect_arity(b, 1, at);
      if (!B.epi) fail(head.span, "'" + d.target + "' is not declared as a cokernel");
      return with_ends(*B.epi, head.span);
    }
    if (head.is_word("inclusion") || head.is_word("projection")) {
      expect_arity(b, 2, at);
      const bool inc = head.is_word("inclusion");
      const auto& sum = inc ? B : A;
      const auto& maps = inc ? sum.in : sum.pr;
      if (maps.empty()) fail(head.span, "'" + (inc ? d.target : d.source) + "' is not declared as a sum");
      auto k = count(b[1], maps.size() - 1, "summand index");
      return with_ends(maps[k], head.span);
    }
    fail(head.span, "expected a matrix, identity, zero, mult, compose, descend, mono, quotient, inclusion or projection");
  }

  static std::string label(const Term& t) {
    if (!t.is_word() && !t.is_int()) fail(t.span, "expected a label");
    return t.text;
  }

  CatPtr elab_category(const Decl& d) {
    const auto& b = d.body;
    const Term& head = b[0];
    FinCat c;
    if (head.is_word("standard")) {
      expect_arity(b, 2, d.span);
      const std::string n = label(b[1]);
      if (n.rfind("cyclic", 0) == 0) {
        const std::string digits = n.substr(6);
        if (digits.empty() || digits.size() > 2 || !std::all_of(digits.begin(), digits.end(), ::isdigit) ||
            std::stoul(digits) < 1 || std::stoul(digits) > max_group_order)
          fail(b[1].span, "cyclicN needs 1 <= N <= " + std::to_string(max_group_order));
      } else if (n != "point" && n != "arrow" && n != "parallel" && n != "square") {
        fail(b[1].span, "unknown standard category '" + n + "'");
      }
      c = FinCat::standard(n);
    } else if (head.is_word("product")) {
      expect_arity(b, 3, d.span);
      const auto& I = get<CatPtr>(b[1], "category");
      const auto& J = get<CatPtr>(b[2], "category");
      if (I->num_objects() * J->num_objects() > max_objects || I->num_morphisms() * J->num_morphisms() > max_arrows)
        fail(head.span, "product category too large");
      c = FinCat::product(*I, *J);
    } else if (head.is_word("explicit")) {
      c = explicit_category(d);
    } else {
      fail(head.span, "expected standard, product or explicit");
    }
    if (c.num_objects() == 0) fail(d.span, "category has no objects");
    c.require_valid();
    return std::make_shared<const FinCat>(std::move(c));
  }

  // explicit objects [a, b] arrows [f(a, b)] compose [h(g, f)]: identities id<obj> are added
  FinCat explicit_category(const Decl& d) {
    const auto& b = d.body;
    std::map<std::string, const Term*> parts;
    for (std::size_t k = 1; k < b.size(); k += 2) {
      const Term& key = b[k];
      if (!key.is_word("objects") && !key.is_word("arrows") && !key.is_word("compose"))
        fail(key.span, "expected objects, arrows or compose");
      if (parts.count(key.text)) fail(key.span, "repeated '" + key.text + "'");
      const Term& val = arg(b, k + 1, "list", d.span);
      if (!val.is_list()) fail(val.span, "expected a list");
      parts[key.text] = &val;
    }
    if (!parts.count("objects")) fail(d.span, "missing objects");
    std::vector<std::string> objects;
    std::vector<FinCat::ArrowSpec> arrows;
    std::map<std::string, std::string> ids;
    std::vector<FinCat::CompositionSpec> comp;
    for (const auto& o : parts["objects"]->items) objects.push_back(label(o));
    if (objects.size() > max_objects) fail(parts["objects"]->span, "too many objects");
    std::set<std::string> seen(objects.begin(), objects.end());
    if (seen.size() != objects.size()) fail(parts["objects"]->span, "duplicate object");
    std::set<std::string> labels;
    for (const auto& o : objects) {
      ids[o] = "id" + o;
      arrows.push_back({"id" + o, o, o});
      labels.insert("id" + o);
    }
    if (parts.count("arrows"))
      for (const auto& a : parts["arrows"]->items) {
        if (a.kind != Term::Kind::Call || a.items.size() != 2) fail(a.span, "expected an arrow f(source, target)");
        auto s = label(a.items[0]), t = label(a.items[1]);
        if (!seen.count(s)) fail(a.items[0].span, "unknown object '" + s + "'");
        if (!seen.count(t)) fail(a.items[1].span, "unknown object '" + t + "'");
        if (!labels.insert(a.text).second) fail(a.span, "duplicate arrow '" + a.text + "'");
        arrows.push_back({a.text, s, t});
      }
    if (arrows.size() > max_arrows) fail(d.span, "too many arrows");
    std::map<std::string, std::pair<std::string, std::string>> ends;
    for (const auto& a : arrows) ends[a.label] = {a.source, a.target};
    for (const auto& a : arrows) {
      comp.push_back({ids[a.target], a.label, a.label});
      if (ids[a.source] != a.label) comp.push_back({a.label, ids[a.source], a.label});
    }
    if (parts.count("compose"))
      for (const auto& c : parts["compose"]->items) {
        if (c.kind != Term::Kind::Call || c.items.size() != 2) fail(c.span, "expected a composite h(g, f)");
        auto g = label(c.items[0]), f = label(c.items[1]);
        for (const std::string* l : {&c.text, static_cast<const std::string*>(&g), static_cast<const std::string*>(&f)})
          if (!labels.count(*l)) fail(c.span, "unknown arrow '" + *l + "'");
        comp.push_back({g, f, c.text});
      }
    return FinCat::from_labels(objects, arrows, ids, comp);
  }

  Diagram elab_diagram(const Decl& d) {
    const auto& I = get<CatPtr>(Term{Term::Kind::Word, d.over, 0, {}, {}, d.span}, "category");
    const auto& b = d.body;
    const Term& head = b[0];
    if (head.is_word("constant")) {
      expect_arity(b, 2, d.span);
      const auto& m = get<ModuleEntry>(b[1], "module").obj;
      return DiagramCategory(I, ModuleCategory(m.ring())).constant(m);
    }
    if (head.kind != Term::Kind::Block) fail(head.span, "expected { label: name, ... } or constant M");
    expect_arity(b, 1, d.span);
    std::vector<std::optional<ModuleObj>> comps(I->num_objects());
    std::vector<std::optional<ModMor>> maps(I->num_morphisms());
    std::optional<Ring> ring;
    for (const auto& [lab, val] : head.entries) {
      auto obj = std::find(I->objects().begin(), I->objects().end(), lab);
      if (obj != I->objects().end()) {
        auto& slot = comps[obj - I->objects().begin()];
        if (slot) fail(val.span, "object '" + lab + "' bound twice");
        slot = get<ModuleEntry>(val, "module").obj;
        if (ring && !(*ring == slot->ring())) fail(val.span, "modules over different rings");
        ring = slot->ring();
        continue;
      }
      std::size_t m = FinCat::npos;
      for (std::size_t k = 0; k < I->num_morphisms(); ++k)
        if (I->arrow(k).label == lab) m = k;
      if (m == FinCat::npos) fail(val.span, "'" + lab + "' is neither an object nor an arrow of " + d.over);
      if (maps[m]) fail(val.span, "arrow '" + lab + "' bound twice");
      maps[m] = get<ModMor>(val, "morphism");
    }
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (!comps[i]) fail(head.span, "no module given for object '" + I->objects()[i] + "'");
    ModuleCategory C(*ring);
    for (std::size_t m = 0; m < maps.size(); ++m) {
      const auto& a = I->arrow(m);
      if (maps[m]) {
        if (!(maps[m]->source() == *comps[a.source]) || !(maps[m]->target() == *comps[a.target]))
          fail(head.span, "map bound to '" + a.label + "' does not run between the bound modules");
        maps[m] = ModMor::make(*comps[a.source], *comps[a.target], maps[m]->matrix());
      } else if (I->is_identity(m)) {
        maps[m] = C.identity(*comps[a.source]);
      }
    }
    // composites of given arrows, until nothing changes
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t g = 0; g < maps.size(); ++g)
        for (std::size_t f = 0; f < maps.size(); ++f) {
          if (!maps[g] || !maps[f]) continue;
          auto h = I->compose(g, f);
          if (h != FinCat::npos && !maps[h]) {
            maps[h] = C.compose(*maps[g], *maps[f]);
            changed = true;
          }
        }
    }
    std::vector<ModuleObj> cs;
    std::vector<ModMor> ms;
    for (auto& c : comps) cs.push_back(*c);
    for (std::size_t m = 0; m < maps.size(); ++m) {
      if (!maps[m]) fail(head.span, "no map given for arrow '" + I->arrow(m).label + "'");
      ms.push_back(*maps[m]);
    }
    return DiagramCategory(I, C).make(std::move(cs), std::move(ms));
  }

  DiagMor elab_diagmor(const Decl& d) {
    const auto& A = get<Diagram>(Term{Term::Kind::Word, d.source, 0, {}, {}, d.span}, "diagram");
    const auto& B = get<Diagram>(Term{Term::Kind::Word, d.target, 0, {}, {}, d.span}, "diagram");
    if (!(*A.index == *B.index)) fail(d.span, "diagrams over different categories");
    if (!(ring_of(A) == ring_of(B))) fail(d.span, "diagrams over different rings");
    auto D = category_of(A);
    const auto& b = d.body;
    const Term& head = b[0];
    if (head.is_word("identity")) {
      expect_arity(b, 1, d.span);
      if (!(A == B)) fail(head.span, "identity needs equal source and target");
      return D.identity(A);
    }
    if (head.is_word("zero")) {
      expect_arity(b, 1, d.span);
      return D.zero_morphism(A, B);
    }
    if (head.kind != Term::Kind::Block) fail(head.span, "expected { object: morphism, ... }, identity or zero");
    expect_arity(b, 1, d.span);
    const auto& I = *A.index;
    std::vector<std::optional<ModMor>> comps(I.num_objects());
    for (const auto& [lab, val] : head.entries) {
      auto obj = std::find(I.objects().begin(), I.objects().end(), lab);
      if (obj == I.objects().end()) fail(val.span, "'" + lab + "' is not an object of the index");
      std::size_t i = obj - I.objects().begin();
      if (comps[i]) fail(val.span, "object '" + lab + "' bound twice");
      const auto& f = get<ModMor>(val, "morphism");
      if (!(f.source() == A.at(i)) || !(f.target() == B.at(i)))
        fail(val.span, "'" + val.text + "' does not run between the components at " + lab);
      comps[i] = ModMor::make(A.at(i), B.at(i), f.matrix());
    }
    std::vector<ModMor> cs;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (!comps[i]) fail(head.span, "no component given at '" + I.objects()[i] + "'");
      cs.push_back(*comps[i]);
    }
    return D.make_morphism(A, B, std::move(cs));
  }

  FunctorSpec elab_functor(const Term& t, std::size_t depth) {
    if (depth > dsl::max_nesting) fail(t.span, "functor nesting too deep");
    if (t.is_word()) return get<FunctorSpec>(t, "functor");
    if (t.kind != Term::Kind::Call) fail(t.span, "expected a functor expression");
    const auto& a = t.items;
    auto need = [&](std::size_t n) {
      if (a.size() != n) fail(t.span, t.text + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
    };
    if (t.text == "tensor") {
      need(1);
      return FunctorSpec::tensor_with(get<ModuleEntry>(a[0], "module").obj);
    }
    if (t.text == "identity") {
      need(1);
      return FunctorSpec::identity(get<Ring>(a[0], "ring"));
    }
    if (t.text == "coinvariants") {
      need(1);
      const auto& R = get<Ring>(a[0], "ring");
      if (R.is_integers()) fail(a[0].span, "coinvariants need a group algebra");
      return FunctorSpec::coinvariants(R);
    }
    if (t.text == "basechange") {
      if (a.size() != 2 && a.size() != 3) fail(t.span, "basechange takes (R, S) or (R, S, [images])");
      const auto& R = get<Ring>(a[0], "ring");
      const auto& S = get<Ring>(a[1], "ring");
      if (R.is_integers()) {
        if (a.size() != 2) fail(t.span, "base change from the integers takes no images");
        return FunctorSpec::base_change(RingMap::from_integers(S));
      }
      if (a.size() != 3 || !a[2].is_list()) fail(t.span, "base change between group algebras needs [images]");
      std::vector<std::size_t> hom;
      for (const auto& x : a[2].items) hom.push_back(count(x, max_group_order, "group element index"));
      return FunctorSpec::base_change(RingMap::from_group_hom(R, S, hom));
    }
    if (t.text == "compose") {
      need(2);
      return FunctorSpec::compose(elab_functor(a[0], depth + 1), elab_functor(a[1], depth + 1));
    }
    if (t.text == "exponent") {
      need(2);
      return FunctorSpec::exponent(elab_functor(a[0], depth + 1), get<CatPtr>(a[1], "category"));
    }
    fail(t.span, "unknown functor '" + t.text + "'");
  }

  Value elab_ses(const Decl& d) {
    expect_arity(d.body, 2, d.span);
    const Value& i = lookup(d.body[0]);
    if (std::holds_alternative<ModMor>(i)) {
      ModSES s{std::get<ModMor>(i), get<ModMor>(d.body[1], "morphism")};
      if (auto why = ses_violation(ModuleCategory(s.i.source().ring()), s)) fail(d.span, "not short exact: " + *why);
      return s;
    }
    if (std::holds_alternative<DiagMor>(i)) {
      DiagSES s{std::get<DiagMor>(i), get<DiagMor>(d.body[1], "diagmor")};
      if (auto why = ses_violation(category_of(s.i.source()), s)) fail(d.span, "not short exact: " + *why);
      return s;
    }
    fail(d.body[0].span, "'" + d.body[0].text + "' is a " + kind_name(i) + ", expected a morphism or diagmor");
  }

  // -------------------------------------------------- tasks

  struct KeySpec {
    const char* key;
    const char* type;  // functor, object, map, ses, int, word
    bool required;
  };

  static const std::map<std::string, std::vector<KeySpec>>& task_table() {
    static const std::map<std::string, std::vector<KeySpec>> t{
        {"validate", {}},
        {"homology", {{"f", "map", true}, {"g", "map", true}}},
        {"derive", {{"F", "functor", true}, {"A", "object", true}, {"n", "int", false}}},
        {"les", {{"F", "functor", true}, {"s", "ses", true}, {"n", "int", false}}},
        {"ladder",
         {{"s", "ses", true},
          {"t", "ses", true},
          {"alpha", "map", true},
          {"beta", "map", true},
          {"gamma", "map", true},
          {"g", "map", true},
          {"n", "int", false},
          {"variable", "word", false}}},
        {"ss", {{"F", "functor", true}, {"G", "functor", true}, {"A", "object", true}, {"n", "int", false}}},
        {"verify", {{"suite", "word", true}, {"cases", "int", false}, {"seed", "int", false}}},
    };
    return t;
  }

  TaskSpec elab_task(const Decl& d, std::size_t number) {
    const Term& head = d.body[0];
    if (!head.is_word()) fail(head.span, "expected a task kind");
    auto it = task_table().find(head.text);
    if (it == task_table().end()) fail(head.span, "unknown task kind '" + head.text + "'");
    TaskSpec t{"task" + std::to_string(number), head.text, {}, d.span};
    for (std::size_t k = 1; k < d.body.size(); ++k) {
      const Term& a = d.body[k];
      if (a.kind != Term::Kind::Assign) fail(a.span, "expected key=value");
      if (t.args.count(a.text)) fail(a.span, "repeated key '" + a.text + "'");
      t.args[a.text] = a.items.at(0);
    }
    if (t.args.count("name")) {
      const Term& n = t.args["name"];
      if (!n.is_word()) fail(n.span, "task name must be a word");
      t.name = n.text;
      t.args.erase("name");
    }
    for (const auto& [key, val] : t.args) {
      bool known = false;
      for (const auto& ks : it->second) known |= key == ks.key;
      if (!known) fail(val.span, "task " + t.kind + " takes no key '" + key + "'");
    }
    for (const auto& ks : it->second) {
      auto a = t.args.find(ks.key);
      if (a == t.args.end()) {
        if (ks.required) fail(d.span, "task " + t.kind + " needs " + ks.key + "=");
        continue;
      }
      const Term& v = a->second;
      const std::string type = ks.type;
      if (type == "int") {
        count(v, t.kind == "verify" ? (ks.key == std::string("seed") ? dsl::max_literal : max_cases) : max_degree,
              ks.key, t.kind == "verify" && ks.key == std::string("cases") ? 1 : 0);
      } else if (type == "word") {
        if (!v.is_word()) fail(v.span, std::string("expected a word for ") + ks.key);
      } else if (type == "functor") {
        elab_functor(v, 0);
      } else {
        const Value& x = lookup(v);
        bool ok = (type == "object" && (std::holds_alternative<ModuleEntry>(x) || std::holds_alternative<Diagram>(x))) ||
                  (type == "map" && (std::holds_alternative<ModMor>(x) || std::holds_alternative<DiagMor>(x))) ||
                  (type == "ses" && (std::holds_alternative<ModSES>(x) || std::holds_alternative<DiagSES>(x)));
        if (!ok) fail(v.span, "'" + v.text + "' is a " + kind_name(x) + ", expected a " + type);
      }
    }
    if (t.kind == "verify") {
      const auto& names = suite_names();
      if (std::find(names.begin(), names.end(), t.args["suite"].text) == names.end())
        fail(t.args["suite"].span, "unknown suite '" + t.args["suite"].text + "'");
    }
    if (t.kind == "ladder" && t.args.count("variable")) {
      const auto& v = t.args["variable"].text;
      if (v != "first" && v != "second") fail(t.args["variable"].span, "variable must be first or second");
    }
    return t;
  }

  std::size_t degree(const TaskSpec& t, const RunOptions& opt, std::size_t fallback, std::size_t cap) const {
    std::size_t n = t.args.count("n") ? std::size_t(t.args.at("n").value) : fallback;
    if (opt.max_degree) n = *opt.max_degree;
    return std::min(n, cap);
  }

  TaskReport run_task(const TaskSpec& t, const RunOptions& opt) const {
    TaskReport r{t.name, t.kind, false, {}, {}};
    try {
      if (t.kind == "validate") task_validate(r);
      else if (t.kind == "homology") task_homology(t, r);
      else if (t.kind == "derive") task_derive(t, opt, r);
      else if (t.kind == "les") task_les(t, opt, r);
      else if (t.kind == "ladder") task_ladder(t, opt, r);
      else if (t.kind == "ss") task_ss(t, opt, r);
      else if (t.kind == "verify") task_verify(t, opt, r);
    } catch (const ElabError& e) {
      r.pass = false;
      r.notes.push_back("error: " + e.message);
    } catch (const std::exception& e) {
      r.pass = false;
      r.notes.push_back(std::string("error: ") + e.what());
    }
    return r;
  }

  void task_validate(TaskReport& r) const {
    Table tab{"declarations", {"name", "kind", "value"}, {}};
    for (const auto& d : doc_.decls) {
      if (d.keyword == "task") continue;
      const Value& v = env_.at(d.name);
      std::string what;
      if (auto m = std::get_if<ModuleEntry>(&v)) what = m->obj.describe();
      else if (auto g = std::get_if<Ring>(&v)) what = g->describe();
      else if (auto f = std::get_if<ModMor>(&v)) what = f->source().describe() + " -> " + f->target().describe();
      else if (auto c = std::get_if<CatPtr>(&v))
        what = std::to_string((*c)->num_objects()) + " objects, " + std::to_string((*c)->num_morphisms()) + " arrows";
      else if (auto dg = std::get_if<Diagram>(&v)) what = describe(*dg);
      else if (auto fs = std::get_if<FunctorSpec>(&v)) what = fs->describe();
      else what = "valid";
      tab.rows.push_back({d.name, d.keyword, what});
    }
    r.tables.push_back(tab);
    r.pass = true;
  }

  void task_homology(const TaskSpec& t, TaskReport& r) const {
    const Value& f = get_named(t.args.at("f").text, t.span);
    const Value& g = get_named(t.args.at("g").text, t.span);
    Table tab{"homology at the middle", {"object", "H"}, {}};
    bool ok = false;
    if (auto fm = std::get_if<ModMor>(&f)) {
      auto gm = std::get_if<ModMor>(&g);
      if (!gm) throw std::invalid_argument("f and g must both be module maps or both diagram maps");
      ModuleCategory C(fm->source().ring());
      if (!(fm->target() == gm->source())) throw std::invalid_argument("f and g are not composable");
      if (C.is_zero(C.compose(*gm, *fm))) {
        tab.rows.push_back({"H", middle_homology(C, *fm, *gm).describe()});
        ok = true;
      } else {
        r.notes.push_back("g o f is nonzero");
      }
    } else {
      const auto& fd = std::get<DiagMor>(f);
      auto gd = std::get_if<DiagMor>(&g);
      if (!gd) throw std::invalid_argument("f and g must both be module maps or both diagram maps");
      auto D = category_of(fd.source());
      if (!(fd.target() == gd->source())) throw std::invalid_argument("f and g are not composable");
      if (D.is_zero(D.compose(*gd, fd))) {
        auto h = middle_homology(D, fd, *gd);
        for (std::size_t i = 0; i < h.components.size(); ++i)
          tab.rows.push_back({h.index->objects()[i], h.at(i).describe()});
        ok = true;
      } else {
        r.notes.push_back("g o f is nonzero");
      }
    }
    r.tables.push_back(tab);
    r.pass = ok;
  }

  template <AbelianCategory C>
  static typename C::Object middle_homology(const C& c, const typename C::Morphism& f, const typename C::Morphism& g) {
    auto ker = c.kernel(g);
    auto into = c.factor_through_mono(ker.mono, f);
    if (!into) throw std::logic_error("image of f is not inside ker g");
    return c.cokernel(*into).object;
  }

  FunctorSpec functor_arg(const TaskSpec& t, const char* key) const {
    return const_cast<Workbench*>(this)->elab_functor(t.args.at(key), 0);
  }

  static FunctorSpec over_index(const FunctorSpec& F, const CatPtr& I) {
    if (F.kind() == FunctorSpec::Kind::Exponent && *F.index() == *I) return F;
    return FunctorSpec::exponent(F.base(), I);
  }

  void task_derive(const TaskSpec& t, const RunOptions& opt, TaskReport& r) const {
    auto F = functor_arg(t, "F");
    const Value& a = get_named(t.args.at("A").text, t.span);
    const std::size_t n = degree(t, opt, 2, max_degree);
    Table tab{"L_n F(" + t.args.at("A").text + ")", {"n", "value"}, {}};
    if (auto m = std::get_if<ModuleEntry>(&a)) {
      ModuleCategory C(m->obj.ring());
      auto P = resolve(C, m->obj, n + 1);
      auto T = target_category(F, C);
      auto FP = apply_functor<ModuleCategory>(F, P.complex);
      for (std::size_t k = 0; k <= n; ++k) tab.rows.push_back({"n=" + std::to_string(k), homology_at(T, FP, k).object.describe()});
    } else {
      const auto& A = std::get<Diagram>(a);
      auto D = category_of(A);
      auto FI = over_index(F, A.index);
      auto P = resolve(D, A, n + 1);
      auto T = target_category(FI, D);
      auto FP = apply_functor<DiagramCategory>(FI, P.complex);
      for (std::size_t k = 0; k <= n; ++k)
        tab.rows.push_back({"n=" + std::to_string(k), describe(homology_at(T, FP, k).object)});
    }
    r.tables.push_back(tab);
    r.pass = true;
  }

  template <class Obj>
  static std::string show(const Obj& o) {
    if constexpr (std::is_same_v<Obj, Diagram>) return describe(o);
    else return o.describe();
  }

  template <class L>
  static void les_table(const L& les, const std::string& title, TaskReport& r) {
    Table tab{title, {"n", "F_n(L)", "F_n(M)", "F_n(N)"}, {}};
    for (std::size_t k = 0; k <= les.n_max; ++k)
      tab.rows.push_back({"n=" + std::to_string(k), show(les.FL[k]), show(les.FM[k]), show(les.FN[k])});
    r.tables.push_back(tab);
    std::size_t bad = 0;
    for (const auto& c : les.checks)
      if (!c.exact || !c.composite_zero) {
        ++bad;
        r.notes.push_back("not exact at " + c.position);
      }
    if (!bad) r.notes.push_back("exact at all " + std::to_string(les.checks.size()) + " positions");
  }

  void task_les(const TaskSpec& t, const RunOptions& opt, TaskReport& r) const {
    auto F = functor_arg(t, "F");
    const Value& s = get_named(t.args.at("s").text, t.span);
    const std::size_t n = degree(t, opt, 2, max_degree);
    if (auto ms = std::get_if<ModSES>(&s)) {
      auto out = les_of_ses(ModuleCategory(ms->i.source().ring()), F, *ms, n);
      les_table(out.les, "long exact sequence", r);
      r.pass = out.les.all_exact();
    } else {
      const auto& ds = std::get<DiagSES>(s);
      auto D = category_of(ds.i.source());
      auto out = les_of_ses(D, over_index(F, ds.i.source().index), ds, n);
      les_table(out.les, "long exact sequence", r);
      r.pass = out.les.all_exact();
    }
  }

  template <class Mor>
  Mor map_arg(const TaskSpec& t, const char* key) const {
    const Value& v = get_named(t.args.at(key).text, t.span);
    auto p = std::get_if<Mor>(&v);
    if (!p) throw std::invalid_argument(std::string(key) + " must match the level of the sequences");
    return *p;
  }

  template <class LR>
  static void ladder_report(const LR& lr, TaskReport& r) {
    if (lr.rejected) {
      r.notes.push_back("rejected: " + *lr.rejected);
      r.pass = false;
      return;
    }
    les_table(lr.top, "top row", r);
    les_table(lr.bottom, "bottom row", r);
    std::size_t bad = 0;
    for (const auto& s : lr.squares.squares)
      if (!s.exact) {
        ++bad;
        r.notes.push_back("square " + s.position + " does not commute");
      }
    if (!lr.degreewise_exact) r.notes.push_back("B(P, -) is not exact on the sequence");
    r.notes.push_back(std::to_string(lr.squares.squares.size() - bad) + "/" + std::to_string(lr.squares.squares.size()) +
                      " squares commute");
    r.pass = lr.pass();
  }

  void task_ladder(const TaskSpec& t, const RunOptions& opt, TaskReport& r) const {
    const Value& s = get_named(t.args.at("s").text, t.span);
    const Value& s2 = get_named(t.args.at("t").text, t.span);
    const bool second = t.args.count("variable") && t.args.at("variable").text == "second";
    const std::size_t n = degree(t, opt, 1, 4);
    if (auto ms = std::get_if<ModSES>(&s)) {
      auto mt = std::get_if<ModSES>(&s2);
      if (!mt) throw std::invalid_argument("s and t must both be module sequences");
      SESMorphism<ModMor> m{map_arg<ModMor>(t, "alpha"), map_arg<ModMor>(t, "beta"), map_arg<ModMor>(t, "gamma")};
      auto g = map_arg<ModMor>(t, "g");
      ModuleTensor T(ms->i.source().ring());
      if (second) ladder_report(ladder_switched(T, *ms, *mt, m, g, n), r);
      else ladder_report(ladder(T, *ms, *mt, m, g, n), r);
      return;
    }
    const auto& ds = std::get<DiagSES>(s);
    auto dt = std::get_if<DiagSES>(&s2);
    if (!dt) throw std::invalid_argument("s and t must both be diagram sequences");
    SESMorphism<DiagMor> m{map_arg<DiagMor>(t, "alpha"), map_arg<DiagMor>(t, "beta"), map_arg<DiagMor>(t, "gamma")};
    auto g = map_arg<DiagMor>(t, "g");
    const Ring& R = ring_of(ds.i.source());
    const auto& I = ds.i.source().index;
    const auto& J = g.source().index;
    if (second) {
      DiagramTensor T(J, I, R);
      ladder_report(ladder_switched(T, ds, *dt, m, g, n), r);
    } else {
      DiagramTensor T(I, J, R);
      ladder_report(ladder(T, ds, *dt, m, g, n), r);
    }
  }

  static void ss_tables(const GrothendieckResult& g, const std::string& suffix, TaskReport& r) {
    const std::size_t n = g.n_max;
    Table e2{"E2 dimensions" + suffix, {"q"}, {}};
    for (std::size_t p = 0; p <= n; ++p) e2.header.push_back("p=" + std::to_string(p));
    for (std::size_t q = 0; q <= n; ++q) {
      std::vector<std::string> row{"q=" + std::to_string(q)};
      for (std::size_t p = 0; p <= n; ++p) row.push_back(std::to_string(g.e2[p][q]));
      e2.rows.push_back(row);
    }
    Table ab{"abutment dimensions" + suffix, {"n", "dim"}, {}};
    for (std::size_t k = 0; k <= n; ++k) ab.rows.push_back({"n=" + std::to_string(k), std::to_string(g.abutment[k])});
    r.tables.push_back(e2);
    r.tables.push_back(ab);
    const auto& ss = g.data.ss;
    std::string d2;
    const auto& page2 = ss.page(2);
    for (std::size_t p = 0; p < page2.d.size(); ++p)
      for (std::size_t q = 0; q < page2.d[p].size(); ++q)
        if (ss.in_range(long(p), long(q)) && !page2.d[p][q].is_zero())
          d2 += (d2.empty() ? "" : " ") + std::string("(") + std::to_string(p) + "," + std::to_string(q) + ")";
    const std::string at = suffix.empty() ? "" : suffix.substr(1) + ": ";
    r.notes.push_back(at + (ss.degenerates_at ? "degenerates at E" + std::to_string(*ss.degenerates_at)
                                              : "does not degenerate within the computed pages"));
    r.notes.push_back(at + "nonzero d2 at " + (d2.empty() ? std::string("none") : d2));
    r.notes.push_back(at + "E2 " + (g.e2_matches ? "matches" : "differs from") + " (L_pG)(L_qF)");
    r.notes.push_back(at + "abutment " + (g.abutment_matches ? "matches" : "differs from") + " L_n(GF)");
    if (!g.hypothesis.holds()) r.notes.push_back(at + "F does not send projectives to G-acyclics");
  }

  void task_ss(const TaskSpec& t, const RunOptions& opt, TaskReport& r) const {
    auto F = functor_arg(t, "F");
    auto G = functor_arg(t, "G");
    const Value& a = get_named(t.args.at("A").text, t.span);
    const std::size_t n = degree(t, opt, 2, max_ss_degree);
    if (auto m = std::get_if<ModuleEntry>(&a)) {
      auto g = grothendieck_ss(F.base(), G.base(), m->obj, n);
      ss_tables(g, "", r);
      r.pass = g.pass();
      return;
    }
    const auto& A = std::get<Diagram>(a);
    auto rep = ss_componentwise(F.base(), G.base(), A, *A.index, n);
    for (std::size_t i = 0; i < rep.components.size(); ++i) ss_tables(rep.components[i], " at " + A.index->objects()[i], r);
    r.notes.push_back(std::to_string(rep.squares_checked) + " naturality squares checked");
    for (const auto& f : rep.failures) r.notes.push_back(f);
    r.pass = rep.pass();
  }

  void task_verify(const TaskSpec& t, const RunOptions& opt, TaskReport& r) const {
    std::optional<std::uint64_t> seed = opt.seed;
    if (!seed && t.args.count("seed")) seed = std::uint64_t(t.args.at("seed").value);
    if (!seed) throw std::invalid_argument("verify needs a seed (seed= or --seed)");
    const std::string suite = t.args.at("suite").text;
    const std::size_t cases = t.args.count("cases") ? std::size_t(t.args.at("cases").value) : default_cases(suite);
    auto b = run_suite(suite, cases, *seed);
    r.tables.push_back({"battery", {"suite", "result"}, {{suite, b.summary()}}});
    r.notes.push_back("seed " + std::to_string(*seed));
    for (std::size_t k = 0; k < b.failures.size() && k < 5; ++k) r.notes.push_back(b.failures[k]);
    r.pass = b.pass();
  }

  dsl::Doc doc_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, Value> env_;
  std::set<std::string> failed_;
  std::vector<std::string> tasks_;
};

}  // namespace fch::wb
