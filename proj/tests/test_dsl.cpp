#include "fch/workbench.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace fch;
using namespace fch::wb;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> fixture_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(FCH_FIXTURE_DIR))
    if (e.path().extension() == ".wb") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

bool mentions(const std::vector<dsl::Diagnostic>& ds, const std::string& what) {
  for (const auto& d : ds)
    if (d.message.find(what) != std::string::npos) return true;
  return false;
}

std::string first_error(const std::string& text) {
  auto w = Workbench::load(text);
  return w.ok() ? std::string() : w.diagnostics().front().str();
}

}  // namespace

TEST_CASE("parser examples") {
  auto empty = dsl::parse("");
  CHECK(empty.ok());
  CHECK(empty.doc.decls.empty());
  CHECK(Workbench::load("").ok());
  CHECK(Workbench::load("  # only a comment\n\n;;\n").ok());

  auto three = dsl::parse("ring Z; module M over Z = coker [[2]]; task derive F=tensor(M) A=M n=1");
  REQUIRE(three.ok());
  REQUIRE(three.doc.decls.size() == 3);
  CHECK(three.doc.decls[1].keyword == "module");
  CHECK(three.doc.decls[1].over == "Z");
  CHECK(three.doc.decls[2].body.size() == 4);
  CHECK(Workbench::load("ring Z; module M over Z = coker [[2]]; task derive F=tensor(M) A=M n=1").ok());

  auto w = Workbench::load("ring Z\nmodule M over Z = coker [[2]]\ntask derive F=tensor(M) A=Q n=1\n");
  REQUIRE(w.diagnostics().size() == 1);
  const auto& d = w.diagnostics()[0];
  CHECK(d.message.find("'Q'") != std::string::npos);
  CHECK(d.at.line == 3);
  CHECK(d.at.col == 27);
}

TEST_CASE("lexer details") {
  std::vector<dsl::Diagnostic> ds;
  auto toks = dsl::lex("a [1,\n -2]\nb -> c # x ; y\n", ds);
  CHECK(ds.empty());
  std::vector<dsl::Tok> kinds;
  for (const auto& t : toks) kinds.push_back(t.kind);
  using T = dsl::Tok;
  CHECK(kinds == std::vector<T>{T::Word, T::LBrack, T::Int, T::Comma, T::Int, T::RBrack, T::Sep, T::Word, T::Arrow,
                                T::Word, T::Sep, T::End});
  CHECK(toks[4].text == "-2");
  CHECK(toks[7].at.line == 3);
  dsl::lex("a $ b", ds);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].at.col == 3);
}

TEST_CASE("round trip on the shipped fixtures") {
  auto files = fixture_files();
  REQUIRE(files.size() >= 3);
  for (const auto& f : files) {
    INFO(f.string());
    auto a = dsl::parse(read_file(f));
    REQUIRE(a.ok());
    auto printed = dsl::print(a.doc);
    auto b = dsl::parse(printed);
    REQUIRE(b.ok());
    CHECK(b.doc == a.doc);
    CHECK(dsl::print(b.doc) == printed);
    CHECK(Workbench::load(printed).ok());
  }
}

TEST_CASE("spans do not take part in equality") {
  auto a = dsl::parse("ring Z\nmodule M over Z = cyclic 2");
  auto b = dsl::parse("ring   Z ;   module M over Z =\tcyclic 2");
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.doc.decls[1].span.line != b.doc.decls[1].span.line);
  CHECK(a.doc == b.doc);
  CHECK(!(a.doc == dsl::parse("ring Z\nmodule M over Z = cyclic 3").doc));
}

TEST_CASE("nested terms print and reparse") {
  const std::string src =
      "category J = explicit objects [a, b, c] arrows [f(a, b), g(b, c), h(a, c)] compose [h(g, f)]\n"
      "diagram X over J = { a: M, b: M, c: M, f: u, g: u }\n"
      "task ss F=compose(basechange(C4, C2, [0, 1, 0, 1]), identity(C4)) G=G A=k n=2 name=x\n";
  auto p = dsl::parse(src);
  REQUIRE(p.ok());
  CHECK(dsl::print(p.doc) == src);
}

TEST_CASE("syntax diagnostics recover at the next declaration") {
  auto p = dsl::parse("module = 3\nring Z\nmodule M over Z = [1, 2\nring F = field 2");
  CHECK(p.diagnostics.size() == 2);
  // the unclosed bracket runs to the end, swallowing the last line
  CHECK(p.doc.decls.size() == 1);
  CHECK(mentions(p.diagnostics, "expected a declaration name"));

  std::string deep(200, '[');
  auto q = dsl::parse("ring Z; module M over Z = coker " + deep);
  REQUIRE(!q.ok());
  CHECK(mentions(q.diagnostics, "nesting deeper"));
  CHECK(mentions(dsl::parse("ring Z; module M over Z = cyclic 99999999999999999999").diagnostics, "out of range"));
}

TEST_CASE("elaboration diagnostics") {
  CHECK(first_error("ring Z; ring Z").find("duplicate name 'Z'") != std::string::npos);
  CHECK(first_error("ring Z; module M over Z = cyclic 2; morphism u : M -> Z = identity").find("is a ring") !=
        std::string::npos);
  CHECK(first_error("ring Z; module M over Z = cyclic 2; morphism u : M -> M = [[1, 2]]").find("matrix must be") !=
        std::string::npos);
  CHECK(first_error("ring Z; module A over Z = cyclic 2; module B over Z = free 1; morphism u : A -> B = [[1]]")
            .find("not well-defined") != std::string::npos);
  CHECK(first_error("ring G = group 2 cyclic 4 x cyclic 8").find("group order") != std::string::npos);
  CHECK(first_error("ring F = field 9").find("not prime") != std::string::npos);
  CHECK(first_error("ring Z; module M over Z = free 65").find("rank") != std::string::npos);
  CHECK(first_error("ring Z; module A over Z = free 1; morphism u : A -> A = [[2]]; ses s = u u")
            .find("not short exact") != std::string::npos);
  CHECK(first_error("task verify suite=nope seed=1").find("unknown suite") != std::string::npos);
  CHECK(first_error("task derive n=1").find("needs F=") != std::string::npos);
  CHECK(first_error("task les F=x s=y bogus=1").find("takes no key") != std::string::npos);
  CHECK(first_error("category I = explicit objects [a, b] arrows [f(a, b), g(b, a)]").find("composite") !=
        std::string::npos);
  CHECK(first_error("ring Z; category I = standard arrow; module M over Z = free 1; diagram D over I = { 0: M }")
            .find("no module given for object '1'") != std::string::npos);
  // a failed declaration is reported once, and later uses say so
  auto w = Workbench::load("ring F = field 4\nmodule M over F = free 1\n");
  REQUIRE(w.diagnostics().size() == 2);
  CHECK(w.diagnostics()[1].message.find("declaration that failed") != std::string::npos);
}

TEST_CASE("explicit categories and diagram composites") {
  auto w = Workbench::load(
      "ring Z\n"
      "category J = explicit objects [a, b, c] arrows [f(a, b), g(b, c), h(a, c)] compose [h(g, f)]\n"
      "module M over Z = free 1\n"
      "morphism two : M -> M = [[2]]\n"
      "diagram X over J = { a: M, b: M, c: M, f: two, g: two }\n"
      "task derive F=tensor(M) A=X n=0\n");
  REQUIRE(w.ok());
  const auto* X = w.find<Diagram>("X");
  REQUIRE(X);
  const auto h = X->index->morphism_index("h");
  CHECK(X->map(h).int_matrix() == IntMatrix::from_rows({{4}}));
  CHECK(w.run().pass());
}

TEST_CASE("task reports") {
  auto tor = Workbench::load(read_file(std::filesystem::path(FCH_FIXTURE_DIR) / "tor.wb"));
  REQUIRE(tor.ok());
  auto text = emit_text(tor.run());
  CHECK(text.find("n=1: Z/2\n") != std::string::npos);
  CHECK(text.find("A: module | Z/2 ⊕ Z/6\n") != std::string::npos);
  CHECK(text.find("4/4 tasks pass") != std::string::npos);

  RunOptions only;
  only.task = "tor_2_2";
  only.max_degree = 1;
  auto one = tor.run(only);
  REQUIRE(one.tasks.size() == 1);
  REQUIRE(one.tasks[0].tables[0].rows.size() == 2);
  CHECK(one.tasks[0].tables[0].rows[1] == std::vector<std::string>{"n=1", "Z/2"});
  only.task = "missing";
  CHECK(!tor.run(only).pass());

  auto v = Workbench::load(read_file(std::filesystem::path(FCH_FIXTURE_DIR) / "verify_les.wb"));
  REQUIRE(v.ok());
  RunOptions les;
  les.task = "les";
  auto vr = v.run(les);
  CHECK(vr.tasks[0].tables[0].rows[0] == std::vector<std::string>{"les", "200/200 pass"});
  CHECK(vr.pass());

  auto g = Workbench::load(read_file(std::filesystem::path(FCH_FIXTURE_DIR) / "group_ss.wb"));
  REQUIRE(g.ok());
  RunOptions ss;
  ss.task = "c2_in_c4";
  auto gr = g.run(ss);
  REQUIRE(gr.tasks[0].tables.size() == 2);
  CHECK(gr.tasks[0].tables[0].title == "E2 dimensions");
  CHECK(gr.tasks[0].tables[1].title == "abutment dimensions");
  for (const auto& row : gr.tasks[0].tables[0].rows)
    for (std::size_t k = 1; k < row.size(); ++k) CHECK(row[k] == "1");
  for (const auto& row : gr.tasks[0].tables[1].rows) CHECK(row[1] == "1");
  CHECK(gr.pass());

  // a verify task without any seed fails at run time, not at load time
  auto noseed = Workbench::load("task verify suite=les cases=3");
  REQUIRE(noseed.ok());
  auto nr = noseed.run();
  CHECK(!nr.pass());
  CHECK(nr.tasks[0].notes[0].find("seed") != std::string::npos);
  RunOptions seeded;
  seeded.seed = 5;
  CHECK(noseed.run(seeded).pass());

  // g o f != 0 is a task failure
  auto bad = Workbench::load(
      "ring Z; module A over Z = free 1; morphism u : A -> A = identity; task homology f=u g=u");
  REQUIRE(bad.ok());
  CHECK(!bad.run().pass());
}

TEST_CASE("empty report and JSON layout") {
  Report empty;
  auto t = emit_text(empty);
  CHECK(t == "-- summary\n# task | kind | status\n0/0 tasks pass\n");
  auto j = nlohmann::ordered_json::parse(emit_json(empty));
  CHECK(j["tasks"].empty());
  CHECK(j["summary"]["status"] == "pass");

  auto w = Workbench::load("ring Z; module M over Z = cyclic 2; task derive F=tensor(M) A=M n=1 name=t");
  auto jr = nlohmann::ordered_json::parse(emit_json(w.run()));
  std::vector<std::string> keys;
  for (const auto& [k, v] : jr["tasks"][0].items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"name", "kind", "status", "tables", "notes"});
  CHECK(jr["tasks"][0]["tables"][0]["rows"][1][1] == "Z/2");
}

TEST_CASE("reports are byte-identical across runs") {
  for (const auto& f : fixture_files()) {
    INFO(f.string());
    const auto text = read_file(f);
    RunOptions opt;
    opt.seed = 9;
    auto a = Workbench::load(text), b = Workbench::load(text);
    CHECK(emit_text(a.run(opt)) == emit_text(b.run(opt)));
    CHECK(emit_json(a.run(opt)) == emit_json(a.run(opt)));
  }
}

TEST_CASE("random bytes and mutated fixtures never crash the loader") {
  std::mt19937_64 rng(2024);
  std::size_t with_diagnostics = 0;
  for (int k = 0; k < 2000; ++k) {
    std::string s(rng() % 200, '\0');
    for (auto& c : s) c = char(rng() & 0xff);
    auto w = Workbench::load(s);
    with_diagnostics += !w.ok();
  }
  CHECK(with_diagnostics > 1900);

  std::vector<std::string> sources;
  for (const auto& f : fixture_files()) sources.push_back(read_file(f));
  const std::string alphabet = "[]{}(),:=;->#\n 0123456789abcxZMuvfgnF";
  for (int k = 0; k < 1000; ++k) {
    std::string s = sources[k % sources.size()];
    for (int m = 0, edits = 1 + int(rng() % 4); m < edits && !s.empty(); ++m) {
      std::size_t at = rng() % s.size();
      switch (rng() % 3) {
        case 0: s[at] = alphabet[rng() % alphabet.size()]; break;
        case 1: s.erase(at, 1 + rng() % 3); break;
        default: s.insert(at, 1, alphabet[rng() % alphabet.size()]);
      }
    }
    CHECK_NOTHROW(Workbench::load(s));
  }
}
