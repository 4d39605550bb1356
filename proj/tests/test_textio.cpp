#include <catch2/catch_amalgamated.hpp>

#include "cogs/textio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cogs/development.hpp"
#include "corpus.hpp"

using namespace cogs;

namespace {

template <typename F>
std::string error_code(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code;
  }
  return "none";
}

Workspace parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_workspace(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(COGS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

const std::vector<std::string>& corpus_files() {
  static const std::vector<std::string> files{
      "triangle_233.cogfile", "triangle_234.cogfile", "triangle_235.cogfile",
      "triangle_237.cogfile", "segment_z4.cogfile",   "circle_pair.cogfile",
      "rp2.cogfile",          "rp2_double_cover.cogfile"};
  return files;
}

}  // namespace

TEST_CASE("serialization is a stable round trip", "[textio]") {
  for (const std::string& f : corpus_files()) {
    Workspace ws = load_workspace(corpus::data_path(f));
    std::string once = serialize_workspace(ws);
    Workspace ws2 = parse_text(once);
    std::string twice = serialize_workspace(ws2);
    CHECK(once == twice);
    CHECK(ws2.groups.size() == ws.groups.size());
    CHECK(ws2.scwols.size() == ws.scwols.size());
    CHECK(ws2.cogs.size() == ws.cogs.size());
    CHECK(ws2.morphisms.size() == ws.morphisms.size());
    CHECK(ws2.paths.size() == ws.paths.size());
  }
}

TEST_CASE("generated workspace files are verbatim serializer output", "[textio]") {
  std::string raw = slurp(corpus::data_path("rp2_double_cover.cogfile"));
  Workspace ws = parse_text(raw);
  CHECK(serialize_workspace(ws) == raw);
}

TEST_CASE("parsed complexes match the built-in constructions", "[textio]") {
  Workspace ws = load_workspace(corpus::data_path("triangle_233.cogfile"));
  REQUIRE(ws.cogs.count("triangle_233") == 1);
  const CogPtr& cog = ws.cogs.at("triangle_233");
  CogPtr built = corpus::triangle_cog(3);

  REQUIRE(cog->base->vertices() == built->base->vertices());
  for (int v : cog->base->vertices())
    CHECK(cog->group_at(v)->order() == built->group_at(v)->order());
  for (const ScwolEdge& a : cog->base->edges()) {
    CHECK(built->base->initial(a.id) == a.i);
    CHECK(built->base->terminal(a.id) == a.t);
  }

  // both files and builders describe the same group up to the enumeration
  Pi1Outcome of = compute_pi1(cog, 0);
  Pi1Outcome ob = compute_pi1(built, 0);
  REQUIRE(of.complete);
  REQUIRE(ob.complete);
  CHECK(of.pi1->group->order() == ob.pi1->group->order());
}

TEST_CASE("omitted blocks fall back to the documented defaults", "[textio]") {
  Workspace ws = parse_text(R"(
group z2 {
  perm 2 : 1 0
}

scwol seg {
  vertices 0 1
  edge 0 : 0 -> 1
}

scwol chain {
  vertices 0 1 2
  edge 0 : 0 -> 1
  edge 1 : 1 -> 2
  edge 2 : 0 -> 2
  compose 1 0 = 2
}

cog base {
  scwol seg
  local 1 = z2
}

cog flat {
  scwol chain
}

cog total {
  scwol seg
}

cogmorphism down {
  source total
  target base
  vertex 0 -> 0
  vertex 1 -> 1
  edge 0 -> 0
}
)");

  const CogPtr& base = ws.cogs.at("base");
  CHECK(base->group_at(0)->order() == 1);  // local omitted
  CHECK(base->group_at(1)->order() == 2);
  CHECK(base->psi_at(0).source->order() == 1);  // psi omitted, trivial source

  const CogPtr& flat = ws.cogs.at("flat");
  CHECK(flat->twist_at(1, 0) == FiniteGroup::kId);  // twist omitted

  const CogMorphism& down = ws.morphisms.at("down");
  CHECK(down.elt(0) == FiniteGroup::kId);  // elt omitted
  CHECK(down.local.at(0).source->order() == 1);
  CHECK_FALSE(check_covering(down).ok);
}

TEST_CASE("parse errors carry codes and line numbers", "[textio]") {
  auto code_of = [](const std::string& text) {
    return error_code([&] { parse_text(text); });
  };

  CHECK(code_of("group g {") == "SyntaxError");          // unterminated
  CHECK(code_of("widget w {\n}") == "SyntaxError");      // unknown kind
  CHECK(code_of("group g {\n  perm 2 : x y\n}") == "SyntaxError");
  CHECK(code_of("group g {\n  bogus 1\n}") == "SyntaxError");
  CHECK(code_of("group a {\n  perm 2 : 1 0\n}\n"
                "group a {\n  perm 2 : 1 0\n}") == "DuplicateName");
  CHECK(code_of("cog c {\n  scwol nope\n}") == "DanglingReference");
  CHECK(code_of("path p {\n  cog nowhere\n  start 0\n  elts 0\n}") ==
        "DanglingReference");
  CHECK(code_of("group z2 {\n  perm 2 : 1 0\n}\n"
                "scwol s {\n  vertices 0 1\n  edge 0 : 0 -> 1\n}\n"
                "cog c {\n  scwol s\n  local 0 = z2\n}") == "MissingImage");

  // structural validation runs inside the parser
  CHECK(code_of("scwol s {\n  vertices 0\n  edge 0 : 0 -> 0\n}") == "LoopEdge");
  CHECK(code_of("group g {\n  row 0 1\n  row 1 1\n}") == "NoInverse");

  // line numbers are reported for syntax problems
  try {
    parse_text("group ok {\n  perm 2 : 1 0\n}\ngroup g {\n  perm 2 : x y\n}");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(contains(e.what(), "line 5"));
  }

  CHECK(error_code([] { load_workspace("/nonexistent/x.cogfile"); }) == "FileError");
}

TEST_CASE("paths are validated while parsing", "[textio]") {
  const std::string preamble =
      "group z4 {\n  perm 4 : 1 2 3 0\n}\n"
      "scwol seg {\n  vertices 0 1\n  edge 0 : 0 -> 1\n}\n"
      "cog c {\n  scwol seg\n  local 1 = z4\n  psi 0 : 0\n}\n";
  auto path_block = [](const std::string& elts, const std::string& edges) {
    return "path p {\n  cog c\n  start 0\n  elts " + elts + "\n  edges " +
           edges + "\n}\n";
  };
  // backward traversal of edge 0 cannot start at vertex 0
  CHECK(error_code([&] { parse_text(preamble + path_block("0 0", "0-")); }) !=
        "none");
  // element count must be edge count plus one
  CHECK(error_code([&] { parse_text(preamble + path_block("0", "0+")); }) !=
        "none");
  Workspace ok = parse_text(preamble + path_block("0 2", "0+"));
  CHECK(ok.paths.at("p").length() == 1);
}

TEST_CASE("serialization orders blocks by kind and name", "[textio]") {
  Workspace ws = parse_text(R"(
group bb {
  perm 2 : 1 0
}
group aa {
  perm 2 : 1 0
}
scwol s {
  vertices 0 1
  edge 0 : 0 -> 1
}
)");
  std::string text = serialize_workspace(ws);
  CHECK(text.find("group aa") < text.find("group bb"));
  CHECK(text.find("group bb") < text.find("scwol s"));
}

TEST_CASE("workspaces can be assembled from computed complexes", "[textio]") {
  Workspace ws;
  CogPtr seg = corpus::segment_z4_cog();
  add_cog_with_parts(ws, "seg", seg);

  CHECK(ws.cogs.count("seg") == 1);
  CHECK(ws.scwols.count("seg_scwol") == 1);
  CHECK(ws.groups.count("seg_g0") == 1);
  CHECK(ws.groups.count("seg_g1") == 1);
  CHECK(error_code([&] { add_cog_with_parts(ws, "seg", seg); }) == "DuplicateName");

  Workspace back = parse_text(serialize_workspace(ws));
  const CogPtr& reparsed = back.cogs.at("seg");
  CHECK(reparsed->group_at(0)->order() == 2);
  CHECK(reparsed->group_at(1)->order() == 4);
  CHECK(reparsed->psi_at(0).image == seg->psi_at(0).image);
}

TEST_CASE("the command line tool reports and exits by verdict", "[cli]") {
  for (const std::string& f : corpus_files()) {
    CliResult r = run_cli("validate " + corpus::data_path(f));
    CHECK(r.status == 0);
    CHECK(contains(r.out, "\"ok\": true"));
  }

  CliResult pi1 = run_cli("pi1 " + corpus::data_path("triangle_233.cogfile"));
  CHECK(pi1.status == 0);
  CHECK(contains(pi1.out, "\"order\": 24"));

  CliResult undecided =
      run_cli("pi1 " + corpus::data_path("circle_pair.cogfile") + " --cog circle");
  CHECK(undecided.status == 3);
  CHECK(contains(undecided.out, "\"complete\": false"));
  CHECK(contains(undecided.out, "cosets_at_limit"));

  CliResult dev = run_cli("develop " + corpus::data_path("triangle_233.cogfile"));
  CHECK(dev.status == 0);
  CHECK(contains(dev.out, "\"vertices\": 74"));
  CHECK(contains(dev.out, "\"edges\": 216"));
  CHECK(contains(dev.out, "\"euler_characteristic\": 2"));
  CHECK(contains(dev.out, "\"simply_connected\": true"));

  CliResult star = run_cli("star " + corpus::data_path("triangle_237.cogfile") +
                           " --vertex 4");
  CHECK(star.status == 0);
  CHECK(contains(star.out, "\"total\": 8"));

  CliResult cover = run_cli("cover-check " + corpus::data_path("circle_pair.cogfile"));
  CHECK(cover.status == 0);
  CHECK(contains(cover.out, "\"covering\": true"));

  CliResult same = run_cli("homotopy " + corpus::data_path("segment_z4.cogfile") +
                           " slide_left slide_right");
  CHECK(same.status == 0);
  CHECK(contains(same.out, "\"homotopic\": true"));

  CliResult diff = run_cli("homotopy " + corpus::data_path("segment_z4.cogfile") +
                           " slide_left stuck");
  CHECK(diff.status == 1);
  CHECK(contains(diff.out, "\"homotopic\": false"));

  CliResult deck_undecided =
      run_cli("deck " + corpus::data_path("circle_pair.cogfile"));
  CHECK(deck_undecided.status == 3);

  std::string bad = "/tmp/cogs_textio_bad.cogfile";
  {
    std::ofstream f(bad);
    f << "group g {\n";
  }
  CliResult broken = run_cli("validate " + bad);
  CHECK(broken.status == 2);
  std::remove(bad.c_str());
}

TEST_CASE("deck reports are deterministic down to the byte", "[cli]") {
  std::string args = "deck " + corpus::data_path("rp2_double_cover.cogfile");
  CliResult first = run_cli(args);
  CliResult second = run_cli(args);
  CHECK(first.status == 0);
  CHECK(second.status == 0);
  CHECK_FALSE(first.out.empty());
  CHECK(first.out == second.out);
  CHECK(contains(first.out, "\"verdict\": true"));
  CHECK(contains(first.out, "\"deck_order\": 2"));
}

TEST_CASE("the committed double cover regenerates verbatim", "[cli]") {
  CliResult gen = run_cli("cover-from-subgroup " + corpus::data_path("rp2.cogfile") +
                          " --name rp2_double_cover --out -");
  CHECK(gen.status == 0);
  CHECK(gen.out == slurp(corpus::data_path("rp2_double_cover.cogfile")));
}
