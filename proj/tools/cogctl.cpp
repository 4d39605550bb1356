// cogctl: command-line front end for the cogs library.
//
// Commands operate on plain-text workspace files (see include/cogs/textio.hpp
// for the format) and print JSON summaries on stdout.  Exit codes: 0 for
// success (or a true verdict), 1 for a false verdict, 2 for errors, 3 when a
// question is undecided at the enumeration limit.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cogs/deck.hpp"
#include "cogs/development.hpp"
#include "cogs/presentation.hpp"
#include "cogs/textio.hpp"

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;
constexpr int kUndecided = 3;

template <typename T>
const T& pick_unique(const std::map<std::string, T>& m, const std::string& flag,
                     const std::string& kind, std::string& name_out) {
  if (!flag.empty()) {
    auto it = m.find(flag);
    if (it == m.end()) cogs::fail("DanglingReference", "no " + kind + " named '" + flag + "'");
    name_out = flag;
    return it->second;
  }
  if (m.size() == 1) {
    name_out = m.begin()->first;
    return m.begin()->second;
  }
  cogs::fail("Ambiguous",
             m.empty() ? "the file defines no " + kind
                       : "the file defines several " + kind + "s; pass --" + kind);
}

void emit(const json& j, const std::string& report_path) {
  std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    cogs::require(out.good(), "FileError", "cannot write '" + report_path + "'");
    out << text;
  }
}

int basepoint_of(const cogs::CogPtr& cog, std::optional<int> flag) {
  return flag ? *flag : cog->base->vertices().front();
}

int run_validate(const std::string& file) {
  cogs::Workspace ws = cogs::load_workspace(file);
  for (const auto& [n, m] : ws.morphisms) cogs::validate_cog_morphism(m);
  json j;
  j["ok"] = true;
  j["groups"] = ws.groups.size();
  j["scwols"] = ws.scwols.size();
  j["cogs"] = ws.cogs.size();
  j["morphisms"] = ws.morphisms.size();
  j["paths"] = ws.paths.size();
  emit(j, "");
  return kOk;
}

int run_pi1(const std::string& file, const std::string& cog_flag,
            std::optional<int> basepoint, int limit) {
  cogs::Workspace ws = cogs::load_workspace(file);
  std::string name;
  const cogs::CogPtr& cog = pick_unique(ws.cogs, cog_flag, "cog", name);
  int v0 = basepoint_of(cog, basepoint);
  cogs::Pi1Outcome o = cogs::compute_pi1(cog, v0, limit);
  json j;
  j["cog"] = name;
  j["basepoint"] = v0;
  j["complete"] = o.complete;
  if (o.complete) {
    j["order"] = o.pi1->group->order();
    j["generators"] = o.pi1->pres.gens.size();
    j["relators"] = o.pi1->pres.relators.size();
  } else {
    j["cosets_at_limit"] = o.cosets_at_limit;
  }
  emit(j, "");
  return o.complete ? kOk : kUndecided;
}

int run_develop(const std::string& file, const std::string& cog_flag,
                std::optional<int> basepoint, int limit) {
  cogs::Workspace ws = cogs::load_workspace(file);
  std::string name;
  const cogs::CogPtr& cog = pick_unique(ws.cogs, cog_flag, "cog", name);
  int v0 = basepoint_of(cog, basepoint);
  cogs::Pi1Outcome o = cogs::compute_pi1(cog, v0, limit);
  json j;
  j["cog"] = name;
  j["basepoint"] = v0;
  if (!o.complete) {
    j["complete"] = false;
    j["cosets_at_limit"] = o.cosets_at_limit;
    emit(j, "");
    return kUndecided;
  }
  auto G = std::make_shared<const cogs::Pi1Group>(std::move(*o.pi1));
  cogs::Development D = cogs::build_development(G);
  j["complete"] = true;
  j["pi1_order"] = G->group->order();
  j["vertices"] = D.v_sigma.size();
  j["edges"] = D.e_base.size();
  j["pairs"] = D.scwol->composites().size();
  j["euler_characteristic"] = cogs::euler_characteristic(D.scwol);
  j["action_kernel_order"] = cogs::action_kernel(D).order();
  cogs::SimpleConnectivity sc = cogs::check_simply_connected(D.scwol, limit);
  if (sc.decided)
    j["simply_connected"] = sc.simply_connected;
  else
    j["simply_connected"] = nullptr;
  emit(j, "");
  return kOk;
}

int run_star(const std::string& file, const std::string& cog_flag, int vertex) {
  cogs::Workspace ws = cogs::load_workspace(file);
  std::string name;
  const cogs::CogPtr& cog = pick_unique(ws.cogs, cog_flag, "cog", name);
  cogs::LocalStar s = cogs::local_star(cog, vertex);
  json j;
  j["cog"] = name;
  j["vertex"] = s.sigma;
  j["total"] = s.total;
  json lifts = json::array();
  for (const auto& [edge, count] : s.edge_counts)
    lifts.push_back({{"edge", edge}, {"lifts", count}});
  j["lifts"] = lifts;
  emit(j, "");
  return kOk;
}

int run_cover_check(const std::string& file, const std::string& morphism_flag) {
  cogs::Workspace ws = cogs::load_workspace(file);
  std::string name;
  const cogs::CogMorphism& m = pick_unique(ws.morphisms, morphism_flag, "morphism", name);
  cogs::CoveringCheck c = cogs::check_covering(m);
  json j;
  j["morphism"] = name;
  j["covering"] = c.ok;
  if (!c.ok) j["reason"] = c.reason;
  emit(j, "");
  return c.ok ? kOk : kFalse;
}

int run_cover_from_subgroup(const std::string& file, const std::string& cog_flag,
                            const std::vector<int>& subgroup_gens,
                            const std::string& out_name, const std::string& out_path,
                            int limit) {
  cogs::Workspace ws = cogs::load_workspace(file);
  std::string base_name;
  const cogs::CogPtr& cog = pick_unique(ws.cogs, cog_flag, "cog", base_name);
  int v0 = cog->base->vertices().front();
  cogs::Pi1Outcome o = cogs::compute_pi1(cog, v0, limit);
  if (!o.complete) {
    std::cerr << "fundamental group enumeration incomplete at " << o.cosets_at_limit
              << " cosets\n";
    return kUndecided;
  }
  auto G = std::make_shared<const cogs::Pi1Group>(std::move(*o.pi1));
  for (int g : subgroup_gens)
    cogs::require(g >= 0 && g < G->group->order(), "UnknownElement", std::to_string(g));
  cogs::Subgroup U = cogs::subgroup_generated(G->group, subgroup_gens);
  cogs::Development D = cogs::build_development(G);
  cogs::SubgroupCovering sc = cogs::covering_from_subgroup(D, U);

  cogs::Workspace out;
  out.cogs[base_name] = cog;
  for (const auto& [n, s] : ws.scwols)
    if (s.get() == cog->base.get()) out.scwols[n] = s;
  for (int v : cog->base->vertices()) {
    const cogs::GroupPtr& g = cog->group_at(v);
    if (g->order() == 1) continue;
    for (const auto& [n, h] : ws.groups)
      if (h.get() == g.get()) out.groups[n] = h;
  }
  cogs::add_cog_with_parts(out, out_name + "_total", sc.total);
  out.morphisms.emplace(out_name, sc.projection);
  std::string text = cogs::serialize_workspace(out);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    cogs::require(f.good(), "FileError", "cannot write '" + out_path + "'");
    f << text;
  }
  return kOk;
}

int run_deck(const std::string& file, const std::string& morphism_flag, int limit,
             long long bound, const std::string& report_path) {
  cogs::Workspace ws = cogs::load_workspace(file);
  std::string name;
  const cogs::CogMorphism& m = pick_unique(ws.morphisms, morphism_flag, "morphism", name);
  cogs::CoveringContext ctx = cogs::build_context(m, limit);
  cogs::MainTheoremReport r = cogs::verify_main_theorem(ctx, bound);
  json j;
  j["morphism"] = name;
  j["verdict"] = r.verdict;
  j["deck_order"] = r.deck_order;
  j["normalizer_order"] = r.normalizer_order;
  j["cu_order"] = r.cu_order;
  j["subgroup_order"] = ctx.U.order();
  j["pi1_total_order"] = ctx.GX->group->order();
  j["pi1_base_order"] = ctx.GY->group->order();
  j["epsilon_total"] = r.epsilon_total;
  j["homomorphism"] = r.homomorphism;
  j["kernel_matches"] = r.kernel_matches;
  j["surjective"] = r.surjective;
  j["surjectivity_by_cardinality"] = r.surjectivity_by_cardinality;
  j["brute_force"] = {{"too_large", r.brute_too_large},
                      {"visited", r.brute_visited},
                      {"classes", r.brute_classes}};
  j["failures"] = r.failures;
  emit(j, report_path);
  return r.verdict ? kOk : kFalse;
}

int run_homotopy(const std::string& file, const std::string& path_p,
                 const std::string& path_q, int limit) {
  cogs::Workspace ws = cogs::load_workspace(file);
  auto get = [&](const std::string& n) -> const cogs::XPath& {
    auto it = ws.paths.find(n);
    if (it == ws.paths.end()) cogs::fail("DanglingReference", "no path named '" + n + "'");
    return it->second;
  };
  const cogs::XPath& p = get(path_p);
  const cogs::XPath& q = get(path_q);
  cogs::require(p.cog.get() == q.cog.get(), "WrongCog",
                "paths live in different complexes");
  json j;
  j["paths"] = {path_p, path_q};
  if (p.initial() != q.initial() || p.terminal() != q.terminal()) {
    j["homotopic"] = false;
    j["reason"] = "endpoints differ";
    emit(j, "");
    return kFalse;
  }
  int v0 = p.cog->base->vertices().front();
  cogs::Pi1Outcome o = cogs::compute_pi1(p.cog, v0, limit);
  if (!o.complete) {
    j["complete"] = false;
    j["cosets_at_limit"] = o.cosets_at_limit;
    emit(j, "");
    return kUndecided;
  }
  int cp = cogs::class_of_path(*o.pi1, p);
  int cq = cogs::class_of_path(*o.pi1, q);
  j["class_p"] = cp;
  j["class_q"] = cq;
  j["homotopic"] = cp == cq;
  emit(j, "");
  return cp == cq ? kOk : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computations with complexes of groups over scwols"};
  app.require_subcommand(1);

  std::string file, cog_flag, morphism_flag, out_name = "cover", out_path, report_path;
  std::string path_p, path_q;
  std::optional<int> basepoint;
  int vertex = -1;
  int limit = 20000;
  long long bound = 1000000;
  std::vector<int> subgroup_gens;

  auto* v = app.add_subcommand("validate", "parse a workspace file and validate everything");
  v->add_option("file", file)->required();

  auto* p = app.add_subcommand("pi1", "enumerate the fundamental group");
  p->add_option("file", file)->required();
  p->add_option("--cog", cog_flag, "cog name (default: the unique one)");
  p->add_option("--basepoint", basepoint, "basepoint vertex (default: minimal)");
  p->add_option("--limit", limit, "coset enumeration limit");

  auto* d = app.add_subcommand("develop", "build the universal development");
  d->add_option("file", file)->required();
  d->add_option("--cog", cog_flag, "cog name (default: the unique one)");
  d->add_option("--basepoint", basepoint, "basepoint vertex (default: minimal)");
  d->add_option("--limit", limit, "coset enumeration limit");

  auto* s = app.add_subcommand("star", "count lifts over one vertex");
  s->add_option("file", file)->required();
  s->add_option("--vertex", vertex, "base vertex")->required();
  s->add_option("--cog", cog_flag, "cog name (default: the unique one)");

  auto* cc = app.add_subcommand("cover-check", "verify that a morphism is a covering");
  cc->add_option("file", file)->required();
  cc->add_option("--morphism", morphism_flag, "morphism name (default: the unique one)");

  auto* cf = app.add_subcommand("cover-from-subgroup",
                                "build the covering attached to a subgroup");
  cf->add_option("file", file)->required();
  cf->add_option("--cog", cog_flag, "cog name (default: the unique one)");
  cf->add_option("--subgroup", subgroup_gens,
                 "generators of the subgroup (element ids; empty = trivial)");
  cf->add_option("--name", out_name, "name for the covering morphism");
  cf->add_option("--out", out_path, "output file ('-' or empty for stdout)");
  cf->add_option("--limit", limit, "coset enumeration limit");

  auto* dk = app.add_subcommand("deck", "deck transformations and the structure theorem");
  dk->add_option("file", file)->required();
  dk->add_option("--morphism", morphism_flag, "morphism name (default: the unique one)");
  dk->add_option("--limit", limit, "coset enumeration limit");
  dk->add_option("--bound", bound, "brute-force search budget");
  dk->add_option("--report", report_path, "also write the JSON report here");

  auto* h = app.add_subcommand("homotopy", "decide homotopy rel endpoints of two paths");
  h->add_option("file", file)->required();
  h->add_option("p", path_p)->required();
  h->add_option("q", path_q)->required();
  h->add_option("--limit", limit, "coset enumeration limit");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(v)) return run_validate(file);
    if (app.got_subcommand(p)) return run_pi1(file, cog_flag, basepoint, limit);
    if (app.got_subcommand(d)) return run_develop(file, cog_flag, basepoint, limit);
    if (app.got_subcommand(s)) return run_star(file, cog_flag, vertex);
    if (app.got_subcommand(cc)) return run_cover_check(file, morphism_flag);
    if (app.got_subcommand(cf))
      return run_cover_from_subgroup(file, cog_flag, subgroup_gens, out_name, out_path,
                                     limit);
    if (app.got_subcommand(dk))
      return run_deck(file, morphism_flag, limit, bound, report_path);
    if (app.got_subcommand(h)) return run_homotopy(file, path_p, path_q, limit);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  } catch (const cogs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code == "Undecided" ? kUndecided : kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
