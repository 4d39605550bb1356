#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cogs/cog.hpp"
#include "cogs/xpath.hpp"

namespace cogs {

// ---------------------------------------------------------------------------
// Plain-text workspace files.  A file is a sequence of named blocks:
//
//   group klein {
//     perm 4 : 1 0 2 3          # generators; element ids follow the closure
//     perm 4 : 0 1 3 2          # order (identity first, then products)
//   }
//   group exact {
//     row 0 1                   # or the full multiplication table, one row
//     row 1 0                   # per element; ids are preserved verbatim
//   }
//   scwol tri {
//     vertices 0 1 2
//     edge 0 : 0 -> 1
//     compose 1 0 = 2
//   }
//   cog X {
//     scwol tri
//     local 1 = klein           # omitted vertices carry the trivial group
//     psi 0 : 0 2               # image of each source element
//     twist 1 0 = 0             # omitted twists are the identity
//   }
//   cogmorphism f {
//     source X
//     target Y
//     vertex 0 -> 0
//     edge 0 -> 0
//     local 1 : 0 1 2 3         # omitted locals require a trivial source
//     elt 0 = 0                 # omitted elements are the identity
//   }
//   path p {
//     cog X
//     start 0
//     elts 0 2 0
//     edges 0+ 3-
//   }
//
// '#' starts a comment.  Parsing reports SyntaxError with a line number;
// semantic problems surface as the usual validation errors.
// ---------------------------------------------------------------------------

struct Workspace {
  std::map<std::string, GroupPtr> groups;
  std::map<std::string, ScwolPtr> scwols;
  std::map<std::string, CogPtr> cogs;
  std::map<std::string, CogMorphism> morphisms;
  std::map<std::string, XPath> paths;
};

namespace textio_detail {

inline void syntax(int line, const std::string& what) {
  fail("SyntaxError", "line " + std::to_string(line) + ": " + what);
}

inline int to_int(const std::string& tok, int line) {
  size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(tok, &pos);
  } catch (...) {
    syntax(line, "expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size()) syntax(line, "expected an integer, got '" + tok + "'");
  return value;
}

inline bool valid_name(const std::string& s) {
  if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_'))
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

struct Line {
  int no;
  std::vector<std::string> tok;
};

inline std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line l{no, {}};
    std::string t;
    while (ss >> t) l.tok.push_back(t);
    if (!l.tok.empty()) out.push_back(std::move(l));
  }
  return out;
}

template <typename T>
inline const T& lookup(const std::map<std::string, T>& m, const std::string& name,
                       const std::string& kind, int line) {
  auto it = m.find(name);
  if (it == m.end())
    fail("DanglingReference",
         "line " + std::to_string(line) + ": unknown " + kind + " '" + name + "'");
  return it->second;
}

}  // namespace textio_detail

inline Workspace parse_workspace(std::istream& in) {
  using namespace textio_detail;
  Workspace ws;
  GroupPtr trivial = group_from_table({{0}});
  std::vector<Line> lines = tokenize(in);
  size_t i = 0;

  auto block_open = [&](const Line& l) {
    if (l.tok.size() != 3 || l.tok[2] != "{")
      syntax(l.no, "expected '<kind> <name> {'");
    if (!valid_name(l.tok[1])) syntax(l.no, "bad name '" + l.tok[1] + "'");
  };
  auto fresh = [&](const std::string& kind, const std::string& name, int line) {
    bool taken = (kind == "group" && ws.groups.count(name)) ||
                 (kind == "scwol" && ws.scwols.count(name)) ||
                 (kind == "cog" && ws.cogs.count(name)) ||
                 (kind == "cogmorphism" && ws.morphisms.count(name)) ||
                 (kind == "path" && ws.paths.count(name));
    if (taken)
      fail("DuplicateName", "line " + std::to_string(line) + ": '" + name + "'");
  };

  while (i < lines.size()) {
    const Line& head = lines[i];
    const std::string& kind = head.tok[0];
    block_open(head);
    std::string name = head.tok[1];
    fresh(kind, name, head.no);
    ++i;

    std::vector<Line> body;
    bool closed = false;
    while (i < lines.size()) {
      if (lines[i].tok.size() == 1 && lines[i].tok[0] == "}") {
        closed = true;
        ++i;
        break;
      }
      body.push_back(lines[i]);
      ++i;
    }
    if (!closed) syntax(head.no, "unterminated block '" + name + "'");

    if (kind == "group") {
      std::vector<std::vector<int>> perms, rows;
      int degree = -1;
      for (const Line& l : body) {
        if (l.tok[0] == "perm") {
          if (l.tok.size() < 4 || l.tok[2] != ":") syntax(l.no, "expected 'perm N : images'");
          int n = to_int(l.tok[1], l.no);
          if (degree < 0) degree = n;
          if (n != degree || static_cast<int>(l.tok.size()) - 3 != n)
            syntax(l.no, "permutation degree mismatch");
          std::vector<int> p;
          for (size_t k = 3; k < l.tok.size(); ++k) p.push_back(to_int(l.tok[k], l.no));
          perms.push_back(std::move(p));
        } else if (l.tok[0] == "row") {
          std::vector<int> r;
          for (size_t k = 1; k < l.tok.size(); ++k) r.push_back(to_int(l.tok[k], l.no));
          rows.push_back(std::move(r));
        } else {
          syntax(l.no, "unexpected '" + l.tok[0] + "' in group block");
        }
      }
      if (!perms.empty() && !rows.empty())
        syntax(head.no, "group '" + name + "' mixes perm and row lines");
      if (perms.empty() && rows.empty())
        syntax(head.no, "group '" + name + "' is empty");
      ws.groups[name] =
          perms.empty() ? group_from_table(rows) : group_from_permutations(degree, perms);
    } else if (kind == "scwol") {
      std::vector<int> vs;
      std::vector<ScwolEdge> es;
      std::map<std::pair<int, int>, int> comp;
      for (const Line& l : body) {
        if (l.tok[0] == "vertices") {
          for (size_t k = 1; k < l.tok.size(); ++k) vs.push_back(to_int(l.tok[k], l.no));
        } else if (l.tok[0] == "edge") {
          if (l.tok.size() != 6 || l.tok[2] != ":" || l.tok[4] != "->")
            syntax(l.no, "expected 'edge ID : I -> T'");
          es.push_back({to_int(l.tok[1], l.no), to_int(l.tok[3], l.no),
                        to_int(l.tok[5], l.no)});
        } else if (l.tok[0] == "compose") {
          if (l.tok.size() != 5 || l.tok[3] != "=")
            syntax(l.no, "expected 'compose A B = AB'");
          comp[{to_int(l.tok[1], l.no), to_int(l.tok[2], l.no)}] =
              to_int(l.tok[4], l.no);
        } else {
          syntax(l.no, "unexpected '" + l.tok[0] + "' in scwol block");
        }
      }
      ws.scwols[name] = make_scwol(std::move(vs), std::move(es), std::move(comp));
    } else if (kind == "cog") {
      ScwolPtr base;
      std::map<int, GroupPtr> local;
      std::map<int, std::vector<int>> psi_img;
      std::map<std::pair<int, int>, int> twist;
      for (const Line& l : body) {
        if (l.tok[0] == "scwol") {
          if (l.tok.size() != 2) syntax(l.no, "expected 'scwol NAME'");
          base = lookup(ws.scwols, l.tok[1], "scwol", l.no);
        } else if (l.tok[0] == "local") {
          if (l.tok.size() != 4 || l.tok[2] != "=")
            syntax(l.no, "expected 'local V = GROUP'");
          local[to_int(l.tok[1], l.no)] = lookup(ws.groups, l.tok[3], "group", l.no);
        } else if (l.tok[0] == "psi") {
          if (l.tok.size() < 4 || l.tok[2] != ":")
            syntax(l.no, "expected 'psi E : images'");
          std::vector<int> img;
          for (size_t k = 3; k < l.tok.size(); ++k) img.push_back(to_int(l.tok[k], l.no));
          psi_img[to_int(l.tok[1], l.no)] = std::move(img);
        } else if (l.tok[0] == "twist") {
          if (l.tok.size() != 5 || l.tok[3] != "=")
            syntax(l.no, "expected 'twist A B = g'");
          twist[{to_int(l.tok[1], l.no), to_int(l.tok[2], l.no)}] =
              to_int(l.tok[4], l.no);
        } else {
          syntax(l.no, "unexpected '" + l.tok[0] + "' in cog block");
        }
      }
      if (!base) syntax(head.no, "cog '" + name + "' has no scwol line");
      for (int v : base->vertices())
        if (!local.count(v)) local[v] = trivial;
      std::map<int, GroupHom> psi;
      for (const ScwolEdge& a : base->edges()) {
        const GroupPtr& src = local.at(a.i);
        const GroupPtr& dst = local.at(a.t);
        auto it = psi_img.find(a.id);
        if (it == psi_img.end()) {
          require(src->order() == 1, "MissingImage",
                  "cog '" + name + "': psi " + std::to_string(a.id) +
                      " omitted but the source group is nontrivial");
          psi[a.id] = GroupHom{src, dst, {FiniteGroup::kId}};
        } else {
          psi[a.id] = GroupHom{src, dst, it->second};
        }
      }
      for (const auto& [key, ab] : base->composites())
        if (!twist.count(key)) twist[key] = FiniteGroup::kId;
      ws.cogs[name] = make_cog(base, std::move(local), std::move(psi), std::move(twist));
    } else if (kind == "cogmorphism") {
      CogPtr src, dst;
      std::map<int, int> vmap, emap;
      std::map<int, std::vector<int>> local_img;
      std::map<int, int> elt;
      for (const Line& l : body) {
        if (l.tok[0] == "source") {
          if (l.tok.size() != 2) syntax(l.no, "expected 'source NAME'");
          src = lookup(ws.cogs, l.tok[1], "cog", l.no);
        } else if (l.tok[0] == "target") {
          if (l.tok.size() != 2) syntax(l.no, "expected 'target NAME'");
          dst = lookup(ws.cogs, l.tok[1], "cog", l.no);
        } else if (l.tok[0] == "vertex") {
          if (l.tok.size() != 4 || l.tok[2] != "->")
            syntax(l.no, "expected 'vertex V -> W'");
          vmap[to_int(l.tok[1], l.no)] = to_int(l.tok[3], l.no);
        } else if (l.tok[0] == "edge") {
          if (l.tok.size() != 4 || l.tok[2] != "->")
            syntax(l.no, "expected 'edge A -> B'");
          emap[to_int(l.tok[1], l.no)] = to_int(l.tok[3], l.no);
        } else if (l.tok[0] == "local") {
          if (l.tok.size() < 3 || l.tok[2] != ":")
            syntax(l.no, "expected 'local V : images'");
          std::vector<int> img;
          for (size_t k = 3; k < l.tok.size(); ++k) img.push_back(to_int(l.tok[k], l.no));
          local_img[to_int(l.tok[1], l.no)] = std::move(img);
        } else if (l.tok[0] == "elt") {
          if (l.tok.size() != 4 || l.tok[2] != "=")
            syntax(l.no, "expected 'elt A = g'");
          elt[to_int(l.tok[1], l.no)] = to_int(l.tok[3], l.no);
        } else {
          syntax(l.no, "unexpected '" + l.tok[0] + "' in cogmorphism block");
        }
      }
      if (!src || !dst) syntax(head.no, "morphism '" + name + "' needs source and target");
      CogMorphism m{src, dst, ScwolMorphism{src->base, dst->base, std::move(vmap),
                                            std::move(emap)},
                    {}, {}};
      for (int v : src->base->vertices()) {
        require(m.f.vmap.count(v) > 0, "MissingImage",
                "morphism '" + name + "': vertex " + std::to_string(v));
        auto it = local_img.find(v);
        if (it == local_img.end()) {
          require(src->group_at(v)->order() == 1, "MissingImage",
                  "morphism '" + name + "': local " + std::to_string(v) +
                      " omitted but the source group is nontrivial");
          m.local[v] = GroupHom{src->group_at(v), dst->group_at(m.f.v(v)),
                                {FiniteGroup::kId}};
        } else {
          m.local[v] = GroupHom{src->group_at(v), dst->group_at(m.f.v(v)), it->second};
        }
      }
      for (const ScwolEdge& a : src->base->edges()) {
        auto it = elt.find(a.id);
        m.edge_elt[a.id] = it == elt.end() ? FiniteGroup::kId : it->second;
      }
      validate_cog_morphism(m);
      ws.morphisms.emplace(name, std::move(m));
    } else if (kind == "path") {
      CogPtr cog;
      int start = -1;
      bool has_start = false;
      std::vector<int> elts;
      std::vector<OrientedEdge> edges;
      for (const Line& l : body) {
        if (l.tok[0] == "cog") {
          if (l.tok.size() != 2) syntax(l.no, "expected 'cog NAME'");
          cog = lookup(ws.cogs, l.tok[1], "cog", l.no);
        } else if (l.tok[0] == "start") {
          if (l.tok.size() != 2) syntax(l.no, "expected 'start V'");
          start = to_int(l.tok[1], l.no);
          has_start = true;
        } else if (l.tok[0] == "elts") {
          for (size_t k = 1; k < l.tok.size(); ++k) elts.push_back(to_int(l.tok[k], l.no));
        } else if (l.tok[0] == "edges") {
          for (size_t k = 1; k < l.tok.size(); ++k) {
            std::string t = l.tok[k];
            if (t.size() < 2 || (t.back() != '+' && t.back() != '-'))
              syntax(l.no, "expected edge tokens like '3+' or '7-'");
            bool plus = t.back() == '+';
            t.pop_back();
            edges.push_back({to_int(t, l.no), plus});
          }
        } else {
          syntax(l.no, "unexpected '" + l.tok[0] + "' in path block");
        }
      }
      if (!cog || !has_start) syntax(head.no, "path '" + name + "' needs cog and start");
      ws.paths.emplace(name, make_xpath(cog, start, std::move(elts), std::move(edges)));
    } else {
      syntax(head.no, "unknown block kind '" + kind + "'");
    }
  }
  return ws;
}

inline Workspace load_workspace(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "FileError", "cannot open '" + path + "'");
  return parse_workspace(in);
}

// ---------------------------------------------------------------------------
// Canonical serialization: groups, scwols, cogs, morphisms, then paths, each
// sorted by name; all numeric lists in their canonical orders.  Reparsing the
// output reproduces the workspace, and serializing again is byte-stable.
// ---------------------------------------------------------------------------

inline void write_group(std::ostream& os, const std::string& name, const GroupPtr& g) {
  os << "group " << name << " {\n";
  for (int a = 0; a < g->order(); ++a) {
    os << "  row";
    for (int b = 0; b < g->order(); ++b) os << ' ' << g->mul(a, b);
    os << "\n";
  }
  os << "}\n";
}

inline void write_scwol(std::ostream& os, const std::string& name, const ScwolPtr& s) {
  os << "scwol " << name << " {\n  vertices";
  for (int v : s->vertices()) os << ' ' << v;
  os << "\n";
  for (const ScwolEdge& a : s->edges())
    os << "  edge " << a.id << " : " << a.i << " -> " << a.t << "\n";
  for (const auto& [key, ab] : s->composites())
    os << "  compose " << key.first << ' ' << key.second << " = " << ab << "\n";
  os << "}\n";
}

inline void write_cog(std::ostream& os, const std::string& name, const CogPtr& cog,
                      const std::string& scwol_name,
                      const std::map<const FiniteGroup*, std::string>& group_names) {
  os << "cog " << name << " {\n  scwol " << scwol_name << "\n";
  for (int v : cog->base->vertices()) {
    const GroupPtr& g = cog->group_at(v);
    if (g->order() == 1) continue;
    os << "  local " << v << " = " << group_names.at(g.get()) << "\n";
  }
  for (const ScwolEdge& a : cog->base->edges()) {
    const GroupHom& h = cog->psi_at(a.id);
    if (h.source->order() == 1) continue;
    os << "  psi " << a.id << " :";
    for (int img : h.image) os << ' ' << img;
    os << "\n";
  }
  for (const auto& [key, ab] : cog->base->composites()) {
    int tw = cog->twist_at(key.first, key.second);
    if (tw == FiniteGroup::kId) continue;
    os << "  twist " << key.first << ' ' << key.second << " = " << tw << "\n";
  }
  os << "}\n";
}

inline void write_cog_morphism(std::ostream& os, const std::string& name,
                               const CogMorphism& m, const std::string& source_name,
                               const std::string& target_name) {
  os << "cogmorphism " << name << " {\n";
  os << "  source " << source_name << "\n  target " << target_name << "\n";
  for (const auto& [v, w] : m.f.vmap) os << "  vertex " << v << " -> " << w << "\n";
  for (const auto& [a, b] : m.f.emap) os << "  edge " << a << " -> " << b << "\n";
  for (const auto& [v, h] : m.local) {
    if (h.source->order() == 1) continue;
    os << "  local " << v << " :";
    for (int img : h.image) os << ' ' << img;
    os << "\n";
  }
  for (const auto& [a, g] : m.edge_elt) {
    if (g == FiniteGroup::kId) continue;
    os << "  elt " << a << " = " << g << "\n";
  }
  os << "}\n";
}

inline void write_path(std::ostream& os, const std::string& name, const XPath& p,
                       const std::string& cog_name) {
  os << "path " << name << " {\n";
  os << "  cog " << cog_name << "\n  start " << p.initial() << "\n  elts";
  for (int g : p.elts) os << ' ' << g;
  os << "\n";
  if (!p.edges.empty()) {
    os << "  edges";
    for (const OrientedEdge& e : p.edges) os << ' ' << e.edge << (e.plus ? '+' : '-');
    os << "\n";
  }
  os << "}\n";
}

inline std::string serialize_workspace(const Workspace& ws) {
  std::ostringstream os;
  // name lookups by object identity
  std::map<const FiniteGroup*, std::string> gname;
  std::map<const Scwol*, std::string> sname;
  std::map<const ComplexOfGroups*, std::string> cname;
  for (const auto& [n, g] : ws.groups) gname.emplace(g.get(), n);
  for (const auto& [n, s] : ws.scwols) sname.emplace(s.get(), n);
  for (const auto& [n, c] : ws.cogs) cname.emplace(c.get(), n);

  bool first = true;
  auto gap = [&]() {
    if (!first) os << "\n";
    first = false;
  };
  for (const auto& [n, g] : ws.groups) {
    gap();
    write_group(os, n, g);
  }
  for (const auto& [n, s] : ws.scwols) {
    gap();
    write_scwol(os, n, s);
  }
  for (const auto& [n, c] : ws.cogs) {
    gap();
    write_cog(os, n, c, sname.at(c->base.get()), gname);
  }
  for (const auto& [n, m] : ws.morphisms) {
    gap();
    write_cog_morphism(os, n, m, cname.at(m.source.get()), cname.at(m.target.get()));
  }
  for (const auto& [n, p] : ws.paths) {
    gap();
    write_path(os, n, p, cname.at(p.cog.get()));
  }
  return os.str();
}

// Registers the cog plus names for its scwol and nontrivial local groups, so
// the workspace can be serialized self-contained.
inline void add_cog_with_parts(Workspace& ws, const std::string& name,
                               const CogPtr& cog) {
  require(!ws.cogs.count(name), "DuplicateName", name);
  bool scwol_known = false;
  for (const auto& [n, s] : ws.scwols)
    if (s.get() == cog->base.get()) scwol_known = true;
  if (!scwol_known) ws.scwols[name + "_scwol"] = cog->base;
  for (int v : cog->base->vertices()) {
    const GroupPtr& g = cog->group_at(v);
    if (g->order() == 1) continue;
    bool known = false;
    for (const auto& [n, h] : ws.groups)
      if (h.get() == g.get()) known = true;
    if (!known) ws.groups[name + "_g" + std::to_string(v)] = g;
  }
  ws.cogs[name] = cog;
}

}  // namespace cogs
