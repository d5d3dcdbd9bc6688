// giso: command-line front end. Exit codes: 0 decided, 1 usage or input
// error, 2 resource cap, 3 self-check or oracle failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "giso/certificates.hpp"
#include "giso/errors.hpp"
#include "giso/graph.hpp"
#include "giso/group.hpp"
#include "giso/relstruct.hpp"
#include "giso/schemes.hpp"
#include "giso/split_johnson.hpp"
#include "giso/string_iso.hpp"
#include "giso/wl.hpp"

using json = nlohmann::json;
using namespace giso;

namespace {

struct OracleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json = false;
  bool oracle = false;
  bool trace = false;
};

std::string big(const BigInt& b) { return b.str(); }

json budget_json(const RecursionBudget& b) {
  json j;
  j["nodes"] = b.node_counter;
  j["max_depth"] = b.max_depth;
  j["stabilized_points"] = b.stabilized_points;
  j["coset_multiplier"] = big(b.coset_multiplier);
  j["branches"] = json::object();
  for (const auto& [k, v] : b.branches) j["branches"][k] = v;
  return j;
}

void print_budget(const RecursionBudget& b) {
  std::cout << "nodes " << b.node_counter << ", max depth " << b.max_depth << "\n";
  for (const auto& [k, v] : b.branches) std::cout << "  branch " << k << ": " << v << "\n";
}

void emit(const Globals& g, const json& j, const std::function<void()>& text) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    text();
  }
}

IsoConfig config_for(const Globals& g) {
  IsoConfig c = IsoConfig::from_env();
  c.trace = g.trace;
  return c;
}

// ---- iso-graph --------------------------------------------------------

struct IsoGraphArgs {
  std::string a, b;
  int max_degree = 0;
};

int cmd_iso_graph(const Globals& g, const IsoGraphArgs& args) {
  Graph g1 = read_graph_file(args.a), g2 = read_graph_file(args.b);
  json j;
  j["vertices"] = {g1.n, g2.n};
  bool iso = false;
  std::optional<Permutation> map;
  BigInt aut = 0;
  RecursionBudget budget;
  if (args.max_degree > 0) {
    auto r = bounded_degree_pipeline(g1, g2, args.max_degree);
    iso = !r.iso.empty;
    if (iso) {
      map = r.iso.rep;
      aut = r.iso.size();
    }
    j["pipeline"] = "bounded_degree";
    json gad = json::array();
    for (const auto& rep : r.gadgets)
      gad.push_back({{"e2", {rep.e2.first, rep.e2.second}},
                     {"fixing", rep.fixing},
                     {"transposing", rep.transposing},
                     {"order", big(rep.order)}});
    j["gadgets"] = gad;
  } else {
    auto r = graph_iso(g1, g2, config_for(g));
    iso = r.isomorphic;
    map = r.iso;
    aut = r.aut_order;
    budget = r.budget;
    j["pipeline"] = "string";
    j["budget"] = budget_json(budget);
    if (g.trace) j["trace"] = budget.trace;
  }
  j["isomorphic"] = iso;
  // The order of the isomorphism coset, which is |Aut(a)| only when it is
  // nonempty.
  j["aut_order"] = iso ? json(big(aut)) : json(nullptr);
  if (map) j["iso"] = map->images();
  bool mismatch = false;
  if (g.oracle) {
    json o;
    if (g1.n != g2.n || g1.n > 16) {
      o["checked"] = false;
    } else {
      bool expect = brute_force_isomorphic(g1, g2);
      o["checked"] = true;
      o["isomorphic"] = expect;
      bool agree = expect == iso;
      if (iso && map) agree = agree && g1.edges.size() == g2.edges.size() &&
                              [&] {
                                for (auto [u, v] : g1.edges)
                                  if (!g2.has_edge((*map)[u], (*map)[v])) return false;
                                return true;
                              }();
      if (iso && g1.n <= 10 && aut > 0) {
        auto all = brute_force_iso(g1, g1, 10);
        o["aut_order"] = all.size();
        agree = agree && BigInt(all.size()) == aut;
      }
      o["agrees"] = agree;
      mismatch = !agree;
    }
    j["oracle"] = o;
  }
  emit(g, j, [&] {
    std::cout << (iso ? "isomorphic" : "not isomorphic") << "\n";
    if (map) std::cout << "iso " << *map << "\n";
    if (iso) std::cout << "aut order " << aut << "\n";
    if (args.max_degree > 0) {
      for (const auto& gd : j["gadgets"])
        std::cout << "  gadget e2=(" << gd["e2"][0] << "," << gd["e2"][1] << ") order "
                  << gd["order"].get<std::string>() << " fixing " << gd["fixing"]
                  << " transposing " << gd["transposing"] << "\n";
    } else {
      print_budget(budget);
    }
    if (g.trace)
      for (const auto& line : budget.trace) std::cout << "trace: " << line << "\n";
    if (g.oracle) {
      if (!j["oracle"]["checked"].get<bool>())
        std::cout << "oracle: skipped\n";
      else
        std::cout << "oracle: " << (j["oracle"]["agrees"].get<bool>() ? "agrees" : "DISAGREES")
                  << "\n";
    }
  });
  if (mismatch) throw OracleMismatch("iso-graph disagrees with the oracle");
  return 0;
}

// ---- iso-string -------------------------------------------------------

struct IsoStringArgs {
  std::string group, x, y;
};

int cmd_iso_string(const Globals& g, const IsoStringArgs& args) {
  GenSet gens = read_generators_file(args.group);
  ColoredString x = read_string_file(args.x), y = read_string_file(args.y);
  if (x.size() != gens.degree || y.size() != gens.degree)
    throw InputError("string lengths must equal the group degree");
  RecursionBudget budget;
  IsoCoset c = main_string_iso(gens, x, y, config_for(g), &budget);
  json j;
  j["isomorphic"] = !c.empty;
  j["size"] = big(c.size());
  if (!c.empty) {
    j["rep"] = c.rep.images();
    json ag = json::array();
    for (const auto& p : c.group.generators().gens) ag.push_back(p.images());
    j["aut_generators"] = ag;
  }
  j["budget"] = budget_json(budget);
  if (g.trace) j["trace"] = budget.trace;
  bool mismatch = false;
  if (g.oracle) {
    PermGroup grp(gens);
    json o;
    if (grp.order() > 1000000) {
      o["checked"] = false;
    } else {
      std::size_t count = 0;
      bool member_ok = true;
      grp.chain().for_each_element([&](const Permutation& p) {
        if (act(x, p) == y) {
          ++count;
          if (!c.contains(p)) member_ok = false;
        }
        return true;
      });
      o["checked"] = true;
      o["size"] = count;
      o["agrees"] = member_ok && BigInt(count) == c.size();
      mismatch = !o["agrees"].get<bool>();
    }
    j["oracle"] = o;
  }
  emit(g, j, [&] {
    std::cout << (c.empty ? "not isomorphic" : "isomorphic") << "\n";
    if (!c.empty) std::cout << "rep " << c.rep << "\nsize " << c.size() << "\n";
    print_budget(budget);
    if (g.trace)
      for (const auto& line : budget.trace) std::cout << "trace: " << line << "\n";
    if (g.oracle && j["oracle"]["checked"].get<bool>())
      std::cout << "oracle: " << (j["oracle"]["agrees"].get<bool>() ? "agrees" : "DISAGREES")
                << "\n";
  });
  if (mismatch) throw OracleMismatch("iso-string disagrees with the oracle");
  return 0;
}

// ---- wl ---------------------------------------------------------------

struct WlArgs {
  int k = 2;
  std::string graph;
  bool report = false;
};

// k-tuples colored by equality pattern and the adjacency of their entries.
Configuration graph_tuple_configuration(const Graph& gr, int k) {
  if (k == 2) return graph_configuration(gr.n, gr.edges, gr.directed);
  std::size_t total = dense_size(gr.n, k);
  std::vector<Configuration::Description> d(total);
  Tuple t(k, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    for (int i = k - 1; i >= 0; --i) {
      t[i] = static_cast<int>(r % gr.n);
      r /= gr.n;
    }
    auto rho = equality_pattern(t);
    auto& desc = d[idx];
    desc.assign(rho.begin(), rho.end());
    for (int i = 0; i < k; ++i)
      for (int j2 = 0; j2 < k; ++j2) desc.push_back(i != j2 && gr.has_edge(t[i], t[j2]) ? 1 : 0);
  }
  return Configuration::from_descriptions(gr.n, k, d);
}

int cmd_wl(const Globals& g, const WlArgs& args) {
  if (args.k < 2 || args.k > 4) throw InputError("--k must be 2, 3 or 4");
  Graph gr = read_graph_file(args.graph);
  Configuration c = graph_tuple_configuration(gr, args.k);
  auto input_report = check_coherent(c);
  WLResult r = wl_rounds(c);
  auto final_report = check_coherent(r.config);
  json j;
  j["k"] = args.k;
  j["vertices"] = gr.n;
  j["input_classes"] = c.num_colors();
  j["input_coherent"] = input_report.is_coherent;
  j["rounds"] = r.rounds;
  j["classes_per_round"] = r.history;
  j["final_classes"] = r.config.num_colors();
  j["final_coherent"] = final_report.is_coherent;
  if (input_report.witness) {
    const auto& w = *input_report.witness;
    j["witness"] = {{"first", w.first}, {"second", w.second}, {"kvec", w.kvec},
                    {"count_first", w.count_first}, {"count_second", w.count_second}};
  }
  if (args.report) {
    std::vector<std::size_t> sizes = r.config.class_sizes();
    j["class_sizes"] = sizes;
  }
  emit(g, j, [&] {
    if (input_report.is_coherent)
      std::cout << "coherent after " << r.rounds << " round" << (r.rounds == 1 ? "" : "s")
                << "\n";
    else
      std::cout << "refined to a coherent configuration after " << r.rounds << " rounds\n";
    std::cout << "classes: " << c.num_colors() << " -> " << r.config.num_colors() << "\n";
    if (args.report) {
      for (std::size_t i = 0; i < r.history.size(); ++i)
        std::cout << "  round " << i + 1 << ": " << r.history[i] << " classes\n";
      if (input_report.witness) {
        const auto& w = *input_report.witness;
        std::cout << "  input witness: tuples";
        for (int v : w.first) std::cout << ' ' << v;
        std::cout << " /";
        for (int v : w.second) std::cout << ' ' << v;
        std::cout << " counts " << w.count_first << " vs " << w.count_second << "\n";
      }
      std::cout << "  final coherent: " << (final_report.is_coherent ? "yes" : "no") << "\n";
    }
  });
  if (!final_report.is_coherent) throw InternalError("refinement output is not coherent");
  return 0;
}

// ---- group ------------------------------------------------------------

struct GroupArgs {
  std::string op, file, perm;
};

// All elements by breadth-first closure; nullopt past `cap`.
std::optional<std::vector<Permutation>> closure(const GenSet& gens, std::size_t cap) {
  std::unordered_set<Permutation, PermutationHash> seen;
  std::vector<Permutation> out{Permutation(gens.degree)};
  seen.insert(out[0]);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& s : gens.gens) {
      Permutation p = out[i] * s;
      if (seen.insert(p).second) {
        out.push_back(p);
        if (out.size() > cap) return std::nullopt;
      }
    }
  return out;
}

json cells_json(const std::vector<std::vector<int>>& cells) { return json(cells); }

int cmd_group(const Globals& g, const GroupArgs& args) {
  GenSet gens = read_generators_file(args.file);
  PermGroup grp(gens);
  json j;
  j["degree"] = gens.degree;
  j["op"] = args.op;
  std::optional<std::vector<Permutation>> all;
  if (g.oracle) all = closure(gens, 20000);
  bool agree = true;
  std::function<void()> text;
  if (args.op == "order") {
    j["order"] = big(grp.order());
    if (all) agree = BigInt(all->size()) == grp.order();
    text = [&] { std::cout << "order " << grp.order() << "\n"; };
  } else if (args.op == "member") {
    if (args.perm.empty()) throw InputError("group member needs --perm");
    Permutation p = parse_permutation(args.perm, gens.degree);
    bool m = grp.contains(p);
    j["member"] = m;
    if (all) agree = m == (std::find(all->begin(), all->end(), p) != all->end());
    text = [&] { std::cout << (m ? "member" : "not a member") << "\n"; };
  } else if (args.op == "orbits") {
    auto o = orbits(gens);
    j["orbits"] = cells_json(o);
    if (all) {
      std::vector<std::vector<int>> brute;
      std::vector<char> done(gens.degree, 0);
      for (int v = 0; v < gens.degree; ++v) {
        if (done[v]) continue;
        std::set<int> orb;
        for (const auto& p : *all) orb.insert(p[v]);
        for (int w : orb) done[w] = 1;
        brute.emplace_back(orb.begin(), orb.end());
      }
      agree = brute == o;
    }
    text = [&] {
      for (const auto& cell : o) {
        std::cout << "orbit";
        for (int v : cell) std::cout << ' ' << v;
        std::cout << "\n";
      }
    };
  } else if (args.op == "blocks") {
    auto o = orbits(gens);
    bool transitive = o.size() == 1;
    j["transitive"] = transitive;
    std::optional<BlockSystem> bs;
    if (transitive) bs = minimal_block_system(gens);
    j["primitive"] = transitive && !bs;
    if (bs) {
      j["blocks"] = cells_json(bs->blocks);
      if (all)
        for (const auto& p : *all)
          for (const auto& b : bs->blocks) {
            int target = bs->block_of[p[b[0]]];
            for (int v : b) agree = agree && bs->block_of[p[v]] == target;
          }
    }
    text = [&] {
      if (!transitive)
        std::cout << "not transitive\n";
      else if (!bs)
        std::cout << "primitive\n";
      else {
        std::cout << "imprimitive, " << bs->blocks.size() << " blocks of size " << bs->block_size
                  << "\n";
        for (const auto& b : bs->blocks) {
          std::cout << "block";
          for (int v : b) std::cout << ' ' << v;
          std::cout << "\n";
        }
      }
    };
  } else {
    throw InputError("group op must be order, member, orbits or blocks");
  }
  if (g.oracle) {
    j["oracle"] = {{"checked", all.has_value()}, {"agrees", agree}};
    if (!all) agree = true;
  }
  emit(g, j, [&] {
    text();
    if (g.oracle)
      std::cout << "oracle: " << (!all ? "skipped (closure over 20000)" : agree ? "agrees" : "DISAGREES")
                << "\n";
  });
  if (!agree) throw OracleMismatch("group computation disagrees with the closure");
  return 0;
}

// ---- scheme -----------------------------------------------------------

struct SchemeArgs {
  std::string file;
  int m = 0, s = 0;
};

int cmd_scheme_classify(const Globals& g, const SchemeArgs& args) {
  Configuration c = read_configuration_file(args.file);
  auto rep = check_coherent(c);
  json j;
  j["coherent"] = rep.is_coherent;
  if (!rep.is_coherent) {
    const auto& w = *rep.witness;
    j["witness"] = {{"first", w.first}, {"second", w.second}, {"kvec", w.kvec},
                    {"count_first", w.count_first}, {"count_second", w.count_second}};
    emit(g, j, [&] { std::cout << "not coherent\n"; });
    return 0;
  }
  if (c.arity() != 2) throw InputError("classify needs a classical (arity 2) configuration");
  auto s = classify_classical(c);
  j["homogeneous"] = s.homogeneous;
  j["primitive"] = s.primitive;
  j["uniprimitive"] = s.uniprimitive;
  j["trivial_clique"] = s.trivial_clique;
  j["vertex_classes"] = cells_json(s.vertex_classes);
  json cg = json::array();
  for (const auto& x : s.color_graphs)
    cg.push_back({{"color", x.color}, {"out_degree", x.out_degree},
                  {"components", cells_json(x.components)}});
  j["color_graphs"] = cg;
  emit(g, j, [&] {
    std::cout << "coherent; homogeneous " << (s.homogeneous ? "yes" : "no") << ", primitive "
              << (s.primitive ? "yes" : "no") << ", uniprimitive "
              << (s.uniprimitive ? "yes" : "no") << ", trivial clique "
              << (s.trivial_clique ? "yes" : "no") << "\n";
    for (const auto& x : s.color_graphs)
      std::cout << "  color " << x.color << ": out-degree " << x.out_degree << ", "
                << x.components.size() << " component(s)\n";
  });
  return 0;
}

int cmd_scheme_johnson(const Globals& g, const SchemeArgs& args) {
  Configuration c = read_configuration_file(args.file);
  IdentifyFailure why;
  auto id = identify_johnson(c, args.m, args.s, &why);
  json j;
  j["johnson"] = id.has_value();
  if (id) {
    j["m"] = id->m;
    j["s"] = id->s;
    j["lambda"] = cells_json(id->lambda);
    j["iota"] = cells_json(id->iota);
    j["color_to_intersection"] = id->color_to_intersection;
  } else {
    j["reason"] = why.reason;
  }
  emit(g, j, [&] {
    if (!id) {
      std::cout << "not a Johnson scheme: " << why.reason << "\n";
      return;
    }
    std::cout << "J(" << id->m << "," << id->s << ")\n";
    for (std::size_t v = 0; v < id->iota.size(); ++v) {
      std::cout << "  " << v << " ->";
      for (int l : id->iota[v]) std::cout << ' ' << l;
      std::cout << "\n";
    }
  });
  return 0;
}

// ---- soj --------------------------------------------------------------

struct SojArgs {
  std::string file;
  double alpha = 2.0 / 3.0;
};

int cmd_soj(const Globals& g, const SojArgs& args) {
  if (!(args.alpha >= 2.0 / 3.0 - 1e-3 && args.alpha < 1))
    throw InputError("--alpha must lie in [2/3, 1)");
  Configuration c = read_configuration_file(args.file);
  if (c.arity() != 2) throw InputError("soj needs a classical (arity 2) configuration");
  bool refined = !check_coherent(c).is_coherent;
  if (refined) c = wl(c);
  auto s = classify_classical(c);
  if (!s.uniprimitive)
    throw InputError("soj needs a uniprimitive configuration (primitive: " +
                     std::string(s.primitive ? "yes" : "no") + ", trivial clique: " +
                     (s.trivial_clique ? "yes" : "no") + ")");
  FirstChooser chooser;
  SoJOutcome out = split_or_johnson(c, std::min(args.alpha, 0.999), chooser);
  std::string why;
  bool ok = out.verify(std::min(args.alpha, 0.999), &why);
  json j;
  j["refined_input"] = refined;
  j["outcome"] = out.variant == SoJOutcome::Variant::Johnson ? "johnson" : "partition";
  j["verified"] = ok;
  j["domain"] = out.partition.domain;
  json cells = json::array();
  for (const auto& per_color : out.partition.cells) cells.push_back(cells_json(per_color));
  j["cells"] = cells;
  j["largest_part"] = out.partition.largest_part();
  if (out.johnson) {
    j["gamma0"] = out.gamma0;
    j["johnson"] = {{"m", out.johnson->m}, {"s", out.johnson->s},
                    {"iota", cells_json(out.johnson->iota)}};
  }
  j["stabilized"] = out.trail.stabilized;
  j["choice_sizes"] = out.trail.choice_sizes;
  j["index_cost"] = big(out.trail.index_cost);
  j["ledger"] = out.trail.ledger;
  emit(g, j, [&] {
    std::cout << (out.johnson ? "Johnson" : "partition") << " outcome, verified "
              << (ok ? "yes" : "no") << "\n";
    if (out.johnson)
      std::cout << "  J(" << out.johnson->m << "," << out.johnson->s << ") on "
                << out.gamma0.size() << " points\n";
    std::cout << "  largest part " << out.partition.largest_part() << " of "
              << out.partition.domain.size() << "\n";
    std::cout << "  stabilized " << out.trail.stabilized.size() << " point(s), index cost "
              << out.trail.index_cost << "\n";
    for (const auto& line : out.trail.ledger) std::cout << "  ledger: " << line << "\n";
  });
  if (!ok) throw InternalError("Split-or-Johnson outcome failed verification: " + why);
  return 0;
}

// ---- refine -----------------------------------------------------------

struct RefineArgs {
  bool f1 = false, f2 = false, wl = false;
  std::string in, out;
};

int cmd_refine(const Globals& g, const RefineArgs& args) {
  Configuration c;
  if (args.f1) {
    c = f1_refine(read_structure_file(args.in));
  } else {
    c = read_configuration_file(args.in);
  }
  if (args.f2) c = f2_config(c);
  int rounds = 0;
  if (args.wl) {
    auto r = wl_rounds(c);
    c = r.config;
    rounds = r.rounds;
  }
  std::ofstream out(args.out);
  if (!out) throw InputError("cannot write " + args.out);
  write_configuration(out, c);
  json j;
  j["gamma"] = c.gamma_size();
  j["arity"] = c.arity();
  j["classes"] = c.num_colors();
  j["is_configuration"] = is_configuration(c);
  if (args.wl) j["rounds"] = rounds;
  emit(g, j, [&] {
    std::cout << c.num_colors() << " classes on " << c.gamma_size() << "^" << c.arity()
              << " tuples; configuration " << (is_configuration(c) ? "yes" : "no") << "\n";
  });
  return 0;
}

// ---- selftest ---------------------------------------------------------

int cmd_selftest(const Globals& g, const std::vector<int>& which) {
  std::ostringstream sink;
  auto results = acceptance::run(which, g.json ? static_cast<std::ostream&>(sink) : std::cout);
  bool all = true;
  json arr = json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                   {"seconds", r.seconds}, {"budget_seconds", r.budget_seconds},
                   {"detail", r.detail}});
  }
  if (g.json) std::cout << json{{"criteria", arr}, {"pass", all}}.dump(2) << "\n";
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"giso: string and graph isomorphism toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_flag("--oracle", g.oracle, "cross-check against a brute-force oracle");
  app.add_flag("--trace", g.trace, "record branch decisions of the driver");

  IsoGraphArgs ig;
  auto* c_ig = app.add_subcommand("iso-graph", "graph isomorphism from two edge-list files");
  c_ig->add_option("a", ig.a, "first graph")->required()->check(CLI::ExistingFile);
  c_ig->add_option("b", ig.b, "second graph")->required()->check(CLI::ExistingFile);
  c_ig->add_option("--max-degree", ig.max_degree,
                   "use the bounded-degree pipeline for connected graphs of this degree");

  IsoStringArgs is;
  auto* c_is = app.add_subcommand("iso-string", "Iso_G(x, y) for a generated group G");
  c_is->add_option("--group", is.group, "generator file")->required()->check(CLI::ExistingFile);
  c_is->add_option("--x", is.x, "string file")->required()->check(CLI::ExistingFile);
  c_is->add_option("--y", is.y, "string file")->required()->check(CLI::ExistingFile);

  WlArgs wa;
  auto* c_wl = app.add_subcommand("wl", "k-ary Weisfeiler-Leman refinement of a graph");
  c_wl->add_option("--k", wa.k, "arity (2..4)");
  c_wl->add_option("graph", wa.graph, "edge-list file")->required()->check(CLI::ExistingFile);
  c_wl->add_flag("--report", wa.report, "class counts per round and coherence details");

  GroupArgs ga;
  auto* c_gr = app.add_subcommand("group", "order, membership, orbits or blocks");
  c_gr->add_option("op", ga.op, "order | member | orbits | blocks")
      ->required()
      ->check(CLI::IsMember({"order", "member", "orbits", "blocks"}));
  c_gr->add_option("file", ga.file, "generator file")->required()->check(CLI::ExistingFile);
  c_gr->add_option("--perm", ga.perm, "permutation for 'member', cycles or image list");

  SchemeArgs sa;
  auto* c_sc = app.add_subcommand("scheme", "classical coherent configurations");
  c_sc->require_subcommand(1);
  auto* c_cl = c_sc->add_subcommand("classify", "homogeneity, primitivity, color graphs");
  c_cl->add_option("file", sa.file, "configuration file")->required()->check(CLI::ExistingFile);
  auto* c_jo = c_sc->add_subcommand("identify-johnson", "explicit Johnson scheme isomorphism");
  c_jo->add_option("file", sa.file, "configuration file")->required()->check(CLI::ExistingFile);
  c_jo->add_option("--m", sa.m, "claimed |Lambda| (0: unknown)");
  c_jo->add_option("--s", sa.s, "claimed subset size (0: unknown)");

  SojArgs so;
  auto* c_so = app.add_subcommand("soj", "Split-or-Johnson on a uniprimitive configuration");
  c_so->add_option("file", so.file, "configuration file")->required()->check(CLI::ExistingFile);
  c_so->add_option("--alpha", so.alpha, "part size bound (default 2/3)");

  RefineArgs ra;
  auto* c_re = app.add_subcommand("refine", "apply F1, F2 and WL to a structure file");
  c_re->add_flag("--f1", ra.f1, "input is a relational structure; apply F1");
  c_re->add_flag("--f2", ra.f2, "apply F2");
  c_re->add_flag("--wl", ra.wl, "refine to a coherent configuration");
  c_re->add_option("in", ra.in, "input file")->required()->check(CLI::ExistingFile);
  c_re->add_option("out", ra.out, "output configuration file")->required();

  std::vector<int> which;
  auto* c_st = app.add_subcommand("selftest", "run the acceptance criteria");
  c_st->add_option("--criterion", which, "run only these criteria (1..10)")
      ->check(CLI::Range(1, 10));

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();
  c_cl->fallthrough();
  c_jo->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*c_ig) return cmd_iso_graph(g, ig);
    if (*c_is) return cmd_iso_string(g, is);
    if (*c_wl) return cmd_wl(g, wa);
    if (*c_gr) return cmd_group(g, ga);
    if (*c_cl) return cmd_scheme_classify(g, sa);
    if (*c_jo) return cmd_scheme_johnson(g, sa);
    if (*c_so) return cmd_soj(g, so);
    if (*c_re) return cmd_refine(g, ra);
    if (*c_st) return cmd_selftest(g, which);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 2;
  } catch (const OracleMismatch& e) {
    std::cerr << "oracle: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
