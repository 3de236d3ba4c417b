#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "certlab/certificate.hpp"
#include "certlab/ef_game.hpp"
#include "certlab/errors.hpp"
#include "certlab/formula.hpp"
#include "certlab/fuzzer.hpp"
#include "certlab/graph.hpp"
#include "certlab/kernel.hpp"
#include "certlab/model.hpp"
#include "certlab/schemes.hpp"

namespace {

using namespace certlab;

// 0 success/accept/true, 1 reject/false/different, 2 usage or bad input,
// 3 cannot-certify/undecided.
constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;
constexpr int kCannot = 3;

struct SchemeFlags {
  std::string scheme;
  int t = -1;
  int k = -1;
  std::string formula;
  std::string model_path;
};

void add_scheme_flags(CLI::App* cmd, SchemeFlags& f, bool with_model = true) {
  cmd->add_option("--scheme", f.scheme, "one of st, count, efo, fo2, td, kernel, fo-td")
      ->required();
  cmd->add_option("--t", f.t, "height bound for td, kernel, fo-td");
  cmd->add_option("--k", f.k, "pruning parameter for kernel");
  cmd->add_option("--formula", f.formula, "sentence for efo, fo2, fo-td");
  if (with_model) cmd->add_option("--model", f.model_path, "model file for td/kernel/fo-td provers");
}

std::unique_ptr<Scheme> make_scheme(const SchemeFlags& f) {
  std::optional<Model> model;
  if (!f.model_path.empty()) model = load_model_file(f.model_path);
  auto need_t = [&] {
    if (f.t < 0) throw ValidationError("scheme '" + f.scheme + "' needs --t");
  };
  auto need_formula = [&] {
    if (f.formula.empty()) throw ValidationError("scheme '" + f.scheme + "' needs --formula");
  };
  if (f.scheme == "st") return spanning_tree_scheme();
  if (f.scheme == "count") return count_scheme();
  if (f.scheme == "efo") {
    need_formula();
    return existential_fo_scheme(parse_sentence(f.formula));
  }
  if (f.scheme == "fo2") {
    need_formula();
    return depth2_fo_scheme(parse_sentence(f.formula));
  }
  if (f.scheme == "td") {
    need_t();
    return treedepth_scheme(f.t, model);
  }
  if (f.scheme == "kernel") {
    need_t();
    if (f.k < 1) throw ValidationError("scheme 'kernel' needs --k >= 1");
    return kernel_scheme(f.k, f.t, model);
  }
  if (f.scheme == "fo-td") {
    need_t();
    need_formula();
    return fo_treedepth_scheme(parse_sentence(f.formula), f.t, model);
  }
  throw ValidationError("unknown scheme: " + f.scheme);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << text;
}

int run_gen(const std::string& kind, int n, int t, std::uint64_t seed, const std::string& out,
            const std::string& model_out) {
  Graph g;
  std::optional<Model> model;
  if (kind == "path") {
    g = path_graph(n);
  } else if (kind == "cycle") {
    g = cycle_graph(n);
  } else if (kind == "complete") {
    g = complete_graph(n);
  } else if (kind == "star") {
    g = star_graph(n - 1);
  } else if (kind == "random") {
    g = random_connected_graph(n, seed);
  } else if (kind == "bounded-td") {
    if (t < 0) throw ValidationError("kind 'bounded-td' needs --t");
    BoundedTreedepthInstance inst = random_bounded_treedepth_graph(t, n, seed);
    g = inst.graph;
    model = inst.model;
  } else {
    throw ValidationError("unknown kind: " + kind);
  }
  if (out.empty())
    std::cout << save_graph(g);
  else
    save_graph_file(g, out);
  if (!model_out.empty()) {
    if (!model) throw ValidationError("--model-out only applies to kind 'bounded-td'");
    save_model_file(*model, model_out);
  }
  std::cerr << "n=" << g.node_count() << " m=" << g.edge_count() << "\n";
  return kOk;
}

int run_td(const std::string& graph_path, const std::string& model_path, int t,
           const std::string& model_out) {
  Graph g = load_graph_file(graph_path);
  if (!model_path.empty()) {
    Model m = load_model_file(model_path);
    bool valid = is_valid_model(g, m, t >= 0 ? t : m.height());
    std::cout << (valid ? "valid" : "invalid") << " height=" << m.height()
              << " coherent=" << (valid && is_coherent(g, m) ? "yes" : "no") << "\n";
    return valid ? kOk : kNo;
  }
  TreedepthResult res = compute_treedepth_exact(g);
  std::cout << "treedepth " << res.treedepth << "\n";
  if (!model_out.empty()) save_model_file(res.model, model_out);
  if (t >= 0) return res.treedepth <= t ? kOk : kNo;
  return kOk;
}

int run_eval(const std::string& graph_path, const std::string& formula) {
  Graph g = load_graph_file(graph_path);
  Formula f = parse_sentence(formula);
  bool value = evaluate(g, f);
  std::cout << (value ? "true" : "false") << "\n";
  return value ? kOk : kNo;
}

int run_equiv(const std::string& g_path, const std::string& h_path, int rounds,
              long long budget, int samples, std::uint64_t seed) {
  Graph g = load_graph_file(g_path);
  Graph h = load_graph_file(h_path);
  EfOptions opts;
  if (budget > 0) opts.position_budget = budget;
  try {
    bool eq = ef_equivalent(g, h, rounds, opts);
    std::cout << (eq ? "equivalent" : "different") << "\n";
    if (samples > 0) {
      SampleReport report = sample_sentence_check(g, h, rounds, samples, seed);
      std::cout << "sampled " << report.trials << " sentences, "
                << report.mismatches.size() << " mismatches\n";
      for (const auto& mm : report.mismatches)
        std::cout << "  " << mm.sentence << "  g=" << (mm.value_g ? "true" : "false")
                  << " h=" << (mm.value_h ? "true" : "false") << "\n";
    }
    return eq ? kOk : kNo;
  } catch (const BudgetExceededError&) {
    std::cout << "undecided\n";
    return kCannot;
  }
}

int run_kernelize(const std::string& graph_path, const std::string& model_path, int k,
                  const std::string& out, const std::string& kernel_out) {
  Graph g = load_graph_file(graph_path);
  Model m;
  if (!model_path.empty()) {
    m = load_model_file(model_path);
    if (!is_valid_model(g, m, m.height())) throw ValidationError("model does not fit the graph");
  } else {
    m = compute_treedepth_exact(g).model;
  }
  m = make_coherent(g, m);
  Reduction r = k_reduce(g, m, k);
  std::cout << "kernel " << r.kernel.node_count() << "/" << g.node_count() << " nodes, "
            << r.type_table.size() << " end types, " << r.prune_log.size() << " prunings\n";
  if (!out.empty())
    write_file(out, save_reduction(r));
  else
    std::cout << save_reduction(r);
  if (!kernel_out.empty()) save_graph_file(r.kernel, kernel_out);
  return kOk;
}

int run_certify(const SchemeFlags& flags, const std::string& graph_path, const std::string& out,
                bool quiet) {
  Graph g = load_graph_file(graph_path);
  std::unique_ptr<Scheme> scheme = make_scheme(flags);
  CertMap certs = scheme->prove(g);
  SizeStats stats = cert_size_bits(certs);
  if (!out.empty())
    write_file(out, save_cert_map(certs, scheme->name()));
  else if (!quiet)
    std::cout << dump_cert_map(certs);
  std::cout << "scheme=" << scheme->name() << " nodes=" << g.node_count()
            << " maxBits=" << stats.max_bits << " totalBits=" << stats.total_bits << "\n";
  return kOk;
}

int run_verify(const SchemeFlags& flags, const std::string& graph_path,
               const std::string& certs_path) {
  Graph g = load_graph_file(graph_path);
  std::unique_ptr<Scheme> scheme = make_scheme(flags);
  LoadedCerts loaded = load_cert_map(read_file(certs_path));
  if (loaded.scheme != scheme->name())
    throw ValidationError("certificate file was produced by scheme '" + loaded.scheme + "'");
  // a node the file says nothing about holds an empty certificate: the
  // verifier there decides, it is not a usage error
  for (NodeId v : g.nodes())
    if (!loaded.certs.count(v)) loaded.certs[v] = Certificate{};
  Verdict v = run_verification(g, loaded.certs, *scheme);
  if (v.accepted) {
    std::cout << "accepted\n";
    return kOk;
  }
  std::cout << "rejected at";
  for (NodeId u : v.rejecting) std::cout << ' ' << u;
  std::cout << "\n";
  return kNo;
}

int run_fuzz(const SchemeFlags& flags, const std::string& graph_path, long long budget,
             std::uint64_t seed) {
  Graph g = load_graph_file(graph_path);
  std::unique_ptr<Scheme> scheme = make_scheme(flags);
  FuzzReport report = fuzz_soundness(g, *scheme, budget, seed);
  std::cout << "attempts=" << report.attempts << " escapes=" << report.escapes << "\n";
  for (const auto& n : report.notes) std::cout << "  " << n << "\n";
  return report.clean() ? kOk : kNo;
}

int run_stats(SchemeFlags flags, const std::string& family, const std::string& n_list,
              std::uint64_t seed) {
  std::vector<int> ns;
  std::stringstream ss(n_list);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) ns.push_back(std::stoi(item));
  if (ns.empty()) throw ValidationError("empty --n-list");
  std::cout << "scheme,n,t,k,maxBits,totalBits,verdict,seed\n";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    int n = ns[i];
    std::uint64_t s = seed + i;
    Graph g;
    SchemeFlags local = flags;
    std::optional<Model> model;
    if (family == "path") {
      g = path_graph(n);
    } else if (family == "cycle") {
      g = cycle_graph(n);
    } else if (family == "star") {
      g = star_graph(n - 1);
    } else if (family == "random") {
      g = random_connected_graph(n, s);
    } else if (family == "bounded-td") {
      if (local.t < 0) throw ValidationError("family 'bounded-td' needs --t");
      BoundedTreedepthInstance inst = random_bounded_treedepth_graph(local.t, n, s);
      g = inst.graph;
      model = inst.model;
    } else {
      throw ValidationError("unknown family: " + family);
    }
    std::string verdict = "accept";
    long long max_bits = 0;
    long long total_bits = 0;
    try {
      std::unique_ptr<Scheme> scheme;
      if (model && (local.scheme == "td" || local.scheme == "kernel" || local.scheme == "fo-td")) {
        if (local.scheme == "td") scheme = treedepth_scheme(local.t, model);
        if (local.scheme == "kernel") scheme = kernel_scheme(local.k, local.t, model);
        if (local.scheme == "fo-td")
          scheme = fo_treedepth_scheme(parse_sentence(local.formula), local.t, model);
      } else {
        scheme = make_scheme(local);
      }
      CertMap certs = scheme->prove(g);
      SizeStats st = cert_size_bits(certs);
      max_bits = st.max_bits;
      total_bits = st.total_bits;
      if (!run_verification(g, certs, *scheme).accepted) verdict = "reject";
    } catch (const CannotCertifyError&) {
      verdict = "cannot";
    }
    std::cout << flags.scheme << ',' << n << ',' << flags.t << ',' << flags.k << ','
              << max_bits << ',' << total_bits << ',' << verdict << ',' << s << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prover/verifier laboratory for local graph certification"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a graph");
  std::string gen_kind = "random";
  int gen_n = 8;
  int gen_t = -1;
  std::uint64_t gen_seed = 1;
  std::string gen_out, gen_model_out;
  gen->add_option("--kind", gen_kind, "path|cycle|complete|star|random|bounded-td");
  gen->add_option("--n", gen_n, "node count")->required();
  gen->add_option("--t", gen_t, "height bound for bounded-td");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output graph file (default stdout)");
  gen->add_option("--model-out", gen_model_out, "save the planted model");

  auto* td = app.add_subcommand("td", "exact treedepth, or validate a model");
  std::string td_graph, td_model, td_model_out;
  int td_t = -1;
  td->add_option("--graph", td_graph)->required();
  td->add_option("--model", td_model, "validate this model instead of solving");
  td->add_option("--t", td_t, "height bound to compare against");
  td->add_option("--model-out", td_model_out, "save the computed model");

  auto* ev = app.add_subcommand("eval", "evaluate a sentence on a graph");
  std::string ev_graph, ev_formula;
  ev->add_option("--graph", ev_graph)->required();
  ev->add_option("--formula", ev_formula)->required();

  auto* eq = app.add_subcommand("equiv", "bounded-round equivalence of two graphs");
  std::string eq_g, eq_h;
  int eq_rounds = 2;
  long long eq_budget = 0;
  int eq_samples = 0;
  std::uint64_t eq_seed = 1;
  eq->add_option("--left", eq_g)->required();
  eq->add_option("--right", eq_h)->required();
  eq->add_option("--rounds", eq_rounds)->required();
  eq->add_option("--budget", eq_budget, "search position budget");
  eq->add_option("--samples", eq_samples, "also compare random sentences");
  eq->add_option("--seed", eq_seed);

  auto* ker = app.add_subcommand("kernelize", "prune a graph to its reduced kernel");
  std::string ker_graph, ker_model, ker_out, ker_kernel_out;
  int ker_k = 1;
  ker->add_option("--graph", ker_graph)->required();
  ker->add_option("--model", ker_model, "model file (default: exact solve)");
  ker->add_option("--k", ker_k)->required();
  ker->add_option("--out", ker_out, "write the reduction record here");
  ker->add_option("--kernel-out", ker_kernel_out, "write the kernel graph here");

  auto* cert = app.add_subcommand("certify", "run a scheme's prover");
  SchemeFlags cert_flags;
  std::string cert_graph, cert_out;
  bool cert_quiet = false;
  add_scheme_flags(cert, cert_flags);
  cert->add_option("--graph", cert_graph)->required();
  cert->add_option("--out", cert_out, "write certificates as JSON");
  cert->add_flag("--quiet", cert_quiet, "suppress the per-node dump");

  auto* ver = app.add_subcommand("verify", "run the distance-1 verifier at every node");
  SchemeFlags ver_flags;
  std::string ver_graph, ver_certs;
  add_scheme_flags(ver, ver_flags);
  ver->add_option("--graph", ver_graph)->required();
  ver->add_option("--certs", ver_certs, "certificate JSON file")->required();

  auto* fz = app.add_subcommand("fuzz", "attack a scheme on a violating graph");
  SchemeFlags fz_flags;
  std::string fz_graph;
  long long fz_budget = 1000;
  std::uint64_t fz_seed = 1;
  add_scheme_flags(fz, fz_flags);
  fz->add_option("--graph", fz_graph)->required();
  fz->add_option("--budget", fz_budget, "number of assignments to try");
  fz->add_option("--seed", fz_seed);

  auto* st = app.add_subcommand("stats", "certificate size sweep as CSV");
  SchemeFlags st_flags;
  std::string st_family = "bounded-td";
  std::string st_ns = "7,15,31";
  std::uint64_t st_seed = 1;
  add_scheme_flags(st, st_flags, /*with_model=*/false);
  st->add_option("--family", st_family, "path|cycle|star|random|bounded-td");
  st->add_option("--n-list", st_ns, "comma separated node counts");
  st->add_option("--seed", st_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return run_gen(gen_kind, gen_n, gen_t, gen_seed, gen_out, gen_model_out);
    if (td->parsed()) return run_td(td_graph, td_model, td_t, td_model_out);
    if (ev->parsed()) return run_eval(ev_graph, ev_formula);
    if (eq->parsed()) return run_equiv(eq_g, eq_h, eq_rounds, eq_budget, eq_samples, eq_seed);
    if (ker->parsed()) return run_kernelize(ker_graph, ker_model, ker_k, ker_out, ker_kernel_out);
    if (cert->parsed()) return run_certify(cert_flags, cert_graph, cert_out, cert_quiet);
    if (ver->parsed()) return run_verify(ver_flags, ver_graph, ver_certs);
    if (fz->parsed()) return run_fuzz(fz_flags, fz_graph, fz_budget, fz_seed);
    if (st->parsed()) return run_stats(st_flags, st_family, st_ns, st_seed);
  } catch (const CannotCertifyError& e) {
    std::cerr << "cannot certify: " << e.what() << "\n";
    return kCannot;
  } catch (const BudgetExceededError& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return kCannot;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
