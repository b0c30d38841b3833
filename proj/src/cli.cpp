#include "pcpnet/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcpnet/aggregation.hpp"
#include "pcpnet/errors.hpp"
#include "pcpnet/generator.hpp"
#include "pcpnet/model.hpp"
#include "pcpnet/optimization.hpp"
#include "pcpnet/oracle.hpp"
#include "pcpnet/text_format.hpp"
#include "pcpnet/tree_dominance.hpp"

namespace pcpnet {

namespace {

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    buf << f.rdbuf();
  }
  return buf.str();
}

void write_output(const std::string& path, std::ostream& out,
                  const std::string& text) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
}

std::string fmt_prob(double p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", p);
  return buf;
}

std::string kind_name(NetKind k) {
  switch (k) {
    case NetKind::det: return "cpnet";
    case NetKind::pcp: return "pcpnet";
    case NetKind::incomplete: return "cpnet incomplete";
  }
  return {};
}

struct DominanceArgs {
  std::string file;
  std::string from, to;
  std::string method;  // empty = pick per net kind
  int threads = 1;
  bool json = false;
};

struct OptimalArgs {
  std::string file;
  std::string outcome;
  bool json = false;
};

int run_validate(const std::string& file, std::istream& in, std::ostream& out) {
  const ParsedModel m = parse_net(read_input(file, in));
  const Structure& s = m.structure();
  int rules = s.slot_count();
  std::string extra;
  if (m.kind() == NetKind::incomplete) {
    const int absent = m.incomplete().absent_count();
    rules -= absent;
    extra = ", " + std::to_string(absent) + " absent";
  }
  out << "ok: " << kind_name(m.kind()) << ", " << s.var_count()
      << (s.var_count() == 1 ? " variable, " : " variables, ") << rules
      << (rules == 1 ? " rule" : " rules") << extra << ", "
      << (s.is_forest() ? "forest" : "acyclic") << '\n';
  return 0;
}

int run_dominance(const DominanceArgs& a, std::istream& in, std::ostream& out) {
  const ParsedModel m = parse_net(read_input(a.file, in));
  const Structure& s = m.structure();
  const Outcome o = parse_outcome(a.from, s);
  const Outcome o2 = parse_outcome(a.to, s);

  std::string method = a.method;
  if (method.empty()) {
    if (!s.is_forest())
      method = "oracle";
    else if (m.kind() == NetKind::pcp)
      method = "fpt";
    else if (m.kind() == NetKind::det)
      method = "linear";
    else
      method = "completion";
  }

  bool numeric = false;
  double prob = 0.0;
  bool holds = false;
  if (method == "fpt") {
    if (m.kind() != NetKind::pcp)
      throw SemanticError("method 'fpt' applies to pcpnet inputs");
    prob = dominance_prob_fpt(m.pcp(), o, o2);
    numeric = true;
  } else if (method == "linear") {
    if (m.kind() != NetKind::det)
      throw SemanticError("method 'linear' applies to cpnet inputs");
    holds = det_dominance(m.det(), o, o2);
  } else if (method == "completion") {
    if (m.kind() != NetKind::incomplete)
      throw SemanticError("method 'completion' applies to incomplete cpnet inputs");
    holds = completion_dominance_exists(m.incomplete(), o, o2);
  } else if (method == "oracle") {
    switch (m.kind()) {
      case NetKind::pcp:
        prob = dominance_prob_oracle(m.pcp(), o, o2, a.threads);
        numeric = true;
        break;
      case NetKind::det:
        holds = entails_oracle(m.det(), o, o2);
        break;
      case NetKind::incomplete:
        for (const CPNet& c : enumerate_completions(m.incomplete()))
          if (entails_oracle(c, o, o2)) {
            holds = true;
            break;
          }
        break;
    }
  } else {
    throw SemanticError("unknown method '" + method + "'");
  }

  if (a.json) {
    nlohmann::json j{{"query", "dominance"},
                     {"method", method},
                     {"slots", s.slot_count()}};
    if (numeric)
      j["result"] = prob;
    else
      j["result"] = holds;
    out << j.dump() << '\n';
  } else if (numeric) {
    out << fmt_prob(prob) << '\n';
  } else {
    out << (holds ? "true" : "false") << '\n';
  }
  return 0;
}

int run_optimal(const OptimalArgs& a, std::istream& in, std::ostream& out) {
  const ParsedModel m = parse_net(read_input(a.file, in));
  const Structure& s = m.structure();
  if (m.kind() == NetKind::incomplete)
    throw SemanticError("optimal queries need a complete net (cpnet or pcpnet)");

  nlohmann::json j{{"query", "optimal"}, {"slots", s.slot_count()}};
  if (m.kind() == NetKind::det) {
    const Outcome best = det_optimal(m.det());
    j["method"] = "sweep";
    if (a.outcome.empty()) {
      j["result"] = format_outcome(best, s);
      if (!a.json) out << format_outcome(best, s) << '\n';
    } else {
      const bool is_best = parse_outcome(a.outcome, s) == best;
      j["result"] = is_best;
      if (!a.json) out << (is_best ? "true" : "false") << '\n';
    }
  } else if (a.outcome.empty()) {
    const MapResult r = map_optimal(m.pcp());
    j["method"] = "map";
    j["result"] = format_outcome(r.outcome, s);
    j["probability"] = r.probability;
    if (!a.json)
      out << format_outcome(r.outcome, s) << ' ' << fmt_prob(r.probability)
          << '\n';
  } else {
    const double p = optimal_prob(m.pcp(), parse_outcome(a.outcome, s));
    j["method"] = "product";
    j["result"] = p;
    if (!a.json) out << fmt_prob(p) << '\n';
  }
  if (a.json) out << j.dump() << '\n';
  return 0;
}

int run_aggregate(const std::vector<std::string>& files,
                  const std::string& out_path, std::istream& in,
                  std::ostream& out) {
  std::vector<CPNet> nets;
  nets.reserve(files.size());
  for (const std::string& f : files) {
    ParsedModel m = parse_net(read_input(f, in));
    if (m.kind() != NetKind::det)
      throw SemanticError("aggregation expects cpnet inputs: '" + f +
                          "' is not one");
    nets.push_back(m.det());
  }
  const Aggregate a = aggregate(nets);
  write_output(out_path, out, serialize(a.net));
  return 0;
}

PCPNet probabilistic_view(ParsedModel&& m) {
  switch (m.kind()) {
    case NetKind::pcp: return std::move(m.pcp());
    case NetKind::det: return degenerate_pcpnet(m.det());
    case NetKind::incomplete: break;
  }
  throw SemanticError("this query needs a pcpnet or cpnet");
}

int run_condorcet(const std::string& file, const std::string& outcome,
                  bool all, std::istream& in, std::ostream& out) {
  const PCPNet pn = probabilistic_view(parse_net(read_input(file, in)));
  const Structure& s = pn.structure();
  if (!outcome.empty()) {
    out << (is_condorcet(pn, parse_outcome(outcome, s)) ? "true" : "false")
        << '\n';
  } else if (all) {
    for (const Outcome& o : all_condorcet(pn)) out << format_outcome(o, s) << '\n';
  } else {
    const auto found = find_condorcet(pn);
    out << (found ? format_outcome(*found, s) : std::string("none")) << '\n';
  }
  return 0;
}

int run_sample(const std::string& file, std::uint64_t seed, int count,
               std::istream& in, std::ostream& out) {
  const ParsedModel m = parse_net(read_input(file, in));
  if (m.kind() != NetKind::pcp)
    throw SemanticError("sampling needs a pcpnet input");
  SplitMix64 rng(seed);
  for (int i = 0; i < count; ++i) {
    if (i) out << '\n';
    out << serialize(sample_net(m.pcp(), rng));
  }
  return 0;
}

int run_gen(int vars, const std::string& shape, const std::string& kind,
            std::uint64_t seed, std::ostream& out) {
  GenShape sh = GenShape::chain;
  if (shape == "star")
    sh = GenShape::star;
  else if (shape == "balanced")
    sh = GenShape::balanced;
  else if (shape != "chain")
    throw SemanticError("unknown shape '" + shape + "'");
  StructurePtr s = make_shape_structure(vars, sh);
  SplitMix64 rng(seed);
  if (kind == "det")
    out << serialize(random_cpnet(std::move(s), rng));
  else if (kind == "pcp")
    out << serialize(random_pcpnet(std::move(s), rng));
  else
    throw SemanticError("unknown kind '" + kind + "'");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in,
            std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional preference nets over binary variables"};
  app.require_subcommand(1);

  std::string validate_file;
  CLI::App* validate = app.add_subcommand("validate", "Parse and check a net file");
  validate->add_option("file", validate_file, "net file, - for stdin")->required();

  DominanceArgs dom;
  CLI::App* dominance =
      app.add_subcommand("dominance", "Probability or truth of one outcome dominating another");
  dominance->add_option("file", dom.file, "net file, - for stdin")->required();
  dominance->add_option("--from", dom.from, "dominating outcome, NAME=0|1 list")->required();
  dominance->add_option("--to", dom.to, "dominated outcome")->required();
  dominance->add_option("--method", dom.method, "fpt|linear|completion|oracle");
  dominance->add_option("--threads", dom.threads, "worker threads for the oracle")
      ->check(CLI::Range(1, 256));
  dominance->add_flag("--json", dom.json, "machine-readable output");

  OptimalArgs opt;
  CLI::App* optimal = app.add_subcommand("optimal", "Most probable optimum, or a given outcome's optimality");
  optimal->add_option("file", opt.file, "net file, - for stdin")->required();
  optimal->add_option("--outcome", opt.outcome, "outcome to score");
  optimal->add_flag("--json", opt.json, "machine-readable output");

  std::vector<std::string> agg_files;
  std::string agg_out;
  CLI::App* agg = app.add_subcommand("aggregate", "Combine cpnet files into one pcpnet by rule frequency");
  agg->add_option("files", agg_files, "cpnet files")->required();
  agg->add_option("-o,--output", agg_out, "output file, - for stdout")->required();

  std::string cond_file, cond_outcome;
  bool cond_all = false;
  CLI::App* cond = app.add_subcommand("condorcet", "Outcomes that beat every single-variable flip by majority");
  cond->add_option("file", cond_file, "net file, - for stdin")->required();
  CLI::Option* cond_out_opt = cond->add_option("--outcome", cond_outcome, "outcome to test");
  cond->add_flag("--all", cond_all, "list every such outcome")->excludes(cond_out_opt);

  std::string sample_file;
  std::uint64_t sample_seed = 0;
  int sample_count = 1;
  CLI::App* sample = app.add_subcommand("sample", "Draw deterministic nets from a pcpnet");
  sample->add_option("file", sample_file, "pcpnet file, - for stdin")->required();
  sample->add_option("--seed", sample_seed, "RNG seed")->required();
  sample->add_option("--count", sample_count, "number of samples")
      ->check(CLI::PositiveNumber);

  int gen_vars = 4;
  std::string gen_shape = "chain", gen_kind = "pcp";
  std::uint64_t gen_seed = 0;
  CLI::App* gen = app.add_subcommand("gen", "Generate a random net");
  gen->add_option("--vars", gen_vars, "variable count")->check(CLI::PositiveNumber);
  gen->add_option("--shape", gen_shape, "chain|star|balanced");
  gen->add_option("--kind", gen_kind, "det|pcp");
  gen->add_option("--seed", gen_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(validate)) return run_validate(validate_file, in, out);
    if (app.got_subcommand(dominance)) return run_dominance(dom, in, out);
    if (app.got_subcommand(optimal)) return run_optimal(opt, in, out);
    if (app.got_subcommand(agg)) return run_aggregate(agg_files, agg_out, in, out);
    if (app.got_subcommand(cond))
      return run_condorcet(cond_file, cond_outcome, cond_all, in, out);
    if (app.got_subcommand(sample))
      return run_sample(sample_file, sample_seed, sample_count, in, out);
    if (app.got_subcommand(gen))
      return run_gen(gen_vars, gen_shape, gen_kind, gen_seed, out);
    err << "error: no command\n";
    return 1;
  } catch (const TooLargeForOracle& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const TooLarge& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace pcpnet
