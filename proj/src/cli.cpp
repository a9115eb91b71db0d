#include "cospec/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cospec/census.hpp"
#include "cospec/exact.hpp"
#include "cospec/gm.hpp"
#include "cospec/graph.hpp"
#include "cospec/ortho.hpp"
#include "cospec/problab.hpp"

namespace cospec::cli {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// --jobs default: COSPECTRAL_CENSUS_JOBS if set and sane, else the hardware
// thread count. An explicit --jobs always wins.
int default_jobs() {
  if (const char* env = std::getenv("COSPECTRAL_CENSUS_JOBS")) {
    char* end = nullptr;
    const long j = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && j >= 1 && j <= 1024)
      return static_cast<int>(j);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<Graph> read_graph6_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open --input file " + path);
  std::vector<Graph> graphs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    graphs.push_back(parse_graph6(line));
  }
  if (graphs.empty()) throw DomainError("--input file " + path + " holds no graphs");
  return graphs;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open output file " + path);
  return out;
}

struct CensusArgs {
  int n = 0;
  std::string input;
  std::string output;
  std::string shard_out;
  std::vector<std::string> merge;
  int jobs = default_jobs();
};

int run_census_cmd(const CensusArgs& a, std::ostream& out) {
  if (!a.merge.empty()) {
    std::vector<CensusRecord> records;
    for (const std::string& path : a.merge) {
      std::ifstream in(path);
      if (!in) throw DomainError("cannot open shard " + path);
      std::vector<CensusRecord> part = read_shard(a.n, in);
      records.insert(records.end(), part.begin(), part.end());
    }
    const CensusReport report = census_from_records(a.n, std::move(records));
    if (a.output.empty()) {
      write_census_csv(report, out);
    } else {
      auto csv = open_output(a.output + ".csv");
      write_census_csv(report, csv);
      auto json = open_output(a.output + ".pairs.json");
      write_pairs_json(report, json);
    }
    return 0;
  }

  std::vector<Graph> graphs;
  const bool from_file = !a.input.empty();
  if (from_file) graphs = read_graph6_file(a.input);

  if (!a.shard_out.empty()) {
    // Map-only mode: emit records for later merging, no report.
    std::vector<CensusRecord> records =
        from_file ? census_map(a.n, graphs, a.jobs)
                  : census_map(a.n, enumerate_graphs(a.n), a.jobs);
    auto shard = open_output(a.shard_out);
    write_shard(a.n, records, shard);
    return 0;
  }

  const CensusReport report = from_file ? run_census(a.n, graphs, a.jobs)
                                        : run_census(a.n, a.jobs);
  if (a.output.empty()) {
    write_census_csv(report, out);
  } else {
    auto csv = open_output(a.output + ".csv");
    write_census_csv(report, csv);
    auto json = open_output(a.output + ".pairs.json");
    write_pairs_json(report, json);
  }
  return 0;
}

Graph single_input_graph(const std::string& graph6, const std::string& input) {
  if (!graph6.empty()) return parse_graph6(graph6);
  const std::vector<Graph> graphs = read_graph6_file(input);
  if (graphs.size() != 1)
    throw DomainError("this subcommand expects exactly one graph in --input");
  return graphs.front();
}

int run_switch_cmd(const std::string& graph6, const std::string& input,
                   int max_block, bool prime_blocks, std::ostream& out) {
  if (prime_blocks) {
    // Analytics: one block of size 2p per prime p in {2, 3, 5, 7}.
    GMPartition part;
    int v = 0;
    for (int p : {2, 3, 5, 7}) {
      std::vector<int> block;
      for (int k = 0; k < 2 * p; ++k) block.push_back(v++);
      part.blocks.push_back(std::move(block));
    }
    const RatMatrix q = gm_matrix(part, v);
    const auto [level, height] = level_and_height(q);
    out << level.get_str() << ',' << height.get_str() << '\n';
    return 0;
  }
  const Graph g = single_input_graph(graph6, input);
  const int cap = max_block == 0 ? g.n() : max_block;
  out << "partition,switched,isomorphic\n";
  for (const GMPartition& part : find_gm_partitions(g, cap)) {
    const Graph h = gm_switch(g, part);
    std::string blocks;
    for (size_t b = 0; b < part.blocks.size(); ++b) {
      if (b > 0) blocks += ';';
      for (size_t k = 0; k < part.blocks[b].size(); ++k) {
        if (k > 0) blocks += '-';
        blocks += std::to_string(part.blocks[b][k]);
      }
    }
    const bool iso = certificate(g) == certificate(h);
    out << blocks << ',' << to_graph6(h) << ',' << (iso ? 1 : 0) << '\n';
  }
  return 0;
}

int run_canon_cmd(const std::string& graph6, const std::string& input,
                  std::ostream& out) {
  std::vector<Graph> graphs;
  if (!graph6.empty())
    graphs.push_back(parse_graph6(graph6));
  else
    graphs = read_graph6_file(input);
  for (const Graph& g : graphs) out << to_graph6(canonical_form(g)) << '\n';
  return 0;
}

int run_enum_ortho_cmd(int s, int h, std::ostream& out) {
  const std::vector<RatMatrix> blocks = enumerate_canonical_blocks(s, h);
  for (const RatMatrix& q : blocks) {
    for (int i = 0; i < q.n; ++i) {
      for (int j = 0; j < q.n; ++j) {
        if (i + j > 0) out << ' ';
        out << rat_to_string(q.at(i, j));
      }
    }
    out << '\n';
  }
  out << "count=" << blocks.size() << " bound=" << counting_bound(s, h).get_str()
      << '\n';
  return 0;
}

RatMatrix mc_fixture(int gm, bool rot, int n) {
  if (gm > 0) {
    if (gm % 2 != 0 || gm < 2 || gm > n)
      throw DomainError("--gm needs an even block size between 2 and n");
    GMPartition part;
    part.blocks.emplace_back();
    for (int v = 0; v < gm; ++v) part.blocks.back().push_back(v);
    return gm_matrix(part, n);
  }
  if (!rot) throw DomainError("mc needs a fixture: --gm M or --rot");
  if (n < 2) throw DomainError("--rot needs n >= 2");
  RatMatrix q = RatMatrix::identity(n);
  q.at(0, 0) = Rat(3, 5);
  q.at(0, 1) = Rat(-4, 5);
  q.at(1, 0) = Rat(4, 5);
  q.at(1, 1) = Rat(3, 5);
  return q;
}

int run_mc_cmd(int gm, bool rot, int n, const std::string& p_text,
               uint64_t trials, uint64_t seed, int jobs, std::ostream& out,
               std::ostream& err) {
  Rat p;
  try {
    p = parse_rat(p_text);
  } catch (const DomainError& e) {
    err << "invalid --p value '" << p_text << "': " << e.what() << '\n';
    return 2;
  }
  const RatMatrix q = mc_fixture(gm, rot, n);
  const CanonicalForm cf = canonicalize(q);
  const IntegralityEstimate est =
      integrality_probability_mc(q, p, trials, seed, jobs);
  std::string exact_text;
  try {
    exact_text = Rat(integrality_probability_exact(q, p)).get_str();
  } catch (const DomainError&) {
    // enumeration guard exceeded: leave the exact column empty
  }
  out << n << ',' << cf.s << ',' << cf.h.get_str() << ',' << rat_to_string(p)
      << ',' << trials << ',' << fmt("%.9g", est.point_estimate) << ','
      << fmt("%.9g", est.wilson_lo) << ',' << fmt("%.9g", est.wilson_hi) << ','
      << fmt("%.9g", est.bound) << ',' << exact_text << '\n';
  return 0;
}

int run_tail_cmd(long long n, int h, const std::string& p_text,
                 std::ostream& out, std::ostream& err) {
  char* end = nullptr;
  const double p = std::strtod(p_text.c_str(), &end);
  if (end == p_text.c_str() || *end != '\0') {
    err << "invalid --p value '" << p_text << "': expected a real number\n";
    return 2;
  }
  const TailResult t = theorem_tail(n, h, p);
  out << n << ',' << h << ',' << fmt("%g", p) << ','
      << fmt("%.6f", t.log_tail) << '\n';
  return 0;
}

int run_codec_cmd(int enumerate_n, const std::string& input,
                  std::ostream& out) {
  if (enumerate_n > 0) {
    enumerate_graphs(enumerate_n,
                     [&](const Graph& g) { out << to_graph6(g) << '\n'; });
    return 0;
  }
  // Validation/normalization mode: parse and re-encode every line.
  for (const Graph& g : read_graph6_file(input)) out << to_graph6(g) << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"exact cospectral-mate census and rational-orthogonal toolbox"};
  app.require_subcommand(1);
  // --h is a real option below, so help must not claim the short -h form.
  app.set_help_flag("--help", "print this help message and exit");
  const auto add_sub = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print this help message and exit");
    return sub;
  };

  CensusArgs census_args;
  CLI::App* census = add_sub("census", "generalized-cospectral mate census over graph classes");
  census->add_option("--n", census_args.n, "graph order (1..10)")->required();
  census->add_option("--input", census_args.input,
                     "graph6 file instead of the built-in enumeration");
  census->add_option("--output", census_args.output,
                     "write BASE.csv and BASE.pairs.json instead of stdout");
  census->add_option("--shard-out", census_args.shard_out,
                     "map-only: write a mergeable record shard (JSON)");
  census->add_option("--merge", census_args.merge,
                     "reduce-only: merge record shards written by --shard-out");
  census->add_option("--jobs", census_args.jobs,
                     "worker threads (default: COSPECTRAL_CENSUS_JOBS or cores)");

  std::string sw_graph6, sw_input;
  int sw_max_block = 0;
  bool sw_primes = false;
  CLI::App* sw = add_sub("switch", "Godsil-McKay switching partitions of one graph");
  sw->add_option("--graph6", sw_graph6, "the graph, inline");
  sw->add_option("--input", sw_input, "file holding exactly one graph6 line");
  sw->add_option("--max-block", sw_max_block,
                 "largest switching block to try (default: n)");
  sw->add_flag("--prime-blocks", sw_primes,
               "print level,height of the blocks-2p switching matrix (p = 2,3,5,7)");

  std::string canon_graph6, canon_input;
  CLI::App* canon =
      add_sub("canon", "canonical graph6 form of each input graph");
  canon->add_option("--graph6", canon_graph6, "one graph, inline");
  canon->add_option("--input", canon_input, "graph6 file");

  int eo_s = 0, eo_h = 0;
  CLI::App* eo = add_sub("enum-ortho", "all canonical s x s orthogonal blocks of height <= h");
  eo->add_option("--s", eo_s, "block size (1..4)")->required();
  eo->add_option("--h", eo_h, "height cap (1..6)")->required();

  int mc_gm = 0, mc_n = 0, mc_jobs = 1;
  bool mc_rot = false;
  std::string mc_p = "1/2";
  uint64_t mc_trials = 0, mc_seed = 0;
  CLI::App* mc = add_sub("mc", "Monte-Carlo integrality probability for a fixture matrix");
  mc->add_option("--gm", mc_gm, "fixture: (2/M)J - I block of this size");
  mc->add_flag("--rot", mc_rot, "fixture: the 3-4-5 rotation block");
  mc->add_option("--n", mc_n, "ambient order (block padded with identity)")
      ->required();
  mc->add_option("--p", mc_p, "edge probability (rational or decimal)");
  mc->add_option("--trials", mc_trials, "number of trials")->required();
  mc->add_option("--seed", mc_seed, "base seed (required: runs are seeded)")
      ->required();
  mc->add_option("--jobs", mc_jobs, "worker threads (never changes results)");

  long long tail_n = 0;
  int tail_h = 0;
  std::string tail_p = "1/2";
  CLI::App* tail =
      add_sub("tail", "log of the theorem tail sum at (n, h, p)");
  tail->add_option("--n", tail_n, "order")->required();
  tail->add_option("--h", tail_h, "height cap")->required();
  tail->add_option("--p", tail_p, "edge probability")->required();

  int codec_enum = 0;
  std::string codec_input;
  CLI::App* codec = add_sub("codec", "graph6 utilities: enumerate classes or re-encode a file");
  codec->add_option("--enumerate", codec_enum,
                    "emit one graph6 line per isomorphism class of this order");
  codec->add_option("--input", codec_input, "parse and re-encode this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  try {
    if (*census) return run_census_cmd(census_args, out);
    if (*sw) {
      if (!sw_primes && sw_graph6.empty() && sw_input.empty())
        throw DomainError("switch needs --graph6, --input, or --prime-blocks");
      return run_switch_cmd(sw_graph6, sw_input, sw_max_block, sw_primes, out);
    }
    if (*canon) {
      if (canon_graph6.empty() && canon_input.empty())
        throw DomainError("canon needs --graph6 or --input");
      return run_canon_cmd(canon_graph6, canon_input, out);
    }
    if (*eo) return run_enum_ortho_cmd(eo_s, eo_h, out);
    if (*mc)
      return run_mc_cmd(mc_gm, mc_rot, mc_n, mc_p, mc_trials, mc_seed, mc_jobs,
                        out, err);
    if (*tail) return run_tail_cmd(tail_n, tail_h, tail_p, out, err);
    if (*codec) {
      if (codec_enum <= 0 && codec_input.empty())
        throw DomainError("codec needs --enumerate or --input");
      return run_codec_cmd(codec_enum, codec_input, out);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}

}  // namespace cospec::cli
