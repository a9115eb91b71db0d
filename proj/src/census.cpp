#include "cospec/census.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace cospec {

namespace {

constexpr int kMaxCensusOrder = 10;

void require_census_order(int n) {
  if (n < 1 || n > kMaxCensusOrder)
    throw DomainError("census supports orders 1 through 10");
}

bool key_less(const CensusRecord& a, const CensusRecord& b) {
  if (a.key != b.key) return a.key < b.key;
  return a.cert < b.cert;
}

void pack_coeffs(const std::vector<int64_t>& c, int32_t* out) {
  for (size_t k = 0; k < c.size(); ++k) {
    if (c[k] < INT32_MIN || c[k] > INT32_MAX)
      throw std::logic_error("census_record: charpoly coefficient left int32 range");
    out[k] = static_cast<int32_t>(c[k]);
  }
}

}  // namespace

GenSpectrumKey gen_spectrum_key(const Graph& g) {
  return {charpoly(adjacency_matrix(g)), charpoly(adjacency_matrix(g.complement()))};
}

CensusRecord census_record(const Graph& g) {
  require_census_order(g.n());
  CensusRecord r;
  pack_coeffs(charpoly_adjacency_i64(g), r.key.data());
  pack_coeffs(charpoly_adjacency_i64(g.complement()), r.key.data() + 11);
  r.cert = certificate_bits64(canonical_form(g));
  r.controllable = is_controllable(g);
  return r;
}

std::optional<RatMatrix> transition_matrix(const Graph& g, const Graph& h) {
  if (g.n() != h.n()) throw DomainError("transition_matrix: order mismatch");
  int n = g.n();
  IntMatrix wg = walk_matrix(g);
  IntMatrix wh = walk_matrix(h);
  IntMatrix wgt(n), wht(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      wgt.at(i, j) = wg.at(j, i);
      wht.at(i, j) = wh.at(j, i);
    }
  }
  RatMatrix q = solve_int(wgt, wht);  // W(g)^T Q = W(h)^T
  if (!rat_is_identity(rat_mul(rat_transpose(q), q))) return std::nullopt;
  if (!fixes_ones_vector(q)) return std::nullopt;
  if (!verify_transition(q, adjacency_matrix(g), adjacency_matrix(h)))
    return std::nullopt;
  return q;
}

std::vector<CensusRecord> census_map(int n, const std::vector<Graph>& graphs, int jobs) {
  require_census_order(n);
  for (const Graph& g : graphs) {
    if (g.n() != n) throw DomainError("census_map: graph order differs from n");
  }
  std::vector<CensusRecord> records(graphs.size());
  if (jobs <= 1 || graphs.size() < 64) {
    for (size_t i = 0; i < graphs.size(); ++i) records[i] = census_record(graphs[i]);
    return records;
  }
  size_t workers = std::min<size_t>(static_cast<size_t>(jobs), graphs.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (size_t i = w; i < graphs.size(); i += workers)
        records[i] = census_record(graphs[i]);
    });
  }
  for (auto& t : pool) t.join();
  return records;
}

CensusReport census_from_records(int n, std::vector<CensusRecord> records) {
  require_census_order(n);
  std::sort(records.begin(), records.end(), key_less);
  records.erase(std::unique(records.begin(), records.end()), records.end());

  CensusReport report;
  report.n = n;
  report.class_count = records.size();
  for (const CensusRecord& r : records) {
    if (r.controllable) ++report.controllable_count;
  }

  size_t lo = 0;
  while (lo < records.size()) {
    size_t hi = lo;
    while (hi < records.size() && records[hi].key == records[lo].key) ++hi;
    std::vector<uint64_t> controllable;
    size_t other = 0;
    for (size_t i = lo; i < hi; ++i) {
      if (records[i].controllable)
        controllable.push_back(records[i].cert);
      else
        ++other;
    }
    if (!controllable.empty() && other > 0) {
      std::string msg = "mixed bucket (controllable with non-controllable):";
      for (uint64_t c : controllable)
        msg += " " + to_graph6(graph_from_bits64(n, c));
      msg += " + " + std::to_string(other) + " non-controllable";
      report.anomalies.push_back(std::move(msg));
    }
    for (size_t a = 0; a < controllable.size(); ++a) {
      for (size_t b = a + 1; b < controllable.size(); ++b) {
        Graph g = graph_from_bits64(n, controllable[a]);
        Graph h = graph_from_bits64(n, controllable[b]);
        std::optional<RatMatrix> q = transition_matrix(g, h);
        if (!q) {
          report.anomalies.push_back("transition verification failed: " +
                                     to_graph6(g) + " vs " + to_graph6(h));
          continue;
        }
        auto [level, height] = level_and_height(*q);
        if (height < 2)
          throw std::logic_error(
              "census: transition of height 1 between distinct classes");
        MatePair pair;
        pair.g = g;
        pair.h = h;
        pair.q = std::move(*q);
        pair.level = level;
        pair.height = height;
        report.pairs.push_back(std::move(pair));
        if (!report.l_max || level > *report.l_max) report.l_max = level;
        if (!report.h_max || height > *report.h_max) report.h_max = height;
      }
    }
    lo = hi;
  }
  report.pair_count = report.pairs.size();
  return report;
}

CensusReport run_census(int n, int jobs) {
  require_census_order(n);
  return run_census(n, enumerate_graphs(n), jobs);
}

CensusReport run_census(int n, const std::vector<Graph>& graphs, int jobs) {
  return census_from_records(n, census_map(n, graphs, jobs));
}

void write_census_csv(const CensusReport& report, std::ostream& out) {
  out << "n,classes,controllable,pairs,l_max,h_max\n";
  out << report.n << ',' << report.class_count << ',' << report.controllable_count
      << ',' << report.pair_count << ',';
  if (report.l_max)
    out << report.l_max->get_str();
  else
    out << "NaN";
  out << ',';
  if (report.h_max)
    out << report.h_max->get_str();
  else
    out << "NaN";
  out << '\n';
}

void write_pairs_json(const CensusReport& report, std::ostream& out) {
  nlohmann::json j;
  j["n"] = report.n;
  j["classes"] = report.class_count;
  j["controllable"] = report.controllable_count;
  j["anomalies"] = report.anomalies;
  nlohmann::json pairs = nlohmann::json::array();
  for (const MatePair& p : report.pairs) {
    nlohmann::json jp;
    jp["g"] = to_graph6(p.g);
    jp["h"] = to_graph6(p.h);
    jp["level"] = p.level.get_str();
    jp["height"] = p.height.get_str();
    jp["controllable_both"] = p.controllable_both;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < p.q.n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < p.q.n; ++k) row.push_back(rat_to_string(p.q.at(i, k)));
      rows.push_back(std::move(row));
    }
    jp["q"] = std::move(rows);
    pairs.push_back(std::move(jp));
  }
  j["pairs"] = std::move(pairs);
  out << j.dump(2) << '\n';
}

void write_shard(int n, const std::vector<CensusRecord>& records, std::ostream& out) {
  require_census_order(n);
  nlohmann::json j;
  j["n"] = n;
  nlohmann::json recs = nlohmann::json::array();
  for (const CensusRecord& r : records) {
    nlohmann::json jr = nlohmann::json::array();
    jr.push_back(r.cert);
    jr.push_back(r.controllable);
    nlohmann::json key = nlohmann::json::array();
    for (int32_t c : r.key) key.push_back(c);
    jr.push_back(std::move(key));
    recs.push_back(std::move(jr));
  }
  j["records"] = std::move(recs);
  out << j.dump() << '\n';
}

std::vector<CensusRecord> read_shard(int n, std::istream& in) {
  require_census_order(n);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("shard parse error: ") + e.what());
  }
  try {
    if (j.at("n").get<int>() != n)
      throw DomainError("shard order does not match requested n");
    std::vector<CensusRecord> out;
    for (const auto& jr : j.at("records")) {
      CensusRecord r;
      r.cert = jr.at(0).get<uint64_t>();
      r.controllable = jr.at(1).get<bool>();
      const auto& key = jr.at(2);
      if (key.size() != r.key.size())
        throw DomainError("shard record key has wrong arity");
      for (size_t k = 0; k < r.key.size(); ++k)
        r.key[k] = key.at(k).get<int32_t>();
      out.push_back(r);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("shard structure error: ") + e.what());
  }
}

}  // namespace cospec
