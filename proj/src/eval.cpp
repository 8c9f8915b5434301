#include "croute/eval.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>
#include <unordered_set>

#include "croute/random.hpp"

namespace croute {

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(t, jobs)));
}

// Runs fn(job, worker) for job in [0, jobs); workers pull from a shared counter.
template <class Fn>
void parallel_for(std::size_t jobs, unsigned workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto body = [&](unsigned worker) {
    for (std::size_t j = next++; j < jobs; j = next++) fn(j, worker);
  };
  if (workers <= 1) {
    body(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
}

// Floyd's algorithm: `count` distinct values from [0, total), ascending.
std::vector<std::uint64_t> sample_indices(std::uint64_t total, std::uint64_t count, std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  if (count >= total) {
    out.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) out[i] = i;
    return out;
  }
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  for (std::uint64_t j = total - count; j < total; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    chosen.insert(chosen.contains(t) ? j : t);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<NodePair> PairSampler::pairs(std::size_t n) const {
  std::vector<NodePair> out;
  if (n < 2) return out;
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1);
  const std::uint64_t want = mode_ == Mode::kAllPairs ? total : count_;
  const auto idx = sample_indices(total, want, seed_);
  out.reserve(idx.size());
  for (std::uint64_t i : idx) {
    const auto src = static_cast<NodeId>(i / (n - 1));
    const auto r = static_cast<NodeId>(i % (n - 1));
    out.emplace_back(src, r < src ? r : r + 1);
  }
  return out;
}

std::string PairSampler::describe() const {
  if (mode_ == Mode::kAllPairs) return "all_pairs";
  return "uniform count=" + std::to_string(count_) + " seed=" + std::to_string(seed_);
}

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::size_t stretch_bin(std::uint32_t hops, std::uint32_t shortest) {
  if (hops <= shortest) return 0;
  return static_cast<std::size_t>((20ULL * (hops - shortest)) / shortest);
}

std::size_t entries_bin(std::uint64_t entries) {
  return entries <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(entries) - 1);
}

namespace {

void bump(Histogram& h, std::size_t bin) {
  if (h.counts.size() <= bin) h.counts.resize(bin + 1, 0);
  ++h.counts[bin];
}

}  // namespace

NeighborReport neighbor_check(const RoutingScheme& scheme, std::uint64_t sample, std::uint64_t seed,
                              unsigned threads) {
  const Graph& g = scheme.graph();
  std::vector<NodePair> all;
  all.reserve(2 * g.edge_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) all.emplace_back(u, v);
  }
  std::vector<NodePair> chosen;
  if (sample == 0 || sample >= all.size()) {
    chosen = std::move(all);
  } else {
    for (std::uint64_t i : sample_indices(all.size(), sample, seed)) chosen.push_back(all[i]);
  }

  std::vector<std::uint8_t> ok(chosen.size(), 0);
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (chosen.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, worker_count(threads, chunks), [&](std::size_t c, unsigned) {
    const std::size_t end = std::min(chosen.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      RouteResult r = route(scheme, chosen[i].first, chosen[i].second, 1);
      ok[i] = r.delivered && r.hops == 1;
    }
  });

  NeighborReport report;
  report.checked = chosen.size();
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (ok[i]) {
      ++report.direct;
    } else {
      report.violations.push_back(chosen[i]);
    }
  }
  return report;
}

EvalReport evaluate(const RoutingScheme& scheme, const PairSampler& sampler, const EvalOptions& options) {
  const Graph& g = scheme.graph();
  const std::size_t n = g.node_count();
  EvalReport report;
  report.scheme = std::string(scheme.name());
  report.nodes = n;
  report.edges = g.edge_count();

  std::vector<NodePair> pairs = sampler.pairs(n);
  report.pairs = pairs.size();

  // Pairs are sorted by source; one BFS per source group.
  std::vector<std::size_t> group_start;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].first != pairs[i - 1].first) group_start.push_back(i);
  }
  group_start.push_back(pairs.size());

  enum : std::uint8_t { kOk, kRouting, kLoop };
  std::vector<std::uint32_t> hops(pairs.size(), kUnreachable);
  std::vector<std::uint32_t> shortest(pairs.size(), 0);
  std::vector<std::uint8_t> outcome(pairs.size(), kOk);

  const std::size_t groups = group_start.size() - 1;
  const unsigned workers = worker_count(options.threads, groups);
  std::vector<std::vector<std::uint32_t>> dist_buf(workers);
  std::vector<std::vector<NodeId>> queue_buf(workers);
  parallel_for(groups, workers, [&](std::size_t grp, unsigned worker) {
    auto& dist = dist_buf[worker];
    const NodeId src = pairs[group_start[grp]].first;
    bfs_distances(g, src, dist, queue_buf[worker]);
    for (std::size_t i = group_start[grp]; i < group_start[grp + 1]; ++i) {
      const NodeId dst = pairs[i].second;
      RouteResult r = route(scheme, src, dst, dist[dst]);
      shortest[i] = dist[dst];
      if (r.delivered) {
        hops[i] = r.hops;
      } else {
        outcome[i] = r.fault == RouteFault::kLoop ? kLoop : kRouting;
      }
    }
  });

  double stretch_sum = 0.0;
  double dist_sum = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    dist_sum += shortest[i];
    if (outcome[i] == kRouting) ++report.routing_faults;
    if (outcome[i] == kLoop) ++report.loop_faults;
    if (outcome[i] != kOk) continue;
    ++report.delivered;
    const double s = static_cast<double>(hops[i]) / shortest[i];
    stretch_sum += s;
    report.max_stretch = std::max(report.max_stretch, s);
    bump(report.stretch_hist, stretch_bin(hops[i], shortest[i]));
  }
  if (report.delivered > 0) report.avg_stretch = stretch_sum / static_cast<double>(report.delivered);
  if (!pairs.empty()) report.avg_distance = dist_sum / static_cast<double>(pairs.size());

  std::uint64_t entry_sum = 0;
  std::uint64_t bit_sum = 0;
  for (NodeId v = 0; v < n; ++v) {
    const TableSize t = scheme.table_size(v);
    entry_sum += t.entries;
    bit_sum += t.bits;
    report.max_entries = std::max(report.max_entries, t.entries);
    report.max_bits = std::max(report.max_bits, t.bits);
    bump(report.entries_hist, entries_bin(t.entries));
  }
  if (n > 0) {
    report.mean_entries = static_cast<double>(entry_sum) / static_cast<double>(n);
    report.mean_bits = static_cast<double>(bit_sum) / static_cast<double>(n);
  }

  if (options.neighbor_check) {
    report.neighbor = neighbor_check(scheme, options.neighbor_sample, options.neighbor_seed, options.threads);
  }
  if (options.keep_hops) {
    report.pair_list = std::move(pairs);
    report.hops = std::move(hops);
    report.shortest = std::move(shortest);
  }
  return report;
}

}  // namespace croute
