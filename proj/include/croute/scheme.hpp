#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "croute/graph.hpp"
#include "croute/labels.hpp"

namespace croute {

class BuildError : public Error {
 public:
  BuildError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Port value meaning "this node is the key"; stored for self entries.
inline constexpr Port kDeliverPort = kNoPort - 1;

// Sorted key -> port map, the common shape of routing-table sections.
class PortMap {
 public:
  struct Entry {
    std::uint32_t key;
    Port port;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  PortMap() = default;
  explicit PortMap(std::vector<Entry> entries);  // sorts; keys must be unique

  std::optional<Port> find(std::uint32_t key) const;
  bool contains(std::uint32_t key) const { return find(key).has_value(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  friend bool operator==(const PortMap&, const PortMap&) = default;

 private:
  std::vector<Entry> entries_;
};

enum class Phase : std::uint8_t { kNone, kResolving, kResolved };

// Mutable per-packet state owned by the forwarding logic.
struct HeaderScratch {
  int tree = -1;        // tree-cover: stamped tree index
  int sub_scheme = -1;  // hybrid: 0 = landmark, 1 = tree cover
  Phase phase = Phase::kNone;
  NodeId resolver = kNoNode;
  friend bool operator==(const HeaderScratch&, const HeaderScratch&) = default;
};

struct PacketHeader {
  NodeId dst = kNoNode;
  std::optional<NodeLabel> label;  // absent for name-independent packets until resolved
  HeaderScratch scratch;
  std::uint32_t hop_budget = 0;
};

struct Step {
  enum class Kind { kDeliver, kForward, kFault };
  Kind kind = Kind::kFault;
  Port port = kNoPort;

  static Step deliver() { return {Kind::kDeliver, kNoPort}; }
  static Step to(Port p) { return {Kind::kForward, p}; }
  static Step fault() { return {Kind::kFault, kNoPort}; }
  friend bool operator==(const Step&, const Step&) = default;
};

struct TableSize {
  std::uint64_t entries = 0;
  std::uint64_t bits = 0;
  friend bool operator==(const TableSize&, const TableSize&) = default;
};

// Access-log tags. Tree-cover reads are tagged with the tree index (>= 0).
inline constexpr int kTagTreeChoice = -1;
inline constexpr int kTagLandmark = -2;
inline constexpr int kTagVicinity = -3;

// Records which node's state forwarding reads. Tags name the sub-structure
// (tree index, landmark tables, vicinity tables) so tests can check confinement.
class AccessLog {
 public:
  struct Access {
    NodeId at;     // node that was forwarding
    NodeId node;   // node whose state was read
    int tag;
  };

  void begin_step(NodeId at) { at_ = at; }
  void record(NodeId node, int tag) {
    if (suspended_ == 0) accesses_.push_back({at_, node, tag});
  }
  void suspend() { ++suspended_; }
  void resume() { --suspended_; }
  void count_dry_run() { ++dry_runs_; }

  const std::vector<Access>& accesses() const { return accesses_; }
  std::size_t dry_runs() const { return dry_runs_; }
  void clear() {
    accesses_.clear();
    dry_runs_ = 0;
  }

 private:
  NodeId at_ = kNoNode;
  int suspended_ = 0;
  std::size_t dry_runs_ = 0;
  std::vector<Access> accesses_;
};

std::string_view scheme_name(SchemeKind kind);

// The built artifacts of one scheme on one graph: per-node tables and labels
// plus the forwarding rule over them. Immutable after construction and safe
// for concurrent routing. The graph must outlive the scheme.
class RoutingScheme {
 public:
  explicit RoutingScheme(const Graph& graph);
  explicit RoutingScheme(Graph&&) = delete;
  virtual ~RoutingScheme() = default;
  RoutingScheme(const RoutingScheme&) = delete;
  RoutingScheme& operator=(const RoutingScheme&) = delete;

  virtual SchemeKind kind() const = 0;
  std::string_view name() const { return scheme_name(kind()); }
  virtual bool name_independent() const { return false; }

  const Graph& graph() const { return *graph_; }
  BitWidths widths() const { return widths_; }
  std::uint32_t hop_budget() const { return hop_budget_; }

  virtual const NodeLabel& label(NodeId node) const = 0;

  // Name-dependent schemes copy the destination label; name-independent ones
  // carry the flat id only.
  PacketHeader make_header(NodeId dst) const;

  // Called once where name-dependent routing starts (the source, or the
  // resolver for name-independent packets). May run a source-side dry run.
  virtual void begin(NodeId at, PacketHeader& header) const;

  // Pure local decision: reads only `current`'s table and label and the header.
  virtual Step forward(NodeId current, PacketHeader& header) const = 0;

  virtual TableSize table_size(NodeId node) const = 0;

  // Test instrumentation; not thread-safe while attached.
  virtual void attach_access_log(AccessLog* log) const { log_ = log; }
  AccessLog* access_log() const { return log_; }

 protected:
  void touch(NodeId node, int tag = 0) const {
    if (log_ != nullptr) log_->record(node, tag);
  }

 private:
  const Graph* graph_;
  BitWidths widths_;
  std::uint32_t hop_budget_;
  mutable AccessLog* log_ = nullptr;
};

enum class RouteFault { kNone, kRouting, kLoop };

struct RouteResult {
  bool delivered = false;
  RouteFault fault = RouteFault::kNone;
  std::vector<NodeId> path;
  std::uint32_t hops = 0;
  std::uint32_t shortest = 0;

  // hops / shortest; undefined for src == dst or undelivered packets.
  std::optional<double> stretch() const {
    if (!delivered || shortest == 0) return std::nullopt;
    return static_cast<double>(hops) / shortest;
  }
};

// Walks forward() from src until delivery or fault. `shortest` is the known
// BFS distance; the overload without it runs a BFS.
RouteResult route(const RoutingScheme& scheme, NodeId src, NodeId dst, std::uint32_t shortest);
RouteResult route(const RoutingScheme& scheme, NodeId src, NodeId dst);

// Hop count only, no path recording. kUnreachable on fault.
std::uint32_t route_hops(const RoutingScheme& scheme, NodeId src, NodeId dst);

// Per-source BFS cache; thread-safe.
class ShortestPathOracle {
 public:
  explicit ShortestPathOracle(const Graph& graph) : graph_(&graph) {}
  std::uint32_t distance(NodeId src, NodeId dst);

 private:
  const Graph* graph_;
  std::mutex mutex_;
  std::unordered_map<NodeId, std::shared_ptr<const std::vector<std::uint32_t>>> cache_;
};

// entries * (id bits + port bits) + own-label bits + auxiliary bits.
std::uint64_t table_bits(std::uint64_t entries, BitWidths w, std::uint64_t label_bits,
                         std::uint64_t aux_bits = 0);

}  // namespace croute
