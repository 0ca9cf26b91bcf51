#ifndef CLPV_STORE_HPP
#define CLPV_STORE_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clpv/constraint.hpp"
#include "clpv/domain.hpp"

namespace clpv {

enum class Entail { Disentailed, Unknown, Entailed };
enum class PropagateStatus { Fixpoint, Failed };
enum class LabelStatus { Solution, Exhausted, BudgetOut };

class ConstraintStore;

/// A suspended entity (guard, constructive disjunction, control combinator)
/// rechecked whenever one of its watched variables changes domain.
struct Agent {
  virtual ~Agent() = default;
  virtual void recheck(ConstraintStore& s) = 0;
  bool active = true;
};

/// Stack-disciplined snapshot token.
struct Snapshot {
  std::size_t trail_mark = 0;
  std::uint64_t serial = 0;
  bool failed = false;
  std::vector<std::uint32_t> prop_queue;
  std::vector<std::uint32_t> agent_queue;
};

struct StoreStats {
  std::uint64_t propagations = 0;
  std::uint64_t unfoldings = 0;
  std::uint64_t label_nodes = 0;
};

/// Finite-domain constraint store: interval-union domains, arithmetic and
/// comparison propagators, three-valued entailment, guarded constraints,
/// constructive disjunction, snapshot/restore and labeling.
///
/// Single-owner mutable state; distinct stores are independent.
class ConstraintStore {
 public:
  explicit ConstraintStore(IntWidth w);
  ~ConstraintStore();

  IntWidth width() const { return width_; }

  // -- variables ------------------------------------------------------------
  VarId new_var(std::string origin = {});
  VarId new_var_with_domain(Domain d, std::string origin = {});
  std::size_t var_count() const { return domains_.size(); }
  const Domain& domain(VarId v) const { return domains_[v.idx]; }
  const std::string& origin(VarId v) const { return origins_[v.idx]; }

  // -- posting and propagation ----------------------------------------------
  void post(const ConstraintPtr& c);
  PropagateStatus propagate();
  bool failed() const { return failed_; }
  void fail();

  /// Conservative three-valued test against the current domains (bounds
  /// plus recorded difference relations; never consults interval holes).
  Entail entailment(const ConstraintPtr& c);
  Entail entail_cmp(CmpOp op, Term a, Term b);

  // -- guards and constructive disjunction ----------------------------------
  using Poster = std::function<void(ConstraintStore&)>;

  void post_guarded(ConstraintPtr head, Poster tail);
  void post_constructive_disjunction(ConstraintPtr c1, ConstraintPtr c2);
  /// Generalized n-ary constructive disjunction over posting closures.
  void post_cd(std::vector<Poster> branches, std::vector<VarId> watch);

  /// True if posting via `f` and propagating leads to failure. The store is
  /// left unchanged (speculation on a snapshot).
  bool refutes(const Poster& f);

  // -- snapshot/restore -----------------------------------------------------
  Snapshot snapshot();
  void restore(const Snapshot& tok);

  // -- labeling -------------------------------------------------------------
  /// Values are tried smallest absolute value first (0, 1, -1, 2, -2, ...).
  LabelStatus label(const std::vector<VarId>& vars, std::uint64_t node_budget,
                    std::vector<Val>* solution);

  // -- budgets and taint ----------------------------------------------------
  void set_propagation_budget(std::uint64_t b) { propagation_budget_ = b; }
  void set_deadline(std::chrono::steady_clock::time_point t) { deadline_ = t; }
  void note_unfolding() { ++stats_.unfoldings; }
  void mark_unfold_taint() { unfold_taint_ = true; }
  bool unfold_taint() const { return unfold_taint_; }
  bool propagation_taint() const { return propagation_taint_; }
  bool wallclock_taint() const { return wallclock_taint_; }
  bool tainted() const {
    return unfold_taint_ || propagation_taint_ || wallclock_taint_;
  }
  /// Forgets taint markers. Exhaustive-search helpers use this to scope
  /// taint to one search subtree; refutation never calls it.
  void clear_taints() {
    unfold_taint_ = propagation_taint_ = wallclock_taint_ = false;
  }
  const StoreStats& stats() const { return stats_; }

  // -- extension points used by the combinators -----------------------------
  std::uint32_t add_agent(std::unique_ptr<Agent> a, std::vector<VarId> watch);
  Agent* agent(std::uint32_t id) { return agents_[id].get(); }
  /// Record an undo action on the trail (no-op when no snapshot is active).
  void trail_undo(std::function<void()> undo);
  /// Speculatively run `f` + propagate; reports failure and the domains the
  /// speculation left behind for every variable it changed. Rolls back.
  bool speculate(const Poster& f, std::map<std::uint32_t, Domain>* changed);
  /// Prune each variable to the union of its surviving speculative domains.
  void cd_union_prune(
      const std::vector<std::map<std::uint32_t, Domain>>& branch_domains);

  /// Record a difference relation a - b <= w (done automatically by post()).
  void add_diff_edge(VarId a, VarId b, Val w);
  /// Least known upper bound on a - b (bounds and difference relations).
  Val diff_upper_bound(VarId a, VarId b);

 private:
  struct Prop {
    ConstraintPtr leaf;
  };
  struct TrailEntry;

  void add_propagator(const ConstraintPtr& leaf);
  void subscribe_prop(VarId v, std::uint32_t prop);
  void subscribe_agent(VarId v, std::uint32_t id);
  void run_propagator(std::uint32_t i);
  bool tighten(VarId v, Domain nd);
  void enqueue_prop(std::uint32_t i);
  void enqueue_agent(std::uint32_t i);
  void save_domain(VarId v);
  bool budget_step();
  void prune_cmp(CmpOp op, Term a, Term b);
  Domain term_domain(const Term& t) const;

  IntWidth width_;
  std::vector<Domain> domains_;
  std::vector<std::string> origins_;
  std::vector<std::size_t> saved_at_;  // trail index of last save, per var

  std::vector<Prop> props_;
  std::vector<std::unique_ptr<Agent>> agents_;
  std::vector<std::vector<std::uint32_t>> var_props_;
  std::vector<std::vector<std::uint32_t>> var_agents_;

  std::vector<std::uint32_t> prop_queue_;
  std::vector<std::uint32_t> agent_queue_;
  std::size_t prop_head_ = 0;
  std::size_t agent_head_ = 0;
  std::vector<char> prop_inq_;
  std::vector<char> agent_inq_;

  std::vector<TrailEntry> trail_;
  std::vector<std::size_t> marks_;
  std::vector<std::uint64_t> mark_serials_;
  std::uint64_t snap_serial_ = 0;

  // difference graph: edges_[a] = {(b, w)} meaning a - b <= w
  std::vector<std::vector<std::pair<std::uint32_t, Val>>> edges_;
  std::vector<Val> diff_dist_;      // query scratch
  std::vector<std::uint64_t> diff_seen_;
  std::uint64_t diff_epoch_ = 0;

  bool failed_ = false;
  bool unfold_taint_ = false;
  bool propagation_taint_ = false;
  bool wallclock_taint_ = false;
  std::uint64_t propagation_budget_ = 10'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t steps_since_clock_check_ = 0;
  StoreStats stats_;
};

}  // namespace clpv

#endif
