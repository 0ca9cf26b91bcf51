#include "clpv/store.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <stdexcept>

namespace clpv {

namespace {
constexpr Val kInf = std::numeric_limits<Val>::max() / 4;
constexpr std::uint64_t kDiffRelaxBudget = 50'000;
constexpr std::uint64_t kExactEnumLimit = 4096;
}  // namespace

struct ConstraintStore::TrailEntry {
  enum Kind { DomainK, ClosureK } kind;
  VarId var{};
  Domain old_dom;
  std::size_t prev_saved_at = 0;
  std::function<void()> undo;
};

ConstraintStore::ConstraintStore(IntWidth w) : width_(w) {}
ConstraintStore::~ConstraintStore() = default;

VarId ConstraintStore::new_var(std::string origin) {
  return new_var_with_domain(Domain::full(width_), std::move(origin));
}

VarId ConstraintStore::new_var_with_domain(Domain d, std::string origin) {
  VarId id{static_cast<std::uint32_t>(domains_.size())};
  domains_.push_back(std::move(d));
  origins_.push_back(std::move(origin));
  saved_at_.push_back(0);
  var_props_.emplace_back();
  var_agents_.emplace_back();
  edges_.emplace_back();
  diff_dist_.push_back(kInf);
  diff_seen_.push_back(0);
  trail_undo([this] {
    domains_.pop_back();
    origins_.pop_back();
    saved_at_.pop_back();
    var_props_.pop_back();
    var_agents_.pop_back();
    edges_.pop_back();
    diff_dist_.pop_back();
    diff_seen_.pop_back();
  });
  if (domains_.back().empty()) fail();
  return id;
}

void ConstraintStore::fail() { failed_ = true; }

void ConstraintStore::trail_undo(std::function<void()> undo) {
  if (marks_.empty()) return;
  TrailEntry e;
  e.kind = TrailEntry::ClosureK;
  e.undo = std::move(undo);
  trail_.push_back(std::move(e));
}

void ConstraintStore::save_domain(VarId v) {
  if (marks_.empty()) return;
  if (saved_at_[v.idx] > marks_.back()) return;  // already saved in region
  TrailEntry e;
  e.kind = TrailEntry::DomainK;
  e.var = v;
  e.old_dom = domains_[v.idx];
  e.prev_saved_at = saved_at_[v.idx];
  trail_.push_back(std::move(e));
  saved_at_[v.idx] = trail_.size();  // index + 1
}

bool ConstraintStore::tighten(VarId v, Domain nd) {
  Domain next = domains_[v.idx].intersect(nd);
  if (next == domains_[v.idx]) return false;
  save_domain(v);
  domains_[v.idx] = std::move(next);
  if (domains_[v.idx].empty()) {
    fail();
    return true;
  }
  for (std::uint32_t p : var_props_[v.idx]) enqueue_prop(p);
  for (std::uint32_t a : var_agents_[v.idx]) enqueue_agent(a);
  return true;
}

void ConstraintStore::enqueue_prop(std::uint32_t i) {
  if (prop_inq_[i]) return;
  prop_inq_[i] = 1;
  prop_queue_.push_back(i);
}

void ConstraintStore::enqueue_agent(std::uint32_t i) {
  if (agent_inq_[i]) return;
  agent_inq_[i] = 1;
  agent_queue_.push_back(i);
}

void ConstraintStore::subscribe_prop(VarId v, std::uint32_t prop) {
  var_props_[v.idx].push_back(prop);
  trail_undo([this, v] { var_props_[v.idx].pop_back(); });
}

void ConstraintStore::subscribe_agent(VarId v, std::uint32_t id) {
  var_agents_[v.idx].push_back(id);
  trail_undo([this, v] { var_agents_[v.idx].pop_back(); });
}

void ConstraintStore::add_diff_edge(VarId a, VarId b, Val w) {
  edges_[a.idx].push_back({b.idx, w});
  trail_undo([this, a] { edges_[a.idx].pop_back(); });
}

Val ConstraintStore::diff_upper_bound(VarId a, VarId b) {
  const Domain& da = domains_[a.idx];
  const Domain& db = domains_[b.idx];
  if (da.empty() || db.empty()) return -kInf;
  Val bound = da.max() - db.min();
  // Shortest path a -> b over edges (u -> v, w) meaning u - v <= w.
  ++diff_epoch_;
  diff_seen_[a.idx] = diff_epoch_;
  diff_dist_[a.idx] = 0;
  std::deque<std::uint32_t> q{a.idx};
  std::uint64_t relaxations = 0;
  while (!q.empty()) {
    std::uint32_t u = q.front();
    q.pop_front();
    Val du = diff_dist_[u];
    for (const auto& [v, w] : edges_[u]) {
      if (++relaxations > kDiffRelaxBudget) return bound;
      Val nd = du + w;
      if (diff_seen_[v] != diff_epoch_ || nd < diff_dist_[v]) {
        diff_seen_[v] = diff_epoch_;
        diff_dist_[v] = nd;
        q.push_back(v);
      }
    }
  }
  if (diff_seen_[b.idx] == diff_epoch_) bound = std::min(bound, diff_dist_[b.idx]);
  return bound;
}

Domain ConstraintStore::term_domain(const Term& t) const {
  return t.is_var ? domains_[t.var.idx] : Domain::singleton(t.lit);
}

// ---------------------------------------------------------------------------
// Entailment
// ---------------------------------------------------------------------------

Entail ConstraintStore::entail_cmp(CmpOp op, Term a, Term b) {
  if (failed_) return Entail::Entailed;  // vacuous
  Domain da = term_domain(a);
  Domain db = term_domain(b);
  if (da.empty() || db.empty()) return Entail::Entailed;
  // Upper bounds on a-b and b-a; bounds first, difference relations only
  // when bounds are inconclusive. Holes in the unions are deliberately not
  // consulted here.
  Val ub_ab = da.max() - db.min();
  Val ub_ba = db.max() - da.min();
  auto verdict = [&]() -> Entail {
    switch (op) {
      case CmpOp::Le:
        if (ub_ab <= 0) return Entail::Entailed;
        if (ub_ba <= -1) return Entail::Disentailed;
        break;
      case CmpOp::Lt:
        if (ub_ab <= -1) return Entail::Entailed;
        if (ub_ba <= 0) return Entail::Disentailed;
        break;
      case CmpOp::Ge:
        if (ub_ba <= 0) return Entail::Entailed;
        if (ub_ab <= -1) return Entail::Disentailed;
        break;
      case CmpOp::Gt:
        if (ub_ba <= -1) return Entail::Entailed;
        if (ub_ab <= 0) return Entail::Disentailed;
        break;
      case CmpOp::Eq:
        if (ub_ab <= 0 && ub_ba <= 0) return Entail::Entailed;
        if (ub_ab < 0 || ub_ba < 0) return Entail::Disentailed;
        break;
      case CmpOp::Ne:
        if (ub_ab < 0 || ub_ba < 0) return Entail::Entailed;
        if (ub_ab <= 0 && ub_ba <= 0) return Entail::Disentailed;
        break;
    }
    return Entail::Unknown;
  };
  Entail e = verdict();
  if (e == Entail::Unknown && a.is_var && b.is_var && a.var != b.var) {
    ub_ab = std::min(ub_ab, diff_upper_bound(a.var, b.var));
    ub_ba = std::min(ub_ba, diff_upper_bound(b.var, a.var));
    e = verdict();
  }
  return e;
}

Entail ConstraintStore::entailment(const ConstraintPtr& c) {
  if (failed_) return Entail::Entailed;
  switch (c->kind) {
    case Constraint::Kind::Cmp:
      return entail_cmp(c->cmp_op, c->lhs, c->rhs);
    case Constraint::Kind::Arith: {
      Domain dy = term_domain(c->op_a);
      Domain dz = term_domain(c->op_b);
      Domain dx = domains_[c->result.idx];
      if (dx.empty() || dy.empty() || dz.empty()) return Entail::Entailed;
      if (dx.is_singleton() && dy.is_singleton() &&
          (c->arith_op == ArithOp::Neg || dz.is_singleton())) {
        std::function<Val(VarId)> val = [&](VarId v) {
          return domains_[v.idx].value();
        };
        return c->eval(val) ? Entail::Entailed : Entail::Disentailed;
      }
      Domain image;
      switch (c->arith_op) {
        case ArithOp::Add: image = iset::add(dy, dz); break;
        case ArithOp::Sub: image = iset::sub(dy, dz); break;
        case ArithOp::Mul: image = iset::mul(dy, dz); break;
        case ArithOp::Div: image = iset::div_trunc(dy, dz); break;
        case ArithOp::Mod: image = iset::mod_trunc(dy, dz); break;
        case ArithOp::Neg: image = dy.negated(); break;
      }
      if (image.intersect(dx).empty()) return Entail::Disentailed;
      return Entail::Unknown;
    }
    case Constraint::Kind::And: {
      bool unknown = false;
      for (const auto& p : c->parts) {
        Entail e = entailment(p);
        if (e == Entail::Disentailed) return Entail::Disentailed;
        if (e == Entail::Unknown) unknown = true;
      }
      return unknown ? Entail::Unknown : Entail::Entailed;
    }
    case Constraint::Kind::Or: {
      bool unknown = false;
      for (const auto& p : c->parts) {
        Entail e = entailment(p);
        if (e == Entail::Entailed) return Entail::Entailed;
        if (e == Entail::Unknown) unknown = true;
      }
      return unknown ? Entail::Unknown : Entail::Disentailed;
    }
    case Constraint::Kind::True: return Entail::Entailed;
    case Constraint::Kind::False: return Entail::Disentailed;
  }
  return Entail::Unknown;
}

// ---------------------------------------------------------------------------
// Posting
// ---------------------------------------------------------------------------

void ConstraintStore::post(const ConstraintPtr& c) {
  switch (c->kind) {
    case Constraint::Kind::And:
      for (const auto& p : c->parts) post(p);
      return;
    case Constraint::Kind::Or: {
      std::vector<Poster> branches;
      std::vector<VarId> watch;
      for (const auto& p : c->parts) {
        branches.push_back([p](ConstraintStore& s) { s.post(p); });
        p->collect_vars(watch);
      }
      post_cd(std::move(branches), std::move(watch));
      return;
    }
    case Constraint::Kind::True:
      return;
    case Constraint::Kind::False:
      fail();
      return;
    case Constraint::Kind::Cmp:
    case Constraint::Kind::Arith:
      add_propagator(c);
      return;
  }
}

void ConstraintStore::add_propagator(const ConstraintPtr& leaf) {
  std::uint32_t id = static_cast<std::uint32_t>(props_.size());
  props_.push_back({leaf});
  prop_inq_.push_back(0);
  trail_undo([this] {
    props_.pop_back();
    prop_inq_.pop_back();
  });
  for (VarId v : leaf->vars()) subscribe_prop(v, id);
  enqueue_prop(id);

  // Difference relations feed the entailment test.
  if (leaf->kind == Constraint::Kind::Cmp && leaf->lhs.is_var &&
      leaf->rhs.is_var) {
    VarId a = leaf->lhs.var, b = leaf->rhs.var;
    switch (leaf->cmp_op) {
      case CmpOp::Eq:
        add_diff_edge(a, b, 0);
        add_diff_edge(b, a, 0);
        break;
      case CmpOp::Le: add_diff_edge(a, b, 0); break;
      case CmpOp::Lt: add_diff_edge(a, b, -1); break;
      case CmpOp::Ge: add_diff_edge(b, a, 0); break;
      case CmpOp::Gt: add_diff_edge(b, a, -1); break;
      default: break;
    }
  }
  if (leaf->kind == Constraint::Kind::Arith &&
      (leaf->arith_op == ArithOp::Add || leaf->arith_op == ArithOp::Sub)) {
    VarId x = leaf->result;
    const Term& y = leaf->op_a;
    const Term& z = leaf->op_b;
    Val sign = leaf->arith_op == ArithOp::Add ? 1 : -1;
    if (y.is_var && !z.is_var) {
      // x = y +/- c
      add_diff_edge(x, y.var, sign * z.lit);
      add_diff_edge(y.var, x, -sign * z.lit);
    } else if (!y.is_var && z.is_var && leaf->arith_op == ArithOp::Add) {
      add_diff_edge(x, z.var, y.lit);
      add_diff_edge(z.var, x, -y.lit);
    }
  }
}

// ---------------------------------------------------------------------------
// Propagators
// ---------------------------------------------------------------------------

void ConstraintStore::prune_cmp(CmpOp op, Term a, Term b) {
  if (op == CmpOp::Ge || op == CmpOp::Gt) {
    std::swap(a, b);
    op = op == CmpOp::Ge ? CmpOp::Le : CmpOp::Lt;
  }
  Domain da = term_domain(a);
  Domain db = term_domain(b);
  if (da.empty() || db.empty()) return;
  switch (op) {
    case CmpOp::Eq: {
      if (a.is_var && b.is_var) {
        if (diff_upper_bound(a.var, b.var) < 0 ||
            diff_upper_bound(b.var, a.var) < 0) {
          fail();
          return;
        }
      }
      Domain both = da.intersect(db);
      if (a.is_var) tighten(a.var, both);
      if (b.is_var) tighten(b.var, both);
      if (!a.is_var && !b.is_var && a.lit != b.lit) fail();
      break;
    }
    case CmpOp::Ne: {
      if (da.is_singleton() && db.is_singleton()) {
        if (da.value() == db.value()) fail();
        return;
      }
      if (a.is_var && db.is_singleton()) tighten(a.var, da.remove(db.value()));
      if (b.is_var && da.is_singleton()) tighten(b.var, db.remove(da.value()));
      if (a.is_var && b.is_var && a.var != b.var &&
          diff_upper_bound(a.var, b.var) <= 0 &&
          diff_upper_bound(b.var, a.var) <= 0) {
        fail();  // difference relations force equality
      }
      if (a.is_var && b.is_var && a.var == b.var) fail();
      break;
    }
    case CmpOp::Le:
      if (a.is_var) tighten(a.var, da.clamp_max(db.max()));
      if (b.is_var) tighten(b.var, db.clamp_min(da.min()));
      if (!a.is_var && !b.is_var && !(a.lit <= b.lit)) fail();
      break;
    case CmpOp::Lt:
      if (a.is_var) tighten(a.var, da.clamp_max(db.max() - 1));
      if (b.is_var) tighten(b.var, db.clamp_min(da.min() + 1));
      if (!a.is_var && !b.is_var && !(a.lit < b.lit)) fail();
      break;
    default:
      break;
  }
}

void ConstraintStore::run_propagator(std::uint32_t i) {
  const ConstraintPtr& c = props_[i].leaf;
  if (c->kind == Constraint::Kind::Cmp) {
    prune_cmp(c->cmp_op, c->lhs, c->rhs);
    return;
  }
  // Arithmetic definition x = y op z.
  ArithOp op = c->arith_op;
  VarId x = c->result;
  Term ty = c->op_a, tz = c->op_b;
  Domain dy = term_domain(ty);
  Domain dz = term_domain(tz);
  Domain dx = domains_[x.idx];
  if (dx.empty() || dy.empty() || dz.empty()) return;

  if ((op == ArithOp::Mul || op == ArithOp::Div || op == ArithOp::Mod) &&
      dy.size() * dz.size() <= kExactEnumLimit) {
    // Exact projection by enumeration for small boxes.
    std::vector<Interval> sx, sy, sz;
    for (Val vy : dy.values()) {
      for (Val vz : dz.values()) {
        Val r;
        if (op == ArithOp::Mul) {
          r = vy * vz;
        } else {
          if (vz == 0) continue;
          r = op == ArithOp::Div ? vy / vz : vy % vz;
        }
        if (!dx.contains(r)) continue;
        sx.push_back({r, r});
        sy.push_back({vy, vy});
        sz.push_back({vz, vz});
      }
    }
    tighten(x, Domain::from_intervals(std::move(sx)));
    if (ty.is_var) tighten(ty.var, Domain::from_intervals(std::move(sy)));
    if (tz.is_var) tighten(tz.var, Domain::from_intervals(std::move(sz)));
    return;
  }

  switch (op) {
    case ArithOp::Add:
      tighten(x, iset::add(dy, dz));
      if (ty.is_var) tighten(ty.var, iset::sub(dx, dz));
      if (tz.is_var) tighten(tz.var, iset::sub(dx, dy));
      break;
    case ArithOp::Sub:
      tighten(x, iset::sub(dy, dz));
      if (ty.is_var) tighten(ty.var, iset::add(dx, dz));
      if (tz.is_var) tighten(tz.var, iset::sub(dy, dx));
      break;
    case ArithOp::Mul: {
      tighten(x, iset::mul(dy, dz));
      // Backward pruning only against a fixed co-factor.
      if (ty.is_var && dz.is_singleton() && dz.value() != 0) {
        tighten(ty.var, iset::div_trunc(dx, dz));
      }
      if (tz.is_var && dy.is_singleton() && dy.value() != 0) {
        tighten(tz.var, iset::div_trunc(dx, dy));
      }
      if (dz.is_singleton() && dz.value() == 0) tighten(x, Domain::singleton(0));
      if (dy.is_singleton() && dy.value() == 0) tighten(x, Domain::singleton(0));
      break;
    }
    case ArithOp::Div: {
      if (tz.is_var) {
        tighten(tz.var, dz.remove(0));
        dz = domains_[tz.var.idx];
      } else if (tz.lit == 0) {
        fail();
        return;
      }
      if (dz.empty()) return;
      tighten(x, iset::div_trunc(dy, dz));
      if (ty.is_var) tighten(ty.var, iset::div_inv_dividend(dx, dz, dy));
      if (tz.is_var) tighten(tz.var, iset::div_inv_divisor(dx, dy, dz));
      break;
    }
    case ArithOp::Mod: {
      if (tz.is_var) {
        tighten(tz.var, dz.remove(0));
        dz = domains_[tz.var.idx];
      } else if (tz.lit == 0) {
        fail();
        return;
      }
      if (dz.empty()) return;
      tighten(x, iset::mod_trunc(dy, dz));
      break;
    }
    case ArithOp::Neg:
      tighten(x, dy.negated());
      if (ty.is_var) tighten(ty.var, dx.negated());
      break;
  }
}

// ---------------------------------------------------------------------------
// Propagation loop
// ---------------------------------------------------------------------------

bool ConstraintStore::budget_step() {
  if (++stats_.propagations > propagation_budget_) {
    propagation_taint_ = true;
    return false;
  }
  if (deadline_ && ++steps_since_clock_check_ >= 256) {
    steps_since_clock_check_ = 0;
    if (std::chrono::steady_clock::now() >= *deadline_) {
      wallclock_taint_ = true;
      return false;
    }
  }
  return true;
}

PropagateStatus ConstraintStore::propagate() {
  while (!failed_) {
    if (prop_head_ < prop_queue_.size()) {
      std::uint32_t i = prop_queue_[prop_head_++];
      prop_inq_[i] = 0;
      if (!budget_step()) break;
      run_propagator(i);
    } else if (agent_head_ < agent_queue_.size()) {
      std::uint32_t i = agent_queue_[agent_head_++];
      agent_inq_[i] = 0;
      if (!agents_[i]->active) continue;
      if (!budget_step()) break;
      agents_[i]->recheck(*this);
    } else {
      break;
    }
    if (prop_head_ > 4096 && prop_head_ == prop_queue_.size()) {
      prop_queue_.clear();
      prop_head_ = 0;
    }
    if (agent_head_ > 4096 && agent_head_ == agent_queue_.size()) {
      agent_queue_.clear();
      agent_head_ = 0;
    }
  }
  return failed_ ? PropagateStatus::Failed : PropagateStatus::Fixpoint;
}

// ---------------------------------------------------------------------------
// Snapshot / restore
// ---------------------------------------------------------------------------

Snapshot ConstraintStore::snapshot() {
  Snapshot tok;
  tok.trail_mark = trail_.size();
  tok.serial = ++snap_serial_;
  tok.failed = failed_;
  tok.prop_queue.assign(prop_queue_.begin() + prop_head_, prop_queue_.end());
  tok.agent_queue.assign(agent_queue_.begin() + agent_head_,
                         agent_queue_.end());
  marks_.push_back(tok.trail_mark);
  mark_serials_.push_back(tok.serial);
  return tok;
}

void ConstraintStore::restore(const Snapshot& tok) {
  if (marks_.empty() || marks_.back() != tok.trail_mark ||
      mark_serials_.back() != tok.serial) {
    throw std::logic_error("TokenOrderViolation: snapshots are LIFO");
  }
  while (trail_.size() > tok.trail_mark) {
    TrailEntry& e = trail_.back();
    if (e.kind == TrailEntry::DomainK) {
      domains_[e.var.idx] = std::move(e.old_dom);
      saved_at_[e.var.idx] = e.prev_saved_at;
    } else {
      e.undo();
    }
    trail_.pop_back();
  }
  marks_.pop_back();
  mark_serials_.pop_back();
  failed_ = tok.failed;
  prop_queue_ = tok.prop_queue;
  agent_queue_ = tok.agent_queue;
  prop_head_ = 0;
  agent_head_ = 0;
  prop_inq_.assign(props_.size(), 0);
  agent_inq_.assign(agents_.size(), 0);
  for (std::uint32_t i : prop_queue_) prop_inq_[i] = 1;
  for (std::uint32_t i : agent_queue_) agent_inq_[i] = 1;
}

bool ConstraintStore::speculate(const Poster& f,
                                std::map<std::uint32_t, Domain>* changed) {
  Snapshot tok = snapshot();
  std::size_t pre_vars = var_count();
  f(*this);
  propagate();
  bool bad = failed_;
  if (!bad && changed) {
    for (std::size_t i = tok.trail_mark; i < trail_.size(); ++i) {
      const TrailEntry& e = trail_[i];
      if (e.kind == TrailEntry::DomainK && e.var.idx < pre_vars) {
        (*changed)[e.var.idx] = domains_[e.var.idx];
      }
    }
  }
  restore(tok);
  return bad;
}

bool ConstraintStore::refutes(const Poster& f) { return speculate(f, nullptr); }

// ---------------------------------------------------------------------------
// Agents: guards and constructive disjunction
// ---------------------------------------------------------------------------

std::uint32_t ConstraintStore::add_agent(std::unique_ptr<Agent> a,
                                         std::vector<VarId> watch) {
  std::uint32_t id = static_cast<std::uint32_t>(agents_.size());
  agents_.push_back(std::move(a));
  agent_inq_.push_back(0);
  trail_undo([this] {
    agents_.pop_back();
    agent_inq_.pop_back();
  });
  std::sort(watch.begin(), watch.end(),
            [](VarId x, VarId y) { return x.idx < y.idx; });
  watch.erase(std::unique(watch.begin(), watch.end()), watch.end());
  for (VarId v : watch) subscribe_agent(v, id);
  enqueue_agent(id);
  return id;
}

namespace {

struct GuardAgent : Agent {
  ConstraintPtr head;
  ConstraintStore::Poster tail;

  void recheck(ConstraintStore& s) override {
    Entail e = s.entailment(head);
    if (e == Entail::Unknown) return;
    active = false;
    s.trail_undo([this] { active = true; });
    if (e == Entail::Entailed) tail(s);
  }
};

struct CdAgent : Agent {
  std::vector<ConstraintStore::Poster> branches;
  std::vector<char> alive;

  void recheck(ConstraintStore& s) override {
    std::vector<std::map<std::uint32_t, Domain>> doms;
    std::vector<std::size_t> surviving;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      if (!alive[i]) continue;
      std::map<std::uint32_t, Domain> ch;
      if (s.speculate(branches[i], &ch)) {
        alive[i] = 0;
        s.trail_undo([this, i] { alive[i] = 1; });
      } else {
        doms.push_back(std::move(ch));
        surviving.push_back(i);
      }
    }
    if (surviving.empty()) {
      s.fail();
      return;
    }
    if (surviving.size() == 1) {
      active = false;
      s.trail_undo([this] { active = true; });
      branches[surviving[0]](s);
      return;
    }
    s.cd_union_prune(doms);
  }
};

}  // namespace

void ConstraintStore::cd_union_prune(
    const std::vector<std::map<std::uint32_t, Domain>>& branch_domains) {
  if (branch_domains.empty()) return;
  // Only variables pruned by every surviving branch can shrink.
  for (const auto& [v, d0] : branch_domains[0]) {
    Domain u = d0;
    bool in_all = true;
    for (std::size_t i = 1; i < branch_domains.size(); ++i) {
      auto it = branch_domains[i].find(v);
      if (it == branch_domains[i].end()) {
        in_all = false;
        break;
      }
      u = u.unite(it->second);
    }
    if (in_all) tighten(VarId{v}, u);
  }
}

void ConstraintStore::post_guarded(ConstraintPtr head, Poster tail) {
  auto g = std::make_unique<GuardAgent>();
  g->head = head;
  g->tail = std::move(tail);
  add_agent(std::move(g), head->vars());
}

void ConstraintStore::post_cd(std::vector<Poster> branches,
                              std::vector<VarId> watch) {
  auto cd = std::make_unique<CdAgent>();
  cd->alive.assign(branches.size(), 1);
  cd->branches = std::move(branches);
  add_agent(std::move(cd), std::move(watch));
}

void ConstraintStore::post_constructive_disjunction(ConstraintPtr c1,
                                                    ConstraintPtr c2) {
  std::vector<VarId> watch = c1->vars();
  for (VarId v : c2->vars()) watch.push_back(v);
  post_cd({[c1](ConstraintStore& s) { s.post(c1); },
           [c2](ConstraintStore& s) { s.post(c2); }},
          std::move(watch));
}

// ---------------------------------------------------------------------------
// Labeling
// ---------------------------------------------------------------------------

namespace {
// Iterates domain values as 0, 1, -1, 2, -2, ...
class MagnitudeOrder {
 public:
  explicit MagnitudeOrder(const Domain& d) : d_(d) {
    pos_ = d_.first_geq(0);
    neg_ = d_.last_leq(-1);
  }
  std::optional<Val> next() {
    if (!pos_ && !neg_) return std::nullopt;
    Val v;
    if (pos_ && (!neg_ || *pos_ <= -*neg_)) {
      v = *pos_;
      pos_ = d_.first_geq(v + 1);
    } else {
      v = *neg_;
      neg_ = d_.last_leq(v - 1);
    }
    return v;
  }

 private:
  Domain d_;
  std::optional<Val> pos_, neg_;
};
}  // namespace

LabelStatus ConstraintStore::label(const std::vector<VarId>& vars,
                                   std::uint64_t node_budget,
                                   std::vector<Val>* solution) {
  if (propagate() == PropagateStatus::Failed) return LabelStatus::Exhausted;
  std::uint64_t nodes = 0;
  std::function<LabelStatus(std::size_t)> rec =
      [&](std::size_t i) -> LabelStatus {
    if (i == vars.size()) {
      if (solution) {
        solution->clear();
        for (VarId v : vars) solution->push_back(domains_[v.idx].min());
      }
      return LabelStatus::Solution;
    }
    MagnitudeOrder order(domains_[vars[i].idx]);
    while (auto v = order.next()) {
      if (++nodes > node_budget) return LabelStatus::BudgetOut;
      if (deadline_ && nodes % 64 == 0 &&
          std::chrono::steady_clock::now() >= *deadline_) {
        wallclock_taint_ = true;
        return LabelStatus::BudgetOut;
      }
      Snapshot tok = snapshot();
      tighten(vars[i], Domain::singleton(*v));
      if (propagate() == PropagateStatus::Fixpoint) {
        if (propagation_taint_ || wallclock_taint_) {
          restore(tok);
          return LabelStatus::BudgetOut;
        }
        LabelStatus r = rec(i + 1);
        if (r != LabelStatus::Exhausted) {
          restore(tok);
          return r;
        }
      }
      restore(tok);
    }
    return LabelStatus::Exhausted;
  };
  LabelStatus result = rec(0);
  stats_.label_nodes += nodes;
  return result;
}

}  // namespace clpv
