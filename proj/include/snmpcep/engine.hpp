#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "snmpcep/ast.hpp"
#include "snmpcep/errors.hpp"
#include "snmpcep/event.hpp"
#include "snmpcep/validator.hpp"

namespace snmpcep {

namespace detail {

// Tri-state value for where-clause evaluation. Accessors over unbound
// variables yield Unknown, which collapses to false at comparison level.
struct EvalVal {
  enum class Tag { Unknown, Int, Text, Bool } tag = Tag::Unknown;
  std::int64_t i = 0;
  const std::string* s = nullptr;
  bool b = false;
};

}  // namespace detail

// The execution engine: registers checked patterns as listeners, consumes
// events in timestamp order, tracks partial matches against windows and
// deadlines, and emits alerts.
//
// Single logical event loop: registration and event delivery must be
// externally serialized. Emitted alerts are immutable snapshots.
class Correlator {
 public:
  using ListenerId = std::size_t;

  // Registers a validated pattern; events delivered afterwards are matched
  // against it. Rejects duplicate pattern names.
  ListenerId register_pattern(CheckedPattern pattern) {
    for (const auto& l : listeners_)
      if (l.plan.ast().name == pattern.ast.name)
        throw ValueError("pattern '" + pattern.ast.name + "' already registered");
    listeners_.emplace_back(Plan(std::move(pattern)));
    return listeners_.size() - 1;
  }

  // Delivers one event. Expired state is dropped before matching; returns
  // the alerts this event fired, in pattern-registration order.
  std::vector<Alert> on_event(const Event& e) {
    if (e.ts_ms < now_) throw OutOfOrderError(now_, e.ts_ms);
    now_ = e.ts_ms;
    std::vector<Alert> alerts;
    for (auto& l : listeners_) {
      auto [it, fresh] = l.sources.try_emplace(e.source);
      SourceState& ss = it->second;
      if (fresh && l.plan.has_root_attempt) ss.partials.push_back(make_partial(l.plan));
      expire(l, ss);
      // Extend existing partials in creation order.
      std::size_t existing = ss.partials.size();
      for (std::size_t i = 0; i < existing; ++i) {
        Partial& p = ss.partials[i];
        if (p.dead) continue;
        if (try_extend(l, p, e)) finish_binding(l, p, e, alerts);
      }
      // Each event matching the leftmost filter under an `every` spawns a
      // fresh partial (overlapping match attempts).
      for (std::size_t k = 0; k < l.plan.every_nodes.size(); ++k) {
        int entry_var = l.plan.every_entry_var[k];
        if (entry_var < 0) continue;
        if (!filter_passes(l.plan.ast().vars[static_cast<std::size_t>(entry_var)].pred, e))
          continue;
        ss.partials.push_back(make_partial(l.plan));
        Partial& p = ss.partials.back();
        bind(l, p, entry_var, e);
        finish_binding(l, p, e, alerts);
      }
      sweep(ss);
      prune_fired(l);
    }
    return alerts;
  }

  // Advances virtual time without an event: expired partials are dropped.
  // No pattern in this subset completes on expiry, so the result is empty.
  std::vector<Alert> advance_time(std::int64_t t_ms) {
    if (t_ms < now_) throw OutOfOrderError(now_, t_ms);
    now_ = t_ms;
    for (auto& l : listeners_) {
      for (auto& [src, ss] : l.sources) {
        expire(l, ss);
        sweep(ss);
      }
      prune_fired(l);
    }
    return {};
  }

  std::int64_t now_ms() const { return now_; }

  // Partials currently holding at least one bound event.
  std::size_t live_partial_count() const {
    std::size_t n = 0;
    for (const auto& l : listeners_)
      for (const auto& [src, ss] : l.sources)
        for (const auto& p : ss.partials)
          if (!p.dead && p.bound_mask != 0) ++n;
    return n;
  }

 private:
  // Compiled per-pattern matching info.
  struct Plan {
    CheckedPattern cp;
    std::vector<std::uint32_t> vars_under;  // per pattern node: subtree variable mask
    std::vector<int> every_nodes;           // pre-order
    std::vector<int> every_entry_var;       // leftmost filter var under each every
    std::vector<int> within_nodes;
    bool has_root_attempt = false;
    std::int64_t prune_horizon = 0;

    explicit Plan(CheckedPattern checked) : cp(std::move(checked)) {
      const PatternAst& a = cp.ast;
      vars_under.assign(a.pat.size(), 0);
      compute_masks(a.pat_root);
      collect(a.pat_root);
      // A root attempt exists when some variable can bind without an
      // `every` spawn (it starts with zero bindings, one per source).
      std::uint32_t spawn_only = 0;
      for (std::size_t k = 0; k < every_nodes.size(); ++k)
        spawn_only |= fresh_reach(a.pat[static_cast<std::size_t>(every_nodes[k])].child0);
      has_root_attempt = (fresh_reach(a.pat_root) & ~spawn_only) != 0;
      std::int64_t horizon = a.window_ms;
      for (int w : within_nodes)
        horizon = std::max(horizon, a.pat[static_cast<std::size_t>(w)].within_ms);
      prune_horizon = 2 * horizon;
    }

    const PatternAst& ast() const { return cp.ast; }

    std::uint32_t compute_masks(int idx) {
      const PatNode& n = cp.ast.pat[static_cast<std::size_t>(idx)];
      std::uint32_t m = 0;
      if (n.op == PatOp::Filter) {
        m = std::uint32_t{1} << n.var;
      } else {
        m = compute_masks(n.child0);
        if (n.child1 >= 0) m |= compute_masks(n.child1);
      }
      vars_under[static_cast<std::size_t>(idx)] = m;
      return m;
    }

    void collect(int idx) {
      const PatNode& n = cp.ast.pat[static_cast<std::size_t>(idx)];
      if (n.op == PatOp::Every) {
        every_nodes.push_back(idx);
        every_entry_var.push_back(leftmost_var(n.child0));
      }
      if (n.op == PatOp::Within) within_nodes.push_back(idx);
      if (n.child0 >= 0) collect(n.child0);
      if (n.child1 >= 0) collect(n.child1);
    }

    int leftmost_var(int idx) const {
      const PatNode& n = cp.ast.pat[static_cast<std::size_t>(idx)];
      return n.op == PatOp::Filter ? n.var : leftmost_var(n.child0);
    }

    // Variables bindable from a fresh (empty) attempt, treating every-guarded
    // subtrees as spawn-only.
    std::uint32_t fresh_reach(int idx) const {
      const PatNode& n = cp.ast.pat[static_cast<std::size_t>(idx)];
      switch (n.op) {
        case PatOp::Filter: return std::uint32_t{1} << n.var;
        case PatOp::FollowedBy: return fresh_reach(n.child0);
        case PatOp::And:
        case PatOp::Or: return fresh_reach(n.child0) | fresh_reach(n.child1);
        case PatOp::Every: return 0;
        case PatOp::Within: return fresh_reach(n.child0);
      }
      return 0;
    }
  };

  struct Partial {
    std::uint32_t bound_mask = 0;
    std::vector<std::optional<Event>> binds;   // by variable index
    std::vector<std::uint8_t> complete;        // by pattern node index
    std::vector<std::int64_t> complete_ts;     // set at first completion
    std::vector<std::int64_t> deadline;        // by within-node slot, -1 = not started
    std::int64_t min_bound_ts = 0;
    bool dead = false;
  };

  struct SourceState {
    std::vector<Partial> partials;
  };

  struct Listener {
    Plan plan;
    std::map<std::string, SourceState> sources;
    std::set<std::string> fired;
    std::deque<std::pair<std::int64_t, std::string>> fired_by_age;

    explicit Listener(Plan p) : plan(std::move(p)) {}
  };

  std::vector<Listener> listeners_;
  std::int64_t now_ = std::numeric_limits<std::int64_t>::min();

  static Partial make_partial(const Plan& plan) {
    Partial p;
    p.binds.resize(plan.ast().vars.size());
    p.complete.assign(plan.ast().pat.size(), 0);
    p.complete_ts.assign(plan.ast().pat.size(), 0);
    p.deadline.assign(plan.within_nodes.size(), -1);
    return p;
  }

  static bool filter_passes(const FilterPredicate& pred, const Event& e) {
    for (const auto& a : pred.atoms) {
      switch (a.kind) {
        case FilterAtom::Kind::MeasureEq:
          if (!measure_matches(e.measure, a.measure)) return false;
          break;
        case FilterAtom::Kind::KindEq:
          if ((e.kind == EventKind::ApplicationSignal) != a.is_signal) return false;
          break;
        case FilterAtom::Kind::ValueCmp: {
          if (e.kind != EventKind::Measurement || !e.value) return false;
          std::int64_t v = *e.value;
          bool ok = false;
          switch (a.cmp) {
            case CmpOp::Gt: ok = v > a.int_val; break;
            case CmpOp::Lt: ok = v < a.int_val; break;
            case CmpOp::Ge: ok = v >= a.int_val; break;
            case CmpOp::Le: ok = v <= a.int_val; break;
            case CmpOp::Eq: ok = v == a.int_val; break;
            case CmpOp::Ne: ok = v != a.int_val; break;
          }
          if (!ok) return false;
          break;
        }
      }
    }
    return true;
  }

  // Unbound variables an event could fill right now, with the exclusive
  // lower timestamp bound imposed by enclosing followed-by nodes.
  void enabled_vars(const Listener& l, const Partial& p, int idx, std::int64_t min_excl,
                    std::vector<std::pair<int, std::int64_t>>& out) const {
    const PatNode& n = l.plan.ast().pat[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case PatOp::Filter:
        if (!(p.bound_mask & (std::uint32_t{1} << n.var))) out.emplace_back(n.var, min_excl);
        return;
      case PatOp::FollowedBy:
        if (p.complete[static_cast<std::size_t>(n.child0)])
          enabled_vars(l, p, n.child1,
                       std::max(min_excl, p.complete_ts[static_cast<std::size_t>(n.child0)]),
                       out);
        else
          enabled_vars(l, p, n.child0, min_excl, out);
        return;
      case PatOp::And:
      case PatOp::Or:
        // Or branches keep extending after one side completes; late bindings
        // re-candidate the root with more variables bound.
        enabled_vars(l, p, n.child0, min_excl, out);
        enabled_vars(l, p, n.child1, min_excl, out);
        return;
      case PatOp::Every:
        // Fresh starts spawn their own partials; only started instances extend.
        if (p.bound_mask & l.plan.vars_under[static_cast<std::size_t>(n.child0)])
          enabled_vars(l, p, n.child0, min_excl, out);
        return;
      case PatOp::Within:
        enabled_vars(l, p, n.child0, min_excl, out);
        return;
    }
  }

  void bind(Listener& l, Partial& p, int var, const Event& e) {
    if (p.bound_mask == 0) p.min_bound_ts = e.ts_ms;
    p.bound_mask |= std::uint32_t{1} << var;
    p.binds[static_cast<std::size_t>(var)] = e;
    refresh_completion(l, p, l.plan.ast().pat_root, e.ts_ms);
    for (std::size_t w = 0; w < l.plan.within_nodes.size(); ++w) {
      if (p.deadline[w] >= 0) continue;
      const PatNode& wn = l.plan.ast().pat[static_cast<std::size_t>(l.plan.within_nodes[w])];
      if (p.bound_mask & l.plan.vars_under[static_cast<std::size_t>(wn.child0)])
        p.deadline[w] = e.ts_ms + wn.within_ms;
    }
  }

  // Recomputes completion flags bottom-up. A node's completion timestamp is
  // set once, at its first completion, and never moves afterwards (an or
  // branch completing later does not shift it).
  bool refresh_completion(Listener& l, Partial& p, int idx, std::int64_t ts) {
    const PatNode& n = l.plan.ast().pat[static_cast<std::size_t>(idx)];
    bool done = false;
    switch (n.op) {
      case PatOp::Filter:
        done = (p.bound_mask & (std::uint32_t{1} << n.var)) != 0;
        break;
      case PatOp::FollowedBy:
      case PatOp::And: {
        bool c0 = refresh_completion(l, p, n.child0, ts);
        bool c1 = refresh_completion(l, p, n.child1, ts);
        done = c0 && c1;
        break;
      }
      case PatOp::Or: {
        bool c0 = refresh_completion(l, p, n.child0, ts);
        bool c1 = refresh_completion(l, p, n.child1, ts);
        done = c0 || c1;
        break;
      }
      case PatOp::Every:
      case PatOp::Within:
        done = refresh_completion(l, p, n.child0, ts);
        break;
    }
    if (done && !p.complete[static_cast<std::size_t>(idx)]) {
      p.complete[static_cast<std::size_t>(idx)] = 1;
      p.complete_ts[static_cast<std::size_t>(idx)] = ts;
    }
    return p.complete[static_cast<std::size_t>(idx)] != 0;
  }

  bool try_extend(Listener& l, Partial& p, const Event& e) {
    std::vector<std::pair<int, std::int64_t>> enabled;
    enabled_vars(l, p, l.plan.ast().pat_root, std::numeric_limits<std::int64_t>::min(),
                 enabled);
    bool bound_any = false;
    for (auto [var, min_excl] : enabled) {
      if (min_excl != std::numeric_limits<std::int64_t>::min() && e.ts_ms <= min_excl)
        continue;
      if (!filter_passes(l.plan.ast().vars[static_cast<std::size_t>(var)].pred, e)) continue;
      bind(l, p, var, e);
      bound_any = true;
    }
    return bound_any;
  }

  // After a binding: evaluate the candidate if the root completed, fire or
  // retire, and discard partials that can no longer progress.
  void finish_binding(Listener& l, Partial& p, const Event& e, std::vector<Alert>& alerts) {
    bool root_complete = p.complete[static_cast<std::size_t>(l.plan.ast().pat_root)] != 0;
    if (root_complete && where_holds(l, p)) {
      auto bindings = bound_pairs(l, p);
      std::string fp = binding_fingerprint(l.plan.ast().name, bindings);
      if (l.fired.insert(fp).second) {
        l.fired_by_age.emplace_back(e.ts_ms, std::move(fp));
        alerts.push_back(make_alert(l.plan.ast().name, std::move(bindings)));
      }
      p.dead = true;  // a partial fires at most once
      return;
    }
    std::vector<std::pair<int, std::int64_t>> enabled;
    enabled_vars(l, p, l.plan.ast().pat_root, std::numeric_limits<std::int64_t>::min(),
                 enabled);
    if (enabled.empty()) p.dead = true;  // fully bound or stuck, candidate rejected
  }

  std::vector<std::pair<std::string, Event>> bound_pairs(const Listener& l,
                                                         const Partial& p) const {
    std::vector<std::pair<std::string, Event>> out;
    for (std::size_t v = 0; v < p.binds.size(); ++v)
      if (p.binds[v]) out.emplace_back(l.plan.ast().vars[v].name, *p.binds[v]);
    return out;
  }

  void expire(Listener& l, SourceState& ss) {
    const std::int64_t window = l.plan.ast().window_ms;
    for (auto& p : ss.partials) {
      if (p.dead || p.bound_mask == 0) continue;
      if (window > 0 && p.min_bound_ts < now_ - window) {
        p.dead = true;
        continue;
      }
      for (std::size_t w = 0; w < l.plan.within_nodes.size(); ++w) {
        int widx = l.plan.within_nodes[w];
        if (p.deadline[w] >= 0 && now_ > p.deadline[w] &&
            !p.complete[static_cast<std::size_t>(widx)]) {
          p.dead = true;
          break;
        }
      }
    }
  }

  static void sweep(SourceState& ss) {
    std::erase_if(ss.partials, [](const Partial& p) { return p.dead; });
  }

  void prune_fired(Listener& l) {
    if (l.plan.prune_horizon <= 0) return;
    while (!l.fired_by_age.empty() && l.fired_by_age.front().first < now_ - l.plan.prune_horizon) {
      l.fired.erase(l.fired_by_age.front().second);
      l.fired_by_age.pop_front();
    }
  }

  // --- where-clause evaluation -------------------------------------------

  detail::EvalVal eval_expr(const Listener& l, const Partial& p, int idx) const {
    using EV = detail::EvalVal;
    const ExprNode& n = l.plan.ast().where[static_cast<std::size_t>(idx)];
    EV v;
    switch (n.op) {
      case ExprNode::Op::IntLit:
        v.tag = EV::Tag::Int;
        v.i = n.int_val;
        return v;
      case ExprNode::Op::TextLit:
        v.tag = EV::Tag::Text;
        v.s = &n.text;
        return v;
      case ExprNode::Op::BoolLit:
        v.tag = EV::Tag::Bool;
        v.b = n.bool_val;
        return v;
      case ExprNode::Op::Access: {
        const auto& bound = p.binds[static_cast<std::size_t>(n.var)];
        if (!bound) return v;  // Unknown
        switch (n.acc) {
          case Accessor::Value:
            if (!bound->value) return v;
            v.tag = EV::Tag::Int;
            v.i = *bound->value;
            return v;
          case Accessor::Measure:
            v.tag = EV::Tag::Text;
            v.s = &bound->measure;
            return v;
          case Accessor::Kind:
            v.tag = EV::Tag::Bool;
            v.b = bound->kind == EventKind::ApplicationSignal;
            return v;
        }
        return v;
      }
      case ExprNode::Op::Add:
      case ExprNode::Op::Sub: {
        EV a = eval_expr(l, p, n.a);
        EV b = eval_expr(l, p, n.b);
        if (a.tag != EV::Tag::Int || b.tag != EV::Tag::Int) return v;  // Unknown
        v.tag = EV::Tag::Int;
        v.i = n.op == ExprNode::Op::Add ? a.i + b.i : a.i - b.i;
        // Counter deltas are wrap-corrected for one 32-bit wrap.
        if (n.op == ExprNode::Op::Sub && !n.counter_measure.empty() && v.i < 0)
          v.i += kCounterModulus;
        return v;
      }
      case ExprNode::Op::Cmp: {
        EV a = eval_expr(l, p, n.a);
        EV b = eval_expr(l, p, n.b);
        v.tag = EV::Tag::Bool;
        v.b = false;
        if (a.tag == EV::Tag::Unknown || b.tag == EV::Tag::Unknown) return v;
        if (a.tag == EV::Tag::Int && b.tag == EV::Tag::Int) {
          switch (n.cmp) {
            case CmpOp::Gt: v.b = a.i > b.i; break;
            case CmpOp::Lt: v.b = a.i < b.i; break;
            case CmpOp::Ge: v.b = a.i >= b.i; break;
            case CmpOp::Le: v.b = a.i <= b.i; break;
            case CmpOp::Eq: v.b = a.i == b.i; break;
            case CmpOp::Ne: v.b = a.i != b.i; break;
          }
          return v;
        }
        if (a.tag == EV::Tag::Text && b.tag == EV::Tag::Text) {
          bool eq = text_cmp_equal(l, n, a, b);
          v.b = n.cmp == CmpOp::Ne ? !eq : eq;
          return v;
        }
        if (a.tag == EV::Tag::Bool && b.tag == EV::Tag::Bool) {
          v.b = n.cmp == CmpOp::Ne ? a.b != b.b : a.b == b.b;
          return v;
        }
        return v;
      }
      case ExprNode::Op::And:
      case ExprNode::Op::Or: {
        bool a = to_bool(eval_expr(l, p, n.a));
        bool b = to_bool(eval_expr(l, p, n.b));
        v.tag = EV::Tag::Bool;
        v.b = n.op == ExprNode::Op::And ? (a && b) : (a || b);
        return v;
      }
    }
    return v;
  }

  // measure(v) compared to a literal matches base names, so a literal covers
  // per-row instances.
  bool text_cmp_equal(const Listener& l, const ExprNode& n, const detail::EvalVal& a,
                      const detail::EvalVal& b) const {
    const ExprNode& na = l.plan.ast().where[static_cast<std::size_t>(n.a)];
    const ExprNode& nb = l.plan.ast().where[static_cast<std::size_t>(n.b)];
    auto is_measure_access = [](const ExprNode& e) {
      return e.op == ExprNode::Op::Access && e.acc == Accessor::Measure;
    };
    if (is_measure_access(na) && nb.op == ExprNode::Op::TextLit)
      return measure_matches(*a.s, *b.s);
    if (is_measure_access(nb) && na.op == ExprNode::Op::TextLit)
      return measure_matches(*b.s, *a.s);
    return *a.s == *b.s;
  }

  static bool to_bool(const detail::EvalVal& v) {
    return v.tag == detail::EvalVal::Tag::Bool && v.b;
  }

  bool where_holds(const Listener& l, const Partial& p) const {
    if (l.plan.ast().where_root < 0) return true;
    return to_bool(eval_expr(l, p, l.plan.ast().where_root));
  }
};

}  // namespace snmpcep
