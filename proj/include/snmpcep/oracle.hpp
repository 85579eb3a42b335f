#pragma once

#include <algorithm>
#include <cstdint>
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

// Brute-force reference matcher. Enumerates match attempts (the root attempt
// plus one per event that can start an `every` instance) and evaluates each
// declaratively against the normative semantics: first-match followed-by,
// per-attempt within deadlines, the sliding stream window, three-valued
// where evaluation and fingerprint dedup. Shares no matching code with the
// incremental engine.
namespace oracle_detail {

struct OVal {
  enum class Kind { None, Int, Text, Bool } kind = Kind::None;
  std::int64_t i = 0;
  std::string t;
  bool b = false;
};

struct Scan {
  const CheckedPattern& cp;
  const Trace& trace;
  const std::vector<int>& src_events;  // indices of this attempt's source
  std::map<int, int> bind;             // var index → trace index

  const PatternAst& ast() const { return cp.ast; }

  bool bound(int var) const { return bind.count(var) != 0; }

  bool node_complete(int idx) const {
    const PatNode& n = ast().pat[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case PatOp::Filter: return bound(n.var);
      case PatOp::FollowedBy:
      case PatOp::And: return node_complete(n.child0) && node_complete(n.child1);
      case PatOp::Or: return node_complete(n.child0) || node_complete(n.child1);
      case PatOp::Every:
      case PatOp::Within: return node_complete(n.child0);
    }
    return false;
  }

  // Trace index of the event whose arrival first completed the node.
  int completion_index(int idx) const {
    const PatNode& n = ast().pat[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case PatOp::Filter: return bind.at(n.var);
      case PatOp::FollowedBy:
      case PatOp::And:
        return std::max(completion_index(n.child0), completion_index(n.child1));
      case PatOp::Or: {
        bool c0 = node_complete(n.child0);
        bool c1 = node_complete(n.child1);
        if (c0 && c1)
          return std::min(completion_index(n.child0), completion_index(n.child1));
        return completion_index(c0 ? n.child0 : n.child1);
      }
      case PatOp::Every:
      case PatOp::Within: return completion_index(n.child0);
    }
    return -1;
  }

  bool subtree_has_binding(int idx) const {
    const PatNode& n = ast().pat[static_cast<std::size_t>(idx)];
    if (n.op == PatOp::Filter) return bound(n.var);
    if (n.child0 >= 0 && subtree_has_binding(n.child0)) return true;
    return n.child1 >= 0 && subtree_has_binding(n.child1);
  }

  std::int64_t min_bound_ts_under(int idx) const {
    const PatNode& n = ast().pat[static_cast<std::size_t>(idx)];
    if (n.op == PatOp::Filter)
      return bound(n.var) ? trace[static_cast<std::size_t>(bind.at(n.var))].ts_ms
                          : std::numeric_limits<std::int64_t>::max();
    std::int64_t m = std::numeric_limits<std::int64_t>::max();
    if (n.child0 >= 0) m = std::min(m, min_bound_ts_under(n.child0));
    if (n.child1 >= 0) m = std::min(m, min_bound_ts_under(n.child1));
    return m;
  }

  // (var, exclusive lower ts bound) pairs bindable right now.
  void enabled(int idx, std::optional<std::int64_t> min_excl,
               std::vector<std::pair<int, std::optional<std::int64_t>>>& out) const {
    const PatNode& n = ast().pat[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case PatOp::Filter:
        if (!bound(n.var)) out.emplace_back(n.var, min_excl);
        return;
      case PatOp::FollowedBy:
        if (node_complete(n.child0)) {
          std::int64_t t = trace[static_cast<std::size_t>(completion_index(n.child0))].ts_ms;
          std::optional<std::int64_t> lo = min_excl ? std::max(*min_excl, t) : t;
          enabled(n.child1, lo, out);
        } else {
          enabled(n.child0, min_excl, out);
        }
        return;
      case PatOp::And:
      case PatOp::Or:
        enabled(n.child0, min_excl, out);
        enabled(n.child1, min_excl, out);
        return;
      case PatOp::Every:
        if (subtree_has_binding(n.child0)) enabled(n.child0, min_excl, out);
        return;
      case PatOp::Within:
        enabled(n.child0, min_excl, out);
        return;
    }
  }

  static bool filter_sat(const FilterPredicate& pred, const Event& e) {
    for (const auto& a : pred.atoms) {
      if (a.kind == FilterAtom::Kind::MeasureEq) {
        if (!measure_matches(e.measure, a.measure)) return false;
      } else if (a.kind == FilterAtom::Kind::KindEq) {
        if (a.is_signal != (e.kind == EventKind::ApplicationSignal)) return false;
      } else {
        if (e.kind != EventKind::Measurement || !e.value) return false;
        std::int64_t v = *e.value;
        switch (a.cmp) {
          case CmpOp::Gt: if (!(v > a.int_val)) return false; break;
          case CmpOp::Lt: if (!(v < a.int_val)) return false; break;
          case CmpOp::Ge: if (!(v >= a.int_val)) return false; break;
          case CmpOp::Le: if (!(v <= a.int_val)) return false; break;
          case CmpOp::Eq: if (!(v == a.int_val)) return false; break;
          case CmpOp::Ne: if (!(v != a.int_val)) return false; break;
        }
      }
    }
    return true;
  }

  OVal eval(int idx) const {
    const ExprNode& n = ast().where[static_cast<std::size_t>(idx)];
    OVal r;
    switch (n.op) {
      case ExprNode::Op::IntLit: return {OVal::Kind::Int, n.int_val, "", false};
      case ExprNode::Op::TextLit: return {OVal::Kind::Text, 0, n.text, false};
      case ExprNode::Op::BoolLit: return {OVal::Kind::Bool, 0, "", n.bool_val};
      case ExprNode::Op::Access: {
        if (!bound(n.var)) return r;
        const Event& e = trace[static_cast<std::size_t>(bind.at(n.var))];
        if (n.acc == Accessor::Value) {
          if (!e.value) return r;
          return {OVal::Kind::Int, *e.value, "", false};
        }
        if (n.acc == Accessor::Measure) return {OVal::Kind::Text, 0, e.measure, false};
        return {OVal::Kind::Bool, 0, "", e.kind == EventKind::ApplicationSignal};
      }
      case ExprNode::Op::Add:
      case ExprNode::Op::Sub: {
        OVal a = eval(n.a);
        OVal b = eval(n.b);
        if (a.kind != OVal::Kind::Int || b.kind != OVal::Kind::Int) return r;
        std::int64_t x = n.op == ExprNode::Op::Add ? a.i + b.i : a.i - b.i;
        if (n.op == ExprNode::Op::Sub && !n.counter_measure.empty() && x < 0)
          x += kCounterModulus;
        return {OVal::Kind::Int, x, "", false};
      }
      case ExprNode::Op::Cmp: {
        OVal a = eval(n.a);
        OVal b = eval(n.b);
        r.kind = OVal::Kind::Bool;
        r.b = false;
        if (a.kind == OVal::Kind::None || b.kind == OVal::Kind::None) return r;
        if (a.kind == OVal::Kind::Int && b.kind == OVal::Kind::Int) {
          switch (n.cmp) {
            case CmpOp::Gt: r.b = a.i > b.i; break;
            case CmpOp::Lt: r.b = a.i < b.i; break;
            case CmpOp::Ge: r.b = a.i >= b.i; break;
            case CmpOp::Le: r.b = a.i <= b.i; break;
            case CmpOp::Eq: r.b = a.i == b.i; break;
            case CmpOp::Ne: r.b = a.i != b.i; break;
          }
        } else if (a.kind == OVal::Kind::Text && b.kind == OVal::Kind::Text) {
          const ExprNode& na = ast().where[static_cast<std::size_t>(n.a)];
          const ExprNode& nb = ast().where[static_cast<std::size_t>(n.b)];
          bool eq;
          if (na.op == ExprNode::Op::Access && na.acc == Accessor::Measure &&
              nb.op == ExprNode::Op::TextLit)
            eq = measure_matches(a.t, b.t);
          else if (nb.op == ExprNode::Op::Access && nb.acc == Accessor::Measure &&
                   na.op == ExprNode::Op::TextLit)
            eq = measure_matches(b.t, a.t);
          else
            eq = a.t == b.t;
          r.b = n.cmp == CmpOp::Ne ? !eq : eq;
        } else if (a.kind == OVal::Kind::Bool && b.kind == OVal::Kind::Bool) {
          r.b = n.cmp == CmpOp::Ne ? a.b != b.b : a.b == b.b;
        }
        return r;
      }
      case ExprNode::Op::And:
      case ExprNode::Op::Or: {
        bool a = truthy(eval(n.a));
        bool b = truthy(eval(n.b));
        return {OVal::Kind::Bool, 0, "", n.op == ExprNode::Op::And ? a && b : a || b};
      }
    }
    return r;
  }

  static bool truthy(const OVal& v) { return v.kind == OVal::Kind::Bool && v.b; }

  bool where_sat() const {
    if (ast().where_root < 0) return true;
    return truthy(eval(ast().where_root));
  }

  std::vector<std::pair<std::string, Event>> bound_pairs() const {
    std::vector<std::pair<std::string, Event>> out;
    for (std::size_t v = 0; v < ast().vars.size(); ++v)
      if (bound(static_cast<int>(v)))
        out.emplace_back(ast().vars[v].name,
                         trace[static_cast<std::size_t>(bind.at(static_cast<int>(v)))]);
    return out;
  }

  // Drives one attempt to its unique outcome. Returns the trace index of the
  // completing event if the attempt reached a satisfied candidate.
  std::optional<int> run(int seed_event, int seed_var) {
    std::vector<int> within_nodes;
    for (std::size_t i = 0; i < ast().pat.size(); ++i)
      if (ast().pat[i].op == PatOp::Within) within_nodes.push_back(static_cast<int>(i));

    auto evaluate_after_binding = [&](int at_idx, bool& dead) -> std::optional<int> {
      if (node_complete(ast().pat_root) && where_sat()) return at_idx;
      std::vector<std::pair<int, std::optional<std::int64_t>>> en;
      enabled(ast().pat_root, std::nullopt, en);
      if (en.empty()) dead = true;
      return std::nullopt;
    };

    bool dead = false;
    if (seed_var >= 0) {
      bind[seed_var] = seed_event;
      if (auto fired = evaluate_after_binding(seed_event, dead)) return fired;
      if (dead) return std::nullopt;
    }
    for (int idx : src_events) {
      if (idx <= seed_event) continue;
      const Event& e = trace[static_cast<std::size_t>(idx)];
      if (!bind.empty()) {
        if (ast().window_ms > 0) {
          std::int64_t oldest = min_bound_ts_under(ast().pat_root);
          if (oldest < e.ts_ms - ast().window_ms) return std::nullopt;
        }
        for (int w : within_nodes) {
          const PatNode& wn = ast().pat[static_cast<std::size_t>(w)];
          if (!subtree_has_binding(wn.child0) || node_complete(w)) continue;
          if (e.ts_ms > min_bound_ts_under(wn.child0) + wn.within_ms) return std::nullopt;
        }
      }
      std::vector<std::pair<int, std::optional<std::int64_t>>> en;
      enabled(ast().pat_root, std::nullopt, en);
      bool bound_any = false;
      for (auto& [var, min_excl] : en) {
        if (min_excl && e.ts_ms <= *min_excl) continue;
        if (!filter_sat(ast().vars[static_cast<std::size_t>(var)].pred, e)) continue;
        bind[var] = idx;
        bound_any = true;
      }
      if (bound_any) {
        if (auto fired = evaluate_after_binding(idx, dead)) return fired;
        if (dead) return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

// Pre-order collection of (every-node order, entry variable).
inline void collect_every_entries(const PatternAst& ast, int idx,
                                  std::vector<std::pair<int, int>>& out) {
  const PatNode& n = ast.pat[static_cast<std::size_t>(idx)];
  if (n.op == PatOp::Every) {
    int ci = n.child0;
    while (ast.pat[static_cast<std::size_t>(ci)].op != PatOp::Filter)
      ci = ast.pat[static_cast<std::size_t>(ci)].child0;
    out.emplace_back(static_cast<int>(out.size()), ast.pat[static_cast<std::size_t>(ci)].var);
  }
  if (n.child0 >= 0) collect_every_entries(ast, n.child0, out);
  if (n.child1 >= 0) collect_every_entries(ast, n.child1, out);
}

}  // namespace oracle_detail

inline std::vector<Alert> oracle_match(const CheckedPattern& cp, const Trace& trace) {
  if (trace.size() > 10000)
    throw ValueError("oracle_match: trace too long (" + std::to_string(trace.size()) +
                     " events, limit 10000)");
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].ts_ms < trace[i - 1].ts_ms)
      throw ValueError("oracle_match: trace not in timestamp order");

  // Events per source, in order of first appearance.
  std::vector<std::pair<std::string, std::vector<int>>> by_source;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    auto it = std::find_if(by_source.begin(), by_source.end(),
                           [&](const auto& p) { return p.first == trace[i].source; });
    if (it == by_source.end()) {
      by_source.push_back({trace[i].source, {}});
      it = std::prev(by_source.end());
    }
    it->second.push_back(static_cast<int>(i));
  }

  // Entry variable of each every node, in pre-order.
  std::vector<std::pair<int, int>> entries;  // (order, var)
  oracle_detail::collect_every_entries(cp.ast, cp.ast.pat_root, entries);

  struct Fire {
    int at_idx;
    long creation_key;  // -1 root attempt, else seed event index
    int node_order;
    Alert alert;
  };
  std::vector<Fire> fires;

  for (auto& [source, indices] : by_source) {
    // The root attempt: a single fresh instance per source.
    {
      oracle_detail::Scan scan{cp, trace, indices, {}};
      if (auto at = scan.run(-1, -1))
        fires.push_back({*at, -1, -1, make_alert(cp.ast.name, scan.bound_pairs())});
    }
    // Spawned attempts: one per event matching an every entry filter.
    for (int idx : indices) {
      const Event& e = trace[static_cast<std::size_t>(idx)];
      for (const auto& [order, var] : entries) {
        if (!oracle_detail::Scan::filter_sat(cp.ast.vars[static_cast<std::size_t>(var)].pred,
                                             e))
          continue;
        oracle_detail::Scan scan{cp, trace, indices, {}};
        if (auto at = scan.run(idx, var))
          fires.push_back({*at, idx, order, make_alert(cp.ast.name, scan.bound_pairs())});
      }
    }
  }

  std::sort(fires.begin(), fires.end(), [](const Fire& a, const Fire& b) {
    if (a.at_idx != b.at_idx) return a.at_idx < b.at_idx;
    if (a.creation_key != b.creation_key) return a.creation_key < b.creation_key;
    return a.node_order < b.node_order;
  });

  std::vector<Alert> out;
  std::set<std::string> seen;
  for (auto& f : fires) {
    std::string fp = binding_fingerprint(f.alert.pattern_name, f.alert.bindings);
    if (seen.insert(fp).second) out.push_back(std::move(f.alert));
  }
  return out;
}

}  // namespace snmpcep
