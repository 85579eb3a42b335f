#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snmpcep/ast.hpp"
#include "snmpcep/errors.hpp"
#include "snmpcep/event.hpp"

namespace snmpcep {

// A validated pattern, annotated with resolved measure semantics and ready
// for registration with the correlator.
struct CheckedPattern {
  PatternAst ast;
  // Per variable, derived from its filter: the first measure literal (base
  // name), and whether the filter pins the event kind to signal.
  std::vector<std::optional<std::string>> var_measure;
  std::vector<std::optional<bool>> var_is_signal;
};

namespace detail {

enum class ExprType { Int, Text, Bool };

class Validator {
 public:
  Validator(PatternAst ast, const MeasureRegistry& registry)
      : registry_(registry) {
    checked_.ast = std::move(ast);
  }

  CheckedPattern run() {
    derive_var_info();
    check_pattern_shape(checked_.ast.pat_root);
    check_filters();
    if (checked_.ast.where_root >= 0) {
      ExprType t = check_expr(checked_.ast.where_root);
      if (t != ExprType::Bool)
        throw ValidateError("where clause of '" + checked_.ast.name +
                            "' must be a boolean expression");
    }
    return std::move(checked_);
  }

 private:
  const MeasureRegistry& registry_;
  CheckedPattern checked_;

  PatternAst& ast() { return checked_.ast; }

  void derive_var_info() {
    for (const auto& v : ast().vars) {
      std::optional<std::string> measure;
      std::optional<bool> is_signal;
      for (const auto& a : v.pred.atoms) {
        if (a.kind == FilterAtom::Kind::MeasureEq && !measure)
          measure = std::string(base_measure(a.measure));
        if (a.kind == FilterAtom::Kind::KindEq) is_signal = a.is_signal;
      }
      checked_.var_measure.push_back(std::move(measure));
      checked_.var_is_signal.push_back(is_signal);
    }
  }

  void require_known_measure(const std::string& literal, int var) {
    // Signal-filtered variables name application signals, which are not
    // SNMP measures and bypass the registry.
    if (checked_.var_is_signal[static_cast<std::size_t>(var)] == true) return;
    if (!registry_.contains(literal))
      throw ValidateError("unknown measure '" + literal + "' in pattern '" +
                          ast().name + "'");
  }

  void check_filters() {
    for (std::size_t i = 0; i < ast().vars.size(); ++i) {
      for (const auto& a : ast().vars[i].pred.atoms)
        if (a.kind == FilterAtom::Kind::MeasureEq)
          require_known_measure(a.measure, static_cast<int>(i));
    }
  }

  bool contains_every(int idx) const {
    const PatNode& n = checked_.ast.pat[static_cast<std::size_t>(idx)];
    if (n.op == PatOp::Every) return true;
    if (n.child0 >= 0 && contains_every(n.child0)) return true;
    return n.child1 >= 0 && contains_every(n.child1);
  }

  // `every` restarts a match attempt, so it only makes sense at positions
  // that can start one; a followed-by tail cannot.
  void check_pattern_shape(int idx) {
    const PatNode& n = checked_.ast.pat[static_cast<std::size_t>(idx)];
    if (n.op == PatOp::FollowedBy && contains_every(n.child1))
      throw ValidateError("'every' inside a followed-by tail is not supported (pattern '" +
                          checked_.ast.name + "')");
    if (n.child0 >= 0) check_pattern_shape(n.child0);
    if (n.child1 >= 0) check_pattern_shape(n.child1);
  }

  ExprType check_expr(int idx) {
    ExprNode& n = ast().where[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case ExprNode::Op::IntLit: return ExprType::Int;
      case ExprNode::Op::TextLit: return ExprType::Text;
      case ExprNode::Op::BoolLit: return ExprType::Bool;
      case ExprNode::Op::Access:
        switch (n.acc) {
          case Accessor::Value: return ExprType::Int;
          case Accessor::Measure: return ExprType::Text;
          case Accessor::Kind: return ExprType::Bool;
        }
        return ExprType::Int;
      case ExprNode::Op::Add:
      case ExprNode::Op::Sub: {
        ExprType ta = check_expr(n.a);
        ExprType tb = check_expr(n.b);
        if (ta != ExprType::Int || tb != ExprType::Int)
          throw ValidateError("arithmetic over non-numeric terms in pattern '" +
                              ast().name + "'");
        if (n.op == ExprNode::Op::Sub) annotate_delta(idx);
        return ExprType::Int;
      }
      case ExprNode::Op::Cmp: {
        ExprType ta = check_expr(n.a);
        ExprType tb = check_expr(n.b);
        const ExprNode& m = ast().where[static_cast<std::size_t>(idx)];
        if (ta != tb)
          throw ValidateError("comparison between different types in pattern '" +
                              ast().name + "'");
        if (ta != ExprType::Int && m.cmp != CmpOp::Eq && m.cmp != CmpOp::Ne)
          throw ValidateError("ordered comparison over non-numeric terms in pattern '" +
                              ast().name + "'");
        check_measure_literal_cmp(idx);
        return ExprType::Bool;
      }
      case ExprNode::Op::And:
      case ExprNode::Op::Or: {
        ExprType ta = check_expr(n.a);
        ExprType tb = check_expr(n.b);
        if (ta != ExprType::Bool || tb != ExprType::Bool)
          throw ValidateError("boolean connective over non-boolean terms in pattern '" +
                              ast().name + "'");
        return ExprType::Bool;
      }
    }
    return ExprType::Bool;
  }

  // measure(v) = 'literal' comparisons must name registered measures unless
  // the variable is filtered to application signals.
  void check_measure_literal_cmp(int idx) {
    const ExprNode& n = ast().where[static_cast<std::size_t>(idx)];
    const ExprNode& a = ast().where[static_cast<std::size_t>(n.a)];
    const ExprNode& b = ast().where[static_cast<std::size_t>(n.b)];
    auto check_pair = [&](const ExprNode& acc, const ExprNode& lit) {
      if (acc.op == ExprNode::Op::Access && acc.acc == Accessor::Measure &&
          lit.op == ExprNode::Op::TextLit)
        require_known_measure(std::string(base_measure(lit.text)), acc.var);
    };
    check_pair(a, b);
    check_pair(b, a);
  }

  // value(x) - value(y) is a counter delta: both variables must be filtered
  // to the same Counter measure. Annotates the node for wrap-corrected
  // evaluation.
  void annotate_delta(int idx) {
    ExprNode& n = ast().where[static_cast<std::size_t>(idx)];
    const ExprNode& a = ast().where[static_cast<std::size_t>(n.a)];
    const ExprNode& b = ast().where[static_cast<std::size_t>(n.b)];
    if (a.op != ExprNode::Op::Access || a.acc != Accessor::Value) return;
    if (b.op != ExprNode::Op::Access || b.acc != Accessor::Value) return;
    const auto& ma = checked_.var_measure[static_cast<std::size_t>(a.var)];
    const auto& mb = checked_.var_measure[static_cast<std::size_t>(b.var)];
    auto var_name = [&](int v) { return ast().vars[static_cast<std::size_t>(v)].name; };
    if (!ma || !mb)
      throw ValidateError("delta in pattern '" + ast().name + "' over variable '" +
                          var_name(!ma ? a.var : b.var) +
                          "' with no measure filter");
    if (*ma != *mb)
      throw ValidateError("delta in pattern '" + ast().name + "' over mismatched measures '" +
                          *ma + "' and '" + *mb + "'");
    auto sem = registry_.semantics(*ma);
    if (!sem)
      throw ValidateError("unknown measure '" + *ma + "' in pattern '" + ast().name + "'");
    if (*sem != MeasureSemantics::Counter)
      throw ValidateError("delta in pattern '" + ast().name + "' over non-counter measure '" +
                          *ma + "'");
    n.counter_measure = *ma;
  }
};

}  // namespace detail

inline CheckedPattern validate(PatternAst ast, const MeasureRegistry& registry) {
  return detail::Validator(std::move(ast), registry).run();
}

}  // namespace snmpcep
