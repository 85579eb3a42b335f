#pragma once

#include <string>

#include "snmpcep/ast.hpp"

namespace snmpcep {

namespace detail {

// Precedence for minimal-parentheses printing.
inline int pat_prec(PatOp op) {
  switch (op) {
    case PatOp::Or: return 1;
    case PatOp::And: return 2;
    case PatOp::FollowedBy: return 3;
    case PatOp::Every:
    case PatOp::Within: return 4;
    case PatOp::Filter: return 5;
  }
  return 5;
}

inline std::string format_filter(const PatternAst& ast, int var_idx) {
  const VarDecl& v = ast.vars[static_cast<std::size_t>(var_idx)];
  std::string s = v.name + "=Event(";
  bool first = true;
  for (const auto& a : v.pred.atoms) {
    if (!first) s += " and ";
    first = false;
    switch (a.kind) {
      case FilterAtom::Kind::MeasureEq:
        s += v.name + ".getMeasure()='" + a.measure + "'";
        break;
      case FilterAtom::Kind::KindEq:
        s += v.name + ".getAdapterFlag()=" + (a.is_signal ? "true" : "false");
        break;
      case FilterAtom::Kind::ValueCmp:
        s += v.name + ".getSNMPvalue()" + cmp_text(a.cmp) + std::to_string(a.int_val);
        break;
    }
  }
  return s + ")";
}

inline std::string format_pat(const PatternAst& ast, int idx, int parent_prec) {
  const PatNode& n = ast.pat[static_cast<std::size_t>(idx)];
  std::string s;
  switch (n.op) {
    case PatOp::Filter:
      return format_filter(ast, n.var);
    case PatOp::Every: {
      const PatNode& c = ast.pat[static_cast<std::size_t>(n.child0)];
      if (c.op == PatOp::Filter) return "every " + format_pat(ast, n.child0, 5);
      return "every (" + format_pat(ast, n.child0, 0) + ")";
    }
    case PatOp::Within: {
      const PatNode& c = ast.pat[static_cast<std::size_t>(n.child0)];
      std::string guard =
          " where timer:within(" + std::to_string(n.within_ms / 1000) + " sec)";
      if (c.op == PatOp::Every) {
        // prints back as `every (x) where timer:within(..)`; reparsing hoists
        // the guard above the every again.
        int gc = c.child0;
        return "every (" + format_pat(ast, gc, 0) + ")" + guard;
      }
      return "(" + format_pat(ast, n.child0, 0) + ")" + guard;
    }
    case PatOp::FollowedBy:
      s = format_pat(ast, n.child0, 3) + " -> " + format_pat(ast, n.child1, 4);
      return pat_prec(n.op) < parent_prec ? "(" + s + ")" : s;
    case PatOp::And:
      s = format_pat(ast, n.child0, 2) + " and " + format_pat(ast, n.child1, 3);
      return pat_prec(n.op) < parent_prec ? "(" + s + ")" : s;
    case PatOp::Or:
      s = format_pat(ast, n.child0, 1) + " or " + format_pat(ast, n.child1, 2);
      return pat_prec(n.op) < parent_prec ? "(" + s + ")" : s;
  }
  return s;
}

inline int expr_prec(ExprNode::Op op) {
  switch (op) {
    case ExprNode::Op::Or: return 1;
    case ExprNode::Op::And: return 2;
    case ExprNode::Op::Cmp: return 3;
    case ExprNode::Op::Add:
    case ExprNode::Op::Sub: return 4;
    default: return 5;
  }
}

inline std::string format_expr(const PatternAst& ast, int idx, int parent_prec) {
  const ExprNode& n = ast.where[static_cast<std::size_t>(idx)];
  std::string s;
  switch (n.op) {
    case ExprNode::Op::IntLit: return std::to_string(n.int_val);
    case ExprNode::Op::TextLit: return "'" + n.text + "'";
    case ExprNode::Op::BoolLit: return n.bool_val ? "true" : "false";
    case ExprNode::Op::Access: {
      const std::string& v = ast.vars[static_cast<std::size_t>(n.var)].name;
      switch (n.acc) {
        case Accessor::Value: return v + ".getSNMPvalue()";
        case Accessor::Measure: return v + ".getMeasure()";
        case Accessor::Kind: return v + ".getAdapterFlag()";
      }
      return v;
    }
    case ExprNode::Op::Add:
      s = format_expr(ast, n.a, 4) + " + " + format_expr(ast, n.b, 5);
      break;
    case ExprNode::Op::Sub:
      s = format_expr(ast, n.a, 4) + " - " + format_expr(ast, n.b, 5);
      break;
    case ExprNode::Op::Cmp:
      s = format_expr(ast, n.a, 4) + " " + cmp_text(n.cmp) + " " + format_expr(ast, n.b, 4);
      break;
    case ExprNode::Op::And:
      s = format_expr(ast, n.a, 2) + " and " + format_expr(ast, n.b, 3);
      break;
    case ExprNode::Op::Or:
      s = format_expr(ast, n.a, 1) + " or " + format_expr(ast, n.b, 2);
      break;
  }
  return expr_prec(n.op) < parent_prec ? "(" + s + ")" : s;
}

}  // namespace detail

// Canonical single-line source text; parse_pattern(format_pattern(a)) is
// structurally identical to a.
inline std::string format_pattern(const PatternAst& ast) {
  std::string s = "select * from pattern [" + detail::format_pat(ast, ast.pat_root, 0) + "]";
  if (ast.window_ms > 0)
    s += " win:time(" + std::to_string(ast.window_ms / 1000) + " sec)";
  if (ast.where_root >= 0) s += " where " + detail::format_expr(ast, ast.where_root, 0);
  return s;
}

}  // namespace snmpcep
