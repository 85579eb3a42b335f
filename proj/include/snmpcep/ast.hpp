#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace snmpcep {

// Pattern expression operators, in precedence order where it matters:
// `or` binds loosest, then `and`, then `->`; `every` prefixes a term.
enum class PatOp { Filter, FollowedBy, And, Or, Every, Within };

enum class Accessor { Value, Measure, Kind };

enum class CmpOp { Gt, Lt, Ge, Le, Eq, Ne };

inline const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Gt: return ">";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

// One conjunct of a per-event filter.
struct FilterAtom {
  enum class Kind { MeasureEq, KindEq, ValueCmp };
  Kind kind = Kind::MeasureEq;
  std::string measure;    // MeasureEq
  bool is_signal = false; // KindEq: true ~ getAdapterFlag()=true
  CmpOp cmp = CmpOp::Eq;  // ValueCmp
  std::int64_t int_val = 0;

  friend bool operator==(const FilterAtom&, const FilterAtom&) = default;
};

struct FilterPredicate {
  std::vector<FilterAtom> atoms;  // conjunction, at least one

  friend bool operator==(const FilterPredicate&, const FilterPredicate&) = default;
};

struct VarDecl {
  std::string name;
  FilterPredicate pred;

  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

// Pattern tree node; children refer into PatternAst::pat.
struct PatNode {
  PatOp op = PatOp::Filter;
  int child0 = -1;
  int child1 = -1;
  int var = -1;                 // Filter: index into vars
  std::int64_t within_ms = 0;   // Within
};

// Where-clause expression node; children refer into PatternAst::where.
struct ExprNode {
  enum class Op { IntLit, TextLit, BoolLit, Access, Add, Sub, And, Or, Cmp };
  Op op = Op::IntLit;
  int a = -1;
  int b = -1;
  std::int64_t int_val = 0;
  std::string text;
  bool bool_val = false;
  int var = -1;                   // Access
  Accessor acc = Accessor::Value; // Access
  CmpOp cmp = CmpOp::Eq;          // Cmp
  std::string counter_measure;    // set by the validator on counter-delta Sub nodes
};

struct PatternAst {
  std::string name;
  std::vector<VarDecl> vars;   // declaration order
  std::vector<PatNode> pat;
  int pat_root = -1;
  std::int64_t window_ms = 0;  // win:time, 0 = none
  std::vector<ExprNode> where;
  int where_root = -1;         // -1 = no where clause
};

namespace detail {

inline bool expr_equal(const PatternAst& x, int a, const PatternAst& y, int b) {
  if (a < 0 || b < 0) return a == b;
  const ExprNode& na = x.where[static_cast<std::size_t>(a)];
  const ExprNode& nb = y.where[static_cast<std::size_t>(b)];
  if (na.op != nb.op) return false;
  switch (na.op) {
    case ExprNode::Op::IntLit: return na.int_val == nb.int_val;
    case ExprNode::Op::TextLit: return na.text == nb.text;
    case ExprNode::Op::BoolLit: return na.bool_val == nb.bool_val;
    case ExprNode::Op::Access:
      return na.acc == nb.acc && x.vars[static_cast<std::size_t>(na.var)].name ==
                                     y.vars[static_cast<std::size_t>(nb.var)].name;
    case ExprNode::Op::Cmp:
      if (na.cmp != nb.cmp) return false;
      [[fallthrough]];
    default:
      return expr_equal(x, na.a, y, nb.a) && expr_equal(x, na.b, y, nb.b);
  }
}

inline bool pat_equal(const PatternAst& x, int a, const PatternAst& y, int b) {
  if (a < 0 || b < 0) return a == b;
  const PatNode& na = x.pat[static_cast<std::size_t>(a)];
  const PatNode& nb = y.pat[static_cast<std::size_t>(b)];
  if (na.op != nb.op) return false;
  if (na.op == PatOp::Filter)
    return x.vars[static_cast<std::size_t>(na.var)] == y.vars[static_cast<std::size_t>(nb.var)];
  if (na.op == PatOp::Within && na.within_ms != nb.within_ms) return false;
  return pat_equal(x, na.child0, y, nb.child0) && pat_equal(x, na.child1, y, nb.child1);
}

}  // namespace detail

// Structural equality: same shape, variable names, predicates, durations and
// where clause; node arena layout is irrelevant.
inline bool pattern_equal(const PatternAst& a, const PatternAst& b) {
  return a.name == b.name && a.window_ms == b.window_ms &&
         detail::pat_equal(a, a.pat_root, b, b.pat_root) &&
         detail::expr_equal(a, a.where_root, b, b.where_root);
}

}  // namespace snmpcep
