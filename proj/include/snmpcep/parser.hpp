#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snmpcep/ast.hpp"
#include "snmpcep/lexer.hpp"

namespace snmpcep {

namespace detail {

class PatternParser {
 public:
  PatternParser(std::string name, std::string_view src) : src_(src) {
    ast_.name = std::move(name);
    tokens_ = tokenize(src);
    // End sentinel for lookahead.
    int eline = tokens_.empty() ? 1 : tokens_.back().line;
    tokens_.push_back({Token::Kind::End, "", 0, eline, 0});
  }

  PatternAst parse() {
    expect_keyword("select");
    if (at_keyword("istream")) next();  // normalized away: all matches are insert-stream
    expect_punct("*");
    expect_keyword("from");
    expect_keyword("pattern");
    expect_punct("[");
    ast_.pat_root = parse_patexpr();
    expect_punct("]");
    if (at_keyword("win:time")) {
      next();
      ast_.window_ms = parse_duration("win:time");
    }
    if (at_keyword("where")) {
      next();
      ast_.where_root = parse_expr();
    }
    if (!at_end()) fail("expected end of pattern");
    return std::move(ast_);
  }

 private:
  std::string_view src_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  PatternAst ast_;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool at_keyword(std::string_view kw) const {
    return peek().kind == Token::Kind::Keyword && peek().text == kw;
  }
  bool at_op(std::string_view op) const {
    return peek().kind == Token::Kind::Op && peek().text == op;
  }
  bool at_punct(std::string_view p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.line, t.col);
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("expected '" + std::string(kw) + "'");
    next();
  }
  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail("expected '" + std::string(p) + "'");
    next();
  }
  void expect_op(std::string_view op) {
    if (!at_op(op)) fail("expected '" + std::string(op) + "'");
    next();
  }

  int add_pat(PatNode n) {
    ast_.pat.push_back(std::move(n));
    return static_cast<int>(ast_.pat.size() - 1);
  }
  int add_expr(ExprNode n) {
    ast_.where.push_back(std::move(n));
    return static_cast<int>(ast_.where.size() - 1);
  }
  int add_binary_expr(ExprNode::Op op, int a, int b) {
    ExprNode n;
    n.op = op;
    n.a = a;
    n.b = b;
    return add_expr(std::move(n));
  }

  // every (x) where timer:within(d) reads as a deadline on each match
  // attempt, so the Within is hoisted above the Every.
  int make_every(int child) {
    PatNode& c = ast_.pat[static_cast<std::size_t>(child)];
    if (c.op == PatOp::Within) {
      int grandchild = c.child0;
      std::int64_t d = c.within_ms;
      int every = add_pat({PatOp::Every, grandchild, -1, -1, 0});
      ast_.pat[static_cast<std::size_t>(child)] = {PatOp::Within, every, -1, -1, d};
      return child;
    }
    return add_pat({PatOp::Every, child, -1, -1, 0});
  }

  std::int64_t parse_duration(const std::string& what) {
    expect_punct("(");
    if (peek().kind != Token::Kind::Int) fail("expected duration in " + what);
    std::int64_t secs = next().int_val;
    if (secs <= 0) fail(what + " duration must be positive");
    expect_keyword("sec");
    expect_punct(")");
    return secs * 1000;
  }

  // patexpr := orexpr; precedence: or < and < ->, every prefixes a term.
  int parse_patexpr() {
    int lhs = parse_pat_and();
    while (at_keyword("or")) {
      next();
      int rhs = parse_pat_and();
      lhs = add_pat({PatOp::Or, lhs, rhs, -1, 0});
    }
    return lhs;
  }
  int parse_pat_and() {
    int lhs = parse_pat_seq();
    while (at_keyword("and")) {
      next();
      int rhs = parse_pat_seq();
      lhs = add_pat({PatOp::And, lhs, rhs, -1, 0});
    }
    return lhs;
  }
  int parse_pat_seq() {
    int lhs = parse_pat_unary();
    while (at_op("->")) {
      next();
      int rhs = parse_pat_unary();
      lhs = add_pat({PatOp::FollowedBy, lhs, rhs, -1, 0});
    }
    return lhs;
  }
  int parse_pat_unary() {
    if (at_keyword("every")) {
      next();
      return make_every(parse_pat_term());
    }
    return parse_pat_term();
  }
  int parse_pat_term() {
    if (at_punct("(")) {
      next();
      int inner = parse_patexpr();
      expect_punct(")");
      // timer:within attaches to the nearest parenthesized pattern.
      if (at_keyword("where") && peek(1).kind == Token::Kind::Keyword &&
          peek(1).text == "timer:within") {
        next();
        next();
        std::int64_t d = parse_duration("timer:within");
        return add_pat({PatOp::Within, inner, -1, -1, d});
      }
      return inner;
    }
    return parse_binding();
  }

  int parse_binding() {
    if (peek().kind != Token::Kind::Ident) fail("expected event binding");
    Token var_tok = next();
    std::string var = var_tok.text;
    expect_op("=");
    expect_keyword("Event");
    expect_punct("(");
    for (const auto& v : ast_.vars)
      if (v.name == var)
        throw ParseError("variable '" + var + "' bound more than once", var_tok.line,
                         var_tok.col);
    FilterPredicate pred;
    pred.atoms.push_back(parse_filter_atom(var, pred));
    while (at_keyword("and")) {
      next();
      pred.atoms.push_back(parse_filter_atom(var, pred));
    }
    expect_punct(")");
    ast_.vars.push_back({var, std::move(pred)});
    int var_idx = static_cast<int>(ast_.vars.size() - 1);
    return add_pat({PatOp::Filter, -1, -1, var_idx, 0});
  }

  Accessor parse_accessor() {
    if (peek().kind != Token::Kind::Accessor) {
      if (peek().kind == Token::Kind::Ident && peek().text.rfind("get", 0) == 0)
        fail("unknown accessor '" + peek().text + "'");
      fail("expected accessor");
    }
    std::string t = next().text;
    if (t == "getSNMPvalue") return Accessor::Value;
    if (t == "getMeasure") return Accessor::Measure;
    return Accessor::Kind;
  }

  // One filter conjunct. getSNMPvalue('m') cmp k desugars to a measure
  // equality plus a value comparison.
  FilterAtom parse_filter_atom(const std::string& var, FilterPredicate& pred) {
    if (peek().kind != Token::Kind::Ident) fail("expected filter atom");
    Token ref = next();
    if (ref.text != var)
      throw ParseError("filter for '" + var + "' may only reference '" + var + "', not '" +
                           ref.text + "'",
                       ref.line, ref.col);
    expect_punct(".");
    Accessor acc = parse_accessor();
    expect_punct("(");
    std::optional<std::string> arg;
    if (peek().kind == Token::Kind::Text) arg = next().text;
    expect_punct(")");
    if (arg && acc != Accessor::Value) fail("only getSNMPvalue() takes a measure argument");
    if (peek().kind != Token::Kind::Op) fail("expected comparison operator");
    Token op_tok = next();
    CmpOp cmp;
    if (op_tok.text == ">") cmp = CmpOp::Gt;
    else if (op_tok.text == "<") cmp = CmpOp::Lt;
    else if (op_tok.text == ">=") cmp = CmpOp::Ge;
    else if (op_tok.text == "<=") cmp = CmpOp::Le;
    else if (op_tok.text == "=") cmp = CmpOp::Eq;
    else if (op_tok.text == "!=") cmp = CmpOp::Ne;
    else fail("expected comparison operator");

    FilterAtom atom;
    switch (acc) {
      case Accessor::Measure: {
        if (cmp != CmpOp::Eq)
          throw ParseError("getMeasure() filters support '=' only", op_tok.line, op_tok.col);
        if (peek().kind != Token::Kind::Text) fail("expected text literal");
        atom.kind = FilterAtom::Kind::MeasureEq;
        atom.measure = next().text;
        if (atom.measure.empty())
          throw ParseError("measure literal must be non-empty", op_tok.line, op_tok.col);
        return atom;
      }
      case Accessor::Kind: {
        if (cmp != CmpOp::Eq)
          throw ParseError("getAdapterFlag() filters support '=' only", op_tok.line, op_tok.col);
        if (!at_keyword("true") && !at_keyword("false")) fail("expected true or false");
        atom.kind = FilterAtom::Kind::KindEq;
        atom.is_signal = next().text == "true";
        return atom;
      }
      case Accessor::Value: {
        if (arg) {
          FilterAtom m;
          m.kind = FilterAtom::Kind::MeasureEq;
          m.measure = *arg;
          pred.atoms.push_back(std::move(m));
        }
        if (peek().kind != Token::Kind::Int) fail("expected integer literal");
        atom.kind = FilterAtom::Kind::ValueCmp;
        atom.cmp = cmp;
        atom.int_val = next().int_val;
        return atom;
      }
    }
    fail("expected filter atom");
  }

  int var_index(const Token& tok) const {
    for (std::size_t i = 0; i < ast_.vars.size(); ++i)
      if (ast_.vars[i].name == tok.text) return static_cast<int>(i);
    throw ParseError("where clause references unbound variable '" + tok.text + "'", tok.line,
                     tok.col);
  }

  // Where-clause grammar: or < and < comparison < additive < primary.
  // Measure arguments on getSNMPvalue hoist to measure-equality conjuncts
  // at the enclosing comparison.
  int parse_expr() {
    int lhs = parse_expr_and();
    while (at_keyword("or")) {
      next();
      int rhs = parse_expr_and();
      lhs = add_binary_expr(ExprNode::Op::Or, lhs, rhs);
    }
    return lhs;
  }
  int parse_expr_and() {
    int lhs = parse_expr_cmp();
    while (at_keyword("and")) {
      next();
      int rhs = parse_expr_cmp();
      lhs = add_binary_expr(ExprNode::Op::And, lhs, rhs);
    }
    return lhs;
  }
  int parse_expr_cmp() {
    std::vector<std::pair<int, std::string>> hoisted;  // (var, measure)
    int lhs = parse_expr_sum(hoisted);
    if (peek().kind == Token::Kind::Op && peek().text != "->") {
      std::string op = next().text;
      CmpOp cmp;
      if (op == ">") cmp = CmpOp::Gt;
      else if (op == "<") cmp = CmpOp::Lt;
      else if (op == ">=") cmp = CmpOp::Ge;
      else if (op == "<=") cmp = CmpOp::Le;
      else if (op == "=") cmp = CmpOp::Eq;
      else if (op == "!=") cmp = CmpOp::Ne;
      else fail("unexpected operator in where clause");
      int rhs = parse_expr_sum(hoisted);
      ExprNode cnode;
      cnode.op = ExprNode::Op::Cmp;
      cnode.cmp = cmp;
      cnode.a = lhs;
      cnode.b = rhs;
      lhs = add_expr(std::move(cnode));
    }
    for (auto it = hoisted.rbegin(); it != hoisted.rend(); ++it) {
      ExprNode acc;
      acc.op = ExprNode::Op::Access;
      acc.var = it->first;
      acc.acc = Accessor::Measure;
      int a = add_expr(std::move(acc));
      ExprNode lit;
      lit.op = ExprNode::Op::TextLit;
      lit.text = it->second;
      int b = add_expr(std::move(lit));
      ExprNode cnode;
      cnode.op = ExprNode::Op::Cmp;
      cnode.cmp = CmpOp::Eq;
      cnode.a = a;
      cnode.b = b;
      int m = add_expr(std::move(cnode));
      lhs = add_binary_expr(ExprNode::Op::And, m, lhs);
    }
    return lhs;
  }
  int parse_expr_sum(std::vector<std::pair<int, std::string>>& hoisted) {
    int lhs = parse_expr_primary(hoisted);
    while (at_op("+") || at_op("-")) {
      bool add = next().text == "+";
      int rhs = parse_expr_primary(hoisted);
      lhs = add_binary_expr(add ? ExprNode::Op::Add : ExprNode::Op::Sub, lhs, rhs);
    }
    return lhs;
  }
  int parse_expr_primary(std::vector<std::pair<int, std::string>>& hoisted) {
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      ExprNode n;
      n.op = ExprNode::Op::IntLit;
      n.int_val = next().int_val;
      return add_expr(std::move(n));
    }
    if (t.kind == Token::Kind::Text) {
      ExprNode n;
      n.op = ExprNode::Op::TextLit;
      n.text = next().text;
      return add_expr(std::move(n));
    }
    if (at_keyword("true") || at_keyword("false")) {
      ExprNode n;
      n.op = ExprNode::Op::BoolLit;
      n.bool_val = next().text == "true";
      return add_expr(std::move(n));
    }
    if (t.kind == Token::Kind::Ident) {
      Token var_tok = next();
      int var = var_index(var_tok);
      expect_punct(".");
      Accessor acc = parse_accessor();
      expect_punct("(");
      std::optional<std::string> arg;
      if (peek().kind == Token::Kind::Text) arg = next().text;
      expect_punct(")");
      if (arg) {
        if (acc != Accessor::Value) fail("only getSNMPvalue() takes a measure argument");
        hoisted.emplace_back(var, *arg);
      }
      ExprNode n;
      n.op = ExprNode::Op::Access;
      n.var = var;
      n.acc = acc;
      return add_expr(std::move(n));
    }
    if (at_punct("(")) {
      next();
      int inner = parse_expr();
      expect_punct(")");
      return inner;
    }
    fail("expected expression");
  }
};

}  // namespace detail

// Parses one query into a PatternAst. The AST is not yet validated against
// a measure registry; see validator.hpp.
inline PatternAst parse_pattern(std::string name, std::string_view source) {
  return detail::PatternParser(std::move(name), source).parse();
}

// Pattern file format: stanzas separated by blank lines, each starting with
// a `pattern: <name>` line followed by the query text. `--` comments allowed.
inline std::vector<PatternAst> parse_pattern_file(std::string_view content) {
  std::vector<PatternAst> out;
  std::vector<std::string> names;
  std::size_t pos = 0;
  int line_no = 0;
  std::optional<std::string> cur_name;
  int cur_start_line = 0;
  std::string cur_src;

  auto strip = [](std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return std::string_view{};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  auto flush = [&]() {
    if (!cur_name) return;
    try {
      out.push_back(parse_pattern(*cur_name, cur_src));
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2),
                       e.line + cur_start_line, e.col);
    }
    for (const auto& n : names)
      if (n == *cur_name)
        throw ParseError("duplicate pattern name '" + *cur_name + "'", cur_start_line, 1);
    names.push_back(*cur_name);
    cur_name.reset();
    cur_src.clear();
  };

  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    std::string_view raw = content.substr(
        pos, (eol == std::string_view::npos ? content.size() : eol) - pos);
    ++line_no;
    std::string_view line = strip(raw);
    bool comment = line.rfind("--", 0) == 0;
    if (line.empty()) {
      flush();
    } else if (!comment && line.rfind("pattern:", 0) == 0) {
      flush();
      std::string_view name = strip(line.substr(8));
      if (name.empty()) throw ParseError("pattern name must be non-empty", line_no, 1);
      cur_name = std::string(name);
      cur_start_line = line_no;
      cur_src.clear();
    } else if (!comment) {
      if (!cur_name)
        throw ParseError("expected 'pattern: <name>' header", line_no, 1);
      cur_src += raw;
      cur_src += '\n';
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  flush();
  return out;
}

}  // namespace snmpcep
