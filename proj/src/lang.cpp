#include "liftcal/lang.hpp"

#include <algorithm>
#include <charconv>

#include "liftcal/errors.hpp"
#include "liftcal/lexer.hpp"

namespace liftcal {

// ---------------------------------------------------------------- builders

ExprPtr Expr::number(int64_t n) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Num;
  e->num = n;
  return e;
}

ExprPtr Expr::variable(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->var = std::move(name);
  return e;
}

ExprPtr Expr::binary(ArithOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Bin;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Num: return a.num == b.num;
    case Expr::Kind::Var: return a.var == b.var;
    case Expr::Kind::Bin:
      return a.op == b.op && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
  }
  return false;
}

namespace {

std::shared_ptr<Stmt> node(Stmt::Kind k) {
  auto s = std::make_shared<Stmt>();
  s->kind = k;
  return s;
}

} // namespace

StmtPtr Stmt::skip() { return node(Kind::Skip); }

StmtPtr Stmt::assign(std::string var, ExprPtr e) {
  auto s = node(Kind::Assign);
  s->var = std::move(var);
  s->expr = std::move(e);
  return s;
}

StmtPtr Stmt::seq(StmtPtr a, StmtPtr b) {
  auto s = node(Kind::Seq);
  s->s0 = std::move(a);
  s->s1 = std::move(b);
  return s;
}

StmtPtr Stmt::if_(ExprPtr cond, StmtPtr then_s, StmtPtr else_s) {
  auto s = node(Kind::If);
  s->expr = std::move(cond);
  s->s0 = std::move(then_s);
  s->s1 = std::move(else_s);
  return s;
}

StmtPtr Stmt::while_(ExprPtr cond, StmtPtr body) {
  auto s = node(Kind::While);
  s->expr = std::move(cond);
  s->s0 = std::move(body);
  return s;
}

StmtPtr Stmt::ifdef(FeatExp guard, StmtPtr body) {
  auto s = node(Kind::IfDef);
  s->guard = std::move(guard);
  s->s0 = std::move(body);
  return s;
}

StmtPtr Stmt::lub(StmtPtr a, StmtPtr b) {
  auto s = node(Kind::Lub);
  s->s0 = std::move(a);
  s->s1 = std::move(b);
  return s;
}

StmtPtr seq_of(const std::vector<StmtPtr>& items) {
  if (items.empty()) return Stmt::skip();
  StmtPtr acc = items.back();
  for (size_t i = items.size() - 1; i-- > 0;) acc = Stmt::seq(items[i], acc);
  return acc;
}

void flatten_seq(const StmtPtr& s, std::vector<StmtPtr>& out) {
  if (s->kind == Stmt::Kind::Seq) {
    flatten_seq(s->s0, out);
    flatten_seq(s->s1, out);
  } else {
    out.push_back(s);
  }
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
  using K = Stmt::Kind;
  if (a.kind == K::Seq || b.kind == K::Seq) {
    if (a.kind != b.kind) return false;
    std::vector<StmtPtr> xs, ys;
    flatten_seq(a.s0, xs);
    flatten_seq(a.s1, xs);
    flatten_seq(b.s0, ys);
    flatten_seq(b.s1, ys);
    if (xs.size() != ys.size()) return false;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (!stmt_equal(*xs[i], *ys[i])) return false;
    }
    return true;
  }
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case K::Skip: return true;
    case K::Assign: return a.var == b.var && expr_equal(*a.expr, *b.expr);
    case K::If:
      return expr_equal(*a.expr, *b.expr) && stmt_equal(*a.s0, *b.s0) &&
             stmt_equal(*a.s1, *b.s1);
    case K::While: return expr_equal(*a.expr, *b.expr) && stmt_equal(*a.s0, *b.s0);
    case K::IfDef: return a.guard == b.guard && stmt_equal(*a.s0, *b.s0);
    case K::Lub: return stmt_equal(*a.s0, *b.s0) && stmt_equal(*a.s1, *b.s1);
    case K::Seq: break;
  }
  return false;
}

// ---------------------------------------------------------------- labels

namespace {

StmtPtr relabel_from(const StmtPtr& s, int& next) {
  auto c = std::make_shared<Stmt>(*s);
  c->label = next++;
  if (s->s0) c->s0 = relabel_from(s->s0, next);
  if (s->s1) c->s1 = relabel_from(s->s1, next);
  return c;
}

void collect(const Stmt& s, std::vector<const Stmt*>& out) {
  out.push_back(&s);
  if (s.s0) collect(*s.s0, out);
  if (s.s1) collect(*s.s1, out);
}

} // namespace

StmtPtr relabel(const StmtPtr& s) {
  int next = 0;
  return relabel_from(s, next);
}

std::vector<const Stmt*> stmts_by_label(const Stmt& s) {
  std::vector<const Stmt*> pre;
  collect(s, pre);
  std::vector<const Stmt*> out(pre.size(), nullptr);
  for (const Stmt* x : pre) {
    if (x->label < 0 || static_cast<size_t>(x->label) >= out.size() || out[x->label]) {
      throw SemanticError("statement labels are not 0..n-1");
    }
    out[x->label] = x;
  }
  return out;
}

size_t stmt_count(const Stmt& s) {
  return 1 + (s.s0 ? stmt_count(*s.s0) : 0) + (s.s1 ? stmt_count(*s.s1) : 0);
}

bool contains_ifdef(const Stmt& s) {
  return s.kind == Stmt::Kind::IfDef || (s.s0 && contains_ifdef(*s.s0)) ||
         (s.s1 && contains_ifdef(*s.s1));
}

// ---------------------------------------------------------------- parser

namespace {

bool reserved(std::string_view w) {
  static constexpr std::string_view kWords[] = {"skip", "if",       "else",  "while", "begin",
                                                "end",  "features", "model", "true",  "false"};
  return std::find(std::begin(kWords), std::end(kWords), w) != std::end(kWords);
}

class Parser {
 public:
  Parser(TokenStream& ts, const FeatureSpace& space) : ts_(ts), space_(space) {}

  ExprPtr expr() {
    ExprPtr lhs = sum();
    while (ts_.at(Tok::Less) || ts_.at(Tok::Equal)) {
      ArithOp op = ts_.next().kind == Tok::Less ? ArithOp::Lt : ArithOp::Eq;
      lhs = Expr::binary(op, lhs, sum());
    }
    return lhs;
  }

  StmtPtr stmt_list() {
    std::vector<StmtPtr> items{simple()};
    while (ts_.accept(Tok::Semi)) {
      if (ts_.at(Tok::RBrace) || ts_.at_word("end") || ts_.at(Tok::End)) break;
      items.push_back(simple());
    }
    return seq_of(items);
  }

 private:
  ExprPtr sum() {
    ExprPtr lhs = product();
    while (ts_.at(Tok::Plus) || ts_.at(Tok::Minus)) {
      ArithOp op = ts_.next().kind == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
      lhs = Expr::binary(op, lhs, product());
    }
    return lhs;
  }

  ExprPtr product() {
    ExprPtr lhs = unary();
    while (ts_.accept(Tok::Star)) lhs = Expr::binary(ArithOp::Mul, lhs, unary());
    return lhs;
  }

  ExprPtr unary() {
    if (ts_.accept(Tok::Minus)) {
      // "-3" is a literal; "-x" and "-(..)" mean 0 - e.
      if (ts_.at(Tok::Number)) return number("-");
      return Expr::binary(ArithOp::Sub, Expr::number(0), unary());
    }
    return atom();
  }

  ExprPtr number(std::string sign) {
    const Token& t = ts_.next();
    std::string text = sign + t.text;
    int64_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError("integer literal out of range", t.line, t.column);
    }
    if (!enc::is_int(n)) throw ParseError("integer literal out of range", t.line, t.column);
    return Expr::number(n);
  }

  ExprPtr atom() {
    if (ts_.at(Tok::Number)) return number("");
    if (ts_.at(Tok::Ident) && !reserved(ts_.peek().text)) {
      return Expr::variable(ts_.next().text);
    }
    if (ts_.accept(Tok::LParen)) {
      ExprPtr e = expr();
      ts_.expect(Tok::RParen);
      return e;
    }
    ts_.fail("expected expression");
  }

  StmtPtr block() {
    ts_.expect(Tok::LBrace);
    StmtPtr s = stmt_list();
    ts_.expect(Tok::RBrace);
    return s;
  }

  ExprPtr cond() {
    ts_.expect(Tok::LParen);
    ExprPtr e = expr();
    ts_.expect(Tok::RParen);
    return e;
  }

  StmtPtr simple() {
    if (ts_.accept_word("skip")) return Stmt::skip();
    if (ts_.accept_word("if")) {
      ExprPtr c = cond();
      StmtPtr t = block();
      ts_.expect_word("else");
      return Stmt::if_(c, t, block());
    }
    if (ts_.accept_word("while")) {
      ExprPtr c = cond();
      return Stmt::while_(c, block());
    }
    if (ts_.accept(Tok::HashIf)) {
      ts_.expect(Tok::LParen);
      FeatExp g = parse_featexp(ts_, space_);
      ts_.expect(Tok::RParen);
      return Stmt::ifdef(g, block());
    }
    if (ts_.at(Tok::Ident) && !reserved(ts_.peek().text) && ts_.peek(1).kind == Tok::Assign) {
      std::string x = ts_.next().text;
      ts_.next();
      return Stmt::assign(x, expr());
    }
    ts_.fail("expected statement");
  }

  TokenStream& ts_;
  const FeatureSpace& space_;
};

} // namespace

Program parse_program(std::string_view text) {
  TokenStream ts(tokenize(text));
  std::vector<std::string> names;
  if (ts.accept_word("features")) {
    do {
      const Token& t = ts.expect(Tok::Ident);
      if (reserved(t.text)) throw ParseError("reserved word as feature name", t.line, t.column);
      if (std::find(names.begin(), names.end(), t.text) != names.end()) {
        throw ParseError("duplicate feature '" + t.text + "'", t.line, t.column);
      }
      names.push_back(t.text);
    } while (ts.accept(Tok::Comma));
    ts.expect(Tok::Semi);
  }
  Program p;
  p.model.space = FeatureSpace(std::move(names));
  p.model.psi = FeatExp::truth();
  if (ts.accept_word("model")) {
    p.model.psi = parse_featexp(ts, p.model.space);
    ts.expect(Tok::Semi);
  }
  ts.expect_word("begin");
  Parser ps(ts, p.model.space);
  p.body = relabel(ps.stmt_list());
  ts.expect_word("end");
  if (!ts.at(Tok::End)) ts.fail("unexpected trailing input");
  return p;
}

StmtPtr parse_stmt(std::string_view text, const FeatureSpace& space) {
  TokenStream ts(tokenize(text));
  Parser ps(ts, space);
  StmtPtr s = relabel(ps.stmt_list());
  if (!ts.at(Tok::End)) ts.fail("unexpected trailing input");
  return s;
}

// ---------------------------------------------------------------- printer

namespace {

int expr_prec(const Expr& e) {
  if (e.kind != Expr::Kind::Bin) return e.kind == Expr::Kind::Num && e.num < 0 ? 0 : 4;
  switch (e.op) {
    case ArithOp::Lt:
    case ArithOp::Eq: return 1;
    case ArithOp::Add:
    case ArithOp::Sub: return 2;
    case ArithOp::Mul: return 3;
  }
  return 4;
}

void expr_into(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Num: out += std::to_string(e.num); return;
    case Expr::Kind::Var: out += e.var; return;
    case Expr::Kind::Bin: {
      int p = expr_prec(e);
      bool lp = expr_prec(*e.lhs) < p;
      bool rp = expr_prec(*e.rhs) <= p;
      if (lp) out += '(';
      expr_into(*e.lhs, out);
      if (lp) out += ')';
      out += ' ';
      out += arith_symbol(e.op);
      out += ' ';
      if (rp) out += '(';
      expr_into(*e.rhs, out);
      if (rp) out += ')';
      return;
    }
  }
}

void stmt_into(const Stmt& s, int indent, std::string& out);

bool inline_block(const Stmt& s) {
  return s.kind == Stmt::Kind::Skip || s.kind == Stmt::Kind::Assign;
}

void block_into(const Stmt& s, int indent, std::string& out) {
  if (inline_block(s)) {
    out += "{ ";
    stmt_into(s, indent, out);
    out += " }";
    return;
  }
  out += "{\n";
  out.append(static_cast<size_t>(indent + 2), ' ');
  stmt_into(s, indent + 2, out);
  out += '\n';
  out.append(static_cast<size_t>(indent), ' ');
  out += '}';
}

void stmt_into(const Stmt& s, int indent, std::string& out) {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Skip: out += "skip"; return;
    case K::Assign:
      out += s.var + " := ";
      expr_into(*s.expr, out);
      return;
    case K::Seq: {
      std::vector<StmtPtr> items;
      flatten_seq(s.s0, items);
      flatten_seq(s.s1, items);
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) {
          out += ";\n";
          out.append(static_cast<size_t>(indent), ' ');
        }
        stmt_into(*items[i], indent, out);
      }
      return;
    }
    case K::If:
    case K::Lub:
      out += "if (";
      if (s.kind == K::If) {
        expr_into(*s.expr, out);
      } else {
        out += '0';
      }
      out += ") ";
      block_into(*s.s0, indent, out);
      out += " else ";
      block_into(*s.s1, indent, out);
      return;
    case K::While:
      out += "while (";
      expr_into(*s.expr, out);
      out += ") ";
      block_into(*s.s0, indent, out);
      return;
    case K::IfDef:
      out += "#if (" + s.guard.render() + ") ";
      block_into(*s.s0, indent, out);
      return;
  }
}

} // namespace

std::string render_expr(const Expr& e) {
  std::string out;
  expr_into(e, out);
  return out;
}

std::string pretty(const Stmt& s) {
  std::string out;
  stmt_into(s, 0, out);
  return out;
}

std::string pretty(const Program& p) {
  std::string out;
  const auto& names = p.model.space.names();
  if (!names.empty()) {
    out += "features ";
    for (size_t i = 0; i < names.size(); ++i) {
      if (i) out += ", ";
      out += names[i];
    }
    out += ";\n";
  }
  out += "model " + p.model.psi.render() + ";\n";
  out += "begin\n  ";
  stmt_into(*p.body, 2, out);
  out += "\nend\n";
  return out;
}

// ---------------------------------------------------------------- variants

StmtPtr preprocess(const StmtPtr& s, const FeatureSpace& space, uint64_t code) {
  using K = Stmt::Kind;
  switch (s->kind) {
    case K::Skip:
    case K::Assign:
      return s;
    case K::IfDef:
      if (!eval(s->guard, space, code)) {
        auto sk = std::make_shared<Stmt>(*Stmt::skip());
        sk->label = s->label;
        return sk;
      }
      return preprocess(s->s0, space, code);
    default: {
      auto c = std::make_shared<Stmt>(*s);
      if (s->s0) c->s0 = preprocess(s->s0, space, code);
      if (s->s1) c->s1 = preprocess(s->s1, space, code);
      return c;
    }
  }
}

StmtPtr preprocess(const Program& p, uint64_t code) {
  if (!eval(p.model.psi, p.model.space, code)) {
    throw SemanticError("configuration violates the feature model");
  }
  return preprocess(p.body, p.model.space, code);
}

namespace {

void add_var(std::vector<std::string>& out, const std::string& x) {
  if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
}

void expr_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::Var) add_var(out, e.var);
  if (e.lhs) expr_vars(*e.lhs, out);
  if (e.rhs) expr_vars(*e.rhs, out);
}

void vars_into(const Stmt& s, std::vector<std::string>& out) {
  if (s.kind == Stmt::Kind::Assign) add_var(out, s.var);
  if (s.expr) expr_vars(*s.expr, out);
  if (s.s0) vars_into(*s.s0, out);
  if (s.s1) vars_into(*s.s1, out);
}

} // namespace

std::vector<std::string> stmt_vars(const Stmt& s) {
  std::vector<std::string> out;
  vars_into(s, out);
  return out;
}

std::vector<std::string> program_vars(const Program& p) { return stmt_vars(*p.body); }

} // namespace liftcal
