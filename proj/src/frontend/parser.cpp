#include "fldx/frontend/parser.hpp"

#include <cctype>
#include <functional>
#include <set>

namespace fldx {

namespace {

const BuiltinSig kBuiltins[] = {
    {"accuracy_enlarge_fval_err", 5, BuiltinRole::Predicate, 'f'},
    {"accuracy_enlarge_dval_err", 5, BuiltinRole::Predicate, 'd'},
    {"accuracy_assert_ferr", 3, BuiltinRole::Predicate, 'f'},
    {"accuracy_assert_derr", 3, BuiltinRole::Predicate, 'd'},
    {"accuracy_assert_frelerr", 3, BuiltinRole::Predicate, 'f'},
    {"accuracy_assert_drelerr", 3, BuiltinRole::Predicate, 'd'},
    {"accuracy_get_ferr", 1, BuiltinRole::Term, 'f'},
    {"accuracy_get_derr", 1, BuiltinRole::Term, 'd'},
    {"accuracy_get_frelerr", 1, BuiltinRole::Term, 'f'},
    {"accuracy_get_drelerr", 1, BuiltinRole::Term, 'd'},
    {"accuracy_get_freal", 1, BuiltinRole::Term, 'f'},
    {"accuracy_get_dreal", 1, BuiltinRole::Term, 'd'},
    {"fprint", 1, BuiltinRole::Predicate, 'f'},
    {"dprint", 1, BuiltinRole::Predicate, 'd'},
};

enum class Tok { Ident, Int, Float, Punct, Annot, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Loc loc;
};

class Lexer {
public:
  Lexer(std::string_view src, Loc start) : src_(src), line_(start.line), col_(start.col) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (c == '/' && peek(1) == '*' && peek(2) == '@') {
        advance(3);
        t.kind = Tok::Annot;
        Loc inner{line_, col_};
        std::size_t end = src_.find("*/", pos_);
        if (end == std::string_view::npos)
          throw FrontendError(t.loc, "unterminated annotation");
        t.text = std::string(src_.substr(pos_, end - pos_));
        t.loc = inner;
        advance(end + 2 - pos_);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\') {
        t.kind = Tok::Ident;
        std::size_t b = pos_;
        advance(1);
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance(1);
        t.text = std::string(src_.substr(b, pos_ - b));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number(t);
      } else {
        t.kind = Tok::Punct;
        static const char *three[] = {"==>", "<<=", ">>="};
        static const char *two[] = {"==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%="};
        bool done = false;
        for (const char *p : three)
          if (src_.substr(pos_, 3) == p) {
            t.text = p;
            advance(3);
            done = true;
            break;
          }
        if (!done)
          for (const char *p : two)
            if (src_.substr(pos_, 2) == p) {
              t.text = p;
              advance(2);
              done = true;
              break;
            }
        if (!done) {
          if (std::string_view("(){}[];,=<>+-*/%!?:&").find(c) == std::string_view::npos)
            throw FrontendError(t.loc, std::string("unexpected character '") + c + "'");
          t.text = std::string(1, c);
          advance(1);
        }
      }
      out.push_back(std::move(t));
    }
  }

private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
        advance(1);
      if (peek(0) == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance(1);
      } else if (peek(0) == '/' && peek(1) == '*' && peek(2) != '@') {
        Loc at{line_, col_};
        std::size_t end = src_.find("*/", pos_ + 2);
        if (end == std::string_view::npos)
          throw FrontendError(at, "unterminated comment");
        advance(end + 2 - pos_);
      } else {
        return;
      }
    }
  }

  void lex_number(Token &t) {
    std::size_t b = pos_;
    bool is_float = false;
    while (std::isdigit(static_cast<unsigned char>(peek(0))))
      advance(1);
    if (peek(0) == '.') {
      is_float = true;
      advance(1);
      while (std::isdigit(static_cast<unsigned char>(peek(0))))
        advance(1);
    }
    if (peek(0) == 'e' || peek(0) == 'E') {
      std::size_t k = 1;
      if (peek(1) == '+' || peek(1) == '-')
        k = 2;
      if (std::isdigit(static_cast<unsigned char>(peek(k)))) {
        is_float = true;
        advance(k);
        while (std::isdigit(static_cast<unsigned char>(peek(0))))
          advance(1);
      }
    }
    if (is_float) {
      if (peek(0) == 'f' || peek(0) == 'F')
        advance(1);
    } else {
      while (peek(0) == 'u' || peek(0) == 'U' || peek(0) == 'l' || peek(0) == 'L')
        advance(1);
    }
    if (std::isalnum(static_cast<unsigned char>(peek(0))) || peek(0) == '_')
      throw FrontendError(t.loc, "malformed number");
    t.kind = is_float ? Tok::Float : Tok::Int;
    t.text = std::string(src_.substr(b, pos_ - b));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  int col_;
};

bool is_type_word(const std::string &w) {
  static const std::set<std::string> words = {"void", "char", "short", "int", "long",
                                              "unsigned", "signed", "float", "double", "const"};
  return words.count(w) != 0;
}

class Parser {
public:
  Parser(std::vector<Token> toks, Program &prog) : toks_(std::move(toks)), prog_(prog) {}

  void program() {
    while (!at_end()) {
      Scalar base = type_spec();
      Token name = expect_ident();
      if (is_punct("(")) {
        prog_.functions.push_back(function(base, name));
      } else {
        for (auto &d : declarators(base, name))
          prog_.globals.push_back(d);
        expect(";");
      }
    }
  }

  PredPtr annotation_predicate() {
    PredPtr p = pred();
    if (!at_end())
      fail("unexpected '" + cur().text + "' in annotation");
    return p;
  }

private:
  // Token access.
  const Token &cur() const { return toks_[pos_]; }
  const Token &ahead(std::size_t k) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return cur().kind == Tok::End; }
  bool is_punct(const char *p) const { return cur().kind == Tok::Punct && cur().text == p; }
  bool is_word(const char *w) const { return cur().kind == Tok::Ident && cur().text == w; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string &msg) const { throw FrontendError(cur().loc, msg); }

  void expect(const char *p) {
    if (!is_punct(p))
      fail(std::string("expected '") + p + "' but found " + describe(cur()));
    take();
  }

  static std::string describe(const Token &t) {
    return t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
  }

  Token expect_ident() {
    if (cur().kind != Tok::Ident || is_type_word(cur().text) || is_keyword(cur().text))
      fail("expected identifier but found " + describe(cur()));
    return take();
  }

  static bool is_keyword(const std::string &w) {
    static const std::set<std::string> kw = {"if", "else", "while", "do", "for", "return", "break", "continue"};
    return kw.count(w) != 0;
  }

  int fresh_id() { return prog_.next_id++; }

  StmtPtr make_stmt(StmtKind k, Loc loc) {
    auto s = std::make_shared<Stmt>();
    s->kind = k;
    s->loc = loc;
    s->id = fresh_id();
    return s;
  }

  ExprPtr make_expr(ExprKind k, Loc loc) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->loc = loc;
    e->id = fresh_id();
    return e;
  }

  // Types.
  bool at_type() const { return cur().kind == Tok::Ident && is_type_word(cur().text); }

  Scalar type_spec() {
    if (!at_type())
      fail("expected a type but found " + describe(cur()));
    bool uns = false, sgn = false;
    int longs = 0;
    std::optional<std::string> base;
    while (at_type()) {
      std::string w = take().text;
      if (w == "const")
        continue;
      if (w == "unsigned")
        uns = true;
      else if (w == "signed")
        sgn = true;
      else if (w == "long")
        ++longs;
      else if (w == "int" && (longs > 0 || base == "short")) {
      } else if (base)
        fail("conflicting type specifiers");
      else
        base = w;
    }
    if (uns && sgn)
      fail("conflicting signedness");
    if (base == "void" || base == "float" || base == "double") {
      if (uns || sgn || longs > 0)
        fail("invalid type specifier combination");
      return *base == "void" ? Scalar::Void : *base == "float" ? Scalar::Float : Scalar::Double;
    }
    if (base == "char")
      return uns ? Scalar::UChar : Scalar::Char;
    if (base == "short")
      return uns ? Scalar::UShort : Scalar::Short;
    if (longs > 0)
      return uns ? Scalar::ULong : Scalar::Long;
    return uns ? Scalar::UInt : Scalar::Int;
  }

  long array_size() {
    Token t = take();
    if (t.kind != Tok::Int)
      throw FrontendError(t.loc, "array size must be an integer constant");
    Rational v = Rational::parse(strip_int_suffix(t.text));
    if (v.sign() <= 0 || !v.num().fits_i64())
      throw FrontendError(t.loc, "invalid array size");
    return static_cast<long>(v.num().to_i64());
  }

  static std::string strip_int_suffix(std::string s) {
    while (!s.empty() && (s.back() == 'u' || s.back() == 'U' || s.back() == 'l' || s.back() == 'L'))
      s.pop_back();
    return s;
  }

  // Declarations.
  std::vector<StmtPtr> declarators(Scalar base, Token name) {
    std::vector<StmtPtr> out;
    for (;;) {
      if (base == Scalar::Void)
        throw FrontendError(name.loc, "variable of type void");
      auto d = make_stmt(StmtKind::Decl, name.loc);
      d->name = name.text;
      d->type.scalar = base;
      if (is_punct("[")) {
        take();
        d->type.array = array_size();
        expect("]");
      }
      if (is_punct("=")) {
        take();
        if (is_punct("{")) {
          if (!d->type.is_array())
            fail("initializer list for a scalar");
          take();
          if (!is_punct("}"))
            for (;;) {
              d->init_list.push_back(expr());
              if (!is_punct(","))
                break;
              take();
            }
          expect("}");
          if (static_cast<long>(d->init_list.size()) > d->type.array)
            throw FrontendError(d->loc, "too many initializers");
        } else {
          if (d->type.is_array())
            fail("array initializer must be a brace list");
          d->expr = expr();
        }
      }
      out.push_back(d);
      if (!is_punct(","))
        return out;
      take();
      name = expect_ident();
    }
  }

  Function function(Scalar ret, const Token &name) {
    Function f;
    f.name = name.text;
    f.ret.scalar = ret;
    f.loc = name.loc;
    expect("(");
    if (is_word("void") && ahead(1).kind == Tok::Punct && ahead(1).text == ")") {
      take();
    } else if (!is_punct(")")) {
      for (;;) {
        Param p;
        p.loc = cur().loc;
        p.type.scalar = type_spec();
        if (p.type.scalar == Scalar::Void)
          fail("parameter of type void");
        p.name = expect_ident().text;
        if (is_punct("[")) {
          take();
          p.type.array = is_punct("]") ? 0 : array_size();
          expect("]");
        }
        f.params.push_back(p);
        if (!is_punct(","))
          break;
        take();
      }
    }
    expect(")");
    f.body = block();
    normalize_returns(f);
    return f;
  }

  // Statements.
  StmtPtr block() {
    auto b = make_stmt(StmtKind::Block, cur().loc);
    expect("{");
    b->body = stmt_list("}");
    expect("}");
    return b;
  }

  struct Marker {
    bool split = false;
    int id = -1;
    std::vector<std::string> names;
    Loc loc;
  };

  std::optional<Marker> marker(const Token &t) {
    std::vector<Token> sub = Lexer(t.text, t.loc).run();
    if (sub.empty() || sub[0].kind != Tok::Ident || (sub[0].text != "split" && sub[0].text != "merge"))
      return std::nullopt;
    Marker m;
    m.split = sub[0].text == "split";
    m.loc = t.loc;
    std::size_t k = 1;
    auto bad = [&]() -> FrontendError { return FrontendError(sub[std::min(k, sub.size() - 1)].loc, "malformed section marker"); };
    if (sub[k].kind != Tok::Int)
      throw bad();
    m.id = std::stoi(sub[k++].text);
    const char *list = m.split ? "save" : "merge";
    if (sub[k].kind != Tok::Ident || sub[k].text != list)
      throw bad();
    ++k;
    if (sub[k].text != "(")
      throw bad();
    ++k;
    while (sub[k].text != ")") {
      if (sub[k].kind != Tok::Ident)
        throw bad();
      m.names.push_back(sub[k++].text);
      if (sub[k].text == ",")
        ++k;
      else if (sub[k].text != ")")
        throw bad();
    }
    ++k;
    if (sub[k].kind != Tok::End)
      throw bad();
    return m;
  }

  std::vector<StmtPtr> stmt_list(const char *closer) {
    std::vector<StmtPtr> out;
    struct Open {
      StmtPtr section;
      std::size_t start;
    };
    std::vector<Open> open;
    while (!is_punct(closer) && !at_end()) {
      if (cur().kind == Tok::Annot) {
        Token t = cur();
        if (auto m = marker(t)) {
          take();
          if (m->split) {
            auto s = make_stmt(StmtKind::Section, m->loc);
            s->section.id = m->id;
            s->section.save_list = m->names;
            open.push_back({s, out.size()});
          } else {
            if (open.empty() || open.back().section->section.id != m->id)
              throw FrontendError(m->loc, "merge marker without matching split in the same block");
            Open o = open.back();
            open.pop_back();
            o.section->section.merge_list = m->names;
            o.section->body.assign(out.begin() + static_cast<long>(o.start), out.end());
            out.resize(o.start);
            out.push_back(o.section);
          }
          continue;
        }
      }
      for (auto &s : statement())
        out.push_back(s);
    }
    if (!open.empty())
      throw FrontendError(open.back().section->loc, "split marker without matching merge in the same block");
    return out;
  }

  std::vector<StmtPtr> statement() {
    Loc loc = cur().loc;
    if (cur().kind == Tok::Annot) {
      Token t = take();
      return {assertion(t)};
    }
    if (is_punct("{"))
      return {block()};
    if (is_punct(";")) {
      take();
      return {};
    }
    if (at_type()) {
      Scalar base = type_spec();
      Token name = expect_ident();
      auto ds = declarators(base, name);
      expect(";");
      return ds;
    }
    if (is_word("if")) {
      take();
      auto s = make_stmt(StmtKind::If, loc);
      expect("(");
      s->expr = expr();
      expect(")");
      s->then_s = as_block(statement(), loc);
      if (is_word("else")) {
        take();
        s->else_s = as_block(statement(), loc);
      }
      return {s};
    }
    if (is_word("while")) {
      take();
      auto s = make_stmt(StmtKind::While, loc);
      expect("(");
      s->expr = expr();
      expect(")");
      s->then_s = as_block(statement(), loc);
      return {s};
    }
    if (is_word("do")) {
      take();
      auto s = make_stmt(StmtKind::DoWhile, loc);
      s->then_s = as_block(statement(), loc);
      if (!is_word("while"))
        fail("expected 'while' after do body");
      take();
      expect("(");
      s->expr = expr();
      expect(")");
      expect(";");
      return {s};
    }
    if (is_word("for"))
      return {for_loop()};
    if (is_word("return")) {
      take();
      auto s = make_stmt(StmtKind::Return, loc);
      if (!is_punct(";"))
        s->expr = expr();
      expect(";");
      return {s};
    }
    if (is_word("break") || is_word("continue") || is_word("goto"))
      fail("'" + cur().text + "' is not supported");
    auto s = simple_statement();
    expect(";");
    return {s};
  }

  StmtPtr as_block(std::vector<StmtPtr> stmts, Loc loc) {
    if (stmts.size() == 1 && stmts[0]->kind == StmtKind::Block)
      return stmts[0];
    auto b = make_stmt(StmtKind::Block, loc);
    b->body = std::move(stmts);
    return b;
  }

  StmtPtr for_loop() {
    Loc loc = take().loc;
    expect("(");
    auto outer = make_stmt(StmtKind::Block, loc);
    if (at_type()) {
      Scalar base = type_spec();
      Token name = expect_ident();
      outer->body = declarators(base, name);
    } else if (!is_punct(";")) {
      outer->body.push_back(simple_statement());
    }
    expect(";");
    auto loop = make_stmt(StmtKind::While, loc);
    if (is_punct(";")) {
      auto one = make_expr(ExprKind::IntLit, cur().loc);
      one->text = "1";
      one->value = Rational(1);
      loop->expr = one;
    } else {
      loop->expr = expr();
    }
    expect(";");
    StmtPtr step;
    if (!is_punct(")"))
      step = simple_statement();
    expect(")");
    StmtPtr body = as_block(statement(), loc);
    auto inner = make_stmt(StmtKind::Block, body->loc);
    inner->body = body->body;
    if (step)
      inner->body.push_back(step);
    loop->then_s = inner;
    outer->body.push_back(loop);
    return outer;
  }

  /// Assignment, increment or call.
  StmtPtr simple_statement() {
    Loc loc = cur().loc;
    if (is_punct("++") || is_punct("--")) {
      bool inc = take().text == "++";
      ExprPtr target = postfix();
      return increment(target, inc, loc);
    }
    ExprPtr lhs = postfix();
    if (is_punct("++") || is_punct("--")) {
      bool inc = take().text == "++";
      return increment(lhs, inc, loc);
    }
    static const std::pair<const char *, std::optional<BinOp>> ops[] = {
        {"=", std::nullopt}, {"+=", BinOp::Add}, {"-=", BinOp::Sub},
        {"*=", BinOp::Mul},  {"/=", BinOp::Div}, {"%=", BinOp::Mod}};
    for (const auto &[p, op] : ops) {
      if (is_punct(p)) {
        take();
        check_lvalue(lhs);
        auto s = make_stmt(StmtKind::Assign, loc);
        s->target = lhs;
        s->compound = op;
        s->expr = expr();
        return s;
      }
    }
    if (lhs->kind == ExprKind::Call) {
      auto s = make_stmt(StmtKind::Call, loc);
      s->expr = lhs;
      return s;
    }
    fail("expected a statement, found " + describe(cur()));
  }

  StmtPtr increment(ExprPtr target, bool inc, Loc loc) {
    check_lvalue(target);
    auto s = make_stmt(StmtKind::Assign, loc);
    s->target = target;
    s->compound = inc ? BinOp::Add : BinOp::Sub;
    auto one = make_expr(ExprKind::IntLit, loc);
    one->text = "1";
    one->value = Rational(1);
    s->expr = one;
    return s;
  }

  void check_lvalue(const ExprPtr &e) {
    if (e->kind != ExprKind::Var && e->kind != ExprKind::Index)
      throw FrontendError(e->loc, "left-hand side is not assignable");
  }

  StmtPtr assertion(const Token &t) {
    std::vector<Token> sub = Lexer(t.text, t.loc).run();
    if (sub.empty() || sub[0].kind != Tok::Ident || sub[0].text != "assert")
      throw FrontendError(t.loc, "unsupported annotation");
    // Drop `assert` and the terminating `;`.
    if (sub.size() < 3 || sub[sub.size() - 2].text != ";")
      throw FrontendError(sub.back().loc, "annotation must end with ';'");
    std::vector<Token> body(sub.begin() + 1, sub.end() - 2);
    body.push_back(sub.back());
    Parser inner(std::move(body), prog_);
    auto s = make_stmt(StmtKind::Assert, t.loc);
    s->pred = inner.annotation_predicate();
    return s;
  }

  // Expressions.
  ExprPtr expr() { return ternary(); }

  ExprPtr ternary() {
    ExprPtr c = binary(0);
    if (!is_punct("?"))
      return c;
    Loc loc = take().loc;
    auto e = make_expr(ExprKind::Cond, loc);
    ExprPtr a = expr();
    expect(":");
    ExprPtr b = ternary();
    e->args = {c, a, b};
    return e;
  }

  struct Level {
    std::vector<std::pair<const char *, BinOp>> ops;
  };

  static const std::vector<Level> &levels() {
    static const std::vector<Level> l = {
        {{{"||", BinOp::Or}}},
        {{{"&&", BinOp::And}}},
        {{{"==", BinOp::Eq}, {"!=", BinOp::Ne}}},
        {{{"<", BinOp::Lt}, {"<=", BinOp::Le}, {">", BinOp::Gt}, {">=", BinOp::Ge}}},
        {{{"+", BinOp::Add}, {"-", BinOp::Sub}}},
        {{{"*", BinOp::Mul}, {"/", BinOp::Div}, {"%", BinOp::Mod}}},
    };
    return l;
  }

  ExprPtr binary(std::size_t level) {
    if (level == levels().size())
      return unary();
    ExprPtr lhs = binary(level + 1);
    for (;;) {
      const std::pair<const char *, BinOp> *hit = nullptr;
      for (const auto &op : levels()[level].ops)
        if (is_punct(op.first))
          hit = &op;
      if (!hit)
        return lhs;
      Loc loc = take().loc;
      auto e = make_expr(ExprKind::Binary, loc);
      e->binop = hit->second;
      e->args = {lhs, binary(level + 1)};
      lhs = e;
    }
  }

  ExprPtr unary() {
    Loc loc = cur().loc;
    if (is_punct("-") || is_punct("+") || is_punct("!")) {
      std::string op = take().text;
      auto e = make_expr(ExprKind::Unary, loc);
      e->unop = op == "-" ? UnOp::Neg : op == "+" ? UnOp::Plus : UnOp::Not;
      e->args = {unary()};
      return e;
    }
    if (is_punct("(") && ahead(1).kind == Tok::Ident && is_type_word(ahead(1).text)) {
      take();
      auto e = make_expr(ExprKind::Cast, loc);
      e->type.scalar = type_spec();
      if (e->type.scalar == Scalar::Void)
        fail("cast to void");
      expect(")");
      e->args = {unary()};
      return e;
    }
    return postfix();
  }

  ExprPtr postfix() {
    Loc loc = cur().loc;
    if (cur().kind == Tok::Int || cur().kind == Tok::Float) {
      Token t = take();
      auto e = make_expr(t.kind == Tok::Int ? ExprKind::IntLit : ExprKind::FloatLit, loc);
      e->text = t.text;
      std::string digits = t.text;
      if (t.kind == Tok::Float) {
        if (digits.back() == 'f' || digits.back() == 'F')
          digits.pop_back();
      } else {
        digits = strip_int_suffix(digits);
      }
      e->value = Rational::parse(digits);
      return e;
    }
    if (is_punct("(")) {
      take();
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    Token name = expect_ident();
    if (is_punct("(")) {
      take();
      auto e = make_expr(ExprKind::Call, loc);
      e->name = name.text;
      if (!is_punct(")"))
        for (;;) {
          e->args.push_back(expr());
          if (!is_punct(","))
            break;
          take();
        }
      expect(")");
      return e;
    }
    if (is_punct("[")) {
      take();
      auto e = make_expr(ExprKind::Index, loc);
      e->name = name.text;
      e->args = {expr()};
      expect("]");
      if (is_punct("["))
        fail("multi-dimensional arrays are not supported");
      return e;
    }
    auto e = make_expr(ExprKind::Var, loc);
    e->name = name.text;
    return e;
  }

  // Annotation predicates.
  std::vector<std::vector<std::string>> binders_;

  bool is_binder(const std::string &n) const {
    for (const auto &scope : binders_)
      for (const auto &b : scope)
        if (b == n)
          return true;
    return false;
  }

  PredPtr make_pred(PredKind k, Loc loc) {
    auto p = std::make_shared<Pred>();
    p->kind = k;
    p->loc = loc;
    return p;
  }

  TermPtr make_term(TermKind k, Loc loc) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->loc = loc;
    t->id = fresh_id();
    return t;
  }

  PredPtr pred() {
    if (is_word("\\let"))
      return let_pred();
    PredPtr lhs = or_pred();
    if (is_punct("==>")) {
      Loc loc = take().loc;
      auto p = make_pred(PredKind::Implies, loc);
      p->preds = {lhs, pred()};
      return p;
    }
    return lhs;
  }

  PredPtr let_pred() {
    Loc loc = take().loc;
    auto p = make_pred(PredKind::Let, loc);
    if (is_punct("(")) {
      take();
      p->names.push_back(expect_ident().text);
      expect(",");
      p->names.push_back(expect_ident().text);
      expect(")");
    } else {
      p->names.push_back(expect_ident().text);
    }
    for (const auto &n : p->names)
      if (is_binder(n))
        fail("binder '" + n + "' shadows an enclosing binder");
    expect("=");
    TermPtr bound = term();
    bool tuple_term = bound->kind == TermKind::Builtin;
    if (tuple_term != (p->names.size() == 2))
      throw FrontendError(loc, tuple_term ? "accuracy_get_* yields a pair and needs a tuple binder"
                                          : "tuple binder needs an accuracy_get_* term");
    p->terms = {bound};
    expect(";");
    binders_.push_back(p->names);
    p->preds = {pred()};
    binders_.pop_back();
    return p;
  }

  PredPtr or_pred() {
    PredPtr lhs = and_pred();
    while (is_punct("||")) {
      Loc loc = take().loc;
      auto p = make_pred(PredKind::Or, loc);
      p->preds = {lhs, and_pred()};
      lhs = p;
    }
    return lhs;
  }

  PredPtr and_pred() {
    PredPtr lhs = unary_pred();
    while (is_punct("&&")) {
      Loc loc = take().loc;
      auto p = make_pred(PredKind::And, loc);
      p->preds = {lhs, unary_pred()};
      lhs = p;
    }
    return lhs;
  }

  PredPtr unary_pred() {
    Loc loc = cur().loc;
    if (is_punct("!")) {
      take();
      auto p = make_pred(PredKind::Not, loc);
      p->preds = {unary_pred()};
      return p;
    }
    if (is_word("\\true") || is_word("\\false")) {
      bool t = take().text == "\\true";
      return make_pred(t ? PredKind::True : PredKind::False, loc);
    }
    if (is_word("\\let"))
      return let_pred();
    if (cur().kind == Tok::Ident) {
      if (const BuiltinSig *b = find_builtin(cur().text); b && b->role == BuiltinRole::Predicate) {
        take();
        auto p = make_pred(PredKind::Builtin, loc);
        p->name = b->name;
        p->terms = call_args(b->name, b->arity);
        return p;
      }
    }
    if (is_punct("(")) {
      // Either a parenthesized predicate or a relation starting with a
      // parenthesized term.
      std::size_t save = pos_;
      int save_id = prog_.next_id;
      try {
        take();
        PredPtr inner = pred();
        expect(")");
        if (!at_relation_op() && !at_term_op())
          return inner;
      } catch (const FrontendError &) {
      }
      pos_ = save;
      prog_.next_id = save_id;
    }
    return relation();
  }

  bool at_relation_op() const {
    return is_punct("<") || is_punct("<=") || is_punct(">") || is_punct(">=") || is_punct("==") || is_punct("!=");
  }
  bool at_term_op() const { return is_punct("+") || is_punct("-") || is_punct("*") || is_punct("/") || is_punct("%"); }

  PredPtr relation() {
    Loc loc = cur().loc;
    TermPtr lhs = term();
    if (!at_relation_op())
      fail("expected a comparison in annotation, found " + describe(cur()));
    PredPtr result;
    while (at_relation_op()) {
      Token op = take();
      static const std::pair<const char *, BinOp> rels[] = {{"<", BinOp::Lt},  {"<=", BinOp::Le}, {">", BinOp::Gt},
                                                            {">=", BinOp::Ge}, {"==", BinOp::Eq}, {"!=", BinOp::Ne}};
      auto p = make_pred(PredKind::Rel, loc);
      for (const auto &[s, b] : rels)
        if (op.text == s)
          p->op = b;
      TermPtr rhs = term();
      p->terms = {lhs, rhs};
      if (result) {
        auto conj = make_pred(PredKind::And, loc);
        conj->preds = {result, p};
        result = conj;
      } else {
        result = p;
      }
      lhs = rhs;
    }
    return result;
  }

  std::vector<TermPtr> call_args(const std::string &name, int arity) {
    Loc loc = cur().loc;
    expect("(");
    std::vector<TermPtr> args;
    if (!is_punct(")"))
      for (;;) {
        args.push_back(term());
        if (!is_punct(","))
          break;
        take();
      }
    expect(")");
    if (static_cast<int>(args.size()) != arity)
      throw FrontendError(loc, name + " expects " + std::to_string(arity) + " argument(s), got " +
                                   std::to_string(args.size()));
    return args;
  }

  TermPtr term() {
    TermPtr lhs = mul_term();
    while (is_punct("+") || is_punct("-")) {
      Token op = take();
      auto t = make_term(TermKind::Binary, op.loc);
      t->op = op.text == "+" ? BinOp::Add : BinOp::Sub;
      t->args = {lhs, mul_term()};
      lhs = t;
    }
    return lhs;
  }

  TermPtr mul_term() {
    TermPtr lhs = unary_term();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      Token op = take();
      auto t = make_term(TermKind::Binary, op.loc);
      t->op = op.text == "*" ? BinOp::Mul : op.text == "/" ? BinOp::Div : BinOp::Mod;
      t->args = {lhs, unary_term()};
      lhs = t;
    }
    return lhs;
  }

  TermPtr unary_term() {
    Loc loc = cur().loc;
    if (is_punct("-")) {
      take();
      auto t = make_term(TermKind::Neg, loc);
      t->args = {unary_term()};
      return t;
    }
    if (is_punct("+")) {
      take();
      return unary_term();
    }
    if (cur().kind == Tok::Int || cur().kind == Tok::Float) {
      Token tok = take();
      auto t = make_term(tok.kind == Tok::Int ? TermKind::Int : TermKind::Rat, loc);
      t->text = tok.text;
      std::string digits = tok.text;
      if (tok.kind == Tok::Int)
        digits = strip_int_suffix(digits);
      else if (digits.back() == 'f' || digits.back() == 'F')
        throw FrontendError(loc, "annotation constants are exact; drop the 'f' suffix");
      t->value = Rational::parse(digits);
      return t;
    }
    if (is_punct("(")) {
      take();
      TermPtr t = term();
      expect(")");
      return t;
    }
    Token name = take();
    if (name.kind != Tok::Ident)
      throw FrontendError(loc, "expected a term, found " + describe(name));
    if (name.text == "min" || name.text == "max" || name.text == "\\min" || name.text == "\\max") {
      auto t = make_term(TermKind::MinMax, loc);
      t->name = name.text[0] == '\\' ? name.text.substr(1) : name.text;
      t->args = call_args(name.text, 2);
      return t;
    }
    if (is_punct("(")) {
      const BuiltinSig *b = find_builtin(name.text);
      if (!b)
        throw FrontendError(loc, "unknown built-in '" + name.text + "'");
      if (b->role != BuiltinRole::Term)
        throw FrontendError(loc, name.text + " is a predicate, not a term");
      auto t = make_term(TermKind::Builtin, loc);
      t->name = b->name;
      t->args = call_args(b->name, b->arity);
      return t;
    }
    if (name.text[0] == '\\')
      throw FrontendError(loc, "unknown construct '" + name.text + "'");
    if (is_binder(name.text)) {
      auto t = make_term(TermKind::Binder, loc);
      t->name = name.text;
      return t;
    }
    auto t = make_term(TermKind::LVal, loc);
    t->name = name.text;
    if (is_punct("[")) {
      take();
      t->args = {term()};
      expect("]");
    }
    return t;
  }

  // Return normalization: a function exits through a single trailing return.
  void normalize_returns(Function &f) {
    auto &body = f.body->body;
    int count = 0;
    walk_stmts(f.body, [&](const StmtPtr &s) {
      if (s->kind == StmtKind::Return)
        ++count;
    });
    check_no_return_in_loops(f.body, false);
    if (count == 0) {
      if (f.ret.scalar != Scalar::Void && f.name != "main")
        throw FrontendError(f.loc, "function '" + f.name + "' has no return");
      return;
    }
    if (count == 1 && !body.empty() && body.back()->kind == StmtKind::Return)
      return;
    if (f.ret.scalar != Scalar::Void && !always_returns(body))
      throw FrontendError(f.loc, "not every path of '" + f.name + "' ends with a return");
    // Rewrite tail returns into assignments to a result variable.
    const std::string ret = "__ret";
    if (f.ret.scalar != Scalar::Void) {
      auto d = make_stmt(StmtKind::Decl, f.loc);
      d->name = ret;
      d->type.scalar = f.ret.scalar;
      body.insert(body.begin(), d);
    }
    rewrite_tail(body, f, ret);
    auto r = make_stmt(StmtKind::Return, f.loc);
    if (f.ret.scalar != Scalar::Void) {
      auto v = make_expr(ExprKind::Var, f.loc);
      v->name = ret;
      r->expr = v;
    }
    body.push_back(r);
  }

  static bool always_returns(const std::vector<StmtPtr> &list) {
    if (list.empty())
      return false;
    const StmtPtr &s = list.back();
    switch (s->kind) {
    case StmtKind::Return: return true;
    case StmtKind::Block:
    case StmtKind::Section: return always_returns(s->body);
    case StmtKind::If: return s->else_s && always_returns(s->then_s->body) && always_returns(s->else_s->body);
    default: return false;
    }
  }

  void check_no_return_in_loops(const StmtPtr &s, bool in_loop) {
    if (!s)
      return;
    if (s->kind == StmtKind::Return && in_loop)
      throw FrontendError(s->loc, "return inside a loop is not supported");
    bool loop = in_loop || s->kind == StmtKind::While || s->kind == StmtKind::DoWhile;
    for (const auto &c : s->body)
      check_no_return_in_loops(c, loop);
    check_no_return_in_loops(s->then_s, loop);
    check_no_return_in_loops(s->else_s, loop);
  }

  /// Rewrites returns in tail position of `list`; any other return is an error.
  void rewrite_tail(std::vector<StmtPtr> &list, const Function &f, const std::string &ret) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      StmtPtr &s = list[i];
      const bool last = i + 1 == list.size();
      if (s->kind == StmtKind::Return) {
        if (!last)
          throw FrontendError(s->loc, "statement after return");
        if (s->expr) {
          auto a = make_stmt(StmtKind::Assign, s->loc);
          auto v = make_expr(ExprKind::Var, s->loc);
          v->name = ret;
          a->target = v;
          a->expr = s->expr;
          s = a;
        } else {
          list.pop_back();
        }
        return;
      }
      bool has_return = false;
      walk_stmts(s, [&](const StmtPtr &c) { has_return = has_return || c->kind == StmtKind::Return; });
      if (!has_return)
        continue;
      if (!last)
        throw FrontendError(s->loc, "return is only supported in tail position");
      if (s->kind == StmtKind::Block || s->kind == StmtKind::Section) {
        rewrite_tail(s->body, f, ret);
      } else if (s->kind == StmtKind::If) {
        rewrite_tail(s->then_s->body, f, ret);
        if (s->else_s)
          rewrite_tail(s->else_s->body, f, ret);
      } else {
        throw FrontendError(s->loc, "return is only supported in tail position");
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program &prog_;
};

} // namespace

const BuiltinSig *find_builtin(std::string_view name) {
  for (const auto &b : kBuiltins)
    if (b.name == name)
      return &b;
  return nullptr;
}

Program parse_program(std::string_view source) {
  Program prog;
  Parser p(Lexer(source, {1, 1}).run(), prog);
  p.program();
  return prog;
}

PredPtr parse_predicate(std::string_view text, Program &ids) {
  Parser p(Lexer(text, {1, 1}).run(), ids);
  return p.annotation_predicate();
}

} // namespace fldx
