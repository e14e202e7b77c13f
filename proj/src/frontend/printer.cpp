#include "fldx/frontend/printer.hpp"

#include <sstream>

namespace fldx {

namespace {

int prec(BinOp op) {
  switch (op) {
  case BinOp::Or: return 2;
  case BinOp::And: return 3;
  case BinOp::Eq:
  case BinOp::Ne: return 4;
  case BinOp::Lt:
  case BinOp::Le:
  case BinOp::Gt:
  case BinOp::Ge: return 5;
  case BinOp::Add:
  case BinOp::Sub: return 6;
  default: return 7;
  }
}

int prec(const Expr &e) {
  switch (e.kind) {
  case ExprKind::Cond: return 1;
  case ExprKind::Binary: return prec(e.binop);
  case ExprKind::Unary:
  case ExprKind::Cast: return 8;
  default: return 9;
  }
}

std::string wrap(const Expr &e, int min_prec) {
  std::string s = print_expr(e);
  return prec(e) < min_prec ? "(" + s + ")" : s;
}

std::string join(const std::vector<std::string> &xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? ", " : "") + xs[i];
  return out;
}

int prec(const Term &t) {
  switch (t.kind) {
  case TermKind::Binary: return prec(t.op);
  case TermKind::Neg: return 8;
  default: return 9;
  }
}

std::string wrap(const Term &t, int min_prec) {
  std::string s = print_term(t);
  return prec(t) < min_prec ? "(" + s + ")" : s;
}

int prec(const Pred &p) {
  switch (p.kind) {
  case PredKind::Let: return 0;
  case PredKind::Implies: return 1;
  case PredKind::Or: return 2;
  case PredKind::And: return 3;
  default: return 4;
  }
}

std::string wrap(const Pred &p, int min_prec) {
  std::string s = print_pred(p);
  return prec(p) < min_prec ? "(" + s + ")" : s;
}

class StmtPrinter {
public:
  explicit StmtPrinter(std::ostringstream &os) : os_(os) {}

  void list(const std::vector<StmtPtr> &stmts, int depth) {
    for (const auto &s : stmts)
      stmt(*s, depth);
  }

  void stmt(const Stmt &s, int depth) {
    const std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
    switch (s.kind) {
    case StmtKind::Block:
      os_ << ind << "{\n";
      list(s.body, depth + 1);
      os_ << ind << "}\n";
      break;
    case StmtKind::Decl: os_ << ind << decl(s) << ";\n"; break;
    case StmtKind::Assign:
    case StmtKind::Call:
    case StmtKind::Return: os_ << ind << describe_stmt(s) << "\n"; break;
    case StmtKind::If:
      os_ << ind << "if (" << print_expr(*s.expr) << ") ";
      braced(*s.then_s, depth);
      if (s.else_s) {
        os_ << ind << "else ";
        braced(*s.else_s, depth);
      }
      break;
    case StmtKind::While:
      os_ << ind << "while (" << print_expr(*s.expr) << ") ";
      braced(*s.then_s, depth);
      break;
    case StmtKind::DoWhile:
      os_ << ind << "do ";
      braced(*s.then_s, depth, false);
      os_ << " while (" << print_expr(*s.expr) << ");\n";
      break;
    case StmtKind::Assert: os_ << ind << "/*@ assert " << print_pred(*s.pred) << "; */\n"; break;
    case StmtKind::Section:
      os_ << ind << "/*@ split " << s.section.id << " save(" << join(s.section.save_list) << ") */\n";
      list(s.body, depth);
      os_ << ind << "/*@ merge " << s.section.id << " merge(" << join(s.section.merge_list) << ") */\n";
      break;
    }
  }

  static std::string decl(const Stmt &s) {
    std::string out = to_string(s.type.scalar) + " " + s.name;
    if (s.type.is_array())
      out += "[" + std::to_string(s.type.array) + "]";
    if (s.expr)
      out += " = " + print_expr(*s.expr);
    if (!s.init_list.empty()) {
      std::vector<std::string> xs;
      for (const auto &e : s.init_list)
        xs.push_back(print_expr(*e));
      out += " = {" + join(xs) + "}";
    }
    return out;
  }

private:
  void braced(const Stmt &s, int depth, bool newline = true) {
    const std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
    os_ << "{\n";
    if (s.kind == StmtKind::Block)
      list(s.body, depth + 1);
    else
      stmt(s, depth + 1);
    os_ << ind << "}";
    if (newline)
      os_ << "\n";
  }

  std::ostringstream &os_;
};

} // namespace

std::string print_expr(const Expr &e) {
  switch (e.kind) {
  case ExprKind::IntLit:
  case ExprKind::FloatLit: return e.text;
  case ExprKind::Var: return e.name;
  case ExprKind::Index: return e.name + "[" + print_expr(*e.args[0]) + "]";
  case ExprKind::Unary: {
    const Expr &a = *e.args[0];
    std::string inner = a.kind == ExprKind::Unary ? "(" + print_expr(a) + ")" : wrap(a, 8);
    return to_string(e.unop) + inner;
  }
  case ExprKind::Binary: {
    const int p = prec(e.binop);
    return wrap(*e.args[0], p) + " " + to_string(e.binop) + " " + wrap(*e.args[1], p + 1);
  }
  case ExprKind::Cond:
    return wrap(*e.args[0], 2) + " ? " + print_expr(*e.args[1]) + " : " + wrap(*e.args[2], 1);
  case ExprKind::Cast: return "(" + to_string(e.type.scalar) + ")" + wrap(*e.args[0], 8);
  case ExprKind::Call: {
    std::vector<std::string> xs;
    for (const auto &a : e.args)
      xs.push_back(print_expr(*a));
    return e.name + "(" + join(xs) + ")";
  }
  }
  return "?";
}

std::string print_term(const Term &t) {
  switch (t.kind) {
  case TermKind::Int:
  case TermKind::Rat: return t.text;
  case TermKind::Binder: return t.name;
  case TermKind::LVal: return t.args.empty() ? t.name : t.name + "[" + print_term(*t.args[0]) + "]";
  case TermKind::Neg: {
    const Term &a = *t.args[0];
    return "-" + (a.kind == TermKind::Neg || a.kind == TermKind::Binary ? "(" + print_term(a) + ")" : print_term(a));
  }
  case TermKind::Binary: {
    const int p = prec(t.op);
    return wrap(*t.args[0], p) + " " + to_string(t.op) + " " + wrap(*t.args[1], p + 1);
  }
  case TermKind::Builtin:
  case TermKind::MinMax: {
    std::vector<std::string> xs;
    for (const auto &a : t.args)
      xs.push_back(print_term(*a));
    return t.name + "(" + join(xs) + ")";
  }
  }
  return "?";
}

std::string print_pred(const Pred &p) {
  switch (p.kind) {
  case PredKind::True: return "\\true";
  case PredKind::False: return "\\false";
  case PredKind::Rel: return print_term(*p.terms[0]) + " " + to_string(p.op) + " " + print_term(*p.terms[1]);
  case PredKind::And: return wrap(*p.preds[0], 3) + " && " + wrap(*p.preds[1], 4);
  case PredKind::Or: return wrap(*p.preds[0], 2) + " || " + wrap(*p.preds[1], 3);
  case PredKind::Implies: return wrap(*p.preds[0], 2) + " ==> " + wrap(*p.preds[1], 1);
  case PredKind::Not: return "!" + wrap(*p.preds[0], 4);
  case PredKind::Let: {
    std::string names = p.names.size() == 1 ? p.names[0] : "(" + join(p.names) + ")";
    return "\\let " + names + " = " + print_term(*p.terms[0]) + "; " + print_pred(*p.preds[0]);
  }
  case PredKind::Builtin: {
    std::vector<std::string> xs;
    for (const auto &a : p.terms)
      xs.push_back(print_term(*a));
    return p.name + "(" + join(xs) + ")";
  }
  }
  return "?";
}

std::string describe_stmt(const Stmt &s) {
  switch (s.kind) {
  case StmtKind::Decl: return StmtPrinter::decl(s) + ";";
  case StmtKind::Assign:
    return print_expr(*s.target) + " " + (s.compound ? to_string(*s.compound) : "") + "= " + print_expr(*s.expr) +
           ";";
  case StmtKind::Call: return print_expr(*s.expr) + ";";
  case StmtKind::Return: return s.expr ? "return " + print_expr(*s.expr) + ";" : "return;";
  case StmtKind::If: return "if (" + print_expr(*s.expr) + ")";
  case StmtKind::While: return "while (" + print_expr(*s.expr) + ")";
  case StmtKind::DoWhile: return "do ... while (" + print_expr(*s.expr) + ")";
  case StmtKind::Assert: return "assert " + print_pred(*s.pred);
  case StmtKind::Block: return "{ ... }";
  case StmtKind::Section: return "section " + std::to_string(s.section.id);
  }
  return "?";
}

std::string print_program(const Program &p) {
  std::ostringstream os;
  StmtPrinter sp(os);
  for (const auto &g : p.globals)
    sp.stmt(*g, 0);
  if (!p.globals.empty())
    os << "\n";
  for (std::size_t i = 0; i < p.functions.size(); ++i) {
    const Function &f = p.functions[i];
    if (i)
      os << "\n";
    std::vector<std::string> ps;
    for (const auto &pa : f.params) {
      std::string s = to_string(pa.type.scalar) + " " + pa.name;
      if (pa.type.array == 0)
        s += "[]";
      else if (pa.type.array > 0)
        s += "[" + std::to_string(pa.type.array) + "]";
      ps.push_back(s);
    }
    os << to_string(f.ret.scalar) << " " << f.name << "(" << (ps.empty() ? "void" : join(ps)) << ") {\n";
    sp.list(f.body->body, 1);
    os << "}\n";
  }
  return os.str();
}

} // namespace fldx
