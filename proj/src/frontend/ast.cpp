#include "fldx/frontend/ast.hpp"

namespace fldx {

std::string to_string(Scalar s) {
  switch (s) {
  case Scalar::Void: return "void";
  case Scalar::Char: return "char";
  case Scalar::UChar: return "unsigned char";
  case Scalar::Short: return "short";
  case Scalar::UShort: return "unsigned short";
  case Scalar::Int: return "int";
  case Scalar::UInt: return "unsigned int";
  case Scalar::Long: return "long";
  case Scalar::ULong: return "unsigned long";
  case Scalar::Float: return "float";
  case Scalar::Double: return "double";
  }
  return "?";
}

bool is_float(Scalar s) { return s == Scalar::Float || s == Scalar::Double; }
bool is_integral(Scalar s) { return s != Scalar::Void && !is_float(s); }
bool is_unsigned(Scalar s) {
  return s == Scalar::UChar || s == Scalar::UShort || s == Scalar::UInt || s == Scalar::ULong;
}

int int_bits(Scalar s) {
  switch (s) {
  case Scalar::Char:
  case Scalar::UChar: return 8;
  case Scalar::Short:
  case Scalar::UShort: return 16;
  case Scalar::Int:
  case Scalar::UInt: return 32;
  case Scalar::Long:
  case Scalar::ULong: return 64;
  default: return 0;
  }
}

Rational int_min(Scalar s) {
  if (is_unsigned(s))
    return Rational(0);
  return -Rational(BigInt::pow(BigInt(2), static_cast<unsigned long>(int_bits(s) - 1)));
}

Rational int_max(Scalar s) {
  const int bits = int_bits(s);
  if (is_unsigned(s))
    return Rational(BigInt::pow(BigInt(2), static_cast<unsigned long>(bits))) - Rational(1);
  return Rational(BigInt::pow(BigInt(2), static_cast<unsigned long>(bits - 1))) - Rational(1);
}

std::string Type::str() const {
  std::string s = to_string(scalar);
  if (array == 0)
    s += "[]";
  else if (array > 0)
    s += "[" + std::to_string(array) + "]";
  return s;
}

std::string to_string(UnOp op) {
  switch (op) {
  case UnOp::Neg: return "-";
  case UnOp::Plus: return "+";
  case UnOp::Not: return "!";
  }
  return "?";
}

std::string to_string(BinOp op) {
  switch (op) {
  case BinOp::Add: return "+";
  case BinOp::Sub: return "-";
  case BinOp::Mul: return "*";
  case BinOp::Div: return "/";
  case BinOp::Mod: return "%";
  case BinOp::Lt: return "<";
  case BinOp::Le: return "<=";
  case BinOp::Gt: return ">";
  case BinOp::Ge: return ">=";
  case BinOp::Eq: return "==";
  case BinOp::Ne: return "!=";
  case BinOp::And: return "&&";
  case BinOp::Or: return "||";
  }
  return "?";
}

bool is_comparison(BinOp op) {
  return op == BinOp::Lt || op == BinOp::Le || op == BinOp::Gt || op == BinOp::Ge || op == BinOp::Eq ||
         op == BinOp::Ne;
}

bool is_arithmetic(BinOp op) {
  return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul || op == BinOp::Div || op == BinOp::Mod;
}

const Function *Program::find(const std::string &name) const {
  for (const auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

std::vector<ExprPtr> own_exprs(const Stmt &s) {
  std::vector<ExprPtr> out;
  if (s.expr)
    out.push_back(s.expr);
  if (s.target)
    out.push_back(s.target);
  for (const auto &e : s.init_list)
    out.push_back(e);
  return out;
}

} // namespace fldx
