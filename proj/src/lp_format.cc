#include <charconv>
#include <cmath>
#include <string>

#include "gridhorizon/lp.h"

namespace gridhorizon::lp {
namespace {

void AppendNumber(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void AppendTerm(std::string& out, double coef, int var, bool first) {
  if (first) {
    out += coef < 0 ? " -" : " ";
  } else {
    out += coef < 0 ? " - " : " + ";
  }
  AppendNumber(out, std::abs(coef));
  out += " x";
  out += std::to_string(var);
}

}  // namespace

std::string ToLpFormat(const LinearProgram& program) {
  std::string out = "\\ gridhorizon window program\nMinimize\n obj:";
  bool first = true;
  for (int j = 0; j < program.num_variables(); ++j) {
    const double c = program.variable(j).cost;
    if (c == 0.0) continue;
    AppendTerm(out, c, j, first);
    first = false;
  }
  if (first) out += " 0 x0";
  out += "\nSubject To\n";
  for (int r = 0; r < program.num_constraints(); ++r) {
    const Row& row = program.row(r);
    out += " c" + std::to_string(r) + ":";
    bool f = true;
    for (const Term& t : row.terms) {
      AppendTerm(out, t.coef, t.var, f);
      f = false;
    }
    if (f) out += " 0 x0";
    switch (row.sense) {
      case Sense::kLessEqual:
        out += " <= ";
        break;
      case Sense::kGreaterEqual:
        out += " >= ";
        break;
      case Sense::kEqual:
        out += " = ";
        break;
    }
    AppendNumber(out, row.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (int j = 0; j < program.num_variables(); ++j) {
    const Variable& v = program.variable(j);
    const std::string name = "x" + std::to_string(j);
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out += " " + name + " free\n";
    } else if (v.lower == v.upper) {
      out += " " + name + " = ";
      AppendNumber(out, v.lower);
      out += '\n';
    } else {
      out += ' ';
      if (std::isinf(v.lower)) {
        out += "-inf";
      } else {
        AppendNumber(out, v.lower);
      }
      out += " <= " + name + " <= ";
      if (std::isinf(v.upper)) {
        out += "+inf";
      } else {
        AppendNumber(out, v.upper);
      }
      out += '\n';
    }
  }
  out += "End\n";
  return out;
}

}  // namespace gridhorizon::lp
