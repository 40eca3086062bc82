#include "mgres/milp/lp_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mgres::milp {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string var_name(const Variable& v) {
  std::string base = v.name.empty() ? "x" + std::to_string(v.id) : v.name;
  std::string out;
  out.reserve(base.size());
  for (char c : base) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "v_" + out;
  return out;
}

void write_terms(std::ostringstream& os, const std::vector<std::pair<int, double>>& terms,
                 const MilpProblem& p) {
  bool first = true;
  for (const auto& [id, c] : terms) {
    if (c == 0.0) continue;
    if (first) {
      if (c < 0) os << "- ";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    double a = std::abs(c);
    if (a != 1.0) os << num(a) << " ";
    os << var_name(p.variables[id]);
  }
  if (first) os << "0 " << var_name(p.variables[0]);
}

}  // namespace

std::string write_lp_format(const MilpProblem& p) {
  std::ostringstream os;
  os << (p.sense == ObjSense::Maximize ? "Maximize" : "Minimize") << "\n obj: ";
  write_terms(os, p.objective, p);
  os << "\nSubject To\n";
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    const LinearConstraint& c = p.constraints[i];
    os << " " << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ": ";
    write_terms(os, c.coeffs, p);
    switch (c.sense) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::Equal: os << " = "; break;
      case Sense::GreaterEqual: os << " >= "; break;
    }
    os << num(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const Variable& v : p.variables) {
    if (v.kind == VarKind::Binary) continue;
    os << " ";
    if (std::isinf(v.lower) && std::isinf(v.upper)) os << var_name(v) << " free";
    else if (std::isinf(v.lower)) os << "-inf <= " << var_name(v) << " <= " << num(v.upper);
    else os << num(v.lower) << " <= " << var_name(v) << " <= "
            << (std::isinf(v.upper) ? "+inf" : num(v.upper));
    os << "\n";
  }
  bool any_bin = false;
  for (const Variable& v : p.variables) {
    if (v.kind != VarKind::Binary) continue;
    if (!any_bin) {
      os << "Binary\n";
      any_bin = true;
    }
    os << " " << var_name(v) << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace mgres::milp
