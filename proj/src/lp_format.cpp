#include "fpcert/lpsolve.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace fpcert {

namespace {

std::string approx_decimal(const Rational& q) {
  std::ostringstream out;
  out.precision(17);
  out << to_double(q);
  return out.str();
}

// Writes " + 0.5 name" and records an exact note when the decimal does not terminate.
void write_term(std::ostream& out, const Rational& v, const std::string& name, std::vector<std::string>& notes,
                const std::string& where) {
  out << (v < 0 ? " - " : " + ");
  const Rational mag = abs(v);
  if (has_finite_decimal(mag)) {
    out << to_exact_decimal(mag);
  } else {
    out << approx_decimal(mag);
    notes.push_back("\\ exact " + where + " " + name + " " + to_string(v));
  }
  out << ' ' << name;
}

std::string rhs_text(const Rational& v, std::vector<std::string>& notes, const std::string& where) {
  if (has_finite_decimal(v)) return to_exact_decimal(v);
  notes.push_back("\\ exact " + where + " rhs " + to_string(v));
  return approx_decimal(v);
}

std::string row_name(const RationalLP& lp, std::size_t i) {
  return lp.row_names.empty() ? "r" + std::to_string(i) : lp.row_names[i];
}

std::string col_name(const RationalLP& lp, std::size_t j) {
  return lp.column_names.empty() ? "c" + std::to_string(j) : lp.column_names[j];
}

}  // namespace

void write_lp(std::ostream& out, const RationalLP& lp) {
  lp.validate();
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows(lp.rows);
  for (std::size_t j = 0; j < lp.cols(); ++j)
    for (const auto& [r, v] : lp.columns[j]) rows[r].emplace_back(j, v);

  out << "\\ rows " << lp.rows << " columns " << lp.cols() << "\n";
  out << (lp.sense == Sense::Maximize ? "Maximize" : "Minimize") << "\n";
  std::vector<std::string> notes;
  out << " obj:";
  bool any = false;
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    if (lp.c[j] == 0) continue;
    write_term(out, lp.c[j], col_name(lp, j), notes, "obj");
    any = true;
  }
  if (!any) out << " 0 " << (lp.cols() ? col_name(lp, 0) : "t");
  out << "\n";
  for (const auto& n : notes) out << n << "\n";

  out << "Subject To\n";
  for (std::size_t i = 0; i < lp.rows; ++i) {
    notes.clear();
    const std::string name = row_name(lp, i);
    out << ' ' << name << ':';
    if (rows[i].empty()) out << " 0 " << (lp.cols() ? col_name(lp, 0) : "t");
    for (const auto& [j, v] : rows[i]) write_term(out, v, col_name(lp, j), notes, name);
    out << " = " << rhs_text(lp.b[i], notes, name) << "\n";
    for (const auto& n : notes) out << n << "\n";
  }

  out << "Bounds\n";
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    if (lp.bounds[j] == ColumnBound::Free)
      out << ' ' << col_name(lp, j) << " free\n";
    else
      out << ' ' << col_name(lp, j) << " >= 0\n";
  }
  out << "End\n";
}

RationalLP read_lp(std::istream& in) {
  enum class Section { None, Objective, Constraints, Bounds, Done } section = Section::None;

  RationalLP lp;
  std::map<std::string, std::size_t> col_index;
  std::vector<std::string> col_order;
  std::vector<std::map<std::size_t, Rational>> row_entries;
  std::map<std::size_t, Rational> obj;
  std::map<std::string, ColumnBound> bounds;
  std::vector<std::string> bound_order;
  std::map<std::string, std::size_t> row_index;
  // (where, column-or-"rhs") -> exact value
  std::map<std::pair<std::string, std::string>, Rational> exact;

  auto column = [&](const std::string& name) {
    auto [it, inserted] = col_index.try_emplace(name, col_order.size());
    if (inserted) col_order.push_back(name);
    return it->second;
  };

  // Parses "+ 0.5 x - 2 y" style term lists into `terms`.
  auto parse_terms = [&](std::istringstream& ss, std::map<std::size_t, Rational>& terms, std::string& stop) {
    Rational sign = 1, coef = 1;
    bool have_coef = false, dangling = false;
    std::string tok;
    while (ss >> tok) {
      if (tok == "=" || tok == ">=" || tok == "<=") {
        if (dangling) throw LPFormatError("operator without a term before '" + tok + "'");
        stop = tok;
        return;
      }
      dangling = true;
      if (tok == "+") continue;
      if (tok == "-") {
        sign = -sign;
        continue;
      }
      const char first = tok[0];
      if (std::isdigit(static_cast<unsigned char>(first)) || first == '.' || first == '-' || first == '+') {
        try {
          coef = parse_rational(tok);
        } catch (const RationalFormatError&) {
          throw LPFormatError("bad coefficient '" + tok + "'");
        }
        have_coef = true;
        continue;
      }
      terms[column(tok)] += sign * (have_coef ? coef : Rational(1));
      sign = 1;
      coef = 1;
      have_coef = false;
      dangling = false;
    }
    if (dangling) throw LPFormatError("expression ends with an operator");
  };

  std::string line;
  std::string pending;
  auto flush_constraint = [&](const std::string& text) {
    std::istringstream ss(text);
    std::string name;
    ss >> name;
    if (name.empty() || name.back() != ':') throw LPFormatError("constraint without a name: " + text);
    name.pop_back();
    std::map<std::size_t, Rational> terms;
    std::string op;
    parse_terms(ss, terms, op);
    if (op != "=") throw LPFormatError("only equality constraints are supported: " + text);
    std::string rhs;
    if (!(ss >> rhs)) throw LPFormatError("missing right-hand side: " + text);
    row_index[name] = lp.rows++;
    lp.row_names.push_back(name);
    lp.b.push_back(parse_rational(rhs));
    row_entries.push_back(std::move(terms));
  };

  while (std::getline(in, line)) {
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ')) trimmed.pop_back();
    if (trimmed.empty()) continue;
    if (trimmed.rfind("\\ exact ", 0) == 0) {
      std::istringstream ss(trimmed.substr(8));
      std::string where, what, value;
      ss >> where >> what >> value;
      exact[{where, what}] = parse_rational(value);
      continue;
    }
    if (trimmed[0] == '\\') continue;

    std::string lower;
    for (char ch : trimmed) lower.push_back(char(std::tolower(static_cast<unsigned char>(ch))));
    auto header = [&](Section next) {
      if (!pending.empty()) {
        flush_constraint(pending);
        pending.clear();
      }
      section = next;
    };
    if (lower == "maximize" || lower == "maximise" || lower == "max") {
      lp.sense = Sense::Maximize;
      header(Section::Objective);
      continue;
    }
    if (lower == "minimize" || lower == "minimise" || lower == "min") {
      lp.sense = Sense::Minimize;
      header(Section::Objective);
      continue;
    }
    if (lower == "subject to" || lower == "st" || lower == "s.t.") {
      header(Section::Constraints);
      continue;
    }
    if (lower == "bounds") {
      header(Section::Bounds);
      continue;
    }
    if (lower == "end") {
      header(Section::Done);
      continue;
    }

    switch (section) {
      case Section::Objective: {
        std::istringstream ss(trimmed);
        std::string first;
        ss >> first;
        if (first.back() != ':') ss = std::istringstream(trimmed);
        std::string stop;
        parse_terms(ss, obj, stop);
        break;
      }
      case Section::Constraints: {
        // A new constraint starts with "name:"; otherwise the line continues the previous one.
        std::istringstream ss(trimmed);
        std::string first;
        ss >> first;
        if (!first.empty() && first.back() == ':') {
          if (!pending.empty()) flush_constraint(pending);
          pending = trimmed;
        } else {
          pending += " " + trimmed;
        }
        break;
      }
      case Section::Bounds: {
        std::istringstream ss(trimmed);
        std::string name, kind;
        ss >> name >> kind;
        if (kind == "free" || kind == "Free" || kind == "FREE") {
          bounds[name] = ColumnBound::Free;
        } else if (kind == ">=") {
          std::string v;
          ss >> v;
          if (parse_rational(v) != 0) throw LPFormatError("only zero lower bounds are supported");
          bounds[name] = ColumnBound::Nonnegative;
        } else {
          throw LPFormatError("unsupported bound line: " + trimmed);
        }
        bound_order.push_back(name);
        column(name);
        break;
      }
      case Section::None:
      case Section::Done: throw LPFormatError("content outside a section: " + trimmed);
    }
  }
  if (!pending.empty()) flush_constraint(pending);

  // Column order follows the Bounds section, then first appearance.
  std::vector<std::string> names = bound_order;
  std::map<std::string, bool> seen;
  for (const auto& n : names) seen[n] = true;
  for (const auto& n : col_order)
    if (!seen.count(n)) names.push_back(n);

  std::vector<std::size_t> remap(col_order.size());
  for (std::size_t k = 0; k < names.size(); ++k) remap[col_index[names[k]]] = k;

  lp.columns.assign(names.size(), {});
  lp.c.assign(names.size(), Rational(0));
  lp.bounds.assign(names.size(), ColumnBound::Nonnegative);
  lp.column_names = names;
  for (std::size_t k = 0; k < names.size(); ++k)
    if (auto it = bounds.find(names[k]); it != bounds.end()) lp.bounds[k] = it->second;

  for (const auto& [j, v] : obj) {
    auto it = exact.find({"obj", col_order[j]});
    lp.c[remap[j]] = it != exact.end() ? it->second : v;
  }
  for (std::size_t i = 0; i < lp.rows; ++i) {
    if (auto it = exact.find({lp.row_names[i], "rhs"}); it != exact.end()) lp.b[i] = it->second;
    for (const auto& [j, v] : row_entries[i]) {
      auto it = exact.find({lp.row_names[i], col_order[j]});
      Rational value = it != exact.end() ? it->second : v;
      if (value != 0) lp.columns[remap[j]].emplace_back(i, value);
    }
  }
  lp.validate();
  return lp;
}

}  // namespace fpcert
