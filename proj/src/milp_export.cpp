#include "wmc/milp_export.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "wmc/io.h"

namespace wmc {

const LpVar* LpModel::find(const std::string& name) const {
  for (const auto& v : vars) {
    if (v.name == name) {
      return &v;
    }
  }
  return nullptr;
}

namespace {

std::string id(const char* prefix, std::initializer_list<int> idx) {
  std::string s = prefix;
  for (int i : idx) {
    s += '_';
    s += std::to_string(i);
  }
  return s;
}

std::string x_(int i, int j, int k) { return id("x", {i, j, k}); }
std::string y_(int i, int k) { return id("y", {i, k}); }
std::string t_(int i, int k) { return id("t", {i, k}); }
std::string u_(int i, int k) { return id("u", {i, k}); }
std::string c_(int i, int k) { return id("c", {i, k}); }
std::string z_(int i, int j, int b) { return id("z", {i, j, b}); }
std::string w_(int i, int b) { return id("w", {i, b}); }
std::string s_(int i, int b) { return id("s", {i, b}); }
std::string v_(int i, int b) { return id("v", {i, b}); }
std::string d_(int i, int j, int k, int b) { return id("d", {i, j, k, b}); }

class Builder {
public:
  explicit Builder(LpModel& m) : m_(m) {}

  void var(std::string name, VarKind kind, double lo, double hi) {
    m_.vars.push_back({std::move(name), kind, lo, hi});
  }
  // Deque storage keeps earlier rows addressable while new ones are added.
  LpRow& row(std::string name, Sense sense, double rhs) {
    rows_.push_back({std::move(name), {}, sense, rhs});
    return rows_.back();
  }
  void finish() { m_.rows.assign(std::make_move_iterator(rows_.begin()),
                                 std::make_move_iterator(rows_.end())); }

private:
  LpModel& m_;
  std::deque<LpRow> rows_;
};

void add(LpRow& r, double coef, std::string var) {
  if (coef != 0.0) {
    r.terms.push_back({coef, std::move(var)});
  }
}

} // namespace

LpModel build_lp_model(const Instance& inst, const LpOptions& options) {
  const int n = inst.customer_count();
  if (n > kMaxLpCustomers) {
    throw InputError("LP export limited to " + std::to_string(kMaxLpCustomers) + " customers");
  }
  const auto& p = inst.params;
  const int k_min = static_cast<int>(
      std::ceil(static_cast<double>(inst.total_demand()) / static_cast<double>(p.capacity)));
  LpModel m;
  m.k_max = options.k_max > 0 ? options.k_max : k_min + 3;
  m.b_max = options.b_max >= 0 ? options.b_max : m.k_max;
  if (m.k_max < k_min) {
    throw InputError("k_max " + std::to_string(m.k_max) + " below demand bound " +
                     std::to_string(k_min));
  }
  const int E = n + 1; // end depot copy
  auto tau = [&](int i, int j) -> double {
    return static_cast<double>(inst.tau(i == E ? 0 : i, j == E ? 0 : j));
  };
  double tau_sum = 0.0;
  double tau_max = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      tau_sum += tau(i, j);
      tau_max = std::max(tau_max, tau(i, j));
    }
  }
  const double horizon = 2.0 * (n + 2) * tau_max;
  const double safe = horizon + 2.0 * p.mtev_battery + 2.0 * p.mct_battery +
                      (1.0 + p.gamma + p.phi) * tau_max + 1.0;
  const double requested = options.big_m > 0.0 ? options.big_m : 2.0 * tau_sum;
  const double M = std::max(requested, safe);
  m.big_m = M;

  m.comments = {
      "Routing model with on-road charging. Nodes 0..n, " + std::to_string(E) +
          " is the end depot.",
      "k_max = " + std::to_string(m.k_max) + ", b_max = " + std::to_string(m.b_max) +
          ", M = " + format_number(M) + ", time horizon = " + format_number(horizon) + ".",
      "Products of a binary with a bounded variable use big-M pairs:",
      "  x_i_j_k (t_i_k + tau) -> t_j_k - t_i_k - tau in [-M(1-x), M(1-x)]",
      "  z_i_j_b (s_i_b + tau) and d_i_j_k_b t_j_k -> same pattern for s_j_b",
      "  (sum_j d_i_j_k_b) s_i_b <= t_i_k -> s_i_b - t_i_k <= M(1 - sum_j d)",
      "  MCT battery: v_j_b - v_i_b + phi tau z + gamma tau sum_k d in [-M(1-a), M(1-a)],"
      " a = z + sum_k d",
      "The cap u_j_k = min(P, e) with e = u_i_k - tau + gamma tau sum_b d uses binary c_j_k:",
      "  u <= P, u <= e + M(1-x), u >= e - M(1-x) - M c, u >= P - M(1-c)",
      "K = k_max - sum_k x_0_E_k and B = b_max - sum_b z_0_E_b count used vehicles.",
  };

  Builder b(m);
  m.objective = {{p.cost_dist, "D"}, {p.cost_mtev, "K"}, {p.cost_mct, "B"}};

  auto arcs = [&](auto&& fn) {
    for (int i = 0; i <= n; ++i) {
      for (int j = 1; j <= E; ++j) {
        if (i != j) {
          fn(i, j);
        }
      }
    }
  };

  // Distance and fleet counters.
  {
    auto& r = b.row("dist", Sense::Eq, 0.0);
    add(r, 1.0, "D");
    for (int k = 1; k <= m.k_max; ++k) {
      arcs([&](int i, int j) { add(r, -tau(i, j), x_(i, j, k)); });
    }
    auto& fk = b.row("fleet_mtev", Sense::Eq, m.k_max);
    add(fk, 1.0, "K");
    for (int k = 1; k <= m.k_max; ++k) {
      add(fk, 1.0, x_(0, E, k));
    }
    auto& fb = b.row("fleet_mct", Sense::Eq, m.b_max);
    add(fb, 1.0, "B");
    for (int bb = 1; bb <= m.b_max; ++bb) {
      add(fb, 1.0, z_(0, E, bb));
    }
  }

  for (int k = 1; k <= m.k_max; ++k) {
    auto& cap = b.row(id("cap", {k}), Sense::Le, p.capacity);
    for (int i = 1; i <= n; ++i) {
      add(cap, inst.demand(i), y_(i, k));
    }
    for (int i = 0; i <= n; ++i) {
      auto& out = b.row(id("out", {i, k}), Sense::Eq, 0.0);
      for (int j = 1; j <= E; ++j) {
        if (i != j) {
          add(out, 1.0, x_(i, j, k));
        }
      }
      add(out, -1.0, y_(i, k));
    }
    for (int j = 1; j <= E; ++j) {
      auto& in = b.row(id("in", {j, k}), Sense::Eq, 0.0);
      for (int i = 0; i <= n; ++i) {
        if (i != j) {
          add(in, 1.0, x_(i, j, k));
        }
      }
      add(in, -1.0, y_(j, k));
    }
    add(b.row(id("start", {k}), Sense::Eq, 1.0), 1.0, y_(0, k));
    add(b.row(id("end", {k}), Sense::Eq, 1.0), 1.0, y_(E, k));
    add(b.row(id("t0", {k}), Sense::Eq, 0.0), 1.0, t_(0, k));
    add(b.row(id("u0", {k}), Sense::Eq, p.mtev_battery), 1.0, u_(0, k));
  }
  for (int i = 1; i <= n; ++i) {
    auto& r = b.row(id("visit", {i}), Sense::Eq, 1.0);
    for (int k = 1; k <= m.k_max; ++k) {
      add(r, 1.0, y_(i, k));
    }
  }

  arcs([&](int i, int j) {
    const double tt = tau(i, j);
    for (int k = 1; k <= m.k_max; ++k) {
      const auto x = x_(i, j, k);
      auto& tu = b.row(id("tu", {i, j, k}), Sense::Le, M + tt);
      add(tu, 1.0, t_(j, k));
      add(tu, -1.0, t_(i, k));
      add(tu, M, x);
      auto& tl = b.row(id("tl", {i, j, k}), Sense::Ge, tt - M);
      add(tl, 1.0, t_(j, k));
      add(tl, -1.0, t_(i, k));
      add(tl, -M, x);

      auto& uu = b.row(id("uu", {i, j, k}), Sense::Le, M - tt);
      add(uu, 1.0, u_(j, k));
      add(uu, -1.0, u_(i, k));
      add(uu, M, x);
      auto& ul = b.row(id("ul", {i, j, k}), Sense::Ge, -tt - M);
      add(ul, 1.0, u_(j, k));
      add(ul, -1.0, u_(i, k));
      add(ul, -M, x);
      add(ul, M, c_(j, k));
      auto& one = b.row(id("one", {i, j, k}), Sense::Le, 0.0);
      add(one, -1.0, x);
      for (int bb = 1; bb <= m.b_max; ++bb) {
        add(uu, -p.gamma * tt, d_(i, j, k, bb));
        add(ul, -p.gamma * tt, d_(i, j, k, bb));
        add(one, 1.0, d_(i, j, k, bb));
      }
    }
  });
  for (int k = 1; k <= m.k_max; ++k) {
    for (int j = 1; j <= E; ++j) {
      auto& uc = b.row(id("ucap", {j, k}), Sense::Ge, p.mtev_battery - M);
      add(uc, 1.0, u_(j, k));
      add(uc, -M, c_(j, k));
    }
  }

  for (int bb = 1; bb <= m.b_max; ++bb) {
    add(b.row(id("mstart", {bb}), Sense::Eq, 1.0), 1.0, w_(0, bb));
    add(b.row(id("mend", {bb}), Sense::Eq, 1.0), 1.0, w_(E, bb));
    add(b.row(id("s0", {bb}), Sense::Eq, 0.0), 1.0, s_(0, bb));
    add(b.row(id("v0", {bb}), Sense::Eq, p.mct_battery), 1.0, v_(0, bb));
    for (int i = 0; i <= n; ++i) {
      auto& out = b.row(id("mout", {i, bb}), Sense::Eq, 0.0);
      for (int j = 1; j <= E; ++j) {
        if (i == j) {
          continue;
        }
        add(out, 1.0, z_(i, j, bb));
        for (int k = 1; k <= m.k_max; ++k) {
          add(out, 1.0, d_(i, j, k, bb));
        }
      }
      add(out, -1.0, w_(i, bb));
    }
    for (int j = 1; j <= E; ++j) {
      auto& in = b.row(id("min", {j, bb}), Sense::Eq, 0.0);
      for (int i = 0; i <= n; ++i) {
        if (i == j) {
          continue;
        }
        add(in, 1.0, z_(i, j, bb));
        for (int k = 1; k <= m.k_max; ++k) {
          add(in, 1.0, d_(i, j, k, bb));
        }
      }
      add(in, -1.0, w_(j, bb));
    }
    arcs([&](int i, int j) {
      const double tt = tau(i, j);
      const auto z = z_(i, j, bb);
      auto& ai = b.row(id("atti", {i, j, bb}), Sense::Le, 0.0);
      auto& aj = b.row(id("attj", {i, j, bb}), Sense::Le, 0.0);
      add(ai, -1.0, w_(i, bb));
      add(aj, -1.0, w_(j, bb));
      auto& su = b.row(id("su", {i, j, bb}), Sense::Le, M + tt);
      add(su, 1.0, s_(j, bb));
      add(su, -1.0, s_(i, bb));
      add(su, M, z);
      auto& sl = b.row(id("sl", {i, j, bb}), Sense::Ge, tt - M);
      add(sl, 1.0, s_(j, bb));
      add(sl, -1.0, s_(i, bb));
      add(sl, -M, z);
      auto& vu = b.row(id("vu", {i, j, bb}), Sense::Le, M);
      add(vu, 1.0, v_(j, bb));
      add(vu, -1.0, v_(i, bb));
      add(vu, p.phi * tt + M, z);
      auto& vl = b.row(id("vl", {i, j, bb}), Sense::Ge, -M);
      add(vl, 1.0, v_(j, bb));
      add(vl, -1.0, v_(i, bb));
      add(vl, p.phi * tt - M, z);
      for (int k = 1; k <= m.k_max; ++k) {
        const auto d = d_(i, j, k, bb);
        add(ai, 1.0, d);
        add(aj, 1.0, d);
        add(vu, p.gamma * tt + M, d);
        add(vl, p.gamma * tt - M, d);
      }
    });
    for (int k = 1; k <= m.k_max; ++k) {
      // Riding into j: the MCT arrives with the MTEV.
      for (int j = 1; j <= E; ++j) {
        auto& ru = b.row(id("ru", {j, k, bb}), Sense::Le, M);
        add(ru, 1.0, s_(j, bb));
        add(ru, -1.0, t_(j, k));
        auto& rl = b.row(id("rl", {j, k, bb}), Sense::Ge, -M);
        add(rl, 1.0, s_(j, bb));
        add(rl, -1.0, t_(j, k));
        for (int i = 0; i <= n; ++i) {
          if (i != j) {
            add(ru, M, d_(i, j, k, bb));
            add(rl, -M, d_(i, j, k, bb));
          }
        }
      }
      // Waiting for the MTEV before riding out of i.
      for (int i = 0; i <= n; ++i) {
        auto& wt = b.row(id("wait", {i, k, bb}), Sense::Le, M);
        add(wt, 1.0, s_(i, bb));
        add(wt, -1.0, t_(i, k));
        for (int j = 1; j <= E; ++j) {
          if (i != j) {
            add(wt, M, d_(i, j, k, bb));
          }
        }
      }
    }
  }

  // Declarations.
  b.var("D", VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity());
  b.var("K", VarKind::Integer, 0.0, m.k_max);
  b.var("B", VarKind::Integer, 0.0, m.b_max);
  for (int k = 1; k <= m.k_max; ++k) {
    for (int i = 0; i <= E; ++i) {
      b.var(y_(i, k), VarKind::Binary, 0, 1);
      b.var(t_(i, k), VarKind::Continuous, 0, horizon);
      b.var(u_(i, k), VarKind::Continuous, 0, p.mtev_battery);
      if (i > 0) {
        b.var(c_(i, k), VarKind::Binary, 0, 1);
      }
    }
    arcs([&](int i, int j) { b.var(x_(i, j, k), VarKind::Binary, 0, 1); });
  }
  for (int bb = 1; bb <= m.b_max; ++bb) {
    for (int i = 0; i <= E; ++i) {
      b.var(w_(i, bb), VarKind::Binary, 0, 1);
      b.var(s_(i, bb), VarKind::Continuous, 0, horizon);
      b.var(v_(i, bb), VarKind::Continuous, 0, p.mct_battery);
    }
    arcs([&](int i, int j) {
      b.var(z_(i, j, bb), VarKind::Binary, 0, 1);
      for (int k = 1; k <= m.k_max; ++k) {
        b.var(d_(i, j, k, bb), VarKind::Binary, 0, 1);
      }
    });
  }
  b.finish();
  return m;
}

namespace {

std::string bound_text(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "+inf" : "-inf";
  }
  return format_number(v);
}

void write_terms(std::ostream& out, std::string head, const std::vector<LpTerm>& terms,
                 const std::string& tail) {
  constexpr std::size_t kWidth = 100;
  std::string line = " " + head;
  bool first = true;
  auto push = [&](const std::string& piece) {
    if (line.size() + piece.size() + 1 > kWidth) {
      out << line << '\n';
      line = "  ";
    } else {
      line += ' ';
    }
    line += piece;
  };
  for (const auto& t : terms) {
    std::string piece;
    if (t.coef < 0) {
      piece = "- " + format_number(-t.coef);
    } else {
      piece = (first ? "" : "+ ") + format_number(t.coef);
    }
    push(piece + " " + t.var);
    first = false;
  }
  if (terms.empty()) {
    push("0");
  }
  if (!tail.empty()) {
    push(tail);
  }
  out << line << '\n';
}

const char* sense_text(Sense s) {
  switch (s) {
  case Sense::Le:
    return "<=";
  case Sense::Ge:
    return ">=";
  case Sense::Eq:
    return "=";
  }
  return "=";
}

} // namespace

std::string to_lp_text(const LpModel& m) {
  std::ostringstream out;
  for (const auto& c : m.comments) {
    out << "\\ " << c << '\n';
  }
  out << "Minimize\n";
  write_terms(out, "obj:", m.objective, "");
  out << "Subject To\n";
  for (const auto& r : m.rows) {
    write_terms(out, r.name + ":", r.terms,
                std::string(sense_text(r.sense)) + " " + format_number(r.rhs));
  }
  out << "Bounds\n";
  for (const auto& v : m.vars) {
    if (v.kind != VarKind::Binary) {
      out << ' ' << bound_text(v.lo) << " <= " << v.name << " <= " << bound_text(v.hi) << '\n';
    }
  }
  out << "Binaries\n";
  for (const auto& v : m.vars) {
    if (v.kind == VarKind::Binary) {
      out << ' ' << v.name << '\n';
    }
  }
  out << "Generals\n";
  for (const auto& v : m.vars) {
    if (v.kind == VarKind::Integer) {
      out << ' ' << v.name << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

std::string export_lp(const Instance& instance, const LpOptions& options) {
  return to_lp_text(build_lp_model(instance, options));
}

namespace {

enum class Section { None, Objective, Rows, Bounds, Binaries, Generals, Done };

struct Token {
  enum Kind { Name, Number, Op, Colon } kind;
  std::string text;
  double value = 0.0;
};

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' ||
         c == ']';
}

std::vector<Token> tokenize(const std::string& text, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw InputError("LP line " + std::to_string(line_no) + ": " + why);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < text.size() && (text[i + 1] == '=' || text[i + 1] == '<' || text[i + 1] == '>')) {
        op += text[i + 1];
      }
      i += op.size();
      if (op == "=<") {
        op = "<=";
      } else if (op == "=>") {
        op = ">=";
      } else if (op == "<") {
        op = "<=";
      } else if (op == ">") {
        op = ">=";
      }
      out.push_back({Token::Op, op});
    } else if (c == '+' || c == '-') {
      out.push_back({Token::Op, std::string(1, c)});
      ++i;
    } else if (c == ':') {
      out.push_back({Token::Colon, ":"});
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(text.substr(i), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      out.push_back({Token::Number, text.substr(i, used), value});
      i += used;
    } else if (name_start(c)) {
      std::size_t j = i;
      while (j < text.size() && name_char(text[j])) {
        ++j;
      }
      out.push_back({Token::Name, text.substr(i, j - i)});
      i = j;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<Section> section_keyword(const std::string& line) {
  std::string l = lower(line);
  l.erase(0, l.find_first_not_of(" \t"));
  l.erase(l.find_last_not_of(" \t\r") + 1);
  if (l == "minimize" || l == "minimum" || l == "min") {
    return Section::Objective;
  }
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") {
    return Section::Rows;
  }
  if (l == "bounds" || l == "bound") {
    return Section::Bounds;
  }
  if (l == "binaries" || l == "binary" || l == "bin") {
    return Section::Binaries;
  }
  if (l == "generals" || l == "general" || l == "gen") {
    return Section::Generals;
  }
  if (l == "end") {
    return Section::Done;
  }
  return std::nullopt;
}

// Linear expression "name: terms [sense rhs]".
class ExprParser {
public:
  ExprParser(const std::vector<Token>& toks, int line) : t_(toks), line_(line) {}

  bool done() const { return i_ >= t_.size(); }

  void parse_row(LpRow& row, bool with_sense) {
    if (i_ + 1 < t_.size() && t_[i_].kind == Token::Name && t_[i_ + 1].kind == Token::Colon) {
      row.name = t_[i_].text;
      i_ += 2;
    }
    while (!done() && !(t_[i_].kind == Token::Op && is_sense(t_[i_].text))) {
      double sign = 1.0;
      while (!done() && t_[i_].kind == Token::Op && (t_[i_].text == "+" || t_[i_].text == "-")) {
        if (t_[i_].text == "-") {
          sign = -sign;
        }
        ++i_;
      }
      double coef = 1.0;
      if (!done() && t_[i_].kind == Token::Number) {
        coef = t_[i_].value;
        ++i_;
        if (done() || t_[i_].kind != Token::Name) {
          // Constant term; only "0" placeholders are accepted.
          if (coef != 0.0) {
            fail("constant in expression");
          }
          continue;
        }
      }
      if (done() || t_[i_].kind != Token::Name) {
        fail("expected variable");
      }
      row.terms.push_back({sign * coef, t_[i_].text});
      ++i_;
    }
    if (!with_sense) {
      if (!done()) {
        fail("unexpected relation in objective");
      }
      return;
    }
    if (done()) {
      fail("missing relation");
    }
    const auto op = t_[i_++].text;
    row.sense = op == "<=" ? Sense::Le : op == ">=" ? Sense::Ge : Sense::Eq;
    row.rhs = signed_number();
  }

  double signed_number() {
    double sign = 1.0;
    while (!done() && t_[i_].kind == Token::Op && (t_[i_].text == "+" || t_[i_].text == "-")) {
      if (t_[i_].text == "-") {
        sign = -sign;
      }
      ++i_;
    }
    if (!done() && t_[i_].kind == Token::Name && lower(t_[i_].text) == "inf") {
      ++i_;
      return sign * std::numeric_limits<double>::infinity();
    }
    if (!done() && t_[i_].kind == Token::Name && lower(t_[i_].text) == "infinity") {
      ++i_;
      return sign * std::numeric_limits<double>::infinity();
    }
    if (done() || t_[i_].kind != Token::Number) {
      fail("expected number");
    }
    return sign * t_[i_++].value;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("LP line " + std::to_string(line_) + ": " + why);
  }

  const std::vector<Token>& tokens() const { return t_; }

private:
  static bool is_sense(const std::string& s) { return s == "<=" || s == ">=" || s == "="; }

  const std::vector<Token>& t_;
  std::size_t i_ = 0;
  int line_;
};

// Collects the logical statements of a section: a new statement starts at a
// line whose first tokens are "name:"; otherwise lines continue the last one.
struct Statement {
  std::string text;
  int line = 0;
};

} // namespace

LpModel parse_lp(std::istream& in) {
  LpModel m;
  Section section = Section::None;
  std::vector<Statement> objective;
  std::vector<Statement> rows;
  std::vector<Statement> bounds;
  std::vector<std::string> binaries;
  std::vector<std::string> generals;
  std::string line;
  int line_no = 0;
  bool seen_end = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto pos = line.find('\\'); pos != std::string::npos) {
      if (section == Section::None && pos == 0) {
        std::string c = line.substr(1);
        c.erase(0, c.find_first_not_of(' '));
        m.comments.push_back(c);
      }
      line.erase(pos);
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    if (seen_end) {
      throw InputError("LP line " + std::to_string(line_no) + ": content after End");
    }
    if (auto s = section_keyword(line)) {
      section = *s;
      seen_end = section == Section::Done;
      continue;
    }
    const bool continuation = std::isspace(static_cast<unsigned char>(line[0])) &&
                              line.size() > 1 && std::isspace(static_cast<unsigned char>(line[1]));
    switch (section) {
    case Section::None:
    case Section::Done:
      throw InputError("LP line " + std::to_string(line_no) + ": text outside a section");
    case Section::Objective:
    case Section::Rows: {
      auto& list = section == Section::Objective ? objective : rows;
      const auto toks = tokenize(line, line_no);
      const bool labelled =
          toks.size() >= 2 && toks[0].kind == Token::Name && toks[1].kind == Token::Colon;
      if (list.empty() || (labelled && !continuation)) {
        list.push_back({line, line_no});
      } else {
        list.back().text += ' ' + line;
      }
      break;
    }
    case Section::Bounds:
      bounds.push_back({line, line_no});
      break;
    case Section::Binaries:
    case Section::Generals: {
      std::istringstream words(line);
      std::string w;
      while (words >> w) {
        (section == Section::Binaries ? binaries : generals).push_back(w);
      }
      break;
    }
    }
  }
  if (!seen_end) {
    throw InputError("LP text lacks End");
  }
  if (objective.size() > 1) {
    throw InputError("LP objective must be a single expression");
  }

  std::vector<std::string> order;
  std::map<std::string, LpVar> vars;
  auto declare = [&](const std::string& name) -> LpVar& {
    auto it = vars.find(name);
    if (it == vars.end()) {
      order.push_back(name);
      it = vars.emplace(name, LpVar{name, VarKind::Continuous, 0.0,
                                    std::numeric_limits<double>::infinity()})
               .first;
    }
    return it->second;
  };

  if (!objective.empty()) {
    const auto toks = tokenize(objective.front().text, objective.front().line);
    ExprParser p(toks, objective.front().line);
    LpRow obj;
    p.parse_row(obj, false);
    m.objective = obj.terms;
  }
  std::set<std::string> row_names;
  for (const auto& st : rows) {
    const auto toks = tokenize(st.text, st.line);
    ExprParser p(toks, st.line);
    LpRow row;
    p.parse_row(row, true);
    if (!p.done()) {
      p.fail("trailing tokens after right-hand side");
    }
    if (row.name.empty()) {
      row.name = "R" + std::to_string(m.rows.size() + 1);
    }
    if (!row_names.insert(row.name).second) {
      p.fail("duplicate row name " + row.name);
    }
    m.rows.push_back(std::move(row));
  }
  for (const auto& st : bounds) {
    const auto toks = tokenize(st.text, st.line);
    ExprParser p(toks, st.line);
    const auto& t = toks;
    auto is_name = [&](std::size_t k) { return k < t.size() && t[k].kind == Token::Name; };
    if (t.size() == 2 && is_name(0) && lower(t[1].text) == "free") {
      auto& v = declare(t[0].text);
      v.lo = -std::numeric_limits<double>::infinity();
      v.hi = std::numeric_limits<double>::infinity();
      continue;
    }
    // Forms: lo <= x <= hi | x <= hi | x >= lo | x = v | lo <= x
    std::size_t name_at = 0;
    while (name_at < t.size() && !(is_name(name_at) && lower(t[name_at].text) != "inf" &&
                                   lower(t[name_at].text) != "infinity")) {
      ++name_at;
    }
    if (name_at == t.size()) {
      p.fail("bound without variable");
    }
    auto& v = declare(t[name_at].text);
    auto number_of = [&](std::size_t from, std::size_t to) {
      std::vector<Token> sub(t.begin() + static_cast<std::ptrdiff_t>(from),
                             t.begin() + static_cast<std::ptrdiff_t>(to));
      ExprParser q(sub, st.line);
      const double val = q.signed_number();
      if (!q.done()) {
        q.fail("malformed bound");
      }
      return val;
    };
    if (name_at > 0) {
      if (t[name_at - 1].kind != Token::Op) {
        p.fail("malformed bound");
      }
      const double val = number_of(0, name_at - 1);
      const auto& op = t[name_at - 1].text;
      if (op == "<=") {
        v.lo = val;
      } else if (op == ">=") {
        v.hi = val;
      } else {
        v.lo = v.hi = val;
      }
    }
    if (name_at + 1 < t.size()) {
      if (t[name_at + 1].kind != Token::Op || name_at + 2 >= t.size()) {
        p.fail("malformed bound");
      }
      const double val = number_of(name_at + 2, t.size());
      const auto& op = t[name_at + 1].text;
      if (op == "<=") {
        v.hi = val;
      } else if (op == ">=") {
        v.lo = val;
      } else {
        v.lo = v.hi = val;
      }
    }
  }
  for (const auto& name : binaries) {
    auto& v = declare(name);
    v.kind = VarKind::Binary;
    v.lo = 0.0;
    v.hi = 1.0;
  }
  for (const auto& name : generals) {
    declare(name).kind = VarKind::Integer;
  }
  // Variables used only in rows get the default [0, +inf).
  for (const auto& t : m.objective) {
    declare(t.var);
  }
  for (const auto& r : m.rows) {
    for (const auto& t : r.terms) {
      declare(t.var);
    }
  }
  for (const auto& name : order) {
    m.vars.push_back(vars.at(name));
  }
  // Fleet bounds live in the upper bounds of the fleet counters.
  auto bound_of = [&](const char* name) {
    const auto it = vars.find(name);
    return it != vars.end() && std::isfinite(it->second.hi) ? static_cast<int>(it->second.hi) : 0;
  };
  m.k_max = bound_of("K");
  m.b_max = bound_of("B");
  return m;
}

LpModel parse_lp(const std::string& text) {
  std::istringstream in(text);
  return parse_lp(in);
}

LpPoint lp_point_from_solution(const LpModel& model, const Solution& sol,
                               const Instance& inst) {
  const int n = inst.customer_count();
  const int E = n + 1;
  const auto& p = inst.params;
  if (static_cast<int>(sol.routes.size()) > model.k_max) {
    throw InputError("solution uses more MTEVs than k_max");
  }
  std::size_t busy = 0;
  for (const auto& t : sol.tours) {
    busy += t.jobs.empty() ? 0 : 1;
  }
  if (static_cast<int>(busy) > model.b_max) {
    throw InputError("solution uses more MCTs than b_max");
  }
  auto tau = [&](int i, int j) -> double {
    return static_cast<double>(inst.tau(i == E ? 0 : i, j == E ? 0 : j));
  };
  // MCT index (1-based) serving each (route, edge).
  std::map<std::pair<int, int>, int> server;
  {
    int b = 0;
    for (const auto& t : sol.tours) {
      if (t.jobs.empty()) {
        continue;
      }
      ++b;
      for (const auto& j : t.jobs) {
        server[{j.route, j.edge}] = b;
      }
    }
  }

  LpPoint pt;
  double total = 0.0;
  std::vector<std::map<int, double>> mtev_time(static_cast<std::size_t>(model.k_max) + 1);
  for (int k = 1; k <= model.k_max; ++k) {
    std::vector<int> seq{0};
    if (k <= static_cast<int>(sol.routes.size())) {
      for (NodeId v : sol.routes[static_cast<std::size_t>(k - 1)].visits) {
        seq.push_back(v);
      }
    }
    seq.push_back(E);
    double t = 0.0;
    double u = p.mtev_battery;
    pt[y_(0, k)] = 1;
    pt[t_(0, k)] = 0;
    pt[u_(0, k)] = u;
    mtev_time[static_cast<std::size_t>(k)][0] = 0;
    for (std::size_t e = 1; e < seq.size(); ++e) {
      const int a = seq[e - 1];
      const int b = seq[e];
      const double tt = tau(a, b);
      pt[x_(a, b, k)] = 1;
      total += tt;
      double level = u - tt;
      if (auto it = server.find({k - 1, static_cast<int>(e)}); it != server.end()) {
        pt[d_(a, b, k, it->second)] = 1;
        level += p.gamma * tt;
      }
      t += tt;
      u = std::min(p.mtev_battery, level);
      pt[y_(b, k)] = 1;
      pt[t_(b, k)] = t;
      pt[u_(b, k)] = u;
      pt[c_(b, k)] = level >= p.mtev_battery ? 1 : 0;
      mtev_time[static_cast<std::size_t>(k)][b] = t;
    }
  }
  pt["D"] = total;
  pt["K"] = static_cast<double>(sol.routes.size());
  pt["B"] = static_cast<double>(busy);

  std::vector<const MctTour*> tours;
  for (const auto& t : sol.tours) {
    if (!t.jobs.empty()) {
      tours.push_back(&t);
    }
  }
  for (int b = 1; b <= model.b_max; ++b) {
    int at = 0;
    double s = 0.0;
    double v = p.mct_battery;
    pt[w_(0, b)] = 1;
    pt[s_(0, b)] = 0;
    pt[v_(0, b)] = v;
    auto arrive = [&](int node) {
      pt[w_(node, b)] = 1;
      pt[s_(node, b)] = s;
      pt[v_(node, b)] = v;
      at = node;
    };
    if (b <= static_cast<int>(tours.size())) {
      for (const auto& job : tours[static_cast<std::size_t>(b - 1)]->jobs) {
        const int from = job.from;
        const int to = job.to == kDepot ? E : job.to;
        if (at != from) {
          pt[z_(at, from, b)] = 1;
          s += tau(at, from);
          v -= p.phi * tau(at, from);
          arrive(from);
        }
        const int k = job.route + 1;
        s = mtev_time[static_cast<std::size_t>(k)].count(to) ? mtev_time[static_cast<std::size_t>(k)][to]
                                                             : static_cast<double>(job.arrive);
        v -= p.gamma * tau(from, to);
        arrive(to);
      }
    }
    if (at != E) {
      pt[z_(at, E, b)] = 1;
      s += tau(at, E);
      v -= p.phi * tau(at, E);
      arrive(E);
    }
  }
  return pt;
}

double lp_objective(const LpModel& model, const LpPoint& point) {
  double total = 0.0;
  for (const auto& t : model.objective) {
    if (auto it = point.find(t.var); it != point.end()) {
      total += t.coef * it->second;
    }
  }
  return total;
}

std::vector<std::string> check_point(const LpModel& model, const LpPoint& point, double tol) {
  std::vector<std::string> bad;
  std::set<std::string> known;
  for (const auto& v : model.vars) {
    known.insert(v.name);
    const auto it = point.find(v.name);
    const double val = it == point.end() ? 0.0 : it->second;
    const double slack = tol * std::max(1.0, std::abs(val));
    if (val < v.lo - slack || val > v.hi + slack) {
      bad.push_back("bound " + v.name + " = " + format_number(val));
    }
    if (v.kind != VarKind::Continuous && std::abs(val - std::round(val)) > tol) {
      bad.push_back("integrality " + v.name + " = " + format_number(val));
    }
  }
  for (const auto& [name, val] : point) {
    if (!known.count(name)) {
      bad.push_back("unknown variable " + name);
    }
  }
  for (const auto& r : model.rows) {
    double lhs = 0.0;
    double scale = std::max(1.0, std::abs(r.rhs));
    for (const auto& t : r.terms) {
      const auto it = point.find(t.var);
      if (it != point.end()) {
        lhs += t.coef * it->second;
        scale = std::max(scale, std::abs(t.coef * it->second));
      }
    }
    const double slack = tol * scale;
    const bool ok = r.sense == Sense::Le   ? lhs <= r.rhs + slack
                    : r.sense == Sense::Ge ? lhs >= r.rhs - slack
                                           : std::abs(lhs - r.rhs) <= slack;
    if (!ok) {
      bad.push_back("row " + r.name + ": " + format_number(lhs) + " " +
                    sense_text(r.sense) + " " + format_number(r.rhs));
    }
  }
  return bad;
}

} // namespace wmc
