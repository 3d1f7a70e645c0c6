#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>

#include "phs/nba.hpp"

// Textual interchange: a subset of the HOA format (header: HOA, States,
// Start, AP, acc-name Buchi, Acceptance: 1 Inf(0); body: per-state labeled
// edges, guards in disjunctive form over AP indices) and DOT export.

namespace phs {

namespace {

std::string guard_expr(const Guard& g, const NBA& a, bool names) {
  if (g.is_false()) return "f";
  std::ostringstream os;
  bool first_cube = true;
  for (const Cube& c : g.cubes) {
    if (c.contradictory()) continue;
    if (!first_cube) os << " | ";
    first_cube = false;
    if (c.pos == 0 && c.neg == 0) {
      os << "t";
      continue;
    }
    bool first_lit = true;
    for (size_t i = 0; i < a.atoms.size(); ++i) {
      uint32_t m = 1u << i;
      if (!(c.pos & m) && !(c.neg & m)) continue;
      if (!first_lit) os << " & ";
      first_lit = false;
      if (c.neg & m) os << "!";
      if (names)
        os << a.atoms[i];
      else
        os << i;
    }
  }
  return os.str();
}

struct LabelParser {
  const std::string& s;
  size_t i = 0;
  explicit LabelParser(const std::string& text) : s(text) {}

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  Guard disj() {
    Guard g = conj();
    while (eat('|')) g = g.disj(conj());
    return g;
  }
  Guard conj() {
    Guard g = literal();
    while (eat('&')) g = g.conj(literal());
    return g;
  }
  Guard literal() {
    skip();
    if (eat('(')) {
      Guard g = disj();
      if (!eat(')')) throw std::runtime_error("HOA label: missing ')'");
      return g;
    }
    bool negated = eat('!');
    skip();
    if (i < s.size() && s[i] == 't' && !negated) {
      ++i;
      return Guard::tt();
    }
    if (i < s.size() && s[i] == 'f' && !negated) {
      ++i;
      return Guard::ff();
    }
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw std::runtime_error("HOA label: expected atom index");
    int bit = std::stoi(s.substr(i, j - i));
    i = j;
    return Guard::atom(bit, !negated);
  }
};

}  // namespace

std::string to_hoa(const NBA& a) {
  std::ostringstream os;
  os << "HOA: v1\n";
  os << "States: " << a.size() << "\n";
  os << "Start: " << a.initial << "\n";
  os << "AP: " << a.atoms.size();
  for (const std::string& p : a.atoms) os << " \"" << p << "\"";
  os << "\n";
  os << "acc-name: Buchi\n";
  os << "Acceptance: 1 Inf(0)\n";
  os << "--BODY--\n";
  for (int q = 0; q < a.size(); ++q) {
    os << "State: " << q;
    if (a.accepting[q]) os << " {0}";
    os << "\n";
    for (const Edge& e : a.trans[q]) {
      if (e.guard.is_false()) continue;
      os << "[" << guard_expr(e.guard, a, false) << "] " << e.dst << "\n";
    }
  }
  os << "--END--\n";
  return os.str();
}

NBA from_hoa(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  NBA a;
  int n_states = -1;
  bool in_body = false;
  int cur = -1;
  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (!in_body) {
      if (line.rfind("HOA:", 0) == 0) continue;
      if (line.rfind("States:", 0) == 0) {
        n_states = std::stoi(line.substr(7));
      } else if (line.rfind("Start:", 0) == 0) {
        a.initial = std::stoi(line.substr(6));
      } else if (line.rfind("AP:", 0) == 0) {
        std::istringstream ls(line.substr(3));
        int k;
        ls >> k;
        for (int i = 0; i < k; ++i) {
          std::string token;
          ls >> std::ws;
          std::getline(ls, token, '"');  // up to opening quote
          std::getline(ls, token, '"');  // the atom name
          a.atoms.push_back(token);
        }
        if (static_cast<int>(a.atoms.size()) != k)
          throw std::runtime_error("HOA: malformed AP line");
      } else if (line.rfind("Acceptance:", 0) == 0) {
        if (line.find("Inf(0)") == std::string::npos)
          throw std::runtime_error("HOA: only Buchi acceptance supported");
      } else if (line.rfind("acc-name:", 0) == 0) {
        if (line.find("Buchi") == std::string::npos)
          throw std::runtime_error("HOA: only Buchi acceptance supported");
      } else if (line == "--BODY--") {
        if (n_states < 0) throw std::runtime_error("HOA: missing States");
        for (int i = 0; i < n_states; ++i) a.add_state(false);
        in_body = true;
      }
      continue;
    }
    if (line == "--END--") break;
    if (line.rfind("State:", 0) == 0) {
      std::string rest = trim(line.substr(6));
      size_t sp = rest.find_first_of(" \t{");
      cur = std::stoi(rest.substr(0, sp));
      if (cur < 0 || cur >= a.size())
        throw std::runtime_error("HOA: state index out of range");
      if (rest.find('{') != std::string::npos) a.accepting[cur] = 1;
      continue;
    }
    if (line[0] == '[') {
      size_t close = line.find(']');
      if (close == std::string::npos || cur < 0)
        throw std::runtime_error("HOA: malformed edge line");
      std::string expr = line.substr(1, close - 1);
      int dst = std::stoi(trim(line.substr(close + 1)));
      if (dst < 0 || dst >= a.size())
        throw std::runtime_error("HOA: edge target out of range");
      LabelParser lp(expr);
      a.add_edge(cur, lp.disj(), dst);
      continue;
    }
    throw std::runtime_error("HOA: unrecognized body line: " + line);
  }
  if (!in_body) throw std::runtime_error("HOA: missing --BODY--");
  return a;
}

std::string to_dot(const NBA& a) {
  std::ostringstream os;
  os << "digraph nba {\n  rankdir=LR;\n  init [shape=point];\n";
  for (int q = 0; q < a.size(); ++q)
    os << "  s" << q << " [shape="
       << (a.accepting[q] ? "doublecircle" : "circle") << ", label=\"" << q
       << "\"];\n";
  os << "  init -> s" << a.initial << ";\n";
  for (int q = 0; q < a.size(); ++q)
    for (const Edge& e : a.trans[q]) {
      if (e.guard.is_false()) continue;
      os << "  s" << q << " -> s" << e.dst << " [label=\""
         << guard_expr(e.guard, a, true) << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace phs
