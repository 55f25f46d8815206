#include "qmlab/formspec.hpp"

#include <cctype>
#include <stdexcept>

namespace qmlab {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  QMPoly parse() {
    skip_ws();
    if (at_end()) fail("empty form");
    std::vector<std::pair<Monomial, BigRational>> terms;
    int weight = -1;
    size_t first_pos = 0;
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      ++pos_;
    }
    while (true) {
      skip_ws();
      size_t term_pos = pos_;
      auto [mon, coeff] = parse_term();
      if (weight < 0) {
        weight = mon.weight();
        first_pos = term_pos;
      } else if (mon.weight() != weight) {
        fail_at(term_pos, "mixed weights: term at position " + std::to_string(first_pos + 1) +
                              " has weight " + std::to_string(weight) +
                              ", this term has weight " + std::to_string(mon.weight()));
      }
      terms.emplace_back(mon, sign * coeff);
      skip_ws();
      if (at_end()) break;
      if (peek() == '+')
        sign = 1;
      else if (peek() == '-')
        sign = -1;
      else
        fail("expected '+' or '-'");
      ++pos_;
    }
    return QMPoly::from_terms(weight, VarKind::holo, std::move(terms));
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(size_t pos, const std::string& msg) const {
    throw std::invalid_argument("parse_form: " + msg + " at position " + std::to_string(pos + 1) +
                                " in \"" + text_ + "\"");
  }

  BigInt parse_uint() {
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
    std::string digits;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
    return BigInt(digits);
  }

  int parse_exponent() {
    skip_ws();
    if (at_end() || peek() != '^') return 1;
    ++pos_;
    skip_ws();
    size_t at = pos_;
    BigInt e = parse_uint();
    if (!e.fits_sint_p()) fail_at(at, "exponent too large");
    return static_cast<int>(e.get_si());
  }

  bool at_var() const { return !at_end() && (peek() == 'P' || peek() == 'Q' || peek() == 'R'); }

  void parse_factor(Monomial& mon) {
    char v = peek();
    ++pos_;
    int e = parse_exponent();
    switch (v) {
      case 'P': mon.a += e; break;
      case 'Q': mon.b += e; break;
      case 'R': mon.c += e; break;
    }
  }

  std::pair<Monomial, BigRational> parse_term() {
    BigRational coeff(1);
    Monomial mon;
    bool have_coeff = false;
    bool have_monomial = false;
    if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      BigInt num = parse_uint();
      BigInt den(1);
      skip_ws();
      if (!at_end() && peek() == '/') {
        ++pos_;
        skip_ws();
        size_t at = pos_;
        den = parse_uint();
        if (den == 0) fail_at(at, "zero denominator");
      }
      coeff = make_rational(num, den);
      have_coeff = true;
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
        if (!at_var()) fail("expected P, Q or R after '*'");
      }
    }
    while (at_var()) {
      parse_factor(mon);
      have_monomial = true;
      skip_ws();
      if (!at_end() && peek() == '*') {
        size_t star = pos_;
        ++pos_;
        skip_ws();
        if (!at_var()) fail_at(star, "expected P, Q or R after '*'");
      }
    }
    if (!have_coeff && !have_monomial) fail("expected a term");
    return {mon, coeff};
  }

  const std::string& text_;
  size_t pos_ = 0;
};

void append_power(std::string& s, const char* var, int e) {
  if (e == 0) return;
  if (!s.empty()) s += "*";
  s += var;
  if (e > 1) s += "^" + std::to_string(e);
}

}  // namespace

QMPoly parse_form(const std::string& text) { return Parser(text).parse(); }

std::string print_form(const QMPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    BigRational a = c;
    if (first) {
      if (a < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    first = false;
    std::string mono;
    append_power(mono, f.kind() == VarKind::star ? "P*" : "P", m.a);
    append_power(mono, "Q", m.b);
    append_power(mono, "R", m.c);
    if (mono.empty())
      out += a.get_str();
    else if (a == 1)
      out += mono;
    else
      out += a.get_str() + "*" + mono;
  }
  return out;
}

QMPoly resolve_form(const std::string& name_or_literal) {
  if (name_or_literal == "E4") return QMPoly::Q();
  if (name_or_literal == "E6") return QMPoly::R();
  if (name_or_literal == "E8" || name_or_literal == "E10" || name_or_literal == "E14")
    return eisenstein_poly(std::stoul(name_or_literal.substr(1)));
  if (name_or_literal == "delta") return delta_poly();
  if (name_or_literal.rfind("eisenstein:", 0) == 0) {
    std::string karg = name_or_literal.substr(11);
    unsigned long k = 0;
    try {
      size_t used = 0;
      k = std::stoul(karg, &used);
      if (used != karg.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("resolve_form: bad eisenstein weight '" + karg + "'");
    }
    if (k < 4 || k % 2 != 0)
      throw std::invalid_argument("resolve_form: eisenstein weight must be even and >= 4");
    return eisenstein_poly(static_cast<unsigned>(k));
  }
  return parse_form(name_or_literal);
}

}  // namespace qmlab
