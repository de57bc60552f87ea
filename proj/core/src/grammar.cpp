// Text form of chart-ring elements.
//
//   expr    := [sign] term { sign term }
//   term    := factor { '*' factor }
//   factor  := primary [ '^' [sign] integer ]
//   primary := integer | variable | '(' expr ')'

#include <cctype>
#include <sstream>

#include "mfh/error.hpp"
#include "mfh/ring.hpp"

namespace mfh {

namespace {

class Parser {
 public:
  Parser(std::string_view text, RingPtr ring) : text_(text), ring_(std::move(ring)) {}

  RingElement parse() {
    RingElement r = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError,
                msg + " at position " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (INT64_MAX - 9) / 10) fail("integer too large");
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) fail("expected integer");
    return v;
  }

  RingElement expr() {
    skip_ws();
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    RingElement acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        break;
    }
    return acc;
  }

  RingElement term() {
    RingElement acc = factor();
    while (accept('*')) acc *= factor();
    return acc;
  }

  RingElement factor() {
    std::size_t start = pos_;
    std::optional<int> var;
    RingElement base = primary(var);
    if (!accept('^')) return base;
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    std::int64_t e = integer();
    if (e > 1 << 20) fail("exponent too large");
    if (!neg) return base.pow(static_cast<int>(e));
    if (var) {
      if (!ring_->is_inverted(*var))
        throw Error(ErrorKind::NegativeExponentOnUninverted,
                    "negative power of " + ring_->var(*var) + " in " + ring_->describe());
      Exponent ex{0, 0};
      ex[*var] = -static_cast<int>(e);
      return RingElement::monomial(ring_, ex);
    }
    auto inv = base.inverse();
    if (!inv) {
      pos_ = start;
      throw Error(ErrorKind::NotAUnit, base.to_string() + " is not invertible in " +
                                           ring_->describe() + " (position " +
                                           std::to_string(start) + ")");
    }
    return inv->pow(static_cast<int>(e));
  }

  RingElement primary(std::optional<int>& var) {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RingElement r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = integer();
      return RingElement::constant(ring_, arith::mod(v, ring_->modulus()));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto idx = ring_->var_index(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      var = *idx;
      return RingElement::variable(ring_, *idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  RingPtr ring_;
  std::size_t pos_ = 0;
};

std::int64_t signed_rep(std::int64_t c, std::int64_t modulus) {
  return c > modulus / 2 ? c - modulus : c;
}

void append_term(std::ostringstream& os, bool first, std::int64_t c, const std::string& mono) {
  bool neg = c < 0;
  std::int64_t a = neg ? -c : c;
  if (first)
    os << (neg ? "-" : "");
  else
    os << (neg ? " - " : " + ");
  if (mono.empty())
    os << a;
  else if (a == 1)
    os << mono;
  else
    os << a << "*" << mono;
}

std::string monomial_text(const Exponent& e, const RingPtr& ring) {
  std::string out;
  for (int l = 0; l < ring->dim(); ++l) {
    if (e[l] == 0) continue;
    if (!out.empty()) out += "*";
    out += ring->var(l);
    if (e[l] != 1) out += "^" + std::to_string(e[l]);
  }
  return out;
}

}  // namespace

RingElement parse_element(std::string_view text, const RingPtr& ring) {
  return Parser(text, ring).parse();
}

std::string render_dense(const DensePoly& poly, const std::string& var) {
  if (poly.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = poly.degree(); i >= 0; --i) {
    if (poly.coeff(i) == 0) continue;
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    append_term(os, first, signed_rep(poly.coeff(i), poly.modulus()), mono);
    first = false;
  }
  return os.str();
}

std::string render_element(const RingElement& f) {
  const RingPtr& ring = f.ring();
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = f.numerator().rbegin(); it != f.numerator().rend(); ++it) {
    append_term(os, first, signed_rep(it->second, ring->modulus()), monomial_text(it->first, ring));
    first = false;
  }
  if (!f.has_denominators()) return os.str();
  std::string num = os.str();
  std::ostringstream out;
  bool sep = true;
  if (f.numerator().size() > 1)
    out << "(" << num << ")";
  else if (num == "1")
    sep = false;
  else if (num == "-1") {
    out << "-";
    sep = false;
  } else
    out << num;
  for (int k = 0; k < ring->num_denominators(); ++k) {
    int e = f.denominator_exponents()[k];
    if (e == 0) continue;
    out << (sep ? "*(" : "(") << render_dense(ring->denominator(k), ring->var(0)) << ")^-" << e;
    sep = true;
  }
  return out.str();
}

std::string RingElement::to_string() const { return render_element(*this); }

std::vector<std::int64_t> parse_integer_poly(std::string_view text, const std::string& var) {
  // Parse over a large odd prime so small signed coefficients survive.
  constexpr int kPrime = 1000003;
  RingPtr ring = ChartRing::make(kPrime, 1, {var}, {false});
  RingElement f = parse_element(text, ring);
  std::vector<std::int64_t> out;
  for (const auto& [e, c] : f.numerator()) {
    if (static_cast<int>(out.size()) <= e[0]) out.resize(e[0] + 1, 0);
    out[e[0]] = signed_rep(c, kPrime);
  }
  return out;
}

}  // namespace mfh
