#include "minap/dsl.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace minap {

namespace {

class Cursor {
 public:
  Cursor(const std::string& text, std::size_t line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(const std::string& tok) {
    skip_ws();
    if (s_.compare(pos_, tok.size(), tok) != 0) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }
  Integer integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '-')) {
      pos_ = start;
      fail("expected an integer");
    }
    return Integer(s_.substr(start, pos_ - start));
  }
  std::size_t index() {
    const std::size_t col = column();
    Integer v = integer();
    if (v < 0 || !v.fits_ulong_p()) throw ParseError(line_, col, "index out of range");
    return v.get_ui();
  }
  std::size_t column() {
    skip_ws();
    return pos_ + 1;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, column(), msg); }
  [[noreturn]] void fail_at(std::size_t col, const std::string& msg) { throw ParseError(line_, col, msg); }
  std::size_t line() const { return line_; }

 private:
  const std::string& s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct OrderSpec {
  enum class Kind { Finite, Infinite, Prufer, Geom };
  Kind kind = Kind::Finite;
  Integer value;  // Finite value or prime
  Integer shift;  // Geom s
};

OrderSpec parse_order(Cursor& c) {
  OrderSpec o;
  const std::size_t col = c.column();
  if (c.accept("Prufer(")) {
    o.kind = OrderSpec::Kind::Prufer;
    o.value = c.integer();
    if (!is_prime(o.value)) c.fail_at(col, "Prufer needs a prime");
    c.expect(")");
  } else if (c.accept("geom(")) {
    o.kind = OrderSpec::Kind::Geom;
    o.value = c.integer();
    if (!is_prime(o.value)) c.fail_at(col, "geom needs a prime");
    c.expect(",");
    o.shift = c.integer();
    c.expect(")");
  } else if (c.accept("Z")) {
    o.kind = OrderSpec::Kind::Infinite;
  } else {
    o.value = c.integer();
    if (o.value < 1) c.fail_at(col, "order must be positive");
  }
  return o;
}

std::string line_without_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

}  // namespace

BlockGroup parse_group(const std::string& text) {
  std::vector<Block> head;
  std::optional<TailRule> tail;
  std::size_t next = 0;
  std::size_t last_line = 1;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string body = line_without_comment(lines[ln]);
    Cursor c(body, ln + 1);
    if (c.at_end()) continue;
    last_line = ln + 1;
    if (tail) c.fail("no blocks may follow an open range");
    c.expect("block");
    const std::size_t icol = c.column();
    const std::size_t first = c.index();
    if (first != next) c.fail_at(icol, "expected index " + std::to_string(next));
    std::size_t last = first;
    bool open = false;
    if (c.accept("..")) {
      if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
        const std::size_t lcol = c.column();
        last = c.index();
        if (last < first) c.fail_at(lcol, "empty index range");
      } else {
        open = true;
      }
    }
    c.expect(":");
    c.expect("e=");
    const std::size_t ocol = c.column();
    const OrderSpec order = parse_order(c);
    std::vector<Integer> h_orders;
    bool spans = false;
    if (c.accept(",")) {
      c.expect("H=");
      if (c.accept("<e>")) {
        spans = true;
      } else {
        c.expect("[");
        if (!c.accept("]")) {
          do {
            const std::size_t hcol = c.column();
            Integer v = c.integer();
            if (v < 1) c.fail_at(hcol, "H order must be positive");
            h_orders.push_back(v);
          } while (c.accept(","));
          c.expect("]");
        }
      }
    }
    if (!c.at_end()) c.fail("unexpected trailing text");

    if (order.kind == OrderSpec::Kind::Geom) {
      if (!open) c.fail_at(ocol, "geom is only valid on an open range");
      const Integer s = order.shift + Integer(static_cast<unsigned long>(first));
      if (s < 1 || !s.fits_uint_p()) c.fail_at(ocol, "geom exponent at the first tail block must be >= 1");
      tail = TailRule::geometric(order.value, static_cast<unsigned>(s.get_ui()), h_orders, spans);
      continue;
    }
    Block b;
    switch (order.kind) {
      case OrderSpec::Kind::Finite: b.e_order = CyclicOrder::finite(order.value); break;
      case OrderSpec::Kind::Infinite: b.e_order = CyclicOrder::infinite(); break;
      case OrderSpec::Kind::Prufer: b.e_order = CyclicOrder::prufer(order.value); break;
      case OrderSpec::Kind::Geom: break;
    }
    b.h_orders = h_orders;
    b.h_spans_e = spans;
    if (open) {
      tail = TailRule::constant(b);
    } else {
      for (std::size_t j = first; j <= last; ++j) head.push_back(b);
      next = last + 1;
    }
  }
  if (head.empty() && !tail) throw ParseError(1, 1, "no blocks");
  try {
    return make_group(head, tail ? *tail : TailRule::none());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(last_line, 1, e.detail());
  }
}

namespace {

std::string order_text(const CyclicOrder& o) {
  switch (o.kind) {
    case CyclicOrder::Kind::Finite: return o.value.get_str();
    case CyclicOrder::Kind::Infinite: return "Z";
    case CyclicOrder::Kind::Prufer: return "Prufer(" + o.value.get_str() + ")";
  }
  return "?";
}

std::string h_text(const std::vector<Integer>& orders, bool spans) {
  if (spans) return ", H=<e>";
  if (orders.empty()) return "";
  std::string s = ", H=[";
  for (std::size_t i = 0; i < orders.size(); ++i) s += (i ? "," : "") + orders[i].get_str();
  return s + "]";
}

}  // namespace

std::string print_group(const BlockGroup& g) {
  std::ostringstream os;
  const auto& head = g.head();
  std::size_t i = 0;
  while (i < head.size()) {
    std::size_t j = i;
    while (j + 1 < head.size() && head[j + 1] == head[i]) ++j;
    os << "block " << i;
    if (j > i) os << ".." << j;
    os << " : e=" << order_text(head[i].e_order) << h_text(head[i].h_orders, head[i].h_spans_e) << "\n";
    i = j + 1;
  }
  const TailRule& t = g.tail();
  const std::size_t n = head.size();
  switch (t.kind) {
    case TailRule::Kind::None: break;
    case TailRule::Kind::Const:
      os << "block " << n << ".. : e=" << order_text(t.block.e_order) << h_text(t.block.h_orders, t.block.h_spans_e)
         << "\n";
      break;
    case TailRule::Kind::Geometric: {
      const long s = static_cast<long>(t.start_exp) - static_cast<long>(n);
      os << "block " << n << ".. : e=geom(" << t.p.get_str() << "," << s << ")" << h_text(t.h_orders, t.h_spans_e)
         << "\n";
      break;
    }
  }
  return os.str();
}

Element parse_element(const BlockGroup& g, const std::string& text) {
  {
    Cursor z(text, 1);
    if (z.accept("0") && z.at_end()) return Element{};
  }
  Cursor c(text, 1);
  std::map<std::size_t, Term> terms;
  bool first = true;
  while (!c.at_end()) {
    int sign = 1;
    if (c.accept("+")) {
      if (first) c.fail("unexpected '+'");
    } else if (c.accept("-")) {
      sign = -1;
    } else if (!first) {
      c.fail("expected '+' or '-'");
    }
    first = false;
    Rational coeff = 1;
    const std::size_t col = c.column();
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      Integer num = c.integer();
      Integer den = 1;
      if (c.accept("/")) {
        den = c.integer();
        if (den <= 0) c.fail_at(col, "denominator must be positive");
      }
      coeff = Rational(num, den);
      coeff.canonicalize();
      c.expect("*");
    }
    coeff *= sign;
    const std::size_t acol = c.column();
    if (c.accept("e[")) {
      const std::size_t j = c.index();
      c.expect("]");
      Block b;
      try {
        b = g.block_at(j);
      } catch (const Error& e) {
        c.fail_at(acol, e.detail());
      }
      auto& t = terms[j];
      if (t.h.empty()) t.h.assign(b.h_spans_e ? 0 : b.h_orders.size(), Integer(0));
      t.e += coeff;
    } else if (c.accept("h[")) {
      const std::size_t j = c.index();
      c.expect(",");
      const std::size_t i = c.index();
      c.expect("]");
      Block b;
      try {
        b = g.block_at(j);
      } catch (const Error& e) {
        c.fail_at(acol, e.detail());
      }
      if (b.h_spans_e) c.fail_at(acol, "H_" + std::to_string(j) + " = <e_j>; write e[" + std::to_string(j) + "]");
      if (i < 1 || i > b.h_orders.size()) c.fail_at(acol, "H_" + std::to_string(j) + " has no basis element " + std::to_string(i));
      if (coeff.get_den() != 1) c.fail_at(col, "H coefficients must be integers");
      auto& t = terms[j];
      if (t.h.empty()) t.h.assign(b.h_orders.size(), Integer(0));
      t.h[i - 1] += coeff.get_num();
    } else {
      c.fail("expected e[...] or h[...]");
    }
  }
  if (first) c.fail("empty element");
  try {
    return make_element(g, std::move(terms));
  } catch (const Error& e) {
    throw ParseError(1, 1, e.detail());
  }
}

SubgroupSpec parse_subgroup(const BlockGroup& g, const std::string& text) {
  SubgroupSpec spec;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string body = line_without_comment(lines[ln]);
    Cursor c(body, ln + 1);
    if (c.at_end()) continue;
    if (c.accept("H") && c.at_end()) {
      if (!spec.gens.empty()) throw ParseError(ln + 1, 1, "H cannot be mixed with explicit generators");
      spec.h_part = true;
      continue;
    }
    if (spec.h_part) throw ParseError(ln + 1, 1, "H cannot be mixed with explicit generators");
    try {
      spec.gens.push_back(parse_element(g, body));
    } catch (const ParseError& e) {
      throw ParseError(ln + 1, e.column(), e.detail());
    }
  }
  if (!spec.h_part && spec.gens.empty()) throw ParseError(1, 1, "empty subgroup");
  return spec;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidParams, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace minap
