#include "tchedge/rational.hpp"

#include "tchedge/errors.hpp"

#include <cctype>
#include <sstream>

namespace tchedge {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Int parse_int(std::string_view digits) { return Int(std::string(digits)); }

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InputError("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw InputError("bad rational literal: \"" + std::string(text) + "\"");

  Int num, den;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view p = s.substr(0, slash);
    std::string_view q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q))
      throw InputError("bad rational literal: \"" + std::string(text) + "\"");
    num = parse_int(p);
    den = parse_int(q);
    if (den == 0) throw InputError("zero denominator: \"" + std::string(text) + "\"");
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty())
      throw InputError("bad rational literal: \"" + std::string(text) + "\"");
    if (!ip.empty() && !all_digits(ip))
      throw InputError("bad rational literal: \"" + std::string(text) + "\"");
    if (!fp.empty() && !all_digits(fp))
      throw InputError("bad rational literal: \"" + std::string(text) + "\"");
    num = ip.empty() ? Int(0) : parse_int(ip);
    den = 1;
    for (char c : fp) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
  } else {
    if (!all_digits(s)) throw InputError("bad rational literal: \"" + std::string(text) + "\"");
    num = parse_int(s);
    den = 1;
  }
  if (negative) num = -num;
  return Rat(num, den);
}

std::string rat_to_string(const Rat& value) { return value.str(); }

std::vector<Rat> parse_rat_vector(std::string_view text) {
  std::vector<Rat> out;
  size_t start = 0;
  while (true) {
    size_t comma = text.find(',', start);
    std::string_view piece =
        comma == std::string_view::npos ? text.substr(start) : text.substr(start, comma - start);
    out.push_back(parse_rat(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string vector_to_string(const std::vector<Rat>& values) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) os << ", ";
    os << rat_to_string(values[i]);
  }
  os << ")";
  return os.str();
}

}  // namespace tchedge
