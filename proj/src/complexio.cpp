#include "iirofdm/complexio.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "iirofdm/errors.hpp"

namespace iirofdm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view s, std::string_view original) {
  s = trim(s);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);  // from_chars rejects a leading +
  double value = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw ConfigError("cannot parse number '" + std::string(original) + "'");
  }
  return value;
}

// Position of the sign splitting real and imaginary parts, or npos. Signs in
// exponents (preceded by e/E) and a leading sign do not split.
std::size_t split_position(std::string_view s) {
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') return i;
  }
  return std::string_view::npos;
}

template <typename Item>
std::vector<Item> parse_list(std::string_view text, Item (*parse)(std::string_view)) {
  std::vector<Item> out;
  std::size_t start = 0;
  const std::string s(text);
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(parse(std::string_view(s).substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

double parse_real_item(std::string_view s) { return parse_real(s, s); }

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ConfigError("empty complex literal");
  if (s.back() != 'j') return {parse_real(s, text), 0.0};

  s.remove_suffix(1);  // drop the j
  const std::size_t split = split_position(s);
  std::string_view re_part;
  std::string_view im_part = s;
  if (split != std::string_view::npos) {
    re_part = s.substr(0, split);
    im_part = s.substr(split);
  }
  double im = 1.0;
  const std::string_view im_trimmed = trim(im_part);
  if (im_trimmed == "" || im_trimmed == "+") {
    im = 1.0;
  } else if (im_trimmed == "-") {
    im = -1.0;
  } else {
    im = parse_real(im_part, text);
  }
  const double re = re_part.empty() ? 0.0 : parse_real(re_part, text);
  return {re, im};
}

Coefficients parse_complex_list(std::string_view text) {
  const std::vector<Complex> items = parse_list<Complex>(text, &parse_complex);
  Coefficients out(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) out(static_cast<Eigen::Index>(i)) = items[i];
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  return parse_list<double>(text, &parse_real_item);
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_complex(Complex value) {
  if (value.imag() == 0.0) return format_double(value.real());
  std::string out = format_double(value.real());
  if (!(value.imag() < 0.0)) out += '+';
  out += format_double(value.imag());
  out += 'j';
  return out;
}

}  // namespace iirofdm
