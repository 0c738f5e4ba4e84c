#include "gwlab/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>

namespace gwlab {
namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("distribution syntax: " + what);
}

double parse_real(const std::string& s) {
  if (s.empty()) fail("missing number");
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail("bad number '" + s + "'");
  }
  if (pos != s.size()) fail("trailing characters in number '" + s + "'");
  return v;
}

std::int64_t parse_count(const std::string& s) {
  std::int64_t v = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end || v < 0)
    fail("bad support point '" + s + "' (need a non-negative integer)");
  return v;
}

}  // namespace

OffspringLaw parse_offspring(std::string_view text, std::size_t cap) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail("empty specification");

  const auto open = s.find('(');
  if (open != std::string::npos) {
    if (s.back() != ')') fail("missing ')' in '" + s + "'");
    const std::string name = s.substr(0, open);
    const std::string arg = s.substr(open + 1, s.size() - open - 2);
    if (name == "poisson") return OffspringLaw::poisson(parse_real(arg), cap);
    if (name == "geometric")
      return OffspringLaw::geometric(parse_real(arg), cap);
    if (name == "delta") return OffspringLaw::point_mass(parse_count(arg));
    fail("unknown family '" + name + "'");
  }

  std::vector<double> probs;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = std::min(s.find(',', pos), s.size());
    const std::string pair = s.substr(pos, comma - pos);
    const auto colon = pair.find(':');
    if (colon == std::string::npos) fail("expected 'value:prob' in '" + pair + "'");
    const std::int64_t k = parse_count(pair.substr(0, colon));
    const double p = parse_real(pair.substr(colon + 1));
    if (p < 0.0) fail("negative probability in '" + pair + "'");
    if (static_cast<std::size_t>(k) >= probs.size())
      probs.resize(static_cast<std::size_t>(k) + 1, 0.0);
    probs[static_cast<std::size_t>(k)] += p;
    if (comma == s.size()) break;
    pos = comma + 1;
  }
  try {
    return OffspringLaw::from_probs(std::move(probs));
  } catch (const std::invalid_argument& e) {
    fail(std::string("mass must total 1: ") + e.what());
  }
}

}  // namespace gwlab
