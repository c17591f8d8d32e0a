#include "parity_forge/rational.hpp"

#include <cctype>

namespace pf {
namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rat> Rat::try_parse(const std::string& in) noexcept {
  std::string s = in;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  Rat out;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpq_class v(mpz_class(num, 10), mpz_class(den, 10));
    if (sgn(v.get_den()) == 0) return std::nullopt;
    v.canonicalize();
    out.v_ = v;
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    mpq_class v(mpz_class(whole + frac, 10), den);
    v.canonicalize();
    out.v_ = v;
  } else {
    if (!all_digits(s)) return std::nullopt;
    out.v_ = mpq_class(mpz_class(s, 10));
  }
  if (neg) out.v_ = -out.v_;
  return out;
}

Rat Rat::parse(const std::string& s) {
  auto r = try_parse(s);
  if (!r) throw InputError("malformed rational '" + s + "'");
  return *r;
}

}  // namespace pf
