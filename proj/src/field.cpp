#include "kd/field.hpp"

namespace kd {

namespace {

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

}  // namespace

Field Field::prime(std::uint32_t p) {
  if (p >= (1u << 31) || !is_prime_u32(p))
    throw std::invalid_argument("field: Fp requires a prime p < 2^31, got " + std::to_string(p));
  return Field{Kind::Fp, p};
}

Field Field::parse(const std::string& s) {
  if (s == "Q") return rationals();
  if (s.rfind("Fp:", 0) == 0) {
    unsigned long v = std::stoul(s.substr(3));
    return prime(static_cast<std::uint32_t>(v));
  }
  throw std::invalid_argument("field: expected Q or Fp:P, got " + s);
}

std::string Field::to_string() const {
  return kind == Kind::Q ? "Q" : "Fp:" + std::to_string(p);
}

Scalar Scalar::from_int(const Field& f, long long v) {
  Scalar s(f);
  if (f.kind == Field::Kind::Q) {
    s.q_ = v;
  } else {
    long long m = v % static_cast<long long>(f.p);
    if (m < 0) m += f.p;
    s.r_ = static_cast<std::uint64_t>(m);
  }
  return s;
}

Scalar Scalar::from_rat(const Field& f, const BigRat& q) {
  Scalar s(f);
  if (f.kind == Field::Kind::Q) {
    s.q_ = q;
    return s;
  }
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt p = f.p;
  BigInt dn = den % p;
  if (dn == 0) throw std::invalid_argument("field: denominator vanishes in F_" + std::to_string(f.p));
  BigInt nn = num % p;
  if (nn < 0) nn += p;
  if (dn < 0) dn += p;
  std::uint64_t n64 = nn.convert_to<std::uint64_t>();
  std::uint64_t d64 = dn.convert_to<std::uint64_t>();
  s.r_ = n64 * mod_pow(d64, f.p - 2, f.p) % f.p;
  return s;
}

Scalar Scalar::parse(const Field& f, const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    BigInt v(s);
    return from_rat(f, BigRat(v));
  }
  BigInt num(s.substr(0, slash));
  BigInt den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("field: zero denominator in scalar " + s);
  return from_rat(f, BigRat(num, den));
}

bool Scalar::is_zero() const {
  return f_.kind == Field::Kind::Q ? q_ == 0 : r_ == 0;
}

bool Scalar::is_one() const {
  return f_.kind == Field::Kind::Q ? q_ == 1 : r_ == 1 % f_.p;
}

void Scalar::check_same(const Scalar& o) const {
  if (!(f_ == o.f_)) throw std::invalid_argument("field: mixed-field arithmetic");
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_same(o);
  Scalar s(f_);
  if (f_.kind == Field::Kind::Q)
    s.q_ = q_ + o.q_;
  else
    s.r_ = (r_ + o.r_) % f_.p;
  return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
  check_same(o);
  Scalar s(f_);
  if (f_.kind == Field::Kind::Q)
    s.q_ = q_ - o.q_;
  else
    s.r_ = (r_ + f_.p - o.r_) % f_.p;
  return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
  check_same(o);
  Scalar s(f_);
  if (f_.kind == Field::Kind::Q)
    s.q_ = q_ * o.q_;
  else
    s.r_ = r_ * o.r_ % f_.p;
  return s;
}

Scalar Scalar::inv() const {
  if (is_zero()) throw std::domain_error("field: division by zero");
  Scalar s(f_);
  if (f_.kind == Field::Kind::Q)
    s.q_ = 1 / q_;
  else
    s.r_ = mod_pow(r_, f_.p - 2, f_.p);
  return s;
}

Scalar Scalar::operator/(const Scalar& o) const {
  check_same(o);
  return *this * o.inv();
}

Scalar Scalar::operator-() const {
  Scalar s(f_);
  if (f_.kind == Field::Kind::Q)
    s.q_ = -q_;
  else
    s.r_ = r_ == 0 ? 0 : f_.p - r_;
  return s;
}

bool Scalar::operator==(const Scalar& o) const {
  check_same(o);
  return f_.kind == Field::Kind::Q ? q_ == o.q_ : r_ == o.r_;
}

const BigRat& Scalar::rat() const {
  if (f_.kind != Field::Kind::Q) throw std::logic_error("field: rat() on Fp scalar");
  return q_;
}

std::string Scalar::str() const {
  if (f_.kind == Field::Kind::Fp) return std::to_string(r_);
  BigInt num = boost::multiprecision::numerator(q_);
  BigInt den = boost::multiprecision::denominator(q_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace kd
