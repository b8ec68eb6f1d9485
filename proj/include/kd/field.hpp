#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kd {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact coefficient field: Q with arbitrary precision, or F_p for an odd-sized
// word-fitting prime. No floating point anywhere in the library.
struct Field {
  enum class Kind { Q, Fp };

  Kind kind = Kind::Q;
  std::uint32_t p = 0;  // only meaningful for Fp

  static Field rationals() { return Field{Kind::Q, 0}; }
  static Field prime(std::uint32_t p);
  // Accepts "Q" or "Fp:P" (the CLI syntax).
  static Field parse(const std::string& s);

  bool operator==(const Field&) const = default;
  std::string to_string() const;
};

// A scalar tagged with its field. Arithmetic between scalars of different
// fields is a programming error and throws.
class Scalar {
 public:
  Scalar() : f_(Field::rationals()) {}

  static Scalar zero(const Field& f) { return Scalar(f); }
  static Scalar one(const Field& f) { return from_int(f, 1); }
  static Scalar from_int(const Field& f, long long v);
  // Reduces mod p for Fp; throws if the denominator vanishes mod p.
  static Scalar from_rat(const Field& f, const BigRat& q);
  // Canonical text form: "a" or "a/b" over Q, a residue 0..p-1 over Fp.
  static Scalar parse(const Field& f, const std::string& s);

  const Field& field() const { return f_; }
  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar inv() const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Rational payload (Q only).
  const BigRat& rat() const;
  // Residue payload (Fp only).
  std::uint64_t residue() const { return r_; }

  std::string str() const;

 private:
  explicit Scalar(const Field& f) : f_(f) {}
  void check_same(const Scalar& o) const;

  Field f_;
  BigRat q_;
  std::uint64_t r_ = 0;
};

}  // namespace kd
