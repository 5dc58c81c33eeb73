#include <mpfr.h>

#include <cmath>

#include "doctest.h"
#include "qc/golden.hpp"

using qc::GoldenNum;

namespace {
const GoldenNum t = GoldenNum::tau();

// MPFR reference value of a + b tau at 200 bits
double reference(const GoldenNum& x) {
  mpfr_t s5, a, b;
  mpfr_inits2(200, s5, a, b, nullptr);
  mpfr_sqrt_ui(s5, 5, MPFR_RNDN);
  mpfr_add_ui(s5, s5, 1, MPFR_RNDN);
  mpfr_div_ui(s5, s5, 2, MPFR_RNDN);
  mpfr_set_q(a, x.a().get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(b, x.b().get_mpq_t(), MPFR_RNDN);
  mpfr_fma(a, b, s5, a, MPFR_RNDN);
  double r = mpfr_get_d(a, MPFR_RNDN);
  mpfr_clears(s5, a, b, nullptr);
  return r;
}
}  // namespace

TEST_CASE("tau squared is tau plus one") {
  CHECK(t * t == t + 1);
  CHECK(GoldenNum::sigma() * t == GoldenNum(1));
  CHECK(GoldenNum::sigma() == t - 1);
  CHECK(qc::tau_pow(5) == GoldenNum(3, 5));
  CHECK(qc::tau_pow(-2) == GoldenNum(2, -1));
}

TEST_CASE("field operations") {
  GoldenNum x(mpq_class(3, 4), -2), y(-5, mpq_class(1, 3));
  CHECK((x * y) / y == x);
  CHECK(x * x.inverse() == GoldenNum(1));
  CHECK((x - y) + y == x);
  CHECK(x.conj().conj() == x);
  CHECK((x * x.conj()).is_rational());
  CHECK((x * x.conj()).a() == x.norm());
  CHECK_THROWS(GoldenNum(0).inverse());
}

TEST_CASE("exact sign of nearly cancelling values") {
  // F(n+1) - F(n) tau alternates in sign and shrinks like tau^-n
  mpz_class f0 = 1, f1 = 1;
  for (int n = 1; n < 120; ++n) {
    GoldenNum d(mpq_class(f1), mpq_class(-f0));
    CHECK(d.sign() == (n % 2 ? -1 : 1));
    mpz_class f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
  CHECK(GoldenNum(0).sign() == 0);
}

TEST_CASE("floor and ceil") {
  CHECK(t.floor() == 1);
  CHECK(t.ceil() == 2);
  CHECK((-t).floor() == -2);
  CHECK(GoldenNum(7).floor() == 7);
  CHECK(GoldenNum(7).ceil() == 7);
  CHECK((GoldenNum(mpq_class(-1, 2)) + t * GoldenNum(0)).floor() == -1);
  CHECK((GoldenNum(10) * t).floor() == 16);
}

TEST_CASE("to_double is correctly rounded") {
  for (auto x : {t, GoldenNum(mpq_class(1, 3), mpq_class(-2, 7)), GoldenNum(832040, -514229),
                 GoldenNum(-317811, 196418)})
    CHECK(x.to_double() == reference(x));
  CHECK(GoldenNum(832040, -514229).to_double() != 0.0);
}

TEST_CASE("string round trip") {
  GoldenNum x(mpq_class(-3, 8), mpq_class(5, 2));
  CHECK(x.str() == "-3/8 + 5/2 t");
  CHECK(GoldenNum::parse(x.str()) == x);
  CHECK(GoldenNum::parse("7") == GoldenNum(7));
  CHECK(GoldenNum::parse("2 t") == GoldenNum(0, 2));
  CHECK(GoldenNum::parse("-1 + -1 t") == -(t * t));
  CHECK_THROWS(GoldenNum::parse("x"));
}

TEST_CASE("Dirichlet integers") {
  auto f = qc::dirichlet(GoldenNum(3, -2));
  CHECK(f.is_dirichlet);
  CHECK(f.witness->first == 3);
  CHECK(f.witness->second == -2);
  CHECK_FALSE(qc::dirichlet(GoldenNum(mpq_class(1, 2), 1)).is_dirichlet);
}

TEST_CASE("Eigen matrices over the golden field") {
  qc::Mat3 m;
  m << t, 0, 1, 0, 1, 0, -1, 0, t;
  qc::Vec3 v(1, t, 2);
  qc::Vec3 w = m * v;
  CHECK(w(0) == t + 2);
  CHECK(w(1) == t);
  CHECK(w(2) == 2 * t - 1);
  CHECK(qc::squared_norm(v) == t + 6);
  CHECK(qc::lex_cmp(v, w) < 0);
  auto d = qc::to_double(w);
  CHECK(d(1) == doctest::Approx(1.6180339887498949));
}
