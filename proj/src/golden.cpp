#include "qc/golden.hpp"

#include <mpfr.h>

#include <stdexcept>

namespace qc {

GoldenNum& GoldenNum::operator*=(const GoldenNum& o) {
  // (a+bt)(c+dt) = ac+bd + (ad+bc+bd)t
  mpq_class bd = b_ * o.b_;
  mpq_class nb = a_ * o.b_ + b_ * o.a_ + bd;
  a_ = a_ * o.a_ + bd;
  b_ = std::move(nb);
  return *this;
}

GoldenNum GoldenNum::inverse() const {
  mpq_class n = norm();
  if (sgn(n) == 0) throw std::domain_error("GoldenNum: division by zero");
  GoldenNum c = conj();
  return {c.a_ / n, c.b_ / n};
}

GoldenNum& GoldenNum::operator/=(const GoldenNum& o) {
  if (o.is_rational()) {
    if (sgn(o.a_) == 0) throw std::domain_error("GoldenNum: division by zero");
    a_ /= o.a_;
    b_ /= o.a_;
    return *this;
  }
  return *this *= o.inverse();
}

int GoldenNum::sign() const {
  // value = (p + q sqrt5)/2
  mpq_class p = 2 * a_ + b_;
  int sp = sgn(p), sq = sgn(b_);
  if (sp >= 0 && sq >= 0) return (sp || sq) ? 1 : 0;
  if (sp <= 0 && sq <= 0) return -1;
  int c = cmp(mpq_class(p * p), mpq_class(5 * b_ * b_));
  return sp > 0 ? c : -c;
}

namespace {

constexpr mpfr_prec_t kPrec = 320;

struct Mpfr {
  mpfr_t v;
  Mpfr() { mpfr_init2(v, kPrec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

void set_tau(mpfr_t t) {
  mpfr_sqrt_ui(t, 5, MPFR_RNDN);
  mpfr_add_ui(t, t, 1, MPFR_RNDN);
  mpfr_div_ui(t, t, 2, MPFR_RNDN);
}

// value to kPrec bits
void eval(const GoldenNum& x, mpfr_t out) {
  Mpfr t, s;
  set_tau(t.v);
  bool cancel = sgn(x.a()) * sgn(x.b()) < 0;
  if (!cancel) {
    mpfr_mul_q(s.v, t.v, x.b().get_mpq_t(), MPFR_RNDN);
    mpfr_set_q(out, x.a().get_mpq_t(), MPFR_RNDN);
    mpfr_add(out, out, s.v, MPFR_RNDN);
    return;
  }
  // x = N(x) / conj(x); conj has no cancellation here
  GoldenNum c = x.conj();
  mpfr_mul_q(s.v, t.v, c.b().get_mpq_t(), MPFR_RNDN);
  Mpfr d;
  mpfr_set_q(d.v, c.a().get_mpq_t(), MPFR_RNDN);
  mpfr_add(d.v, d.v, s.v, MPFR_RNDN);
  mpq_class n = x.norm();
  mpfr_set_q(out, n.get_mpq_t(), MPFR_RNDN);
  mpfr_div(out, out, d.v, MPFR_RNDN);
}

}  // namespace

double GoldenNum::to_double() const {
  Mpfr r;
  if (is_rational())
    mpfr_set_q(r.v, a_.get_mpq_t(), MPFR_RNDN);
  else
    eval(*this, r.v);
  return mpfr_get_d(r.v, MPFR_RNDN);
}

mpz_class GoldenNum::floor() const {
  if (is_rational()) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), a_.get_num_mpz_t(), a_.get_den_mpz_t());
    return f;
  }
  Mpfr r;
  eval(*this, r.v);
  mpz_class f;
  mpfr_get_z(f.get_mpz_t(), r.v, MPFR_RNDD);
  // exact correction
  while ((*this - GoldenNum(mpq_class(f))).sign() < 0) --f;
  while ((*this - GoldenNum(mpq_class(f + 1))).sign() >= 0) ++f;
  return f;
}

mpz_class GoldenNum::ceil() const {
  mpz_class f = floor();
  return GoldenNum(mpq_class(f)) == *this ? f : mpz_class(f + 1);
}

std::string GoldenNum::str() const { return a_.get_str() + " + " + b_.get_str() + " t"; }

GoldenNum GoldenNum::parse(const std::string& s) {
  auto trim = [](std::string v) {
    std::size_t i = v.find_first_not_of(" \t"), j = v.find_last_not_of(" \t");
    return i == std::string::npos ? std::string() : v.substr(i, j - i + 1);
  };
  std::string t = trim(s);
  auto rational = [&](const std::string& v) {
    mpq_class q;
    if (v.empty() || q.set_str(v, 10) != 0) throw std::invalid_argument("GoldenNum::parse: bad rational '" + v + "'");
    q.canonicalize();
    return q;
  };
  if (t.empty() || t.back() != 't') return {rational(t), 0};
  std::size_t plus = t.rfind(" + ");
  if (plus == std::string::npos) return {0, rational(trim(t.substr(0, t.size() - 1)))};
  return {rational(trim(t.substr(0, plus))), rational(trim(t.substr(plus + 3, t.size() - plus - 4)))};
}

std::size_t GoldenNum::hash() const {
  auto h = [](const mpz_class& z) {
    std::size_t v = mpz_size(z.get_mpz_t()) ? mpz_getlimbn(z.get_mpz_t(), 0) : 0;
    return v * 31 + static_cast<std::size_t>(sgn(z) + 1);
  };
  std::size_t r = h(a_.get_num());
  r = r * 1000003 ^ h(a_.get_den());
  r = r * 1000003 ^ h(b_.get_num());
  r = r * 1000003 ^ h(b_.get_den());
  return r;
}

DirichletFlag dirichlet(const GoldenNum& x) {
  DirichletFlag f;
  if (x.a().get_den() == 1 && x.b().get_den() == 1) {
    f.is_dirichlet = true;
    f.witness = std::make_pair(x.a().get_num(), x.b().get_num());
  }
  return f;
}

}  // namespace qc
