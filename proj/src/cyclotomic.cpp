#include "hblock/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace hblock {

namespace {

void check_order(std::int64_t order) {
  if (order < 1) throw std::invalid_argument("cyclotomic order must be positive");
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("cyclotomic polynomial coefficient overflow");
  return r;
}

int moebius(std::int64_t n) {
  int mu = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::vector<std::int64_t> compute_cyclotomic(std::int64_t n) {
  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      divisors.push_back(d);
      if (d * d != n) divisors.push_back(n / d);
    }
  }
  std::vector<std::int64_t> poly{1};
  for (auto d : divisors) {
    if (moebius(n / d) != 1) continue;
    std::vector<std::int64_t> next(poly.size() + static_cast<std::size_t>(d), 0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + static_cast<std::size_t>(d)] += poly[j];
      next[j] = checked_sub(next[j], poly[j]);
    }
    poly = std::move(next);
  }
  for (auto d : divisors) {
    if (moebius(n / d) != -1) continue;
    // poly = q * (x^d - 1)  =>  q_j = q_{j-d} - poly_j
    std::size_t du = static_cast<std::size_t>(d);
    std::vector<std::int64_t> q(poly.size() - du, 0);
    for (std::size_t j = 0; j < q.size(); ++j) {
      std::int64_t prev = j >= du ? q[j - du] : 0;
      q[j] = checked_sub(prev, poly[j]);
    }
    poly = std::move(q);
  }
  return poly;
}

struct SparsePoly {
  std::vector<std::int64_t> coeff;
  std::vector<std::pair<std::size_t, std::int64_t>> terms;
  std::size_t degree;
};

const SparsePoly& sparse_cyclotomic(std::int64_t n) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<SparsePoly>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto sp = std::make_unique<SparsePoly>();
  sp->coeff = compute_cyclotomic(n);
  sp->degree = sp->coeff.size() - 1;
  for (std::size_t j = 0; j < sp->coeff.size(); ++j) {
    if (sp->coeff[j] != 0) sp->terms.emplace_back(j, sp->coeff[j]);
  }
  auto& ref = *sp;
  cache.emplace(n, std::move(sp));
  return ref;
}

// Reduces block (length r) modulo the monic polynomial phi; true iff the
// remainder vanishes. Returns false in *overflow when 64-bit arithmetic
// would overflow.
bool reduce_block_small(std::vector<std::int64_t>& c, const SparsePoly& phi, bool* overflow) {
  std::size_t deg = phi.degree;
  for (std::size_t d = c.size(); d-- > deg;) {
    std::int64_t lead = c[d];
    if (lead == 0) continue;
    std::size_t base = d - deg;
    for (const auto& [m, pm] : phi.terms) {
      std::int64_t prod, diff;
      if (__builtin_mul_overflow(lead, pm, &prod) || __builtin_sub_overflow(c[base + m], prod, &diff)) {
        *overflow = true;
        return false;
      }
      c[base + m] = diff;
    }
  }
  for (std::size_t j = 0; j < std::min(deg, c.size()); ++j) {
    if (c[j] != 0) return false;
  }
  return true;
}

bool reduce_block_big(std::vector<Integer>& c, const SparsePoly& phi) {
  std::size_t deg = phi.degree;
  for (std::size_t d = c.size(); d-- > deg;) {
    if (c[d] == 0) continue;
    Integer lead = c[d];
    std::size_t base = d - deg;
    for (const auto& [m, pm] : phi.terms) c[base + m] -= lead * pm;
  }
  for (std::size_t j = 0; j < std::min(deg, c.size()); ++j) {
    if (c[j] != 0) return false;
  }
  return true;
}

}  // namespace

std::int64_t radical(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("radical of non-positive integer");
  std::int64_t r = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      r *= p;
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) r *= n;
  return r;
}

const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t n) {
  check_order(n);
  return sparse_cyclotomic(n).coeff;
}

CycNum::CycNum(std::int64_t order) : order_(order), den_(1) {
  check_order(order);
  num_.assign(static_cast<std::size_t>(order), Integer(0));
}

CycNum CycNum::constant(const Rational& r, std::int64_t order) {
  CycNum x(order);
  x.num_[0] = r.get_num();
  x.den_ = r.get_den();
  return x;
}

CycNum CycNum::from_coeffs(std::int64_t order, const std::vector<Rational>& coeffs) {
  if (static_cast<std::int64_t>(coeffs.size()) != order) throw std::invalid_argument("coefficient vector length must equal the order");
  CycNum x(order);
  Integer den = 1;
  for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  for (std::size_t j = 0; j < coeffs.size(); ++j) x.num_[j] = coeffs[j].get_num() * (den / coeffs[j].get_den());
  x.den_ = den;
  x.normalize();
  return x;
}

CycNum CycNum::from_integers(std::int64_t order, std::vector<Integer> numerators, Integer denominator) {
  if (static_cast<std::int64_t>(numerators.size()) != order) throw std::invalid_argument("coefficient vector length must equal the order");
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  CycNum x(order);
  x.num_ = std::move(numerators);
  x.den_ = std::move(denominator);
  x.normalize();
  return x;
}

void CycNum::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& v : num_) v = -v;
  }
  if (den_ == 1) return;
  Integer g = den_;
  for (const auto& v : num_) {
    if (v != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) return;
  }
  if (nonzero_count() == 0) {
    den_ = 1;
    return;
  }
  den_ /= g;
  for (auto& v : num_) v /= g;
}

Rational CycNum::coeff(std::int64_t j) const {
  Rational r(num_[static_cast<std::size_t>(pmod(j, order_))], den_);
  r.canonicalize();
  return r;
}

std::vector<Rational> CycNum::coeffs() const {
  std::vector<Rational> out;
  out.reserve(num_.size());
  for (std::int64_t j = 0; j < order_; ++j) out.push_back(coeff(j));
  return out;
}

std::size_t CycNum::nonzero_count() const {
  std::size_t n = 0;
  for (const auto& v : num_) n += (v != 0);
  return n;
}

CycNum CycNum::promoted(std::int64_t m) const {
  if (m % order_ != 0) throw std::invalid_argument("promotion target must be a multiple of the order");
  if (m == order_) return *this;
  CycNum x(m);
  std::int64_t f = m / order_;
  for (std::int64_t j = 0; j < order_; ++j) {
    if (num_[static_cast<std::size_t>(j)] != 0) x.num_[static_cast<std::size_t>(j * f)] = num_[static_cast<std::size_t>(j)];
  }
  x.den_ = den_;
  return x;
}

CycNum CycNum::contracted() const {
  std::int64_t g = order_;
  for (std::int64_t j = 0; j < order_ && g > 1; ++j) {
    if (num_[static_cast<std::size_t>(j)] != 0) g = gcd64(g, j);
  }
  if (nonzero_count() == 0) return CycNum(1);
  if (g == 1) return *this;
  CycNum x(order_ / g);
  for (std::int64_t j = 0; j < order_; j += g) x.num_[static_cast<std::size_t>(j / g)] = num_[static_cast<std::size_t>(j)];
  x.den_ = den_;
  return x;
}

CycNum CycNum::conj() const {
  CycNum x(order_);
  for (std::int64_t j = 0; j < order_; ++j) x.num_[static_cast<std::size_t>(pmod(-j, order_))] = num_[static_cast<std::size_t>(j)];
  x.den_ = den_;
  return x;
}

CycNum CycNum::shifted(std::int64_t s) const {
  CycNum x(order_);
  for (std::int64_t j = 0; j < order_; ++j) x.num_[static_cast<std::size_t>(pmod(j + s, order_))] = num_[static_cast<std::size_t>(j)];
  x.den_ = den_;
  return x;
}

CycNum& CycNum::operator+=(const CycNum& o) {
  std::int64_t m = lcm64(order_, o.order_);
  if (m != order_) *this = promoted(m);
  const CycNum* bp = &o;
  CycNum tmp;
  if (o.order_ != m) {
    tmp = o.promoted(m);
    bp = &tmp;
  }
  if (den_ == bp->den_) {
    for (std::size_t j = 0; j < num_.size(); ++j) num_[j] += bp->num_[j];
  } else {
    Integer l;
    mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), bp->den_.get_mpz_t());
    Integer fa = l / den_, fb = l / bp->den_;
    for (std::size_t j = 0; j < num_.size(); ++j) num_[j] = num_[j] * fa + bp->num_[j] * fb;
    den_ = l;
  }
  normalize();
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) {
  *this += -o;
  return *this;
}

CycNum& CycNum::operator*=(const CycNum& o) {
  *this = *this * o;
  return *this;
}

CycNum& CycNum::operator*=(const Rational& r) {
  for (auto& v : num_) v *= r.get_num();
  den_ *= r.get_den();
  normalize();
  return *this;
}

bool CycNum::operator==(const CycNum& o) const { return cyc_is_zero(*this - o); }

CycNum operator+(CycNum a, const CycNum& b) {
  a += b;
  return a;
}

CycNum operator-(CycNum a, const CycNum& b) {
  a -= b;
  return a;
}

CycNum operator-(const CycNum& a) { return a * Rational(-1); }

CycNum operator*(const CycNum& a, const CycNum& b) {
  std::int64_t m = lcm64(a.order(), b.order());
  std::int64_t fa = m / a.order(), fb = m / b.order();
  std::vector<std::pair<std::int64_t, const Integer*>> na, nb;
  for (std::int64_t j = 0; j < a.order(); ++j) {
    const auto& v = a.numerators()[static_cast<std::size_t>(j)];
    if (v != 0) na.emplace_back(j * fa, &v);
  }
  for (std::int64_t j = 0; j < b.order(); ++j) {
    const auto& v = b.numerators()[static_cast<std::size_t>(j)];
    if (v != 0) nb.emplace_back(j * fb, &v);
  }
  std::vector<Integer> out(static_cast<std::size_t>(m), Integer(0));
  for (const auto& [ja, va] : na) {
    for (const auto& [jb, vb] : nb) {
      std::int64_t idx = ja + jb;
      if (idx >= m) idx -= m;
      mpz_addmul(out[static_cast<std::size_t>(idx)].get_mpz_t(), va->get_mpz_t(), vb->get_mpz_t());
    }
  }
  return CycNum::from_integers(m, std::move(out), a.denominator() * b.denominator());
}

CycNum operator*(CycNum a, const Rational& r) {
  a *= r;
  return a;
}

CycNum operator*(const Rational& r, CycNum a) {
  a *= r;
  return a;
}

CycNum root_of_unity(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  std::int64_t n = to_int64(c.get_den());
  Integer idx;
  mpz_fdiv_r(idx.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
  std::vector<Integer> nums(static_cast<std::size_t>(n), Integer(0));
  nums[static_cast<std::size_t>(to_int64(idx))] = 1;
  return CycNum::from_integers(n, std::move(nums));
}

bool cyc_is_zero(const CycNum& x) {
  std::int64_t n = x.order();
  std::int64_t r = radical(n);
  std::int64_t s = n / r;
  const SparsePoly& phi = sparse_cyclotomic(r);
  const auto& num = x.numerators();
  std::vector<std::int64_t> small(static_cast<std::size_t>(r));
  std::vector<Integer> big;
  for (std::int64_t i = 0; i < s; ++i) {
    bool any = false, fits = true;
    for (std::int64_t l = 0; l < r; ++l) {
      const Integer& v = num[static_cast<std::size_t>(i + s * l)];
      if (v != 0) any = true;
      if (!v.fits_slong_p()) fits = false;
    }
    if (!any) continue;
    bool overflow = false;
    if (fits) {
      for (std::int64_t l = 0; l < r; ++l) small[static_cast<std::size_t>(l)] = num[static_cast<std::size_t>(i + s * l)].get_si();
      bool zero = reduce_block_small(small, phi, &overflow);
      if (!overflow) {
        if (!zero) return false;
        continue;
      }
    }
    big.assign(static_cast<std::size_t>(r), Integer(0));
    for (std::int64_t l = 0; l < r; ++l) big[static_cast<std::size_t>(l)] = num[static_cast<std::size_t>(i + s * l)];
    if (!reduce_block_big(big, phi)) return false;
  }
  return true;
}

BigComplex cyc_eval(const CycNum& x, int precision_bits) {
  if (precision_bits < kMinPrecision) throw std::invalid_argument("precision must be at least 64 bits");
  int wp = precision_bits + 32;
  std::int64_t n = x.order();
  std::size_t nz = x.nonzero_count();
  BigComplex acc(wp);
  const auto& num = x.numerators();
  std::unique_ptr<RootTable> table;
  if (n > 64 && nz * 8 > static_cast<std::size_t>(n)) table = std::make_unique<RootTable>(n, wp);
  BigReal c(wp);
  for (std::int64_t j = 0; j < n; ++j) {
    const Integer& v = num[static_cast<std::size_t>(j)];
    if (v == 0) continue;
    mpfr_set_z(c.raw(), v.get_mpz_t(), MPFR_RNDN);
    if (table) {
      acc.add_product((*table)[j], c);
    } else {
      acc.add_product(BigComplex::unit(make_rational(j, n), wp), c);
    }
  }
  BigReal den(wp);
  mpfr_set_z(den.raw(), x.denominator().get_mpz_t(), MPFR_RNDN);
  acc.re() /= den;
  acc.im() /= den;
  BigComplex out(precision_bits);
  mpfr_set(out.re().raw(), acc.re().raw(), MPFR_RNDN);
  mpfr_set(out.im().raw(), acc.im().raw(), MPFR_RNDN);
  return out;
}

CycAccumulator::CycAccumulator(std::int64_t order) : order_(order) {
  check_order(order);
  small_.assign(static_cast<std::size_t>(order), 0);
}

void CycAccumulator::promote() {
  big_.resize(small_.size());
  for (std::size_t j = 0; j < small_.size(); ++j) big_[j] = Integer(static_cast<long>(small_[j]));
  small_.clear();
  small_.shrink_to_fit();
  is_big_ = true;
}

void CycAccumulator::add(std::int64_t index, std::int64_t weight) {
  std::size_t j = static_cast<std::size_t>(pmod(index, order_));
  if (!is_big_) {
    std::int64_t r;
    if (!__builtin_add_overflow(small_[j], weight, &r)) {
      small_[j] = r;
      return;
    }
    promote();
  }
  big_[j] += Integer(static_cast<long>(weight));
}

void CycAccumulator::merge(const CycAccumulator& other) {
  if (other.order_ != order_) throw std::invalid_argument("accumulator orders differ");
  for (std::size_t j = 0; j < static_cast<std::size_t>(order_); ++j) {
    if (other.is_big_) {
      if (!is_big_) promote();
      big_[j] += other.big_[j];
    } else {
      add(static_cast<std::int64_t>(j), other.small_[j]);
    }
  }
}

CycNum CycAccumulator::finish(const Rational& scale) const {
  std::vector<Integer> nums(static_cast<std::size_t>(order_));
  for (std::size_t j = 0; j < nums.size(); ++j) {
    nums[j] = is_big_ ? big_[j] : Integer(static_cast<long>(small_[j]));
    nums[j] *= scale.get_num();
  }
  return CycNum::from_integers(order_, std::move(nums), scale.get_den());
}

}  // namespace hblock
