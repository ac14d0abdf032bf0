#include "hblock/gauss.hpp"

#include <numeric>

namespace hblock {

namespace {

std::int64_t lcm_den(std::int64_t acc, const Rational& r) { return lcm64(acc, to_int64(r.get_den())); }

// Exact sum of e(r_i) over a list of rational exponents.
CycNum sum_of_units(const std::vector<Rational>& exponents) {
  std::int64_t D = 1;
  for (const auto& r : exponents) D = lcm_den(D, r);
  CycAccumulator acc(D);
  for (const auto& r : exponents) {
    Integer idx = r.get_num() * (Integer(static_cast<long>(D)) / r.get_den());
    Integer red;
    mpz_fdiv_r_ui(red.get_mpz_t(), idx.get_mpz_t(), static_cast<unsigned long>(D));
    acc.add(to_int64(red), 1);
  }
  return acc.finish();
}

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
  std::size_t n = a.size(), m = b[0].size(), l = b.size();
  RatMatrix out(n, RatVector(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < l; ++k)
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

RatVector mat_vec(const RatMatrix& a, const RatVector& v) {
  RatVector out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

// Column-style lower-triangular Hermite form of an integral nonsingular
// matrix; returns the positive diagonal.
std::vector<Integer> hermite_diagonal(IntMatrix t) {
  std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (t[i][j] == 0) continue;
      Integer g, u, v;
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), t[i][i].get_mpz_t(), t[i][j].get_mpz_t());
      Integer a = t[i][i] / g, b = t[i][j] / g;
      for (std::size_t r = 0; r < n; ++r) {
        Integer ci = t[r][i], cj = t[r][j];
        t[r][i] = u * ci + v * cj;
        t[r][j] = -b * ci + a * cj;
      }
    }
    if (t[i][i] < 0) {
      for (std::size_t r = 0; r < n; ++r) t[r][i] = -t[r][i];
    }
  }
  std::vector<Integer> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i][i] == 0) throw PreconditionError("not_invertible", "singular index matrix");
    diag[i] = t[i][i];
  }
  return diag;
}

template <class F>
void for_each_box_point(const std::vector<std::int64_t>& bounds, F&& f) {
  std::vector<std::int64_t> x(bounds.size(), 0);
  for (auto b : bounds) {
    if (b <= 0) return;
  }
  while (true) {
    f(x);
    std::size_t i = 0;
    while (i < x.size()) {
      if (++x[i] < bounds[i]) break;
      x[i] = 0;
      ++i;
    }
    if (i == x.size()) return;
  }
}

BigReal sqrt_rational(const Rational& r, int prec) { return sqrt(BigReal(r, prec)); }

}  // namespace

CycNum quadratic_gauss_sum(std::int64_t a, std::int64_t b, std::int64_t c) {
  if (c < 1) throw std::invalid_argument("Gauss sum modulus must be positive");
  CycAccumulator acc(c);
  for (std::int64_t n = 0; n < c; ++n) {
    // (a n^2 + b n) mod c without overflow for moderate inputs
    __int128 v = static_cast<__int128>(a) * n * n + static_cast<__int128>(b) * n;
    std::int64_t idx = static_cast<std::int64_t>(v % c);
    acc.add(idx < 0 ? idx + c : idx, 1);
  }
  return acc.finish();
}

Rational rat_det(RatMatrix m) {
  std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

RatMatrix rat_inverse(const RatMatrix& in) {
  std::size_t n = in.size();
  RatMatrix m = in;
  RatMatrix inv(n, RatVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw std::domain_error("singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Rational p = m[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      m[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& v : m[i]) out[i].emplace_back(v);
  return out;
}

int signature(RatMatrix a) {
  int sig = 0;
  std::size_t n = a.size();
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && a[i][i] != 0) {
        piv = i;
        break;
      }
    }
    if (piv == n) {
      // All remaining diagonal entries vanish: the congruence e_i -> e_i + e_j
      // creates the nonzero diagonal entry 2 a_ij.
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i) {
        if (done[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (!done[j] && j != i && a[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
        }
      }
      if (pi == n) break;  // degenerate remainder contributes zero
      for (std::size_t c = 0; c < n; ++c) a[pi][c] += a[pj][c];
      for (std::size_t r = 0; r < n; ++r) a[r][pi] += a[r][pj];
      piv = pi;
    }
    sig += a[piv][piv] > 0 ? 1 : -1;
    done[piv] = true;
    for (std::size_t r = 0; r < n; ++r) {
      if (done[r] || a[r][piv] == 0) continue;
      Rational f = a[r][piv] / a[piv][piv];
      for (std::size_t c = 0; c < n; ++c) a[r][c] -= f * a[piv][c];
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (!done[c]) a[piv][c] = 0;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (!done[r]) a[r][piv] = 0;
    }
  }
  return sig;
}

void check_lattice_data(const LatticeData& d) {
  std::size_t n = static_cast<std::size_t>(d.rank);
  if (d.rank < 1 || d.gram.size() != n || d.automorphism.size() != n || d.shift.size() != n) {
    throw PreconditionError("shape", "rank, gram, automorphism and shift sizes disagree");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d.gram[i].size() != n || d.automorphism[i].size() != n) throw PreconditionError("shape", "non-square matrix");
    for (std::size_t j = 0; j < n; ++j) {
      if (d.gram[i][j] != d.gram[j][i]) throw PreconditionError("shape", "gram matrix is not symmetric");
    }
  }
  if (d.level < 1) throw PreconditionError("level_not_multiple", "level must be positive");
  RatMatrix g = to_rational(d.gram);
  Rational det_g = rat_det(g);
  if (det_g == 0) throw PreconditionError("gram_degenerate", "det(gram) = 0");
  RatMatrix gh = mat_mul(g, d.automorphism);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (gh[i][j] != gh[j][i]) throw PreconditionError("not_self_adjoint", "gram*h is not symmetric");
  if (rat_det(d.automorphism) == 0) throw PreconditionError("not_invertible", "det h = 0");
  RatMatrix ginv = rat_inverse(g);
  RatMatrix t = mat_mul(mat_mul(g, d.automorphism), ginv);
  for (const auto& row : t)
    for (const auto& v : row)
      if (!is_integer(v)) throw PreconditionError("dual_not_preserved", "h does not map the dual lattice into itself");
  // Dual basis y_i = G^{-1} e_i: (k/2)<y_i, h y_i> and k<y_i, h y_j> integral.
  RatMatrix form = mat_mul(mat_mul(ginv, gh), ginv);
  Rational k(static_cast<long>(d.level));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = (i == j) ? Rational(k * form[i][i] / 2) : Rational(k * form[i][j]);
      v.canonicalize();
      if (!is_integer(v)) throw PreconditionError("not_integral_on_dual", "(k/2)<y, h(y)> is not integral on the dual lattice");
    }
  }
  Integer disc = abs(det_g.get_num());
  if (Integer(static_cast<long>(d.level)) % disc != 0) {
    throw PreconditionError("level_not_multiple", "k is not a multiple of |L'/L| = " + disc.get_str());
  }
  for (const auto& z : d.shift) {
    Rational kz = k * z;
    kz.canonicalize();
    if (!is_integer(kz)) throw PreconditionError("shift_not_in_lattice", "z is not in (1/k)L");
  }
}

std::pair<BigComplex, BigComplex> reciprocity_sides(const LatticeData& d, int precision_bits, DualQuotient quotient) {
  check_lattice_data(d);
  std::size_t n = static_cast<std::size_t>(d.rank);
  RatMatrix g = to_rational(d.gram);
  RatMatrix gh = mat_mul(g, d.automorphism);
  Rational k(static_cast<long>(d.level));

  std::vector<Rational> left_exps;
  std::vector<std::int64_t> box(n, d.level);
  RatVector gz = mat_vec(g, d.shift);
  for_each_box_point(box, [&](const std::vector<std::int64_t>& xi) {
    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = Rational(static_cast<long>(xi[i]));
    Rational e = dot(x, mat_vec(gh, x)) / (2 * k) + dot(x, gz);
    e.canonicalize();
    left_exps.push_back(e);
  });

  RatMatrix ginv = rat_inverse(g);
  RatMatrix hinv = rat_inverse(d.automorphism);
  RatMatrix ghinv = mat_mul(g, hinv);
  // In dual coordinates u = G y, h(L') is spanned by the columns of
  // G h G^-1 and h(L) by the columns of G h.
  RatMatrix t = quotient == DualQuotient::HOfDual ? mat_mul(mat_mul(g, d.automorphism), ginv) : mat_mul(g, d.automorphism);
  IntMatrix ti(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ti[i][j] = t[i][j].get_num();
  std::vector<Integer> diag = hermite_diagonal(ti);
  std::vector<std::int64_t> reps;
  for (const auto& v : diag) reps.push_back(to_int64(v));
  std::vector<Rational> right_exps;
  for_each_box_point(reps, [&](const std::vector<std::int64_t>& ui) {
    RatVector u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = Rational(static_cast<long>(ui[i]));
    RatVector y = mat_vec(ginv, u);
    for (std::size_t i = 0; i < n; ++i) y[i] += d.shift[i];
    Rational e = -(k / 2) * dot(y, mat_vec(ghinv, y));
    e.canonicalize();
    right_exps.push_back(e);
  });

  int wp = precision_bits + 32;
  BigComplex left = cyc_eval(sum_of_units(left_exps), wp);
  BigComplex right = cyc_eval(sum_of_units(right_exps), wp);
  Rational disc = abs(rat_det(g));
  Rational det_h = abs(rat_det(d.automorphism));
  left *= sqrt_rational(disc, wp);
  int sigma = signature(gh);
  BigComplex phase = BigComplex::unit(make_rational(sigma, 8), wp);
  BigReal scale(wp);
  // k^{n/2} / sqrt|det h|
  Rational kn = 1;
  for (std::size_t i = 0; i < n; ++i) kn *= k;
  scale = sqrt_rational(kn / det_h, wp);
  right = right * phase;
  right *= scale;

  BigComplex l(precision_bits), r(precision_bits);
  mpfr_set(l.re().raw(), left.re().raw(), MPFR_RNDN);
  mpfr_set(l.im().raw(), left.im().raw(), MPFR_RNDN);
  mpfr_set(r.re().raw(), right.re().raw(), MPFR_RNDN);
  mpfr_set(r.im().raw(), right.im().raw(), MPFR_RNDN);
  return {l, r};
}

}  // namespace hblock
