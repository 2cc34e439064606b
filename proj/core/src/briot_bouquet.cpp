#include "crsing/briot_bouquet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <boost/numeric/odeint.hpp>

#include "crsing/errors.hpp"

namespace crs {

namespace {

// Scalar series in t and L = ln t: (k, r) -> coefficient of t^k L^r.
using LogPoly = std::map<std::pair<int, int>, GaussRational>;

LogPoly mul(const LogPoly& a, const LogPoly& b, int max_k) {
  LogPoly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      const int k = ka.first + kb.first;
      if (k > max_k) continue;
      out[{k, ka.second + kb.second}] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

// f_j(t, Y) through t^max_k, Y given componentwise.
std::vector<LogPoly> evaluate(const BBSystem& sys, const std::vector<LogPoly>& y, int max_k) {
  const int n = sys.dim();
  std::vector<std::vector<LogPoly>> powers(static_cast<std::size_t>(n));
  auto power = [&](int i, int p) -> const LogPoly& {
    auto& cache = powers[static_cast<std::size_t>(i)];
    if (cache.empty()) cache.push_back(LogPoly{{{0, 0}, GaussRational(1)}});
    while (static_cast<int>(cache.size()) <= p) cache.push_back(mul(cache.back(), y[static_cast<std::size_t>(i)], max_k));
    return cache[static_cast<std::size_t>(p)];
  };
  std::vector<LogPoly> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    LogPoly& acc = out[static_cast<std::size_t>(j)];
    for (const auto& [e, c] : sys.f()[static_cast<std::size_t>(j)].terms()) {
      if (e[0] > max_k) continue;
      LogPoly term{{{e[0], 0}, c}};
      for (int i = 0; i < n && !term.empty(); ++i)
        if (e[static_cast<std::size_t>(i + 1)] > 0) term = mul(term, power(i, e[static_cast<std::size_t>(i + 1)]), max_k);
      for (const auto& [kr, v] : term) acc[kr] += v;
    }
    std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });
  }
  return out;
}

std::vector<LogPoly> as_components(const FormalLogSolution& sol, int n, int below_k) {
  std::vector<LogPoly> y(static_cast<std::size_t>(n));
  for (const auto& [kr, v] : sol.coeffs) {
    if (kr.first >= below_k) continue;
    for (int i = 0; i < n; ++i)
      if (!v[static_cast<std::size_t>(i)].is_zero()) y[static_cast<std::size_t>(i)][kr] = v[static_cast<std::size_t>(i)];
  }
  return y;
}

// Rational polynomials, lowest degree first, no trailing zeros.
using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

// Quotient and remainder of a / b, b nonzero.
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
  trim(a);
  QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const mpq_class f = a.back() / b.back();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    trim(a);
  }
  trim(q);
  return {q, a};
}

QPoly monic(QPoly p) {
  trim(p);
  if (p.empty()) return p;
  const mpq_class lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

QPoly gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

// Sign changes of the Sturm sequence at -infinity and at zero.
int sign_changes(const std::vector<QPoly>& seq, bool at_minus_infinity) {
  int changes = 0;
  int last = 0;
  for (const auto& p : seq) {
    int s = 0;
    if (p.empty()) continue;
    if (at_minus_infinity) {
      s = sgn(p.back()) * ((p.size() - 1) % 2 == 0 ? 1 : -1);
    } else {
      s = sgn(p.front());
    }
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Distinct roots of a square-free polynomial in (-inf, 0].
int nonpositive_roots(QPoly g) {
  trim(g);
  if (g.size() <= 1) return 0;
  int count = 0;
  if (g.front() == 0) {
    ++count;
    g.erase(g.begin());
  }
  if (g.size() <= 1) return count;
  std::vector<QPoly> seq{g, derivative(g)};
  while (!seq.back().empty()) {
    QPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    seq.push_back(std::move(r));
  }
  return count + sign_changes(seq, true) - sign_changes(seq, false);
}

// Real roots in (-inf, 0] counted with multiplicity, by Yun's square-free
// decomposition.
int nonpositive_roots_with_multiplicity(const QPoly& f) {
  QPoly a = monic(f);
  if (a.size() <= 1) return 0;
  QPoly b = derivative(a);
  QPoly c = gcd(a, b);
  QPoly w = divmod(a, c).first;
  QPoly y = divmod(b, c).first;
  int total = 0;
  for (int i = 1; w.size() > 1; ++i) {
    QPoly z = y;
    const QPoly dw = derivative(w);
    z.resize(std::max(z.size(), dw.size()));
    for (std::size_t j = 0; j < dw.size(); ++j) z[j] -= dw[j];
    trim(z);
    const QPoly g = gcd(w, z);
    total += i * nonpositive_roots(g);
    w = divmod(w, g).first;
    y = divmod(z, g).first;
  }
  return total;
}

int real_roots_with_multiplicity(const QPoly& f) {
  QPoly a = monic(f);
  if (a.size() <= 1) return 0;
  // Positive roots of a(x) are nonpositive roots of a(-x), minus a root at 0.
  QPoly reflected = a;
  for (std::size_t i = 1; i < reflected.size(); i += 2) reflected[i] = -reflected[i];
  int zero_mult = 0;
  while (zero_mult < static_cast<int>(a.size()) && a[static_cast<std::size_t>(zero_mult)] == 0) ++zero_mult;
  return nonpositive_roots_with_multiplicity(a) + nonpositive_roots_with_multiplicity(reflected) - zero_mult;
}

std::complex<double> to_complex_d(const GaussRational& g) { return {g.re().get_d(), g.im().get_d()}; }

}  // namespace

BBSystem::BBSystem(std::vector<Series> f, int order) : f_(std::move(f)), order_(order) {
  if (f_.empty()) throw ShapeError("a Briot-Bouquet system needs at least one equation");
  const SpacePtr expected = VarSpace::briot_bouquet(static_cast<int>(f_.size()));
  for (std::size_t j = 0; j < f_.size(); ++j) {
    if (!(*f_[j].space() == *expected))
      throw ShapeError("f" + std::to_string(j + 1) + " must be a series in t, y1..y" + std::to_string(f_.size()));
    if (!f_[j].constant_term().is_zero())
      throw ValidationError("f" + std::to_string(j + 1) + " has a nonzero constant term; the system must have f(0,0) = 0");
  }
  if (order_ < 1) throw ValidationError("solve order must be at least 1");
}

LinearPart linear_part(const BBSystem& sys) {
  const std::size_t n = static_cast<std::size_t>(sys.dim());
  LinearPart lp{Vector(n), Matrix(n, n), {}};
  const std::size_t vars = n + 1;
  for (std::size_t j = 0; j < n; ++j) {
    Exponent e(vars, 0);
    e[0] = 1;
    lp.p[j] = sys.f()[j].coefficient(e);
    for (std::size_t i = 0; i < n; ++i) {
      Exponent ey(vars, 0);
      ey[i + 1] = 1;
      lp.a(j, i) = sys.f()[j].coefficient(ey);
    }
  }
  lp.char_poly = characteristic_polynomial(lp.a);
  return lp;
}

std::vector<Resonance> resonances(const LinearPart& lp, int max_k) {
  std::vector<Resonance> out;
  const std::size_t n = lp.a.rows();
  for (int k = 1; k <= max_k; ++k) {
    if (!evaluate_polynomial(lp.char_poly, GaussRational(k)).is_zero()) continue;
    Matrix m = lp.a;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? GaussRational(k) : GaussRational()) - lp.a(i, j);
    out.push_back({k, static_cast<int>(n - rank(m))});
  }
  return out;
}

bool FormalLogSolution::has_logs() const {
  return std::any_of(coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.first.second > 0; });
}

Vector FormalLogSolution::coefficient(int k, int r) const {
  auto it = coeffs.find({k, r});
  if (it != coeffs.end()) return it->second;
  const std::size_t n = coeffs.empty() ? 0 : coeffs.begin()->second.size();
  return Vector(n);
}

FormalLogSolution formal_solve(const BBSystem& sys) {
  const int n = sys.dim();
  const std::size_t un = static_cast<std::size_t>(n);
  const int order = sys.order();
  for (const auto& f : sys.f())
    if (f.trunc() < order)
      throw TruncationError("solve order " + std::to_string(order) + " exceeds the truncation order " +
                            std::to_string(f.trunc()) + " of f");

  const LinearPart lp = linear_part(sys);
  FormalLogSolution sol;
  sol.order = order;
  sol.resonances = resonances(lp, order);

  for (int k = 1; k <= order; ++k) {
    const std::vector<LogPoly> fy = evaluate(sys, as_components(sol, n, k), k);
    int deg_b = -1;
    for (const auto& comp : fy)
      for (const auto& [kr, v] : comp)
        if (kr.first == k) deg_b = std::max(deg_b, kr.second);
    const bool resonant = std::any_of(sol.resonances.begin(), sol.resonances.end(),
                                      [&](const Resonance& r) { return r.k == k; });
    if (deg_b < 0 && !resonant) continue;  // c_k = 0
    const int rmax = std::max(deg_b, 0) + (resonant ? n : 0);
    const std::size_t levels = static_cast<std::size_t>(rmax) + 1;

    // Unknowns c_{k,r}[i] at column r*n + i; equation rows likewise.
    Matrix m(levels * un, levels * un);
    Vector rhs(levels * un);
    for (std::size_t r = 0; r < levels; ++r) {
      for (std::size_t i = 0; i < un; ++i) {
        const std::size_t row = r * un + i;
        for (std::size_t j = 0; j < un; ++j)
          m(row, r * un + j) = (i == j ? GaussRational(k) : GaussRational()) - lp.a(i, j);
        if (r + 1 < levels) m(row, (r + 1) * un + i) = GaussRational(static_cast<long>(r + 1));
        auto it = fy[i].find({k, static_cast<int>(r)});
        if (it != fy[i].end()) rhs[row] = it->second;
      }
    }
    const std::optional<Vector> x = solve(m, rhs);
    if (!x) throw ArithmeticError("log-graded system at t^" + std::to_string(k) + " is inconsistent");
    sol.family_dim += static_cast<int>(levels * un - rank(m));
    for (std::size_t r = 0; r < levels; ++r) {
      Vector v(x->begin() + static_cast<std::ptrdiff_t>(r * un), x->begin() + static_cast<std::ptrdiff_t>((r + 1) * un));
      if (std::any_of(v.begin(), v.end(), [](const GaussRational& g) { return !g.is_zero(); }))
        sol.coeffs[{k, static_cast<int>(r)}] = std::move(v);
    }
  }
  const auto res = residual(sys, sol);
  sol.residual_zero = res.empty();
  return sol;
}

std::map<std::pair<int, int>, Vector> residual(const BBSystem& sys, const FormalLogSolution& sol) {
  const int n = sys.dim();
  const std::size_t un = static_cast<std::size_t>(n);
  const int order = sol.order;
  const std::vector<LogPoly> fy = evaluate(sys, as_components(sol, n, order + 1), order);
  std::map<std::pair<int, int>, Vector> out;
  auto at = [&](const std::pair<int, int>& kr) -> Vector& {
    auto it = out.find(kr);
    if (it == out.end()) it = out.emplace(kr, Vector(un)).first;
    return it->second;
  };
  // t d/dt (t^k L^r) = k t^k L^r + r t^k L^{r-1}.
  for (const auto& [kr, v] : sol.coeffs) {
    if (kr.first > order) continue;
    for (std::size_t i = 0; i < un; ++i) {
      at(kr)[i] += GaussRational(kr.first) * v[i];
      if (kr.second > 0) at({kr.first, kr.second - 1})[i] += GaussRational(kr.second) * v[i];
    }
  }
  for (std::size_t i = 0; i < un; ++i)
    for (const auto& [kr, c] : fy[i]) at(kr)[i] -= c;
  std::erase_if(out, [](const auto& kv) {
    return std::all_of(kv.second.begin(), kv.second.end(), [](const GaussRational& g) { return g.is_zero(); });
  });
  return out;
}

DulacReport dulac_classify(const LinearPart& lp) {
  const int n = static_cast<int>(lp.a.rows());
  QPoly re, im;
  for (const auto& c : lp.char_poly) {
    re.push_back(c.re());
    im.push_back(c.im());
  }
  trim(re);
  trim(im);
  const QPoly real_factor = im.empty() ? re : gcd(re, im);
  DulacReport out;
  out.nonpositive_real = nonpositive_roots_with_multiplicity(real_factor);
  const int real = real_roots_with_multiplicity(real_factor);
  out.positive_real = real - out.nonpositive_real;
  out.nonreal = n - real;
  out.p = n - out.nonpositive_real;
  return out;
}

OracleResult numeric_oracle(const BBSystem& sys, const FormalLogSolution& sol, double t0, double t_end, int steps) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<std::complex<double>>;
  if (sol.has_logs()) throw ValidationError("numeric oracle needs a solution without log terms");
  if (t0 == 0.0) throw ValidationError("integration cannot start at the singular point t = 0");
  if (steps < 1) throw ValidationError("step count must be positive");
  const std::size_t n = static_cast<std::size_t>(sys.dim());

  // Floating-point copies of f and of the series coefficients.
  struct Term {
    std::vector<int> exp;
    std::complex<double> coef;
  };
  std::vector<std::vector<Term>> f(n);
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [e, c] : sys.f()[j].terms()) f[j].push_back({std::vector<int>(e.begin(), e.end()), to_complex_d(c)});
  std::vector<std::pair<int, std::vector<std::complex<double>>>> series;
  for (const auto& [kr, v] : sol.coeffs) {
    std::vector<std::complex<double>> cv;
    for (const auto& g : v) cv.push_back(to_complex_d(g));
    series.emplace_back(kr.first, std::move(cv));
  }
  auto series_at = [&](double t) {
    State y(n, 0.0);
    for (const auto& [k, v] : series)
      for (std::size_t i = 0; i < n; ++i) y[i] += v[i] * std::pow(t, k);
    return y;
  };
  auto rhs = [&](const State& y, State& dy, double t) {
    for (std::size_t j = 0; j < n; ++j) {
      std::complex<double> acc = 0.0;
      for (const auto& term : f[j]) {
        std::complex<double> v = term.coef * std::pow(t, term.exp[0]);
        for (std::size_t i = 0; i < n; ++i)
          if (term.exp[i + 1] > 0) v *= std::pow(y[i], term.exp[i + 1]);
        acc += v;
      }
      dy[j] = acc / t;
    }
  };

  OracleResult out;
  const double start = std::abs(t0);
  const double end = std::abs(t_end);
  if (end <= start) throw ValidationError("t_end must lie beyond t0");
  out.t_min = -end;
  out.t_max = end;
  for (const double sign : {1.0, -1.0}) {
    State y = series_at(sign * start);
    odeint::runge_kutta4<State> stepper;
    const double dt = sign * (end - start) / steps;
    double t = sign * start;
    for (int step = 0; step < steps; ++step) {
      stepper.do_step(rhs, y, t, dt);
      t = sign * start + (step + 1) * dt;
      const State expected = series_at(t);
      for (std::size_t i = 0; i < n; ++i) out.max_deviation = std::max(out.max_deviation, std::abs(y[i] - expected[i]));
    }
  }
  return out;
}

}  // namespace crs
