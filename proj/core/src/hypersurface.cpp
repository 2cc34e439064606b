#include "crsing/hypersurface.hpp"

#include <algorithm>
#include <map>

#include "crsing/errors.hpp"
#include "crsing/linalg.hpp"

namespace crs {

namespace {

// All exponent vectors over `vars` variables with total degree exactly d.
void monomials_of_degree(std::size_t vars, int d, std::vector<std::vector<int>>& out) {
  std::vector<int> e(vars, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == vars) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  if (vars == 0) return;
  rec(rec, 0, d);
}

long factorial(int k) {
  long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Hypersurface::Hypersurface(Series phi) : phi_(std::move(phi)) {
  if (phi_.space()->cr_dim() == 0) throw ShapeError("defining series must live in a CR coordinate space");
  if (phi_.is_exact()) throw ValidationError("defining series needs a finite truncation order");
}

ValidationResult validate(const Hypersurface& h) {
  ValidationResult out;
  const VarSpace& sp = *h.space();
  const int n = h.n();
  for (const auto& [e, c] : h.phi().terms()) {
    int zdeg = 0, cdeg = 0;
    for (int a = 0; a < n; ++a) {
      zdeg += e[sp.z(a)];
      cdeg += e[sp.c(a)];
    }
    if (zdeg == 0 || cdeg == 0) {
      out.normal = false;
      out.violations.push_back({Violation::Kind::NotNormal, Series::monomial(h.space(), kExact, e, c).to_string(),
                                zdeg == 0 ? "term survives at z = 0" : "term survives at c = 0"});
    }
  }
  const Series conj = conjugate(h.phi());
  for (const auto& [e, c] : h.phi().terms()) {
    const GaussRational mirrored = conj.coefficient(e);
    if (mirrored != c) {
      out.real = false;
      Exponent swapped(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) swapped[sp.conjugate_index(i)] = e[i];
      out.violations.push_back(
          {Violation::Kind::NotReal, Series::monomial(h.space(), kExact, e, c).to_string(),
           "coefficient " + c.to_string() + " is not the conjugate of the mirrored coefficient " +
               h.phi().coefficient(swapped).to_string()});
    }
  }
  return out;
}

void require_valid(const Hypersurface& h) {
  const ValidationResult v = validate(h);
  if (v.ok()) return;
  const Violation& first = v.violations.front();
  throw ValidationError(std::string(first.kind == Violation::Kind::NotNormal ? "normality" : "reality") +
                        " violation at monomial " + first.monomial + ": " + first.detail);
}

InfiniteType compute_infinite_type(const Hypersurface& h) {
  InfiniteType out;
  const Series& phi = h.phi();
  if (phi.is_zero()) return out;
  const std::size_t s = h.space()->s();
  const int m = phi.min_exponent(s);
  out.m = m;
  out.phi_m = coefficient_of_power(phi, s, m);
  out.r = out.phi_m->valuation();
  out.psi = divide_by_s_power(phi, m);
  return out;
}

std::string to_string(Essentiality::Verdict v) {
  switch (v) {
    case Essentiality::Verdict::CertifiedEssential:
      return "certified-essential";
    case Essentiality::Verdict::NotEssentialUpTo:
      return "not-essential-up-to";
    case Essentiality::Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Essentiality essentiality_check(const Hypersurface& h, int degree_bound) {
  const InfiniteType type = compute_infinite_type(h);
  if (type.levi_flat()) throw ValidationError("essentiality is undefined for a Levi-flat hypersurface");
  const VarSpace& sp = *h.space();
  const int n = h.n();
  const int psi_trunc = type.psi->trunc();

  // a_alpha(z): coefficient of c^alpha in psi(z, c, 0), keyed by alpha,
  // with the z-degree through which it is known.
  struct Generator {
    std::map<std::vector<int>, GaussRational> terms;  // z-exponent -> coefficient
    int known_degree = 0;
  };
  std::map<std::vector<int>, Generator> gens;
  for (const auto& [e, c] : type.psi->terms()) {
    if (e[sp.s()] != 0) continue;
    std::vector<int> alpha(n), zexp(n);
    int alpha_deg = 0;
    for (int a = 0; a < n; ++a) {
      alpha[a] = e[sp.c(a)];
      zexp[a] = e[sp.z(a)];
      alpha_deg += alpha[a];
    }
    Generator& g = gens[alpha];
    g.known_degree = psi_trunc - alpha_deg;
    g.terms[zexp] += c;
  }

  Essentiality out;
  out.generator_count = static_cast<int>(gens.size());
  const int bound = std::max(1, degree_bound);

  for (int d = 1; d <= bound; ++d) {
    // Basis of C[z]/m^{d+1}: monomials of degree 1..d (all generators vanish at 0).
    std::vector<std::vector<int>> basis;
    for (int k = 1; k <= d; ++k) monomials_of_degree(static_cast<std::size_t>(n), k, basis);
    std::map<std::vector<int>, std::size_t> column;
    for (std::size_t i = 0; i < basis.size(); ++i) column[basis[i]] = i;

    std::vector<Vector> rows;
    for (const auto& [alpha, g] : gens) {
      for (int k = 0; k < d; ++k) {
        if (k + g.known_degree < d) continue;  // product not fully known mod m^{d+1}
        std::vector<std::vector<int>> shifts;
        monomials_of_degree(static_cast<std::size_t>(n), k, shifts);
        for (const auto& delta : shifts) {
          Vector row(basis.size());
          bool nonzero = false;
          for (const auto& [zexp, c] : g.terms) {
            std::vector<int> prod(n);
            int deg = 0;
            for (int a = 0; a < n; ++a) {
              prod[a] = zexp[a] + delta[a];
              deg += prod[a];
            }
            if (deg > d || c.is_zero()) continue;
            row[column.at(prod)] += c;
            nonzero = true;
          }
          if (nonzero) rows.push_back(std::move(row));
        }
      }
    }
    const std::size_t base_rank = rows.empty() ? 0 : rank(Matrix::from_rows(rows, basis.size()));
    std::vector<std::vector<int>> top;
    monomials_of_degree(static_cast<std::size_t>(n), d, top);
    for (const auto& g : top) {
      Vector row(basis.size());
      row[column.at(g)] = GaussRational(1);
      rows.push_back(std::move(row));
    }
    if (rank(Matrix::from_rows(rows, basis.size())) == base_rank) {
      out.verdict = Essentiality::Verdict::CertifiedEssential;
      out.degree = d;
      return out;
    }
  }

  out.degree = bound;
  for (int axis = 0; axis < n; ++axis) {
    bool hit = false;
    for (const auto& [alpha, g] : gens) {
      for (const auto& [zexp, c] : g.terms) {
        int pure = zexp[axis];
        bool on_axis = true;
        for (int a = 0; a < n; ++a) {
          if (a != axis && zexp[a] != 0) on_axis = false;
        }
        if (on_axis && pure <= bound && !c.is_zero()) hit = true;
      }
    }
    if (!hit) {
      out.verdict = Essentiality::Verdict::NotEssentialUpTo;
      out.obstruction_axis = axis;
      return out;
    }
  }
  out.verdict = Essentiality::Verdict::Inconclusive;
  return out;
}

int max_supported_ell(const Hypersurface& h) {
  const InfiniteType type = compute_infinite_type(h);
  if (type.levi_flat()) return h.trunc() - 1;
  return h.trunc() - *type.m - 1;
}

Nondegeneracy nondegeneracy_ell(const Hypersurface& h, int ell_max) {
  const InfiniteType type = compute_infinite_type(h);
  if (type.levi_flat()) throw ValidationError("nondegeneracy is undefined for a Levi-flat hypersurface");
  if (ell_max > max_supported_ell(h)) {
    throw TruncationError("ell_max = " + std::to_string(ell_max) + " needs truncation order at least " +
                          std::to_string(ell_max + *type.m + 1) + " (have " + std::to_string(h.trunc()) + ")");
  }
  const VarSpace& sp = *h.space();
  const int n = h.n();
  const Series& psi = *type.psi;

  Nondegeneracy out;
  out.ell_max = ell_max;
  std::vector<Vector> rows;
  out.span_ranks.push_back(0);  // d(psi)/dz vanishes at the origin for normal psi
  for (int k = 1; k <= ell_max; ++k) {
    std::vector<std::vector<int>> alphas;
    monomials_of_degree(static_cast<std::size_t>(n), k, alphas);
    for (const auto& alpha : alphas) {
      long alpha_fact = 1;
      for (int a = 0; a < n; ++a) alpha_fact *= factorial(alpha[a]);
      Vector row(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        Exponent e(sp.size(), 0);
        e[sp.z(j)] = 1;
        for (int a = 0; a < n; ++a) e[sp.c(a)] = static_cast<std::uint16_t>(alpha[a]);
        row[j] = psi.coefficient(e) * GaussRational(alpha_fact);
      }
      rows.push_back(std::move(row));
    }
    const int rk = static_cast<int>(rank(Matrix::from_rows(rows, static_cast<std::size_t>(n))));
    out.span_ranks.push_back(rk);
    if (rk == n) {
      out.ell = k;
      return out;
    }
  }
  return out;
}

}  // namespace crs
