#include "cstareq/invariants.hpp"

#include <algorithm>

#include "cstareq/numth.hpp"

namespace cstareq {

namespace {

mpz_class mod_pos(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

}  // namespace

std::set<mpz_class> prim_set(const mpz_class& n) {
    if (n == 0) throw PreconditionError("prim_set requires a nonzero integer");
    std::set<mpz_class> out;
    for (const auto& [p, e] : factorize(n)) out.insert(p);
    return out;
}

std::map<mpz_class, unsigned> ulm_numbers(const IntMatrix& a) {
    MonicPoly cp = char_poly(a);
    const std::size_t n = a.rows();
    const mpz_class& dz = cp[n];  // +- det
    if (dz == 0) throw PreconditionError("ulm_numbers requires det != 0");
    std::map<mpz_class, unsigned> out;
    for (const mpz_class& p : prim_set(dz)) {
        std::size_t jmax = 0;  // c_0 = 1 is never divisible
        for (std::size_t j = 1; j <= n; ++j)
            if (cp[j] % p != 0) jmax = j;
        out[p] = static_cast<unsigned>(n - jmax);
    }
    return out;
}

std::vector<mpz_class> torsion_quotient_oracle(const IntMatrix& a, unsigned k) {
    if (k < 1) throw PreconditionError("exponent must be >= 1");
    if (det(a) == 0) throw PreconditionError("torsion quotient requires det != 0");
    SnfResult s = snf(a.pow(k));
    std::vector<mpz_class> out;
    for (std::size_t i = 0; i < s.s.rows(); ++i) out.push_back(s.s(i, i));
    return out;
}

std::string TraceModule::str() const {
    if (quadratic) return module->str();
    return "Z[1/" + lambda_den.get_str() + "]";
}

TraceModule trace_range_module(const IntMatrix& a) {
    PerronData pd = perron_data(a);
    TraceModule tm;
    if (pd.d == 0) {
        mpq_class l = pd.lambda.as_rational();
        if (l.get_den() != 1)
            throw PreconditionError("rational dominant eigenvalue must be an integer");
        tm.quadratic = false;
        tm.lambda_den = l.get_num();
        return tm;
    }
    tm.quadratic = true;
    std::vector<AlgebraicNumber> gens;
    for (const AlgebraicNumber& vi : pd.v) {
        gens.push_back(vi);
        gens.push_back(vi * pd.lambda);
    }
    // normalize away the choice of eigenvector representative: the module is
    // only well defined up to a field multiplier, so return the distinguished
    // member of its multiplier class
    tm.module = canonical_class_rep(QuadModule::from_generators(pd.d, gens));
    return tm;
}

PadicMatrix extension_matrix(const IntMatrix& a, const mpz_class& p, unsigned m) {
    // ker E = im(I - E) is a free direct summand; columns of I - E that stay
    // independent mod p lift to a basis of it
    PadicMatrix e = matrix_idempotent(a, p, m);
    const std::size_t n = a.rows();
    PadicMatrix complement = reduce_mod(IntMatrix::identity(n) - e.a, p, m);
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> leads;
    std::vector<std::vector<mpz_class>> elim;  // reduced mod-p echelon of chosen columns
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<mpz_class> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = mod_pos(complement.a(i, j), p);
        for (std::size_t k = 0; k < elim.size(); ++k)
            if (col[leads[k]] != 0) {
                mpz_class f = col[leads[k]];  // elim rows have unit leading 1
                for (std::size_t i = 0; i < n; ++i)
                    col[i] = mod_pos(col[i] - f * elim[k][i], p);
            }
        std::size_t lead = 0;
        while (lead < n && col[lead] == 0) ++lead;
        if (lead == n) continue;
        mpz_class inv = inv_mod(col[lead], p);
        for (std::size_t i = 0; i < n; ++i) col[i] = mod_pos(col[i] * inv, p);
        // keep the stored rows reduced at the new lead position
        for (std::size_t k = 0; k < elim.size(); ++k)
            if (elim[k][lead] != 0) {
                mpz_class f = elim[k][lead];
                for (std::size_t i = 0; i < n; ++i)
                    elim[k][i] = mod_pos(elim[k][i] - f * col[i], p);
            }
        chosen.push_back(j);
        leads.push_back(lead);
        elim.push_back(col);
    }
    IntMatrix basis(n, chosen.size());
    for (std::size_t k = 0; k < chosen.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) basis(i, k) = complement.a(i, chosen[k]);
    return PadicMatrix{p, m, basis};
}

std::vector<LambdaIdeal> lambda_prime_ideals(const PerronData& pd) {
    std::vector<LambdaIdeal> out;
    if (pd.d == 0) {
        mpz_class l = abs(pd.lambda.as_rational().get_num());
        if (l == 1) return out;
        for (const auto& [p, e] : factorize(l)) out.push_back({p, 'q', 0, e});
        return out;
    }
    const mpz_class& d = pd.d;
    mpz_class nm = abs(pd.min_poly.at(2));  // |Nm(lambda)| for the monic quadratic
    if (nm == 1) return out;
    OmegaCoords oc = omega_coords(pd.lambda);
    if (oc.q != 1) throw PreconditionError("dominant eigenvalue is not an algebraic integer");
    const bool half = (mod_pos(d, 4) == 1);  // omega = (1+sqrt(d))/2
    for (const auto& [p, vp] : factorize(nm)) {
        if (p == 2 ? !half : d % p == 0) {
            out.push_back({p, 'r', 0, vp});
            continue;
        }
        int leg;
        if (p == 2) {
            leg = (mod_pos(d, 8) == 1) ? 1 : -1;
        } else {
            leg = mpz_legendre(d.get_mpz_t(), p.get_mpz_t());
        }
        if (leg == -1) {
            if (vp % 2 != 0)
                throw PreconditionError("odd valuation of a norm at an inert prime");
            out.push_back({p, 'i', 0, vp / 2});
            continue;
        }
        // split: lift the root of omega's minimal polynomial to precision vp+1
        unsigned prec = vp + 1;
        mpz_class pk = pow_z(p, prec);
        mpz_class r1, r2;
        if (p == 2) {
            // omega = (1+sqrt(d))/2 is a root of x^2 - x - (d-1)/4; Newton
            // lifting works at 2 because f'(x) = 2x - 1 is odd
            mpz_class cterm = (d - 1) / 4;
            mpz_class x = mod_pos(cterm, 2);  // root mod 2: 0 if cterm even
            for (unsigned i = 1; i < prec; ++i) {
                mpz_class fx = x * x - x - cterm;
                mpz_class fpx = 2 * x - 1;
                x = mod_pos(x - fx * inv_mod(mod_pos(fpx, pk), pk), pk);
            }
            r1 = x;
        } else {
            mpz_class sd = hensel_sqrt(d, p, prec)->value;
            r1 = half ? mod_pos((1 + sd) * inv_mod(mpz_class(2), pk), pk) : sd;
        }
        r2 = half ? mod_pos(1 - r1, pk) : mod_pos(-r1, pk);
        auto valuation_at = [&](const mpz_class& r) -> unsigned {
            mpz_class res = mod_pos(oc.s + oc.t * r, pk);
            if (res == 0) throw PreconditionError("insufficient precision in ideal split");
            return valuation(res, p);
        };
        unsigned v1 = valuation_at(r1);
        unsigned v2 = valuation_at(r2);
        if (v1 + v2 != vp) throw PreconditionError("split valuations do not add up");
        if (v1 > 0) out.push_back({p, 's', mod_pos(r1, p), v1});
        if (v2 > 0) out.push_back({p, 's', mod_pos(r2, p), v2});
    }
    std::sort(out.begin(), out.end());
    return out;
}

InvariantReport analyze(const IntMatrix& a, unsigned precision) {
    mpz_class dz = det(a);
    if (dz == 0)
        throw PreconditionError("analyze requires a nonsingular matrix; reduce first");
    InvariantReport rep;
    rep.prim_det = prim_set(dz);
    rep.ulm = ulm_numbers(a);
    PerronData pd = perron_data(a);
    rep.field_tag = (pd.d == 0) ? "Q" : "Q(sqrt(" + pd.d.get_str() + "))";
    rep.lambda_primes = lambda_prime_ideals(pd);
    rep.trace_module = trace_range_module(a);
    rep.inner_product = inner_product_invariant(a);
    for (const mpz_class& p : rep.prim_det) {
        unsigned m = precision ? precision : default_precision(a, p);
        rep.extension_columns.emplace(p, extension_matrix(a, p, m));
    }
    return rep;
}

}  // namespace cstareq
