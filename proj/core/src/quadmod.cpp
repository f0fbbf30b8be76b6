#include "cstareq/quadmod.hpp"

#include <array>
#include <optional>
#include <sstream>

#include "cstareq/numth.hpp"

namespace cstareq {

namespace {

mpz_class mod_pos(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// coordinates of x in the (1, omega) basis scaled by 1/q
struct Coords {
    mpz_class s, t, q;
};

Coords coords_in_field(const AlgebraicNumber& x, const mpz_class& d) {
    if (!x.is_rational() && x.field_d() != d)
        throw PreconditionError("element lies in a different quadratic field");
    if (x.is_rational()) {
        mpq_class r = x.as_rational();
        return {r.get_num(), 0, r.get_den()};
    }
    OmegaCoords oc = omega_coords(x);
    return {oc.s, oc.t, oc.q};
}

}  // namespace

QuadModule::QuadModule(const mpz_class& d, const AlgebraicNumber& alpha,
                       const AlgebraicNumber& beta) {
    d_ = d;
    alpha_ = alpha;
    beta_ = beta;
    // orientation: positive sqrt(d)-part of conj(alpha) * beta
    AlgebraicNumber cross = alpha_.conjugate() * beta_;
    int s = sgn(cross.irr_part());
    if (s == 0) throw PreconditionError("module basis is linearly dependent over Q");
    if (s < 0) std::swap(alpha_, beta_);
    canonicalize();
}

QuadModule QuadModule::from_generators(const mpz_class& d,
                                       const std::vector<AlgebraicNumber>& gens) {
    QuadModule m;
    m.d_ = d;
    m.alpha_ = AlgebraicNumber(0);
    m.beta_ = AlgebraicNumber(0);
    {
        // canonicalize directly from the generators
        mpz_class q = 1;
        std::vector<Coords> cs;
        for (const auto& g : gens) {
            if (g == AlgebraicNumber(0)) continue;
            cs.push_back(coords_in_field(g, d));
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), q.get_mpz_t(), cs.back().q.get_mpz_t());
            q = l;
        }
        if (cs.empty()) throw PreconditionError("module needs nonzero generators");
        IntMatrix coord(2, cs.size());
        for (std::size_t j = 0; j < cs.size(); ++j) {
            mpz_class scale = q / cs[j].q;
            coord(0, j) = cs[j].t * scale;  // omega coefficient first
            coord(1, j) = cs[j].s * scale;
        }
        HnfResult h = hnf(coord);
        if (h.h.cols() < 2 || h.h(0, 0) == 0 || h.h(1, 1) == 0)
            throw PreconditionError("generators span a module of rank < 2");
        m.c_ = h.h(0, 0);
        m.b_ = h.h(1, 0);
        m.a_ = h.h(1, 1);
        m.q_ = q;
        mpz_class g = gcd(gcd(m.a_, m.b_), gcd(m.c_, m.q_));
        m.a_ /= g;
        m.b_ /= g;
        m.c_ /= g;
        m.q_ /= g;
    }
    AlgebraicNumber omega = field_omega(d);
    mpq_class invq(1, m.q_);
    m.alpha_ = AlgebraicNumber(mpq_class(m.a_) * invq);
    m.beta_ = (AlgebraicNumber(mpq_class(m.b_)) + omega * AlgebraicNumber(mpq_class(m.c_))) *
              AlgebraicNumber(invq);
    return m;
}

void QuadModule::canonicalize() {
    QuadModule m = from_generators(d_, {alpha_, beta_});
    q_ = m.q_;
    a_ = m.a_;
    b_ = m.b_;
    c_ = m.c_;
}

bool QuadModule::operator==(const QuadModule& o) const {
    return d_ == o.d_ && q_ == o.q_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
}

bool QuadModule::contains(const AlgebraicNumber& x) const {
    if (x == AlgebraicNumber(0)) return true;
    if (!x.is_rational() && x.field_d() != d_) return false;
    Coords co = coords_in_field(x, d_);
    // need q * x integral in (1, omega) coordinates
    mpz_class us = co.s * q_, ut = co.t * q_;
    if (us % co.q != 0 || ut % co.q != 0) return false;
    mpz_class u = us / co.q, v = ut / co.q;
    // solve y0 * a + y1 * b = u, y1 * c = v over Z
    if (v % c_ != 0) return false;
    mpz_class y1 = v / c_;
    return (u - y1 * b_) % a_ == 0;
}

QuadModule QuadModule::scaled(const AlgebraicNumber& f) const {
    return QuadModule(d_, alpha_ * f, beta_ * f);
}

std::string QuadModule::str() const {
    std::ostringstream os;
    if (q_ != 1) os << "(1/" << q_.get_str() << ")";
    os << "(" << a_.get_str() << ", ";
    if (b_ != 0) os << b_.get_str() << "+";
    os << c_.get_str() << "*omega)";
    return os.str();
}

BinaryForm module_to_form(const QuadModule& m) {
    AlgebraicNumber qa(mpq_class(m.q()));
    AlgebraicNumber a1 = m.alpha() * qa;  // algebraic integers
    AlgebraicNumber b1 = m.beta() * qa;
    mpq_class fa = a1.norm();
    mpq_class fc = b1.norm();
    mpq_class fb = 2 * (a1 * b1.conjugate()).rat_part();
    if (fa.get_den() != 1 || fb.get_den() != 1 || fc.get_den() != 1)
        throw PreconditionError("norm form is not integral");
    mpz_class A = fa.get_num(), B = fb.get_num(), C = fc.get_num();
    mpz_class g = gcd(gcd(A, B), C);
    return {A / g, B / g, C / g};
}

mpz_class multiplier_conductor(const QuadModule& m) {
    BinaryForm f = module_to_form(m);
    mpz_class dk = (mod_pos(m.field_d(), 4) == 1) ? m.field_d() : 4 * m.field_d();
    mpz_class ratio = f.disc() / dk;
    if (f.disc() % dk != 0 || !is_square(ratio))
        throw PreconditionError("form discriminant incompatible with the field");
    return isqrt(ratio);
}

std::string BinaryForm::str() const {
    return "(" + a.get_str() + ", " + b.get_str() + ", " + c.get_str() + ")";
}

namespace {

bool is_reduced(const BinaryForm& f, const mpz_class& s) {
    if (f.b <= 0 || f.b > s) return false;
    mpz_class tw = 2 * abs(f.a);
    return tw + f.b > s && tw - f.b <= s;
}

BinaryForm rho_step(const BinaryForm& f, const mpz_class& D, const mpz_class& s) {
    mpz_class a2 = f.c;
    if (a2 == 0) throw PreconditionError("degenerate form in reduction");
    mpz_class ta = 2 * abs(a2);
    mpz_class hi = (abs(a2) > s) ? abs(a2) : s;  // inclusive upper end of the window
    mpz_class r = mod_pos(-f.b, ta);
    mpz_class k;
    mpz_class diff = hi - r;
    mpz_fdiv_q(k.get_mpz_t(), diff.get_mpz_t(), ta.get_mpz_t());
    mpz_class b2 = r + k * ta;  // largest value <= hi congruent to -b mod ta
    return {a2, b2, (b2 * b2 - D) / (4 * a2)};
}

}  // namespace

std::vector<BinaryForm> reduction_cycle(const BinaryForm& f) {
    mpz_class D = f.disc();
    if (D <= 0) throw UnsupportedError("only indefinite forms are supported");
    if (is_square(D)) throw UnsupportedError("square discriminant not supported");
    mpz_class s = isqrt(D);
    BinaryForm g = f;
    for (int guard = 0; !is_reduced(g, s); ++guard) {
        if (guard > 100000) throw UnsupportedError("form reduction did not terminate");
        g = rho_step(g, D, s);
    }
    std::vector<BinaryForm> cycle{g};
    for (BinaryForm h = rho_step(g, D, s); !(h == g); h = rho_step(h, D, s)) {
        cycle.push_back(h);
        if (cycle.size() > 1000000) throw UnsupportedError("reduction cycle too long");
    }
    return cycle;
}

bool forms_properly_equivalent(const BinaryForm& f1, const BinaryForm& f2) {
    if (f1.disc() != f2.disc()) return false;
    BinaryForm r1 = reduction_cycle(f1).front();
    for (const BinaryForm& h : reduction_cycle(f2))
        if (h == r1) return true;
    return false;
}

QuadModule colon_dual(const QuadModule& m) {
    const mpz_class& d = m.field_d();
    const bool half = (mod_pos(d, 4) == 1);
    mpz_class e = half ? (d - 1) / 4 : d;   // omega^2 = f0*omega + e
    mpz_class f0 = half ? 1 : 0;
    // x*mu_j in Z + Z*omega is a linear condition on the coordinates of x
    auto cond = [&](const Coords& mu) -> RatMatrix {
        RatMatrix r(2, 2);
        mpq_class invq(1, m.q());
        r(0, 0) = mu.s * invq;
        r(0, 1) = mu.t * e * invq;
        r(1, 0) = mu.t * invq;
        r(1, 1) = (mu.s + mu.t * f0) * invq;
        return r;
    };
    Coords mu1{m.rat_gen(), 0, 1};
    Coords mu2{m.mix_rat(), m.mix_omega(), 1};
    RatMatrix i1 = *inverse(cond(mu1));
    RatMatrix i2 = *inverse(cond(mu2));
    // clear denominators and intersect the two preimage lattices
    mpz_class den = 1;
    for (const RatMatrix* r : {&i1, &i2}) {
        mpz_class l;
        mpz_class rd = r->denominator_lcm();
        mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), rd.get_mpz_t());
        den = l;
    }
    IntMatrix b1 = (i1 * mpq_class(den)).to_integer();
    IntMatrix b2 = (i2 * mpq_class(den)).to_integer();
    IntMatrix glue(2, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            glue(i, j) = b1(i, j);
            glue(i, j + 2) = -b2(i, j);
        }
    IntMatrix k = kernel(glue);  // 4 x 2
    AlgebraicNumber omega = field_omega(d);
    std::vector<AlgebraicNumber> gens;
    for (std::size_t j = 0; j < k.cols(); ++j) {
        mpz_class s = b1(0, 0) * k(0, j) + b1(0, 1) * k(1, j);
        mpz_class t = b1(1, 0) * k(0, j) + b1(1, 1) * k(1, j);
        AlgebraicNumber x =
            (AlgebraicNumber(mpq_class(s)) + omega * AlgebraicNumber(mpq_class(t))) *
            AlgebraicNumber(mpq_class(1, den));
        gens.push_back(x);
    }
    return QuadModule::from_generators(d, gens);
}

mpq_class module_index(const QuadModule& m) {
    mpq_class idx(m.rat_gen() * m.mix_omega(), m.q() * m.q());
    idx.canonicalize();
    return idx;
}

namespace {

struct FormStep {
    BinaryForm form;
    mpz_class t00, t10;  // first column of the transform from the base form
};

// reduction path + full cycle with the transform carrying the base form to
// each member: member(x, y) = base(T (x,y)^t)
std::vector<FormStep> cycle_with_transforms(const BinaryForm& f) {
    mpz_class D = f.disc();
    if (D <= 0) throw UnsupportedError("only indefinite forms are supported");
    if (is_square(D)) throw UnsupportedError("square discriminant not supported");
    mpz_class s = isqrt(D);
    BinaryForm g = f;
    mpz_class t00 = 1, t01 = 0, t10 = 0, t11 = 1;
    auto advance = [&]() {
        BinaryForm h = rho_step(g, D, s);
        // rho is (x,y) -> (-y, x + t*y) with t = (b' + b) / (2c)
        mpz_class t = (h.b + g.b) / (2 * g.c);
        mpz_class n00 = t01, n10 = t11;
        mpz_class n01 = -t00 + t * t01, n11 = -t10 + t * t11;
        t00 = n00;
        t01 = n01;
        t10 = n10;
        t11 = n11;
        g = h;
    };
    for (int guard = 0; !is_reduced(g, s); ++guard) {
        if (guard > 100000) throw UnsupportedError("form reduction did not terminate");
        advance();
    }
    std::vector<FormStep> out{{g, t00, t10}};
    BinaryForm start = g;
    advance();
    while (!(g == start)) {
        out.push_back({g, t00, t10});
        if (out.size() > 1000000) throw UnsupportedError("reduction cycle too long");
        advance();
    }
    return out;
}

}  // namespace

QuadModule canonical_class_rep(const QuadModule& m) {
    QuadModule dual = colon_dual(m);
    BinaryForm f = module_to_form(dual);
    auto cyc = cycle_with_transforms(f);
    mpz_class best = abs(cyc.front().form.a);
    for (const auto& st : cyc) best = std::min(best, mpz_class(abs(st.form.a)));
    std::optional<QuadModule> pick;
    auto key = [](const QuadModule& j) {
        return std::array<mpz_class, 4>{j.q(), j.rat_gen(), j.mix_rat(), j.mix_omega()};
    };
    for (const auto& st : cyc) {
        if (abs(st.form.a) != best) continue;
        AlgebraicNumber mult = dual.alpha() * AlgebraicNumber(mpq_class(st.t00)) +
                               dual.beta() * AlgebraicNumber(mpq_class(st.t10));
        QuadModule j = m.scaled(mult);
        if (!pick || key(j) < key(*pick)) pick = j;
    }
    return *pick;
}

ModuleEquivalence modules_equivalent(const QuadModule& ma, const QuadModule& mb,
                                     const AlgebraicNumber& lambda) {
    if (ma.field_d() != mb.field_d())
        return {ModuleVerdict::Unsupported, "modules lie in different fields"};
    for (const QuadModule* m : {&ma, &mb})
        if (!m->contains(m->alpha() * lambda) || !m->contains(m->beta() * lambda))
            throw PreconditionError("module is not closed under multiplication by lambda");
    mpz_class fa = multiplier_conductor(ma);
    mpz_class fb = multiplier_conductor(mb);
    if (fa != fb)
        return {ModuleVerdict::NotEquivalent,
                "multiplier rings differ: conductors " + fa.get_str() + " vs " + fb.get_str()};
    BinaryForm qa = module_to_form(ma);
    BinaryForm qb = module_to_form(mb);
    if (forms_properly_equivalent(qa, qb))
        return {ModuleVerdict::Equivalent, "norm-positive multiplier, conductor " + fa.get_str()};
    // scaling by a negative-norm multiplier swaps the oriented basis, which
    // carries (A, B, C) to the proper class of (-A, B, -C)
    if (forms_properly_equivalent(BinaryForm{-qa.a, qa.b, -qa.c}, qb))
        return {ModuleVerdict::Equivalent, "norm-negative multiplier, conductor " + fa.get_str()};
    return {ModuleVerdict::NotEquivalent,
            "form classes differ for both multiplier signs: " + qa.str() + " vs " + qb.str()};
}

}  // namespace cstareq
