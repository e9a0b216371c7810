#include "supersplit/grassmann.hpp"

#include <algorithm>
#include <bit>

namespace supersplit {

int popcount(OddMask m) { return std::popcount(m); }

int ChartSignature::odd_index(const std::string& name) const {
    auto it = std::find(odd_names.begin(), odd_names.end(), name);
    return it == odd_names.end() ? -1 : static_cast<int>(it - odd_names.begin());
}

SignaturePtr make_signature(std::vector<std::string> even_names, std::vector<std::string> odd_names,
                            std::uint32_t base_invertible) {
    auto sig = std::make_shared<ChartSignature>();
    sig->even_ctx = make_context(even_names);
    sig->even_names = std::move(even_names);
    sig->odd_names = std::move(odd_names);
    sig->base_invertible = base_invertible;
    return sig;
}

bool same_signature(const SignaturePtr& a, const SignaturePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->even_names == b->even_names && a->odd_names == b->odd_names;
}

namespace {

// Sign of merging two ascending odd monomials; 0 when they collide.
int merge_sign(OddMask a, OddMask b) {
    if (a & b) return 0;
    // Count inversions: pairs (i in a, j in b) with j < i.
    int sign = 1;
    for (OddMask bb = b; bb; bb &= bb - 1) {
        int j = std::countr_zero(bb);
        OddMask higher = a & ~((1u << (j + 1)) - 1u);
        if (popcount(higher) & 1) sign = -sign;
    }
    return sign;
}

} // namespace

SuperElement SuperElement::zero(SignaturePtr sig) { return SuperElement(std::move(sig)); }

SuperElement SuperElement::constant(SignaturePtr sig, const Rational& c) {
    SuperElement e(sig);
    LaurentPoly p = LaurentPoly::constant(sig->even_ctx, c, sig->base_invertible);
    if (!p.is_zero()) e.terms_.emplace(0u, std::move(p));
    return e;
}

SuperElement SuperElement::coordinate(SignaturePtr sig, const std::string& name,
                                      std::uint32_t inv_mask) {
    SuperElement e(sig);
    int ei = sig->even_index(name);
    if (ei >= 0) {
        e.terms_.emplace(0u, LaurentPoly::variable(sig->even_ctx, name,
                                                   sig->base_invertible | inv_mask));
        return e;
    }
    int oi = sig->odd_index(name);
    if (oi < 0) throw ContextError("unknown coordinate '" + name + "'");
    e.terms_.emplace(1u << oi, LaurentPoly::constant(sig->even_ctx, Rational(1),
                                                     sig->base_invertible | inv_mask));
    return e;
}

SuperElement SuperElement::from_poly(SignaturePtr sig, const LaurentPoly& body) {
    SuperElement e(std::move(sig));
    if (!same_context(e.sig_->even_ctx, body.context())) {
        throw ContextError("coefficient context does not match chart signature");
    }
    if (!body.is_zero()) e.terms_.emplace(0u, body);
    return e;
}

SuperElement SuperElement::term(SignaturePtr sig, OddMask mask, const LaurentPoly& coeff) {
    SuperElement e(std::move(sig));
    if (!same_context(e.sig_->even_ctx, coeff.context())) {
        throw ContextError("coefficient context does not match chart signature");
    }
    if (mask >= (1u << e.sig_->q())) throw DomainError("odd mask outside signature");
    if (!coeff.is_zero()) e.terms_.emplace(mask, coeff);
    return e;
}

Parity SuperElement::parity() const {
    if (terms_.empty()) return Parity::Zero;
    bool even = true, odd = true;
    for (const auto& [m, c] : terms_) {
        if (popcount(m) & 1) {
            even = false;
        } else {
            odd = false;
        }
    }
    if (even) return Parity::Even;
    if (odd) return Parity::Odd;
    return Parity::Mixed;
}

LaurentPoly SuperElement::body() const {
    auto it = terms_.find(0u);
    if (it != terms_.end()) return it->second;
    return LaurentPoly(sig_->even_ctx, sig_->base_invertible);
}

void SuperElement::add_term(OddMask mask, const LaurentPoly& coeff) {
    if (coeff.is_zero()) return;
    if (!same_context(sig_->even_ctx, coeff.context())) {
        throw ContextError("coefficient context does not match chart signature");
    }
    auto [it, inserted] = terms_.emplace(mask, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void SuperElement::check_same(const SuperElement& o, const char* op) const {
    if (!same_signature(sig_, o.sig_)) {
        throw ContextError(std::string("signature mismatch in ") + op);
    }
}

SuperElement SuperElement::operator-() const {
    SuperElement r(sig_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

SuperElement& SuperElement::operator+=(const SuperElement& o) {
    check_same(o, "add");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

SuperElement& SuperElement::operator-=(const SuperElement& o) {
    check_same(o, "sub");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

SuperElement SuperElement::operator*(const SuperElement& o) const {
    check_same(o, "mul");
    SuperElement r(sig_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            int sign = merge_sign(ma, mb);
            if (sign == 0) continue;
            LaurentPoly c = ca * cb;
            if (sign < 0) c = -c;
            r.add_term(ma | mb, c);
        }
    }
    return r;
}

SuperElement SuperElement::operator*(const Rational& c) const {
    SuperElement r(sig_);
    if (c.is_zero()) return r;
    for (const auto& [m, coeff] : terms_) r.terms_.emplace(m, coeff * c);
    return r;
}

bool operator==(const SuperElement& a, const SuperElement& b) {
    if (!same_signature(a.sig_, b.sig_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    for (; ia != a.terms_.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second != ib->second) return false;
    }
    return true;
}

SuperElement SuperElement::inverse() const {
    if (!pure_even()) throw ParityError("inverse requires a pure-even element");
    LaurentPoly b = body();
    if (b.is_zero()) throw NotAUnitError("inverse of element with zero body");
    LaurentPoly binv = b.unit_inverse(); // throws NotAUnitError on multi-term body
    SuperElement scaled = *this * SuperElement::from_poly(sig_, binv);
    SuperElement n = scaled - SuperElement::constant(sig_, Rational(1));
    // n is pure even with zero body, hence nilpotent of step <= q/2.
    SuperElement acc = SuperElement::constant(sig_, Rational(1));
    SuperElement power = SuperElement::constant(sig_, Rational(1));
    int bound = static_cast<int>(sig_->q()) / 2;
    for (int k = 1; k <= bound; ++k) {
        power = power * (-n);
        if (power.is_zero()) break;
        acc += power;
    }
    return SuperElement::from_poly(sig_, binv) * acc;
}

SuperElement SuperElement::pow(int e) const {
    if (e == 0) return SuperElement::constant(sig_, Rational(1));
    SuperElement base = e > 0 ? *this : inverse();
    int k = e > 0 ? e : -e;
    SuperElement acc = SuperElement::constant(sig_, Rational(1));
    for (int i = 0; i < k; ++i) acc = acc * base;
    return acc;
}

SuperElement SuperElement::derivative(const std::string& coord) const {
    int ei = sig_->even_index(coord);
    if (ei >= 0) {
        SuperElement r(sig_);
        for (const auto& [m, c] : terms_) r.add_term(m, c.derivative(ei));
        return r;
    }
    int oi = sig_->odd_index(coord);
    if (oi < 0) throw ContextError("unknown coordinate '" + coord + "'");
    OddMask bit = 1u << oi;
    SuperElement r(sig_);
    for (const auto& [m, c] : terms_) {
        if (!(m & bit)) continue;
        // Left derivative: sign (-1)^(pos-1) with pos the 1-based position of
        // t_oi among the ascending factors.
        OddMask below = m & (bit - 1u);
        int sign = (popcount(below) & 1) ? -1 : 1;
        r.add_term(m & ~bit, sign < 0 ? -c : c);
    }
    return r;
}

int SuperElement::jadic_degree() const {
    if (terms_.empty()) throw DomainError("J-adic degree of zero element is undefined");
    int d = INT32_MAX;
    for (const auto& [m, c] : terms_) d = std::min(d, popcount(m));
    return d;
}

std::map<int, SuperElement> SuperElement::graded_parts() const {
    std::map<int, SuperElement> parts;
    for (const auto& [m, c] : terms_) {
        int d = popcount(m);
        auto it = parts.find(d);
        if (it == parts.end()) it = parts.emplace(d, SuperElement(sig_)).first;
        it->second.add_term(m, c);
    }
    return parts;
}

SuperElement SuperElement::graded_part(int m) const {
    SuperElement r(sig_);
    for (const auto& [mask, c] : terms_) {
        if (popcount(mask) == m) r.add_term(mask, c);
    }
    return r;
}

SuperElement SuperElement::initial_form() const { return graded_part(jadic_degree()); }

SuperElement SuperElement::truncate_below(int m) const {
    SuperElement r(sig_);
    for (const auto& [mask, c] : terms_) {
        if (popcount(mask) < m) r.add_term(mask, c);
    }
    return r;
}

SuperElement SuperElement::with_invertible(std::uint32_t mask) const {
    SuperElement r(sig_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, c.with_invertible(mask));
    return r;
}

std::string render_odd_mask(const ChartSignature& sig, OddMask mask) {
    std::string s;
    for (OddMask mm = mask; mm; mm &= mm - 1) {
        int i = std::countr_zero(mm);
        if (!s.empty()) s += "*";
        s += sig.odd_names[i];
    }
    return s;
}

std::string SuperElement::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string odd = render_odd_mask(*sig_, m);
        // One summand per polynomial term so the output stays flat.
        for (const auto& [e, coeff] : c.terms()) {
            if (!first) s += " + ";
            first = false;
            std::string mono = render_monomial(*sig_->even_ctx, e);
            std::string factors = mono;
            if (!odd.empty()) factors += (factors.empty() ? "" : "*") + odd;
            if (factors.empty()) {
                s += coeff.str();
            } else if (coeff.is_one()) {
                s += factors;
            } else {
                s += coeff.str() + "*" + factors;
            }
        }
    }
    return s;
}

void Substitution::set(const std::string& coord, SuperElement image) {
    bool even = source_->is_even_name(coord);
    bool odd = source_->is_odd_name(coord);
    if (!even && !odd) throw ContextError("substitution for unknown coordinate '" + coord + "'");
    if (!same_signature(image.signature(), target_)) {
        throw ContextError("substitution image over wrong signature");
    }
    if (even && !image.pure_even()) {
        throw ParityError("even coordinate '" + coord + "' must map to a pure-even element");
    }
    if (odd && !image.pure_odd()) {
        throw ParityError("odd coordinate '" + coord + "' must map to a pure-odd element");
    }
    images_.insert_or_assign(coord, std::move(image));
    power_cache_.clear();
}

const SuperElement* Substitution::find(const std::string& coord) const {
    auto it = images_.find(coord);
    return it == images_.end() ? nullptr : &it->second;
}

Substitution Substitution::identity(const SignaturePtr& sig, std::uint32_t inv_mask) {
    Substitution s(sig, sig);
    for (const auto& n : sig->even_names) s.set(n, SuperElement::coordinate(sig, n, inv_mask));
    for (const auto& n : sig->odd_names) s.set(n, SuperElement::coordinate(sig, n, inv_mask));
    return s;
}

const SuperElement& Substitution::even_power(int var, int e) const {
    auto key = std::make_pair(var, e);
    auto it = power_cache_.find(key);
    if (it != power_cache_.end()) return it->second;
    const std::string& name = source_->even_names[var];
    auto img_it = images_.find(name);
    if (img_it == images_.end()) {
        throw ContextError("substitution missing image for '" + name + "'");
    }
    SuperElement v = img_it->second.pow(e); // inverse() checked inside for e < 0
    return power_cache_.emplace(key, std::move(v)).first->second;
}

SuperElement Substitution::apply(const SuperElement& f) const {
    if (!same_signature(f.signature(), source_)) {
        throw ContextError("substitution applied to element over wrong signature");
    }
    SuperElement acc = SuperElement::zero(target_);
    for (const auto& [mask, coeff] : f.terms()) {
        // Odd factor images multiplied in ascending order.
        SuperElement odd_part = SuperElement::constant(target_, Rational(1));
        for (OddMask mm = mask; mm; mm &= mm - 1) {
            int i = std::countr_zero(mm);
            const std::string& name = source_->odd_names[i];
            auto it = images_.find(name);
            if (it == images_.end()) {
                throw ContextError("substitution missing image for '" + name + "'");
            }
            odd_part = odd_part * it->second;
        }
        if (odd_part.is_zero()) continue;
        for (const auto& [exps, c] : coeff.terms()) {
            SuperElement even_part = SuperElement::constant(target_, c);
            for (size_t v = 0; v < exps.size(); ++v) {
                if (exps[v] == 0) continue;
                even_part = even_part * even_power(static_cast<int>(v), exps[v]);
            }
            acc += even_part * odd_part;
        }
    }
    return acc;
}

} // namespace supersplit
