#include "supersplit/svector.hpp"

namespace supersplit {

VectorField::VectorField(SignaturePtr sig) : sig_(std::move(sig)) {
    even_.assign(sig_->p(), SuperElement::zero(sig_));
    odd_.assign(sig_->q(), SuperElement::zero(sig_));
}

const SuperElement& VectorField::component(const std::string& coord) const {
    int ei = sig_->even_index(coord);
    if (ei >= 0) return even_[static_cast<size_t>(ei)];
    int oi = sig_->odd_index(coord);
    if (oi >= 0) return odd_[static_cast<size_t>(oi)];
    throw ContextError("unknown coordinate '" + coord + "'");
}

void VectorField::set_component(const std::string& coord, SuperElement value) {
    if (!same_signature(value.signature(), sig_)) {
        throw ContextError("component over wrong signature");
    }
    int ei = sig_->even_index(coord);
    if (ei >= 0) {
        even_[static_cast<size_t>(ei)] = std::move(value);
        return;
    }
    int oi = sig_->odd_index(coord);
    if (oi < 0) throw ContextError("unknown coordinate '" + coord + "'");
    odd_[static_cast<size_t>(oi)] = std::move(value);
}

bool VectorField::is_zero() const {
    for (const auto& c : even_) {
        if (!c.is_zero()) return false;
    }
    for (const auto& c : odd_) {
        if (!c.is_zero()) return false;
    }
    return true;
}

Parity VectorField::parity() const {
    // Even field: even components pure-even, odd components pure-odd.
    bool even_ok = true, odd_ok = true;
    bool any = false;
    for (const auto& c : even_) {
        if (c.is_zero()) continue;
        any = true;
        if (!c.pure_even()) even_ok = false;
        if (!c.pure_odd()) odd_ok = false;
    }
    for (const auto& c : odd_) {
        if (c.is_zero()) continue;
        any = true;
        if (!c.pure_odd()) even_ok = false;
        if (!c.pure_even()) odd_ok = false;
    }
    if (!any) return Parity::Zero;
    if (even_ok) return Parity::Even;
    if (odd_ok) return Parity::Odd;
    return Parity::Mixed;
}

VectorField VectorField::parity_part(Parity p) const {
    VectorField r(sig_);
    for (size_t i = 0; i < even_.size(); ++i) {
        SuperElement keep(sig_);
        for (const auto& [m, c] : even_[i].terms()) {
            bool is_even = (popcount(m) & 1) == 0;
            if ((p == Parity::Even) == is_even) keep.add_term(m, c);
        }
        r.even_[i] = keep;
    }
    for (size_t j = 0; j < odd_.size(); ++j) {
        SuperElement keep(sig_);
        for (const auto& [m, c] : odd_[j].terms()) {
            bool is_odd = (popcount(m) & 1) == 1;
            if ((p == Parity::Even) == is_odd) keep.add_term(m, c);
        }
        r.odd_[j] = keep;
    }
    return r;
}

VectorField VectorField::operator-() const {
    VectorField r(sig_);
    for (size_t i = 0; i < even_.size(); ++i) r.even_[i] = -even_[i];
    for (size_t j = 0; j < odd_.size(); ++j) r.odd_[j] = -odd_[j];
    return r;
}

VectorField& VectorField::operator+=(const VectorField& o) {
    if (!same_signature(sig_, o.sig_)) throw ChartMismatchError("vector field chart mismatch");
    for (size_t i = 0; i < even_.size(); ++i) even_[i] += o.even_[i];
    for (size_t j = 0; j < odd_.size(); ++j) odd_[j] += o.odd_[j];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) { return *this += -o; }

VectorField VectorField::operator*(const Rational& c) const {
    VectorField r(sig_);
    for (size_t i = 0; i < even_.size(); ++i) r.even_[i] = even_[i] * c;
    for (size_t j = 0; j < odd_.size(); ++j) r.odd_[j] = odd_[j] * c;
    return r;
}

VectorField operator*(const SuperElement& f, const VectorField& v) {
    VectorField r(v.sig_);
    for (size_t i = 0; i < v.even_.size(); ++i) r.even_[i] = f * v.even_[i];
    for (size_t j = 0; j < v.odd_.size(); ++j) r.odd_[j] = f * v.odd_[j];
    return r;
}

bool operator==(const VectorField& a, const VectorField& b) {
    if (!same_signature(a.sig_, b.sig_)) return false;
    return a.even_ == b.even_ && a.odd_ == b.odd_;
}

SuperElement VectorField::apply(const SuperElement& f) const {
    if (!same_signature(f.signature(), sig_)) {
        throw ChartMismatchError("apply: element over different chart");
    }
    SuperElement acc = SuperElement::zero(sig_);
    for (size_t i = 0; i < even_.size(); ++i) {
        if (even_[i].is_zero()) continue;
        acc += even_[i] * f.derivative(sig_->even_names[i]);
    }
    for (size_t j = 0; j < odd_.size(); ++j) {
        if (odd_[j].is_zero()) continue;
        acc += odd_[j] * f.derivative(sig_->odd_names[j]);
    }
    return acc;
}

VectorField VectorField::with_invertible(std::uint32_t mask) const {
    VectorField r(sig_);
    for (size_t i = 0; i < even_.size(); ++i) r.even_[i] = even_[i].with_invertible(mask);
    for (size_t j = 0; j < odd_.size(); ++j) r.odd_[j] = odd_[j].with_invertible(mask);
    return r;
}

std::string VectorField::str() const {
    std::string s;
    auto emit = [&](const SuperElement& c, const std::string& name) {
        if (c.is_zero()) return;
        for (const auto& [mask, poly] : c.terms()) {
            std::string odd = render_odd_mask(*sig_, mask);
            for (const auto& [e, coeff] : poly.terms()) {
                if (!s.empty()) s += " + ";
                std::string mono = render_monomial(*sig_->even_ctx, e);
                std::string factors = mono;
                if (!odd.empty()) factors += (factors.empty() ? "" : "*") + odd;
                std::string head;
                if (factors.empty()) {
                    head = coeff.str();
                } else if (coeff.is_one()) {
                    head = factors;
                } else {
                    head = coeff.str() + "*" + factors;
                }
                s += head + "*d/d" + name;
            }
        }
    };
    for (size_t i = 0; i < even_.size(); ++i) emit(even_[i], sig_->even_names[i]);
    for (size_t j = 0; j < odd_.size(); ++j) emit(odd_[j], sig_->odd_names[j]);
    return s.empty() ? "0" : s;
}

namespace {

VectorField bracket_homogeneous(const VectorField& u, const VectorField& v, Parity pu, Parity pv) {
    const auto& sig = u.signature();
    VectorField r(sig);
    int sign = (pu == Parity::Odd && pv == Parity::Odd) ? 1 : -1;
    // [u,v](z) = u(v(z)) - (-1)^{|u||v|} v(u(z)) per coordinate z.
    for (size_t i = 0; i < sig->p(); ++i) {
        SuperElement c = u.apply(v.even_component(i));
        SuperElement d = v.apply(u.even_component(i));
        r.even_component(i) = (sign > 0) ? c + d : c - d;
    }
    for (size_t j = 0; j < sig->q(); ++j) {
        SuperElement c = u.apply(v.odd_component(j));
        SuperElement d = v.apply(u.odd_component(j));
        r.odd_component(j) = (sign > 0) ? c + d : c - d;
    }
    return r;
}

} // namespace

VectorField super_bracket(const VectorField& u, const VectorField& v) {
    if (!same_signature(u.signature(), v.signature())) {
        throw ChartMismatchError("bracket of fields on different charts");
    }
    VectorField r(u.signature());
    for (Parity pu : {Parity::Even, Parity::Odd}) {
        VectorField up = u.parity_part(pu);
        if (up.is_zero()) continue;
        for (Parity pv : {Parity::Even, Parity::Odd}) {
            VectorField vp = v.parity_part(pv);
            if (vp.is_zero()) continue;
            r += bracket_homogeneous(up, vp, pu, pv);
        }
    }
    return r;
}

VectorField pushforward(const VectorField& v, const TransitionMap& t) {
    if (!same_signature(v.signature(), t.target_sig)) {
        throw ChartMismatchError("pushforward: field not over the target chart");
    }
    if (!t.has_inverse()) throw DomainError("pushforward requires a completed transition");
    Substitution sub = t.as_substitution(t.overlap_invertible);
    VectorField r(t.source_sig);
    auto carry = [&](const std::string& name) {
        const SuperElement& pre = t.inverse_image_of(name); // source coord over target chart
        SuperElement comp = sub.apply(v.apply(pre));
        r.set_component(name, std::move(comp));
    };
    for (const auto& n : t.source_sig->even_names) carry(n);
    for (const auto& n : t.source_sig->odd_names) carry(n);
    return r;
}

FilterData filtration_data(const VectorField& v) {
    FilterData fd;
    const auto& sig = v.signature();
    std::map<int, VectorField> parts;
    auto part_at = [&](int m) -> VectorField& {
        auto it = parts.find(m);
        if (it == parts.end()) it = parts.emplace(m, VectorField(sig)).first;
        return it->second;
    };
    for (size_t i = 0; i < sig->p(); ++i) {
        for (const auto& [mask, c] : v.even_component(i).terms()) {
            part_at(popcount(mask))
                .even_component(i)
                .add_term(mask, c);
        }
    }
    for (size_t j = 0; j < sig->q(); ++j) {
        for (const auto& [mask, c] : v.odd_component(j).terms()) {
            part_at(popcount(mask) - 1).odd_component(j).add_term(mask, c);
        }
    }
    if (parts.empty()) throw DomainError("filtration of the zero field is undefined");
    fd.degree = parts.begin()->first;
    for (auto& [m, f] : parts) {
        bool algebraic = true;
        for (const auto& c : f.even_components()) {
            if (!c.is_zero()) algebraic = false;
        }
        fd.algebraic_flags[m] = algebraic;
        fd.graded_parts.emplace(m, std::move(f));
    }
    return fd;
}

int filtration_degree(const VectorField& v) { return filtration_data(v).degree; }

VectorField filtration_part(const VectorField& v, int m) {
    const auto& sig = v.signature();
    VectorField r(sig);
    for (size_t i = 0; i < sig->p(); ++i) {
        r.even_component(i) = v.even_component(i).graded_part(m);
    }
    for (size_t j = 0; j < sig->q(); ++j) {
        r.odd_component(j) = v.odd_component(j).graded_part(m + 1);
    }
    return r;
}

VectorField filtration_at_least(const VectorField& v, int m) {
    const auto& sig = v.signature();
    VectorField r(sig);
    for (size_t i = 0; i < sig->p(); ++i) {
        r.even_component(i) = v.even_component(i) - v.even_component(i).truncate_below(m);
    }
    for (size_t j = 0; j < sig->q(); ++j) {
        r.odd_component(j) = v.odd_component(j) - v.odd_component(j).truncate_below(m + 1);
    }
    return r;
}

VectorField canonical_field(const SignaturePtr& sig, CanonicalKind kind) {
    VectorField r(sig);
    if (kind == CanonicalKind::Euler) {
        for (size_t j = 0; j < sig->q(); ++j) {
            r.odd_component(j) = SuperElement::coordinate(sig, sig->odd_names[j]);
        }
        return r;
    }
    if (sig->p() != sig->q()) {
        throw DomainError("de Rham field needs p == q with paired coordinates");
    }
    for (size_t mu = 0; mu < sig->p(); ++mu) {
        r.even_component(mu) = SuperElement::coordinate(sig, sig->odd_names[mu]);
    }
    return r;
}

} // namespace supersplit
