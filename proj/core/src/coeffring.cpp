#include "supersplit/coeffring.hpp"

#include <algorithm>

namespace supersplit {

int PolyContext::index_of(const std::string& name) const {
    auto it = std::find(vars.begin(), vars.end(), name);
    return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

PolyContextPtr make_context(std::vector<std::string> vars) {
    auto ctx = std::make_shared<PolyContext>();
    ctx->vars = std::move(vars);
    return ctx;
}

bool same_context(const PolyContextPtr& a, const PolyContextPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->vars == b->vars;
}

LaurentPoly LaurentPoly::constant(PolyContextPtr ctx, const Rational& c, std::uint32_t inv) {
    LaurentPoly p(std::move(ctx), inv);
    if (!c.is_zero()) p.terms_.emplace(ExpVec(p.ctx_->vars.size(), 0), c);
    return p;
}

LaurentPoly LaurentPoly::variable(PolyContextPtr ctx, const std::string& name, std::uint32_t inv) {
    int i = ctx->index_of(name);
    if (i < 0) throw ContextError("unknown variable '" + name + "'");
    LaurentPoly p(std::move(ctx), inv);
    ExpVec e(p.ctx_->vars.size(), 0);
    e[i] = 1;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

LaurentPoly LaurentPoly::monomial(PolyContextPtr ctx, const Rational& c, const ExpVec& exps,
                                  std::uint32_t inv) {
    LaurentPoly p(std::move(ctx), inv);
    if (exps.size() != p.ctx_->vars.size()) throw ContextError("exponent vector length mismatch");
    p.check_exponents(exps);
    if (!c.is_zero()) p.terms_.emplace(exps, c);
    return p;
}

bool LaurentPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    const ExpVec& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

Rational LaurentPoly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw DomainError("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

void LaurentPoly::check_exponents(const ExpVec& exps) const {
    for (size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] < 0 && !(invertible_ & (1u << i))) {
            throw DomainError("negative exponent at non-invertible variable '" + ctx_->vars[i] +
                              "'");
        }
    }
}

void LaurentPoly::add_term(const ExpVec& exps, const Rational& c) {
    if (c.is_zero()) return;
    check_exponents(exps);
    auto [it, inserted] = terms_.emplace(exps, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void LaurentPoly::check_mergeable(const LaurentPoly& o, const char* op) const {
    if (!same_context(ctx_, o.ctx_)) {
        throw ContextError(std::string("mismatched variable contexts in ") + op);
    }
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r(ctx_, invertible_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    check_mergeable(o, "add");
    invertible_ |= o.invertible_;
    for (const auto& [e, c] : o.terms_) {
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    check_mergeable(o, "mul");
    LaurentPoly r(ctx_, invertible_ | o.invertible_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            ExpVec e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            Rational c = ca * cb;
            auto [it, inserted] = r.terms_.emplace(std::move(e), c);
            if (!inserted) {
                it->second += c;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
    }
    *this = std::move(r);
    return *this;
}

LaurentPoly LaurentPoly::operator*(const Rational& c) const {
    LaurentPoly r(ctx_, invertible_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    if (!same_context(a.ctx_, b.ctx_)) return false;
    return a.terms_ == b.terms_;
}

LaurentPoly LaurentPoly::unit_inverse() const {
    if (terms_.size() != 1) {
        throw NotAUnitError("unit_inverse requires a single-term polynomial");
    }
    const auto& [e, c] = *terms_.begin();
    ExpVec inv_e(e.size());
    for (size_t i = 0; i < e.size(); ++i) {
        inv_e[i] = -e[i];
        if (inv_e[i] < 0 && !(invertible_ & (1u << i))) {
            throw NotAUnitError("monomial not invertible at variable '" + ctx_->vars[i] + "'");
        }
    }
    LaurentPoly r(ctx_, invertible_);
    r.terms_.emplace(std::move(inv_e), c.inverse());
    return r;
}

LaurentPoly LaurentPoly::derivative(int var_index) const {
    LaurentPoly r(ctx_, invertible_);
    for (const auto& [e, c] : terms_) {
        if (e[var_index] == 0) continue;
        ExpVec de = e;
        de[var_index] -= 1;
        r.add_term(de, c * Rational(e[var_index]));
    }
    return r;
}

LaurentPoly LaurentPoly::with_invertible(std::uint32_t mask) const {
    LaurentPoly r = *this;
    r.invertible_ |= mask;
    return r;
}

std::string render_monomial(const PolyContext& ctx, const ExpVec& exps) {
    std::string s;
    for (size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += ctx.vars[i];
        if (exps[i] != 1) s += "^" + std::to_string(exps[i]);
    }
    return s;
}

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) s += " + ";
        first = false;
        std::string mono = render_monomial(*ctx_, e);
        if (mono.empty()) {
            s += c.str();
        } else if (c.is_one()) {
            s += mono;
        } else {
            s += c.str() + "*" + mono;
        }
    }
    return s;
}

} // namespace supersplit
