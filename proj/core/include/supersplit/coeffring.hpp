#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "supersplit/rational.hpp"

namespace supersplit {

// Ordered even-coordinate variable list shared by the Laurent polynomials of
// one chart. Contexts compare by variable list.
struct PolyContext {
    std::vector<std::string> vars;

    int index_of(const std::string& name) const;
    bool has(const std::string& name) const { return index_of(name) >= 0; }
};

using PolyContextPtr = std::shared_ptr<const PolyContext>;

PolyContextPtr make_context(std::vector<std::string> vars);
bool same_context(const PolyContextPtr& a, const PolyContextPtr& b);

using ExpVec = std::vector<int>;

// Sparse multivariate Laurent polynomial over Rational. Terms are kept in
// canonical form: no zero coefficients, exponent vectors ordered
// lexicographically by std::map. Negative exponents are legal only at
// variables in the invertible set, tracked as a bitmask over the context.
class LaurentPoly {
  public:
    LaurentPoly() = default;
    explicit LaurentPoly(PolyContextPtr ctx, std::uint32_t invertible = 0)
        : ctx_(std::move(ctx)), invertible_(invertible) {}

    static LaurentPoly constant(PolyContextPtr ctx, const Rational& c, std::uint32_t inv = 0);
    static LaurentPoly variable(PolyContextPtr ctx, const std::string& name, std::uint32_t inv = 0);
    static LaurentPoly monomial(PolyContextPtr ctx, const Rational& c, const ExpVec& exps,
                                std::uint32_t inv = 0);

    const PolyContextPtr& context() const { return ctx_; }
    std::uint32_t invertible_mask() const { return invertible_; }
    const std::map<ExpVec, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_value() const; // value when is_constant()

    void add_term(const ExpVec& exps, const Rational& c);

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
    LaurentPoly operator*(const Rational& c) const;

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    // Monomial-unit inverse: defined for single-term inputs whose flipped
    // exponents stay inside the invertible set.
    LaurentPoly unit_inverse() const;

    // d/d(vars[i]), coefficient-wise.
    LaurentPoly derivative(int var_index) const;

    LaurentPoly with_invertible(std::uint32_t mask) const;

    // `-1/2*x1^-2*x2^3 + ...`, terms in lexicographic exponent order.
    std::string str() const;

  private:
    void check_mergeable(const LaurentPoly& o, const char* op) const;
    void check_exponents(const ExpVec& exps) const;

    PolyContextPtr ctx_;
    std::uint32_t invertible_ = 0;
    std::map<ExpVec, Rational> terms_;
};

std::string render_monomial(const PolyContext& ctx, const ExpVec& exps);

} // namespace supersplit
