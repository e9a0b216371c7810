#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "supersplit/coeffring.hpp"

namespace supersplit {

// Local coordinates (x_1..x_p | t_1..t_q) of one chart, plus the even
// variables invertible on the chart itself.
struct ChartSignature {
    std::vector<std::string> even_names;
    std::vector<std::string> odd_names;
    std::uint32_t base_invertible = 0; // bitmask over even_names

    PolyContextPtr even_ctx; // shared by every coefficient over this chart

    int even_index(const std::string& name) const { return even_ctx->index_of(name); }
    int odd_index(const std::string& name) const;
    bool is_even_name(const std::string& name) const { return even_index(name) >= 0; }
    bool is_odd_name(const std::string& name) const { return odd_index(name) >= 0; }

    size_t p() const { return even_names.size(); }
    size_t q() const { return odd_names.size(); }
};

using SignaturePtr = std::shared_ptr<const ChartSignature>;

SignaturePtr make_signature(std::vector<std::string> even_names,
                            std::vector<std::string> odd_names,
                            std::uint32_t base_invertible = 0);
bool same_signature(const SignaturePtr& a, const SignaturePtr& b);

enum class Parity { Even, Odd, Mixed, Zero };

using OddMask = std::uint32_t;

int popcount(OddMask m);

// Element of the Grassmann algebra of a chart: a map from ascending odd-index
// subsets to Laurent-polynomial coefficients. Canonical form stores no zero
// coefficients.
class SuperElement {
  public:
    SuperElement() = default;
    explicit SuperElement(SignaturePtr sig) : sig_(std::move(sig)) {}

    static SuperElement zero(SignaturePtr sig);
    static SuperElement constant(SignaturePtr sig, const Rational& c);
    static SuperElement coordinate(SignaturePtr sig, const std::string& name,
                                   std::uint32_t inv_mask = 0);
    static SuperElement from_poly(SignaturePtr sig, const LaurentPoly& body);
    static SuperElement term(SignaturePtr sig, OddMask mask, const LaurentPoly& coeff);

    const SignaturePtr& signature() const { return sig_; }
    const std::map<OddMask, LaurentPoly>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    Parity parity() const;
    bool pure_even() const { return parity() == Parity::Even || parity() == Parity::Zero; }
    bool pure_odd() const { return parity() == Parity::Odd || parity() == Parity::Zero; }

    // The I = {} coefficient.
    LaurentPoly body() const;

    void add_term(OddMask mask, const LaurentPoly& coeff);

    SuperElement operator-() const;
    SuperElement& operator+=(const SuperElement& o);
    SuperElement& operator-=(const SuperElement& o);
    friend SuperElement operator+(SuperElement a, const SuperElement& b) { return a += b; }
    friend SuperElement operator-(SuperElement a, const SuperElement& b) { return a -= b; }
    SuperElement operator*(const SuperElement& o) const; // sign rule t_i t_j = -t_j t_i
    SuperElement operator*(const Rational& c) const;

    friend bool operator==(const SuperElement& a, const SuperElement& b);
    friend bool operator!=(const SuperElement& a, const SuperElement& b) { return !(a == b); }

    // Pure-even input with monomial-unit body; nilpotent geometric series.
    SuperElement inverse() const;
    SuperElement pow(int e) const; // negative e via inverse()

    // Even coordinate: coefficient-wise d/dx. Odd coordinate: left derivative.
    SuperElement derivative(const std::string& coord) const;

    // J-adic filtration data.
    int jadic_degree() const; // least |I|; throws DomainError on zero
    std::map<int, SuperElement> graded_parts() const;
    SuperElement graded_part(int m) const;
    SuperElement initial_form() const;
    SuperElement truncate_below(int m) const; // sum of parts with |I| < m

    // Same value with more even variables marked invertible.
    SuperElement with_invertible(std::uint32_t mask) const;

    std::string str() const;

  private:
    void check_same(const SuperElement& o, const char* op) const;

    SignaturePtr sig_;
    std::map<OddMask, LaurentPoly> terms_;
};

// Algebra-homomorphic substitution. Every even coordinate must map to a
// pure-even element over the target signature, every odd coordinate to a
// pure-odd one; negative exponents require invertible images.
class Substitution {
  public:
    Substitution(SignaturePtr source, SignaturePtr target)
        : source_(std::move(source)), target_(std::move(target)) {}

    void set(const std::string& coord, SuperElement image);
    const SuperElement* find(const std::string& coord) const;
    const SignaturePtr& source() const { return source_; }
    const SignaturePtr& target() const { return target_; }

    SuperElement apply(const SuperElement& f) const;

    static Substitution identity(const SignaturePtr& sig, std::uint32_t inv_mask = 0);

  private:
    const SuperElement& even_power(int var, int e) const;

    SignaturePtr source_; // signature the input f lives over
    SignaturePtr target_; // signature of the images
    std::map<std::string, SuperElement> images_;
    mutable std::map<std::pair<int, int>, SuperElement> power_cache_;
};

std::string render_odd_mask(const ChartSignature& sig, OddMask mask);

} // namespace supersplit
