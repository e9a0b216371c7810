#pragma once

#include <map>
#include <string>
#include <vector>

#include "supersplit/atlas.hpp"
#include "supersplit/grassmann.hpp"

namespace supersplit {

// Chart-local derivation: sum a^mu d/dx_mu + sum b_j d/dt_j.
class VectorField {
  public:
    VectorField() = default;
    explicit VectorField(SignaturePtr sig);

    static VectorField zero(SignaturePtr sig) { return VectorField(std::move(sig)); }

    const SignaturePtr& signature() const { return sig_; }
    const std::vector<SuperElement>& even_components() const { return even_; }
    const std::vector<SuperElement>& odd_components() const { return odd_; }

    SuperElement& even_component(size_t mu) { return even_.at(mu); }
    SuperElement& odd_component(size_t j) { return odd_.at(j); }
    const SuperElement& even_component(size_t mu) const { return even_.at(mu); }
    const SuperElement& odd_component(size_t j) const { return odd_.at(j); }

    // Component for a coordinate by name.
    const SuperElement& component(const std::string& coord) const;
    void set_component(const std::string& coord, SuperElement value);

    bool is_zero() const;
    Parity parity() const; // Even / Odd / Mixed as a field
    VectorField parity_part(Parity p) const;

    VectorField operator-() const;
    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    VectorField operator*(const Rational& c) const;
    friend VectorField operator*(const SuperElement& f, const VectorField& v);

    friend bool operator==(const VectorField& a, const VectorField& b);
    friend bool operator!=(const VectorField& a, const VectorField& b) { return !(a == b); }

    SuperElement apply(const SuperElement& f) const;

    VectorField with_invertible(std::uint32_t mask) const;

    std::string str() const;

  private:
    SignaturePtr sig_;
    std::vector<SuperElement> even_;
    std::vector<SuperElement> odd_;
};

// Graded bracket [u,v](z) = u(v(z)) - (-1)^{|u||v|} v(u(z)); mixed inputs
// split into parity parts first.
VectorField super_bracket(const VectorField& u, const VectorField& v);

// Carries v, written in t.target_chart coordinates, over to t.source_chart.
VectorField pushforward(const VectorField& v, const TransitionMap& t);

struct FilterData {
    int degree = 0; // minimum stratum; -1 for d/dt terms
    std::map<int, VectorField> graded_parts;
    std::map<int, bool> algebraic_flags; // true iff part m has no d/dx component
};

// Filtration strata: an even component of theta-degree m sits in stratum m,
// an odd component of theta-degree m in stratum m-1.
FilterData filtration_data(const VectorField& v);
int filtration_degree(const VectorField& v); // throws DomainError on zero
VectorField filtration_part(const VectorField& v, int m);
VectorField filtration_at_least(const VectorField& v, int m);

enum class CanonicalKind { Euler, DeRham };

// euler: sum t_j d/dt_j.  derham: sum t_mu d/dx_mu, requires p == q with the
// j-th odd name paired to the j-th even name.
VectorField canonical_field(const SignaturePtr& sig, CanonicalKind kind);

} // namespace supersplit
