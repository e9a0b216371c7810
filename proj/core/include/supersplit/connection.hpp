#pragma once

#include <array>
#include <map>

#include "supersplit/atlas.hpp"
#include "supersplit/svector.hpp"

namespace supersplit {

// Combined coordinate index of a chart: 0..p-1 even, p..p+q-1 odd.
struct CoordIndex {
    static int parity(const ChartSignature& sig, int idx) {
        return idx >= static_cast<int>(sig.p()) ? 1 : 0;
    }
    static std::string name(const ChartSignature& sig, int idx) {
        return idx < static_cast<int>(sig.p())
                   ? sig.even_names[static_cast<size_t>(idx)]
                   : sig.odd_names[static_cast<size_t>(idx - static_cast<int>(sig.p()))];
    }
    static VectorField frame_field(const SignaturePtr& sig, int idx);
};

using GammaKey = std::array<int, 3>; // (A, B, C): nabla_{d_A} d_B = Gamma^C_{AB} d_C

// Even affine connection in one chart, as Christoffel data. The same
// container doubles as a symmetric 2-tensor with values in T (connection
// differences), which transform without the inhomogeneous term.
class ChristoffelData {
  public:
    ChristoffelData() = default;
    explicit ChristoffelData(SignaturePtr sig) : sig_(std::move(sig)) {}

    static ChristoffelData flat(SignaturePtr sig) { return ChristoffelData(std::move(sig)); }

    const SignaturePtr& signature() const { return sig_; }
    const std::map<GammaKey, SuperElement>& entries() const { return gamma_; }

    SuperElement get(int a, int b, int c) const;
    void set(int a, int b, int c, SuperElement value);
    void add(int a, int b, int c, const SuperElement& value);

    bool is_zero() const;
    int dim() const { return static_cast<int>(sig_->p() + sig_->q()); }

    ChristoffelData operator-() const;
    ChristoffelData& operator+=(const ChristoffelData& o);
    ChristoffelData& operator-=(const ChristoffelData& o);
    friend ChristoffelData operator+(ChristoffelData a, const ChristoffelData& b) {
        return a += b;
    }
    friend ChristoffelData operator-(ChristoffelData a, const ChristoffelData& b) {
        return a -= b;
    }
    ChristoffelData operator*(const Rational& c) const;
    friend bool operator==(const ChristoffelData& a, const ChristoffelData& b);
    friend bool operator!=(const ChristoffelData& a, const ChristoffelData& b) {
        return !(a == b);
    }

    // parity(Gamma[A,B,C]) == |A|+|B|+|C| mod 2.
    bool is_even(std::string* why = nullptr) const;
    // Gamma[A,B,C] == (-1)^{|A||B|} Gamma[B,A,C].
    bool is_graded_symmetric(std::string* why = nullptr) const;

    ChristoffelData with_invertible(std::uint32_t mask) const;

  private:
    SignaturePtr sig_;
    std::map<GammaKey, SuperElement> gamma_;
};

// nabla_u v under the locked convention
//   nabla_u v = u(v^B) d_B + (-1)^{|u|(|v|+|B|)} v^B u^A Gamma[A,B,C] d_C,
// for homogeneous u, v; mixed inputs decompose into parity parts. Throws on
// chart mismatch and on parity-violating gamma.
VectorField covariant_derivative(const ChristoffelData& n, const VectorField& u,
                                 const VectorField& v);

// tor(u,v) = [u,v] - nabla_u v + (-1)^{|u||v|} nabla_v u.
VectorField torsion(const ChristoffelData& n, const VectorField& u, const VectorField& v);

// The bilinear (non-derivative) part only: evaluates Christoffel data as a
// tensor on a pair of fields.
VectorField tensor_evaluate(const ChristoffelData& n, const VectorField& u, const VectorField& v);

// Connection transport across a transition: the chart-t.source Christoffel
// data of the connection given on chart t.target. Includes the inhomogeneous
// second-derivative term via the chain rule.
ChristoffelData transport_connection(const ChristoffelData& on_target, const TransitionMap& t);

// Tensor transport (no inhomogeneous term): transport_connection(s) -
// transport_connection(0).
ChristoffelData transport_tensor(const ChristoffelData& on_target, const TransitionMap& t);

// Per-chart evenness/symmetry plus overlap compatibility of a chart-indexed
// connection family.
ValidationReport check_global(const std::map<int, ChristoffelData>& conn, const Atlas& atlas);

ChristoffelData connection_difference(const ChristoffelData& n1, const ChristoffelData& n2);

} // namespace supersplit
