#pragma once

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "supersplit/atlas.hpp"
#include "supersplit/connection.hpp"
#include "supersplit/svector.hpp"

namespace supersplit {

// ---------------------------------------------------------------------------
// Flat monomial coordinates shared by every cochain kind.

struct MonomialKey {
    int slot = 0;     // kind-specific component index
    OddMask mask = 0; // odd monomial (0 on reduced-space values)
    ExpVec exps;      // even exponents

    auto operator<=>(const MonomialKey&) const = default;
};

struct FlatValue {
    std::map<MonomialKey, Rational> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    void add(const MonomialKey& k, const Rational& c);
    FlatValue& operator+=(const FlatValue& o);
    FlatValue& operator-=(const FlatValue& o);
    FlatValue operator*(const Rational& c) const;
};

// Probe data of one overlap: how a unit monomial in each (slot, mask) fibre
// transports, when every fibre entry is a single monomial.
struct ProbeEntry {
    int to_slot;
    OddMask to_mask;
    ExpVec shift;
    Rational coeff;
};

// A sheaf with chosen monomial coordinates over the charts of an atlas.
// Entries of 1-cochains on the ordered overlap (a,b) are expressed on chart a.
class CochainSpace {
  public:
    virtual ~CochainSpace() = default;

    virtual int num_charts() const = 0;
    virtual std::vector<std::pair<int, int>> overlaps() const = 0; // ordered, a < b
    virtual std::vector<std::array<int, 3>> triples() const = 0;

    // Express a value given on chart b over chart a (the two charts overlap).
    virtual FlatValue transport(int a, int b, const FlatValue& on_b) const = 0;

    // Monomial admissible in a global section over the chart (0-cochain side).
    virtual bool regular(int chart, const MonomialKey& k) const = 0;

    // All (slot, mask) fibre generators of the kind on a chart.
    virtual std::vector<std::pair<int, OddMask>> fibre_generators(int chart) const = 0;

    // Exact monomial structure of the transport a <- b: exponent action
    // matrices and per-fibre probes. Returns false when not available (the
    // solver then falls back to non-definitive enumeration).
    virtual bool monomial_structure(int a, int b, std::vector<std::vector<int>>* m_fwd,
                                    std::vector<std::vector<int>>* m_bwd,
                                    std::map<std::pair<int, OddMask>, std::vector<ProbeEntry>>*
                                        probes) const = 0;

    virtual int even_dim(int chart) const = 0;
};

// ---------------------------------------------------------------------------
// Exact coboundary solver.

struct SolverOptions {
    int window = 12;     // max |exponent| per variable for unknowns
    size_t cap = 200000; // max discovered unknowns + equations
};

enum class SolveStatus { Solved, NoSolutionDefinitive, Undecided };

struct SolveResult {
    SolveStatus status = SolveStatus::Undecided;
    std::map<int, FlatValue> solution; // chart -> 0-cochain value
    std::string detail;
};

using FlatCochain1 = std::map<std::pair<int, int>, FlatValue>;
using FlatCochain0 = std::map<int, FlatValue>;

FlatCochain1 flat_coboundary(const CochainSpace& sp, const FlatCochain0& c0);
bool flat_cocycle_check(const CochainSpace& sp, const FlatCochain1& c1);
SolveResult solve_coboundary(const CochainSpace& sp, const FlatCochain1& c1,
                             const SolverOptions& opt = {});

// Class comparison: solve for c1 - c1'.
SolveStatus flat_class_equal(const CochainSpace& sp, const FlatCochain1& a, const FlatCochain1& b,
                             const SolverOptions& opt = {});

// ---------------------------------------------------------------------------
// Kinds.

// Graded vector fields T^{m} over a split atlas; with block projection the
// d/dt components are dropped (the Lambda^m T* (x) T_X quotient block).
class GradedFieldSpace : public CochainSpace {
  public:
    GradedFieldSpace(const Atlas& split_atlas, int degree, bool block_projection);

    int num_charts() const override;
    std::vector<std::pair<int, int>> overlaps() const override;
    std::vector<std::array<int, 3>> triples() const override;
    FlatValue transport(int a, int b, const FlatValue& on_b) const override;
    bool regular(int chart, const MonomialKey& k) const override;
    std::vector<std::pair<int, OddMask>> fibre_generators(int chart) const override;
    bool monomial_structure(int a, int b, std::vector<std::vector<int>>* m_fwd,
                            std::vector<std::vector<int>>* m_bwd,
                            std::map<std::pair<int, OddMask>, std::vector<ProbeEntry>>* probes)
        const override;
    int even_dim(int chart) const override;

    int degree() const { return degree_; }
    bool block() const { return block_; }
    const Atlas& atlas() const { return *atlas_; }

    FlatValue to_flat(int chart, const VectorField& v) const;
    VectorField from_flat(int chart, const FlatValue& v, std::uint32_t inv_mask) const;

    // Projection of an arbitrary field to this graded piece.
    VectorField project(const VectorField& v) const;

  private:
    const Atlas* atlas_;
    int degree_;
    bool block_;
};

// Symmetric-tensor (connection-difference) values over a full atlas.
class TensorSpace : public CochainSpace {
  public:
    explicit TensorSpace(const Atlas& atlas);

    int num_charts() const override;
    std::vector<std::pair<int, int>> overlaps() const override;
    std::vector<std::array<int, 3>> triples() const override;
    FlatValue transport(int a, int b, const FlatValue& on_b) const override;
    bool regular(int chart, const MonomialKey& k) const override;
    std::vector<std::pair<int, OddMask>> fibre_generators(int chart) const override;
    bool monomial_structure(int a, int b, std::vector<std::vector<int>>* m_fwd,
                            std::vector<std::vector<int>>* m_bwd,
                            std::map<std::pair<int, OddMask>, std::vector<ProbeEntry>>* probes)
        const override;
    int even_dim(int chart) const override;

    const Atlas& atlas() const { return *atlas_; }

    FlatValue to_flat(int chart, const ChristoffelData& g) const;
    ChristoffelData from_flat(int chart, const FlatValue& v, std::uint32_t inv_mask) const;

  private:
    const Atlas* atlas_;
};

// Endomorphism-valued 1-forms of a bundle over a reduced atlas, given by
// transition matrices g(a,b) expressed on chart a.
struct BundleData {
    const Atlas* reduced_atlas = nullptr;
    int rank = 0;
    // Ordered pairs (a,b), both directions, entries over chart a.
    std::map<std::pair<int, int>, std::vector<std::vector<LaurentPoly>>> g;

    bool matrix_cocycle_ok() const;
};

struct EndoFormValue {
    // comps[i][j][mu]: coefficient of dx_mu (x) (e_j -> e_i).
    std::vector<std::vector<std::vector<LaurentPoly>>> comps;

    static EndoFormValue zero(int rank, int p, const PolyContextPtr& ctx, std::uint32_t inv);
    bool is_zero() const;
    EndoFormValue operator-(const EndoFormValue& o) const;
};

class EndoFormSpace : public CochainSpace {
  public:
    explicit EndoFormSpace(BundleData bundle);

    int num_charts() const override;
    std::vector<std::pair<int, int>> overlaps() const override;
    std::vector<std::array<int, 3>> triples() const override;
    FlatValue transport(int a, int b, const FlatValue& on_b) const override;
    bool regular(int chart, const MonomialKey& k) const override;
    std::vector<std::pair<int, OddMask>> fibre_generators(int chart) const override;
    bool monomial_structure(int a, int b, std::vector<std::vector<int>>* m_fwd,
                            std::vector<std::vector<int>>* m_bwd,
                            std::map<std::pair<int, OddMask>, std::vector<ProbeEntry>>* probes)
        const override;
    int even_dim(int chart) const override;

    const BundleData& bundle() const { return bundle_; }

    FlatValue to_flat(int chart, const EndoFormValue& v) const;
    EndoFormValue from_flat(int chart, const FlatValue& v, std::uint32_t inv_mask) const;

  private:
    const Atlas* atlas() const { return bundle_.reduced_atlas; }
    BundleData bundle_;
};

// 1-forms over a reduced atlas.
class FormSpace : public CochainSpace {
  public:
    explicit FormSpace(const Atlas& reduced_atlas);

    int num_charts() const override;
    std::vector<std::pair<int, int>> overlaps() const override;
    std::vector<std::array<int, 3>> triples() const override;
    FlatValue transport(int a, int b, const FlatValue& on_b) const override;
    bool regular(int chart, const MonomialKey& k) const override;
    std::vector<std::pair<int, OddMask>> fibre_generators(int chart) const override;
    bool monomial_structure(int a, int b, std::vector<std::vector<int>>* m_fwd,
                            std::vector<std::vector<int>>* m_bwd,
                            std::map<std::pair<int, OddMask>, std::vector<ProbeEntry>>* probes)
        const override;
    int even_dim(int chart) const override;

    const Atlas& atlas() const { return *atlas_; }

    FlatValue to_flat(int chart, const std::vector<LaurentPoly>& form) const;
    std::vector<LaurentPoly> from_flat(int chart, const FlatValue& v,
                                       std::uint32_t inv_mask) const;

  private:
    const Atlas* atlas_;
};

// ---------------------------------------------------------------------------
// Full (ungraded) vector-field cochains: coboundary and cocycle check via
// honest pushforward. Cocycles of this kind are solved degree by degree in
// the graded spaces.

using FieldCochain0 = std::map<int, VectorField>;
using FieldCochain1 = std::map<std::pair<int, int>, VectorField>;

FieldCochain1 field_coboundary(const Atlas& atlas, const FieldCochain0& c0);
bool field_cocycle_check(const Atlas& atlas, const FieldCochain1& c1);

} // namespace supersplit
