#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "supersplit/grassmann.hpp"
#include "supersplit/report.hpp"

namespace supersplit {

// Pullback data of a chart transition: every coordinate of the target chart
// expressed over the source chart, with the extra even variables invertible
// on the overlap.
struct TransitionMap {
    int source = -1;
    int target = -1;
    SignaturePtr source_sig;
    SignaturePtr target_sig;
    std::uint32_t overlap_invertible = 0; // over source even vars, includes base
    std::map<std::string, SuperElement> images;

    // Filled by Atlas::complete (or attach_inverse): source coordinates over
    // the target chart, plus the overlap-invertible mask on the target side.
    std::map<std::string, SuperElement> inverse_images;
    std::uint32_t target_overlap_invertible = 0;

    bool has_inverse() const { return !inverse_images.empty(); }
    TransitionMap reversed() const;

    Substitution as_substitution(std::uint32_t extra_invertible = 0) const;
    const SuperElement& image_of(const std::string& coord) const;
    const SuperElement& inverse_image_of(const std::string& coord) const;

    // q x q theta-linear coefficient matrix: row j = image of odd_names[j].
    std::vector<std::vector<LaurentPoly>> odd_matrix() const;
    // Reduced (theta = 0) images of the even target coordinates.
    std::map<std::string, LaurentPoly> reduced_images() const;
};

// Computes the inverse transition: monomial inversion of the reduced part,
// adjugate inversion of the theta-linear matrix, then fixed-point correction
// along the J-filtration (terminates within q steps).
TransitionMap invert_transition(const TransitionMap& t);

// Computes and attaches inverse_images in place (for standalone transitions
// outside an Atlas, e.g. single-chart automorphisms).
void attach_inverse(TransitionMap& t);

// Cofactor determinant / adjugate inverse over the Laurent ring; inversion
// demands a monomial-unit determinant.
LaurentPoly matrix_det(const std::vector<std::vector<LaurentPoly>>& m);
std::vector<std::vector<LaurentPoly>> matrix_inverse(
    const std::vector<std::vector<LaurentPoly>>& m);

// t_ac candidate from t_ab and t_bc on the triple overlap.
TransitionMap compose_transitions(const TransitionMap& t_ab, const TransitionMap& t_bc);

class Atlas {
  public:
    int add_chart(SignaturePtr sig);
    size_t chart_count() const { return charts_.size(); }
    const SignaturePtr& chart(int i) const { return charts_.at(i); }
    const std::vector<SignaturePtr>& charts() const { return charts_; }

    void set_transition(TransitionMap t);
    bool has_transition(int a, int b) const;
    const TransitionMap& transition(int a, int b) const;
    std::vector<std::pair<int, int>> overlaps() const; // ordered pairs a<b

    void declare_triple(int a, int b, int c);
    const std::set<std::array<int, 3>>& triples() const { return triples_; }

    // Fills in missing inverse transitions; records per-pair failures in the
    // returned report instead of throwing.
    ValidationReport complete();

    std::pair<int, int> dims() const; // (p|q), charts must agree

    bool completed() const { return completed_; }

  private:
    std::vector<SignaturePtr> charts_;
    std::map<std::pair<int, int>, TransitionMap> transitions_;
    std::set<std::array<int, 3>> triples_;
    bool completed_ = false;
};

// Encodes the chart/transition axioms as named checks: image parity,
// invertibility, inverse consistency, triple cocycles, framing-adaptedness.
ValidationReport validate_atlas(Atlas& atlas);

// Keeps only the body of even images and the theta-linear part of odd
// images; idempotent on validated atlases.
Atlas split_model_of(const Atlas& atlas);

struct ReducedData {
    Atlas reduced_atlas; // q = 0 charts over the same even variables
    // Per ordered overlap (a,b): theta-linear matrices over the chart-a ring.
    std::map<std::pair<int, int>, std::vector<std::vector<LaurentPoly>>> odd_cotangent;
};

ReducedData reduced_data(const Atlas& atlas);

bool is_split_atlas(const Atlas& atlas);

} // namespace supersplit
