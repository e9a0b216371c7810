#include "supersplit/atlas.hpp"

#include <algorithm>

namespace supersplit {

Substitution TransitionMap::as_substitution(std::uint32_t extra_invertible) const {
    Substitution s(target_sig, source_sig);
    for (const auto& [name, img] : images) {
        s.set(name, extra_invertible ? img.with_invertible(extra_invertible) : img);
    }
    return s;
}

const SuperElement& TransitionMap::image_of(const std::string& coord) const {
    auto it = images.find(coord);
    if (it == images.end()) {
        throw ContextError("transition has no image for coordinate '" + coord + "'");
    }
    return it->second;
}

const SuperElement& TransitionMap::inverse_image_of(const std::string& coord) const {
    auto it = inverse_images.find(coord);
    if (it == inverse_images.end()) {
        throw ContextError("transition has no inverse image for '" + coord +
                           "' (not completed?)");
    }
    return it->second;
}

TransitionMap TransitionMap::reversed() const {
    if (!has_inverse()) throw DomainError("reversing a transition without inverse data");
    TransitionMap r;
    r.source = target;
    r.target = source;
    r.source_sig = target_sig;
    r.target_sig = source_sig;
    r.overlap_invertible = target_overlap_invertible;
    r.images = inverse_images;
    r.inverse_images = images;
    r.target_overlap_invertible = overlap_invertible;
    return r;
}

std::vector<std::vector<LaurentPoly>> TransitionMap::odd_matrix() const {
    size_t q = target_sig->q();
    std::vector<std::vector<LaurentPoly>> a(
        q, std::vector<LaurentPoly>(q, LaurentPoly(source_sig->even_ctx, overlap_invertible)));
    for (size_t j = 0; j < q; ++j) {
        const SuperElement& img = image_of(target_sig->odd_names[j]);
        for (const auto& [mask, coeff] : img.terms()) {
            if (popcount(mask) != 1) continue;
            int k = std::countr_zero(mask);
            a[j][static_cast<size_t>(k)] += coeff;
        }
    }
    return a;
}

std::map<std::string, LaurentPoly> TransitionMap::reduced_images() const {
    std::map<std::string, LaurentPoly> out;
    for (const auto& name : target_sig->even_names) out.emplace(name, image_of(name).body());
    return out;
}

namespace {

struct MonomialMap {
    // y_mu = c_mu * prod_nu x_nu^{E[mu][nu]}
    std::vector<Rational> coeff;
    std::vector<std::vector<int>> exps;
};

MonomialMap reduced_monomials(const TransitionMap& t) {
    MonomialMap m;
    size_t p = t.target_sig->p();
    m.coeff.resize(p);
    m.exps.assign(p, std::vector<int>(t.source_sig->p(), 0));
    for (size_t mu = 0; mu < p; ++mu) {
        LaurentPoly body = t.image_of(t.target_sig->even_names[mu]).body();
        if (!body.is_monomial()) {
            throw NotAUnitError("reduced transition image of '" + t.target_sig->even_names[mu] +
                                "' is not a Laurent monomial");
        }
        const auto& [e, c] = *body.terms().begin();
        m.coeff[mu] = c;
        m.exps[mu] = e;
    }
    return m;
}

// Integer matrix inverse; rejects non-unimodular input.
std::vector<std::vector<int>> unimodular_inverse(const std::vector<std::vector<int>>& e) {
    size_t n = e.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = Rational(e[i][j]);
        a[i][n + i] = Rational(1);
    }
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw NotAUnitError("reduced transition exponent matrix is singular");
        std::swap(a[piv], a[col]);
        Rational d = a[col][col];
        for (auto& v : a[col]) v /= d;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Rational f = a[r][col];
            for (size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<std::vector<int>> inv(n, std::vector<int>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            const Rational& v = a[i][n + j];
            if (!v.is_integer()) {
                throw NotAUnitError("reduced transition is not invertible over monomials");
            }
            inv[i][j] = static_cast<int>(v.num());
        }
    }
    return inv;
}

std::uint32_t negative_exponent_vars(const SuperElement& e) {
    std::uint32_t mask = 0;
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [exps, coeff] : c.terms()) {
            for (size_t i = 0; i < exps.size(); ++i) {
                if (exps[i] < 0) mask |= 1u << i;
            }
        }
    }
    return mask;
}

} // namespace

LaurentPoly matrix_det(const std::vector<std::vector<LaurentPoly>>& m) {
    size_t n = m.size();
    if (n == 0) throw DomainError("determinant of empty matrix");
    if (n == 1) return m[0][0];
    LaurentPoly det(m[0][0].context(), m[0][0].invertible_mask());
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<LaurentPoly>> minor;
        minor.reserve(n - 1);
        for (size_t r = 1; r < n; ++r) {
            std::vector<LaurentPoly> row;
            for (size_t c = 0; c < n; ++c) {
                if (c != j) row.push_back(m[r][c]);
            }
            minor.push_back(std::move(row));
        }
        LaurentPoly term = m[0][j] * matrix_det(minor);
        if (j % 2 == 1) term = -term;
        det += term;
    }
    return det;
}

std::vector<std::vector<LaurentPoly>> matrix_inverse(
    const std::vector<std::vector<LaurentPoly>>& m) {
    size_t n = m.size();
    LaurentPoly det = matrix_det(m);
    LaurentPoly det_inv = det.unit_inverse(); // demands a monomial unit
    std::vector<std::vector<LaurentPoly>> inv(n, std::vector<LaurentPoly>(n, det_inv));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (n == 1) {
                inv[0][0] = det_inv;
                continue;
            }
            std::vector<std::vector<LaurentPoly>> minor;
            for (size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<LaurentPoly> row;
                for (size_t c = 0; c < n; ++c) {
                    if (c != i) row.push_back(m[r][c]);
                }
                minor.push_back(std::move(row));
            }
            LaurentPoly cof = matrix_det(minor);
            if ((i + j) % 2 == 1) cof = -cof;
            inv[i][j] = cof * det_inv;
        }
    }
    return inv;
}

TransitionMap invert_transition(const TransitionMap& t) {
    const auto& src = t.source_sig;
    const auto& dst = t.target_sig;
    if (src->p() != dst->p() || src->q() != dst->q()) {
        throw DomainError("transition between charts of different dimensions");
    }
    size_t p = src->p(), q = src->q();

    // All target variables may be inverted while solving; the actual overlap
    // mask is read off the result afterwards.
    std::uint32_t work_mask = p >= 32 ? ~0u : ((1u << p) - 1u);

    MonomialMap mm = reduced_monomials(t);
    auto f = unimodular_inverse(mm.exps);

    TransitionMap inv;
    inv.source = t.target;
    inv.target = t.source;
    inv.source_sig = dst;
    inv.target_sig = src;

    // x_nu = d_nu * prod_mu y_mu^{F[nu][mu]},  d_nu = prod_mu c_mu^{-F[nu][mu]}
    for (size_t nu = 0; nu < p; ++nu) {
        Rational d(1);
        ExpVec e(p, 0);
        for (size_t mu = 0; mu < p; ++mu) {
            d *= mm.coeff[mu].pow(-f[nu][mu]);
            e[mu] = f[nu][mu];
        }
        inv.images.emplace(src->even_names[nu],
                           SuperElement::from_poly(
                               dst, LaurentPoly::monomial(dst->even_ctx, d, e, work_mask)));
    }

    // theta = A(x)^{-1} eta with x substituted by its reduced inverse images.
    if (q > 0) {
        auto a = t.odd_matrix();
        auto b = matrix_inverse(a); // over the source ring
        Substitution to_target(src, dst);
        for (size_t nu = 0; nu < p; ++nu) {
            to_target.set(src->even_names[nu], inv.images.at(src->even_names[nu]));
        }
        for (size_t j = 0; j < q; ++j) {
            to_target.set(src->odd_names[j], SuperElement::zero(dst));
        }
        for (size_t k = 0; k < q; ++k) {
            SuperElement img(dst);
            for (size_t j = 0; j < q; ++j) {
                // theta_k = sum_j B[k][j](x(y)) eta_j
                SuperElement bkj = to_target.apply(SuperElement::from_poly(
                    src, b[k][j].with_invertible(t.overlap_invertible)));
                img += bkj * SuperElement::coordinate(dst, dst->odd_names[j], work_mask);
            }
            inv.images.emplace(src->odd_names[k], img);
        }
    }

    // Fixed-point correction: g <- g + g(z - (g o t)(z)).
    for (size_t step = 0; step <= q + 1; ++step) {
        Substitution g(src, dst);
        for (const auto& [name, img] : inv.images) g.set(name, img);
        Substitution t_sub = t.as_substitution(t.overlap_invertible);

        bool clean = true;
        std::map<std::string, SuperElement> errors;
        auto record = [&](const std::string& name) {
            SuperElement composite = t_sub.apply(*g.find(name));
            SuperElement err =
                SuperElement::coordinate(src, name, t.overlap_invertible) - composite;
            if (!err.is_zero()) clean = false;
            errors.emplace(name, std::move(err));
        };
        for (const auto& n : src->even_names) record(n);
        for (const auto& n : src->odd_names) record(n);
        if (clean) {
            std::uint32_t mask = dst->base_invertible;
            for (const auto& [name, img] : inv.images) mask |= negative_exponent_vars(img);
            inv.overlap_invertible = mask;
            std::map<std::string, SuperElement> normalized;
            for (const auto& [name, img] : inv.images) {
                normalized.emplace(name, img.with_invertible(mask));
            }
            inv.images = std::move(normalized);
            return inv;
        }
        for (auto& [name, err] : errors) {
            if (err.is_zero()) continue;
            inv.images.at(name) += g.apply(err);
        }
    }
    throw DomainError("transition inversion did not converge; map is not invertible");
}

void attach_inverse(TransitionMap& t) {
    TransitionMap inv = invert_transition(t);
    t.inverse_images = inv.images;
    t.target_overlap_invertible = inv.overlap_invertible;
}

TransitionMap compose_transitions(const TransitionMap& t_ab, const TransitionMap& t_bc) {
    if (t_ab.target != t_bc.source) throw DomainError("compose_transitions chart mismatch");
    TransitionMap r;
    r.source = t_ab.source;
    r.target = t_bc.target;
    r.source_sig = t_ab.source_sig;
    r.target_sig = t_bc.target_sig;
    r.overlap_invertible = t_ab.overlap_invertible;
    Substitution s = t_ab.as_substitution();
    for (const auto& [name, img] : t_bc.images) {
        r.images.emplace(name, s.apply(img));
        r.overlap_invertible |= negative_exponent_vars(r.images.at(name));
    }
    return r;
}

int Atlas::add_chart(SignaturePtr sig) {
    charts_.push_back(std::move(sig));
    return static_cast<int>(charts_.size()) - 1;
}

void Atlas::set_transition(TransitionMap t) {
    if (t.source < 0 || t.source >= static_cast<int>(charts_.size()) || t.target < 0 ||
        t.target >= static_cast<int>(charts_.size()) || t.source == t.target) {
        throw DomainError("transition endpoints out of range");
    }
    t.source_sig = charts_[t.source];
    t.target_sig = charts_[t.target];
    auto key = std::make_pair(t.source, t.target);
    transitions_[key] = std::move(t);
    completed_ = false;
}

bool Atlas::has_transition(int a, int b) const {
    return transitions_.count(std::make_pair(a, b)) > 0;
}

const TransitionMap& Atlas::transition(int a, int b) const {
    auto it = transitions_.find(std::make_pair(a, b));
    if (it == transitions_.end()) {
        throw DomainError("no transition between charts " + std::to_string(a) + " and " +
                          std::to_string(b));
    }
    return it->second;
}

std::vector<std::pair<int, int>> Atlas::overlaps() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [key, t] : transitions_) {
        if (key.first < key.second) {
            out.push_back(key);
        } else if (!has_transition(key.second, key.first)) {
            out.emplace_back(key.second, key.first);
        }
    }
    return out;
}

void Atlas::declare_triple(int a, int b, int c) {
    std::array<int, 3> t = {a, b, c};
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2]) throw DomainError("triple with repeated chart");
    triples_.insert(t);
}

ValidationReport Atlas::complete() {
    ValidationReport report;
    std::set<std::pair<int, int>> pairs;
    for (const auto& [key, t] : transitions_) {
        pairs.insert(key.first < key.second ? key : std::make_pair(key.second, key.first));
    }
    for (const auto& [a, b] : pairs) {
        bool have_ab = has_transition(a, b);
        bool have_ba = has_transition(b, a);
        try {
            if (have_ab && !have_ba) {
                transitions_[std::make_pair(b, a)] = invert_transition(transition(a, b));
            } else if (have_ba && !have_ab) {
                transitions_[std::make_pair(a, b)] = invert_transition(transition(b, a));
            }
            TransitionMap& ab = transitions_.at(std::make_pair(a, b));
            TransitionMap& ba = transitions_.at(std::make_pair(b, a));
            ab.inverse_images = ba.images;
            ab.target_overlap_invertible = ba.overlap_invertible;
            ba.inverse_images = ab.images;
            ba.target_overlap_invertible = ab.overlap_invertible;
        } catch (const Error& e) {
            report.add("invert(" + std::to_string(a) + "," + std::to_string(b) + ")", false,
                       e.what());
        }
    }
    completed_ = report.ok();
    return report;
}

std::pair<int, int> Atlas::dims() const {
    if (charts_.empty()) throw DomainError("atlas with no charts");
    auto p = charts_[0]->p();
    auto q = charts_[0]->q();
    for (const auto& c : charts_) {
        if (c->p() != p || c->q() != q) throw DomainError("charts of unequal dimension");
    }
    return {static_cast<int>(p), static_cast<int>(q)};
}

namespace {

bool identity_composite(const TransitionMap& t, std::string* detail) {
    // (inverse o t) pullback must fix every source coordinate.
    if (!t.has_inverse()) {
        *detail = "missing inverse";
        return false;
    }
    Substitution t_sub = t.as_substitution();
    const auto& src = t.source_sig;
    auto check = [&](const std::string& name) {
        SuperElement got = t_sub.apply(t.inverse_image_of(name));
        SuperElement want = SuperElement::coordinate(src, name, t.overlap_invertible);
        if (got.with_invertible(t.overlap_invertible) !=
            want.with_invertible(t.overlap_invertible)) {
            *detail = "composite does not fix '" + name + "'";
            return false;
        }
        return true;
    };
    for (const auto& name : src->even_names) {
        if (!check(name)) return false;
    }
    for (const auto& name : src->odd_names) {
        if (!check(name)) return false;
    }
    return true;
}

} // namespace

ValidationReport validate_atlas(Atlas& atlas) {
    ValidationReport report;
    try {
        atlas.dims();
        report.add("dimensions", true);
    } catch (const Error& e) {
        report.add("dimensions", false, e.what());
        return report;
    }

    // Parity first: inversion assumes even morphisms.
    bool all_parity = true;
    for (const auto& [a, b] : atlas.overlaps()) {
        for (auto [s, t] : {std::make_pair(a, b), std::make_pair(b, a)}) {
            if (!atlas.has_transition(s, t)) continue;
            const TransitionMap& tr = atlas.transition(s, t);
            std::string tag = "(" + std::to_string(s) + "," + std::to_string(t) + ")";
            bool parity_ok = true;
            bool adapted = true;
            std::string why;
            for (const auto& name : tr.target_sig->even_names) {
                const SuperElement& img = tr.image_of(name);
                if (!img.pure_even()) {
                    parity_ok = false;
                    why = "'" + name + "' image not pure-even";
                }
                if (!img.graded_part(1).is_zero()) adapted = false;
            }
            for (const auto& name : tr.target_sig->odd_names) {
                const SuperElement& img = tr.image_of(name);
                if (!img.pure_odd()) {
                    parity_ok = false;
                    why = "'" + name + "' image not pure-odd";
                }
                if (!img.graded_part(0).is_zero() || !img.graded_part(2).is_zero()) {
                    adapted = false;
                }
            }
            report.add("parity" + tag, parity_ok, why);
            report.add("framing-adapted" + tag, adapted);
            all_parity = all_parity && parity_ok;
        }
    }
    if (!all_parity) return report;

    ValidationReport completion = atlas.complete();
    for (auto& c : completion.checks) report.checks.push_back(c);
    if (!completion.ok()) return report;

    for (const auto& [a, b] : atlas.overlaps()) {
        for (auto [s, t] : {std::make_pair(a, b), std::make_pair(b, a)}) {
            const TransitionMap& tr = atlas.transition(s, t);
            std::string tag = "(" + std::to_string(s) + "," + std::to_string(t) + ")";

            bool bodies_ok = true;
            std::string why;
            try {
                (void)reduced_monomials(tr);
                if (tr.target_sig->q() > 0) (void)matrix_inverse(tr.odd_matrix());
            } catch (const Error& e) {
                bodies_ok = false;
                why = e.what();
            }
            report.add("invertible-bodies" + tag, bodies_ok, why);

            std::string detail;
            bool inv_ok = bodies_ok && identity_composite(tr, &detail);
            report.add("inverse-consistency" + tag, inv_ok, inv_ok ? "" : detail);
        }
    }

    for (const auto& tri : atlas.triples()) {
        auto [a, b, c] = std::make_tuple(tri[0], tri[1], tri[2]);
        std::string tag =
            "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
        try {
            const TransitionMap& t_ab = atlas.transition(a, b);
            const TransitionMap& t_bc = atlas.transition(b, c);
            const TransitionMap& t_ac = atlas.transition(a, c);
            TransitionMap composed = compose_transitions(t_ab, t_bc);
            std::uint32_t mask = composed.overlap_invertible | t_ac.overlap_invertible |
                                 t_ab.overlap_invertible;
            bool ok = true;
            std::string why;
            for (const auto& [name, img] : composed.images) {
                if (img.with_invertible(mask) != t_ac.image_of(name).with_invertible(mask)) {
                    ok = false;
                    why = "cocycle fails at '" + name + "'";
                    break;
                }
            }
            report.add("triple-cocycle" + tag, ok, why);
        } catch (const Error& e) {
            report.add("triple-cocycle" + tag, false, e.what());
        }
    }
    return report;
}

Atlas split_model_of(const Atlas& atlas) {
    Atlas out;
    for (const auto& c : atlas.charts()) out.add_chart(c);
    for (const auto& [a, b] : atlas.overlaps()) {
        const TransitionMap& t = atlas.transition(a, b);
        TransitionMap s;
        s.source = t.source;
        s.target = t.target;
        s.overlap_invertible = t.overlap_invertible;
        for (const auto& name : t.target_sig->even_names) {
            s.images.emplace(name,
                             SuperElement::from_poly(t.source_sig, t.image_of(name).body())
                                 .with_invertible(t.overlap_invertible));
        }
        for (const auto& name : t.target_sig->odd_names) {
            s.images.emplace(name, t.image_of(name).graded_part(1));
        }
        out.set_transition(std::move(s));
    }
    for (const auto& tri : atlas.triples()) out.declare_triple(tri[0], tri[1], tri[2]);
    out.complete();
    return out;
}

ReducedData reduced_data(const Atlas& atlas) {
    ReducedData out;
    for (const auto& c : atlas.charts()) {
        out.reduced_atlas.add_chart(make_signature(c->even_names, {}, c->base_invertible));
    }
    for (const auto& [a, b] : atlas.overlaps()) {
        for (auto [s, t] : {std::make_pair(a, b), std::make_pair(b, a)}) {
            const TransitionMap& tr = atlas.transition(s, t);
            TransitionMap red;
            red.source = s;
            red.target = t;
            red.overlap_invertible = tr.overlap_invertible;
            const auto& red_sig = out.reduced_atlas.chart(s);
            for (const auto& [name, body] : tr.reduced_images()) {
                red.images.emplace(name,
                                   SuperElement::from_poly(
                                       red_sig, body.with_invertible(tr.overlap_invertible)));
            }
            if (s < t) out.reduced_atlas.set_transition(std::move(red));
            std::vector<std::vector<LaurentPoly>> m = tr.odd_matrix();
            for (auto& row : m) {
                for (auto& e : row) e = e.with_invertible(tr.overlap_invertible);
            }
            out.odd_cotangent.emplace(std::make_pair(s, t), std::move(m));
        }
    }
    for (const auto& tri : atlas.triples()) {
        out.reduced_atlas.declare_triple(tri[0], tri[1], tri[2]);
    }
    out.reduced_atlas.complete();
    return out;
}

bool is_split_atlas(const Atlas& atlas) {
    for (const auto& [a, b] : atlas.overlaps()) {
        for (auto [s, t] : {std::make_pair(a, b), std::make_pair(b, a)}) {
            if (!atlas.has_transition(s, t)) continue;
            const TransitionMap& tr = atlas.transition(s, t);
            for (const auto& name : tr.target_sig->even_names) {
                const SuperElement& img = tr.image_of(name);
                if (SuperElement::from_poly(tr.source_sig, img.body())
                        .with_invertible(tr.overlap_invertible) !=
                    img.with_invertible(tr.overlap_invertible)) {
                    return false;
                }
            }
            for (const auto& name : tr.target_sig->odd_names) {
                const SuperElement& img = tr.image_of(name);
                if (img.graded_part(1) != img) return false;
            }
        }
    }
    return true;
}

} // namespace supersplit
