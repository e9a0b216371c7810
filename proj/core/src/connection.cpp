#include "supersplit/connection.hpp"

namespace supersplit {

VectorField CoordIndex::frame_field(const SignaturePtr& sig, int idx) {
    VectorField v(sig);
    v.set_component(name(*sig, idx), SuperElement::constant(sig, 1));
    return v;
}

SuperElement ChristoffelData::get(int a, int b, int c) const {
    auto it = gamma_.find({a, b, c});
    if (it == gamma_.end()) return SuperElement::zero(sig_);
    return it->second;
}

void ChristoffelData::set(int a, int b, int c, SuperElement value) {
    if (!same_signature(value.signature(), sig_)) {
        throw ContextError("gamma entry over wrong signature");
    }
    GammaKey key{a, b, c};
    if (value.is_zero()) {
        gamma_.erase(key);
    } else {
        gamma_.insert_or_assign(key, std::move(value));
    }
}

void ChristoffelData::add(int a, int b, int c, const SuperElement& value) {
    set(a, b, c, get(a, b, c) + value);
}

bool ChristoffelData::is_zero() const {
    for (const auto& [k, v] : gamma_) {
        if (!v.is_zero()) return false;
    }
    return true;
}

ChristoffelData ChristoffelData::operator-() const {
    ChristoffelData r(sig_);
    for (const auto& [k, v] : gamma_) r.gamma_.emplace(k, -v);
    return r;
}

ChristoffelData& ChristoffelData::operator+=(const ChristoffelData& o) {
    if (!same_signature(sig_, o.sig_)) throw ChartMismatchError("gamma chart mismatch");
    for (const auto& [k, v] : o.gamma_) add(k[0], k[1], k[2], v);
    return *this;
}

ChristoffelData& ChristoffelData::operator-=(const ChristoffelData& o) { return *this += -o; }

ChristoffelData ChristoffelData::operator*(const Rational& c) const {
    ChristoffelData r(sig_);
    if (c.is_zero()) return r;
    for (const auto& [k, v] : gamma_) r.gamma_.emplace(k, v * c);
    return r;
}

bool operator==(const ChristoffelData& a, const ChristoffelData& b) {
    if (!same_signature(a.sig_, b.sig_)) return false;
    for (const auto& [k, v] : a.gamma_) {
        if (b.get(k[0], k[1], k[2]) != v) return false;
    }
    for (const auto& [k, v] : b.gamma_) {
        if (a.get(k[0], k[1], k[2]) != v) return false;
    }
    return true;
}

bool ChristoffelData::is_even(std::string* why) const {
    for (const auto& [k, v] : gamma_) {
        int want = (CoordIndex::parity(*sig_, k[0]) + CoordIndex::parity(*sig_, k[1]) +
                    CoordIndex::parity(*sig_, k[2])) %
                   2;
        Parity p = v.parity();
        bool ok = (p == Parity::Zero) || (want == 0 && p == Parity::Even) ||
                  (want == 1 && p == Parity::Odd);
        if (!ok) {
            if (why) {
                *why = "gamma[" + CoordIndex::name(*sig_, k[0]) + "," +
                       CoordIndex::name(*sig_, k[1]) + "," + CoordIndex::name(*sig_, k[2]) +
                       "] has wrong parity";
            }
            return false;
        }
    }
    return true;
}

bool ChristoffelData::is_graded_symmetric(std::string* why) const {
    int n = dim();
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            int sign = (CoordIndex::parity(*sig_, a) && CoordIndex::parity(*sig_, b)) ? -1 : 1;
            for (int c = 0; c < n; ++c) {
                SuperElement lhs = get(a, b, c);
                SuperElement rhs = get(b, a, c) * Rational(sign);
                if (lhs != rhs) {
                    if (why) {
                        *why = "gamma[" + CoordIndex::name(*sig_, a) + "," +
                               CoordIndex::name(*sig_, b) + ",*] breaks graded symmetry";
                    }
                    return false;
                }
            }
        }
    }
    return true;
}

ChristoffelData ChristoffelData::with_invertible(std::uint32_t mask) const {
    ChristoffelData r(sig_);
    for (const auto& [k, v] : gamma_) r.gamma_.emplace(k, v.with_invertible(mask));
    return r;
}

namespace {

VectorField cov_homogeneous(const ChristoffelData& n, const VectorField& u, const VectorField& v,
                            Parity pu, bool include_derivative) {
    const auto& sig = u.signature();
    int p = static_cast<int>(sig->p());
    VectorField r(sig);

    auto comp = [&](const VectorField& w, int idx) -> const SuperElement& {
        return idx < p ? w.even_component(static_cast<size_t>(idx))
                       : w.odd_component(static_cast<size_t>(idx - p));
    };

    if (include_derivative) {
        int dim = p + static_cast<int>(sig->q());
        for (int b = 0; b < dim; ++b) {
            const SuperElement& vb = comp(v, b);
            if (vb.is_zero()) continue;
            SuperElement d = u.apply(vb);
            if (b < p) {
                r.even_component(static_cast<size_t>(b)) += d;
            } else {
                r.odd_component(static_cast<size_t>(b - p)) += d;
            }
        }
    }

    for (const auto& [key, g] : n.entries()) {
        auto [a, b, c] = std::make_tuple(key[0], key[1], key[2]);
        const SuperElement& ua = comp(u, a);
        const SuperElement& vb = comp(v, b);
        if (ua.is_zero() || vb.is_zero()) continue;
        // sign (-1)^{|u| (|v| + |B|)} with |v|+|B| the parity of v^B.
        SuperElement term = vb * ua * g;
        if (pu == Parity::Odd) {
            Parity pvb = vb.parity();
            if (pvb == Parity::Mixed) throw ParityError("mixed component in homogeneous part");
            if (pvb == Parity::Odd) term = -term;
        }
        if (c < p) {
            r.even_component(static_cast<size_t>(c)) += term;
        } else {
            r.odd_component(static_cast<size_t>(c - p)) += term;
        }
    }
    return r;
}

VectorField cov_general(const ChristoffelData& n, const VectorField& u, const VectorField& v,
                        bool include_derivative) {
    if (!same_signature(n.signature(), u.signature()) ||
        !same_signature(n.signature(), v.signature())) {
        throw ChartMismatchError("covariant derivative chart mismatch");
    }
    std::string why;
    if (!n.is_even(&why)) throw ParityError("invalid connection data: " + why);
    VectorField r(u.signature());
    for (Parity pu : {Parity::Even, Parity::Odd}) {
        VectorField up = u.parity_part(pu);
        if (up.is_zero()) continue;
        for (Parity pv : {Parity::Even, Parity::Odd}) {
            VectorField vp = v.parity_part(pv);
            if (vp.is_zero()) continue;
            r += cov_homogeneous(n, up, vp, pu, include_derivative);
        }
    }
    return r;
}

} // namespace

VectorField covariant_derivative(const ChristoffelData& n, const VectorField& u,
                                 const VectorField& v) {
    return cov_general(n, u, v, true);
}

VectorField tensor_evaluate(const ChristoffelData& n, const VectorField& u,
                            const VectorField& v) {
    return cov_general(n, u, v, false);
}

VectorField torsion(const ChristoffelData& n, const VectorField& u, const VectorField& v) {
    VectorField r(u.signature());
    for (Parity pu : {Parity::Even, Parity::Odd}) {
        VectorField up = u.parity_part(pu);
        if (up.is_zero()) continue;
        for (Parity pv : {Parity::Even, Parity::Odd}) {
            VectorField vp = v.parity_part(pv);
            if (vp.is_zero()) continue;
            int sign = (pu == Parity::Odd && pv == Parity::Odd) ? -1 : 1;
            r += super_bracket(up, vp) - covariant_derivative(n, up, vp) +
                 covariant_derivative(n, vp, up) * Rational(sign);
        }
    }
    return r;
}

ChristoffelData transport_connection(const ChristoffelData& on_target, const TransitionMap& t) {
    if (!same_signature(on_target.signature(), t.target_sig)) {
        throw ChartMismatchError("transport_connection: data not on the target chart");
    }
    if (!t.has_inverse()) throw DomainError("transport needs a completed transition");
    const auto& src = t.source_sig;
    int dim = static_cast<int>(src->p() + src->q());
    int p = static_cast<int>(src->p());
    TransitionMap rev = t.reversed();

    ChristoffelData out(src);
    std::vector<VectorField> pulled(static_cast<size_t>(dim), VectorField(t.target_sig));
    for (int m = 0; m < dim; ++m) {
        // Source frame field carried to the target chart.
        pulled[static_cast<size_t>(m)] = pushforward(
            CoordIndex::frame_field(src, m).with_invertible(t.overlap_invertible), rev);
    }
    for (int m = 0; m < dim; ++m) {
        for (int nn = 0; nn < dim; ++nn) {
            VectorField w = covariant_derivative(on_target, pulled[static_cast<size_t>(m)],
                                                 pulled[static_cast<size_t>(nn)]);
            VectorField back = pushforward(w, t);
            for (int c = 0; c < dim; ++c) {
                const SuperElement& comp =
                    c < p ? back.even_component(static_cast<size_t>(c))
                          : back.odd_component(static_cast<size_t>(c - p));
                if (!comp.is_zero()) out.set(m, nn, c, comp);
            }
        }
    }
    return out;
}

ChristoffelData transport_tensor(const ChristoffelData& on_target, const TransitionMap& t) {
    ChristoffelData zero(on_target.signature());
    return transport_connection(on_target, t) - transport_connection(zero, t);
}

ValidationReport check_global(const std::map<int, ChristoffelData>& conn, const Atlas& atlas) {
    ValidationReport report;
    for (size_t i = 0; i < atlas.chart_count(); ++i) {
        auto it = conn.find(static_cast<int>(i));
        if (it == conn.end()) {
            report.add("chart-" + std::to_string(i), false, "no Christoffel data");
            continue;
        }
        std::string why;
        bool even = it->second.is_even(&why);
        report.add("even(" + std::to_string(i) + ")", even, why);
        why.clear();
        bool sym = it->second.is_graded_symmetric(&why);
        report.add("graded-symmetric(" + std::to_string(i) + ")", sym, why);
    }
    if (!report.ok()) return report;

    for (const auto& [a, b] : atlas.overlaps()) {
        for (auto [s, t] : {std::make_pair(a, b), std::make_pair(b, a)}) {
            const TransitionMap& tr = atlas.transition(s, t);
            std::string tag = "(" + std::to_string(s) + "<-" + std::to_string(t) + ")";
            try {
                ChristoffelData transported = transport_connection(conn.at(t), tr);
                ChristoffelData local = conn.at(s).with_invertible(tr.overlap_invertible);
                bool equal = transported == local;
                report.add("overlap" + tag, equal,
                           equal ? "" : "transported Christoffels differ");
            } catch (const Error& e) {
                report.add("overlap" + tag, false, e.what());
            }
        }
    }
    return report;
}

ChristoffelData connection_difference(const ChristoffelData& n1, const ChristoffelData& n2) {
    if (!same_signature(n1.signature(), n2.signature())) {
        throw ChartMismatchError("connection difference across charts");
    }
    return n1 - n2;
}

} // namespace supersplit
