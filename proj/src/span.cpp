#include "equik/span.hpp"

#include <algorithm>
#include <stdexcept>

namespace equik {

void Span::validate() const {
    if (unit) {
        if (src != dst) throw std::runtime_error("span: formal unit with different endpoints");
        return;
    }
    r.validate();
    t.validate();
    if (!(r.dom == middle) || !(t.dom == middle)) throw std::runtime_error("span: legs not on the middle");
    if (!(r.cod == canonical_orbit(*lat, src)) || !(t.cod == canonical_orbit(*lat, dst)))
        throw std::runtime_error("span: leg codomains are not the canonical orbits");
}

bool Span::operator==(const Span& o) const {
    if (src != o.src || dst != o.dst || unit != o.unit) return false;
    if (unit) return true;
    return middle == o.middle && r == o.r && t == o.t;
}

Span unit_span(LatticePtr lat, int h) {
    Span s;
    s.lat = lat;
    s.src = h;
    s.dst = h;
    s.unit = true;
    return s;
}

Span make_span(LatticePtr lat, int h, int k, const GSet& middle, const std::vector<int>& r_img,
               const std::vector<int>& t_img) {
    Span s;
    s.lat = lat;
    s.src = h;
    s.dst = k;
    s.middle = middle;
    s.r.dom = middle;
    s.r.cod = canonical_orbit(*lat, h);
    s.r.img = r_img;
    s.t.dom = middle;
    s.t.cod = canonical_orbit(*lat, k);
    s.t.img = t_img;
    s.validate();
    return s;
}

Span transfer_span(LatticePtr lat, int k, int h) {
    GSet gk = canonical_orbit(*lat, k);
    std::vector<int> r_img(gk.size), t_img(gk.size);
    for (int c = 0; c < gk.size; ++c) {
        int rep = int(orbit_coset_rep(gk, c));
        r_img[c] = c;
        t_img[c] = orbit_coset_id(*lat, h, rep);
    }
    return make_span(lat, k, h, gk, r_img, t_img);
}

Span restriction_span(LatticePtr lat, int h, int k) {
    GSet gk = canonical_orbit(*lat, k);
    std::vector<int> r_img(gk.size), t_img(gk.size);
    for (int c = 0; c < gk.size; ++c) {
        int rep = int(orbit_coset_rep(gk, c));
        r_img[c] = orbit_coset_id(*lat, h, rep);
        t_img[c] = c;
    }
    return make_span(lat, h, k, gk, r_img, t_img);
}

Span conjugation_span(LatticePtr lat, int h, int g) {
    int hg = lat->conjugate_subgroup(h, g);
    GSet gh = canonical_orbit(*lat, h);
    std::vector<int> r_img(gh.size), t_img(gh.size);
    for (int c = 0; c < gh.size; ++c) {
        int rep = int(orbit_coset_rep(gh, c));
        r_img[c] = c;
        t_img[c] = orbit_coset_id(*lat, hg, lat->grp->mul(rep, g));
    }
    return make_span(lat, h, hg, gh, r_img, t_img);
}

Span identity_span(LatticePtr lat, int h) {
    GSet gh = canonical_orbit(*lat, h);
    std::vector<int> idimg(gh.size);
    for (int c = 0; c < gh.size; ++c) idimg[c] = c;
    return make_span(lat, h, h, gh, idimg, idimg);
}

Span compose_spans(const Span& w1, const Span& w2) {
    if (w1.dst != w2.src) throw std::runtime_error("compose_spans: middle subgroup mismatch");
    if (w1.unit) return w2;
    if (w2.unit) return w1;
    PullbackResult pb = pullback_over(w1.t, w2.r);
    Span s;
    s.lat = w1.lat;
    s.src = w1.src;
    s.dst = w2.dst;
    s.middle = pb.set;
    s.r = compose_maps(pb.p1, w1.r);
    s.t = compose_maps(pb.p2, w2.t);
    return s;
}

Span span_coproduct(const Span& w1, const Span& w2) {
    if (w1.src != w2.src || w1.dst != w2.dst) throw std::runtime_error("span_coproduct: endpoint mismatch");
    if (w1.unit || w2.unit) throw std::runtime_error("span_coproduct: formal unit has no coproduct data");
    Span s;
    s.lat = w1.lat;
    s.src = w1.src;
    s.dst = w1.dst;
    s.middle = coproduct_gset(w1.middle, w2.middle);
    s.r.dom = s.middle;
    s.r.cod = w1.r.cod;
    s.t.dom = s.middle;
    s.t.cod = w1.t.cod;
    s.r.img = w1.r.img;
    s.r.img.insert(s.r.img.end(), w2.r.img.begin(), w2.r.img.end());
    s.t.img = w1.t.img;
    s.t.img.insert(s.t.img.end(), w2.t.img.begin(), w2.t.img.end());
    return s;
}

SpanNormalForm span_normal_form(const Span& w) {
    if (w.unit) throw std::runtime_error("span_normal_form: formal unit has no middle");
    const FiniteGroup& G = *w.lat->grp;
    SpanNormalForm nf;
    std::vector<char> seen(w.middle.size, 0);
    std::vector<SpanNormalForm::Triple> items;
    for (int e = 0; e < w.middle.size; ++e) {
        if (seen[e]) continue;
        SpanNormalForm::Triple tr;
        for (int g = 0; g < G.n; ++g) {
            int x = w.middle.act[g][e];
            if (!seen[x]) {
                seen[x] = 1;
                tr.orbit.push_back(x);
            }
        }
        std::sort(tr.orbit.begin(), tr.orbit.end());
        tr.min_elt = -1;
        for (int x : tr.orbit)
            if (w.r.img[x] == 0) {  // coset eH has id 0
                tr.min_elt = x;
                break;
            }
        if (tr.min_elt < 0) throw std::runtime_error("span_normal_form: leg r misses eH on an orbit");
        std::vector<int> stab;
        for (int g = 0; g < G.n; ++g)
            if (w.middle.act[g][tr.min_elt] == tr.min_elt) stab.push_back(g);
        tr.stab = w.lat->find_subgroup(stab);
        if (tr.stab < 0) throw std::runtime_error("span_normal_form: stabilizer missing from lattice");
        tr.y = int(orbit_coset_rep(w.t.cod, w.t.img[tr.min_elt]));
        items.push_back(std::move(tr));
    }
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.min_elt < b.min_elt; });
    nf.items = std::move(items);
    return nf;
}

void Span2Cell::validate() const {
    if (dom.unit || cod.unit) throw std::runtime_error("two-cell: formal units carry no 2-cell data");
    if (dom.src != cod.src || dom.dst != cod.dst) throw std::runtime_error("two-cell: endpoint mismatch");
    GMap f;
    f.dom = dom.middle;
    f.cod = cod.middle;
    f.img = phi;
    f.validate();
    for (int x = 0; x < dom.middle.size; ++x) {
        if (dom.r.img[x] != cod.r.img[phi[x]] || dom.t.img[x] != cod.t.img[phi[x]])
            throw std::runtime_error("two-cell: legs do not commute");
    }
}

Span2Cell identity_two_cell(const Span& w) {
    Span2Cell c;
    c.dom = w;
    c.cod = w;
    c.phi.resize(w.middle.size);
    for (int i = 0; i < w.middle.size; ++i) c.phi[i] = i;
    return c;
}

Span2Cell two_cell_compose(const Span2Cell& f, const Span2Cell& g) {
    if (!(f.cod == g.dom)) throw std::runtime_error("two_cell_compose: middle spans disagree");
    Span2Cell c;
    c.dom = f.dom;
    c.cod = g.cod;
    c.phi.resize(f.phi.size());
    for (size_t i = 0; i < f.phi.size(); ++i) c.phi[i] = g.phi[f.phi[i]];
    c.validate();
    return c;
}

}  // namespace equik
