/*
 * Spans of G-sets over G/H x G/K: the 1- and 2-cells of the Burnside
 * 2-category, with strictly associative composition via the canonical
 * pullbacks, a formal unit 1_H, coproducts, and the orbit normal form.
 */
#pragma once

#include "equik/group.hpp"
#include "equik/gset.hpp"

#include <vector>

namespace equik {

struct Span {
    LatticePtr lat;
    int src = -1, dst = -1;  // subgroup indices H, K
    bool unit = false;       // formal 1_H; middle data empty when set
    GSet middle;
    GMap r, t;  // r: middle -> G/H,  t: middle -> G/K

    void validate() const;
    bool operator==(const Span& o) const;
};

Span unit_span(LatticePtr lat, int h);
Span make_span(LatticePtr lat, int h, int k, const GSet& middle, const std::vector<int>& r_img,
               const std::vector<int>& t_img);
// [G/K <- G/K -> G/H], the transfer 1-cell t^H_K for K <= H
Span transfer_span(LatticePtr lat, int k, int h);
// [G/H <- G/K -> G/K], the restriction 1-cell r^H_K for K <= H
Span restriction_span(LatticePtr lat, int h, int k);
// [G/H <- G/H -> G/H^g], the conjugation 1-cell
Span conjugation_span(LatticePtr lat, int h, int g);
// identity span with materialized middle G/H (not the formal unit)
Span identity_span(LatticePtr lat, int h);

Span compose_spans(const Span& w1, const Span& w2);  // w1: H->K, w2: K->L
Span span_coproduct(const Span& w1, const Span& w2);

struct SpanNormalForm {
    struct Triple {
        std::vector<int> orbit;  // middle element ids, ascending
        int min_elt = -1;        // X^e: least element with r = eH
        int stab = -1;           // subgroup index of its stabilizer L_i
        int y = 0;               // least group element with t(X^e) = y K
    };
    std::vector<Triple> items;  // ordered by min_elt
};
SpanNormalForm span_normal_form(const Span& w);

struct Span2Cell {
    Span dom, cod;
    std::vector<int> phi;  // middle map

    void validate() const;  // equivariance and both leg triangles
};

Span2Cell identity_two_cell(const Span& w);
Span2Cell two_cell_compose(const Span2Cell& f, const Span2Cell& g);  // g after f

}  // namespace equik
