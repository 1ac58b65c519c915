#pragma once

// Independent re-checking of the evidence objects found in reports.
//
// Every witness is a JSON object {"kind": ..., ...} whose modules are given
// explicitly as {"dims", "arrows"} over the algebra of the check it belongs
// to, and maps as {"blocks"}. Recognised kinds:
//
//   ext               m, n, degree, dim: dim Ext^degree(m, n) = dim.
//   orthogonal_gap    module, side, orthogonal_to, excluded_from: the
//                     (indecomposable) module is Ext^1-orthogonal to every
//                     listed module on the given side yet isomorphic to none
//                     of excluded_from.
//   conflation        left, mid, right, incl, proj, claims[, hom_onto]: an
//                     exact sequence whose terms satisfy every Ext claim;
//                     hom_onto {map: restriction | extension, against} asks
//                     Hom(mid, Y) -> Hom(left, Y) (resp. Hom(X, mid) ->
//                     Hom(X, right)) to be onto for the listed modules.
//   sequence          terms, maps, claims: an exact sequence
//                     t0 >-> t1 -> ... ->> tk; claims name terms "t<i>".
//   thickness         conflation fields plus class, outside: two terms lie
//                     in add(class) and the named one does not.
//   class_difference  module, lhs, rhs, in_lhs, in_rhs: membership of the
//                     module in add(lhs) and add(rhs) is as stated and
//                     differs.
//
// An Ext claim {term, direction, degree, against, expect_zero} asks
// Ext^degree(term, Z) ("from") or Ext^degree(Z, term) ("into") to vanish
// for all Z in against, or to be nonzero for some Z when expect_zero is
// false. Ext is recomputed through minimal injective coresolutions, which
// is not the route used to produce the reports.

#include <cstddef>
#include <string>
#include <vector>

#include "cotlab/bqa.hpp"

namespace cotlab::cli {

using bqa::Json;

struct WitnessCheck {
  bool ok = true;
  std::string kind;
  std::string message;
};

bool is_witness(const Json& j);

// Never throws on malformed witnesses; they are reported as not ok.
WitnessCheck verify_witness(const bqa::AlgebraPtr& alg, const Json& w);

struct BatchCheck {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Every witness anywhere inside `j`.
BatchCheck verify_all(const bqa::AlgebraPtr& alg, const Json& j);

// A report ("schema": "cotlab-report/1"), or a file of the form
// {"algebra": ..., "witness": {...}} / {"algebra": ..., "witnesses": [...]}.
// Throws MalformedInput on anything else.
BatchCheck verify_document(const Json& doc);

}  // namespace cotlab::cli
