#pragma once

#include "qrw/graded.hpp"
#include "qrw/qtrs.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrw::systems {

/// Zero, successor and addition with successor deletion at cost 1.
RewriteSystem make_nat();
/// S^n(Z)
Term nat_code(unsigned n);

enum class DnaVariant { Levenshtein, Hamming, EigenMcCaskill };
RewriteSystem make_dna(DnaVariant variant = DnaVariant::Levenshtein);
/// "AGT" becomes A(G(T(nil))).
Term dna_term(std::string_view bases);

/// {0, 1/4, 1/3, 1/2, 2/3, 3/4, 1}
ParamGrid default_barycentric_grid();
RewriteSystem make_barycentric(ParamGrid grid = default_barycentric_grid());

/// Application is the infix symbol "."; these helpers build left-nested applications.
Term ap(const Term& f, const Term& x);
Term ap(std::initializer_list<Term> spine);
Term constant(const std::string& name);

RewriteSystem make_bck();
/// Adds Z, S, A and optionally the duplicating combinator W·x·y ↦₀ x·y·y.
RewriteSystem make_bck_nat(bool with_w = false);
/// S·(S·(…Z))
Term comb_code(unsigned n);

/// {0, 1, 2, 3}
ParamGrid default_index_grid();
/// Write operations w_n; the terminating variant only lowers counters.
RewriteSystem make_ticking(bool terminating = false, ParamGrid grid = default_index_grid());
RewriteSystem make_tick_simple();
RewriteSystem make_semilattice();

/// B, C, K, I, D, delta_{n,m}, F_n, W_{n,m} and !_n, with !_n graded by n.
GradedSystem make_graded_combinators(ParamGrid grid = default_index_grid());
/// +_e graded by (e, 1-e); projection, commutativity and associativity only.
GradedSystem make_graded_barycentric(ParamGrid grid = default_barycentric_grid());

/// f(x,x) ↦₀ x and e ↦₁ i.
RewriteSystem make_linearity_counterexample();

struct CatalogEntry {
    std::string name;
    std::string description;
};
std::vector<CatalogEntry> catalog();
/// Plain systems by catalog name; graded entries return their underlying system.
RewriteSystem by_name(const std::string& name);
std::optional<GradedSystem> graded_by_name(const std::string& name);

std::size_t oracle_levenshtein(std::string_view s, std::string_view t);
std::optional<std::size_t> oracle_hamming(std::string_view s, std::string_view t);
unsigned oracle_abs_diff(unsigned n, unsigned m);

}  // namespace qrw::systems
