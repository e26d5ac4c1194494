#pragma once

#include <cgr/graph.hpp>

#include <compare>
#include <string>
#include <vector>

namespace cgr {

struct Term {
    std::string name;
    bool variable = false;

    friend auto operator<=>(const Term &, const Term &) = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    friend auto operator<=>(const Atom &, const Atom &) = default;
};

/// forall universal (premise -> exists existential (atoms)). Facts have an
/// empty universal prefix and premise.
struct FolFormula {
    std::vector<std::string> universal;
    std::vector<Atom> premise;
    std::vector<std::string> existential;
    std::vector<Atom> atoms;

    [[nodiscard]] auto is_fact() const -> bool { return universal.empty() && premise.empty(); }
};

/// Canonical ASCII form: atoms sorted with duplicates removed, `&` for
/// conjunction, `->` for implication, `true` for the empty conjunction.
auto to_text(const FolFormula & f) -> std::string;

/// One implication per pair of distinct comparable types, in canonical text order.
auto phi_support(const Support & s) -> std::vector<FolFormula>;

/// Variables x1, x2, ... name the generic concept nodes in identifier order.
auto phi_graph(const SimpleGraph & g) -> FolFormula;

/// Hypothesis variables are universal (x1, ...), conclusion-only variables
/// existential (y1, ...). An empty hypothesis gives the fact formula of the
/// conclusion.
auto phi_rule(const ColoredGraph & r) -> FolFormula;

/// The flat support of a set of existential formulas. Unary atoms over `top`
/// are read as term declarations rather than predicates.
auto vocabulary(const std::vector<FolFormula> & fs, const std::string & top = "Top") -> SupportPtr;

/// One generic or individual node per term, one relation node per atom. The
/// support must be flat and cover the vocabulary; a null support means
/// vocabulary({f}). Throws PreconditionError on rule formulas.
auto f2g(const FolFormula & f, SupportPtr support = nullptr) -> SimpleGraph;

/// The expansion onto a flat support: every concept node becomes a top node
/// carrying one unary relation per supertype of its type, and every relation
/// node is repeated once per supertype of its type.
auto expand(const SimpleGraph & g) -> SimpleGraph;

/// The flat support expand() uses for graphs over `s`.
auto expansion_support(const Support & s) -> SupportPtr;

auto g2f(const SimpleGraph & g) -> FolFormula;

} // namespace cgr
