#pragma once

#include <cgr/constraints.hpp>
#include <cgr/kb.hpp>

#include <random>
#include <string>
#include <vector>

namespace cgr {

struct Literal {
    int var = 0;
    bool positive = true;
};

/// A CNF with at most three literals per clause and no variable twice in a
/// clause. `block[v]` places variable v in X1, X2, ... (0-based); empty
/// when no partition is given.
struct CnfFormula {
    std::vector<std::string> names;
    std::vector<std::vector<Literal>> clauses;
    std::vector<int> block;

    [[nodiscard]] auto variables() const -> int { return static_cast<int>(names.size()); }
};

/// Throws ValidationError listing every malformed clause or partition entry.
/// `blocks` is the number of partition blocks required (0 for none).
void validate(const CnfFormula & f, int blocks = 0);

/// Finite-domain constraint network. Uncontrollable variables form the set
/// Delta of a mixed network.
struct MixedCsp {
    struct Variable {
        std::string name;
        std::vector<std::string> domain;
        bool uncontrollable = false;
    };
    struct Relation {
        std::string name;
        std::vector<int> scope;
        /// Allowed tuples as domain indices, one per scope position.
        std::vector<std::vector<int>> tuples;
    };
    std::vector<Variable> variables;
    std::vector<Relation> constraints;
};

void validate(const MixedCsp & p);

struct SemiThueSystem {
    std::vector<std::pair<std::string, std::string>> rules;
    std::string source;
    std::string target;
};

void validate(const SemiThueSystem & s);

struct ProjectionInstance {
    SimpleGraph query;
    SimpleGraph target;
};

struct ConsistencyInstance {
    SimpleGraph target;
    Constraint constraint;
};

struct DeductionInstance {
    KnowledgeBase kb;
    SimpleGraph goal;
};

/// Q(f) projects into G(f) iff f is satisfiable.
auto gen_sat3_projection(const CnfFormula & f) -> ProjectionInstance;

/// G(f) satisfies C(f) iff every valuation of block 0 extends to a model
/// through block 1.
auto gen_sat3_2c_sgc(const CnfFormula & f) -> ConsistencyInstance;

/// The goal is SEC-deducible iff some valuation of block 0 makes every
/// valuation of block 1 extend to a model through block 2.
auto gen_sat3_3_sec(const CnfFormula & f) -> DeductionInstance;

/// The goal is SR-deducible iff the target word is reachable from the source.
auto gen_word_problem_sr(const SemiThueSystem & s) -> DeductionInstance;

/// The goal is SEC-deducible iff g violates c. Throws PreconditionError when
/// c has no frontier or a frontier larger than the maximum arity.
auto gen_sgc_to_sec(const SimpleGraph & g, const Constraint & c) -> DeductionInstance;

/// Query projects into target iff the network is satisfiable. Throws
/// PreconditionError on uncontrollable variables.
auto csp_to_projection(const MixedCsp & p) -> ProjectionInstance;

/// The target satisfies the constraint iff every assignment of Delta allowed
/// by the constraints inside Delta extends to a solution.
auto mixed_to_sgc(const MixedCsp & p) -> ConsistencyInstance;

/// Random clauses of 1 to 3 distinct variables; with `blocks` > 0 variables
/// are dealt round-robin into that many blocks.
auto random_cnf(std::mt19937_64 & rng, int variables, int clauses, int blocks = 0) -> CnfFormula;

/// Random network with unary and binary constraints.
auto random_csp(std::mt19937_64 & rng, int variables, int max_domain, int constraints, int uncontrollable = 0)
    -> MixedCsp;

auto random_semi_thue(std::mt19937_64 & rng, int alphabet, int rules, int max_length) -> SemiThueSystem;

} // namespace cgr
