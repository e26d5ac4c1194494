#pragma once

// Worked examples shared by the unit tests and the acceptance binary.

#include <cgr/kb_io.hpp>

#include <string>

namespace cgr::fixture {

/// Parses data/<name>.kb from the source tree.
auto load(const std::string & name) -> ParsedKb;

/// Flat vocabulary {r, s, u}/2 with constant a. Both graphs carry two nodes
/// for a and differ in which of them s points to.
struct NormalFormPair {
    SupportPtr support;
    SimpleGraph g;
    SimpleGraph h;
};
auto normal_form_pair() -> NormalFormPair;

/// A person in an office, and the constraint that every person has an office.
struct OfficeConstraint {
    KnowledgeBase kb;
    SimpleGraph trigger;
};
auto person_in_office() -> OfficeConstraint;

/// [Researcher:K] with the rule that every researcher is member of a project.
auto researcher_project() -> ParsedKb;

/// The office graph of office_graph.kb extended with a head of group and two
/// secretaries, rules R1 and R2 and the closeness constraint C2.
auto offices_with_staff() -> ParsedKb;

} // namespace cgr::fixture
