#include "fixtures.hpp"

#include <cgr/error.hpp>

#include <fstream>
#include <sstream>

namespace cgr::fixture {

auto load(const std::string & name) -> ParsedKb
{
    std::ifstream in(std::string(CGR_DATA_DIR) + "/" + name + ".kb");
    if (! in)
        throw Error("cannot open fixture " + name);
    std::stringstream text;
    text << in.rdbuf();
    return parse_kb(text.str());
}

auto normal_form_pair() -> NormalFormPair
{
    auto parsed = parse_kb(R"(
[support]
concept t
relation r/2
relation s/2
relation u/2
individual a : t

[fact]
x : t
a1 : t = a
a2 : t = a
ra : r(x, a1)
sa : s(x, a1)
ua : u(x, a2)
)");
    auto s = parsed.kb.support;
    auto g = parse_graph(R"(
x : t
a1 : t = a
a2 : t = a
ra : r(x, a1)
sa : s(x, a1)
ua : u(x, a2)
)", s);
    auto h = parse_graph(R"(
x : t
a1 : t = a
a2 : t = a
ra : r(x, a1)
sa : s(x, a2)
ua : u(x, a2)
)", s);
    return {s, std::move(g), std::move(h)};
}

auto person_in_office() -> OfficeConstraint
{
    auto parsed = parse_kb(R"(
[support]
concept Top
concept Person < Top
concept Office < Top
relation in/2

[fact]
p : Person
o : Office
i : in(p, o)

[constraint C positive]
trigger:
  x : Person
must:
  y : Office
  xy : in(x, y)
)");
    auto trigger = parse_graph("t : Person\n", parsed.kb.support);
    return {std::move(parsed.kb), std::move(trigger)};
}

auto researcher_project() -> ParsedKb
{
    return parse_kb(R"(
[support]
concept Top
concept Researcher < Top
concept Project < Top
relation member/2
individual K : Researcher

[fact]
k : Researcher = K

[rule R3]
hyp:
  x : Researcher
con:
  y : Project
  xy : member(x, y)

[query]
q : Researcher = K
p : Project
m : member(q, p)
)");
}

auto offices_with_staff() -> ParsedKb
{
    return parse_kb(R"(
[support]
concept Top
concept Person < Top
concept Secretary < Person
concept HeadOfGroup < Person
concept Office < Top
relation in/2
relation near/2
relation adjoin/2 < near/2
individual L : HeadOfGroup
individual H : Secretary
individual P : Secretary
individual #1 : Office
individual #2 : Office
individual #3 : Office
individual #4 : Office

[fact]
o1 : Office = #1
o2 : Office = #2
o3 : Office = #3
o4 : Office = #4
a12 : adjoin(o1, o2)
a23 : adjoin(o2, o3)
a34 : adjoin(o3, o4)
l : HeadOfGroup = L
h : Secretary = H
p : Secretary = P
il : in(l, o1)
ih : in(h, o2)
ip : in(p, o3)

[rule R1]
hyp:
  x : Office
  y : Office
  xy : near(x, y)
con:
  yx : near(y, x)

[rule R2]
hyp:
  x : Office
  y : Office
  z : Office
  xy : adjoin(x, y)
  yz : adjoin(y, z)
con:
  xz : near(x, z)

[constraint C2 positive]
trigger:
  g : HeadOfGroup
  s : Secretary
  og : Office
  os : Office
  gin : in(g, og)
  sin : in(s, os)
must:
  n : near(og, os)
)");
}

} // namespace cgr::fixture
