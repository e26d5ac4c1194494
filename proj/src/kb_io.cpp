#include <cgr/error.hpp>
#include <cgr/kb_io.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace cgr {

namespace {
    using json = nlohmann::ordered_json;

    struct Token {
        std::string text;
        std::size_t column = 0;
        bool name = true;
    };

    struct SourceLine {
        std::size_t number = 0;
        std::vector<Token> tokens;
    };

    struct Section {
        std::size_t line = 0;
        std::string kind;
        std::vector<std::string> args;
        std::vector<SourceLine> body;
    };

    constexpr std::string_view punctuation = ":,()<=/[]";

    // `#` opens a comment at the start of a line, or after whitespace when
    // followed by whitespace or the end of the line.
    auto strip_comment(std::string_view line) -> std::string_view
    {
        auto first = line.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && line[first] == '#')
            return line.substr(0, first);
        for (std::size_t i = 1; i < line.size(); ++i) {
            if (line[i] != '#' || ! std::isspace(static_cast<unsigned char>(line[i - 1])))
                continue;
            if (i + 1 == line.size() || std::isspace(static_cast<unsigned char>(line[i + 1])))
                return line.substr(0, i);
        }
        return line;
    }

    auto tokenize(std::string_view line) -> std::vector<Token>
    {
        std::vector<Token> tokens;
        std::size_t i = 0;
        while (i < line.size()) {
            auto ch = line[i];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++i;
                continue;
            }
            if (punctuation.find(ch) != std::string_view::npos) {
                tokens.push_back({std::string(1, ch), i + 1, false});
                ++i;
                continue;
            }
            auto start = i;
            while (i < line.size() && ! std::isspace(static_cast<unsigned char>(line[i]))
                && punctuation.find(line[i]) == std::string_view::npos)
                ++i;
            tokens.push_back({std::string(line.substr(start, i - start)), start + 1, true});
        }
        return tokens;
    }

    auto split_lines(std::string_view text) -> std::vector<SourceLine>
    {
        std::vector<SourceLine> lines;
        std::size_t number = 0;
        while (! text.empty() || number == 0) {
            ++number;
            auto end = text.find('\n');
            auto raw = text.substr(0, end);
            text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
            auto tokens = tokenize(strip_comment(raw));
            if (! tokens.empty())
                lines.push_back({number, std::move(tokens)});
            if (text.empty())
                break;
        }
        return lines;
    }

    // Cursor over one line's tokens.
    class Reader {
    public:
        explicit Reader(const SourceLine & line) : line_(line) {}

        [[nodiscard]] auto done() const -> bool { return pos_ == line_.tokens.size(); }
        [[nodiscard]] auto peek(std::string_view punct) const -> bool
        {
            return ! done() && ! line_.tokens[pos_].name && line_.tokens[pos_].text == punct;
        }

        auto name(const std::string & what) -> std::string
        {
            if (done() || ! line_.tokens[pos_].name)
                fail("expected " + what);
            return line_.tokens[pos_++].text;
        }

        void expect(std::string_view punct)
        {
            if (! peek(punct))
                fail("expected '" + std::string(punct) + "'");
            ++pos_;
        }

        auto accept(std::string_view punct) -> bool
        {
            if (! peek(punct))
                return false;
            ++pos_;
            return true;
        }

        auto number(const std::string & what) -> int
        {
            auto column = done() ? 0 : line_.tokens[pos_].column;
            auto text = name(what);
            if (text.empty() || text.size() > 6 || ! std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isdigit(ch); }))
                throw ParseError(line_.number, column, "expected " + what);
            return std::stoi(text);
        }

        void end()
        {
            if (! done())
                fail("unexpected '" + line_.tokens[pos_].text + "'");
        }

        [[noreturn]] void fail(const std::string & message) const
        {
            auto column = done() ? (line_.tokens.empty() ? 1 : line_.tokens.back().column + line_.tokens.back().text.size())
                                 : line_.tokens[pos_].column;
            throw ParseError(line_.number, column, message);
        }

    private:
        const SourceLine & line_;
        std::size_t pos_ = 0;
    };

    auto split_sections(const std::vector<SourceLine> & lines) -> std::vector<Section>
    {
        std::vector<Section> sections;
        for (auto & line : lines) {
            if (line.tokens.front().name || line.tokens.front().text != "[") {
                if (sections.empty())
                    throw ParseError(line.number, line.tokens.front().column, "content outside of a section");
                sections.back().body.push_back(line);
                continue;
            }
            Reader r(line);
            r.expect("[");
            Section s;
            s.line = line.number;
            s.kind = r.name("section kind");
            while (! r.peek("]"))
                s.args.push_back(r.name("section argument or ']'"));
            r.expect("]");
            r.end();
            sections.push_back(std::move(s));
        }
        return sections;
    }

    auto section_name(const Section & s) -> std::string
    {
        std::string n = "[" + s.kind;
        for (auto & a : s.args)
            n += " " + a;
        return n + "]";
    }

    auto parse_support(const Section & s) -> SupportDeclarations
    {
        SupportDeclarations d;
        for (auto & line : s.body) {
            Reader r(line);
            auto keyword = r.name("'concept', 'relation', 'individual' or 'max_arity'");
            if (keyword == "concept") {
                SupportDeclarations::Concept c{r.name("concept type name"), {}};
                if (r.accept("<"))
                    do
                        c.parents.push_back(r.name("parent concept type"));
                    while (r.accept(","));
                d.concepts.push_back(std::move(c));
            }
            else if (keyword == "relation") {
                SupportDeclarations::Relation rel;
                rel.name = r.name("relation type name");
                r.expect("/");
                rel.arity = r.number("arity");
                if (r.accept("<")) {
                    do {
                        auto parent = r.name("parent relation type");
                        r.expect("/");
                        rel.parents.emplace_back(parent, r.number("arity"));
                    } while (r.accept(","));
                }
                d.relations.push_back(std::move(rel));
            }
            else if (keyword == "individual") {
                SupportDeclarations::Individual i;
                i.marker = r.name("marker");
                r.expect(":");
                i.type = r.name("concept type");
                d.individuals.push_back(std::move(i));
            }
            else if (keyword == "max_arity")
                d.max_arity = r.number("maximum arity");
            else
                throw ParseError(line.number, line.tokens.front().column, "unknown declaration '" + keyword + "'");
            r.end();
        }
        return d;
    }

    struct RawColored {
        RawGraph graph;
        std::vector<char> concept_color;
        std::vector<char> relation_color;
    };

    void graph_line(const SourceLine & line, RawColored & out, int color)
    {
        Reader r(line);
        auto id = r.name("node id");
        r.expect(":");
        auto type = r.name("type");
        if (r.accept("(")) {
            RawGraph::Relation rel{id, type, {}};
            if (! r.peek(")"))
                do
                    rel.args.push_back(r.name("argument node id"));
                while (r.accept(","));
            r.expect(")");
            r.end();
            out.graph.relations.push_back(std::move(rel));
            out.relation_color.push_back(static_cast<char>(color));
            return;
        }
        RawGraph::Concept c{id, type, {}};
        if (r.accept("="))
            c.marker = r.name("marker");
        r.end();
        out.graph.concepts.push_back(std::move(c));
        out.concept_color.push_back(static_cast<char>(color));
    }

    auto is_label(const SourceLine & line) -> bool
    {
        return line.tokens.size() == 2 && line.tokens[0].name && ! line.tokens[1].name && line.tokens[1].text == ":";
    }

    // A two-part section: lines under `first:` are colored 0, lines under one
    // of `second` are colored 1.
    auto parse_parts(const Section & s, const std::string & first, const std::vector<std::string> & second) -> RawColored
    {
        RawColored out;
        int color = -1;
        for (auto & line : s.body) {
            if (is_label(line)) {
                auto & label = line.tokens[0].text;
                if (color == -1 && label == first)
                    color = 0;
                else if (color == 0 && std::find(second.begin(), second.end(), label) != second.end())
                    color = 1;
                else
                    throw ParseError(line.number, line.tokens[0].column, "unexpected block '" + label + ":'");
                continue;
            }
            if (color == -1)
                throw ParseError(line.number, line.tokens.front().column, "expected '" + first + ":'");
            graph_line(line, out, color);
        }
        return out;
    }

    auto prefixed(const std::string & where, const ValidationError & e) -> std::vector<std::string>
    {
        std::vector<std::string> out;
        for (auto & d : e.diagnostics())
            out.push_back(where + ": " + d);
        return out;
    }

    auto print_support(const Support & s) -> std::string
    {
        std::string out = "[support]\n";
        auto & d = s.declarations();
        for (auto & c : d.concepts) {
            out += "concept " + c.name;
            for (std::size_t i = 0; i < c.parents.size(); ++i)
                out += (i ? ", " : " < ") + c.parents[i];
            out += "\n";
        }
        for (auto & r : d.relations) {
            out += "relation " + r.name + "/" + std::to_string(r.arity);
            for (std::size_t i = 0; i < r.parents.size(); ++i)
                out += (i ? ", " : " < ") + r.parents[i].first + "/" + std::to_string(r.parents[i].second);
            out += "\n";
        }
        for (auto & i : d.individuals)
            out += "individual " + i.marker + " : " + i.type + "\n";
        if (d.max_arity != SupportDeclarations{}.max_arity)
            out += "max_arity " + std::to_string(d.max_arity) + "\n";
        return out;
    }

    auto concept_line(const SimpleGraph & g, int c) -> std::string
    {
        auto & node = g.concept_at(c);
        auto line = node.id + " : " + g.support().concepts().name(node.label.type);
        if (! node.label.is_generic())
            line += " = " + g.support().marker_name(node.label.marker);
        return line + "\n";
    }

    auto relation_line(const SimpleGraph & g, int r) -> std::string
    {
        auto & node = g.relation_at(r);
        auto line = node.id + " : " + g.support().relations().name(node.type) + "(";
        for (std::size_t i = 0; i < node.args.size(); ++i)
            line += (i ? ", " : "") + g.concept_at(node.args[i]).id;
        return line + ")\n";
    }

    auto print_colored(const ColoredGraph & k, const std::string & first, const std::string & second) -> std::string
    {
        std::string out;
        for (int color : {0, 1}) {
            out += (color == 0 ? first : second) + ":\n";
            for (int c = 0; c < k.graph.concept_count(); ++c)
                if (k.concept_colored(c, color))
                    out += "  " + concept_line(k.graph, c);
            for (int r = 0; r < k.graph.relation_count(); ++r)
                if (k.relation_colored(r, color))
                    out += "  " + relation_line(k.graph, r);
        }
        return out;
    }

    auto node_map_json(const std::vector<std::pair<std::string, std::string>> & m) -> json
    {
        json j = json::object();
        for (auto & [from, to] : m)
            j[from] = to;
        return j;
    }

    auto node_map_from(const json & j) -> std::vector<std::pair<std::string, std::string>>
    {
        std::vector<std::pair<std::string, std::string>> m;
        for (auto & [from, to] : j.items())
            m.emplace_back(from, to.get<std::string>());
        return m;
    }
}

auto parse_kb(std::string_view text) -> ParsedKb
{
    auto sections = split_sections(split_lines(text));
    const Section * support_section = nullptr;
    const Section * query_section = nullptr;
    for (auto & s : sections) {
        if (s.kind == "support" || s.kind == "query") {
            auto & slot = s.kind == "support" ? support_section : query_section;
            if (slot)
                throw ParseError(s.line, 1, "second [" + s.kind + "] section");
            if (! s.args.empty())
                throw ParseError(s.line, 1, "[" + s.kind + "] takes no arguments");
            slot = &s;
        }
        else if (s.kind == "fact") {
            if (s.args.size() > 1)
                throw ParseError(s.line, 1, "[fact] takes at most an id");
        }
        else if (s.kind == "rule" || s.kind == "evolution") {
            if (s.args.size() != 1)
                throw ParseError(s.line, 1, "[" + s.kind + "] needs exactly one id");
        }
        else if (s.kind == "constraint") {
            if (s.args.size() != 2 || (s.args[1] != "positive" && s.args[1] != "negative"))
                throw ParseError(s.line, 1, "expected [constraint <id> positive|negative]");
        }
        else
            throw ParseError(s.line, 2, "unknown section '" + s.kind + "'");
    }
    if (! support_section)
        throw ParseError(1, 1, "missing [support] section");

    SupportPtr support;
    try {
        support = Support::validate(parse_support(*support_section));
    }
    catch (const ValidationError & e) {
        throw ValidationError(prefixed("[support]", e));
    }

    std::vector<std::string> diags;
    RawColored facts;
    std::vector<Rule> inference, evolution;
    std::vector<Constraint> constraints;
    std::optional<SimpleGraph> query;

    for (auto & s : sections) {
        try {
            if (s.kind == "fact") {
                for (auto & line : s.body)
                    graph_line(line, facts, 0);
            }
            else if (s.kind == "rule" || s.kind == "evolution") {
                auto raw = parse_parts(s, "hyp", {"con"});
                auto g = validate_graph(raw.graph, support);
                Rule rule(s.args[0], {std::move(g), raw.concept_color, raw.relation_color});
                (s.kind == "rule" ? inference : evolution).push_back(std::move(rule));
            }
            else if (s.kind == "constraint") {
                bool positive = s.args[1] == "positive";
                auto raw = parse_parts(s, "trigger", positive ? std::vector<std::string>{"must"} : std::vector<std::string>{"not"});
                auto g = validate_graph(raw.graph, support, true);
                constraints.emplace_back(s.args[0], ColoredGraph{std::move(g), raw.concept_color, raw.relation_color},
                    positive ? Polarity::positive : Polarity::negative);
            }
            else if (s.kind == "query") {
                RawColored raw;
                for (auto & line : s.body)
                    graph_line(line, raw, 0);
                query = validate_graph(raw.graph, support);
            }
        }
        catch (const ValidationError & e) {
            auto more = prefixed(section_name(s) + " at line " + std::to_string(s.line), e);
            diags.insert(diags.end(), more.begin(), more.end());
        }
    }

    SimpleGraph fact_graph(support);
    try {
        fact_graph = validate_graph(facts.graph, support);
    }
    catch (const ValidationError & e) {
        auto more = prefixed("[fact]", e);
        diags.insert(diags.end(), more.begin(), more.end());
    }
    if (! diags.empty())
        throw ValidationError(std::move(diags));

    return {make_kb(support, std::move(fact_graph), std::move(inference), std::move(evolution), std::move(constraints)),
        std::move(query)};
}

auto parse_graph(std::string_view text, SupportPtr support) -> SimpleGraph
{
    RawColored raw;
    for (auto & line : split_lines(text)) {
        if (! line.tokens.front().name && line.tokens.front().text == "[") {
            Reader r(line);
            r.expect("[");
            if (r.name("'query'") != "query")
                r.fail("only a [query] section is allowed here");
            r.expect("]");
            r.end();
            continue;
        }
        graph_line(line, raw, 0);
    }
    return validate_graph(raw.graph, std::move(support));
}

auto print_graph(const SimpleGraph & g) -> std::string
{
    std::string out;
    for (int c = 0; c < g.concept_count(); ++c)
        out += concept_line(g, c);
    for (int r = 0; r < g.relation_count(); ++r)
        out += relation_line(g, r);
    return out;
}

auto print_kb(const KnowledgeBase & kb, const std::optional<SimpleGraph> & query) -> std::string
{
    auto out = print_support(*kb.support);
    out += "\n[fact]\n" + print_graph(kb.facts);
    for (auto & r : kb.inference)
        out += "\n[rule " + r.id() + "]\n" + print_colored(r.body(), "hyp", "con");
    for (auto & r : kb.evolution)
        out += "\n[evolution " + r.id() + "]\n" + print_colored(r.body(), "hyp", "con");
    for (auto & c : kb.constraints) {
        bool positive = c.polarity() == Polarity::positive;
        out += "\n[constraint " + c.id() + (positive ? " positive" : " negative") + "]\n"
            + print_colored(c.body(), "trigger", positive ? "must" : "not");
    }
    if (query)
        out += "\n[query]\n" + print_graph(*query);
    return out;
}

auto verdict_to_json(const Verdict & v, int indent) -> std::string
{
    json j;
    j["schema"] = 1;
    j["outcome"] = to_string(v.outcome);
    j["budget_spent"] = v.budget_spent;
    if (! v.certificate)
        j["certificate"] = nullptr;
    else {
        auto & c = *v.certificate;
        json cert;
        json steps = json::array();
        for (auto & s : c.derivation)
            steps.push_back({{"rule", s.rule}, {"kind", s.kind == RuleKind::inference ? "inference" : "evolution"},
                {"node_map", node_map_json(s.node_map)}, {"fingerprint", s.fingerprint}});
        cert["derivation"] = steps;
        json projections = json::array();
        for (auto & p : c.projections)
            projections.push_back(node_map_json(p));
        cert["projections"] = projections;
        json violations = json::array();
        for (auto & x : c.violations)
            violations.push_back({{"constraint", x.constraint}, {"kind", x.kind == Polarity::positive ? "positive" : "negative"},
                {"node_map", node_map_json(x.node_map)}});
        cert["violations"] = violations;
        cert["worlds_explored"] = c.worlds_explored;
        cert["exhaustive"] = c.exhaustive;
        j["certificate"] = cert;
    }
    j["diagnostics"] = v.diagnostics;
    return j.dump(indent);
}

auto verdict_from_json(std::string_view text) -> Verdict
{
    try {
        auto j = json::parse(text);
        if (j.at("schema").get<int>() != 1)
            throw Error("unsupported verdict schema " + j.at("schema").dump());
        Verdict v;
        auto outcome = j.at("outcome").get<std::string>();
        if (outcome == "Proved")
            v.outcome = Outcome::proved;
        else if (outcome == "Refuted")
            v.outcome = Outcome::refuted;
        else if (outcome == "Unknown")
            v.outcome = Outcome::unknown;
        else
            throw Error("unknown outcome '" + outcome + "'");
        v.budget_spent = j.at("budget_spent").get<std::size_t>();
        auto & cj = j.at("certificate");
        if (! cj.is_null()) {
            Certificate c;
            for (auto & s : cj.at("derivation")) {
                auto kind = s.at("kind").get<std::string>();
                c.derivation.push_back({s.at("rule").get<std::string>(),
                    kind == "evolution" ? RuleKind::evolution : RuleKind::inference, node_map_from(s.at("node_map")),
                    s.at("fingerprint").get<std::uint64_t>()});
            }
            for (auto & p : cj.at("projections"))
                c.projections.push_back(node_map_from(p));
            for (auto & x : cj.at("violations")) {
                Violation viol;
                viol.constraint = x.at("constraint").get<std::string>();
                viol.kind = x.at("kind").get<std::string>() == "negative" ? Polarity::negative : Polarity::positive;
                viol.node_map = node_map_from(x.at("node_map"));
                c.violations.push_back(std::move(viol));
            }
            c.worlds_explored = cj.at("worlds_explored").get<std::size_t>();
            c.exhaustive = cj.at("exhaustive").get<bool>();
            v.certificate = std::move(c);
        }
        v.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
        return v;
    }
    catch (const nlohmann::json::exception & e) {
        throw Error(std::string("malformed verdict JSON: ") + e.what());
    }
}

} // namespace cgr
