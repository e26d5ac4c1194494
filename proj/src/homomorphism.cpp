#include <cgr/error.hpp>
#include <cgr/homomorphism.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cgr {

namespace {
    using Word = std::uint64_t;

    struct Bits {
        std::vector<Word> words;

        explicit Bits(int n = 0) : words(static_cast<std::size_t>((n + 63) / 64), 0) {}

        void set(int i) { words[static_cast<std::size_t>(i) / 64] |= Word{1} << (i % 64); }
        [[nodiscard]] auto test(int i) const -> bool { return (words[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1U; }
        [[nodiscard]] auto count() const -> int
        {
            int n = 0;
            for (auto w : words)
                n += std::popcount(w);
            return n;
        }
        [[nodiscard]] auto none() const -> bool
        {
            for (auto w : words)
                if (w)
                    return false;
            return true;
        }
        void intersect(const Bits & other)
        {
            for (std::size_t i = 0; i < words.size(); ++i)
                words[i] &= other.words[i];
        }
        template <typename F>
        void each(F && f) const
        {
            for (std::size_t i = 0; i < words.size(); ++i)
                for (Word w = words[i]; w; w &= w - 1)
                    f(static_cast<int>(i * 64) + std::countr_zero(w));
        }
    };

    struct State {
        std::vector<Bits> domains;
        std::vector<int> assigned;
    };

    class Solver {
    public:
        Solver(const SimpleGraph & q, const SimpleGraph & t, const PartialProjection * fixed) :
            q_(q),
            t_(t),
            fixed_(fixed)
        {
            if (! q.support().same_as(t.support()))
                throw SupportMismatch();
            build();
        }

        [[nodiscard]] auto feasible() const -> bool { return feasible_; }
        [[nodiscard]] auto initial() const -> const State & { return initial_; }

        /// Depth-first search from `s`; returns false once the visitor asks to stop.
        auto search(State & s, const ProjectionVisitor & visit) const -> bool
        {
            int v = choose(s);
            if (v < 0)
                return emit(s, visit);
            std::vector<int> values;
            s.domains[static_cast<std::size_t>(v)].each([&](int a) { values.push_back(a); });
            for (auto a : values) {
                State child = s;
                if (! assign(child, v, a))
                    continue;
                if (! search(child, visit))
                    return false;
            }
            return true;
        }

        /// Smallest-domain unassigned variable, ties by index; -1 when complete.
        [[nodiscard]] auto choose(const State & s) const -> int
        {
            int best = -1, best_size = 0;
            for (int v = 0; v < q_.concept_count(); ++v) {
                if (s.assigned[static_cast<std::size_t>(v)] >= 0)
                    continue;
                int size = s.domains[static_cast<std::size_t>(v)].count();
                if (best < 0 || size < best_size) {
                    best = v;
                    best_size = size;
                }
            }
            return best;
        }

        /// Assigns v = a and forward-checks every relation touching v.
        auto assign(State & s, int v, int a) const -> bool
        {
            s.assigned[static_cast<std::size_t>(v)] = a;
            Bits single(t_.concept_count());
            single.set(a);
            s.domains[static_cast<std::size_t>(v)] = single;

            std::vector<int> local(static_cast<std::size_t>(q_.concept_count()), -1);
            for (auto [qr, pos] : q_.incidence(v)) {
                auto & qargs = q_.relation_at(qr).args;
                std::vector<Bits> support;
                std::vector<int> vars;
                for (auto x : qargs)
                    if (s.assigned[static_cast<std::size_t>(x)] < 0 && std::find(vars.begin(), vars.end(), x) == vars.end())
                        vars.push_back(x);
                support.assign(vars.size(), Bits(t_.concept_count()));

                bool any = false;
                for (auto [tr, tpos] : t_.incidence(a)) {
                    if (tpos != pos || ! candidate_[static_cast<std::size_t>(qr)].test(tr))
                        continue;
                    auto & targs = t_.relation_at(tr).args;
                    bool ok = true;
                    for (auto x : vars)
                        local[static_cast<std::size_t>(x)] = -1;
                    for (std::size_t j = 0; j < qargs.size() && ok; ++j) {
                        auto x = static_cast<std::size_t>(qargs[j]);
                        if (s.assigned[x] >= 0)
                            ok = s.assigned[x] == targs[j];
                        else if (local[x] >= 0)
                            ok = local[x] == targs[j];
                        else if (s.domains[x].test(targs[j]))
                            local[x] = targs[j];
                        else
                            ok = false;
                    }
                    if (! ok)
                        continue;
                    any = true;
                    for (std::size_t i = 0; i < vars.size(); ++i)
                        support[i].set(local[static_cast<std::size_t>(vars[i])]);
                }
                if (! any)
                    return false;
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    auto & d = s.domains[static_cast<std::size_t>(vars[i])];
                    d.intersect(support[i]);
                    if (d.none())
                        return false;
                }
            }
            return true;
        }

    private:
        void build()
        {
            auto & sup = q_.support();
            int n = q_.concept_count(), m = t_.concept_count();
            initial_.assigned.assign(static_cast<std::size_t>(n), -1);
            initial_.domains.assign(static_cast<std::size_t>(n), Bits(m));

            candidate_.assign(static_cast<std::size_t>(q_.relation_count()), Bits(t_.relation_count()));
            for (int qr = 0; qr < q_.relation_count(); ++qr) {
                int pinned = fixed_ ? fixed_->relation_map[static_cast<std::size_t>(qr)] : -1;
                for (int tr = 0; tr < t_.relation_count(); ++tr) {
                    if (pinned >= 0 && tr != pinned)
                        continue;
                    if (sup.leq_relation(t_.relation_at(tr).type, q_.relation_at(qr).type))
                        candidate_[static_cast<std::size_t>(qr)].set(tr);
                }
            }

            for (int c = 0; c < n; ++c) {
                auto & d = initial_.domains[static_cast<std::size_t>(c)];
                int pinned = fixed_ ? fixed_->concept_map[static_cast<std::size_t>(c)] : -1;
                for (int x = 0; x < m; ++x)
                    if ((pinned < 0 || x == pinned) && sup.leq_label(t_.concept_at(x).label, q_.concept_at(c).label))
                        d.set(x);
                // each incident relation needs a compatible target relation at the same position
                for (auto [qr, pos] : q_.incidence(c)) {
                    Bits seen(m);
                    candidate_[static_cast<std::size_t>(qr)].each(
                        [&](int tr) { seen.set(t_.relation_at(tr).args[static_cast<std::size_t>(pos)]); });
                    d.intersect(seen);
                }
                if (d.none())
                    feasible_ = false;
            }
        }

        auto emit(const State & s, const ProjectionVisitor & visit) const -> bool
        {
            // relation images: every compatible target relation with exactly the
            // mapped arguments; branch over twins
            std::vector<std::vector<int>> images(static_cast<std::size_t>(q_.relation_count()));
            for (int qr = 0; qr < q_.relation_count(); ++qr) {
                auto & qargs = q_.relation_at(qr).args;
                auto first = s.assigned[static_cast<std::size_t>(qargs[0])];
                for (auto [tr, tpos] : t_.incidence(first)) {
                    if (tpos != 0 || ! candidate_[static_cast<std::size_t>(qr)].test(tr))
                        continue;
                    auto & targs = t_.relation_at(tr).args;
                    bool ok = true;
                    for (std::size_t j = 0; j < qargs.size() && ok; ++j)
                        ok = targs[j] == s.assigned[static_cast<std::size_t>(qargs[j])];
                    if (ok)
                        images[static_cast<std::size_t>(qr)].push_back(tr);
                }
                if (images[static_cast<std::size_t>(qr)].empty())
                    return true;
                std::sort(images[static_cast<std::size_t>(qr)].begin(), images[static_cast<std::size_t>(qr)].end());
            }

            Projection p{s.assigned, std::vector<int>(static_cast<std::size_t>(q_.relation_count()), -1)};
            std::vector<std::size_t> choice(images.size(), 0);
            while (true) {
                for (std::size_t r = 0; r < images.size(); ++r)
                    p.relation_map[r] = images[r][choice[r]];
                if (! visit(p))
                    return false;
                std::size_t r = images.size();
                while (r > 0) {
                    --r;
                    if (++choice[r] < images[r].size())
                        break;
                    choice[r] = 0;
                    if (r == 0)
                        return true;
                }
                if (images.empty())
                    return true;
            }
        }

        const SimpleGraph & q_;
        const SimpleGraph & t_;
        const PartialProjection * fixed_;
        State initial_;
        std::vector<Bits> candidate_;
        bool feasible_ = true;
    };

    auto run_serial(const Solver & solver, std::size_t limit) -> ProjectionSet
    {
        ProjectionSet result;
        if (! solver.feasible())
            return result;
        State s = solver.initial();
        solver.search(s, [&](const Projection & p) {
            if (result.projections.size() == limit) {
                result.truncated = true;
                return false;
            }
            result.projections.push_back(p);
            return true;
        });
        return result;
    }

    auto run_parallel(const Solver & solver, std::size_t limit) -> ProjectionSet
    {
        ProjectionSet result;
        if (! solver.feasible())
            return result;
        State root = solver.initial();
        int v = solver.choose(root);
        if (v < 0)
            return run_serial(solver, limit);

        std::vector<int> values;
        root.domains[static_cast<std::size_t>(v)].each([&](int a) { values.push_back(a); });
        std::vector<ProjectionSet> branches(values.size());

#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < values.size(); ++i) {
            State child = root;
            if (! solver.assign(child, v, values[i]))
                continue;
            auto & out = branches[i];
            solver.search(child, [&](const Projection & p) {
                if (out.projections.size() == limit) {
                    out.truncated = true;
                    return false;
                }
                out.projections.push_back(p);
                return true;
            });
        }

        for (auto & b : branches) {
            for (auto & p : b.projections) {
                if (result.projections.size() == limit) {
                    result.truncated = true;
                    return result;
                }
                result.projections.push_back(std::move(p));
            }
            if (b.truncated) {
                result.truncated = true;
                return result;
            }
        }
        return result;
    }
}

auto is_projection(const SimpleGraph & query, const SimpleGraph & target, const Projection & p) -> bool
{
    if (! query.support().same_as(target.support()))
        throw SupportMismatch();
    if (p.concept_map.size() != static_cast<std::size_t>(query.concept_count())
        || p.relation_map.size() != static_cast<std::size_t>(query.relation_count()))
        return false;
    auto & sup = query.support();
    for (int c = 0; c < query.concept_count(); ++c) {
        auto x = p.concept_map[static_cast<std::size_t>(c)];
        if (x < 0)
            continue;
        if (x >= target.concept_count() || ! sup.leq_label(target.concept_at(x).label, query.concept_at(c).label))
            return false;
    }
    for (int r = 0; r < query.relation_count(); ++r) {
        auto y = p.relation_map[static_cast<std::size_t>(r)];
        if (y < 0)
            continue;
        if (y >= target.relation_count() || ! sup.leq_relation(target.relation_at(y).type, query.relation_at(r).type))
            return false;
        auto & qargs = query.relation_at(r).args;
        auto & targs = target.relation_at(y).args;
        for (std::size_t j = 0; j < qargs.size(); ++j) {
            auto image = p.concept_map[static_cast<std::size_t>(qargs[j])];
            if (image >= 0 && image != targs[j])
                return false;
        }
    }
    return true;
}

auto exists_projection(const SimpleGraph & query, const SimpleGraph & target) -> bool
{
    return find_projection(query, target).has_value();
}

auto find_projection(const SimpleGraph & query, const SimpleGraph & target) -> std::optional<Projection>
{
    auto set = enumerate_projections_serial(query, target, 1);
    if (set.projections.empty())
        return std::nullopt;
    return set.projections.front();
}

auto enumerate_projections(const SimpleGraph & query, const SimpleGraph & target, SearchOptions options) -> ProjectionSet
{
    Solver solver(query, target, nullptr);
    return options.parallel ? run_parallel(solver, options.limit) : run_serial(solver, options.limit);
}

auto enumerate_projections_serial(const SimpleGraph & query, const SimpleGraph & target, std::size_t limit) -> ProjectionSet
{
    Solver solver(query, target, nullptr);
    return run_serial(solver, limit);
}

void for_each_projection(const SimpleGraph & query, const SimpleGraph & target, const PartialProjection * fixed,
    const ProjectionVisitor & visit)
{
    Solver solver(query, target, fixed);
    if (! solver.feasible())
        return;
    State s = solver.initial();
    solver.search(s, visit);
}

auto extend_projection(const SimpleGraph & whole, const NodeSet & domain, const PartialProjection & partial,
    const SimpleGraph & target, SearchOptions options) -> ProjectionSet
{
    if (! whole.support().same_as(target.support()))
        throw SupportMismatch();
    if (partial.concept_map.size() != static_cast<std::size_t>(whole.concept_count())
        || partial.relation_map.size() != static_cast<std::size_t>(whole.relation_count())
        || domain.concepts.size() != partial.concept_map.size() || domain.relations.size() != partial.relation_map.size())
        throw PreconditionError("partial projection does not match the graph");

    Projection fixed{std::vector<int>(partial.concept_map.size(), -1), std::vector<int>(partial.relation_map.size(), -1)};
    for (std::size_t c = 0; c < fixed.concept_map.size(); ++c)
        if (domain.concepts[c]) {
            if (partial.concept_map[c] < 0)
                throw PreconditionError("partial projection undefined on concept node '" + whole.concept_at(static_cast<int>(c)).id + "'");
            fixed.concept_map[c] = partial.concept_map[c];
        }
    for (std::size_t r = 0; r < fixed.relation_map.size(); ++r)
        if (domain.relations[r]) {
            if (partial.relation_map[r] < 0)
                throw PreconditionError("partial projection undefined on relation node '" + whole.relation_at(static_cast<int>(r)).id + "'");
            for (auto a : whole.relation_at(static_cast<int>(r)).args)
                if (! domain.concepts[static_cast<std::size_t>(a)])
                    throw PreconditionError("restriction domain is not a subgraph");
            fixed.relation_map[r] = partial.relation_map[r];
        }
    if (! is_projection(whole, target, fixed))
        throw PreconditionError("partial mapping is not a projection of the restricted subgraph");

    Solver solver(whole, target, &fixed);
    return run_serial(solver, options.limit);
}

auto identity_projection(const SimpleGraph & g) -> Projection
{
    Projection p;
    for (int c = 0; c < g.concept_count(); ++c)
        p.concept_map.push_back(c);
    for (int r = 0; r < g.relation_count(); ++r)
        p.relation_map.push_back(r);
    return p;
}

auto compose(const Projection & first, const Projection & second) -> Projection
{
    Projection p;
    for (auto c : first.concept_map)
        p.concept_map.push_back(c < 0 ? -1 : second.concept_map[static_cast<std::size_t>(c)]);
    for (auto r : first.relation_map)
        p.relation_map.push_back(r < 0 ? -1 : second.relation_map[static_cast<std::size_t>(r)]);
    return p;
}

} // namespace cgr
