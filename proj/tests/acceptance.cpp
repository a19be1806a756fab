// Runs the acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "bnf/bfstruct.hpp"
#include "bnf/builder.hpp"
#include "bnf/extlang.hpp"
#include "bnf/pi_oracle.hpp"
#include "bnf/scott.hpp"
#include "support/mutations.hpp"
#include "support/oracles.hpp"

using namespace bnf;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Counts checks and keeps the first failure.
struct Tally {
    long checks = 0;
    long failures = 0;
    std::string first;

    void expect(bool ok, const std::function<std::string()>& what)
    {
        ++checks;
        if (!ok && failures++ == 0)
            first = what();
    }

    Outcome outcome(const std::string& summary) const
    {
        if (failures == 0)
            return {true, summary + ", " + std::to_string(checks) + " checks"};
        return {false, std::to_string(failures) + " of " + std::to_string(checks) + " checks failed; first: " + first};
    }
};

std::string pair_text(const Structure& a, const Tuple& t)
{
    return "(" + std::to_string(a.size()) + "-element structure, " + (t.empty() ? "-" : format_tuple(t)) + ")";
}

// (member, tuple) for every tuple of length k over every member.
std::vector<std::pair<int, Tuple>> pairs_of(const std::vector<Structure>& members, int k)
{
    std::vector<std::pair<int, Tuple>> out;
    for (int i = 0; i < static_cast<int>(members.size()); ++i)
        for_each_tuple(members[static_cast<size_t>(i)].size(), k, [&](const Tuple& t) { out.push_back({i, t}); });
    return out;
}

std::vector<Structure> builtin_up_to(ClassKind kind, int max_size)
{
    std::vector<Structure> out;
    for (int n = 1; n <= max_size; ++n)
        for (auto& s : builtin_of_size(kind, n))
            out.push_back(std::move(s));
    return out;
}

constexpr ClassKind kBuiltins[] = {ClassKind::LinearOrders, ClassKind::EquivalenceStructures, ClassKind::Graphs};

// ---- 1: engine against the Pi-type oracle ----

Outcome oracle_equivalence()
{
    auto members = enumerate_class(ClassSpec::parse("linord:4"));
    PiOracle oracle(members);
    BfEngine engine;
    Tally t;
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k <= 2; ++k) {
            auto ps = pairs_of(members, k);
            for (const auto& [i, ta] : ps)
                for (const auto& [j, tb] : ps) {
                    const Structure &a = members[static_cast<size_t>(i)], &b = members[static_cast<size_t>(j)];
                    const bool e = engine.leq(a, ta, b, tb, n);
                    const bool o = oracle.included(a, ta, b, tb, n);
                    t.expect(e == o, [&] {
                        return pair_text(a, ta) + " vs " + pair_text(b, tb) + " at level " + std::to_string(n) +
                               ": engine " + std::to_string(e) + ", oracle " + std::to_string(o);
                    });
                }
        }
    return t.outcome("linear orders <= 4, tuples <= 2, levels 1..3");
}

// ---- 2: injective extensions against arbitrary extension tuples ----

Outcome injective_extensions()
{
    BfEngine engine;
    oracle::UnrestrictedLeq reference(4);
    Tally t;
    for (ClassKind kind : {ClassKind::LinearOrders, ClassKind::EquivalenceStructures}) {
        auto members = builtin_up_to(kind, 3);
        for (int n = 0; n <= 2; ++n)
            for (int k = 0; k <= 1; ++k) {
                auto ps = pairs_of(members, k);
                for (const auto& [i, ta] : ps)
                    for (const auto& [j, tb] : ps) {
                        const Structure &a = members[static_cast<size_t>(i)], &b = members[static_cast<size_t>(j)];
                        const bool e = engine.leq(a, ta, b, tb, n);
                        const bool r = reference(a, ta, b, tb, n);
                        t.expect(e == r, [&] {
                            return pair_text(a, ta) + " vs " + pair_text(b, tb) + " at level " + std::to_string(n);
                        });
                    }
            }
    }
    return t.outcome("linear orders and equivalence structures <= 3, levels 0..2");
}

// ---- 3: monotonicity, preorder laws, antisymmetry of the quotient ----

Outcome order_laws()
{
    auto members = enumerate_class(ClassSpec::parse("linord:4"));
    TypeCatalog cat(ClassSpec::parse("linord:4"));
    BfEngine& engine = cat.engine();
    Tally t;
    for (int k = 0; k <= 2; ++k) {
        auto ps = pairs_of(members, k);
        auto at = [&](size_t x) -> std::pair<const Structure&, const Tuple&> {
            return {members[static_cast<size_t>(ps[x].first)], ps[x].second};
        };
        for (int n = 1; n <= 3; ++n) {
            const size_t m = ps.size();
            std::vector<std::vector<bool>> leq(m, std::vector<bool>(m));
            for (size_t x = 0; x < m; ++x)
                for (size_t y = 0; y < m; ++y) {
                    auto [a, ta] = at(x);
                    auto [b, tb] = at(y);
                    leq[x][y] = engine.leq(a, ta, b, tb, n);
                    if (leq[x][y])
                        t.expect(engine.leq(a, ta, b, tb, n - 1), [&] {
                            return "level " + std::to_string(n) + " order not contained in level " +
                                   std::to_string(n - 1) + " at " + pair_text(a, ta) + ", " + pair_text(b, tb);
                        });
                }
            for (size_t x = 0; x < m; ++x) {
                t.expect(leq[x][x], [&] { return "not reflexive at " + pair_text(at(x).first, at(x).second); });
                for (size_t y = 0; y < m; ++y) {
                    if (!leq[x][y])
                        continue;
                    for (size_t z = 0; z < m; ++z)
                        if (leq[y][z])
                            t.expect(leq[x][z], [&] { return "not transitive at level " + std::to_string(n); });
                    // both ways iff the same class in the quotient
                    const bool same = cat.type_of(n, ps[x].first, ps[x].second) == cat.type_of(n, ps[y].first, ps[y].second);
                    t.expect(leq[y][x] == same, [&] {
                        return "quotient antisymmetry fails at level " + std::to_string(n) + " for " +
                               pair_text(at(x).first, at(x).second) + ", " + pair_text(at(y).first, at(y).second);
                    });
                }
            }
        }
    }
    return t.outcome("linear orders <= 4, tuples <= 2, levels 1..3");
}

// ---- 4: the order agrees with containment of ext sets ----

Outcome ext_characterization()
{
    TypeCatalog cat(ClassSpec::parse("linord:4"));
    Tally t;
    for (int gamma = 1; gamma <= 3; ++gamma)
        for (int k = 0; k <= 2; ++k) {
            const int count = cat.count_classes(gamma, k);
            for (int i = 0; i < count; ++i)
                for (int j = 0; j < count; ++j) {
                    const TypeRef s{gamma, k, i}, u{gamma, k, j};
                    t.expect(cat.ext_characterization_check(s, u, gamma),
                             [&] { return s.str() + " vs " + u.str() + " at level " + std::to_string(gamma); });
                }
        }
    return t.outcome("linear orders <= 4, levels 1..3, arities 0..2");
}

// ---- 5: equivalence at level |A|+|B| is isomorphism ----

Outcome isomorphism_level()
{
    BfEngine engine;
    Tally t;
    for (ClassKind kind : kBuiltins) {
        auto members = builtin_up_to(kind, 4);
        for (const Structure& a : members)
            for (const Structure& b : members) {
                const int n = a.size() + b.size();
                const bool eq = engine.compare(a, {}, b, {}, n) == Comparison::Equiv;
                t.expect(eq == isomorphic(a, b), [&] {
                    return std::to_string(a.size()) + "- and " + std::to_string(b.size()) +
                           "-element structures at level " + std::to_string(n);
                });
            }
    }
    return t.outcome("builtin classes <= 4");
}

// ---- 6: Scott ranks ----

Outcome scott_ranks()
{
    BfEngine engine;
    Tally t;
    for (ClassKind kind : kBuiltins) {
        auto members = builtin_up_to(kind, 4);
        for (const Structure& a : members) {
            ScottRankReport r = scott_rank(engine, a);
            int expected = 0;
            oracle::UnrestrictedLeq leq(a.size());
            for (const TupleRank& row : r.per_tuple) {
                const int o = oracle::orbit_rho(a, row.tuple, leq);
                expected = std::max(expected, o + 1);
                t.expect(row.rho == o, [&] {
                    return "rank of " + pair_text(a, row.tuple) + ": " + std::to_string(row.rho) + ", orbit oracle " +
                           std::to_string(o);
                });
            }
            t.expect(r.sr == expected, [&] { return "Scott rank of a " + std::to_string(a.size()) + "-element structure"; });
            // SR(A)+2 equivalence pins down A
            for (const Structure& b : members)
                if (engine.compare(a, {}, b, {}, r.sr + 2) == Comparison::Equiv)
                    t.expect(isomorphic(a, b), [&] { return "level SR+2 equivalence without isomorphism"; });
        }
    }
    ScottRankReport two = scott_rank(engine, linear_order(2));
    t.expect(two.sr == 2, [&] { return "SR of the 2-element order is " + std::to_string(two.sr); });
    return t.outcome("builtin classes <= 4");
}

// ---- 7: type counts ----

Outcome type_counts()
{
    Tally t;
    int first = -1;
    for (int run = 0; run < 3; ++run) {
        TypeCatalog cat(ClassSpec::parse("linord:3"));
        const int c = cat.count_classes(1, 0);
        t.expect(c == 3, [&] { return "count " + std::to_string(c) + ", expected 3"; });
        if (first < 0)
            first = c;
        t.expect(c == first, [&] { return "count changed between runs"; });
    }
    return t.outcome("linear orders <= 3, level 1, arity 0, three runs");
}

std::shared_ptr<BfContext> context(const char* spec, int levels, int arity_bound)
{
    return std::make_shared<BfContext>(assemble(ClassSpec::parse(spec), levels, arity_bound));
}

// ---- 8: expansions satisfy the axioms ----

Outcome expansions_model_axioms()
{
    auto ctx = context("linord:3", 2, 2);
    Theory th = t_alpha(*ctx);
    Tally t;
    for (const Structure& a : ctx->members()) {
        ExtendedStructure m = expand(a, ctx);
        Evaluator ev(m);
        for (const auto& s : th.sentences)
            t.expect(ev.eval(s.formula), [&] {
                return s.schema + " sentence fails in a " + std::to_string(a.size()) + "-element member";
            });
    }
    return t.outcome("linear orders <= 3, 2 levels, arity bound 2, " + std::to_string(th.sentences.size()) + " sentences");
}

// ---- 9: defining formulas ----

Outcome defining_formulas()
{
    auto ctx = context("linord:3", 2, 2);
    Tally t;
    for (const Structure& a : ctx->members()) {
        ExtendedStructure m = expand(a, ctx);
        Evaluator ev(m);
        for (const TypeRef& s : ctx->bfs().all_types()) {
            if (s.arity > 2)
                continue;
            const auto vars = var_range(1, s.arity);
            FormulaPtr phi = phi_def(*ctx, s);
            FormulaPtr psi = s.level < ctx->bfs().levels ? psi_def(*ctx, s) : nullptr;
            FormulaPtr psi_proj = psi ? psi_projection(*ctx, s) : nullptr;
            for_each_tuple(a.size(), s.arity, [&](const Tuple& tu) {
                const Structure& rep = ctx->rep_structure(s);
                const Tuple& rt = ctx->rep_tuple(s);
                const bool leq = ctx->engine().leq(rep, rt, a, tu, s.level);
                t.expect(ev.eval(phi, vars, tu) == leq, [&] { return "phi of " + s.str() + " at " + pair_text(a, tu); });
                if (!psi)
                    return;
                const bool eq = ctx->engine().compare(rep, rt, a, tu, s.level) == Comparison::Equiv;
                t.expect(ev.eval(psi, vars, tu) == eq, [&] { return "psi of " + s.str() + " at " + pair_text(a, tu); });
                t.expect(ev.eval(psi_proj, vars, tu) == eq,
                         [&] { return "projection psi of " + s.str() + " at " + pair_text(a, tu); });
            });
        }
    }
    return t.outcome("linear orders <= 3, 2 levels, arity bound 2, tuples <= 2");
}

// ---- 10: verification accepts assembled structures and rejects corruptions ----

Outcome verification()
{
    Tally t;
    int mutations = 0;
    for (const char* spec : {"linord:3", "equiv:3", "graph:3"}) {
        TypeCatalog cat(ClassSpec::parse(spec));
        for (int n = 0; n <= 2; ++n) {
            BfStructure good = assemble(cat, n, 1);
            VerificationReport r = verify(good, cat, n);
            t.expect(r.pass, [&] { return std::string(spec) + " at " + std::to_string(n) + " levels: " + r.witness; });
        }
        BfStructure good = assemble(cat, 2, 1);
        std::vector<std::pair<std::string, std::optional<BfStructure>>> bad;
        bad.emplace_back("dropped ext edge", mutate::drop_ext_edge(good, 1));
        bad.emplace_back("merged types", mutate::merge_types(good, 1, 0, 0, 1));
        bad.emplace_back("corrupted projection", mutate::corrupt_projection(good));
        for (const auto& [what, b] : bad) {
            if (!b)
                continue;
            ++mutations;
            VerificationReport r = verify(*b, cat, 2);
            t.expect(!r.pass && !r.witness.empty(), [&] { return what + " accepted for " + spec; });
        }
    }
    t.expect(mutations >= 3, [&] { return "only " + std::to_string(mutations) + " mutations applied"; });
    return t.outcome("builtin classes <= 3, levels 0..2, " + std::to_string(mutations) + " mutations");
}

// ---- 11: building structures with a prescribed type ----

Outcome prescribed_types()
{
    auto ctx = context("linord:3", 2, 3);
    Tally t;
    int built = 0;
    for (int k = 0; k <= 1; ++k)
        for (int id = 0; id < ctx->bfs().count(2, k); ++id) {
            const TypeRef s{2, k, id};
            TypedBuild r = build_with_type(*ctx, s, BuildBudget{});
            ++built;
            t.expect(r.chain.status == BuildStatus::AllHandled,
                     [&] { return s.str() + " stopped with " + status_name(r.chain.status); });
            if (r.chain.status != BuildStatus::AllHandled)
                continue;
            const bool eq = ctx->engine().compare(ctx->rep_structure(s), ctx->rep_tuple(s), r.structure, r.tuple, 2) ==
                            Comparison::Equiv;
            t.expect(eq, [&] { return "output for " + s.str() + " has a different type"; });
        }
    return t.outcome("linear orders <= 3, 2 levels, arity bound 3, " + std::to_string(built) + " types");
}

// ---- 12: Henkin construction without a greatest element ----

Outcome henkin_chain()
{
    Theory th = no_max_order_axioms();
    auto orders = enumerate_class(ClassSpec::parse("linord:64"));
    BuildBudget b;
    b.max_stages = 50;
    Tally t;
    DiagramChain c = henkin_build(th, orders, b);
    const std::string dump = dump_chain(c);
    t.expect(dump == dump_chain(henkin_build(th, orders, b)), [&] { return "two runs differ"; });
    t.expect(dump_chain(parse_chain(dump)) == dump, [&] { return "chain file does not round-trip"; });
    ChainAudit a = check_chain(c, th);
    t.expect(a.ok(), [&] { return a.violations.front(); });
    // each handled requirement keeps holding at every later stage
    auto normal = normalize(th);
    for (size_t s = 1; s < c.stages.size(); ++s) {
        t.expect(c.stages[s].structure.size() > c.stages[s - 1].structure.size(), [&] { return "stage did not grow"; });
        const Requirement& req = *c.stages[s].handled;
        const NormalSentence& ns = normal[static_cast<size_t>(req.axiom)];
        for (size_t later = s; later < c.stages.size(); ++later) {
            StructureModel m(c.stages[later].structure);
            Evaluator ev(m);
            t.expect(ev.eval(ns.body, ns.universal, req.tuple),
                     [&] { return "requirement of stage " + std::to_string(s) + " lost at stage " + std::to_string(later); });
        }
    }
    return t.outcome(std::to_string(c.stages.size()) + " stages, status " + status_name(c.status) + ", " +
                     std::to_string(a.unhandled.size()) + " unhandled");
}

} // namespace

int main()
{
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"engine matches the Pi-type oracle", oracle_equivalence},
        {"injective extensions suffice", injective_extensions},
        {"order laws", order_laws},
        {"ext-set characterization", ext_characterization},
        {"equivalence at |A|+|B| is isomorphism", isomorphism_level},
        {"Scott ranks", scott_ranks},
        {"type counts", type_counts},
        {"expansions satisfy the axioms", expansions_model_axioms},
        {"defining formulas", defining_formulas},
        {"verification", verification},
        {"prescribed types", prescribed_types},
        {"Henkin chain", henkin_chain},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s %s (%s, %.1fs)\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
