// Command-line front end. Exit codes: 0 success, 1 domain or input error,
// 2 usage error, 3 budget exhausted.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bnf/bfstruct.hpp"
#include "bnf/builder.hpp"
#include "bnf/error.hpp"
#include "bnf/extlang.hpp"
#include "bnf/scott.hpp"

using namespace bnf;

namespace {

struct UsageError : Error {
    using Error::Error;
};

struct ClassOpts {
    std::string kind;
    int max_size = 0;

    void add(CLI::App* app, bool required = true)
    {
        app->add_option("--class", kind, "linord, equiv, graph, or a full spec such as linord:3")->required(required);
        app->add_option("--max-size", max_size, "largest structure in the fragment");
    }

    ClassSpec spec() const
    {
        if (kind.find(':') != std::string::npos) {
            ClassSpec s = ClassSpec::parse(kind);
            if (max_size > 0 && s.kind != ClassKind::Files)
                s.max_size = max_size;
            return s;
        }
        if (max_size < 1)
            throw UsageError("--max-size is required with a builtin class name");
        return ClassSpec::from_kind(kind, max_size);
    }
};

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw DomainError("cannot write '" + path + "'");
    out << text;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TypeRef sigma_of(const std::vector<int>& v)
{
    if (v.size() != 3)
        throw UsageError("--sigma takes <level> <arity> <typeId>");
    return TypeRef{v[0], v[1], v[2]};
}

std::string tuple_text(const Tuple& t) { return t.empty() ? "-" : format_tuple(t); }

int status_exit(BuildStatus s)
{
    switch (s) {
    case BuildStatus::AllHandled:
    case BuildStatus::StageBudget: return 0;
    case BuildStatus::Exhausted: return 1;
    case BuildStatus::DomainBudget: return 3;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Back-and-forth relations, types and structures of finite model classes"};
    app.require_subcommand(1);
    std::uint64_t budget = 0;
    app.add_option("--budget", budget, "cap on expanded game nodes (0: none)");

    // compare
    auto* compare = app.add_subcommand("compare", "compare (A,a) and (B,b) at a level");
    int cmp_level = 0;
    std::string cmp_a, cmp_b, cmp_ta, cmp_tb;
    compare->add_option("--level", cmp_level)->required();
    compare->add_option("A", cmp_a)->required();
    compare->add_option("B", cmp_b)->required();
    compare->add_option("--tuple-a", cmp_ta);
    compare->add_option("--tuple-b", cmp_tb);

    // type
    auto* type = app.add_subcommand("type", "the bf-type of (A,a) within a class fragment");
    ClassOpts type_class;
    int type_level = 0;
    std::string type_file, type_tuple;
    type_class.add(type);
    type->add_option("--level", type_level)->required();
    type->add_option("A", type_file)->required();
    type->add_option("--tuple", type_tuple);

    // structure
    auto* structure = app.add_subcommand("structure", "assemble the bf-structure of a class fragment");
    ClassOpts st_class;
    int st_level = 0, st_bound = 1;
    std::string st_out;
    st_class.add(structure);
    structure->add_option("--level", st_level)->required();
    structure->add_option("--arity-bound", st_bound)->required();
    structure->add_option("-o,--output", st_out);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check a bf-structure file against a class fragment");
    ClassOpts ver_class;
    std::string ver_file;
    verify_cmd->add_option("file", ver_file)->required();
    ver_class.add(verify_cmd, false); // defaults to the class in the file header

    // scott
    auto* scott = app.add_subcommand("scott", "Scott rank and per-tuple ranks");
    std::string scott_file;
    int scott_bound = -1;
    scott->add_option("A", scott_file)->required();
    scott->add_option("--length-bound", scott_bound, "longest tuple examined (default |A|)");

    // count
    auto* count = app.add_subcommand("count", "number of bf-types at a level and arity");
    ClassOpts cnt_class;
    int cnt_level = 0, cnt_arity = 0;
    cnt_class.add(count);
    count->add_option("--level", cnt_level)->required();
    count->add_option("--arity", cnt_arity)->required();

    // axioms
    auto* axioms = app.add_subcommand("axioms", "the axioms of a bf-structure, optionally with a prescribed type");
    std::string ax_file, ax_out;
    std::vector<int> ax_sigma;
    int ax_arity = -1;
    axioms->add_option("file", ax_file)->required();
    axioms->add_option("--sigma", ax_sigma)->expected(3);
    axioms->add_option("--max-arity", ax_arity, "largest instantiated arity (default: the arity bound)");
    axioms->add_option("-o,--output", ax_out);

    // build
    auto* build = app.add_subcommand("build", "build a structure with a prescribed type");
    std::string b_file, b_out, b_chain;
    std::vector<int> b_sigma;
    BuildBudget b_budget;
    int b_arity = -1;
    build->add_option("--bfs", b_file)->required();
    build->add_option("--sigma", b_sigma)->expected(3)->required();
    build->add_option("--max-stages", b_budget.max_stages);
    build->add_option("--max-domain", b_budget.max_domain);
    build->add_option("--max-arity", b_arity);
    build->add_option("-o,--output", b_out);
    build->add_option("--chain", b_chain);

    // henkin
    auto* henkin = app.add_subcommand("henkin", "Henkin construction of a Pi_2 theory over a class fragment");
    std::string h_theory, h_out, h_chain;
    ClassOpts h_class;
    BuildBudget h_budget;
    int h_seed = 0;
    henkin->add_option("--theory", h_theory)->required();
    h_class.add(henkin);
    henkin->add_option("--max-stages", h_budget.max_stages);
    henkin->add_option("--max-domain", h_budget.max_domain);
    henkin->add_option("--enumerator-bound", h_budget.enumerator_bound);
    henkin->add_option("--seed", h_seed);
    henkin->add_option("-o,--output", h_out);
    henkin->add_option("--chain", h_chain);

    // check-chain
    auto* audit = app.add_subcommand("check-chain", "audit a chain file against its theory");
    std::string au_chain, au_theory;
    audit->add_option("chain", au_chain)->required();
    audit->add_option("--theory", au_theory)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::ostringstream out;
        int code = 0;
        if (*compare) {
            Structure a = load_structure(cmp_a), b = load_structure(cmp_b);
            Tuple ta = parse_tuple(cmp_ta), tb = parse_tuple(cmp_tb);
            BfEngine engine;
            engine.set_node_budget(budget);
            out << comparison_name(engine.compare(a, ta, b, tb, cmp_level)) << "\n";
            write_output("", out.str());
        } else if (*type) {
            TypeCatalog cat(type_class.spec());
            cat.engine().set_node_budget(budget);
            Structure a = load_structure(type_file);
            Tuple t = parse_tuple(type_tuple);
            check_tuple(a, t);
            const BfLevel& lv = cat.level(type_level, static_cast<int>(t.size()));
            bool found = false;
            for (const BfType& ty : lv.types) {
                const Structure& rep = cat.members()[static_cast<size_t>(ty.rep_struct)];
                if (cat.engine().compare(rep, ty.rep_tuple, a, t, type_level) == Comparison::Equiv) {
                    out << "type " << ty.ref.str() << "\n";
                    out << "representative " << ty.rep_struct << " " << tuple_text(ty.rep_tuple) << "\n";
                    out << serialize_structure(rep);
                    found = true;
                    break;
                }
            }
            if (!found)
                throw DomainError("no type of the class fragment matches the structure");
            write_output("", out.str());
        } else if (*structure) {
            TypeCatalog cat(st_class.spec());
            cat.engine().set_node_budget(budget);
            write_output(st_out, serialize(assemble(cat, st_level, st_bound)));
        } else if (*verify_cmd) {
            BfStructure b = load_bfstruct(ver_file);
            ClassSpec spec = ver_class.kind.empty() ? ClassSpec::parse(b.class_spec) : ver_class.spec();
            TypeCatalog cat(spec);
            cat.engine().set_node_budget(budget);
            VerificationReport r = verify(b, cat, b.levels);
            if (r.pass) {
                out << "PASS\n";
            } else {
                out << "FAIL level " << r.level << ": " << r.witness << "\n";
                code = 1;
            }
            write_output("", out.str());
        } else if (*scott) {
            Structure a = load_structure(scott_file);
            BfEngine engine;
            engine.set_node_budget(budget);
            ScottRankReport r = scott_rank(engine, a, scott_bound);
            out << "SR " << r.sr << "\n";
            for (const auto& row : r.per_tuple)
                out << tuple_text(row.tuple) << " " << row.rho << "\n";
            write_output("", out.str());
        } else if (*count) {
            TypeCatalog cat(cnt_class.spec());
            cat.engine().set_node_budget(budget);
            out << cat.count_classes(cnt_level, cnt_arity) << "\n";
            write_output("", out.str());
        } else if (*axioms) {
            BfContext ctx(load_bfstruct(ax_file));
            ctx.engine().set_node_budget(budget);
            Theory t = ax_sigma.empty() ? t_alpha(ctx, ax_arity) : t_alpha_sigma(ctx, sigma_of(ax_sigma), ax_arity);
            write_output(ax_out, theory_to_text(t));
        } else if (*build) {
            BfContext ctx(load_bfstruct(b_file));
            ctx.engine().set_node_budget(budget);
            TypedBuild r = build_with_type(ctx, sigma_of(b_sigma), b_budget, b_arity);
            if (!b_chain.empty())
                write_output(b_chain, dump_chain(r.chain));
            write_output(b_out, serialize_structure(r.structure));
            std::cerr << "status " << status_name(r.chain.status) << "\n";
            std::cerr << "tuple " << tuple_text(r.tuple) << "\n";
            code = status_exit(r.chain.status);
        } else if (*henkin) {
            Theory t = load_theory(h_theory);
            DiagramChain c = henkin_build(t, enumerate_class(h_class.spec()), h_budget, h_seed, {});
            if (!h_chain.empty())
                write_output(h_chain, dump_chain(c));
            write_output(h_out, serialize_structure(c.final_structure()));
            std::cerr << "status " << status_name(c.status) << "\n";
            std::cerr << "stages " << c.stages.size() << "\n";
            code = status_exit(c.status);
        } else if (*audit) {
            ChainAudit a = check_chain(parse_chain(read_file(au_chain)), load_theory(au_theory));
            out << "requirements " << a.requirements << "\n";
            out << "unhandled " << a.unhandled.size() << "\n";
            for (const auto& r : a.unhandled)
                out << "unhandled " << r.axiom << " " << tuple_text(r.tuple) << "\n";
            out << "violations " << a.violations.size() << "\n";
            for (const auto& v : a.violations)
                out << "violation " << v << "\n";
            write_output("", out.str());
            code = a.ok() ? 0 : 1;
        }
        return code;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "error: budget: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
