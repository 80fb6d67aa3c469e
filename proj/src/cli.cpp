#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ahltl/accel.hpp"
#include "ahltl/cli.hpp"
#include "ahltl/corpus.hpp"
#include "ahltl/gadgets.hpp"
#include "ahltl/oracle.hpp"
#include "ahltl/stutter.hpp"

namespace ahltl::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class UsageError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out << text;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Json sizes(const KripkeStructure& k) {
    return {{"states", k.num_states()}, {"transitions", k.num_transitions()}};
}

Json lasso_json(const KripkeStructure& k, const Lasso& l) {
    Json stem = Json::array(), loop = Json::array();
    for (int s : l.stem) stem.push_back(k.names[s]);
    for (int s : l.loop) loop.push_back(k.names[s]);
    return {{"stem", stem}, {"loop", loop}};
}

Json trajectory_json(const Trajectory& t, const std::vector<std::string>& vars) {
    auto step = [&](VarSet m) {
        Json moved = Json::array();
        for (std::size_t i = 0; i < vars.size(); ++i)
            if ((m >> i) & 1U) moved.push_back(vars[i]);
        return moved;
    };
    Json stem = Json::array(), loop = Json::array();
    for (VarSet m : t.stem) stem.push_back(step(m));
    for (VarSet m : t.loop) loop.push_back(step(m));
    return {{"stem", stem}, {"loop", loop}};
}

Json witness_json(const KripkeStructure& k, const std::vector<std::string>& vars, const std::vector<Lasso>& traces) {
    Json w = Json::array();
    for (std::size_t i = 0; i < traces.size(); ++i) {
        Json entry{{"var", vars[i]}};
        entry.update(lasso_json(k, traces[i]));
        w.push_back(entry);
    }
    return w;
}

const char* verdict_name(Verdict v) { return to_string(v); }

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Holds: return kExitHolds;
        case Verdict::Fails: return kExitFails;
        case Verdict::Resource: return kExitResource;
    }
    return kExitResource;
}

int exit_for(Outcome o) {
    switch (o) {
        case Outcome::Holds: return kExitHolds;
        case Outcome::Fails: return kExitFails;
        case Outcome::Inconclusive: return kExitResource;
    }
    return kExitResource;
}

bool has_alternation(const Formula& phi) {
    for (const auto& q : phi.prefix)
        if (q.quant != phi.prefix.front().quant) return true;
    return false;
}

const char* prefix_shape(const Formula& phi) {
    if (phi.prefix.empty()) return "none";
    if (has_alternation(phi)) return "alternating";
    return phi.prefix.front().quant == Quant::Forall ? "universal" : "existential";
}

std::string auto_method(const Formula& phi, const AdmissibilityReport& rep) {
    if (phi.is_hyperltl()) return "sync";
    if (!has_alternation(phi) && rep.cls != FragmentClass::NotAdmissible) return "stutter";
    if (has_alternation(phi) &&
        (rep.cls == FragmentClass::SimpleAdmissible || rep.cls == FragmentClass::StateMonadicOnly))
        return "accel";
    std::string why = std::string("no decision procedure for a ") + to_string(rep.cls) + " formula with " +
                      prefix_shape(phi) + " prefix";
    if (!rep.reason.empty()) why += " (" + rep.reason + ")";
    throw FragmentError(why + "; rerun with --semantics oracle for a bounded answer");
}

Reduction reduce_with(const std::string& method, const KripkeStructure& k, const Formula& phi) {
    if (method == "stutter") return reduce_stutter(k, phi);
    if (phi.is_hyperltl()) throw FragmentError("the accelerating reduction expects an E or A formula");
    if (*phi.modality == Modality::A) {
        Reduction r = reduce_accel(k, negate_to_positive(phi));
        r.negate_verdict = !r.negate_verdict;
        r.route = "duality: A checked as the negated E formula; " + r.route;
        return r;
    }
    return reduce_accel(k, phi);
}

// Maps witnesses of the reduced instance back to paths of the input structure where possible.
void add_reduced_witness(Json& report, const std::string& method, const KripkeStructure& k, const Formula& phi,
                         const Reduction& red, const CheckResult& c) {
    if (c.witness.empty()) return;
    if (method == "stutter") {
        try {
            auto [traces, trajectory] = compress(c.witness, k.num_states());
            report["witness_model"] = "input";
            report["witness"] = witness_json(k, c.witness_vars, traces);
            report["trajectory"] = trajectory_json(trajectory, c.witness_vars);
            return;
        } catch (const Error&) {
        }
    } else if (method == "accel") {
        try {
            KripkeStructure base = k;
            for (const auto& p : props_of(phi.body)) ensure_prop(base, p);
            const AdmissibilityReport rep = classify(red.formula.body, red.formula.prefix);
            const AccelStructure acc = build_accelerated(base, rep.shared_props());
            if (acc.model.num_states() == red.model.num_states()) {
                std::vector<Lasso> paths;
                for (const Lasso& l : c.witness) paths.push_back(dec_path(acc, base, l));
                report["witness_model"] = "input";
                report["witness"] = witness_json(base, c.witness_vars, paths);
                return;
            }
        } catch (const Error&) {
        }
    }
    report["witness_model"] = method == "stutter" ? "stuttered" : "accelerated";
    report["witness"] = witness_json(red.model, c.witness_vars, c.witness);
}

struct CheckArgs {
    std::string model;
    std::string formula;
    std::string semantics = "auto";
    int trace_bound = 6;
    int traj_bound = 4;
    std::size_t state_cap = 100000;
    std::string out;
};

void emit(const Json& report, const std::string& out_path, std::ostream& out) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) out << text;
    else write_file(out_path, text);
}

Json base_report(const char* command) {
    Json r;
    r["schema"] = kReportSchema;
    r["command"] = command;
    return r;
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
    const KripkeStructure k = parse_kripke(read_file(a.model));
    const Formula phi = parse_formula(read_file(a.formula));
    check_well_formed(phi);
    const AdmissibilityReport rep = classify(phi.body, phi.prefix);

    Json r = base_report("check");
    r["model_file"] = a.model;
    r["formula_file"] = a.formula;
    r["formula"] = to_string(phi);
    r["classification"] = to_string(rep.cls);
    if (!rep.reason.empty()) r["classification_reason"] = rep.reason;

    const std::string method = a.semantics == "auto" ? auto_method(phi, rep) : a.semantics;
    r["method"] = method;
    r["model_sizes"] = sizes(k);
    CheckOptions copt;
    copt.state_cap = a.state_cap;

    if (method == "sync") {
        Formula sync = phi;
        sync.modality.reset();
        const auto t0 = Clock::now();
        const CheckResult c = check_hyperltl(k, sync, copt);
        r["route"] = phi.is_hyperltl() ? "synchronous formula" : "trajectory modality read as lockstep";
        r["verdict"] = verdict_name(c.verdict);
        if (!c.witness.empty()) r["witness"] = witness_json(k, c.witness_vars, c.witness);
        r["automaton_peak"] = c.largest_automaton;
        r["timings_ms"] = {{"check", ms_since(t0)}};
        if (!c.note.empty()) r["note"] = c.note;
        emit(r, a.out, out);
        return exit_for(c.verdict);
    }

    if (method == "oracle") {
        Formula bounded = phi;
        OracleOptions oopt;
        if (bounded.is_hyperltl()) {
            bounded.modality = Modality::E;
            oopt.lockstep_only = true;
        }
        const auto t0 = Clock::now();
        const BoundedVerdict v = oracle_check(k, bounded, a.trace_bound, a.traj_bound, oopt);
        r["route"] = "bounded lassos, exact trajectory search per assignment";
        r["verdict"] = to_string(v.outcome);
        r["bounds"] = {{"trace", v.trace_bound}, {"trajectory", v.traj_bound}, {"traces_complete", v.traces_complete}};
        r["assignments"] = v.assignments;
        if (!v.witness.empty()) {
            KripkeStructure named = k;
            for (const auto& p : props_of(phi.body)) ensure_prop(named, p);
            r["witness_model"] = "input";
            r["witness"] = witness_json(named, v.witness_vars, v.witness);
        }
        if (v.trajectory) r["trajectory"] = trajectory_json(*v.trajectory, bounded.vars());
        r["timings_ms"] = {{"check", ms_since(t0)}};
        if (!v.note.empty()) r["note"] = v.note;
        emit(r, a.out, out);
        return exit_for(v.outcome);
    }

    const auto t0 = Clock::now();
    const Reduction red = reduce_with(method, k, phi);
    const double reduce_ms = ms_since(t0);
    r["route"] = red.route;
    r["model_sizes"][method == "stutter" ? "stuttered" : "accelerated"] = sizes(red.model);
    const auto t1 = Clock::now();
    const CheckResult c = check_reduced(red, copt);
    r["verdict"] = verdict_name(c.verdict);
    add_reduced_witness(r, method, k, phi, red, c);
    r["automaton_peak"] = c.largest_automaton;
    r["timings_ms"] = {{"reduce", reduce_ms}, {"check", ms_since(t1)}};
    if (!c.note.empty()) r["note"] = c.note;
    emit(r, a.out, out);
    return exit_for(c.verdict);
}

// PREFIX.kr and PREFIX.hltl (synchronous) or PREFIX.ahltl, or both texts inline in the report.
void emit_instance(Json& r, const KripkeStructure& k, const Formula& f, const std::string& prefix, std::ostream& out) {
    if (!prefix.empty()) {
        const std::string model_path = prefix + ".kr";
        const std::string formula_path = prefix + (f.is_hyperltl() ? ".hltl" : ".ahltl");
        write_file(model_path, print_kripke(k));
        write_file(formula_path, to_string(f) + "\n");
        r["model_out"] = model_path;
        r["formula_out"] = formula_path;
    } else {
        r["model"] = print_kripke(k);
        r["formula"] = to_string(f);
    }
    out << r.dump(2) << "\n";
}

int cmd_transform(const CheckArgs& a, std::ostream& out) {
    const KripkeStructure k = parse_kripke(read_file(a.model));
    const Formula phi = parse_formula(read_file(a.formula));
    check_well_formed(phi);
    if (phi.is_hyperltl()) throw FragmentError("transform expects an E or A formula");
    const AdmissibilityReport rep = classify(phi.body, phi.prefix);
    const std::string method = a.semantics == "auto" ? auto_method(phi, rep) : a.semantics;
    if (method != "stutter" && method != "accel")
        throw UsageError("transform supports --semantics auto, stutter or accel");
    const Reduction red = reduce_with(method, k, phi);
    Json r = base_report("transform");
    r["classification"] = to_string(rep.cls);
    r["method"] = method;
    r["route"] = red.route;
    r["negate_verdict"] = red.negate_verdict;
    r["model_sizes"] = sizes(k);
    r["model_sizes"][method == "stutter" ? "stuttered" : "accelerated"] = sizes(red.model);
    emit_instance(r, red.model, red.formula, a.out, out);
    return kExitHolds;
}

int cmd_classify(const std::string& formula_path, std::ostream& out) {
    const Formula phi = parse_formula(read_file(formula_path));
    check_well_formed(phi);
    const AdmissibilityReport rep = classify(phi.body, phi.prefix);
    Json r = base_report("classify");
    r["formula"] = to_string(phi);
    r["classification"] = to_string(rep.cls);
    r["prefix"] = prefix_shape(phi);
    Json phase = Json::array();
    for (const auto& s : rep.phase) phase.push_back({{"lhs", s.lhs}, {"rhs", s.rhs}, {"props", s.props}});
    r["phase"] = phase;
    if (rep.has_phase()) r["polarity"] = rep.polarity == Polarity::Positive ? "positive" : "negative";
    if (!rep.reason.empty()) r["reason"] = rep.reason;
    try {
        r["method"] = auto_method(phi, rep);
    } catch (const FragmentError&) {
        r["method"] = "oracle";
    }
    out << r.dump(2) << "\n";
    return kExitHolds;
}

int cmd_corpus(const std::string& dir, std::ostream& out) {
    Json r = base_report("corpus");
    Json files = Json::array();
    for (const auto& f : corpus_files()) files.push_back(f.name);
    r["files"] = files;
    Json fixtures = Json::array();
    for (const Fixture& f : corpus_build()) {
        fixtures.push_back({{"name", f.name},
                            {"model", f.model_file},
                            {"formula", f.formula_file},
                            {"expected", f.expected},
                            {"states", f.model.num_states()},
                            {"transitions", f.model.num_transitions()},
                            {"note", f.note}});
    }
    r["fixtures"] = fixtures;
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        for (const auto& f : corpus_files()) write_file(std::filesystem::path(dir) / f.name, f.text);
        r["written_to"] = dir;
    }
    out << r.dump(2) << "\n";
    return kExitHolds;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Model checking for asynchronous HyperLTL", "ahltl"};
    app.require_subcommand(1, 1);

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "decide a formula on a model");
    check->add_option("--model", check_args.model, "Kripke structure (.kr)")->required();
    check->add_option("--formula", check_args.formula, "formula file")->required();
    check->add_option("--semantics", check_args.semantics, "decision route")
        ->check(CLI::IsMember({"auto", "stutter", "accel", "sync", "oracle"}));
    check->add_option("--trace-bound", check_args.trace_bound, "oracle: max |stem|+|loop| of traces")
        ->check(CLI::Range(1, 64));
    check->add_option("--traj-bound", check_args.traj_bound, "oracle: max |stem|+|loop| of trajectories")
        ->check(CLI::Range(1, 16));
    check->add_option("--state-cap", check_args.state_cap, "largest automaton the backend may build");
    check->add_option("--out", check_args.out, "write the report to this file");

    CheckArgs transform_args;
    auto* transform = app.add_subcommand("transform", "write the synchronous instance a reduction produces");
    transform->add_option("--model", transform_args.model)->required();
    transform->add_option("--formula", transform_args.formula)->required();
    transform->add_option("--semantics", transform_args.semantics)->check(CLI::IsMember({"auto", "stutter", "accel"}));
    transform->add_option("--out", transform_args.out, "output prefix for PREFIX.kr and PREFIX.hltl");

    std::string classify_formula;
    auto* classify_cmd = app.add_subcommand("classify", "report the fragment a formula belongs to");
    classify_cmd->add_option("--formula", classify_formula)->required();

    auto* gadget = app.add_subcommand("gadget", "generate a hardness instance");
    gadget->require_subcommand(1, 1);
    std::string dominos, pcp_out;
    bool literal_type = false, no_guards = false;
    auto* pcp = gadget->add_subcommand("pcp", "PCP instance to model and formula");
    pcp->add_option("--dominos", dominos, "comma-separated top/bottom pairs, e.g. b/ca,a/ab")->required();
    pcp->add_flag("--literal-type", literal_type, "use the type constraint verbatim");
    pcp->add_flag("--no-length-guards", no_guards, "drop the length-mismatch disjuncts");
    pcp->add_option("--out", pcp_out, "output prefix");
    std::string ps_model, ps_formula, ps_out;
    auto* pspace = gadget->add_subcommand("pspace", "HyperLTL instance to an equivalent asynchronous one");
    pspace->add_option("--model", ps_model)->required();
    pspace->add_option("--formula", ps_formula)->required();
    pspace->add_option("--out", ps_out, "output prefix");

    std::string corpus_dir;
    auto* corpus = app.add_subcommand("corpus", "list the bundled fixtures, optionally writing them out");
    corpus->add_option("--out", corpus_dir, "directory for the model and formula files");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    if (*check) return cmd_check(check_args, out);
    if (*transform) return cmd_transform(transform_args, out);
    if (*classify_cmd) return cmd_classify(classify_formula, out);
    if (*corpus) return cmd_corpus(corpus_dir, out);
    if (*pcp) {
        PcpOptions opt;
        opt.literal_type = literal_type;
        opt.length_guards = !no_guards;
        const PcpInstance inst = parse_dominos(dominos);
        const Gadget g = pcp_gadget(inst, opt);
        Json r = base_report("gadget pcp");
        r["dominos"] = dominos;
        r["model_sizes"] = sizes(g.model);
        emit_instance(r, g.model, g.formula, pcp_out, out);
        return kExitHolds;
    }
    const KripkeStructure k = parse_kripke(read_file(ps_model));
    const Formula phi = parse_formula(read_file(ps_formula));
    const Gadget g = pspace_gadget(k, phi);
    Json r = base_report("gadget pspace");
    r["model_sizes"] = sizes(k);
    r["model_sizes"]["gadget"] = sizes(g.model);
    emit_instance(r, g.model, g.formula, ps_out, out);
    return kExitHolds;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FragmentError& e) {
        err << "unsupported fragment: " << e.what() << "\n";
        return kExitFragment;
    } catch (const ResourceError& e) {
        err << "resource cap: " << e.what() << "\n";
        return kExitResource;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace ahltl::cli
