#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "omqkit/omqkit.h"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitIo = 4;

struct IoError {
    std::string msg;
};

struct Failure {
    int code;
};

using Artifact = std::unique_ptr<omqk_artifact, decltype(&omqk_artifact_free)>;

int exit_code(omqk_status s) {
    switch (s) {
        case OMQK_OK: return 0;
        case OMQK_ERR_PARSE: return kExitParse;
        case OMQK_ERR_UNSUPPORTED:
        case OMQK_ERR_LIMIT: return kExitUnsupported;
        case OMQK_ERR_IO: return kExitIo;
        default: return 1;
    }
}

void check(omqk_status s, const std::string& context) {
    if (s == OMQK_OK) return;
    std::cerr << "omqkit: ";
    if (!context.empty()) std::cerr << context << ": ";
    std::cerr << omqk_last_error() << "\n";
    throw Failure{exit_code(s)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError{"cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw IoError{"cannot write " + path};
}

Artifact load(const std::string& path, omqk_format fmt) {
    std::string text = read_file(path);
    omqk_artifact* a = nullptr;
    check(omqk_parse(text.c_str(), fmt, &a), path);
    return Artifact(a, omqk_artifact_free);
}

std::string take(char* s) {
    std::string out = s ? s : "";
    omqk_string_free(s);
    return out;
}

std::string render(const omqk_artifact* a) {
    char* s = nullptr;
    check(omqk_render(a, &s), "");
    return take(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compiler and decision procedures for ontology-mediated queries"};
    app.set_version_flag("--version", std::string("omqkit ") + omqk_version());
    app.require_subcommand(1);

    omqk_limits limits = omqk_limits_default();
    std::string format = "auto";
    app.add_option("--max-models", limits.max_models, "search bound for model enumeration")->capture_default_str();
    app.add_option("--max-product", limits.max_product, "size bound for product and core computations")
        ->capture_default_str();
    app.add_option("--max-rules", limits.max_rules, "bound on the size of generated rule sets")->capture_default_str();
    const std::map<std::string, omqk_format> formats{
        {"auto", OMQK_FORMAT_AUTO},         {"facts", OMQK_FORMAT_FACTS}, {"ontology", OMQK_FORMAT_ONTOLOGY},
        {"omq", OMQK_FORMAT_OMQ},           {"datalog", OMQK_FORMAT_DATALOG}, {"msnp", OMQK_FORMAT_MSNP},
        {"templates", OMQK_FORMAT_TEMPLATES}, {"patterns", OMQK_FORMAT_PATTERNS}};
    app.add_option("--format", format, "format of the main input file")
        ->check(CLI::IsMember({"auto", "facts", "ontology", "omq", "datalog", "msnp", "templates", "patterns"}))
        ->capture_default_str();

    std::string in, in2, out;
    std::string from, to, engine = "template";
    bool invert = false;

    auto* check_cmd = app.add_subcommand("check", "parse and validate a file, printing a summary");
    check_cmd->add_option("file", in)->required();

    const std::vector<std::string> kinds{"alc-aq", "alc-baq", "alc-conq", "alc-ucq", "mddlog",
                                         "fgddlog", "commsnp", "gmsnp",   "mmsnp2"};
    auto* compile_cmd = app.add_subcommand("compile", "translate between formalisms");
    compile_cmd->add_option("--from", from)->required()->check(CLI::IsMember(kinds));
    compile_cmd->add_option("--to", to)->required()->check(CLI::IsMember(kinds));
    compile_cmd->add_option("input", in)->required();
    compile_cmd->add_option("output", out);

    auto* template_cmd = app.add_subcommand("template", "build the template family of an AQ/BAQ query");
    template_cmd->add_flag("--invert", invert, "turn a template family back into an OMQ");
    template_cmd->add_option("input", in)->required();
    template_cmd->add_option("output", out);

    auto* eval_cmd = app.add_subcommand("eval", "print the certain answers, one tuple per line");
    eval_cmd->add_option("--engine", engine)->check(CLI::IsMember({"template", "ddlog", "msnp"}))->capture_default_str();
    eval_cmd->add_option("query", in)->required();
    eval_cmd->add_option("data", in2)->required();

    auto* contain_cmd = app.add_subcommand("contain", "decide whether every answer of Q1 is an answer of Q2");
    contain_cmd->add_option("q1", in)->required();
    contain_cmd->add_option("q2", in2)->required();

    auto* fodef_cmd = app.add_subcommand("fodef", "decide FO-rewritability");
    fodef_cmd->add_option("query", in)->required();

    auto* datalogdef_cmd = app.add_subcommand("datalogdef", "decide datalog-rewritability");
    datalogdef_cmd->add_option("query", in)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    const omqk_format fmt = formats.at(format);
    try {
        if (check_cmd->parsed()) {
            Artifact a = load(in, fmt);
            char* s = nullptr;
            check(omqk_describe(a.get(), &s), in);
            std::cout << take(s);
        } else if (compile_cmd->parsed()) {
            Artifact a = load(in, fmt);
            omqk_artifact* r = nullptr;
            check(omqk_compile(a.get(), from.c_str(), to.c_str(), &limits, &r), in);
            Artifact res(r, omqk_artifact_free);
            write_output(render(res.get()), out);
        } else if (template_cmd->parsed()) {
            Artifact a = load(in, fmt);
            omqk_artifact* r = nullptr;
            if (invert)
                check(omqk_from_templates(a.get(), &r), in);
            else
                check(omqk_to_templates(a.get(), &limits, &r), in);
            Artifact res(r, omqk_artifact_free);
            write_output(render(res.get()), out);
        } else if (eval_cmd->parsed()) {
            Artifact q = load(in, fmt);
            Artifact d = load(in2, OMQK_FORMAT_FACTS);
            omqk_engine e = engine == "ddlog" ? OMQK_ENGINE_DDLOG : engine == "msnp" ? OMQK_ENGINE_MSNP : OMQK_ENGINE_TEMPLATE;
            omqk_answers* ans = nullptr;
            check(omqk_eval(q.get(), d.get(), e, &limits, &ans), in);
            char* s = nullptr;
            omqk_status st = omqk_answers_render(ans, &s);
            omqk_answers_free(ans);
            check(st, "");
            std::cout << take(s);
        } else if (contain_cmd->parsed()) {
            Artifact q1 = load(in, fmt);
            Artifact q2 = load(in2, fmt);
            int contained = 0;
            omqk_artifact* w = nullptr;
            check(omqk_contain(q1.get(), q2.get(), &limits, &contained, &w), in);
            Artifact witness(w, omqk_artifact_free);
            if (contained) {
                std::cout << "contained\n";
            } else {
                std::cout << "not-contained\n";
                if (witness) std::cout << render(witness.get());
            }
        } else if (fodef_cmd->parsed()) {
            Artifact q = load(in, fmt);
            int result = 0;
            check(omqk_fo_definable(q.get(), &limits, &result), in);
            std::cout << (result ? "fo-rewritable\n" : "not-fo-rewritable\n");
        } else if (datalogdef_cmd->parsed()) {
            Artifact q = load(in, fmt);
            int result = 0;
            omqk_status st = omqk_datalog_definable(q.get(), &result);
            std::cout << "unsupported\n";
            return exit_code(st);
        }
    } catch (const IoError& e) {
        std::cerr << "omqkit: " << e.msg << "\n";
        return kExitIo;
    } catch (const Failure& f) {
        return f.code;
    }
    return 0;
}
