#include <gtest/gtest.h>

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "omqkit/omqkit.h"

namespace {

std::string read_data(const std::string& name) {
    std::ifstream in(std::string(OMQKIT_TEST_DATA) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ArtifactDeleter {
    void operator()(omqk_artifact* a) const { omqk_artifact_free(a); }
};
struct AnswersDeleter {
    void operator()(omqk_answers* a) const { omqk_answers_free(a); }
};
using Artifact = std::unique_ptr<omqk_artifact, ArtifactDeleter>;
using Answers = std::unique_ptr<omqk_answers, AnswersDeleter>;

Artifact parse(const std::string& text, omqk_format fmt = OMQK_FORMAT_AUTO) {
    omqk_artifact* a = nullptr;
    EXPECT_EQ(omqk_parse(text.c_str(), fmt, &a), OMQK_OK) << omqk_last_error();
    return Artifact(a);
}

std::string take(char* s) {
    std::string out = s ? s : "";
    omqk_string_free(s);
    return out;
}

std::string eval(const omqk_artifact* q, const omqk_artifact* d, omqk_engine engine) {
    omqk_answers* raw = nullptr;
    EXPECT_EQ(omqk_eval(q, d, engine, nullptr, &raw), OMQK_OK) << omqk_last_error();
    Answers a(raw);
    char* text = nullptr;
    EXPECT_EQ(omqk_answers_render(a.get(), &text), OMQK_OK);
    return take(text);
}

}  // namespace

TEST(CApi, VersionAndDefaults) {
    EXPECT_STRNE(omqk_version(), "");
    omqk_limits l = omqk_limits_default();
    EXPECT_GT(l.max_models, 0u);
    EXPECT_GT(l.max_product, 0u);
}

TEST(CApi, DetectsFormats) {
    EXPECT_EQ(omqk_detect_format(read_data("hered.omq").c_str()), OMQK_FORMAT_OMQ);
    EXPECT_EQ(omqk_detect_format(read_data("reach.dl").c_str()), OMQK_FORMAT_DATALOG);
    EXPECT_EQ(omqk_detect_format(read_data("edge.tpl").c_str()), OMQK_FORMAT_TEMPLATES);
    EXPECT_EQ(omqk_detect_format("msnp mmsnp\nimp A(x) -> false\n"), OMQK_FORMAT_MSNP);
    EXPECT_EQ(omqk_detect_format("# c\nA(a). R(a,b).\n"), OMQK_FORMAT_FACTS);
    EXPECT_STREQ(omqk_format_name(OMQK_FORMAT_OMQ), "omq");
}

TEST(CApi, ParseErrorCarriesPosition) {
    omqk_artifact* a = nullptr;
    EXPECT_EQ(omqk_parse(read_data("broken.dl").c_str(), OMQK_FORMAT_DATALOG, &a), OMQK_ERR_PARSE);
    EXPECT_EQ(a, nullptr);
    EXPECT_NE(std::string(omqk_last_error()).find("line 2"), std::string::npos) << omqk_last_error();
}

TEST(CApi, NullArguments) {
    EXPECT_EQ(omqk_parse(nullptr, OMQK_FORMAT_AUTO, nullptr), OMQK_ERR_ARGUMENT);
    omqk_artifact_free(nullptr);
    omqk_answers_free(nullptr);
    omqk_string_free(nullptr);
}

TEST(CApi, RenderRoundTrip) {
    Artifact q = parse(read_data("example1.omq"));
    std::string text = take([&] {
        char* s = nullptr;
        EXPECT_EQ(omqk_render(q.get(), &s), OMQK_OK);
        return s;
    }());
    Artifact back = parse(text);
    EXPECT_EQ(omqk_artifact_format(back.get()), OMQK_FORMAT_OMQ);
}

TEST(CApi, ExampleOneOnAllEngines) {
    Artifact q = parse(read_data("example1.omq"));
    Artifact d = parse(read_data("example1.facts"), OMQK_FORMAT_FACTS);
    for (auto engine : {OMQK_ENGINE_TEMPLATE, OMQK_ENGINE_DDLOG, OMQK_ENGINE_MSNP})
        EXPECT_EQ(eval(q.get(), d.get(), engine), "pat1\npat2\n") << engine;
}

TEST(CApi, AnswerAccessors) {
    Artifact q = parse(read_data("hered.omq"));
    Artifact d = parse(read_data("family.facts"), OMQK_FORMAT_FACTS);
    omqk_answers* raw = nullptr;
    ASSERT_EQ(omqk_eval(q.get(), d.get(), OMQK_ENGINE_TEMPLATE, nullptr, &raw), OMQK_OK);
    Answers a(raw);
    ASSERT_EQ(omqk_answers_count(a.get()), 2u);
    EXPECT_EQ(omqk_answers_arity(a.get()), 1u);
    EXPECT_STREQ(omqk_answers_get(a.get(), 0, 0), "a");
    EXPECT_STREQ(omqk_answers_get(a.get(), 1, 0), "b");
    EXPECT_EQ(omqk_answers_get(a.get(), 2, 0), nullptr);
}

TEST(CApi, CompileChain) {
    Artifact dl = parse(read_data("reach.dl"));
    omqk_artifact* raw = nullptr;
    ASSERT_EQ(omqk_compile(dl.get(), "mddlog", "commsnp", nullptr, &raw), OMQK_OK) << omqk_last_error();
    Artifact msnp(raw);
    EXPECT_EQ(omqk_artifact_format(msnp.get()), OMQK_FORMAT_MSNP);
    ASSERT_EQ(omqk_compile(msnp.get(), "commsnp", "mddlog", nullptr, &raw), OMQK_OK) << omqk_last_error();
    Artifact back(raw);
    EXPECT_EQ(omqk_artifact_format(back.get()), OMQK_FORMAT_DATALOG);
    EXPECT_EQ(omqk_compile(dl.get(), "mddlog", "nonsense", nullptr, &raw), OMQK_ERR_ARGUMENT);
}

TEST(CApi, TemplatesAndBack) {
    Artifact q = parse(read_data("hered.omq"));
    omqk_artifact* raw = nullptr;
    ASSERT_EQ(omqk_to_templates(q.get(), nullptr, &raw), OMQK_OK);
    Artifact family(raw);
    EXPECT_EQ(omqk_artifact_format(family.get()), OMQK_FORMAT_TEMPLATES);
    ASSERT_EQ(omqk_from_templates(family.get(), &raw), OMQK_OK) << omqk_last_error();
    Artifact inverse(raw);
    Artifact d = parse(read_data("family.facts"), OMQK_FORMAT_FACTS);
    EXPECT_EQ(eval(inverse.get(), d.get(), OMQK_ENGINE_DDLOG), "a\nb\n");
}

TEST(CApi, Containment) {
    Artifact q = parse(read_data("hered.omq"));
    int contained = -1;
    omqk_artifact* witness = nullptr;
    ASSERT_EQ(omqk_contain(q.get(), q.get(), nullptr, &contained, &witness), OMQK_OK);
    EXPECT_EQ(contained, 1);
    EXPECT_EQ(witness, nullptr);

    Artifact edge = parse(read_data("edge.tpl"));
    Artifact k2 = parse(read_data("k2.tpl"));
    ASSERT_EQ(omqk_contain(edge.get(), k2.get(), nullptr, &contained, &witness), OMQK_OK);
    EXPECT_EQ(contained, 0);
    ASSERT_NE(witness, nullptr);
    omqk_artifact_free(witness);
}

TEST(CApi, Definability) {
    int result = -1;
    Artifact hered = parse(read_data("hered.omq"));
    ASSERT_EQ(omqk_fo_definable(hered.get(), nullptr, &result), OMQK_OK);
    EXPECT_EQ(result, 0);
    Artifact loop = parse(read_data("loop.tpl"));
    ASSERT_EQ(omqk_fo_definable(loop.get(), nullptr, &result), OMQK_OK);
    EXPECT_EQ(result, 1);
    EXPECT_EQ(omqk_datalog_definable(hered.get(), &result), OMQK_ERR_UNSUPPORTED);
}

TEST(CApi, LimitsAreReported) {
    Artifact q = parse(read_data("example1.omq"));
    Artifact d = parse(read_data("example1.facts"), OMQK_FORMAT_FACTS);
    omqk_limits tight = omqk_limits_default();
    tight.max_models = 0;
    omqk_answers* raw = nullptr;
    EXPECT_EQ(omqk_eval(q.get(), d.get(), OMQK_ENGINE_MSNP, &tight, &raw), OMQK_ERR_LIMIT);
    EXPECT_EQ(raw, nullptr);
}

TEST(CApi, ForbiddenPatterns) {
    Artifact p = parse("colors red blue\nE(p,q).\ncolor(p)=red\ncolor(q)=red\n---\nE(p,q).\ncolor(p)=blue\ncolor(q)=blue\n",
                       OMQK_FORMAT_PATTERNS);
    Artifact triangle = parse("E(a,b). E(b,c). E(c,a).", OMQK_FORMAT_FACTS);
    Artifact path = parse("E(a,b). E(b,c).", OMQK_FORMAT_FACTS);
    int member = -1;
    ASSERT_EQ(omqk_forb_member(p.get(), triangle.get(), nullptr, &member), OMQK_OK);
    EXPECT_EQ(member, 0);
    ASSERT_EQ(omqk_forb_member(p.get(), path.get(), nullptr, &member), OMQK_OK);
    EXPECT_EQ(member, 1);
}

TEST(CApi, ForeignRelationIsRejected) {
    Artifact q = parse(read_data("hered.omq"));
    Artifact d = parse("Unknown(a).", OMQK_FORMAT_FACTS);
    omqk_answers* raw = nullptr;
    EXPECT_EQ(omqk_eval(q.get(), d.get(), OMQK_ENGINE_DDLOG, nullptr, &raw), OMQK_ERR_PARSE);
    EXPECT_NE(std::string(omqk_last_error()), "");
}
