#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omqkit/core.hpp"
#include "omqkit/dl.hpp"

namespace omqkit {

struct Template {
    RelStructure structure;
    std::vector<std::pair<std::string, std::string>> constants;  // name -> element

    std::vector<std::string> constant_elements() const;
};

struct TemplateFamily {
    Schema schema;
    std::vector<std::string> constant_names;
    std::vector<Template> templates;
    std::vector<std::string> comments;
};

using Homomorphism = std::map<std::string, std::string>;

TemplateFamily parse_templates(const std::string& text);
std::string render_template(const Template& t);
std::string render_templates(const TemplateFamily& f);

// (D, d1..dm) viewed as a pointed structure over adom(D) with constants c1..cm.
Template pointed_instance(const Instance& d, const std::vector<std::string>& tuple,
                          const std::vector<std::string>& constant_names);

std::optional<Homomorphism> find_hom(const Template& src, const Template& tgt);

AnswerSet eval_cocsp(const TemplateFamily& f, const Instance& d);

// Prepares the family once for many evaluations. Templates sharing a structure
// are searched together.
class CocspEvaluator {
public:
    explicit CocspEvaluator(const TemplateFamily& f);
    AnswerSet eval(const Instance& d) const;

private:
    struct Impl;
    Schema schema_;
    std::vector<std::string> constant_names_;
    std::shared_ptr<const Impl> impl_;
};

TemplateFamily aq_omq_to_templates(const OmqQuery& q, const Limits& limits = {});
OmqQuery templates_to_omq(const TemplateFamily& f);

TemplateFamily incomparable_reduce(const TemplateFamily& f);

// Names of the fresh unary relations P_i are reported through `renamed`.
RelStructure collapse_constants(const Template& t, std::vector<std::string>* predicate_names = nullptr);

struct ContainmentResult {
    bool contained = true;
    std::optional<Template> witness;  // failing template of the right-hand family, as a pointed instance
};

ContainmentResult contains(const TemplateFamily& f1, const TemplateFamily& f2);

RelStructure core_of(const RelStructure& b, const Limits& limits = {});
bool fo_definable_core(const RelStructure& b, const Limits& limits = {});
bool fo_definable(const TemplateFamily& f, const Limits& limits = {});

}  // namespace omqkit
