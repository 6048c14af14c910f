#pragma once

#include "omqkit/core.hpp"
#include "omqkit/ddlog.hpp"
#include "omqkit/dl.hpp"
#include "omqkit/msnp.hpp"

namespace omqkit {

// Type-guessing program for an AQ/BAQ (ConQ is reduced first).
Program aq_omq_to_mddlog(const OmqQuery& q, const Limits& limits = {});

enum class MddlogVariant { UnaryConnectedSimple, UnarySimple, BooleanConnectedSimple, BooleanSimple };

// Picks the tightest variant the program satisfies, if any.
std::optional<MddlogVariant> detect_variant(const Program& p);

OmqQuery mddlog_to_aq_omq(const Program& p, MddlogVariant variant);

// Complement axioms plus a UCQ; names of complements start with "Abar_".
OmqQuery mddlog_to_ucq_omq(const Program& p);

AnswerSet adversarial_complement_eval(const OmqQuery& q, const Instance& d, const Limits& limits = {});

MsnpFormula mddlog_to_commsnp(const Program& p);
Program commsnp_to_mddlog(const MsnpFormula& f);

MsnpFormula fgddlog_to_gmsnp(const Program& p);
Program gmsnp_to_fgddlog(const MsnpFormula& f);

MsnpFormula mmsnp2_to_gmsnp(const MsnpFormula& f);
MsnpFormula gmsnp_to_mmsnp2(const MsnpFormula& f, const Limits& limits = {});

}  // namespace omqkit
