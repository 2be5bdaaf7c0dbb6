#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "urnflow/alloc.hpp"
#include "urnflow/cou.hpp"
#include "urnflow/eppf.hpp"
#include "urnflow/measures.hpp"
#include "urnflow/urn.hpp"

namespace urnflow {

using json = nlohmann::json;

// {"kind":"crp1","theta":1.0} / {"kind":"crp2","theta":..,"alpha":..}
// / {"kind":"generic","dust":..,"beta":[a,b]} / {...,"grid":[[p,w],...]}
json model_to_json(const PartitionModel& m);
PartitionModel model_from_json(const json& j);

// {"gamma":2.0,"base":"uniform","atoms":[[loc,mass],...]};
// a grid base is {"base":{"grid":[[loc,w],...]}}
json hazard_to_json(const HazardMeasureSpec& s);
HazardMeasureSpec hazard_from_json(const json& j);

// realization: [[id,loc,"ordinary"|"fixed"],...]; sequence: list of those
json realization_to_json(const BernoulliRealization& x);
BernoulliRealization realization_from_json(const json& j);
json sequence_to_json(const std::vector<BernoulliRealization>& rows);
std::vector<BernoulliRealization> sequence_from_json(const json& j);

// {"sizes":[...],"arrival":[...]}
json urn_state_to_json(const UrnState& u);
UrnState urn_state_from_json(const json& j);

// {"dust":..,"atoms":[[id,loc,weight,"round:3"],...]}
json hazard_realization_to_json(const AtomicHazardRealization& h);
AtomicHazardRealization hazard_realization_from_json(const json& j);

// {"n":2,"counts":{"11":1,"10":3},"atoms":[[id,loc,"11"],...]} (atoms optional)
json allocation_to_json(const FeatureAllocation& a);
FeatureAllocation allocation_from_json(const json& j);

// list of column bitstrings, e.g. ["110","011"]
json matrix_to_json(const LabeledMatrix& m);
LabeledMatrix matrix_from_json(const json& j);

std::string history_to_string(History h, int n);
History history_from_string(const std::string& s);

}  // namespace urnflow
