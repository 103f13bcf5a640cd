#pragma once

#include <string>

#include <json.hpp>

#include "infonet/fisher.hpp"
#include "infonet/network.hpp"

namespace infonet {

using ordered_json = nlohmann::ordered_json;

// Rounds to 12 significant digits so serialized output is byte-stable.
double round_sig12(double v);
std::string format_sig12(double v);

ordered_json to_json(const TEMatrix& m);
TEMatrix matrix_from_json(const nlohmann::json& j);

ordered_json to_json(const InteractionDiagram& d);
InteractionDiagram diagram_from_json(const nlohmann::json& j);

ordered_json to_json(const FisherCurve& c);
FisherCurve fisher_from_json(const nlohmann::json& j);

// "theta,fisher" rows for plotting.
std::string fisher_csv(const FisherCurve& c);

}  // namespace infonet
