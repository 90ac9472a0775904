#pragma once

#include <nlohmann/json_fwd.hpp>

#include "wsnac/protocol.hpp"

namespace wsnac::serialize {

// Fixture-file forms of the entity states. Integers are decimal strings
// (they exceed 64 bits on realistic curves); byte material is lowercase hex.

nlohmann::json point_to_json(const ecc::CurvePoint& p);
ecc::CurvePoint point_from_json(const nlohmann::json& j);

nlohmann::json deployment_to_json(const proto::Deployment& d);
proto::Deployment deployment_from_json(const nlohmann::json& j);

nlohmann::json card_to_json(const proto::SmartCard& card, const ecc::CurveParams& params);
proto::SmartCard card_from_json(const nlohmann::json& j, const ecc::CurveParams& params);

}  // namespace wsnac::serialize
