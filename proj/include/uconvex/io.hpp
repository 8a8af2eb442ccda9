#pragma once

#include <json.hpp>

#include "uconvex/conditions.hpp"
#include "uconvex/oracle.hpp"
#include "uconvex/report.hpp"

namespace uconvex {

using Json = nlohmann::ordered_json;

/// Non-finite values become null.
Json number(double v);
Json to_json(const ConditionReport& rep);
Json to_json(const Certificate& cert);
Json to_json(const OracleResult& res);

}  // namespace uconvex
