#include "uconvex/io.hpp"

#include <cmath>

namespace uconvex {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

namespace {

Json numbers(const std::vector<double>& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(number(x));
  return arr;
}

}  // namespace

Json to_json(const ConditionReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["verdict"] = to_string(rep.verdict);
  j["margin"] = number(rep.worst_margin);
  j["witness"] = numbers(rep.witness);
  j["greater_side"] = number(rep.greater);
  j["lesser_side"] = number(rep.lesser);
  j["domain"] = rep.domain;
  j["evaluated"] = rep.evaluated;
  j["excluded"] = rep.excluded;
  j["notes"] = rep.notes;
  return j;
}

Json to_json(const Certificate& cert) {
  Json j;
  j["generator"] = cert.generator;
  j["weights"] = numbers(cert.weights);
  j["sub_probability"] = cert.flags.sub_probability;
  j["counting_like"] = cert.flags.counting_like;
  Json pr = Json::array(), ur = Json::array();
  for (auto r : cert.paranorm_routes) pr.push_back(to_string(r));
  for (auto r : cert.uc_routes) ur.push_back(to_string(r));
  j["paranorm_routes"] = pr;
  j["uniform_convexity_routes"] = ur;
  j["notes"] = cert.notes;
  return j;
}

Json to_json(const OracleResult& res) {
  Json j;
  j["r"] = number(res.r);
  j["eps"] = number(res.eps);
  j["worst_midpoint"] = number(res.worst_midpoint);
  j["delta_empirical"] = number(res.delta_hat);
  j["x"] = numbers(res.x);
  j["y"] = numbers(res.y);
  j["samples"] = res.samples;
  j["feasible"] = res.feasible;
  j["seed"] = res.seed;
  j["low_coverage"] = res.low_coverage;
  return j;
}

}  // namespace uconvex
