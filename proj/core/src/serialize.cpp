#include "nlsgs/serialize.hpp"

#include <cstdint>
#include <cstdio>

namespace nlsgs {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

nlohmann::json to_json(const Potential& v) {
  using nlohmann::json;
  json j;
  j["kind"] = potential_name(v);
  std::visit(overloaded{
                 [](const ZeroPotential&) {},
                 [&](const DeltaSum& d) {
                   json sites = json::array();
                   for (const auto& s : d.sites)
                     sites.push_back({{"center", s.center}, {"strength", s.strength}});
                   j["sites"] = sites;
                 },
                 [&](const FiniteWell& w) {
                   j["depth"] = w.depth;
                   std::visit(overloaded{[&](const WellInterval& i) {
                                           j["interval"] = {i.lo, i.hi};
                                         },
                                         [&](const WellBall& b) { j["radius"] = b.radius; }},
                              w.region);
                 },
                 [&](const InversePower& p) {
                   j["gamma"] = p.gamma;
                   j["sigma"] = p.sigma;
                 },
                 [&](const GaussianWell& g) { j["depth"] = g.depth; },
                 [&](const DoubleWellGaussian& g) {
                   j["center"] = g.center;
                   j["depth"] = g.depth;
                 },
                 [&](const TrappedCosineGaussian& g) {
                   j["depth"] = g.depth;
                   j["kappa"] = g.kappa;
                 },
                 [&](const Tabulated& t) { j["samples"] = t.values.size(); },
             },
             v);
  return j;
}

nlohmann::json to_json(const ProblemSpec& spec) {
  nlohmann::json j;
  j["alpha"] = spec.alpha;
  j["omega"] = spec.omega;
  j["dim"] = spec.dim;
  j["geometry"] = to_string(spec.geometry);
  j["potential"] = to_json(spec.potential);
  if (spec.geometry == Geometry::Radial) {
    j["radius"] = spec.radius;
  } else {
    nlohmann::json dom = nlohmann::json::array();
    for (const auto& iv : spec.box) dom.push_back({iv.a, iv.b});
    j["domain"] = dom;
  }
  j["theta"] = spec.theta;
  return j;
}

nlohmann::json to_json(const DiscretizationSpec& disc) {
  nlohmann::json j;
  j["kind"] = to_string(disc.method);
  j["h"] = disc.h;
  if (disc.method == Method::FE) {
    j["fe_order"] = disc.fe_order;
    j["lumped"] = disc.lumped;
  }
  return j;
}

nlohmann::json to_json(const FlowConfig& cfg) {
  return {{"scheme", to_string(cfg.scheme)},       {"tau", cfg.tau},
          {"epsilon", cfg.epsilon},                {"stop_norm", to_string(cfg.stop_norm)},
          {"max_iters", cfg.max_iters},            {"record_history", cfg.record_history}};
}

std::string digest(const nlohmann::json& j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nlsgs
