#include "config.hpp"

namespace nlsgs::cli {

namespace {

const char* const kSchema = R"json({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "nlsgs run configuration",
  "type": "object",
  "additionalProperties": false,
  "properties": {
    "problem": {
      "type": "object",
      "additionalProperties": false,
      "required": ["potential"],
      "properties": {
        "alpha": {"type": "number", "default": 1.0, "description": "nonlinearity exponent, 0 < alpha < 2/(d-2)_+"},
        "omega": {"type": "number", "default": 1.0, "description": "frequency; must exceed omega0"},
        "dim": {"type": "integer", "enum": [1, 2, 3], "default": 1},
        "geometry": {"type": "string", "enum": ["full", "tensor2d", "radial"], "default": "full"},
        "domain": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                   "description": "one [a, b] interval per axis (full and tensor2d)"},
        "radius": {"type": "number", "default": 16.0, "description": "ball radius (radial)"},
        "potential": {
          "type": "object",
          "additionalProperties": false,
          "required": ["kind"],
          "properties": {
            "kind": {"type": "string", "enum": ["zero", "delta", "well", "inverse_power", "gaussian", "double_well", "cosine_gaussian"]},
            "sites": {"type": "array", "items": {"type": "object", "additionalProperties": false,
                      "properties": {"center": {"type": "number"}, "strength": {"type": "number"}}},
                      "description": "delta: V = -sum Z_k delta(x - c_k); centers must be grid nodes"},
            "depth": {"type": "number", "description": "well, gaussian, double_well, cosine_gaussian"},
            "interval": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2, "description": "well in 1D"},
            "radius": {"type": "number", "description": "well as a ball (radial)"},
            "gamma": {"type": "number", "description": "inverse_power: V = -gamma |x|^-sigma"},
            "sigma": {"type": "number", "description": "inverse_power, 0 < sigma < min(2, d)"},
            "center": {"type": "number", "description": "double_well: wells at +-center"},
            "kappa": {"type": "number", "default": 0.5, "description": "cosine_gaussian: exp(-kappa |x|^2) envelope"}
          }
        }
      }
    },
    "discretization": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "kind": {"type": "string", "enum": ["fd", "sp", "fe"], "default": "sp"},
        "h": {"type": "number", "default": 0.0625, "description": "mesh size; must divide the domain"},
        "fe_order": {"type": "integer", "enum": [1, 2], "default": 1},
        "lumped": {"type": "boolean", "default": false, "description": "mass lumping, linear fe only"}
      }
    },
    "flow": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "scheme": {"type": "string", "enum": ["bf", "be", "pgf_bf", "ts"], "default": "bf"},
        "tau": {"type": "number", "default": 1.0},
        "epsilon": {"type": "number", "default": 1e-9, "description": "stop when ||phi^{n+1} - phi^n|| / tau <= epsilon"},
        "stop_norm": {"type": "string", "enum": ["max", "l2"], "default": "max"},
        "max_iters": {"type": "integer", "default": 100000},
        "theta": {"type": "number", "default": 0.0, "description": "shift of the modified bf scheme"},
        "record_history": {"type": "boolean", "default": false}
      }
    },
    "seed": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "kind": {"type": "string", "enum": ["gaussian", "file", "exact"], "default": "gaussian"},
        "shift": {"type": "array", "items": {"type": "number"}, "description": "gaussian center"},
        "path": {"type": "string", "description": "field CSV (kind = file)"}
      }
    },
    "outputs": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "directory": {"type": "string", "default": "out"},
        "formats": {"type": "array", "items": {"type": "string", "enum": ["csv", "json"]}, "default": ["csv", "json"]}
      }
    },
    "sweep": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "omegas": {"type": "array", "items": {"type": "number"}},
        "range": {"type": "object", "additionalProperties": false,
                  "properties": {"from": {"type": "number"}, "to": {"type": "number"}, "count": {"type": "integer"},
                                 "spacing": {"type": "string", "enum": ["linear", "log"], "default": "linear"}}},
        "warm_start": {"type": "boolean", "default": true},
        "seed_shifts": {"type": "array", "items": {"type": "array", "items": {"type": "number"}},
                        "description": "extra seeds; the lower-action result is kept per omega"},
        "margin": {"type": "number", "default": 0.001},
        "omega0": {"type": "number", "description": "skip the omega0 solve"},
        "write_fields": {"type": "boolean", "default": false},
        "write_rescaled": {"type": "boolean", "default": false,
                           "description": "1D: also write phi/||phi|| and omega^(-1/2a) phi(x/sqrt(omega)) per omega"}
      }
    },
    "compare": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "case": {"type": "integer", "enum": [1, 2, 3]},
        "runs": {"type": "array", "items": {"type": "object", "additionalProperties": false,
                 "properties": {"scheme": {"type": "string", "enum": ["bf", "be", "pgf_bf", "ts"]},
                                "taus": {"type": "array", "items": {"type": "number"}}}}},
        "max_iters": {"type": "integer", "default": 200000}
      }
    },
    "converge": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "h_list": {"type": "array", "items": {"type": "number"}},
        "reference": {"type": "string", "enum": ["auto", "exact", "self"], "default": "auto"},
        "reference_h": {"type": "number", "description": "self-reference spacing; default min(h)/16"}
      }
    },
    "crosscheck": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "masses": {"type": "array", "items": {"type": "number"}},
        "energy_tau": {"type": "number", "default": 1.0},
        "energy_epsilon": {"type": "number", "default": 1e-9},
        "energy_max_iters": {"type": "integer", "default": 100000},
        "stabilization": {"type": "number", "default": 1.0},
        "seed_shifts": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
      }
    }
  }
})json";

}  // namespace

const nlohmann::json& config_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(kSchema);
  return schema;
}

}  // namespace nlsgs::cli
