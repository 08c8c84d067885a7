#include "tlsopt/participation/materials.hpp"

#include "tlsopt/error.hpp"

namespace tlsopt {

std::string to_string(Interface i) {
  switch (i) {
    case Interface::MS: return "MS";
    case Interface::MA: return "MA";
    case Interface::SA: return "SA";
  }
  return "?";
}

Interface interface_from_string(const std::string& s) {
  if (s == "MS") return Interface::MS;
  if (s == "MA") return Interface::MA;
  if (s == "SA") return Interface::SA;
  throw ConfigError("unknown interface layer '" + s + "' (expected MS, MA or SA)");
}

void MaterialLayer::validate() const {
  const std::string n = to_string(name);
  if (!(eps_r >= 1.0)) throw ConfigError(n + ": eps_r must be >= 1");
  if (!(thickness_nm > 0.0)) throw ConfigError(n + ": thickness must be > 0");
  if (!(tan_delta >= 0.0)) throw ConfigError(n + ": tan_delta must be >= 0");
}

void MaterialStack::validate() const {
  if (!(eps_substrate >= 1.0)) throw ConfigError("eps_substrate must be >= 1");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (layers[k].name != kInterfaces[k]) throw ConfigError("material stack layers out of order");
    layers[k].validate();
  }
}

MaterialStack material_preset(const std::string& name) {
  MaterialStack s;
  s.preset_name = name;
  s.eps_substrate = 11.7;
  if (name == "simplified") {
    for (auto i : kInterfaces) s.layer(i) = {i, 10.0, 3.0, 1e-3};
  } else if (name == "nb-on-si") {
    s.layer(Interface::MS) = {Interface::MS, 11.7, 2.0, 1.3e-3};
    s.layer(Interface::MA) = {Interface::MA, 33.0, 5.0, 4.7e-2};
    s.layer(Interface::SA) = {Interface::SA, 4.2, 5.0, 2.1e-3};
  } else {
    throw ConfigError("unknown material preset '" + name + "' (known: simplified, nb-on-si)");
  }
  return s;
}

std::vector<std::string> material_preset_names() { return {"simplified", "nb-on-si"}; }

nlohmann::json to_json(const MaterialStack& stack) {
  nlohmann::json layers = nlohmann::json::object();
  for (const auto& l : stack.layers)
    layers[to_string(l.name)] = {{"eps_r", l.eps_r}, {"thickness_nm", l.thickness_nm}, {"tan_delta", l.tan_delta}};
  return {{"preset", stack.preset_name}, {"eps_substrate", stack.eps_substrate}, {"layers", layers}};
}

MaterialStack material_stack_from_json(const nlohmann::json& j) {
  if (j.is_string()) return material_preset(j.get<std::string>());
  MaterialStack s;
  try {
    s.preset_name = j.value("preset", std::string("custom"));
    s.eps_substrate = j.at("eps_substrate").get<double>();
    for (auto i : kInterfaces) {
      const auto& l = j.at("layers").at(to_string(i));
      s.layer(i) = {i, l.at("eps_r").get<double>(), l.at("thickness_nm").get<double>(), l.at("tan_delta").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed material stack: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace tlsopt
